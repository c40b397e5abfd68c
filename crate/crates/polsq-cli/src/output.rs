//! Output plumbing: stdout-or-file writers, deterministic number formatting,
//! and the shared CSV meta header.

use std::fs::File;
use std::io::{BufWriter, Write};

use crate::CmdError;

/// Bumped whenever any emitted field changes.
pub const SCHEMA_VERSION: &str = "1";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Either the process stdout handed in by the caller or a buffered file.
pub enum Sink<'a> {
    Stdout(&'a mut dyn Write),
    File(BufWriter<File>),
}

impl<'a> Sink<'a> {
    pub fn open(target: &str, stdout: &'a mut dyn Write) -> Result<Self, CmdError> {
        if target == "stdout" || target == "-" {
            Ok(Sink::Stdout(stdout))
        } else {
            let file = File::create(target).map_err(|err| {
                CmdError::usage(format!("cannot create output file {target}: {err}"))
            })?;
            Ok(Sink::File(BufWriter::new(file)))
        }
    }
}

impl Write for Sink<'_> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        match self {
            Sink::Stdout(w) => w.write(buf),
            Sink::File(w) => w.write(buf),
        }
    }

    fn flush(&mut self) -> std::io::Result<()> {
        match self {
            Sink::Stdout(w) => w.flush(),
            Sink::File(w) => w.flush(),
        }
    }
}

/// Shortest representation that parses back to the same f64 (Rust's default
/// Display), locale-free with '.' separator.
pub fn num(v: f64) -> String {
    format!("{v}")
}

/// Comment header common to every CSV output.
pub fn csv_meta(sink: &mut dyn Write, command: &str, fields: &[(&str, String)]) -> std::io::Result<()> {
    write!(
        sink,
        "# polsq {command} schema={SCHEMA_VERSION} version={TOOL_VERSION}"
    )?;
    for (key, value) in fields {
        write!(sink, " {key}={value}")?;
    }
    writeln!(sink)
}

/// Meta object common to every JSON output.
pub fn json_meta(command: &str, fields: &[(&str, serde_json::Value)]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    map.insert("tool".into(), "polsq".into());
    map.insert("version".into(), TOOL_VERSION.into());
    map.insert("schema".into(), SCHEMA_VERSION.into());
    map.insert("command".into(), command.into());
    for (key, value) in fields {
        map.insert((*key).into(), value.clone());
    }
    serde_json::Value::Object(map)
}
