//! `polsq verify` — closed-form-versus-oracle adjudication with exit code 0
//! on pass, 1 on any tolerance failure.

use std::io::Write;

use polsq::verify::{run_verify, Verdict, VerifySpec};

use crate::output::{csv_meta, json_meta, num, Sink};
use crate::{CmdError, Format, VerifyArgs, EXIT_OK, EXIT_VERIFY_FAILED};

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Printed => "printed",
        Verdict::Corrected => "corrected",
        Verdict::Both => "both",
        Verdict::Neither => "neither",
    }
}

pub fn run(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, CmdError> {
    if args.samples == 0 {
        return Err(CmdError::usage("--samples must be at least 1"));
    }
    let spec = VerifySpec::new(args.seed, args.samples);
    let report = run_verify(&spec)?;

    let mut sink = Sink::open(&args.out, stdout)?;
    match args.format {
        Format::Csv => {
            csv_meta(
                &mut sink,
                "verify",
                &[
                    ("seed", args.seed.to_string()),
                    ("samples", args.samples.to_string()),
                    ("tol", format!("{:e}", spec.tol)),
                ],
            )?;
            writeln!(
                sink,
                "equation,samples,printed,corrected,oracle,max_abs_diff_printed,max_abs_diff_corrected,verdict"
            )?;
            for row in &report.rows {
                writeln!(
                    sink,
                    "{},{},{},{},{},{},{},{}",
                    row.equation,
                    row.samples,
                    num(row.printed),
                    row.corrected.map(num).unwrap_or_else(|| "na".into()),
                    num(row.oracle),
                    num(row.max_diff_printed),
                    row.max_diff_corrected
                        .map(num)
                        .unwrap_or_else(|| "na".into()),
                    verdict_str(row.verdict)
                )?;
            }
            writeln!(sink, "# evolution_failures={}", report.evolution_failures)?;
            writeln!(sink, "# overall={}", if report.pass { "pass" } else { "fail" })?;
        }
        Format::Json => {
            let meta = json_meta(
                "verify",
                &[
                    ("seed", args.seed.into()),
                    ("samples", args.samples.into()),
                    ("tol", spec.tol.into()),
                ],
            );
            let doc = serde_json::json!({
                "meta": meta,
                "report": serde_json::to_value(&report).expect("report serializes"),
            });
            serde_json::to_writer(&mut sink, &doc)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
