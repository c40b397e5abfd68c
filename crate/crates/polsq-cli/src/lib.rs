//! Command-line front door: squeezing reports, figure sweeps, closed-form
//! verification, measurement-protocol distributions, and raw amplifier
//! moment dumps, emitted as diffable CSV or JSON.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3
//! numeric-contract failure (convergence gates).

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod output;

mod amplify;
mod fig;
mod measure;
mod report;
mod verify_cmd;

pub use output::SCHEMA_VERSION;

/// Default seed, printed in every output header.
pub const DEFAULT_SEED: u64 = 1729;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "polsq",
    version,
    about = "Polarization squeezing of two-mode Fock states: reports, sweeps, verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-direction squeezing report for a polarized N-photon state.
    Report(ReportArgs),
    /// θ-sweep of the amplified S2 squeezing factor (figure reproduction).
    Fig(FigArgs),
    /// Diff the closed-form expressions against the numeric oracle.
    Verify(VerifyArgs),
    /// Outcome distribution of the phase-shift/rotate/count protocol.
    Measure(MeasureArgs),
    /// Raw Stokes moments of an amplified polarized state.
    Amplify(AmplifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Printed31,
    Printed32,
    Both,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Photon number of the polarized state.
    #[arg(long, default_value_t = 8)]
    pub n: u32,
    /// Polar angle θ of the polarization (radians).
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    /// Azimuth φ of the polarization (radians).
    #[arg(long, default_value_t = 0.7)]
    pub phi: f64,
    /// Equal-area sphere grid as BANDSxLONGITUDES.
    #[arg(long, default_value = "20x40")]
    pub grid: String,
    /// Extra direction(s) "m1,m2,m3" appended to the grid (normalized).
    #[arg(long)]
    pub dir: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output path, or "stdout".
    #[arg(long, default_value = "stdout")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct FigArgs {
    /// Figure number: 1 (φ = 0) or 2 (φ = π/2).
    pub figure: u8,
    #[arg(long, default_value_t = 8)]
    pub n: u32,
    /// Interaction time gt ∈ [0, 2].
    #[arg(long, default_value_t = 0.1)]
    pub gt: f64,
    /// Number of θ samples on (0, π/2), endpoints excluded by half a step.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Which closed-form column(s) to emit next to the oracle.
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "stdout")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of random (N, θ, φ, gt) tuples.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value = "stdout")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Polar angle of the measured Stokes direction.
    #[arg(long, default_value_t = 0.0)]
    pub theta0: f64,
    /// Azimuth of the measured Stokes direction.
    #[arg(long, default_value_t = 0.0)]
    pub phi0: f64,
    #[arg(long, default_value = "stdout")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct AmplifyArgs {
    #[arg(long, default_value_t = 8)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Interaction time gt ∈ [0, 2].
    #[arg(long, default_value_t = 0.1)]
    pub gt: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value = "stdout")]
    pub out: String,
}

/// A usage problem (exit 2) or a numeric-contract failure (exit 3), with the
/// message for stderr.
#[derive(Debug)]
pub struct CmdError {
    pub exit: i32,
    pub message: String,
}

impl CmdError {
    pub fn usage(message: impl Into<String>) -> Self {
        CmdError {
            exit: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CmdError {
            exit: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl From<polsq::Error> for CmdError {
    fn from(err: polsq::Error) -> Self {
        match err {
            polsq::Error::Domain(_) | polsq::Error::DegenerateState => {
                CmdError::usage(err.to_string())
            }
            polsq::Error::CutoffTooSmall { .. } | polsq::Error::CutoffExhausted { .. } => {
                CmdError::numeric(err.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(err: std::io::Error) -> Self {
        CmdError {
            exit: EXIT_NUMERIC,
            message: format!("io error: {err}"),
        }
    }
}

impl From<serde_json::Error> for CmdError {
    fn from(err: serde_json::Error) -> Self {
        CmdError {
            exit: EXIT_NUMERIC,
            message: format!("serialization error: {err}"),
        }
    }
}

fn check_angles(theta: f64, phi: f64) -> Result<(), CmdError> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(CmdError::usage("angles must be finite"));
    }
    Ok(())
}

fn check_gt(gt: f64) -> Result<(), CmdError> {
    if !gt.is_finite() || gt < 0.0 || gt > polsq::amplifier::GT_MAX {
        return Err(CmdError::usage(format!(
            "--gt must lie in [0, {}], got {gt}",
            polsq::amplifier::GT_MAX
        )));
    }
    Ok(())
}

/// Parse arguments and execute, writing stdout-bound output to `out`.
/// Returns the process exit code; errors go to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{err}");
                return EXIT_OK;
            }
            eprintln!("{err}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Report(args) => report::run(&args, out),
        Command::Fig(args) => fig::run(&args, out),
        Command::Verify(args) => verify_cmd::run(&args, out),
        Command::Measure(args) => measure::run(&args, out),
        Command::Amplify(args) => amplify::run(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("polsq: {}", err.message);
            err.exit
        }
    }
}
