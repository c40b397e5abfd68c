//! `polsq fig` — θ-sweep CSV of the amplified S2 factor: closed-form columns
//! next to the numeric oracle.

use std::io::Write;

use polsq::amplifier::CutoffPolicy;
use polsq::sweep::{fig_rows, FigSpec};

use crate::output::{csv_meta, num, Sink};
use crate::{check_gt, CmdError, FigArgs, VariantArg, EXIT_OK};

pub fn run(args: &FigArgs, stdout: &mut dyn Write) -> Result<i32, CmdError> {
    if !(args.figure == 1 || args.figure == 2) {
        return Err(CmdError::usage(format!(
            "figure must be 1 or 2, got {}",
            args.figure
        )));
    }
    if args.points < 2 {
        return Err(CmdError::usage("--points must be at least 2"));
    }
    check_gt(args.gt)?;
    let spec = FigSpec {
        figure: args.figure,
        n: args.n,
        gt: args.gt,
        points: args.points,
    };
    let policy = CutoffPolicy::default();
    let rows = fig_rows(&spec, &policy)?;

    let mut sink = Sink::open(&args.out, stdout)?;
    let variant = match args.variant {
        VariantArg::Printed31 => "printed31",
        VariantArg::Printed32 => "printed32",
        VariantArg::Both => "both",
    };
    csv_meta(
        &mut sink,
        "fig",
        &[
            ("figure", args.figure.to_string()),
            ("n", args.n.to_string()),
            ("gt", num(args.gt)),
            ("points", args.points.to_string()),
            ("variant", variant.to_string()),
            ("seed", args.seed.to_string()),
            ("tail_tol", format!("{:e}", policy.tail_tol)),
            ("moment_rtol", format!("{:e}", policy.moment_rtol)),
        ],
    )?;
    match args.variant {
        VariantArg::Both => {
            writeln!(
                sink,
                "theta,factor_closed_form_printed31,factor_closed_form_variant32,factor_oracle"
            )?;
            for row in &rows {
                writeln!(
                    sink,
                    "{},{},{},{}",
                    num(row.theta),
                    row.printed31,
                    row.printed32,
                    row.oracle
                )?;
            }
        }
        VariantArg::Printed31 => {
            writeln!(sink, "theta,factor_closed_form_printed31,factor_oracle")?;
            for row in &rows {
                writeln!(sink, "{},{},{}", num(row.theta), row.printed31, row.oracle)?;
            }
        }
        VariantArg::Printed32 => {
            writeln!(sink, "theta,factor_closed_form_variant32,factor_oracle")?;
            for row in &rows {
                writeln!(sink, "{},{},{}", num(row.theta), row.printed32, row.oracle)?;
            }
        }
    }
    sink.flush()?;
    Ok(EXIT_OK)
}
