//! `polsq measure` — outcome distribution of the measurement protocol as CSV
//! with mean/variance footer rows.

use std::io::Write;

use polsq::polarization::{jones_from_angles, polarized_number_state, PolarizationAngles};
use polsq::stokes::measure_protocol;

use crate::output::{csv_meta, num, Sink};
use crate::{check_angles, CmdError, MeasureArgs, EXIT_OK};

pub fn run(args: &MeasureArgs, stdout: &mut dyn Write) -> Result<i32, CmdError> {
    check_angles(args.theta, args.phi)?;
    check_angles(args.theta0, args.phi0)?;
    let angles = PolarizationAngles::new(args.theta, args.phi);
    let state = polarized_number_state(args.n, &jones_from_angles(angles));
    let dist = measure_protocol(&state, PolarizationAngles::new(args.theta0, args.phi0));

    let mut sink = Sink::open(&args.out, stdout)?;
    csv_meta(
        &mut sink,
        "measure",
        &[
            ("n", args.n.to_string()),
            ("theta", num(args.theta)),
            ("phi", num(args.phi)),
            ("theta0", num(args.theta0)),
            ("phi0", num(args.phi0)),
        ],
    )?;
    writeln!(sink, "outcome,probability")?;
    for (outcome, p) in &dist.outcomes {
        writeln!(sink, "{},{}", outcome, num(*p))?;
    }
    writeln!(sink, "mean,{}", num(dist.mean))?;
    writeln!(sink, "variance,{}", num(dist.variance))?;
    sink.flush()?;
    Ok(EXIT_OK)
}
