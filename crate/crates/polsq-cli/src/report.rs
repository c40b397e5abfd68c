//! `polsq report` — per-direction squeezing factors plus per-axis criteria.

use std::io::Write;

use polsq::polarization::{jones_from_angles, polarized_number_state, PoincareVector, PolarizationAngles};
use polsq::squeezing::full_report;

use crate::output::{csv_meta, json_meta, num, Sink};
use crate::{check_angles, CmdError, Format, ReportArgs, EXIT_OK};

fn parse_grid(spec: &str) -> Result<(usize, usize), CmdError> {
    let (bands, lons) = spec
        .split_once(['x', 'X'])
        .ok_or_else(|| CmdError::usage(format!("--grid expects BANDSxLONS, got {spec}")))?;
    let bands: usize = bands
        .parse()
        .map_err(|_| CmdError::usage(format!("bad band count in --grid {spec}")))?;
    let lons: usize = lons
        .parse()
        .map_err(|_| CmdError::usage(format!("bad longitude count in --grid {spec}")))?;
    if bands == 0 || lons == 0 {
        return Err(CmdError::usage("--grid resolution must be positive"));
    }
    Ok((bands, lons))
}

fn parse_direction(spec: &str) -> Result<PoincareVector, CmdError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(CmdError::usage(format!("--dir expects m1,m2,m3, got {spec}")));
    }
    let mut c = [0.0; 3];
    for (slot, part) in c.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| CmdError::usage(format!("bad component in --dir {spec}")))?;
    }
    PoincareVector::new(c[0], c[1], c[2])
        .unit()
        .map_err(|_| CmdError::usage(format!("--dir {spec} has zero length")))
}

pub fn run(args: &ReportArgs, stdout: &mut dyn Write) -> Result<i32, CmdError> {
    check_angles(args.theta, args.phi)?;
    let (bands, lons) = parse_grid(&args.grid)?;
    let mut directions = polsq::sphere::equal_area_grid(bands, lons);
    for spec in &args.dir {
        directions.push(parse_direction(spec)?);
    }
    let angles = PolarizationAngles::new(args.theta, args.phi);
    let state = polarized_number_state(args.n, &jones_from_angles(angles));
    let report = full_report(&state, &directions)?;

    let mut sink = Sink::open(&args.out, stdout)?;
    match args.format {
        Format::Json => {
            let meta = json_meta(
                "report",
                &[
                    ("n", args.n.into()),
                    ("theta", args.theta.into()),
                    ("phi", args.phi.into()),
                    ("grid", args.grid.clone().into()),
                    ("seed", args.seed.into()),
                ],
            );
            let doc = serde_json::json!({
                "meta": meta,
                "report": serde_json::to_value(&report).expect("report serializes"),
            });
            serde_json::to_writer(&mut sink, &doc)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            csv_meta(
                &mut sink,
                "report",
                &[
                    ("n", args.n.to_string()),
                    ("theta", num(args.theta)),
                    ("phi", num(args.phi)),
                    ("grid", args.grid.clone()),
                    ("seed", args.seed.to_string()),
                ],
            )?;
            for v in report.chirkin.iter().chain(report.heersink.iter()) {
                writeln!(
                    sink,
                    "# criterion {:?} {:?} lhs={} rhs={} satisfied={}",
                    v.criterion,
                    v.inputs,
                    num(v.lhs),
                    num(v.rhs),
                    v.satisfied
                )?;
            }
            writeln!(sink, "n1,n2,n3,n_dot_m,mean_s0,variance,bound,factor,degree,squeezed")?;
            for f in &report.directions {
                let ndotm = report
                    .mean_direction
                    .as_ref()
                    .map(|m| num(f.direction.dot(m)))
                    .unwrap_or_else(|| "na".into());
                let c = f.direction.components();
                writeln!(
                    sink,
                    "{},{},{},{},{},{},{},{},{},{}",
                    num(c[0]),
                    num(c[1]),
                    num(c[2]),
                    ndotm,
                    num(report.mean0),
                    num(f.variance),
                    num(f.bound),
                    f.factor,
                    f.degree.map(num).unwrap_or_else(|| "na".into()),
                    f.squeezed
                )?;
            }
            writeln!(
                sink,
                "# summary total={} squeezed={} not_squeezed={} undefined={} divergent={} band_total={} band_squeezed={}",
                report.summary.total,
                report.summary.squeezed,
                report.summary.not_squeezed,
                report.summary.undefined,
                report.summary.divergent,
                report.summary.band_total,
                report.summary.band_squeezed
            )?;
        }
    }
    sink.flush()?;
    Ok(EXIT_OK)
}
