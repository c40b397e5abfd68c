//! θ-sweeps of the amplified squeezing factor, the engine behind the figure
//! reproduction.
//!
//! Sweep points are independent: each evolves its own initial state and
//! extracts the factor along S2, so with the `parallel` feature the loop is
//! data-parallel. Rows are assembled in index order either way.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::amplifier::{evolved_factor, CutoffPolicy};
use crate::closed_form::{amp_factor_s2_cf, AmplifierParams, S2Variant};
use crate::error::{Error, Result};
use crate::polarization::{jones_from_angles, polarized_number_state, PoincareVector, PolarizationAngles};
use crate::squeezing::FactorValue;

/// A figure sweep: θ over (0, π/2) with endpoints excluded by half a step,
/// φ fixed by the figure number (1 → 0, 2 → π/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigSpec {
    pub figure: u8,
    pub n: u32,
    pub gt: f64,
    pub points: usize,
}

impl FigSpec {
    pub fn phi(&self) -> Result<f64> {
        match self.figure {
            1 => Ok(0.0),
            2 => Ok(FRAC_PI_2),
            other => Err(Error::domain(format!("figure must be 1 or 2, got {other}"))),
        }
    }

    pub fn thetas(&self) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::domain("sweep needs at least 2 points"));
        }
        let step = FRAC_PI_2 / self.points as f64;
        Ok((0..self.points)
            .map(|i| (i as f64 + 0.5) * step)
            .collect())
    }
}

/// One sweep sample: both closed-form variants plus the numeric oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigRow {
    pub theta: f64,
    pub printed31: FactorValue,
    pub printed32: FactorValue,
    pub oracle: FactorValue,
}

fn fig_row(spec: &FigSpec, phi: f64, theta: f64, policy: &CutoffPolicy) -> Result<FigRow> {
    let angles = PolarizationAngles::new(theta, phi);
    let params = AmplifierParams::new(spec.gt)?;
    let printed31 = amp_factor_s2_cf(spec.n, angles, &params, S2Variant::Printed31);
    let printed32 = amp_factor_s2_cf(spec.n, angles, &params, S2Variant::Printed32);
    let initial = polarized_number_state(spec.n, &jones_from_angles(angles));
    let oracle = evolved_factor(&initial, spec.gt, &PoincareVector::E2, policy)?.factor;
    Ok(FigRow {
        theta,
        printed31,
        printed32,
        oracle,
    })
}

/// Evaluate the sweep, parallel when the `parallel` feature is enabled.
pub fn fig_rows(spec: &FigSpec, policy: &CutoffPolicy) -> Result<Vec<FigRow>> {
    let phi = spec.phi()?;
    let thetas = spec.thetas()?;
    crate::exec::map_ordered(&thetas, |&theta| fig_row(spec, phi, theta, policy))
        .into_iter()
        .collect()
}

/// Sequential reference path for the same sweep.
pub fn fig_rows_seq(spec: &FigSpec, policy: &CutoffPolicy) -> Result<Vec<FigRow>> {
    let phi = spec.phi()?;
    let thetas = spec.thetas()?;
    crate::exec::map_ordered_seq(&thetas, |&theta| fig_row(spec, phi, theta, policy))
        .into_iter()
        .collect()
}
