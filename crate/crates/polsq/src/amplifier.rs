//! Numeric evolution under the non-degenerate parametric amplifier.
//!
//! The interaction Hamiltonian is H = g(a†x a†y + ax ay) with standard
//! Schrödinger evolution exp(−iHt); in the Heisenberg picture this phase
//! convention reproduces exactly the mode transform
//! ax(t) = cosh(gt)·ax − i sinh(gt)·a†y (and x ↔ y), which the
//! [`bogoliubov_moment_check`] verifies rather than assumes.
//!
//! The generator conserves nx − ny, so evolution block-diagonalizes over that
//! difference; each block is a real symmetric tridiagonal matrix that is
//! exponentiated exactly (eigendecomposition of the truncated generator).
//! Truncation is controlled by doubling the photon-number headroom until the
//! top-band occupation and the monitored moments both settle. Blocks evolve
//! independently and may run in parallel; results are assembled in block
//! order so the output is bitwise deterministic for a fixed cutoff.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    expectation_poly, Mode, OperatorPoly, OperatorWord, TwoModeFockState,
};
use crate::stokes::StokesMoments;
use crate::C64;

/// Truncation policy for the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffPolicy {
    /// Headroom added above the initial maximum total photon number for the
    /// first attempt; doubled on every retry.
    pub initial_headroom: u32,
    /// Hard ceiling on the total photon number cutoff.
    pub max_total: u32,
    /// Maximum tolerated occupation of the top two total-number levels.
    pub tail_tol: f64,
    /// Maximum tolerated relative change of any monitored moment under a
    /// headroom doubling.
    pub moment_rtol: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy {
            initial_headroom: 8,
            max_total: 512,
            tail_tol: 1e-12,
            moment_rtol: 1e-9,
        }
    }
}

/// Largest supported interaction time; past this the geometric photon growth
/// makes desk-scale truncation hopeless, so the module refuses instead of
/// silently degrading.
pub const GT_MAX: f64 = 2.0;

/// Outcome of a converged evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub state: TwoModeFockState,
    pub gt: f64,
    /// Total-photon-number cutoff of the accepted run.
    pub cutoff_used: u32,
    /// Occupation of the top two total-number levels of the accepted run.
    pub tail_norm: f64,
    /// Maximum relative change of any monitored moment over the last
    /// headroom doubling.
    pub convergence_residual: f64,
}

/// Monitored moments: ⟨S0⟩, ⟨S1..3⟩, V1..3.
fn monitored_moments(state: &TwoModeFockState) -> [f64; 7] {
    let m = StokesMoments::of(state);
    [
        m.mean0, m.mean[0], m.mean[1], m.mean[2], m.variances[0], m.variances[1], m.variances[2],
    ]
}

fn relative_residual(a: &[f64; 7], b: &[f64; 7]) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..7 {
        let scale = a[j].abs().max(b[j].abs()).max(1.0);
        worst = worst.max((a[j] - b[j]).abs() / scale);
    }
    worst
}

/// Occupation of the top two total-photon-number levels at `cutoff`.
fn top_band_mass(state: &TwoModeFockState, cutoff: u32) -> f64 {
    let floor = cutoff.saturating_sub(1);
    state
        .iter()
        .filter(|(&(x, y), _)| x + y >= floor)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Evolve one nx − ny block: basis |n + d⁺, n + d⁻⟩ for n = 0..len, coupled
/// tridiagonally by pair creation with elements √((n+1)(n+|d|+1)).
fn evolve_block(d: i64, input: &[C64], gt: f64) -> Vec<C64> {
    let len = input.len();
    if len == 1 {
        // A 1×1 block has a vanishing generator (pair creation is truncated
        // away entirely); only possible at tiny cutoffs.
        return input.to_vec();
    }
    let abs_d = d.unsigned_abs() as f64;
    let mut h = DMatrix::<f64>::zeros(len, len);
    for n in 0..len - 1 {
        let t = ((n as f64 + 1.0) * (n as f64 + 1.0 + abs_d)).sqrt();
        h[(n, n + 1)] = t;
        h[(n + 1, n)] = t;
    }
    let eig = h.symmetric_eigen();
    let re = DVector::<f64>::from_iterator(len, input.iter().map(|a| a.re));
    let im = DVector::<f64>::from_iterator(len, input.iter().map(|a| a.im));
    let wre = eig.eigenvectors.transpose() * re;
    let wim = eig.eigenvectors.transpose() * im;
    // Apply exp(−i gt λ) per eigenmode.
    let mut phased_re = DVector::<f64>::zeros(len);
    let mut phased_im = DVector::<f64>::zeros(len);
    for k in 0..len {
        let phase = -gt * eig.eigenvalues[k];
        let (sin, cos) = phase.sin_cos();
        phased_re[k] = wre[k] * cos - wim[k] * sin;
        phased_im[k] = wre[k] * sin + wim[k] * cos;
    }
    let out_re = &eig.eigenvectors * phased_re;
    let out_im = &eig.eigenvectors * phased_im;
    (0..len).map(|n| C64::new(out_re[n], out_im[n])).collect()
}

fn block_key(d: i64, n: usize) -> (u32, u32) {
    if d >= 0 {
        (n as u32 + d as u32, n as u32)
    } else {
        (n as u32, n as u32 + (-d) as u32)
    }
}

/// Single evolution pass at a fixed total-photon cutoff.
fn evolve_at_cutoff(initial: &TwoModeFockState, gt: f64, cutoff: u32) -> TwoModeFockState {
    // Gather the initial amplitudes into nx − ny blocks. Only blocks present
    // in the initial state can ever be populated.
    let mut blocks: BTreeMap<i64, Vec<C64>> = BTreeMap::new();
    for (&(n_x, n_y), &amp) in initial.iter() {
        let d = n_x as i64 - n_y as i64;
        let len = ((cutoff as i64 - d.abs()) / 2 + 1).max(1) as usize;
        let vec = blocks.entry(d).or_insert_with(|| vec![C64::new(0.0, 0.0); len]);
        let n = n_x.min(n_y) as usize;
        vec[n] = amp;
    }
    let block_list: Vec<(i64, Vec<C64>)> = blocks.into_iter().collect();
    let evolved = crate::exec::map_ordered(&block_list, |(d, input)| {
        (*d, evolve_block(*d, input, gt))
    });
    let mut amps: BTreeMap<(u32, u32), C64> = BTreeMap::new();
    for (d, values) in evolved {
        for (n, amp) in values.into_iter().enumerate() {
            if amp.norm() >= crate::PRUNE_THRESHOLD {
                amps.insert(block_key(d, n), amp);
            }
        }
    }
    TwoModeFockState::from_map(amps)
}

/// Evolve `initial` for interaction time `gt` under the pair-creation
/// Hamiltonian, with the truncation controlled by `policy`.
///
/// The conserved difference ⟨S1⟩ is untouched by construction; ⟨S0⟩ grows as
/// (N+1)cosh(2gt) − 1 for an initial fixed-N state.
pub fn evolve(
    initial: &TwoModeFockState,
    gt: f64,
    policy: &CutoffPolicy,
) -> Result<EvolutionResult> {
    if !gt.is_finite() || gt < 0.0 || gt > GT_MAX {
        return Err(Error::domain(format!(
            "gt must lie in [0, {GT_MAX}], got {gt}"
        )));
    }
    if gt == 0.0 {
        return Ok(EvolutionResult {
            state: initial.clone(),
            gt,
            cutoff_used: initial.max_total(),
            tail_norm: 0.0,
            convergence_residual: 0.0,
        });
    }
    let base = initial.max_total();
    let mut headroom = policy.initial_headroom.max(2);
    let mut previous: Option<(u32, TwoModeFockState, [f64; 7], f64)> = None;
    loop {
        let cutoff = base + headroom;
        if cutoff > policy.max_total {
            let (tail, residual) = previous
                .map(|(_, _, _, t)| (t, f64::NAN))
                .unwrap_or((f64::NAN, f64::NAN));
            return Err(Error::CutoffExhausted {
                max_total: policy.max_total,
                tail,
                tail_tol: policy.tail_tol,
                residual,
                rtol: policy.moment_rtol,
            });
        }
        let state = evolve_at_cutoff(initial, gt, cutoff);
        let tail = top_band_mass(&state, cutoff);
        let moments = monitored_moments(&state);
        if let Some((_, _, prev_moments, _)) = &previous {
            let residual = relative_residual(prev_moments, &moments);
            if tail < policy.tail_tol && residual < policy.moment_rtol {
                return Ok(EvolutionResult {
                    state,
                    gt,
                    cutoff_used: cutoff,
                    tail_norm: tail,
                    convergence_residual: residual,
                });
            }
        }
        previous = Some((cutoff, state, moments, tail));
        headroom *= 2;
    }
}

/// First and second Stokes moments in compact form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesSummary {
    pub mean0: f64,
    pub means: [f64; 3],
    pub variances: [f64; 3],
}

impl StokesSummary {
    pub fn of(state: &TwoModeFockState) -> Self {
        let m = StokesMoments::of(state);
        StokesSummary {
            mean0: m.mean0,
            means: m.mean,
            variances: m.variances,
        }
    }
}

/// Discrepancy table between the Schrödinger-picture evolution and the
/// Heisenberg-picture mode transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovCheck {
    /// Moments from numeric evolution followed by moment extraction.
    pub numeric: StokesSummary,
    /// Moments from expectation values of the transformed operator
    /// polynomials in the initial state.
    pub heisenberg: StokesSummary,
    /// Elementwise absolute differences.
    pub diff: StokesSummary,
    pub max_abs_diff: f64,
}

/// Heisenberg-picture Stokes polynomials at interaction time gt, expanded
/// from ax(t) = c·ax − i·s·a†y, ay(t) = c·ay − i·s·a†x.
pub fn heisenberg_stokes_polys(gt: f64) -> [OperatorPoly; 4] {
    let c = C64::new(gt.cosh(), 0.0);
    let mis = C64::new(0.0, -gt.sinh()); // −i sinh(gt)
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let ax = OperatorPoly::from_word(c, OperatorWord::annihilate(Mode::X)).add(
        &OperatorPoly::from_word(mis, OperatorWord::create(Mode::Y)),
    );
    let ay = OperatorPoly::from_word(c, OperatorWord::annihilate(Mode::Y)).add(
        &OperatorPoly::from_word(mis, OperatorWord::create(Mode::X)),
    );
    let axd = ax.adjoint();
    let ayd = ay.adjoint();
    let nx = axd.mul(&ax);
    let ny = ayd.mul(&ay);
    let xy = axd.mul(&ay);
    let yx = ayd.mul(&ax);
    [
        nx.add(&ny),
        nx.sub(&ny),
        xy.add(&yx).scale(one),
        xy.sub(&yx).scale(-i),
    ]
}

/// Compute moments of the evolved state two independent ways and return the
/// elementwise differences: (a) numeric evolution plus moment extraction,
/// (b) expectation of the Heisenberg-transformed Stokes polynomials in the
/// initial state.
pub fn bogoliubov_moment_check(
    initial: &TwoModeFockState,
    gt: f64,
    policy: &CutoffPolicy,
) -> Result<BogoliubovCheck> {
    let evolved = evolve(initial, gt, policy)?;
    let numeric = StokesSummary::of(&evolved.state);

    let polys = heisenberg_stokes_polys(gt);
    let real_part = |value: C64, what: &str| -> f64 {
        let scale = value.norm().max(1.0);
        assert!(
            value.im.abs() <= 1e-10 * scale,
            "internal consistency: {what} has imaginary residue {:e}",
            value.im
        );
        value.re
    };
    let mean0 = real_part(expectation_poly(initial, &polys[0]), "heisenberg S0");
    let mut means = [0.0; 3];
    let mut variances = [0.0; 3];
    for j in 0..3 {
        let poly = &polys[j + 1];
        let mean = real_part(expectation_poly(initial, poly), "heisenberg mean");
        let sq = real_part(expectation_poly(initial, &poly.mul(poly)), "heisenberg square");
        means[j] = mean;
        variances[j] = sq - mean * mean;
    }
    let heisenberg = StokesSummary {
        mean0,
        means,
        variances,
    };
    let diff = StokesSummary {
        mean0: (numeric.mean0 - heisenberg.mean0).abs(),
        means: [
            (numeric.means[0] - heisenberg.means[0]).abs(),
            (numeric.means[1] - heisenberg.means[1]).abs(),
            (numeric.means[2] - heisenberg.means[2]).abs(),
        ],
        variances: [
            (numeric.variances[0] - heisenberg.variances[0]).abs(),
            (numeric.variances[1] - heisenberg.variances[1]).abs(),
            (numeric.variances[2] - heisenberg.variances[2]).abs(),
        ],
    };
    let max_abs_diff = diff
        .means
        .iter()
        .chain(diff.variances.iter())
        .chain(std::iter::once(&diff.mean0))
        .fold(0.0f64, |acc, &v| acc.max(v));
    Ok(BogoliubovCheck {
        numeric,
        heisenberg,
        diff,
        max_abs_diff,
    })
}

/// Numeric squeezing factor along a direction for the evolved state, the
/// oracle column of the figure sweeps.
pub fn evolved_factor(
    initial: &TwoModeFockState,
    gt: f64,
    n: &crate::polarization::PoincareVector,
    policy: &CutoffPolicy,
) -> Result<crate::squeezing::SqueezingFactor> {
    let evolved = evolve(initial, gt, policy)?;
    crate::squeezing::general_factor(&evolved.state, n)
}
