//! Numeric Stokes moments and the polarization measurement protocol.
//!
//! The Stokes operators are S0 = Nx + Ny, S1 = Nx − Ny, S2 + iS3 = 2 a†x ay;
//! S1..S3 obey the SU(2) algebra [Sj, Sk] = 2i ε_jkl Sl. Second moments are
//! stored symmetrized (½⟨{Sj, Sk}⟩) so the variance of the component along an
//! arbitrary direction n is the quadratic form nᵀ·second·n − (n·mean)².

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::fock::{expectation_poly, Mode, OperatorPoly, OperatorWord, TwoModeFockState};
use crate::polarization::{rotate_basis, PoincareVector, PolarizationAngles};
use crate::C64;

/// Imaginary residue above which a nominally real moment is treated as an
/// internal consistency failure (it signals an operator-word bug, so we fail
/// loudly instead of silently dropping it).
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

fn real_checked(value: C64, what: &str) -> f64 {
    let scale = value.norm().max(1.0);
    assert!(
        value.im.abs() <= IMAG_RESIDUE_TOL * scale,
        "internal consistency: {what} has imaginary residue {:e}",
        value.im
    );
    value.re
}

/// Operator polynomial for S_j, j ∈ {0, 1, 2, 3}.
pub fn stokes_poly(j: usize) -> OperatorPoly {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let nx = OperatorPoly::from_word(one, OperatorWord::number(Mode::X));
    let ny = OperatorPoly::from_word(one, OperatorWord::number(Mode::Y));
    let xy = OperatorPoly::from_word(one, OperatorWord::hop(Mode::X, Mode::Y));
    let yx = OperatorPoly::from_word(one, OperatorWord::hop(Mode::Y, Mode::X));
    match j {
        0 => nx.add(&ny),
        1 => nx.sub(&ny),
        2 => xy.add(&yx),
        3 => xy.sub(&yx).scale(-i),
        _ => panic!("Stokes index out of range: {j}"),
    }
}

/// First moments (⟨S0⟩, ⟨S1⟩, ⟨S2⟩, ⟨S3⟩) of a normalized state.
pub fn stokes_means(state: &TwoModeFockState) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = real_checked(expectation_poly(state, &stokes_poly(j)), "stokes mean");
    }
    out
}

/// First and second Stokes moments of a normalized state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesMoments {
    /// ⟨S0⟩.
    pub mean0: f64,
    /// (⟨S1⟩, ⟨S2⟩, ⟨S3⟩).
    pub mean: [f64; 3],
    /// Symmetrized second moments ½⟨{Sj, Sk}⟩ for j, k ∈ {1, 2, 3}.
    pub second: [[f64; 3]; 3],
    /// ⟨S0²⟩.
    pub mean0_sq: f64,
    /// Variances V1..V3.
    pub variances: [f64; 3],
}

impl StokesMoments {
    /// Compute all moments of a normalized state.
    ///
    /// For j ≠ k a single product expectation ⟨Sj Sk⟩ carries both the
    /// symmetrized part (real) and the commutator (imaginary); the imaginary
    /// part is cross-checked against the SU(2) algebra 2i ε_jkl ⟨Sl⟩.
    pub fn of(state: &TwoModeFockState) -> Self {
        let means4 = stokes_means(state);
        let mean0 = means4[0];
        let mean = [means4[1], means4[2], means4[3]];
        let polys: Vec<OperatorPoly> = (1..=3).map(stokes_poly).collect();
        let mut second = [[0.0; 3]; 3];
        for j in 0..3 {
            for k in j..3 {
                let value = expectation_poly(state, &polys[j].mul(&polys[k]));
                if j == k {
                    second[j][j] = real_checked(value, "stokes square");
                } else {
                    second[j][k] = value.re;
                    second[k][j] = value.re;
                    // Im⟨Sj Sk⟩ = ε_jkl ⟨Sl⟩ for (j,k) cyclic.
                    let l = 3 - j - k;
                    let sign = if (j + 1) % 3 == k { 1.0 } else { -1.0 };
                    let scale = value.norm().max(1.0);
                    assert!(
                        (value.im - sign * mean[l]).abs() <= IMAG_RESIDUE_TOL * scale,
                        "internal consistency: ⟨S{}S{}⟩ commutator part mismatch",
                        j + 1,
                        k + 1
                    );
                }
            }
        }
        let mean0_sq = real_checked(expectation_poly(state, &stokes_poly(0).mul(&stokes_poly(0))), "S0 square");
        let mut variances = [0.0; 3];
        for j in 0..3 {
            variances[j] = second[j][j] - mean[j] * mean[j];
        }
        StokesMoments {
            mean0,
            mean,
            second,
            mean0_sq,
            variances,
        }
    }

    /// ‖⟨S⟩‖² over the vector part (S1, S2, S3).
    pub fn mean_norm_sqr(&self) -> f64 {
        self.mean.iter().map(|m| m * m).sum()
    }

    /// Unit vector along ⟨S⟩, if the mean vector is nonzero.
    pub fn mean_direction(&self) -> Option<PoincareVector> {
        let v = PoincareVector::new(self.mean[0], self.mean[1], self.mean[2]);
        v.unit().ok()
    }

    /// Mean and variance of S_n = n·S for a unit direction n.
    ///
    /// Variance is the quadratic form nᵀ·second·n − mean²; negative round-off
    /// above −1e-10 is clamped to zero.
    pub fn component(&self, n: &PoincareVector) -> Result<(f64, f64)> {
        n.check_unit(1e-9)?;
        let c = n.components();
        let mean: f64 = (0..3).map(|j| c[j] * self.mean[j]).sum();
        let mut quad = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                quad += c[j] * self.second[j][k] * c[k];
            }
        }
        let variance = quad - mean * mean;
        assert!(
            variance >= -1e-10,
            "internal consistency: negative variance {variance:e}"
        );
        Ok((mean, variance.max(0.0)))
    }

    /// Maximum |⟨S_{n⊥}⟩| over directions perpendicular to n:
    /// √(‖⟨S⟩‖² − ⟨S_n⟩²), with negative round-off clamped to zero.
    pub fn perp_bound(&self, n: &PoincareVector) -> Result<f64> {
        n.check_unit(1e-9)?;
        let c = n.components();
        let mean_n: f64 = (0..3).map(|j| c[j] * self.mean[j]).sum();
        let arg = self.mean_norm_sqr() - mean_n * mean_n;
        assert!(
            arg >= -1e-9,
            "internal consistency: perpendicular bound argument {arg:e}"
        );
        Ok(arg.max(0.0).sqrt())
    }
}

/// Convenience wrapper around [`StokesMoments::of`] + [`StokesMoments::component`].
pub fn component_moments(state: &TwoModeFockState, n: &PoincareVector) -> Result<(f64, f64)> {
    StokesMoments::of(state).component(n)
}

/// Convenience wrapper around [`StokesMoments::of`] + [`StokesMoments::perp_bound`].
pub fn perp_bound(state: &TwoModeFockState, n: &PoincareVector) -> Result<f64> {
    StokesMoments::of(state).perp_bound(n)
}

/// Outcome of the three-step measurement protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementDistribution {
    /// Probabilities over integer outcomes of Nx − Ny in the rotated basis,
    /// sorted by outcome.
    pub outcomes: Vec<(i64, f64)>,
    pub mean: f64,
    pub variance: f64,
}

/// Simulate the measurement of S_n for n = n(θ0, φ0): phase-shift the y mode
/// by φ0, rotate the polarization plane by θ0/2, then count Nx − Ny in the
/// rotated basis.
///
/// The distribution sums to one and its mean/variance reproduce the component
/// moments along n(θ0, φ0).
pub fn measure_protocol(
    state: &TwoModeFockState,
    angles0: PolarizationAngles,
) -> MeasurementDistribution {
    let rotated = rotate_basis(state, angles0);
    let mut dist: BTreeMap<i64, f64> = BTreeMap::new();
    for (&(n_x, n_y), amp) in rotated.iter() {
        let outcome = n_x as i64 - n_y as i64;
        *dist.entry(outcome).or_insert(0.0) += amp.norm_sqr();
    }
    let mut mean = 0.0;
    let mut second = 0.0;
    for (&outcome, &p) in &dist {
        mean += outcome as f64 * p;
        second += (outcome * outcome) as f64 * p;
    }
    let variance = (second - mean * mean).max(0.0);
    MeasurementDistribution {
        outcomes: dist.into_iter().collect(),
        mean,
        variance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TwoModeFockState;
    use crate::polarization::{jones_from_angles, polarized_number_state};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn means_of_vacuum_and_fock() {
        assert_eq!(stokes_means(&TwoModeFockState::vacuum()), [0.0; 4]);
        let means = stokes_means(&TwoModeFockState::fock(1, 0));
        assert_abs_diff_eq!(means[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(means[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(means[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(means[3], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn means_of_polarized_state() {
        // N = 8, θ = π/3, φ = 0: (8, 4, 4√3, 0).
        let j = jones_from_angles(PolarizationAngles::new(FRAC_PI_3, 0.0));
        let state = polarized_number_state(8, &j);
        let means = stokes_means(&state);
        assert_abs_diff_eq!(means[0], 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(means[1], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(means[2], 4.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(means[3], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn second_moments_of_number_ket() {
        // |N,0⟩: V1 = 0, V2 = V3 = N.
        let n = 6;
        let m = StokesMoments::of(&TwoModeFockState::fock(n, 0));
        assert_abs_diff_eq!(m.variances[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.variances[1], n as f64, epsilon = 1e-12);
        assert_abs_diff_eq!(m.variances[2], n as f64, epsilon = 1e-12);
    }

    #[test]
    fn anticommutator_closed_form() {
        // N = 8, θ = π/3, φ = 0: ⟨{S1,S2}⟩ = 2·8·7·cos(π/3)sin(π/3) = 28√3.
        let j = jones_from_angles(PolarizationAngles::new(FRAC_PI_3, 0.0));
        let m = StokesMoments::of(&polarized_number_state(8, &j));
        assert_abs_diff_eq!(2.0 * m.second[0][1], 28.0 * 3f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn sum_rule_holds() {
        let state = TwoModeFockState::make_state(&[
            ((0, 2), C64::new(0.3, 0.4)),
            ((1, 1), C64::new(-0.1, 0.9)),
            ((3, 0), C64::new(0.7, 0.0)),
        ])
        .unwrap();
        let m = StokesMoments::of(&state);
        let trace: f64 = (0..3).map(|j| m.second[j][j]).sum();
        assert_abs_diff_eq!(trace, m.mean0_sq + 2.0 * m.mean0, epsilon = 1e-9);
    }

    #[test]
    fn component_along_polarization_axis() {
        let angles = PolarizationAngles::new(1.0, 0.7);
        let j = jones_from_angles(angles);
        let state = polarized_number_state(8, &j);
        let m_dir = crate::polarization::poincare_from_angles(angles);
        let (mean, var) = component_moments(&state, &m_dir).unwrap();
        assert_abs_diff_eq!(mean, 8.0, epsilon = 1e-10);
        assert_abs_diff_eq!(var, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn component_and_bound_tilted() {
        // N = 8, n·m = 1/√2: variance 4, bound 8/√2.
        let angles = PolarizationAngles::new(0.0, 0.0); // m = e1
        let state = polarized_number_state(8, &jones_from_angles(angles));
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let n = PoincareVector::new(inv, inv, 0.0);
        let (mean, var) = component_moments(&state, &n).unwrap();
        assert_abs_diff_eq!(mean, 8.0 * inv, epsilon = 1e-10);
        assert_abs_diff_eq!(var, 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(perp_bound(&state, &n).unwrap(), 8.0 * inv, epsilon = 1e-10);
        // Perpendicular direction: variance N, bound N.
        let (_, var_perp) = component_moments(&state, &PoincareVector::E2).unwrap();
        assert_abs_diff_eq!(var_perp, 8.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            perp_bound(&state, &PoincareVector::E2).unwrap(),
            8.0,
            epsilon = 1e-10
        );
        // Along m: no perpendicular mean left.
        assert_abs_diff_eq!(
            perp_bound(&state, &PoincareVector::E1).unwrap(),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn non_unit_direction_is_domain_error() {
        let state = TwoModeFockState::fock(2, 0);
        let err = component_moments(&state, &PoincareVector::new(0.5, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, crate::Error::Domain(_)));
    }

    #[test]
    fn protocol_point_mass_for_aligned_basis() {
        let n = 4;
        let state = TwoModeFockState::fock(n, 0);
        let dist = measure_protocol(&state, PolarizationAngles::new(0.0, 0.0));
        assert_eq!(dist.outcomes.len(), 1);
        assert_eq!(dist.outcomes[0].0, n as i64);
        assert_abs_diff_eq!(dist.outcomes[0].1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist.variance, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn protocol_single_photon_rotation() {
        let angles = PolarizationAngles::new(FRAC_PI_2, 0.0);
        let state = polarized_number_state(1, &jones_from_angles(angles));
        let dist = measure_protocol(&state, angles);
        assert_eq!(dist.outcomes.len(), 1);
        assert_eq!(dist.outcomes[0].0, 1);
        assert_abs_diff_eq!(dist.mean, 1.0, epsilon = 1e-12);

        // Measured in the unrotated basis the outcomes are ±1 with p = ½.
        let dist = measure_protocol(&state, PolarizationAngles::new(0.0, 0.0));
        assert_eq!(dist.outcomes.len(), 2);
        assert_abs_diff_eq!(dist.outcomes[0].1, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dist.outcomes[1].1, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn protocol_matches_component_moments() {
        let angles = PolarizationAngles::new(1.2, 0.5);
        let state = polarized_number_state(8, &jones_from_angles(angles));
        let angles0 = PolarizationAngles::new(0.8, 2.9);
        let dist = measure_protocol(&state, angles0);
        let n = crate::polarization::poincare_from_angles(angles0);
        let (mean, var) = component_moments(&state, &n).unwrap();
        let total_p: f64 = dist.outcomes.iter().map(|(_, p)| p).sum();
        assert_abs_diff_eq!(total_p, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist.mean, mean, epsilon = 1e-10);
        assert_abs_diff_eq!(dist.variance, var, epsilon = 1e-10);
    }
}
