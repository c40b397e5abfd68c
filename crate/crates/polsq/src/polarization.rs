//! Polarization parameterizations and state builders.
//!
//! A pure polarization mode is the complex unit vector
//! `ε = (cos(θ/2), e^{iφ} sin(θ/2))`; its Poincaré image is the real unit
//! vector `m = (cosθ, sinθ cosφ, sinθ sinφ)`. The global phase convention is
//! fixed by keeping `ε_x` real and non-negative with the phase on `ε_y` only.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::TwoModeFockState;
use crate::C64;

/// Polar/azimuthal angle pair with θ ∈ [0, π] and φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizationAngles {
    theta: f64,
    phi: f64,
}

/// How out-of-range inputs were brought back into the canonical ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct AngleReduction {
    /// θ was folded back into [0, π] (antipodal fold adds π to φ).
    pub theta_folded: bool,
    /// φ was wrapped modulo 2π.
    pub phi_wrapped: bool,
}

impl PolarizationAngles {
    /// Canonicalize angles, reporting what was adjusted.
    ///
    /// The reduction preserves the point on the sphere: θ is wrapped into
    /// [0, 2π) first, and θ > π folds to (2π − θ, φ + π).
    pub fn reduce(theta: f64, phi: f64) -> (Self, AngleReduction) {
        assert!(
            theta.is_finite() && phi.is_finite(),
            "polarization angles must be finite"
        );
        let mut report = AngleReduction::default();
        let two_pi = 2.0 * PI;
        let mut theta = theta.rem_euclid(two_pi);
        let mut phi = phi;
        if theta != theta.clamp(0.0, PI) {
            theta = two_pi - theta;
            phi += PI;
            report.theta_folded = true;
        }
        let wrapped = phi.rem_euclid(two_pi);
        if wrapped != phi {
            report.phi_wrapped = true;
            phi = wrapped;
        }
        (PolarizationAngles { theta, phi }, report)
    }

    pub fn new(theta: f64, phi: f64) -> Self {
        Self::reduce(theta, phi).0
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Complex unit 2-vector describing a pure polarization mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    pub eps_x: C64,
    pub eps_y: C64,
}

impl JonesVector {
    /// Build from raw components, normalizing; zero input is degenerate.
    pub fn new(eps_x: C64, eps_y: C64) -> Result<Self> {
        let norm = (eps_x.norm_sqr() + eps_y.norm_sqr()).sqrt();
        if norm <= crate::PRUNE_THRESHOLD {
            return Err(Error::DegenerateState);
        }
        Ok(JonesVector {
            eps_x: eps_x / norm,
            eps_y: eps_y / norm,
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.eps_x.norm_sqr() + self.eps_y.norm_sqr()
    }

    /// Hermitian inner product ⟨self, other⟩ (conjugate on self).
    pub fn dot(&self, other: &JonesVector) -> C64 {
        self.eps_x.conj() * other.eps_x + self.eps_y.conj() * other.eps_y
    }

    /// Poincaré image: m1 = |εx|² − |εy|², m2 + i m3 = 2 εx* εy.
    pub fn poincare(&self) -> PoincareVector {
        let cross = 2.0 * self.eps_x.conj() * self.eps_y;
        PoincareVector::new(
            self.eps_x.norm_sqr() - self.eps_y.norm_sqr(),
            cross.re,
            cross.im,
        )
    }
}

/// Real unit 3-vector on the Poincaré sphere.
///
/// Component 1 lies along the S1 axis, so a state with angles (θ, φ) maps to
/// (cosθ, sinθ cosφ, sinθ sinφ). The same type carries generic Stokes
/// directions `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareVector([f64; 3]);

impl PoincareVector {
    pub const E1: PoincareVector = PoincareVector([1.0, 0.0, 0.0]);
    pub const E2: PoincareVector = PoincareVector([0.0, 1.0, 0.0]);
    pub const E3: PoincareVector = PoincareVector([0.0, 0.0, 1.0]);

    pub fn new(m1: f64, m2: f64, m3: f64) -> Self {
        PoincareVector([m1, m2, m3])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn m1(&self) -> f64 {
        self.0[0]
    }

    pub fn m2(&self) -> f64 {
        self.0[1]
    }

    pub fn m3(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &PoincareVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn neg(&self) -> Self {
        PoincareVector([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn scaled(&self, s: f64) -> Self {
        PoincareVector([s * self.0[0], s * self.0[1], s * self.0[2]])
    }

    pub fn add(&self, other: &PoincareVector) -> Self {
        PoincareVector([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// Normalized copy; degenerate for the zero vector.
    pub fn unit(&self) -> Result<Self> {
        let n = self.norm();
        if n <= crate::PRUNE_THRESHOLD {
            return Err(Error::DegenerateState);
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Check ‖n‖ = 1 within `tol`, as required by direction arguments.
    pub fn check_unit(&self, tol: f64) -> Result<()> {
        if (self.norm() - 1.0).abs() > tol {
            return Err(Error::domain(format!(
                "direction {:?} is not a unit vector",
                self.0
            )));
        }
        Ok(())
    }

    /// Cross product, right-handed in the (m1, m2, m3) ordering.
    pub fn cross(&self, other: &PoincareVector) -> PoincareVector {
        PoincareVector([
            self.0[1] * other.0[2] - self.0[2] * other.0[1],
            self.0[2] * other.0[0] - self.0[0] * other.0[2],
            self.0[0] * other.0[1] - self.0[1] * other.0[0],
        ])
    }

    /// Any unit vector orthogonal to `self` (which must be a unit vector).
    pub fn any_orthogonal(&self) -> PoincareVector {
        let trial = if self.0[0].abs() < 0.9 {
            PoincareVector::E1
        } else {
            PoincareVector::E2
        };
        let proj = self.dot(&trial);
        trial
            .add(&self.scaled(-proj))
            .unit()
            .expect("orthogonal complement of a unit vector is nonzero")
    }
}

/// Jones vector for angles (θ, φ): (cos(θ/2), e^{iφ} sin(θ/2)).
pub fn jones_from_angles(angles: PolarizationAngles) -> JonesVector {
    let half = 0.5 * angles.theta();
    JonesVector {
        eps_x: C64::new(half.cos(), 0.0),
        eps_y: C64::from_polar(half.sin(), angles.phi()),
    }
}

/// Poincaré vector for angles (θ, φ): (cosθ, sinθ cosφ, sinθ sinφ).
pub fn poincare_from_angles(angles: PolarizationAngles) -> PoincareVector {
    let (theta, phi) = (angles.theta(), angles.phi());
    PoincareVector::new(
        theta.cos(),
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
    )
}

/// Recover (θ, φ) from a Jones vector in the canonical gauge.
///
/// At the poles (sinθ = 0) the azimuth is reported as 0.
pub fn angles_from_jones(j: &JonesVector) -> PolarizationAngles {
    let cos_half = j.eps_x.norm().clamp(0.0, 1.0);
    let sin_half = j.eps_y.norm().clamp(0.0, 1.0);
    let theta = 2.0 * sin_half.atan2(cos_half);
    let phi = if sin_half <= crate::PRUNE_THRESHOLD || cos_half <= crate::PRUNE_THRESHOLD {
        0.0
    } else {
        (j.eps_y * j.eps_x.conj()).arg().rem_euclid(2.0 * PI)
    };
    PolarizationAngles::new(theta, phi)
}

/// The orthogonal polarization mode.
///
/// For angle-form inputs this is exactly (−sin(θ/2), e^{iφ} cos(θ/2)); for a
/// general unit input the output is orthogonal, normalized, and carries the
/// same relative-phase gauge.
pub fn orthogonal_jones(j: &JonesVector) -> JonesVector {
    // (−εy*, εx*) is orthogonal for any ε; re-phase by arg(εy) to match the
    // angle-form convention.
    let raw_x = -j.eps_y.conj();
    let raw_y = j.eps_x.conj();
    if j.eps_y.norm() <= crate::PRUNE_THRESHOLD {
        return JonesVector { eps_x: C64::new(0.0, 0.0), eps_y: raw_y };
    }
    let phase = C64::from_polar(1.0, j.eps_y.arg());
    JonesVector {
        eps_x: raw_x * phase,
        eps_y: raw_y * phase,
    }
}

/// Natural-log factorial table up to `n` inclusive.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    for k in 1..=n {
        table[k] = table[k - 1] + (k as f64).ln();
    }
    table
}

/// Polarized N-photon state (N!)^{-1/2} (εx a†x + εy a†y)^N |vac⟩.
///
/// Amplitudes are √C(N,k) εx^k εy^{N−k} on |k, N−k⟩, exactly N+1 kets.
pub fn polarized_number_state(n: u32, j: &JonesVector) -> TwoModeFockState {
    if n == 0 {
        return TwoModeFockState::vacuum();
    }
    let mut amps: BTreeMap<(u32, u32), C64> = BTreeMap::new();
    let mut binom = 1.0f64; // C(N, k), updated multiplicatively
    for k in 0..=n {
        if k > 0 {
            binom *= (n - k + 1) as f64 / k as f64;
        }
        let amp = binom.sqrt() * cpow(j.eps_x, k) * cpow(j.eps_y, n - k);
        if amp.norm() >= crate::PRUNE_THRESHOLD {
            amps.insert((k, n - k), amp);
        }
    }
    TwoModeFockState::from_map(amps)
        .normalized()
        .expect("polarized number state has unit norm by construction")
}

/// Two-mode coherent state |α, β⟩ truncated to dropped probability < `tail_tol`.
///
/// The total photon number is Poisson with mean |α|² + |β|²; the cutoff is the
/// smallest total that meets the tail tolerance, guarded at |α|² + |β|² ≤ 400.
pub fn coherent_state(alpha: C64, beta: C64, tail_tol: f64) -> Result<TwoModeFockState> {
    const MEAN_GUARD: f64 = 400.0;
    const MAX_CUTOFF: u32 = 1024;
    let mean = alpha.norm_sqr() + beta.norm_sqr();
    if !(tail_tol > 0.0) {
        return Err(Error::domain("tail tolerance must be positive"));
    }
    if mean > MEAN_GUARD {
        return Err(Error::CutoffTooSmall {
            cutoff: MAX_CUTOFF,
            tail: f64::NAN,
            tol: tail_tol,
        });
    }
    if mean == 0.0 {
        return Ok(TwoModeFockState::vacuum());
    }
    // Smallest cutoff whose Poisson tail bound drops below the tolerance.
    // Past the mean the terms decay geometrically, so the remaining tail is
    // bounded by next_term / (1 − mean/(cutoff+2)); this bound avoids the
    // round-off floor of accumulating 1 − cdf.
    let mut term = (-mean).exp();
    let mut cutoff = 0u32;
    loop {
        let next = term * mean / (cutoff as f64 + 1.0);
        if cutoff as f64 + 2.0 > mean {
            let ratio = mean / (cutoff as f64 + 2.0);
            if next / (1.0 - ratio) <= tail_tol {
                break;
            }
        }
        if cutoff >= MAX_CUTOFF {
            return Err(Error::CutoffTooSmall {
                cutoff: MAX_CUTOFF,
                tail: next,
                tol: tail_tol,
            });
        }
        cutoff += 1;
        term = next;
    }
    // Per-mode coherent amplitudes e^{−|α|²/2} αⁿ/√(n!), built recursively.
    let mode_amps = |amp: C64| -> Vec<C64> {
        let mut v = Vec::with_capacity(cutoff as usize + 1);
        v.push(C64::new((-0.5 * amp.norm_sqr()).exp(), 0.0));
        for k in 1..=cutoff {
            let prev = v[k as usize - 1];
            v.push(prev * amp / (k as f64).sqrt());
        }
        v
    };
    let ax = mode_amps(alpha);
    let ay = mode_amps(beta);
    let mut amps: BTreeMap<(u32, u32), C64> = BTreeMap::new();
    for n_x in 0..=cutoff {
        for n_y in 0..=(cutoff - n_x) {
            let amp = ax[n_x as usize] * ay[n_y as usize];
            if amp.norm() >= crate::PRUNE_THRESHOLD {
                amps.insert((n_x, n_y), amp);
            }
        }
    }
    TwoModeFockState::from_map(amps).normalized()
}

fn cpow(base: C64, exp: u32) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Re-express a state under the passive mode map a†x ↦ t00 b†1 + t01 b†2,
/// a†y ↦ t10 b†1 + t11 b†2 with `t` unitary.
///
/// Total photon number is conserved, so the map is an exact (N+1)-dimensional
/// unitary per total-photon sector.
fn transform_modes(state: &TwoModeFockState, t: &[[C64; 2]; 2]) -> TwoModeFockState {
    let max_n = state.max_total() as usize;
    let lnf = ln_factorials(max_n);
    let mut out: BTreeMap<(u32, u32), C64> = BTreeMap::new();
    for (&(n_x, n_y), &amp) in state.iter() {
        // Powers of the four matrix elements, precomputed per source ket.
        let pow_t00: Vec<C64> = powers(t[0][0], n_x);
        let pow_t01: Vec<C64> = powers(t[0][1], n_x);
        let pow_t10: Vec<C64> = powers(t[1][0], n_y);
        let pow_t11: Vec<C64> = powers(t[1][1], n_y);
        let mut binom_x = 1.0f64; // C(n_x, p)
        for p in 0..=n_x {
            if p > 0 {
                binom_x *= (n_x - p + 1) as f64 / p as f64;
            }
            let mut binom_y = 1.0f64; // C(n_y, q)
            for q in 0..=n_y {
                if q > 0 {
                    binom_y *= (n_y - q + 1) as f64 / q as f64;
                }
                let coeff = pow_t00[p as usize]
                    * pow_t01[(n_x - p) as usize]
                    * pow_t10[q as usize]
                    * pow_t11[(n_y - q) as usize];
                if coeff.norm() < crate::PRUNE_THRESHOLD {
                    continue;
                }
                let j = p + q;
                let k = n_x + n_y - j;
                let ratio = 0.5
                    * (lnf[j as usize] + lnf[k as usize]
                        - lnf[n_x as usize]
                        - lnf[n_y as usize]);
                let weight = binom_x * binom_y * ratio.exp();
                *out.entry((j, k)).or_insert_with(|| C64::new(0.0, 0.0)) +=
                    amp * coeff * weight;
            }
        }
    }
    TwoModeFockState::from_map(out)
}

fn powers(base: C64, up_to: u32) -> Vec<C64> {
    let mut v = Vec::with_capacity(up_to as usize + 1);
    v.push(C64::new(1.0, 0.0));
    for k in 1..=up_to {
        let prev = v[k as usize - 1];
        v.push(prev * base);
    }
    v
}

/// Express `state` in the rotated polarization basis (ε₀, ε₀⊥).
///
/// Implements the passive mode map a_ε0 = ε0x* ax + ε0y* ay (and likewise for
/// the orthogonal mode): norm and total-photon distribution are preserved.
pub fn rotate_basis(state: &TwoModeFockState, angles0: PolarizationAngles) -> TwoModeFockState {
    let e0 = jones_from_angles(angles0);
    let e0p = orthogonal_jones(&e0);
    // a†x = ε0x* b†1 + ε0⊥x* b†2, a†y = ε0y* b†1 + ε0⊥y* b†2.
    let t = [
        [e0.eps_x.conj(), e0p.eps_x.conj()],
        [e0.eps_y.conj(), e0p.eps_y.conj()],
    ];
    transform_modes(state, &t)
}

/// Inverse of [`rotate_basis`]: map a state expressed in (ε₀, ε₀⊥) back to
/// the (x, y) basis.
pub fn unrotate_basis(state: &TwoModeFockState, angles0: PolarizationAngles) -> TwoModeFockState {
    let e0 = jones_from_angles(angles0);
    let e0p = orthogonal_jones(&e0);
    // b†1 = ε0x a†x + ε0y a†y, b†2 = ε0⊥x a†x + ε0⊥y a†y.
    let t = [[e0.eps_x, e0.eps_y], [e0p.eps_x, e0p.eps_y]];
    transform_modes(state, &t)
}

/// SO(3) matrix R with S'_j = Σ_k R_jk S_k under [`rotate_basis`].
///
/// Row 1 of R is the Poincaré vector of `angles0`, so R maps m(angles0) to
/// (1, 0, 0); S0 is invariant.
pub fn stokes_rotation_matrix(angles0: PolarizationAngles) -> [[f64; 3]; 3] {
    let e0 = jones_from_angles(angles0);
    let e0p = orthogonal_jones(&e0);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    // Pauli-like generators in this ordering: τ1 = diag(1,−1), τ2 = σx, τ3 = σy.
    let tau = [
        [[one, zero], [zero, -one]],
        [[zero, one], [one, zero]],
        [[zero, -i], [i, zero]],
    ];
    let e = [[e0.eps_x, e0.eps_y], [e0p.eps_x, e0p.eps_y]];
    let mut r = [[0.0; 3]; 3];
    for (j, tau_j) in tau.iter().enumerate() {
        // S'_j = Σ τ_j[i][k] b†_i b_k with b†_i = Σ E[i][p] a†_p, so
        // S'_j = a† M_j a with M_j = Eᵀ τ_j E*; then R_jk = ½ tr(M_j τ_k).
        let mut m = [[zero; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = zero;
                for p in 0..2 {
                    for q in 0..2 {
                        acc += e[p][a] * tau_j[p][q] * e[q][b].conj();
                    }
                }
                m[a][b] = acc;
            }
        }
        for (k, tau_k) in tau.iter().enumerate() {
            let mut tr = zero;
            for a in 0..2 {
                for b in 0..2 {
                    tr += m[a][b] * tau_k[b][a];
                }
            }
            let val = 0.5 * tr;
            debug_assert!(val.im.abs() < 1e-12);
            r[j][k] = val.re;
        }
    }
    r
}
