//! Direct evaluators for the published closed-form expressions.
//!
//! Everything here is a stateless scalar function, kept strictly separate
//! from the numeric engine so the two can be diffed. Printed formulas are
//! evaluated verbatim, typos included; where the printed set is internally
//! inconsistent a tagged "corrected" variant sits next to it. Variant
//! selection is always an explicit parameter — the adjudication happens in
//! [`crate::verify`], never silently here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polarization::{PoincareVector, PolarizationAngles};
use crate::squeezing::FactorValue;

/// Parametric-amplifier interaction strength; only the product gt matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplifierParams {
    gt: f64,
}

impl AmplifierParams {
    pub fn new(gt: f64) -> Result<Self> {
        if !gt.is_finite() || gt < 0.0 {
            return Err(Error::domain(format!("gt must be finite and ≥ 0, got {gt}")));
        }
        Ok(AmplifierParams { gt })
    }

    pub fn gt(&self) -> f64 {
        self.gt
    }

    /// c = cosh(gt).
    pub fn c(&self) -> f64 {
        self.gt.cosh()
    }

    /// s = sinh(gt).
    pub fn s(&self) -> f64 {
        self.gt.sinh()
    }

    /// c² + s² = cosh(2gt).
    pub fn cosh2(&self) -> f64 {
        (2.0 * self.gt).cosh()
    }

    /// 2cs = sinh(2gt).
    pub fn sinh2(&self) -> f64 {
        (2.0 * self.gt).sinh()
    }

    /// c²s² = sinh²(2gt)/4.
    pub fn c2s2(&self) -> f64 {
        let s2 = self.sinh2();
        0.25 * s2 * s2
    }
}

/// Which printed variant of the amplified-S2 factor to evaluate. The two
/// differ in the exponent of (c² + s²) on the zero-time variance term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum S2Variant {
    /// Exponent 1, as obtained by substituting the printed variances into the
    /// factor definition.
    Printed31,
    /// Exponent 2, consistent with the plane-polarized reduction and with the
    /// printed minimum formula.
    Printed32,
}

/// Closed-form Stokes moments of a polarized N-photon state, printed and
/// sum-rule-corrected variants side by side.
///
/// The printed table lists ⟨S0²⟩ = N(N−1) and ⟨S3²⟩ without the +N term that
/// the SU(2) sum rule ⟨S1²+S2²+S3²⟩ = ⟨S0²⟩ + 2⟨S0⟩ requires; the corrected
/// columns add it. ⟨S1²⟩ and ⟨S2²⟩ are printed with the +N already present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumberStateMomentsCf {
    pub mean0: f64,
    /// (⟨S1⟩, ⟨S2⟩, ⟨S3⟩) = N·m.
    pub means: [f64; 3],
    pub s0_sq_printed: f64,
    pub s0_sq_corrected: f64,
    /// ⟨Sj²⟩ as printed.
    pub sq_printed: [f64; 3],
    /// ⟨Sj²⟩ with the sum-rule +N restored where missing.
    pub sq_corrected: [f64; 3],
    /// (⟨{S1,S2}⟩, ⟨{S1,S3}⟩, ⟨{S2,S3}⟩) = 2N(N−1)·m_j m_k.
    pub anticommutators: [f64; 3],
    /// Variances from the printed squares.
    pub variances_printed: [f64; 3],
    /// Variances from the corrected squares.
    pub variances_corrected: [f64; 3],
}

/// Evaluate the printed moment table for a polarized N-photon state.
pub fn number_state_moments_cf(n: u32, angles: PolarizationAngles) -> NumberStateMomentsCf {
    let nf = n as f64;
    let nn1 = nf * (nf - 1.0);
    let (theta, phi) = (angles.theta(), angles.phi());
    let m = [
        theta.cos(),
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
    ];
    let means = [nf * m[0], nf * m[1], nf * m[2]];
    let sq_printed = [
        nn1 * m[0] * m[0] + nf,
        nn1 * m[1] * m[1] + nf,
        nn1 * m[2] * m[2], // printed without the +N term
    ];
    let sq_corrected = [sq_printed[0], sq_printed[1], sq_printed[2] + nf];
    let anticommutators = [
        2.0 * nn1 * m[0] * m[1],
        2.0 * nn1 * m[0] * m[2],
        2.0 * nn1 * m[1] * m[2],
    ];
    let mut variances_printed = [0.0; 3];
    let mut variances_corrected = [0.0; 3];
    for j in 0..3 {
        variances_printed[j] = sq_printed[j] - means[j] * means[j];
        variances_corrected[j] = sq_corrected[j] - means[j] * means[j];
    }
    NumberStateMomentsCf {
        mean0: nf,
        means,
        s0_sq_printed: nn1,
        s0_sq_corrected: nf * nf,
        sq_printed,
        sq_corrected,
        anticommutators,
        variances_printed,
        variances_corrected,
    }
}

/// Closed forms for an arbitrary component direction of a polarized N-photon
/// state: mean N(n·m), variance N[1−(n·m)²], bound N√(1−(n·m)²), factor
/// √(1−(n·m)²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionCf {
    pub mean: f64,
    pub variance: f64,
    pub bound: f64,
    pub factor: FactorValue,
}

pub fn number_state_direction_cf(
    n: u32,
    dir: &PoincareVector,
    m: &PoincareVector,
) -> Result<DirectionCf> {
    dir.check_unit(1e-9)?;
    m.check_unit(1e-9)?;
    let nf = n as f64;
    let t = dir.dot(m);
    let one_minus = (1.0 - t * t).max(0.0);
    let bound = nf * one_minus.sqrt();
    let factor = if n == 0 || bound == 0.0 {
        FactorValue::Undefined
    } else {
        FactorValue::Finite(one_minus.sqrt())
    };
    Ok(DirectionCf {
        mean: nf * t,
        variance: nf * one_minus,
        bound,
        factor,
    })
}

/// Mean Stokes vector after amplification:
/// (N cosθ, N(c²+s²) sinθ cosφ, N(c²+s²) sinθ sinφ).
pub fn amp_means_cf(n: u32, angles: PolarizationAngles, params: &AmplifierParams) -> [f64; 3] {
    let nf = n as f64;
    let (theta, phi) = (angles.theta(), angles.phi());
    let ch2 = params.cosh2();
    [
        nf * theta.cos(),
        nf * ch2 * theta.sin() * phi.cos(),
        nf * ch2 * theta.sin() * phi.sin(),
    ]
}

fn amp_variance_terms(
    n: u32,
    angles: PolarizationAngles,
    params: &AmplifierParams,
) -> ([f64; 3], [f64; 3]) {
    let nf = n as f64;
    let (theta, phi) = (angles.theta(), angles.phi());
    let st2 = theta.sin() * theta.sin();
    let sc = st2 * phi.cos() * phi.cos(); // sin²θ cos²φ
    let ss = st2 * phi.sin() * phi.sin(); // sin²θ sin²φ
    let c2s2 = params.c2s2();
    // Zero-time variances along the axes and the pair-creation brackets.
    let v0 = [nf * st2, nf * (1.0 - sc), nf * (1.0 - ss)];
    let bracket = [
        0.0,
        2.0 * c2s2 * (nf * nf * (1.0 - ss) + nf * (1.0 + ss) + 2.0),
        2.0 * c2s2 * (nf * nf * (1.0 - sc) + nf * (1.0 + sc) + 2.0),
    ];
    (v0, bracket)
}

/// Variances after amplification, printed verbatim: the zero-time term
/// carries (c²+s²) to the first power.
pub fn amp_variances_cf(n: u32, angles: PolarizationAngles, params: &AmplifierParams) -> [f64; 3] {
    let (v0, bracket) = amp_variance_terms(n, angles, params);
    let ch2 = params.cosh2();
    [v0[0], ch2 * v0[1] + bracket[1], ch2 * v0[2] + bracket[2]]
}

/// Variances after amplification with the zero-time term carrying (c²+s²)²,
/// the variant consistent with the plane-polarized reduction and the printed
/// minimum.
pub fn amp_variances_cf_corrected(
    n: u32,
    angles: PolarizationAngles,
    params: &AmplifierParams,
) -> [f64; 3] {
    let (v0, bracket) = amp_variance_terms(n, angles, params);
    let ch2sq = params.cosh2() * params.cosh2();
    [v0[0], ch2sq * v0[1] + bracket[1], ch2sq * v0[2] + bracket[2]]
}

/// Squeezing factor of S1 after amplification: sinθ / cosh(2gt).
///
/// The bound vanishes at sinθ = 0, where the factor is undefined.
pub fn amp_factor_s1_cf(angles: PolarizationAngles, params: &AmplifierParams) -> FactorValue {
    let st = angles.theta().sin();
    if st <= 0.0 {
        return FactorValue::Undefined;
    }
    FactorValue::Finite(st / params.cosh2())
}

/// Squeezing factor of S2 after amplification, for the selected printed
/// variant. Zero denominator (cosθ = 0 with sinφ = 0) yields the divergence
/// sentinel.
pub fn amp_factor_s2_cf(
    n: u32,
    angles: PolarizationAngles,
    params: &AmplifierParams,
    variant: S2Variant,
) -> FactorValue {
    let nf = n as f64;
    let (theta, phi) = (angles.theta(), angles.phi());
    let variances = match variant {
        S2Variant::Printed31 => amp_variances_cf(n, angles, params),
        S2Variant::Printed32 => amp_variances_cf_corrected(n, angles, params),
    };
    let ch2 = params.cosh2();
    let ct = theta.cos();
    let sts = theta.sin() * phi.sin();
    let denom_sq = nf * nf * (ct * ct + ch2 * ch2 * sts * sts);
    // Zero denominator up to round-off (e.g. cos(π/2) ~ 1e-16) diverges.
    if denom_sq <= 1e-30 * (nf * nf * ch2 * ch2).max(f64::MIN_POSITIVE) {
        return FactorValue::Infinite;
    }
    FactorValue::Finite(variances[1] / denom_sq.sqrt())
}

/// Plane-polarized (sinφ = 0) S2 factor exactly as printed:
/// (c²+s²)²|cosθ| + 2c²s²[(N²+N+2)/N]|secθ|.
pub fn amp_factor_s2_plane_cf(n: u32, theta: f64, params: &AmplifierParams) -> Result<FactorValue> {
    if n == 0 {
        return Err(Error::domain("plane-polarized factor needs N ≥ 1"));
    }
    let nf = n as f64;
    let ct = theta.cos().abs();
    if ct <= 1e-15 {
        return Ok(FactorValue::Infinite);
    }
    let ch2 = params.cosh2();
    let value = ch2 * ch2 * ct + 2.0 * params.c2s2() * ((nf * nf + nf + 2.0) / nf) / ct;
    Ok(FactorValue::Finite(value))
}

/// Closed-form minimum of the plane-polarized S2 factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S2MinCf {
    /// 2√((N²+N+2)/(8N))·sinh(4gt), the printed geometric-mean minimum.
    pub min_factor: f64,
    /// θ* from inverting the printed stationarity condition
    /// cosθ* = tanh(2gt)·√((N²+N+2)/N); the boundary value 0 in the
    /// boundary regime.
    pub argmin_theta: f64,
    /// Set when the stationarity condition gives cosθ* > 1, so the minimum
    /// sits on the θ → 0 boundary instead; `min_factor` is then the boundary
    /// value of the plane-polarized factor.
    pub boundary: bool,
}

/// Evaluate the printed minimum formula and stationarity condition for the
/// plane-polarized S2 factor.
pub fn amp_s2_min_cf(n: u32, params: &AmplifierParams) -> Result<S2MinCf> {
    if n == 0 {
        return Err(Error::domain("closed-form S2 minimum needs N ≥ 1"));
    }
    let nf = n as f64;
    let ratio = (nf * nf + nf + 2.0) / nf;
    let cos_star = (2.0 * params.gt()).tanh() * ratio.sqrt();
    if cos_star > 1.0 {
        let ch2 = params.cosh2();
        let boundary_value = ch2 * ch2 + 2.0 * params.c2s2() * ratio;
        return Ok(S2MinCf {
            min_factor: boundary_value,
            argmin_theta: 0.0,
            boundary: true,
        });
    }
    let min_factor = 2.0 * (ratio / 8.0).sqrt() * (4.0 * params.gt()).sinh();
    Ok(S2MinCf {
        min_factor,
        argmin_theta: cos_star.acos(),
        boundary: false,
    })
}

/// Circularly polarized S2 factor exactly as printed:
/// cosh(2gt) + [(2N+2)/N]·sinh²(2gt)/cosh(2gt).
pub fn amp_factor_s2_circular_cf(n: u32, params: &AmplifierParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("circular-polarization factor needs N ≥ 1"));
    }
    let nf = n as f64;
    let ch2 = params.cosh2();
    let sh2 = params.sinh2();
    Ok(ch2 + ((2.0 * nf + 2.0) / nf) * sh2 * sh2 / ch2)
}

/// Circular S2 factor with the pair-creation coefficient halved to
/// (N+1)/N, the value the exact variance algebra yields; kept beside the
/// printed form for the verification diff.
pub fn amp_factor_s2_circular_cf_corrected(n: u32, params: &AmplifierParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("circular-polarization factor needs N ≥ 1"));
    }
    let nf = n as f64;
    let ch2 = params.cosh2();
    let sh2 = params.sinh2();
    Ok(ch2 + ((nf + 1.0) / nf) * sh2 * sh2 / ch2)
}
