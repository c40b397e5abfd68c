//! Polarization-squeezing criteria, the squeezing factor/degree, and grid
//! reports.
//!
//! Four criteria are implemented: the coherent-benchmark comparison
//! (V_j < ⟨S0⟩), the uncertainty-relation chain (V_j < |⟨S_l⟩| < V_k), the
//! fixed-perpendicular comparison (V_n < |⟨S_{n⊥}⟩|), and the most general
//! criterion against the maximized perpendicular mean
//! V_n < √(‖⟨S⟩‖² − ⟨S_n⟩²). The squeezing factor divides variance by that
//! maximal bound; squeezing means factor < 1.

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::fock::TwoModeFockState;
use crate::polarization::PoincareVector;
use crate::stokes::StokesMoments;
use crate::VERDICT_EPSILON;

/// Relative threshold on bound²/‖⟨S⟩‖² below which the perpendicular bound is
/// treated as degenerate (the direction is along ±⟨S⟩ up to round-off). For a
/// polarized state this classifies exactly |n·m| > 1 − 1e-8 as degenerate.
pub const BOUND_DEGENERACY_REL: f64 = 2e-8;

/// A Stokes axis S1, S2 or S3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StokesAxis {
    S1,
    S2,
    S3,
}

impl StokesAxis {
    pub const ALL: [StokesAxis; 3] = [StokesAxis::S1, StokesAxis::S2, StokesAxis::S3];

    /// Zero-based index into moment arrays.
    pub fn index(self) -> usize {
        match self {
            StokesAxis::S1 => 0,
            StokesAxis::S2 => 1,
            StokesAxis::S3 => 2,
        }
    }

    /// One-based label as used in the criteria (j ∈ {1,2,3}).
    pub fn label(self) -> usize {
        self.index() + 1
    }

    fn from_index(idx: usize) -> Self {
        Self::ALL[idx]
    }

    /// The two cyclic assignments (k, l) with {j, k, l} = {1, 2, 3}.
    pub fn cyclic_pairs(self) -> [(StokesAxis, StokesAxis); 2] {
        let j = self.index();
        let a = StokesAxis::from_index((j + 1) % 3);
        let b = StokesAxis::from_index((j + 2) % 3);
        [(a, b), (b, a)]
    }
}

/// Which criterion produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criterion {
    Chirkin,
    Heersink,
    Luis,
    General,
}

/// Echo of the inputs a verdict was evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CriterionInputs {
    Axis { j: usize },
    CyclicPair { j: usize, k: usize, l: usize },
    DirectionPair { n: PoincareVector, n_perp: PoincareVector },
    Direction { n: PoincareVector },
}

/// One criterion evaluation: `satisfied ⇔ lhs < rhs − 1e-12`, with the
/// Heersink chain additionally requiring `rhs < anti_rhs − 1e-12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub criterion: Criterion,
    pub inputs: CriterionInputs,
    pub lhs: f64,
    pub rhs: f64,
    /// Upper member V_k of the Heersink chain V_j < |⟨S_l⟩| < V_k.
    pub anti_rhs: Option<f64>,
    pub satisfied: bool,
}

fn strictly_less(a: f64, b: f64) -> bool {
    a < b - VERDICT_EPSILON
}

/// Coherent-benchmark criterion: V_j < ⟨S0⟩.
pub fn chirkin(state: &TwoModeFockState, axis: StokesAxis) -> CriterionVerdict {
    chirkin_from(&StokesMoments::of(state), axis)
}

pub fn chirkin_from(moments: &StokesMoments, axis: StokesAxis) -> CriterionVerdict {
    let lhs = moments.variances[axis.index()];
    let rhs = moments.mean0;
    CriterionVerdict {
        criterion: Criterion::Chirkin,
        inputs: CriterionInputs::Axis { j: axis.label() },
        lhs,
        rhs,
        anti_rhs: None,
        satisfied: strictly_less(lhs, rhs),
    }
}

/// Uncertainty-relation criterion V_j < |⟨S_l⟩| < V_k, evaluated for both
/// cyclic assignments of (k, l).
pub fn heersink(state: &TwoModeFockState, axis: StokesAxis) -> (CriterionVerdict, CriterionVerdict) {
    heersink_from(&StokesMoments::of(state), axis)
}

pub fn heersink_from(
    moments: &StokesMoments,
    axis: StokesAxis,
) -> (CriterionVerdict, CriterionVerdict) {
    let [first, second] = axis.cyclic_pairs().map(|(k, l)| {
        let lhs = moments.variances[axis.index()];
        let rhs = moments.mean[l.index()].abs();
        let anti = moments.variances[k.index()];
        CriterionVerdict {
            criterion: Criterion::Heersink,
            inputs: CriterionInputs::CyclicPair {
                j: axis.label(),
                k: k.label(),
                l: l.label(),
            },
            lhs,
            rhs,
            anti_rhs: Some(anti),
            satisfied: strictly_less(lhs, rhs) && strictly_less(rhs, anti),
        }
    });
    (first, second)
}

/// Fixed-perpendicular criterion: V_n < |⟨S_{n⊥}⟩| for a chosen orthogonal
/// pair (n, n⊥). The pair must be unit and orthogonal within 1e-9.
pub fn luis(
    state: &TwoModeFockState,
    n: &PoincareVector,
    n_perp: &PoincareVector,
) -> Result<CriterionVerdict> {
    luis_from(&StokesMoments::of(state), n, n_perp)
}

pub fn luis_from(
    moments: &StokesMoments,
    n: &PoincareVector,
    n_perp: &PoincareVector,
) -> Result<CriterionVerdict> {
    n.check_unit(1e-9)?;
    n_perp.check_unit(1e-9)?;
    if n.dot(n_perp).abs() > 1e-9 {
        return Err(crate::Error::domain(format!(
            "directions {:?} and {:?} are not orthogonal",
            n.components(),
            n_perp.components()
        )));
    }
    let (_, variance) = moments.component(n)?;
    let (perp_mean, _) = moments.component(n_perp)?;
    let rhs = perp_mean.abs();
    Ok(CriterionVerdict {
        criterion: Criterion::Luis,
        inputs: CriterionInputs::DirectionPair {
            n: *n,
            n_perp: *n_perp,
        },
        lhs: variance,
        rhs,
        anti_rhs: None,
        satisfied: strictly_less(variance, rhs),
    })
}

/// Squeezing factor value: finite ratio, a tagged divergence where the bound
/// vanishes with nonzero variance, or undefined where both vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorValue {
    Finite(f64),
    Infinite,
    Undefined,
}

impl FactorValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            FactorValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FactorValue::Finite(_))
    }
}

impl std::fmt::Display for FactorValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FactorValue::Finite(v) => write!(f, "{v}"),
            FactorValue::Infinite => write!(f, "inf"),
            FactorValue::Undefined => write!(f, "undefined"),
        }
    }
}

impl Serialize for FactorValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FactorValue::Finite(v) => serializer.serialize_f64(*v),
            FactorValue::Infinite => serializer.serialize_str("inf"),
            FactorValue::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

/// Squeezing factor 𝒮_n = V_n / √(‖⟨S⟩‖² − ⟨S_n⟩²) and degree 𝒟_n = 1 − 𝒮_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingFactor {
    pub direction: PoincareVector,
    pub variance: f64,
    pub bound: f64,
    pub factor: FactorValue,
    /// 1 − factor when the factor is finite.
    pub degree: Option<f64>,
    pub squeezed: bool,
}

/// Most general criterion along direction n, using the maximized
/// perpendicular bound.
pub fn general_factor(state: &TwoModeFockState, n: &PoincareVector) -> Result<SqueezingFactor> {
    general_factor_from(&StokesMoments::of(state), n)
}

pub fn general_factor_from(
    moments: &StokesMoments,
    n: &PoincareVector,
) -> Result<SqueezingFactor> {
    let (mean_n, variance) = moments.component(n)?;
    let mean_sqr = moments.mean_norm_sqr();
    let bound_sqr = (mean_sqr - mean_n * mean_n).max(0.0);
    let bound = bound_sqr.sqrt();
    // Degenerate-bound classification is relative to ‖⟨S⟩‖ so it is scale
    // free; the variance scale distinguishes undefined from divergent.
    let degenerate = bound_sqr <= BOUND_DEGENERACY_REL * mean_sqr;
    let variance_zero_tol = 1e-9f64.max(1e-7 * moments.mean0 * moments.mean0);
    let factor = if degenerate {
        if variance <= variance_zero_tol {
            FactorValue::Undefined
        } else {
            FactorValue::Infinite
        }
    } else {
        FactorValue::Finite(variance / bound)
    };
    let squeezed = matches!(factor, FactorValue::Finite(f) if f < 1.0 - VERDICT_EPSILON);
    Ok(SqueezingFactor {
        direction: *n,
        variance,
        bound,
        factor,
        degree: factor.finite().map(|f| 1.0 - f),
        squeezed,
    })
}

/// Verdict form of the general criterion (lhs = V_n, rhs = maximal bound).
pub fn general_verdict_from(moments: &StokesMoments, n: &PoincareVector) -> Result<CriterionVerdict> {
    let f = general_factor_from(moments, n)?;
    Ok(CriterionVerdict {
        criterion: Criterion::General,
        inputs: CriterionInputs::Direction { n: *n },
        lhs: f.variance,
        rhs: f.bound,
        anti_rhs: None,
        satisfied: f.squeezed,
    })
}

/// The three bounds of the stringency chain, loosest last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// ⟨S_{n⊥}⟩² / ⟨S0⟩ — the tightest bound.
    PerpMeanSquaredOverS0,
    /// |⟨S_{n⊥}⟩|.
    PerpMeanAbs,
    /// ⟨S0⟩ — the loosest bound.
    TotalMean,
}

/// Ordered stringency chain ⟨S_{n⊥}⟩²/⟨S0⟩ ≤ |⟨S_{n⊥}⟩| ≤ ⟨S0⟩.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StringencyChain {
    pub bounds: [(BoundKind, f64); 3],
    /// Chain is non-decreasing within 1e-9 (checked when |⟨S_{n⊥}⟩| ≤ ⟨S0⟩).
    pub monotone: bool,
    /// ⟨S0⟩ vanished, so the first member is 0/0 and the ordering trivial.
    pub degenerate: bool,
}

/// Evaluate the stringency chain for an orthogonal pair (n, n⊥).
pub fn stringency_chain(
    state: &TwoModeFockState,
    n: &PoincareVector,
    n_perp: &PoincareVector,
) -> Result<StringencyChain> {
    let moments = StokesMoments::of(state);
    // Same validation as the fixed-perpendicular criterion.
    luis_from(&moments, n, n_perp)?;
    let (perp_mean, _) = moments.component(n_perp)?;
    let p = perp_mean.abs();
    let s0 = moments.mean0;
    let degenerate = s0 <= crate::PRUNE_THRESHOLD;
    let first = if degenerate { 0.0 } else { p * p / s0 };
    let bounds = [
        (BoundKind::PerpMeanSquaredOverS0, first),
        (BoundKind::PerpMeanAbs, p),
        (BoundKind::TotalMean, s0),
    ];
    let monotone = if p <= s0 + 1e-9 {
        bounds[0].1 <= bounds[1].1 + 1e-9 && bounds[1].1 <= bounds[2].1 + 1e-9
    } else {
        false
    };
    Ok(StringencyChain {
        bounds,
        monotone,
        degenerate,
    })
}

/// Counts over the per-direction factors of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ReportSummary {
    pub total: usize,
    pub squeezed: usize,
    pub not_squeezed: usize,
    pub undefined: usize,
    pub divergent: usize,
    /// Directions with 0.05 < |n·m| < 0.95 where m is the mean direction.
    pub band_total: usize,
    pub band_squeezed: usize,
}

/// Aggregate squeezing report over a set of directions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqueezingReport {
    pub mean0: f64,
    pub mean: [f64; 3],
    pub variances: [f64; 3],
    /// Unit vector along ⟨S⟩ when the mean vector is nonzero.
    pub mean_direction: Option<PoincareVector>,
    pub chirkin: Vec<CriterionVerdict>,
    pub heersink: Vec<CriterionVerdict>,
    pub directions: Vec<SqueezingFactor>,
    pub summary: ReportSummary,
}

/// Evaluate factors for every direction (data-parallel) plus the per-axis
/// criteria verdicts and summary counts.
pub fn full_report(state: &TwoModeFockState, directions: &[PoincareVector]) -> Result<SqueezingReport> {
    for n in directions {
        n.check_unit(1e-9)?;
    }
    let moments = StokesMoments::of(state);
    let factors = crate::exec::map_ordered(directions, |n| {
        general_factor_from(&moments, n).expect("directions validated as unit vectors")
    });
    let mean_direction = moments.mean_direction();
    let mut summary = ReportSummary {
        total: factors.len(),
        ..ReportSummary::default()
    };
    for f in &factors {
        match f.factor {
            FactorValue::Finite(_) if f.squeezed => summary.squeezed += 1,
            FactorValue::Finite(_) => summary.not_squeezed += 1,
            FactorValue::Infinite => summary.divergent += 1,
            FactorValue::Undefined => summary.undefined += 1,
        }
        if let Some(m) = &mean_direction {
            let t = f.direction.dot(m).abs();
            if t > 0.05 && t < 0.95 {
                summary.band_total += 1;
                if f.squeezed {
                    summary.band_squeezed += 1;
                }
            }
        }
    }
    let chirkin_verdicts = StokesAxis::ALL
        .iter()
        .map(|&axis| chirkin_from(&moments, axis))
        .collect();
    let mut heersink_verdicts = Vec::with_capacity(6);
    for &axis in &StokesAxis::ALL {
        let (a, b) = heersink_from(&moments, axis);
        heersink_verdicts.push(a);
        heersink_verdicts.push(b);
    }
    Ok(SqueezingReport {
        mean0: moments.mean0,
        mean: moments.mean,
        variances: moments.variances,
        mean_direction,
        chirkin: chirkin_verdicts,
        heersink: heersink_verdicts,
        directions: factors,
        summary,
    })
}
