//! Exact linear algebra over a truncated two-mode bosonic Fock space.
//!
//! States are sparse complex vectors over photon-number pairs `(n_x, n_y)`,
//! stored in a `BTreeMap` so every iteration order (and therefore every
//! accumulated floating-point sum) is deterministic. Ladder factors are taken
//! as exact square roots of integers at use time; no factorial tables.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::{C64, PRUNE_THRESHOLD};

/// One of the two orthogonal polarization modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    X,
    Y,
}

/// Ladder-operator kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// An ordered product of ladder operators, applied right-to-left.
///
/// `factors[0]` is the leftmost operator of the product, exactly as the word
/// is written on paper.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorWord {
    factors: Vec<(Mode, Ladder)>,
}

impl OperatorWord {
    pub fn new(factors: Vec<(Mode, Ladder)>) -> Self {
        OperatorWord { factors }
    }

    /// The empty word (identity operator).
    pub fn identity() -> Self {
        OperatorWord::default()
    }

    /// Single annihilation operator.
    pub fn annihilate(mode: Mode) -> Self {
        OperatorWord::new(vec![(mode, Ladder::Annihilate)])
    }

    /// Single creation operator.
    pub fn create(mode: Mode) -> Self {
        OperatorWord::new(vec![(mode, Ladder::Create)])
    }

    /// Number operator `a†_m a_m`.
    pub fn number(mode: Mode) -> Self {
        OperatorWord::new(vec![(mode, Ladder::Create), (mode, Ladder::Annihilate)])
    }

    /// Hopping operator `a†_to a_from`.
    pub fn hop(to: Mode, from: Mode) -> Self {
        OperatorWord::new(vec![(to, Ladder::Create), (from, Ladder::Annihilate)])
    }

    pub fn factors(&self) -> &[(Mode, Ladder)] {
        &self.factors
    }

    /// Number of creation operators in the word.
    pub fn creation_count(&self) -> u32 {
        self.factors
            .iter()
            .filter(|(_, k)| *k == Ladder::Create)
            .count() as u32
    }

    /// Hermitian adjoint: reverse the order and swap creation/annihilation.
    pub fn adjoint(&self) -> Self {
        OperatorWord::new(
            self.factors
                .iter()
                .rev()
                .map(|&(m, k)| {
                    let k = match k {
                        Ladder::Create => Ladder::Annihilate,
                        Ladder::Annihilate => Ladder::Create,
                    };
                    (m, k)
                })
                .collect(),
        )
    }

    /// Concatenation `self · other` (self acts last).
    pub fn then_apply_first(&self, other: &OperatorWord) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        OperatorWord::new(factors)
    }
}

/// A linear combination of operator words.
///
/// This is the little word algebra needed to expand Heisenberg-picture
/// operators (mode transforms, Stokes components and their squares) into
/// expectation values of elementary ladder products.
#[derive(Debug, Clone, Default)]
pub struct OperatorPoly {
    terms: Vec<(C64, OperatorWord)>,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        OperatorPoly::default()
    }

    pub fn from_word(coeff: C64, word: OperatorWord) -> Self {
        OperatorPoly {
            terms: vec![(coeff, word)],
        }
    }

    pub fn terms(&self) -> &[(C64, OperatorWord)] {
        &self.terms
    }

    pub fn add(&self, other: &OperatorPoly) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OperatorPoly { terms }
    }

    pub fn sub(&self, other: &OperatorPoly) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        OperatorPoly {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (factor * c, w.clone()))
                .collect(),
        }
    }

    /// Operator product `self · other` (self acts last).
    pub fn mul(&self, other: &OperatorPoly) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, wa) in &self.terms {
            for (cb, wb) in &other.terms {
                terms.push((ca * cb, wa.then_apply_first(wb)));
            }
        }
        OperatorPoly { terms }
    }

    pub fn adjoint(&self) -> Self {
        OperatorPoly {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (c.conj(), w.adjoint()))
                .collect(),
        }
    }
}

/// Sparse complex state over photon-number pairs `(n_x, n_y)`.
///
/// Normalizing constructors guarantee unit norm; operator application returns
/// unnormalized vectors (possibly the zero vector).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockState {
    amps: BTreeMap<(u32, u32), C64>,
    cutoff: u32,
}

impl TwoModeFockState {
    /// The vacuum state |0,0⟩.
    pub fn vacuum() -> Self {
        let mut amps = BTreeMap::new();
        amps.insert((0, 0), C64::new(1.0, 0.0));
        TwoModeFockState { amps, cutoff: 0 }
    }

    /// The basis ket |n_x, n_y⟩.
    pub fn fock(n_x: u32, n_y: u32) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert((n_x, n_y), C64::new(1.0, 0.0));
        TwoModeFockState {
            amps,
            cutoff: n_x + n_y,
        }
    }

    /// Normalized superposition of the given basis entries.
    ///
    /// Occupations are validated (negative values are a domain error),
    /// duplicate keys are summed, and the cutoff is the maximum total photon
    /// number over the entries. All-zero amplitudes are rejected.
    pub fn make_state(entries: &[((i64, i64), C64)]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DegenerateState);
        }
        let mut amps: BTreeMap<(u32, u32), C64> = BTreeMap::new();
        let mut cutoff = 0u32;
        for &((n_x, n_y), amp) in entries {
            if n_x < 0 || n_y < 0 {
                return Err(Error::domain(format!(
                    "negative occupation ({n_x}, {n_y})"
                )));
            }
            let key = (n_x as u32, n_y as u32);
            cutoff = cutoff.max(key.0 + key.1);
            *amps.entry(key).or_insert_with(|| C64::new(0.0, 0.0)) += amp;
        }
        let state = TwoModeFockState { amps, cutoff };
        state.normalized()
    }

    /// Unnormalized linear combination Σ cᵢ |ψᵢ⟩.
    pub fn superpose(parts: &[(C64, &TwoModeFockState)]) -> Self {
        let mut amps: BTreeMap<(u32, u32), C64> = BTreeMap::new();
        let mut cutoff = 0u32;
        for (coeff, state) in parts {
            cutoff = cutoff.max(state.cutoff);
            for (&key, &amp) in &state.amps {
                *amps.entry(key).or_insert_with(|| C64::new(0.0, 0.0)) += coeff * amp;
            }
        }
        let mut out = TwoModeFockState { amps, cutoff };
        out.prune();
        out
    }

    pub(crate) fn from_map(amps: BTreeMap<(u32, u32), C64>) -> Self {
        let cutoff = amps.keys().map(|&(x, y)| x + y).max().unwrap_or(0);
        let mut state = TwoModeFockState { amps, cutoff };
        state.prune();
        state
    }

    /// Renormalized copy; `DegenerateState` if the norm vanishes.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= PRUNE_THRESHOLD {
            return Err(Error::DegenerateState);
        }
        let inv = 1.0 / norm;
        let mut amps = BTreeMap::new();
        for (&key, &amp) in &self.amps {
            amps.insert(key, amp * inv);
        }
        let mut state = TwoModeFockState {
            amps,
            cutoff: self.cutoff,
        };
        state.prune();
        Ok(state)
    }

    fn prune(&mut self) {
        self.amps.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// True for the zero vector (e.g. after annihilating the vacuum).
    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    /// Maximum total photon number this state may occupy.
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Maximum total photon number actually occupied (0 for the zero vector).
    pub fn max_total(&self) -> u32 {
        self.amps.keys().map(|&(x, y)| x + y).max().unwrap_or(0)
    }

    /// Amplitude on |n_x, n_y⟩ (zero if absent).
    pub fn amplitude(&self, n_x: u32, n_y: u32) -> C64 {
        self.amps
            .get(&(n_x, n_y))
            .copied()
            .unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    /// Iterate stored entries in deterministic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &C64)> {
        self.amps.iter()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Drop all amplitudes with total photon number above `cutoff`.
    ///
    /// Returns the truncated, renormalized state and the dropped probability.
    /// Fails with `CutoffTooSmall` when the dropped probability exceeds
    /// `tail_tol`.
    pub fn truncate(&self, cutoff: u32, tail_tol: f64) -> Result<(Self, f64)> {
        let mut kept: BTreeMap<(u32, u32), C64> = BTreeMap::new();
        let mut tail = 0.0;
        for (&key, &amp) in &self.amps {
            if key.0 + key.1 <= cutoff {
                kept.insert(key, amp);
            } else {
                tail += amp.norm_sqr();
            }
        }
        if tail > tail_tol {
            return Err(Error::CutoffTooSmall {
                cutoff,
                tail,
                tol: tail_tol,
            });
        }
        let state = TwoModeFockState { amps: kept, cutoff }.normalized()?;
        Ok((state, tail))
    }
}

/// Apply a ladder-operator word to a state (right-to-left).
///
/// Standard action per mode: `a|n⟩ = √n |n−1⟩`, `a†|n⟩ = √(n+1) |n+1⟩`.
/// The result is unnormalized and may be the zero vector; the cutoff grows by
/// the word's creation count.
pub fn apply_word(state: &TwoModeFockState, word: &OperatorWord) -> TwoModeFockState {
    let mut current = state.amps.clone();
    for &(mode, kind) in word.factors().iter().rev() {
        let mut next: BTreeMap<(u32, u32), C64> = BTreeMap::new();
        for (&(n_x, n_y), &amp) in &current {
            let n = match mode {
                Mode::X => n_x,
                Mode::Y => n_y,
            };
            let (factor, new_n) = match kind {
                Ladder::Annihilate => {
                    if n == 0 {
                        continue;
                    }
                    ((n as f64).sqrt(), n - 1)
                }
                Ladder::Create => (((n + 1) as f64).sqrt(), n + 1),
            };
            let key = match mode {
                Mode::X => (new_n, n_y),
                Mode::Y => (n_x, new_n),
            };
            *next.entry(key).or_insert_with(|| C64::new(0.0, 0.0)) += amp * factor;
        }
        current = next;
    }
    let mut out = TwoModeFockState::from_map(current);
    out.cutoff = out.cutoff.max(state.cutoff + word.creation_count());
    out
}

/// Inner product ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner(a: &TwoModeFockState, b: &TwoModeFockState) -> C64 {
    let (small, large, conj_first) = if a.len() <= b.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    let mut acc = C64::new(0.0, 0.0);
    for (&key, &amp) in small.iter() {
        let other = large.amplitude(key.0, key.1);
        acc += if conj_first {
            amp.conj() * other
        } else {
            other.conj() * amp
        };
    }
    acc
}

/// Expectation value ⟨ψ| word |ψ⟩ = ⟨ψ, word ψ⟩.
pub fn expectation(state: &TwoModeFockState, word: &OperatorWord) -> C64 {
    inner(state, &apply_word(state, word))
}

/// Expectation value of a linear combination of words.
pub fn expectation_poly(state: &TwoModeFockState, poly: &OperatorPoly) -> C64 {
    poly.terms()
        .iter()
        .map(|(coeff, word)| coeff * expectation(state, word))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn make_state_single_ket_normalizes() {
        let state = TwoModeFockState::make_state(&[((0, 0), c(1.0, 0.0))]).unwrap();
        assert_abs_diff_eq!(state.norm(), 1.0, epsilon = 1e-12);
        assert_eq!(state.cutoff(), 0);
    }

    #[test]
    fn make_state_three_four_five() {
        let state =
            TwoModeFockState::make_state(&[((1, 0), c(3.0, 0.0)), ((0, 1), c(4.0, 0.0))]).unwrap();
        assert_abs_diff_eq!(state.amplitude(1, 0).re, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(state.amplitude(0, 1).re, 0.8, epsilon = 1e-12);
    }

    #[test]
    fn make_state_symmetric_pair() {
        let state =
            TwoModeFockState::make_state(&[((2, 0), c(1.0, 0.0)), ((0, 2), c(-1.0, 0.0))]).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(state.amplitude(2, 0).re, inv_sqrt2, epsilon = 1e-12);
        assert_abs_diff_eq!(state.amplitude(0, 2).re, -inv_sqrt2, epsilon = 1e-12);
        assert_eq!(state.cutoff(), 2);
    }

    #[test]
    fn make_state_rejects_all_zero() {
        let err = TwoModeFockState::make_state(&[((1, 1), c(0.0, 0.0))]).unwrap_err();
        assert_eq!(err, Error::DegenerateState);
        assert_eq!(
            TwoModeFockState::make_state(&[]).unwrap_err(),
            Error::DegenerateState
        );
    }

    #[test]
    fn make_state_rejects_negative_occupation() {
        let err = TwoModeFockState::make_state(&[((-1, 0), c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn annihilate_single_photon() {
        let out = apply_word(
            &TwoModeFockState::fock(1, 0),
            &OperatorWord::annihilate(Mode::X),
        );
        assert_abs_diff_eq!(out.amplitude(0, 0).re, 1.0, epsilon = 1e-15);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn create_uses_sqrt_n_plus_one() {
        let out = apply_word(&TwoModeFockState::fock(0, 2), &OperatorWord::create(Mode::Y));
        assert_abs_diff_eq!(out.amplitude(0, 3).re, 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn hop_composes_both_rules() {
        let out = apply_word(&TwoModeFockState::fock(1, 1), &OperatorWord::hop(Mode::X, Mode::Y));
        assert_abs_diff_eq!(out.amplitude(2, 0).re, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn annihilating_vacuum_gives_zero_vector() {
        let out = apply_word(
            &TwoModeFockState::vacuum(),
            &OperatorWord::annihilate(Mode::X),
        );
        assert!(out.is_zero());
        assert_abs_diff_eq!(out.norm(), 0.0);
    }

    #[test]
    fn inner_product_examples() {
        let vac = TwoModeFockState::vacuum();
        assert_abs_diff_eq!(inner(&vac, &vac).re, 1.0, epsilon = 1e-15);
        let x = TwoModeFockState::fock(1, 0);
        let y = TwoModeFockState::fock(0, 1);
        assert_abs_diff_eq!(inner(&x, &y).norm(), 0.0, epsilon = 1e-15);
        let plus =
            TwoModeFockState::make_state(&[((1, 0), c(1.0, 0.0)), ((0, 1), c(1.0, 0.0))]).unwrap();
        assert_abs_diff_eq!(
            inner(&plus, &x).re,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let a = TwoModeFockState::make_state(&[((1, 0), c(0.0, 1.0))]).unwrap();
        let b = TwoModeFockState::fock(1, 0);
        assert_abs_diff_eq!(inner(&a, &b).im, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inner(&b, &a).im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_number_on_eigenstate() {
        let state = TwoModeFockState::fock(2, 3);
        let nx = expectation(&state, &OperatorWord::number(Mode::X));
        assert_abs_diff_eq!(nx.re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nx.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_cross_term() {
        // ⟨a†x ay⟩ on (|1,0⟩+|0,1⟩)/√2: the only contribution is
        // ⟨1,0| a†x ay |0,1⟩ / 2 = 1/2.
        let state =
            TwoModeFockState::make_state(&[((1, 0), c(1.0, 0.0)), ((0, 1), c(1.0, 0.0))]).unwrap();
        let v = expectation(&state, &OperatorWord::hop(Mode::X, Mode::Y));
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pair_creation_vanishes_on_fixed_total() {
        let state =
            TwoModeFockState::make_state(&[((2, 1), c(1.0, 0.0)), ((1, 2), c(1.0, 0.0))]).unwrap();
        let word = OperatorWord::new(vec![(Mode::X, Ladder::Create), (Mode::Y, Ladder::Create)]);
        assert_abs_diff_eq!(expectation(&state, &word).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn truncate_vacuum_is_noop() {
        let (state, tail) = TwoModeFockState::vacuum().truncate(0, 1e-12).unwrap();
        assert_abs_diff_eq!(state.norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tail, 0.0);
    }

    #[test]
    fn truncate_reports_dropped_probability() {
        let state =
            TwoModeFockState::make_state(&[((1, 0), c(0.6, 0.0)), ((5, 5), c(0.8, 0.0))]).unwrap();
        let err = state.truncate(4, 1e-12).unwrap_err();
        match err {
            Error::CutoffTooSmall { tail, .. } => assert_abs_diff_eq!(tail, 0.64, epsilon = 1e-12),
            other => panic!("expected CutoffTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn truncate_accepts_tiny_tail_and_renormalizes() {
        let eps = 1e-8; // probability 1e-16 in the tail
        let state = TwoModeFockState::make_state(&[((0, 0), c(1.0, 0.0)), ((3, 3), c(eps, 0.0))])
            .unwrap();
        let (kept, tail) = state.truncate(2, 1e-12).unwrap();
        assert!(tail <= 1e-12);
        assert_abs_diff_eq!(kept.norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn adjoint_reverses_and_flips() {
        let word = OperatorWord::new(vec![(Mode::X, Ladder::Create), (Mode::Y, Ladder::Annihilate)]);
        let adj = word.adjoint();
        assert_eq!(
            adj.factors(),
            &[(Mode::Y, Ladder::Create), (Mode::X, Ladder::Annihilate)]
        );
    }

    #[test]
    fn word_expectation_hermiticity() {
        let state = TwoModeFockState::make_state(&[
            ((0, 0), c(0.3, 0.1)),
            ((1, 1), c(-0.2, 0.7)),
            ((2, 0), c(0.5, -0.4)),
        ])
        .unwrap();
        let word = OperatorWord::new(vec![
            (Mode::X, Ladder::Create),
            (Mode::Y, Ladder::Annihilate),
            (Mode::Y, Ladder::Create),
        ]);
        let forward = expectation(&state, &word);
        let backward = expectation(&state, &word.adjoint());
        assert_abs_diff_eq!(forward.re, backward.re, epsilon = 1e-12);
        assert_abs_diff_eq!(forward.im, -backward.im, epsilon = 1e-12);
    }
}
