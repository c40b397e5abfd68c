//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A normalizing constructor received only vanishing amplitudes.
    #[error("degenerate state: all amplitudes vanish")]
    DegenerateState,

    /// An argument fell outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncation request would drop more probability than allowed.
    #[error("cutoff {cutoff} too small: dropped probability {tail:e} exceeds tolerance {tol:e}")]
    CutoffTooSmall { cutoff: u32, tail: f64, tol: f64 },

    /// The cutoff policy ran out of headroom before meeting its tolerances.
    #[error(
        "cutoff exhausted at total photon number {max_total}: \
         tail {tail:e} (tol {tail_tol:e}), moment residual {residual:e} (tol {rtol:e})"
    )]
    CutoffExhausted {
        max_total: u32,
        tail: f64,
        tail_tol: f64,
        residual: f64,
        rtol: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
