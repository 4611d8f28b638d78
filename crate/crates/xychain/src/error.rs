//! Crate-wide error type.

use crate::quadrature::QuadratureResult;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter or configuration value violated its domain.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// The susceptibility is infinite at the quantum critical point (T = 0, lambda = 1).
    #[error("susceptibility diverges at the quantum critical point (gamma={gamma}, lambda={lambda}, T=0)")]
    CriticalDivergence { gamma: f64, lambda: f64 },

    /// Adaptive integration exhausted its subdivision budget above tolerance.
    /// Carries the partial estimate so the caller can decide whether to accept it.
    #[error(
        "quadrature did not converge: value={} error_estimate={} after {} subdivisions",
        partial.value, partial.error_estimate, partial.subdivisions_used
    )]
    NonConvergence { partial: QuadratureResult },

    /// The integrand returned NaN or infinity at an evaluation node.
    #[error("integrand returned a non-finite value at k={abscissa}")]
    NonFiniteIntegrand { abscissa: f64 },

    /// The coarse scan placed the susceptibility maximum on a bracket endpoint.
    #[error("no interior susceptibility maximum inside bracket [{lo}, {hi}]")]
    NoInteriorMaximum { lo: f64, hi: f64 },

    /// A least-squares fit could not be formed (constant abscissa, zero slope, underflow).
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Collapse curves do not share enough x support to compare.
    #[error("collapse curves share fewer than two points of x support")]
    InsufficientOverlap,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
