//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Denominator constant term is zero: the filter has no causal realization.
    #[error("filter is not causal: denominator constant coefficient is zero")]
    NonCausal,

    /// Operation requires a stable system (all poles strictly inside the unit circle).
    #[error("system is unstable: pole at modulus {pole_modulus}")]
    Unstable { pole_modulus: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A constraint point coincides with a system pole, so the transfer
    /// function cannot be evaluated there.
    #[error("evaluation point {point} is (numerically) an eigenvalue of the state matrix")]
    SingularPoint { point: String },

    /// Two independent computations of the same quantity disagree beyond tolerance.
    #[error("cross-check failed: {method_a}={value_a} vs {method_b}={value_b} (tol {tol})")]
    CrossCheck {
        method_a: &'static str,
        value_a: f64,
        method_b: &'static str,
        value_b: f64,
        tol: f64,
    },

    /// The constraint set of a design or SDP is infeasible.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The SDP solver hit its iteration cap before meeting tolerances.
    #[error("solver did not converge within {iterations} iterations")]
    MaxIterations { iterations: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
