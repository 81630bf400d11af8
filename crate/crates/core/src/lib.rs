//! Design and verification of causal approximations to polynomial B-spline
//! interpolation filters.
//!
//! The classical direct B-spline filter is unstable (and its practical
//! implementation non-causal), which rules it out for real-time use. This
//! crate designs causal, stable substitutes that minimize the worst-case
//! (peak-over-frequency) reconstruction error:
//!
//! - [`closed_form`]: the exact minimizer for the cubic spline, in closed form,
//!   for any reconstruction delay;
//! - [`fir_lmi`]: FIR designs of any spline order, via the bounded-real lemma
//!   and a small dense semidefinite program;
//! - [`sdp`]: the interior-point solver backing the FIR designs;
//! - [`lti`]: rational filters, state-space realizations, and a certified
//!   H-infinity norm;
//! - [`bspline`]: B-spline bases with exact rational coefficients, their
//!   sampled FIR filters, and Riesz bounds;
//! - [`reconstruct`]: an end-to-end sample/filter/hold simulator with
//!   noise-to-signal metrics.

pub mod bspline;
pub mod closed_form;
pub mod error;
pub mod fir_lmi;
pub mod lti;
pub mod reconstruct;
pub mod refdata;
pub mod sdp;

pub use error::{Error, Result};
pub use lti::{FrequencyResponse, RationalFilter, StateSpace};
