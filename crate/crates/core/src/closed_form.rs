//! Closed-form results for the cubic spline: the classical (stable but
//! non-causal) inverse filter and the causal filter of minimum worst-case
//! reconstruction error for a given delay.
//!
//! The cubic sampled filter factors as
//! `phi(z) = (z - alpha1)(z - alpha2) / (6 z^2)` with `alpha1 = -2 - sqrt(3)`
//! outside and `alpha2 = -2 + sqrt(3)` inside the unit circle. A causal
//! stable `psi` exists with residual `E(z) = z^-d - psi(z) phi(z)` exactly
//! when `E(alpha1) = alpha1^-d`; among such residuals the constant
//! `E = alpha1^-d` has minimum peak magnitude (a one-point interpolation
//! problem), which pins down `psi` in closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::RationalFilter;

/// `alpha1 = -2 - sqrt(3)`, the expansion pole outside the unit circle.
pub const ALPHA1: f64 = -3.732_050_807_568_877;
/// `alpha2 = -2 + sqrt(3) = 1/alpha1`, inside the unit circle.
pub const ALPHA2: f64 = -0.267_949_192_431_122_7;

/// Pole pair of the cubic sampled filter.
#[derive(Debug, Clone, Copy)]
pub struct CubicConstants {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Default for CubicConstants {
    fn default() -> Self {
        CubicConstants {
            alpha1: ALPHA1,
            alpha2: ALPHA2,
        }
    }
}

/// The classical inverse of the cubic sampled filter, split into a cascade
/// of a causal and an anti-causal one-pole section:
///
/// `psi(z) = gain * ( 1/(1 - alpha z^-1) + 1/(1 - alpha z) - 1 )`,
///
/// with `alpha = -2 + sqrt(3)` and `gain = -6 alpha / (1 - alpha^2)`.
/// Stable, zero-phase, non-causal; its impulse response is
/// `gain * alpha^|n|`.
#[derive(Debug, Clone)]
pub struct NoncausalInverse {
    pub alpha: f64,
    pub gain: f64,
    /// The causal one-pole section `1/(1 - alpha z^-1)`.
    pub causal: RationalFilter,
    /// The anti-causal section is the same one-pole filter run on reversed
    /// time; kept explicitly for callers that stream the two passes.
    pub anticausal: RationalFilter,
}

/// The causal/anti-causal decomposition of the non-causal cubic inverse.
pub fn noncausal_inverse() -> NoncausalInverse {
    let alpha = ALPHA2;
    let gain = -6.0 * alpha / (1.0 - alpha * alpha);
    let one_pole = RationalFilter::new(vec![1.0], vec![1.0, -alpha]).unwrap();
    NoncausalInverse {
        alpha,
        gain,
        causal: one_pole.clone(),
        anticausal: one_pole,
    }
}

impl NoncausalInverse {
    /// Bi-infinite impulse response sample `gain * alpha^|n|`.
    pub fn impulse(&self, n: i64) -> f64 {
        self.gain * self.alpha.powi(n.unsigned_abs() as i32)
    }

    /// Transfer function value at a point on (or near) the unit circle.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let a = Complex64::new(self.alpha, 0.0);
        self.gain * (one / (one - a / z) + one / (one - a * z) - one)
    }

    /// Filter a finite sequence with zero initial state on the forward pass
    /// and zero final state on the backward pass.
    ///
    /// This solves the banded interpolation system whose symbol is
    /// `z phi(z) = (1/6) z + 2/3 + (1/6) z^-1`, truncated to the data window;
    /// output values away from the boundaries match the bi-infinite filter.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        if n == 0 {
            return Vec::new();
        }
        let mut fwd = vec![0.0; n];
        let mut prev = 0.0;
        for i in 0..n {
            fwd[i] = x[i] + self.alpha * prev;
            prev = fwd[i];
        }
        let mut bwd = vec![0.0; n];
        let mut next = 0.0;
        for i in (0..n).rev() {
            bwd[i] = x[i] + self.alpha * next;
            next = bwd[i];
        }
        (0..n)
            .map(|i| self.gain * (fwd[i] + bwd[i] - x[i]))
            .collect()
    }
}

/// The causal stable cubic filter of minimum worst-case residual for delay
/// `d`, in expanded rational form:
///
/// `psi(z) = sum_{m=0}^{d-1} (-6 alpha1^{m-d}) z^-m / (1 - alpha2 z^-1)`.
///
/// The factor `(z - alpha1)` cancels symbolically in this form (the geometric
/// sum is the exact quotient), so no floating-point pole-zero cancellation is
/// ever performed. For `d = 0` the sum is empty and the filter is zero.
pub fn optimal_cubic(d: usize) -> RationalFilter {
    let num: Vec<f64> = (0..d).map(|m| -6.0 * ALPHA1.powi(m as i32 - d as i32)).collect();
    let num = if num.is_empty() { vec![0.0] } else { num };
    RationalFilter::new(num, vec![1.0, -ALPHA2]).unwrap()
}

/// Minimum achievable peak residual magnitude for delay `d`:
/// `|alpha1|^-d = (2 - sqrt(3))^d`.
pub fn optimal_value(d: usize) -> f64 {
    (2.0 - 3.0f64.sqrt()).powi(d as i32)
}

/// The residual `E(z) = z^-d - psi(z) phi(z)` for the cubic sampled filter.
pub fn cubic_residual(psi: &RationalFilter, d: usize) -> RationalFilter {
    let phi = RationalFilter::fir(vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]);
    RationalFilter::delay(d).sub(&psi.series(&phi))
}

/// Checks the stability-forcing interpolation condition
/// `E(alpha1) = alpha1^-d` by evaluating the analytic continuation of the
/// stable residual at the real point `alpha1` outside the unit circle.
pub fn interpolation_constraint_check(e: &RationalFilter, d: usize) -> Result<bool> {
    if !e.is_stable() {
        return Err(Error::Unstable {
            pole_modulus: e.pole_radius(),
        });
    }
    let val = e.eval(Complex64::new(ALPHA1, 0.0));
    let target = ALPHA1.powi(-(d as i32));
    Ok((val - target).norm() < 1e-9)
}
