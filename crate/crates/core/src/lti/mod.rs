//! Discrete-time LTI foundations: rational filters in powers of `z^-1`,
//! state-space realizations, stability, frequency response, and the
//! H-infinity norm.
//!
//! Coefficient convention used everywhere in this crate: polynomials are
//! stored **ascending in `z^-1`**, so `num = [b0, b1, b2]` means
//! `b0 + b1 z^-1 + b2 z^-2`.

mod hinf;
mod state_space;

pub use hinf::hinf_norm;
pub use state_space::StateSpace;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pole moduli within `1 - TOL_STABILITY` count as stable; anything at or
/// beyond that is rejected. Separates genuinely marginal poles from rounding.
pub const TOL_STABILITY: f64 = 1e-9;

/// Real-coefficient rational transfer function in `z^-1`.
///
/// Invariants maintained by the constructor: the denominator constant
/// coefficient is nonzero (causal realizability) and neither polynomial has
/// trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFilter {
    /// Numerator coefficients, ascending in `z^-1`.
    pub num: Vec<f64>,
    /// Denominator coefficients, ascending in `z^-1`; `den[0] != 0`.
    pub den: Vec<f64>,
}

impl RationalFilter {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if den.is_empty() || den[0] == 0.0 {
            return Err(Error::NonCausal);
        }
        let mut f = RationalFilter { num, den };
        f.trim();
        Ok(f)
    }

    /// FIR filter from its tap list (denominator 1).
    pub fn fir(taps: Vec<f64>) -> Self {
        let mut f = RationalFilter {
            num: taps,
            den: vec![1.0],
        };
        f.trim();
        f
    }

    /// The constant filter `c`.
    pub fn constant(c: f64) -> Self {
        RationalFilter::fir(vec![c])
    }

    /// Pure delay `z^-d`.
    pub fn delay(d: usize) -> Self {
        let mut num = vec![0.0; d + 1];
        num[d] = 1.0;
        RationalFilter::fir(num)
    }

    fn trim(&mut self) {
        while self.num.len() > 1 && *self.num.last().unwrap() == 0.0 {
            self.num.pop();
        }
        while self.den.len() > 1 && *self.den.last().unwrap() == 0.0 {
            self.den.pop();
        }
        if self.num.is_empty() {
            self.num.push(0.0);
        }
    }

    /// Degree of the numerator in `z^-1`.
    pub fn num_degree(&self) -> usize {
        self.num.len() - 1
    }

    /// Degree of the denominator in `z^-1`.
    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    pub fn is_fir(&self) -> bool {
        self.den.len() == 1
    }

    /// Evaluate at a complex point `z` (not `z^-1`).
    ///
    /// Uses Horner's rule in `w = z^-1`. For stable filters this is the
    /// analytic continuation valid everywhere outside the closed unit disc.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = Complex64::new(1.0, 0.0) / z;
        horner(&self.num, w) / horner(&self.den, w)
    }

    /// Evaluate on the unit circle at angle `theta`.
    pub fn eval_theta(&self, theta: f64) -> Complex64 {
        let w = Complex64::from_polar(1.0, -theta);
        horner(&self.num, w) / horner(&self.den, w)
    }

    /// DC gain, i.e. the value at `z = 1`.
    pub fn dc_gain(&self) -> f64 {
        self.num.iter().sum::<f64>() / self.den.iter().sum::<f64>()
    }

    /// Series (cascade) connection: the product of the two transfer functions.
    /// Coefficients are exact polynomial convolutions.
    pub fn series(&self, other: &RationalFilter) -> RationalFilter {
        RationalFilter::new(
            poly_mul(&self.num, &other.num),
            poly_mul(&self.den, &other.den),
        )
        .expect("product of causal filters is causal")
    }

    /// Difference `self - other` over the common denominator.
    pub fn sub(&self, other: &RationalFilter) -> RationalFilter {
        let num = poly_sub(
            &poly_mul(&self.num, &other.den),
            &poly_mul(&other.num, &self.den),
        );
        RationalFilter::new(num, poly_mul(&self.den, &other.den))
            .expect("difference of causal filters is causal")
    }

    /// Scale all numerator coefficients.
    pub fn scale(&self, s: f64) -> RationalFilter {
        let mut f = self.clone();
        for c in &mut f.num {
            *c *= s;
        }
        f.trim();
        f
    }

    /// Poles in the `z` plane (roots of the denominator written in positive
    /// powers), via companion-matrix eigenvalues. Delay surplus of the
    /// numerator contributes poles at the origin, which are stable and not
    /// reported here.
    pub fn poles(&self) -> Vec<Complex64> {
        poly_roots(&reverse_to_z(&self.den))
    }

    /// True iff every pole has modulus `< 1 - TOL_STABILITY`.
    pub fn is_stable(&self) -> bool {
        self.poles()
            .iter()
            .all(|p| p.norm() < 1.0 - TOL_STABILITY)
    }

    /// Largest pole modulus (0 for FIR).
    pub fn pole_radius(&self) -> f64 {
        self.poles().iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Causal filtering of a finite sequence, zero-extended to the left.
    /// Output has the same length as the input.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.apply_padded(x, 0)
    }

    /// Causal filtering with `tail` extra output samples (input zero-padded
    /// on the right).
    pub fn apply_padded(&self, x: &[f64], tail: usize) -> Vec<f64> {
        let n = x.len() + tail;
        let a0 = self.den[0];
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for (k, &b) in self.num.iter().enumerate() {
                if i >= k && i - k < x.len() {
                    acc += b * x[i - k];
                }
            }
            for (k, &a) in self.den.iter().enumerate().skip(1) {
                if i >= k {
                    acc -= a * y[i - k];
                }
            }
            y[i] = acc / a0;
        }
        y
    }

    /// Impulse response truncated to `len` samples.
    pub fn impulse_response(&self, len: usize) -> Vec<f64> {
        let mut delta = vec![0.0; len.max(1)];
        delta[0] = 1.0;
        self.apply(&delta)
    }

    /// Frequency response on a uniform grid of `grid_size` angles in `[0, 2pi)`.
    ///
    /// Evaluation at a pole on the unit circle yields a non-finite sample,
    /// which is kept (flagged) rather than masked.
    pub fn frequency_response(&self, grid_size: usize) -> Result<FrequencyResponse> {
        if grid_size < 2 {
            return Err(Error::InvalidArgument(format!(
                "frequency grid needs at least 2 points, got {grid_size}"
            )));
        }
        let grid: Vec<f64> = (0..grid_size)
            .map(|k| 2.0 * std::f64::consts::PI * k as f64 / grid_size as f64)
            .collect();
        let values = grid.iter().map(|&t| self.eval_theta(t)).collect();
        Ok(FrequencyResponse { grid, values })
    }

    /// Peak magnitude over the unit circle. See [`hinf_norm`].
    pub fn hinf_norm(&self) -> Result<f64> {
        hinf_norm(&self.realize()?)
    }

    /// Minimal controllable-canonical state-space realization.
    /// See [`StateSpace::realize`].
    pub fn realize(&self) -> Result<StateSpace> {
        StateSpace::realize(self)
    }
}

/// Complex frequency response samples on a grid of angles.
#[derive(Debug, Clone)]
pub struct FrequencyResponse {
    /// Angles in `[0, 2pi)`, strictly increasing.
    pub grid: Vec<f64>,
    /// Complex response at each angle.
    pub values: Vec<Complex64>,
}

impl FrequencyResponse {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// CSV with columns `theta,re,im,mag_db`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im,mag_db\n");
        for (t, v) in self.grid.iter().zip(&self.values) {
            let mag_db = 20.0 * v.norm().log10();
            out.push_str(&format!("{t:.16e},{:.16e},{:.16e},{mag_db:.10}\n", v.re, v.im));
        }
        out
    }
}

pub(crate) fn horner(coeffs: &[f64], w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * w + c;
    }
    acc
}

/// Polynomial product (convolution), ascending coefficients.
pub fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub fn poly_sub(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len().max(q.len())];
    for (i, &a) in p.iter().enumerate() {
        out[i] += a;
    }
    for (i, &b) in q.iter().enumerate() {
        out[i] -= b;
    }
    out
}

/// Rewrite an ascending-in-`z^-1` polynomial as an ascending-in-`z`
/// coefficient list of the same roots: `a0 + a1 z^-1 + ... + ap z^-p`
/// has the `z`-plane roots of `a0 z^p + ... + ap`.
fn reverse_to_z(den: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = den.to_vec();
    v.reverse(); // now [ap, ..., a0] = ascending powers of z
    v
}

/// Roots of a real polynomial given by ascending coefficients
/// `c[0] + c[1] x + ... + c[n] x^n`, via companion-matrix eigenvalues.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    // strip leading (high-order) zeros
    let mut c = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let mut comp = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}
