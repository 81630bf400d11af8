//! Polynomial B-spline bases.
//!
//! The basis of order `N` is the (N+1)-fold convolution of the unit box and
//! is supported on `[0, N+1)`. Piecewise polynomial coefficients are kept in
//! exact rational arithmetic (small integers over a divisor of `(N+1)!`);
//! floats only appear at evaluation time, so downstream tables carry no
//! convolution round-off.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lti::RationalFilter;

type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

/// Largest supported spline order. `15!` still fits comfortably in `i128`
/// rational arithmetic.
pub const MAX_ORDER: usize = 15;

/// B-spline of order `N`: piecewise polynomials on `[k, k+1)` for
/// `k = 0..=N`, plus the sampled FIR filter of its integer samples.
#[derive(Debug, Clone)]
pub struct SplineBasis {
    order: usize,
    /// `pieces[k][j]` is the coefficient of `(t - k)^j` on `[k, k+1)`.
    pieces: Vec<Vec<Q>>,
    sampled_fir: RationalFilter,
}

/// Frame bounds of the integer-shift expansion: for any square-summable
/// coefficient sequence `c`,
/// `a ||c|| <= || sum c(n) phi(. - n) ||_L2 <= b ||c||`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RieszBounds {
    pub a: f64,
    pub b: f64,
    /// Condition ratio `b / a`; converts filter-level worst-case error into a
    /// signal-level noise-to-signal bound.
    pub lambda: f64,
}

impl SplineBasis {
    /// Build the basis of order `N` by repeated exact convolution with the
    /// unit box, `0 <= N <= 15`.
    pub fn new(order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "spline order {order} out of range 0..={MAX_ORDER}"
            )));
        }
        let mut pieces: Vec<Vec<Q>> = vec![vec![q(1, 1)]];
        for _ in 0..order {
            pieces = convolve_with_box(&pieces);
        }
        let sampled_fir = sampled_fir_from_pieces(order, &pieces);
        Ok(SplineBasis {
            order,
            pieces,
            sampled_fir,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Integer samples of the basis as an FIR filter, aligned so the first
    /// nonzero sample carries `z^0`: coefficients `phi(1), ..., phi(N)` for
    /// `N >= 1`, and `[1]` (the sample `phi(0)`) for `N = 0`. With this
    /// alignment the cubic filter is `1/6 + 2/3 z^-1 + 1/6 z^-2` and the
    /// delay bookkeeping of the designs matches the error symbol
    /// `z^-d - psi(z) phi(z)` exactly.
    pub fn sampled_fir(&self) -> &RationalFilter {
        &self.sampled_fir
    }

    /// Index shift between the sampled FIR and the true integer samples:
    /// `sampled_fir[m] = phi(m + shift)`.
    pub fn sample_shift(&self) -> usize {
        if self.order == 0 {
            0
        } else {
            1
        }
    }

    /// Pointwise evaluation; zero outside `[0, N+1)`.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 || t >= (self.order + 1) as f64 {
            return 0.0;
        }
        let k = (t.floor() as usize).min(self.order);
        let tau = t - k as f64;
        horner_q(&self.pieces[k], tau)
    }

    /// Exact rational value at an integer point (left-continuous pieces, so
    /// this is the value of piece `n` at its left endpoint).
    pub fn eval_integer(&self, n: usize) -> Q {
        if n > self.order {
            return q(0, 1);
        }
        self.pieces[n][0]
    }

    /// Exact autocorrelation sequence `g(n) = integral phi(t) phi(t-n) dt`
    /// for `n = 0..=N` (it is even in `n` and vanishes beyond `N`).
    pub fn gram_sequence(&self) -> Vec<Q> {
        let n_ord = self.order;
        let mut g = Vec::with_capacity(n_ord + 1);
        for shift in 0..=n_ord {
            let mut acc = q(0, 1);
            // integral over piece k of phi(t) * phi(t - shift)
            for k in shift..=n_ord {
                let p = &self.pieces[k];
                let qp = &self.pieces[k - shift];
                acc += integral_product(p, qp);
            }
            g.push(acc);
        }
        g
    }

    /// Gram symbol `G(theta) = sum_n g(n) e^{-j n theta}` (real by symmetry).
    pub fn gram_symbol(&self, theta: f64) -> f64 {
        let g = self.gram_sequence();
        let mut acc: f64 = to_f64(g[0]);
        for (n, &gn) in g.iter().enumerate().skip(1) {
            acc += 2.0 * to_f64(gn) * (n as f64 * theta).cos();
        }
        acc
    }

    /// Riesz bounds from the extrema of the Gram symbol over a uniform grid
    /// of at least 64 angles.
    pub fn riesz_bounds(&self, grid_size: usize) -> Result<RieszBounds> {
        if grid_size < 64 {
            return Err(Error::InvalidArgument(format!(
                "riesz bound grid needs at least 64 points, got {grid_size}"
            )));
        }
        let g = self.gram_sequence();
        let gf: Vec<f64> = g.iter().map(|&x| to_f64(x)).collect();
        let symbol = |theta: f64| {
            let mut acc = gf[0];
            for (n, &gn) in gf.iter().enumerate().skip(1) {
                acc += 2.0 * gn * (n as f64 * theta).cos();
            }
            acc
        };
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for k in 0..grid_size {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / grid_size as f64;
            let v = symbol(theta);
            min = min.min(v);
            max = max.max(v);
        }
        if min <= 0.0 {
            return Err(Error::InvalidArgument(
                "Gram symbol is not positive; the shifts do not form a Riesz basis".into(),
            ));
        }
        let a = min.sqrt();
        let b = max.sqrt();
        Ok(RieszBounds { a, b, lambda: b / a })
    }
}

/// One convolution step with the unit box:
/// `phi_next(t) = integral_{t-1}^{t} phi(s) ds`.
///
/// With `P_k` the in-piece antiderivative (zero at the left knot) and `I_k`
/// the full-piece integral, piece `k` of the result is
/// `I_{k-1} + P_k(tau) - P_{k-1}(tau)` in the local variable `tau = t - k`.
fn convolve_with_box(pieces: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n_pieces = pieces.len();
    let anti: Vec<Vec<Q>> = pieces.iter().map(|p| antiderivative(p)).collect();
    let full: Vec<Q> = anti.iter().map(|a| horner_exact_at_one(a)).collect();

    let deg = pieces[0].len();
    let mut out = Vec::with_capacity(n_pieces + 1);
    for k in 0..=n_pieces {
        let mut piece = vec![q(0, 1); deg + 1];
        if k < n_pieces {
            for (j, &c) in anti[k].iter().enumerate() {
                piece[j] += c;
            }
        }
        if k >= 1 {
            for (j, &c) in anti[k - 1].iter().enumerate() {
                piece[j] -= c;
            }
            piece[0] += full[k - 1];
        }
        out.push(piece);
    }
    out
}

fn antiderivative(p: &[Q]) -> Vec<Q> {
    let mut a = vec![q(0, 1); p.len() + 1];
    for (j, &c) in p.iter().enumerate() {
        a[j + 1] = c / q(j as i128 + 1, 1);
    }
    a
}

fn horner_exact_at_one(p: &[Q]) -> Q {
    p.iter().fold(q(0, 1), |acc, &c| acc + c)
}

fn horner_q(p: &[Q], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in p.iter().rev() {
        acc = acc * x + to_f64(c);
    }
    acc
}

fn to_f64(r: Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `integral_0^1 p(tau) q(tau) d tau` exactly.
fn integral_product(p: &[Q], qq: &[Q]) -> Q {
    let mut acc = q(0, 1);
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in qq.iter().enumerate() {
            acc += a * b / q((i + j + 1) as i128, 1);
        }
    }
    acc
}

fn sampled_fir_from_pieces(order: usize, pieces: &[Vec<Q>]) -> RationalFilter {
    if order == 0 {
        return RationalFilter::fir(vec![1.0]);
    }
    let taps: Vec<f64> = (1..=order).map(|n| to_f64(pieces[n][0])).collect();
    RationalFilter::fir(taps)
}

/// Exact rational integer samples as `(numerator, denominator)` pairs,
/// aligned like [`SplineBasis::sampled_fir`]; used by the CLI to print exact
/// values.
pub fn exact_sample_fractions(basis: &SplineBasis) -> Vec<(i128, i128)> {
    if basis.order() == 0 {
        return vec![(1, 1)];
    }
    (1..=basis.order())
        .map(|n| {
            let v = basis.eval_integer(n);
            (*v.numer(), *v.denom())
        })
        .collect()
}
