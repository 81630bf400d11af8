//! Discrete-time state-space realizations.

use nalgebra::{Complex, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::{RationalFilter, TOL_STABILITY};

/// Discrete-time real state-space system `x+ = Ax + Bu`, `y = Cx + Du`.
///
/// Filters built by this crate are SISO (`m = p = 1`); the type itself only
/// requires dimension consistency.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch("A must be square".into()));
        }
        if b.nrows() != n {
            return Err(Error::DimensionMismatch("B row count must match A".into()));
        }
        if c.ncols() != n {
            return Err(Error::DimensionMismatch("C column count must match A".into()));
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch("D must be p x m".into()));
        }
        Ok(StateSpace { a, b, c, d })
    }

    /// SISO system with zero states (a pure gain).
    pub fn gain(d: f64) -> Self {
        StateSpace {
            a: DMatrix::zeros(0, 0),
            b: DMatrix::zeros(0, 1),
            c: DMatrix::zeros(1, 0),
            d: DMatrix::from_element(1, 1, d),
        }
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Controllable-canonical realization of a causal rational filter.
    ///
    /// The state dimension is `max(deg num, deg den)` in `z^-1`, which is
    /// minimal for the canonical form once trailing zeros are trimmed. For an
    /// FIR filter this reduces to the shift-register form: `A` is the upper
    /// shift matrix, `B` the last unit vector, `D` the leading tap.
    pub fn realize(f: &RationalFilter) -> Result<Self> {
        if f.den.is_empty() || f.den[0] == 0.0 {
            return Err(Error::NonCausal);
        }
        let a0 = f.den[0];
        let n = f.num_degree().max(f.den_degree());
        if n == 0 {
            return Ok(StateSpace::gain(f.num[0] / a0));
        }
        // monic denominator z^n + at[1] z^(n-1) + ... + at[n]
        let mut at = vec![0.0; n + 1];
        for (i, &a) in f.den.iter().enumerate() {
            at[i] = a / a0;
        }
        let mut bt = vec![0.0; n + 1];
        for (i, &b) in f.num.iter().enumerate() {
            bt[i] = b / a0;
        }

        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..n - 1 {
            a[(i, i + 1)] = 1.0;
        }
        for j in 0..n {
            a[(n - 1, j)] = -at[n - j];
        }
        let mut b = DMatrix::<f64>::zeros(n, 1);
        b[(n - 1, 0)] = 1.0;
        // y = sum_i (bt[i] - bt[0]*at[i]) z^-i u + bt[0] u
        let mut c = DMatrix::<f64>::zeros(1, n);
        for j in 0..n {
            c[(0, j)] = bt[n - j] - bt[0] * at[n - j];
        }
        let d = DMatrix::from_element(1, 1, bt[0]);
        Ok(StateSpace { a, b, c, d })
    }

    /// Eigenvalues of the state matrix.
    pub fn poles(&self) -> Vec<Complex64> {
        if self.order() == 0 {
            return Vec::new();
        }
        self.a.complex_eigenvalues().iter().copied().collect()
    }

    pub fn is_stable(&self) -> bool {
        self.poles().iter().all(|p| p.norm() < 1.0 - TOL_STABILITY)
    }

    /// Transfer function value `C (zI - A)^-1 B + D` at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.order();
        let d = Complex64::new(self.d[(0, 0)], 0.0);
        if n == 0 {
            return d;
        }
        let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex::new(-self.a[(i, j)], 0.0);
            }
            m[(i, i)] += z;
        }
        let rhs = DVector::<Complex<f64>>::from_iterator(
            n,
            (0..n).map(|i| Complex::new(self.b[(i, 0)], 0.0)),
        );
        let x = m
            .lu()
            .solve(&rhs)
            .unwrap_or_else(|| DVector::from_element(n, Complex::new(f64::INFINITY, 0.0)));
        let mut acc = d;
        for i in 0..n {
            acc += Complex64::new(self.c[(0, i)], 0.0) * x[i];
        }
        acc
    }

    /// Precompute a Hessenberg form for fast repeated frequency evaluation.
    pub fn freq_evaluator(&self) -> FreqEvaluator {
        FreqEvaluator::new(self)
    }
}

/// Evaluates `C (zI - A)^-1 B + D` in `O(n^2)` per point by reducing `A` to
/// upper Hessenberg form once.
pub struct FreqEvaluator {
    h: DMatrix<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
    d: f64,
}

impl FreqEvaluator {
    fn new(ss: &StateSpace) -> Self {
        let n = ss.order();
        let d = ss.d[(0, 0)];
        if n == 0 {
            return FreqEvaluator {
                h: DMatrix::zeros(0, 0),
                b: DVector::zeros(0),
                c: DVector::zeros(0),
                d,
            };
        }
        // Householder reduction A -> Q' A Q upper Hessenberg; carry B and C along.
        let mut h = ss.a.clone();
        let mut b = DVector::from_iterator(n, (0..n).map(|i| ss.b[(i, 0)]));
        let mut c = DVector::from_iterator(n, (0..n).map(|j| ss.c[(0, j)]));
        for k in 0..n.saturating_sub(2) {
            // zero h[k+2.., k]
            let mut v = DVector::<f64>::zeros(n);
            let mut alpha = 0.0;
            for i in k + 1..n {
                alpha += h[(i, k)] * h[(i, k)];
            }
            alpha = alpha.sqrt();
            if alpha == 0.0 {
                continue;
            }
            if h[(k + 1, k)] > 0.0 {
                alpha = -alpha;
            }
            v[k + 1] = h[(k + 1, k)] - alpha;
            for i in k + 2..n {
                v[i] = h[(i, k)];
            }
            let vtv: f64 = v.dot(&v);
            if vtv == 0.0 {
                continue;
            }
            let beta = 2.0 / vtv;
            // H = I - beta v v'; apply H on left and right of h, left of b, right of c
            let vth = v.transpose() * &h; // 1 x n
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] -= beta * v[i] * vth[(0, j)];
                }
            }
            let hv = &h * &v; // n x 1
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] -= beta * hv[i] * v[j];
                }
            }
            let vb = v.dot(&b);
            for i in 0..n {
                b[i] -= beta * v[i] * vb;
            }
            let vc = v.dot(&c);
            for i in 0..n {
                c[i] -= beta * v[i] * vc;
            }
        }
        FreqEvaluator { h, b, c, d }
    }

    /// Transfer function value at `z = e^{j theta}`.
    pub fn eval_theta(&self, theta: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, theta))
    }

    /// Transfer function value at an arbitrary complex `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.h.nrows();
        let d = Complex64::new(self.d, 0.0);
        if n == 0 {
            return d;
        }
        // Solve (zI - H) x = b with H upper Hessenberg, via Gaussian
        // elimination with partial pivoting restricted to the subdiagonal.
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(-self.h[(i, j)], 0.0);
            }
            m[(i, i)] += z;
        }
        let mut rhs: Vec<Complex64> = (0..n).map(|i| Complex64::new(self.b[i], 0.0)).collect();
        #[allow(clippy::needless_range_loop)]
        for k in 0..n - 1 {
            // pivot between rows k and k+1
            if m[(k + 1, k)].norm() > m[(k, k)].norm() {
                for j in k..n {
                    let t = m[(k, j)];
                    m[(k, j)] = m[(k + 1, j)];
                    m[(k + 1, j)] = t;
                }
                rhs.swap(k, k + 1);
            }
            let piv = m[(k, k)];
            if piv.norm() == 0.0 {
                return Complex64::new(f64::INFINITY, 0.0);
            }
            let factor = m[(k + 1, k)] / piv;
            for j in k..n {
                let v = m[(k, j)];
                m[(k + 1, j)] -= factor * v;
            }
            let r = rhs[k];
            rhs[k + 1] -= factor * r;
        }
        // back substitution
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for j in i + 1..n {
                acc -= m[(i, j)] * x[j];
            }
            if m[(i, i)].norm() == 0.0 {
                return Complex64::new(f64::INFINITY, 0.0);
            }
            x[i] = acc / m[(i, i)];
        }
        let mut acc = d;
        for (i, xi) in x.iter().enumerate() {
            acc += Complex64::new(self.c[i], 0.0) * xi;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn realize_pure_delay() {
        let ss = StateSpace::realize(&RationalFilter::delay(1)).unwrap();
        assert_eq!(ss.order(), 1);
        assert_abs_diff_eq!(ss.a[(0, 0)], 0.0);
        assert_abs_diff_eq!(ss.b[(0, 0)], 1.0);
        assert_abs_diff_eq!(ss.c[(0, 0)], 1.0);
        assert_abs_diff_eq!(ss.d[(0, 0)], 0.0);
    }

    #[test]
    fn realize_cubic_fir() {
        let phi = RationalFilter::fir(vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]);
        let ss = StateSpace::realize(&phi).unwrap();
        assert_eq!(ss.order(), 2);
        assert_abs_diff_eq!(ss.d[(0, 0)], 1.0 / 6.0, epsilon = 1e-15);
        // shift-register A for an FIR filter
        assert_abs_diff_eq!(ss.a[(0, 1)], 1.0);
        assert_abs_diff_eq!(ss.a[(1, 0)], 0.0);
        assert_abs_diff_eq!(ss.a[(1, 1)], 0.0);
        // transfer function matches on the circle
        for k in 0..32 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
            let direct = phi.eval_theta(theta);
            let viass = ss.eval(Complex64::from_polar(1.0, theta));
            assert_abs_diff_eq!((direct - viass).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn realize_rejects_noncausal() {
        assert!(StateSpace::realize(&RationalFilter {
            num: vec![1.0],
            den: vec![0.0, 1.0]
        })
        .is_err());
    }

    #[test]
    fn hessenberg_evaluator_matches_direct() {
        let f = RationalFilter::new(vec![0.3, -0.2, 0.5, 0.1], vec![1.0, -0.9, 0.5, -0.1])
            .unwrap();
        let ss = f.realize().unwrap();
        let ev = ss.freq_evaluator();
        for k in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let z = Complex64::from_polar(1.0, theta);
            assert_abs_diff_eq!((ev.eval(z) - ss.eval(z)).norm(), 0.0, epsilon = 1e-11);
            assert_abs_diff_eq!((ev.eval(z) - f.eval(z)).norm(), 0.0, epsilon = 1e-11);
        }
    }
}
