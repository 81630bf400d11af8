//! Shared helpers for the integration and acceptance suites: seeded random
//! SDP instances, a convexity-based brute-force SDP oracle, and a
//! quadrature oracle for the box-convolution spline definition.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use splinterp_core::sdp::{jacobi, SdpProblem};

/// Random strictly feasible two-variable SDP: one random 6x6 block plus a
/// box block keeping the feasible set inside [-1, 1]^2.
pub fn random_two_var_problem(rng: &mut ChaCha8Rng) -> SdpProblem {
    let n = 6;
    let mut rand_sym = |scale: f64| -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.gen_range(-scale..scale);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    };
    let mut f0 = rand_sym(0.3);
    for i in 0..n {
        f0[(i, i)] -= 1.5;
    }
    let f1 = rand_sym(1.0);
    let f2 = rand_sym(1.0);
    let box_f0 = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, -1.0, -1.0]));
    let box_f1 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, 0.0, 0.0]));
    let box_f2 = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 0.0, 1.0, -1.0]));
    let c1: f64 = rng.gen_range(-1.0..1.0);
    let c2: f64 = rng.gen_range(-1.0..1.0);
    SdpProblem::new(
        DVector::from_vec(vec![c1, c2]),
        vec![n, 4],
        vec![f0, box_f0],
        vec![vec![f1, box_f1], vec![f2, box_f2]],
    )
    .unwrap()
}

/// Brute force minimum objective: a coarse feasible grid seeds a bisection
/// on the objective level; each level is certified by exact golden-section
/// minimization of the (convex) top eigenvalue along the constant-objective
/// line, using only the independent Jacobi eigensolver.
pub fn brute_force_min(p: &SdpProblem) -> f64 {
    let c = &p.objective;
    let cn = (c[0] * c[0] + c[1] * c[1]).sqrt();
    let (cu1, cu2) = (c[0] / cn, c[1] / cn);
    let (t1, t2) = (-cu2, cu1);

    let gmax = |x1: f64, x2: f64| -> f64 {
        p.eval_constraint(&DVector::from_vec(vec![x1, x2]))
            .iter()
            .map(jacobi::max_eigenvalue)
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let mut best = f64::INFINITY;
    let coarse = 120;
    for i in 0..=coarse {
        for j in 0..=coarse {
            let x1 = -1.0 + 2.0 * i as f64 / coarse as f64;
            let x2 = -1.0 + 2.0 * j as f64 / coarse as f64;
            if gmax(x1, x2) <= 0.0 {
                best = best.min(c[0] * x1 + c[1] * x2);
            }
        }
    }
    assert!(best.is_finite(), "coarse grid found no feasible point");

    let level_feasible = |v: f64| -> bool {
        let base1 = v / cn * cu1;
        let base2 = v / cn * cu2;
        let g = |t: f64| gmax(base1 + t * t1, base2 + t * t2);
        let (mut a, mut b) = (-2.0f64, 2.0f64);
        const INVPHI: f64 = 0.618_033_988_749_894_9;
        let mut c1 = b - INVPHI * (b - a);
        let mut c2 = a + INVPHI * (b - a);
        let (mut f1, mut f2) = (g(c1), g(c2));
        for _ in 0..120 {
            if f1 < f2 {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - INVPHI * (b - a);
                f1 = g(c1);
            } else {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + INVPHI * (b - a);
                f2 = g(c2);
            }
        }
        f1.min(f2) <= 0.0
    };

    let mut hi = best;
    let mut lo = best - 0.05;
    while level_feasible(lo) {
        hi = lo;
        lo -= 0.05;
        assert!(lo > -4.0, "objective unbounded over the box?");
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if level_feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[allow(dead_code)] // used by the acceptance binary, not every test binary
/// Independent spline oracle: the (N+1)-fold box convolution evaluated by
/// recursive Gauss-Legendre quadrature split at the knots (exact for
/// polynomial degree <= 9 per level).
pub fn box_convolution_oracle(order: usize, t: f64) -> f64 {
    if order == 0 {
        return if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 };
    }
    let lo = (t - 1.0).max(0.0);
    let hi = t.min(order as f64 + 1.0);
    if hi <= lo {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut a = lo;
    while a < hi - 1e-13 {
        let b = (a.floor() + 1.0).min(hi);
        acc += gauss5(|s| box_convolution_oracle(order - 1, s), a, b);
        a = b;
    }
    acc
}

#[allow(dead_code)]
fn gauss5(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in X.iter().zip(W.iter()) {
        acc += w * f(c + h * x);
    }
    acc * h
}
