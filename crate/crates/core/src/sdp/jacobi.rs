//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Deliberately separate from the linear algebra used inside the
//! interior-point solver, so feasibility verification of returned solutions
//! does not share code with the path that produced them.

use nalgebra::DMatrix;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
/// Input is symmetrized first; returns eigenvalues in ascending order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Largest eigenvalue of a symmetric matrix (0-dimensional input counts as
/// unconstrained, i.e. -infinity).
pub fn max_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m)
        .last()
        .copied()
        .unwrap_or(f64::NEG_INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_matrix() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let e = symmetric_eigenvalues(&m);
        assert_abs_diff_eq!(e[0], -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e[1], 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e[2], 3.0, epsilon = 1e-13);
    }

    #[test]
    fn two_by_two_analytic() {
        // eigenvalues of [[2, 1], [1, 2]] are 1 and 3
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let e = symmetric_eigenvalues(&m);
        assert_abs_diff_eq!(e[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e[1], 3.0, epsilon = 1e-13);
    }

    #[test]
    fn agrees_with_trace_and_det() {
        // random-ish symmetric 5x5; eigenvalue sum = trace, product = det
        let mut m = DMatrix::<f64>::zeros(5, 5);
        let mut seed = 42u64;
        let mut rng = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..5 {
            for j in 0..=i {
                let v = rng();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        let e = symmetric_eigenvalues(&m);
        let sum: f64 = e.iter().sum();
        assert_abs_diff_eq!(sum, m.trace(), epsilon = 1e-10);
        let prod: f64 = e.iter().product();
        assert_abs_diff_eq!(prod, m.determinant(), epsilon = 1e-10);
    }
}
