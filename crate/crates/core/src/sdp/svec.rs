//! Symmetric-matrix vectorization with the scaled lower triangle
//! (off-diagonal entries times sqrt(2)), so that dot products of vectors
//! equal Frobenius inner products of the matrices.

use nalgebra::DMatrix;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

pub fn svec_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Column-major lower-triangle vectorization of a symmetric matrix.
pub fn svec(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(svec_dim(n));
    for j in 0..n {
        out.push(m[(j, j)]);
        for i in j + 1..n {
            out.push(SQRT2 * 0.5 * (m[(i, j)] + m[(j, i)]));
        }
    }
    out
}

pub fn smat(v: &[f64], n: usize) -> DMatrix<f64> {
    debug_assert_eq!(v.len(), svec_dim(n));
    let mut m = DMatrix::zeros(n, n);
    let mut idx = 0;
    for j in 0..n {
        m[(j, j)] = v[idx];
        idx += 1;
        for i in j + 1..n {
            let w = v[idx] / SQRT2;
            m[(i, j)] = w;
            m[(j, i)] = w;
            idx += 1;
        }
    }
    m
}
