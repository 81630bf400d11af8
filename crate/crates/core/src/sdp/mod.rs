//! Small dense semidefinite programming:
//!
//! ```text
//! minimize    c' x
//! subject to  F(x) = F0 + x1 F1 + ... + xm Fm  <= 0   (block-diagonal)
//!             G x = h                                  (optional equalities)
//! ```
//!
//! Sized for problems with up to roughly 60 scalar variables and 20x20
//! blocks. The solver is a primal-dual path-following interior-point method
//! with Nesterov-Todd scaling, a Mehrotra predictor-corrector, a dense
//! Cholesky of the Schur complement, and a homogeneous self-dual embedding
//! for infeasibility certificates. Everything is deterministic: identical
//! inputs produce bit-identical outputs.

pub mod jacobi;
mod solver;
mod svec;

pub use solver::{solve, SolveOptions};
pub use svec::{smat, svec, svec_dim};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear objective plus one block-diagonal linear matrix inequality and
/// optional linear equality constraints.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    /// Objective vector `c`.
    pub objective: DVector<f64>,
    /// Block sizes of the LMI.
    pub block_sizes: Vec<usize>,
    /// Constant term per block.
    pub f0: Vec<DMatrix<f64>>,
    /// `f[i][b]` is the coefficient of variable `i` in block `b`.
    pub f: Vec<Vec<DMatrix<f64>>>,
    /// Equality constraints `eq_a x = eq_b`, rows linearly independent.
    pub eq: Option<(DMatrix<f64>, DVector<f64>)>,
}

impl SdpProblem {
    pub fn new(
        objective: DVector<f64>,
        block_sizes: Vec<usize>,
        f0: Vec<DMatrix<f64>>,
        f: Vec<Vec<DMatrix<f64>>>,
    ) -> Result<Self> {
        let p = SdpProblem {
            objective,
            block_sizes,
            f0,
            f,
            eq: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_equalities(mut self, a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        if a.ncols() != self.n_vars() || a.nrows() != b.len() {
            return Err(Error::DimensionMismatch(
                "equality constraint dimensions do not match the variable count".into(),
            ));
        }
        self.eq = Some((a, b));
        Ok(self)
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    fn validate(&self) -> Result<()> {
        let m = self.n_vars();
        if self.f.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "expected {m} coefficient matrix lists, got {}",
                self.f.len()
            )));
        }
        if self.f0.len() != self.n_blocks() {
            return Err(Error::DimensionMismatch(
                "constant term block count mismatch".into(),
            ));
        }
        let check_sym = |mat: &DMatrix<f64>, nb: usize| -> Result<()> {
            if mat.nrows() != nb || mat.ncols() != nb {
                return Err(Error::DimensionMismatch("block size mismatch".into()));
            }
            let tol = 1e-12 * (1.0 + mat.norm());
            for i in 0..nb {
                for j in 0..i {
                    if (mat[(i, j)] - mat[(j, i)]).abs() > tol {
                        return Err(Error::InvalidArgument(
                            "constraint matrices must be symmetric".into(),
                        ));
                    }
                }
            }
            Ok(())
        };
        for (b, &nb) in self.block_sizes.iter().enumerate() {
            check_sym(&self.f0[b], nb)?;
            for fi in &self.f {
                if fi.len() != self.n_blocks() {
                    return Err(Error::DimensionMismatch(
                        "per-variable block count mismatch".into(),
                    ));
                }
                check_sym(&fi[b], nb)?;
            }
        }
        Ok(())
    }

    /// `F(x) = F0 + sum_i x_i F_i`, per block.
    pub fn eval_constraint(&self, x: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out = self.f0.clone();
        for (i, fi) in self.f.iter().enumerate() {
            for (b, fib) in fi.iter().enumerate() {
                out[b] += fib * x[i];
            }
        }
        out
    }

    /// Serialize to the documented JSON schema (row-major dense blocks).
    pub fn to_json(&self) -> String {
        let schema = ProblemSchema {
            objective: self.objective.iter().copied().collect(),
            blocks: self.block_sizes.clone(),
            f0: self.f0.iter().map(mat_to_rows) .collect(),
            f: self
                .f
                .iter()
                .map(|fi| fi.iter().map(mat_to_rows).collect())
                .collect(),
            eq_a: self
                .eq
                .as_ref()
                .map(|(a, _)| (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()),
            eq_b: self.eq.as_ref().map(|(_, b)| b.iter().copied().collect()),
        };
        serde_json::to_string_pretty(&schema).expect("schema serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let schema: ProblemSchema = serde_json::from_str(text)?;
        let nblocks = schema.blocks.len();
        let parse_blocks = |rows: &Vec<Vec<f64>>| -> Result<Vec<DMatrix<f64>>> {
            if rows.len() != nblocks {
                return Err(Error::DimensionMismatch("block count mismatch".into()));
            }
            rows.iter()
                .zip(&schema.blocks)
                .map(|(data, &nb)| {
                    if data.len() != nb * nb {
                        return Err(Error::DimensionMismatch("block data length".into()));
                    }
                    Ok(DMatrix::from_row_slice(nb, nb, data))
                })
                .collect()
        };
        let f0 = parse_blocks(&schema.f0)?;
        let f = schema
            .f
            .iter()
            .map(parse_blocks)
            .collect::<Result<Vec<_>>>()?;
        let mut p = SdpProblem::new(
            DVector::from_vec(schema.objective),
            schema.blocks,
            f0,
            f,
        )?;
        if let (Some(a_rows), Some(b)) = (schema.eq_a, schema.eq_b) {
            let ncols = p.n_vars();
            let mut a = DMatrix::zeros(a_rows.len(), ncols);
            for (i, row) in a_rows.iter().enumerate() {
                if row.len() != ncols {
                    return Err(Error::DimensionMismatch("equality row length".into()));
                }
                for (j, &v) in row.iter().enumerate() {
                    a[(i, j)] = v;
                }
            }
            p = p.with_equalities(a, DVector::from_vec(b))?;
        }
        Ok(p)
    }
}

fn mat_to_rows(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct ProblemSchema {
    objective: Vec<f64>,
    blocks: Vec<usize>,
    f0: Vec<Vec<f64>>,
    f: Vec<Vec<Vec<f64>>>,
    eq_a: Option<Vec<Vec<f64>>>,
    eq_b: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Optimal,
    /// The constraints admit no solution; `certificate` holds a dual
    /// improving ray.
    Infeasible,
    /// The objective is unbounded below over the feasible set.
    Unbounded,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KktResiduals {
    /// Relative primal residual (cone + equality rows).
    pub primal: f64,
    /// Relative dual residual.
    pub dual: f64,
    /// Relative duality gap.
    pub gap: f64,
}

/// Dual improving ray `z >= 0` with `sum_i <F_i, Z> ~ 0` per variable and
/// `<-F0, Z> = -1` (plus an equality multiplier when equalities are present),
/// certifying that no `x` satisfies the constraints.
#[derive(Debug, Clone)]
pub struct InfeasibilityCertificate {
    pub z_blocks: Vec<DMatrix<f64>>,
    pub eq_multiplier: Option<DVector<f64>>,
    /// `||sum_i <F_i, Z> e_i + eq_a' y||`, should be ~0 for a valid ray.
    pub stationarity_residual: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: DVector<f64>,
    pub objective_value: f64,
    /// Dual objective at the reported iterate; a lower bound on the optimal
    /// value up to the reported dual residual.
    pub dual_objective: f64,
    pub status: SolveStatus,
    pub kkt_residuals: KktResiduals,
    pub iterations: usize,
    pub certificate: Option<InfeasibilityCertificate>,
}

/// Feasibility report for a candidate point, produced with the independent
/// Jacobi eigensolver path rather than the solver's own factorizations.
#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub lambda_max: f64,
    pub eq_residual: f64,
    pub cone_feasible: bool,
    pub eq_feasible: bool,
    pub feasible: bool,
}

/// Default tolerance on `lambda_max(F(x))` for calling a point feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Default tolerance on `||eq_a x - eq_b||`.
pub const EQ_TOL: f64 = 1e-8;

/// Evaluate `F(x)` and `eq_a x - eq_b` and report verdicts at the stated
/// tolerances.
pub fn check_feasible(p: &SdpProblem, x: &DVector<f64>) -> FeasibilityReport {
    check_feasible_with(p, x, FEASIBILITY_TOL, EQ_TOL)
}

pub fn check_feasible_with(
    p: &SdpProblem,
    x: &DVector<f64>,
    cone_tol: f64,
    eq_tol: f64,
) -> FeasibilityReport {
    let blocks = p.eval_constraint(x);
    let lambda_max = blocks
        .iter()
        .map(jacobi::max_eigenvalue)
        .fold(f64::NEG_INFINITY, f64::max);
    let eq_residual = match &p.eq {
        Some((a, b)) => (a * x - b).norm(),
        None => 0.0,
    };
    let cone_feasible = lambda_max <= cone_tol;
    let eq_feasible = eq_residual <= eq_tol;
    FeasibilityReport {
        lambda_max,
        eq_residual,
        cone_feasible,
        eq_feasible,
        feasible: cone_feasible && eq_feasible,
    }
}
