//! Homogeneous self-dual interior-point solver.
//!
//! Conic form of the problem: `min c'x` s.t. `Gc x + s = h`, `s` in the
//! (block) PSD cone, `A x = b`. The embedding tracks `(x, y, z, s, tau,
//! kappa)`; `tau -> positive` recovers an optimal point, `kappa` dominating
//! yields an infeasibility certificate. Directions use Nesterov-Todd scaling
//! with a Mehrotra predictor-corrector; the reduced Newton system is solved
//! through a dense Cholesky of the Schur complement
//! `H = Gc' (W'W)^-1 Gc`.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::sdp::svec::{smat, svec, svec_dim};
use crate::sdp::{
    check_feasible_with, InfeasibilityCertificate, KktResiduals, SdpProblem, SdpSolution,
    SolveStatus, EQ_TOL, FEASIBILITY_TOL,
};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Relative feasibility target.
    pub feas_tol: f64,
    /// Relative duality gap target.
    pub gap_tol: f64,
    /// Looser tier accepted when progress stalls near the optimum.
    pub accept_feas_tol: f64,
    pub accept_gap_tol: f64,
    pub infeas_tol: f64,
    pub step_fraction: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iterations: 100,
            feas_tol: 1e-10,
            gap_tol: 1e-10,
            accept_feas_tol: 1e-9,
            accept_gap_tol: 1e-8,
            infeas_tol: 3e-7,
            step_fraction: 0.99,
        }
    }
}

/// Per-block Nesterov-Todd scaling data.
struct BlockScaling {
    /// `r` with `r^-1 S r^-T = r' Z r = diag(lambda)`.
    r: DMatrix<f64>,
    /// `r^-T`.
    rti: DMatrix<f64>,
    lambda: Vec<f64>,
}

/// Block bookkeeping for stacked svec vectors.
struct Cone {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
    nu: f64,
}

impl Cone {
    fn new(sizes: &[usize]) -> Cone {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0;
        for &n in sizes {
            offsets.push(total);
            total += svec_dim(n);
        }
        let nu = sizes.iter().map(|&n| n as f64).sum();
        Cone {
            sizes: sizes.to_vec(),
            offsets,
            total,
            nu,
        }
    }

    fn identity(&self) -> DVector<f64> {
        let mut e = DVector::zeros(self.total);
        for (b, &n) in self.sizes.iter().enumerate() {
            let block = svec(&DMatrix::identity(n, n));
            for (k, v) in block.iter().enumerate() {
                e[self.offsets[b] + k] = *v;
            }
        }
        e
    }

    fn block<'a>(&self, v: &'a DVector<f64>, b: usize) -> &'a [f64] {
        let off = self.offsets[b];
        &v.as_slice()[off..off + svec_dim(self.sizes[b])]
    }

    fn set_block(&self, v: &mut DVector<f64>, b: usize, data: &[f64]) {
        let off = self.offsets[b];
        v.as_mut_slice()[off..off + data.len()].copy_from_slice(data);
    }

    /// Congruence transform `svec(T' M T)` applied blockwise.
    fn congruence(
        &self,
        v: &DVector<f64>,
        t_of: impl Fn(usize) -> DMatrix<f64>,
    ) -> DVector<f64> {
        let mut out = DVector::zeros(self.total);
        for (b, &n) in self.sizes.iter().enumerate() {
            let m = smat(self.block(v, b), n);
            let t = t_of(b);
            let res = t.transpose() * m * &t;
            self.set_block(&mut out, b, &svec(&res));
        }
        out
    }

    fn scaling(&self, s: &DVector<f64>, z: &DVector<f64>) -> Option<Vec<BlockScaling>> {
        let mut out = Vec::with_capacity(self.sizes.len());
        for (b, &n) in self.sizes.iter().enumerate() {
            let sm = smat(self.block(s, b), n);
            let zm = smat(self.block(z, b), n);
            let ls = Cholesky::new(sm)?.l();
            let lz = Cholesky::new(zm)?.l();
            let prod = lz.transpose() * &ls;
            let svd = prod.svd(true, true);
            let u = svd.u.as_ref()?;
            let vt = svd.v_t.as_ref()?;
            let mut lam_isqrt = DMatrix::zeros(n, n);
            let mut lambda = Vec::with_capacity(n);
            for i in 0..n {
                let sv = svd.singular_values[i];
                if sv <= 0.0 {
                    return None;
                }
                lambda.push(sv);
                lam_isqrt[(i, i)] = 1.0 / sv.sqrt();
            }
            let r = &ls * vt.transpose() * &lam_isqrt;
            let rti = &lz * u * &lam_isqrt;
            out.push(BlockScaling { r, rti, lambda });
        }
        Some(out)
    }

    /// `lambda o v = d` solved entrywise in the scaled basis:
    /// `V_ij = 2 D_ij / (lambda_i + lambda_j)`.
    fn jordan_solve(&self, w: &[BlockScaling], d: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.total);
        for (b, &n) in self.sizes.iter().enumerate() {
            let dm = smat(self.block(d, b), n);
            let lam = &w[b].lambda;
            let mut vm = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    vm[(i, j)] = 2.0 * dm[(i, j)] / (lam[i] + lam[j]);
                }
            }
            self.set_block(&mut out, b, &svec(&vm));
        }
        out
    }

    /// Symmetrized Jordan product `(AB + BA)/2` of two svec vectors.
    fn jordan_product(&self, a: &DVector<f64>, bvec: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.total);
        for (b, &n) in self.sizes.iter().enumerate() {
            let am = smat(self.block(a, b), n);
            let bm = smat(self.block(bvec, b), n);
            let prod = 0.5 * (&am * &bm + &bm * &am);
            self.set_block(&mut out, b, &svec(&prod));
        }
        out
    }

    /// `lambda o lambda` (svec of `diag(lambda)^2`).
    fn lambda_sq(&self, w: &[BlockScaling]) -> DVector<f64> {
        let mut out = DVector::zeros(self.total);
        for (b, &n) in self.sizes.iter().enumerate() {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = w[b].lambda[i] * w[b].lambda[i];
            }
            self.set_block(&mut out, b, &svec(&m));
        }
        out
    }

    /// Largest `alpha` in `(0, cap]` with `diag(lambda) + alpha * smat(dir)`
    /// staying PSD, where `dir` is already expressed in the scaled basis.
    fn max_step_scaled(&self, w: &[BlockScaling], dir: &DVector<f64>, cap: f64) -> f64 {
        let mut alpha = cap;
        for (b, &n) in self.sizes.iter().enumerate() {
            let dm = smat(self.block(dir, b), n);
            let lam = &w[b].lambda;
            let mut scaled = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    scaled[(i, j)] = dm[(i, j)] / (lam[i].sqrt() * lam[j].sqrt());
                }
            }
            let eigs = scaled.symmetric_eigenvalues();
            let min_eig = eigs.iter().copied().fold(f64::INFINITY, f64::min);
            if min_eig < 0.0 {
                alpha = alpha.min(1.0 / (-min_eig));
            }
        }
        alpha
    }
}

struct KktFactor {
    chol_h: Cholesky<f64, nalgebra::Dyn>,
    chol_eq: Option<Cholesky<f64, nalgebra::Dyn>>,
}

/// Solve the SDP. Deterministic for identical inputs and options.
pub fn solve(p: &SdpProblem, opts: &SolveOptions) -> Result<SdpSolution> {
    if p.block_sizes.contains(&0) {
        return Err(Error::InvalidArgument("zero-size LMI block".into()));
    }
    let m = p.n_vars();
    let cone = Cone::new(&p.block_sizes);
    let kdim = cone.total;

    // conic data: columns of gc are svec(F_i); h = svec(-F0)
    let mut gc = DMatrix::<f64>::zeros(kdim, m);
    for i in 0..m {
        for (b, fib) in p.f[i].iter().enumerate() {
            let col = svec(fib);
            for (k, v) in col.iter().enumerate() {
                gc[(cone.offsets[b] + k, i)] = *v;
            }
        }
    }
    let mut h = DVector::<f64>::zeros(kdim);
    for (b, f0b) in p.f0.iter().enumerate() {
        let neg = -f0b;
        cone.set_block(&mut h, b, &svec(&neg));
    }
    let mut c = p.objective.clone();
    let (mut a_eq, b_eq) = match &p.eq {
        Some((a, b)) => (a.clone(), b.clone()),
        None => (DMatrix::zeros(0, m), DVector::zeros(0)),
    };
    let p_eq = a_eq.nrows();

    // global row scale on the cone constraint (the slack absorbs it), so a
    // uniformly scaled LMI solves over an identical trajectory
    let max_col = (0..m)
        .map(|i| gc.column(i).norm())
        .fold(0.0f64, f64::max);
    let row_scale = h.norm().max(max_col).max(1e-12);
    h /= row_scale;
    gc /= row_scale;

    // column equilibration: unit-norm LMI columns condition the Schur
    // complement; solutions are mapped back on exit
    let mut colscale = DVector::<f64>::from_element(m, 1.0);
    for i in 0..m {
        let nrm = gc.column(i).norm();
        if nrm > 1e-12 {
            colscale[i] = nrm;
            for k in 0..kdim {
                gc[(k, i)] /= nrm;
            }
            for r in 0..p_eq {
                a_eq[(r, i)] /= nrm;
            }
            c[i] /= nrm;
        }
    }
    let unscale = |v: &DVector<f64>| -> DVector<f64> {
        DVector::from_iterator(m, (0..m).map(|i| v[i] / colscale[i]))
    };

    let norm_c = c.norm().max(1.0);
    let norm_h = h.norm().max(1.0);
    let norm_b = b_eq.norm().max(1.0);

    // identity-based cold start
    let mut x = DVector::<f64>::zeros(m);
    let mut y = DVector::<f64>::zeros(p_eq);
    let mut s = cone.identity();
    let mut z = cone.identity();
    let mut tau = 1.0f64;
    let mut kappa = 1.0f64;

    // best iterate seen so far; returned if late iterations degrade
    let mut best_x = DVector::<f64>::zeros(m);
    let mut best_res = KktResiduals {
        primal: f64::INFINITY,
        dual: f64::INFINITY,
        gap: f64::INFINITY,
    };
    let mut best_obj = f64::INFINITY;
    let mut best_dobj = f64::NEG_INFINITY;
    let mut best_iter = 0usize;
    let mut best_metric = f64::INFINITY;
    let mut best_mu = f64::INFINITY;
    let mut best_stat = f64::INFINITY;
    let mut stall = 0usize;
    let mut iterations_done = 0usize;
    // set when a degraded Newton step was taken: the following iteration
    // still runs the convergence and certificate checks, then stops
    let mut force_stop = false;
    // best (most stationary) dual improving ray seen, for late certification
    let mut best_ray: Option<(DVector<f64>, DVector<f64>, f64, f64)> = None;

    for iter in 0..opts.max_iterations {
        iterations_done = iter;
        // residuals of the self-dual system
        let rx = gc.transpose() * &z + a_eq.transpose() * &y + &c * tau;
        let ry = &a_eq * &x - &b_eq * tau;
        let rz = &gc * &x + &s - &h * tau;
        let rtau = c.dot(&x) + b_eq.dot(&y) + h.dot(&z) + kappa;
        let mu = (s.dot(&z) + tau * kappa) / (cone.nu + 1.0);

        let pobj = c.dot(&x) / tau;
        let dobj = -(b_eq.dot(&y) + h.dot(&z)) / tau;
        let gap = s.dot(&z) / (tau * tau);
        let pres = (ry.norm() / norm_b).max(rz.norm() / norm_h) / tau;
        let dres = rx.norm() / norm_c / tau;
        let relgap = gap / 1.0f64.max(pobj.abs()).max(dobj.abs());
        let metric = pres.max(dres).max(relgap);
        let mut progress = false;
        if metric.is_finite() && metric < best_metric {
            best_metric = metric;
            best_x = unscale(&(&x / tau));
            best_res = KktResiduals {
                primal: pres,
                dual: dres,
                gap: relgap,
            };
            best_obj = pobj;
            best_dobj = dobj;
            best_iter = iter;
            progress = true;
        }
        // an infeasible instance makes progress through mu and the ray, not
        // through the residual metric
        if mu < 0.9 * best_mu {
            best_mu = mu;
            progress = true;
        }
        if progress {
            stall = 0;
        } else {
            stall += 1;
        }

        if pres <= opts.feas_tol && dres <= opts.feas_tol && relgap <= opts.gap_tol {
            best_x = unscale(&(&x / tau));
            best_res = KktResiduals {
                primal: pres,
                dual: dres,
                gap: relgap,
            };
            best_obj = pobj;
            best_dobj = dobj;
            best_iter = iter;
            break;
        }

        // infeasibility certificates
        let byhz = b_eq.dot(&y) + h.dot(&z);
        if byhz < -1e-14 {
            let scale = -byhz;
            let stat = (gc.transpose() * &z + a_eq.transpose() * &y).norm() / scale / norm_c;
            if std::env::var("SDP_TRACE").is_ok() {
                eprintln!("   ray: byhz {byhz:.3e} stat {stat:.3e}");
            }
            if stat.is_finite() && best_ray.as_ref().is_none_or(|r| stat < r.3) {
                best_ray = Some((y.clone(), z.clone(), scale, stat));
                if stat < 0.999 * best_stat {
                    best_stat = stat;
                    stall = 0;
                }
            }
            if stat <= opts.infeas_tol {
                let res = KktResiduals {
                    primal: pres,
                    dual: dres,
                    gap: relgap,
                };
                return Ok(finish_infeasible(p, &cone, &y, &z, scale, stat, res, iter));
            }
        }
        let cx = c.dot(&x);
        if cx < -1e-14 {
            let scale = -cx;
            let unbnd = ((&a_eq * &x).norm().max((&gc * &x + &s).norm())) / scale / norm_h;
            if unbnd <= opts.infeas_tol {
                return Ok(SdpSolution {
                    x: unscale(&(&x / scale)),
                    objective_value: f64::NEG_INFINITY,
                    dual_objective: f64::NEG_INFINITY,
                    status: SolveStatus::Unbounded,
                    kkt_residuals: KktResiduals {
                        primal: pres,
                        dual: dres,
                        gap: relgap,
                    },
                    iterations: iter,
                    certificate: None,
                });
            }
        }

        // stop on stall or numerical breakdown and fall back to the best
        // iterate seen
        if force_stop || stall >= 10 || !metric.is_finite() {
            break;
        }
        let w = match cone.scaling(&s, &z) {
            Some(w) => w,
            None => break,
        };
        let factor = match factor_kkt(&cone, &w, &gc, &a_eq) {
            Some(f) => f,
            None => break,
        };

        let neg_c = -&c;
        let sol2 = kkt_solve(&cone, &w, &gc, &a_eq, &factor, &neg_c, &b_eq, &h);

        let lam_sq = cone.lambda_sq(&w);

        // predictor (affine) direction
        let ds_target = -&lam_sq;
        let dtk_target = -tau * kappa;
        let (_dx_a, _dy_a, dz_a, ds_a, dtau_a, dkap_a) = newton_step(
            &cone, &w, &gc, &a_eq, &factor, &c, &b_eq, &h, &sol2, &rx, &ry, &rz, rtau, tau,
            kappa, 1.0, &ds_target, dtk_target,
        );

        // scaled directions for step computation and the corrector
        let ws_a = cone.congruence(&ds_a, |b| w[b].rti.clone()); // W^{-T} ds
        let wz_a = cone.congruence(&dz_a, |b| w[b].r.clone()); // W dz
        let alpha_s = cone.max_step_scaled(&w, &ws_a, 1.0);
        let alpha_z = cone.max_step_scaled(&w, &wz_a, alpha_s);
        let mut alpha_aff = alpha_z;
        if dtau_a < 0.0 {
            alpha_aff = alpha_aff.min(-tau / dtau_a);
        }
        if dkap_a < 0.0 {
            alpha_aff = alpha_aff.min(-kappa / dkap_a);
        }
        alpha_aff = alpha_aff.min(1.0);

        let mu_aff = ((&s + &ds_a * alpha_aff).dot(&(&z + &dz_a * alpha_aff))
            + (tau + alpha_aff * dtau_a) * (kappa + alpha_aff * dkap_a))
            / (cone.nu + 1.0);
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // combined direction with Mehrotra correction
        let eta = 1.0 - sigma;
        let corr = cone.jordan_product(&ws_a, &wz_a);
        let mut ds_target = -&lam_sq - &corr;
        let sig_mu = sigma * mu;
        for (b, &n) in cone.sizes.iter().enumerate() {
            // add sigma*mu on the diagonal (svec keeps diagonals unscaled)
            let off = cone.offsets[b];
            let mut idx = off;
            for j in 0..n {
                ds_target[idx] += sig_mu;
                idx += n - j;
            }
        }
        let dtk_target = sig_mu - tau * kappa - dtau_a * dkap_a;
        let (dx, dy, dz, ds, dtau, dkap) = newton_step(
            &cone, &w, &gc, &a_eq, &factor, &c, &b_eq, &h, &sol2, &rx, &ry, &rz, rtau, tau,
            kappa, eta, &ds_target, dtk_target,
        );

        let ws = cone.congruence(&ds, |b| w[b].rti.clone());
        let wz = cone.congruence(&dz, |b| w[b].r.clone());
        let astep = cone.max_step_scaled(&w, &ws, 1.0 / opts.step_fraction);
        let astep = cone.max_step_scaled(&w, &wz, astep);
        let mut alpha = astep;
        if dtau < 0.0 {
            alpha = alpha.min(-tau / dtau);
        }
        if dkap < 0.0 {
            alpha = alpha.min(-kappa / dkap);
        }
        let alpha = (opts.step_fraction * alpha).min(1.0);

        if std::env::var("SDP_TRACE").is_ok() {
            eprintln!(
                "it {iter:2} pres {pres:9.2e} dres {dres:9.2e} relgap {relgap:9.2e} mu {mu:9.2e} \
                 sigma {sigma:5.3} a_aff {alpha_aff:6.4} a {alpha:6.4} tau {tau:9.2e} kap {kappa:9.2e}"
            );
        }
        // step-quality gate: a Newton step must not let the linear residuals
        // grow past their predicted contraction; a violation means the KKT
        // factorization has broken down, so stop on the iterate we have
        // step-quality gate: if the Newton step lets the linear residuals
        // grow far past their predicted contraction, the KKT factorization
        // has broken down; the step is still taken (it can complete a
        // maturing infeasibility ray) but the run ends after the next round
        // of checks
        let rz_next = &gc * (&x + &dx * alpha) + (&s + &ds * alpha) - &h * (tau + alpha * dtau);
        let predicted = (1.0 - alpha * eta) * rz.norm();
        if rz_next.norm() > 1e3 * predicted + 1e-9 * norm_h {
            force_stop = true;
        }
        x += &dx * alpha;
        y += &dy * alpha;
        z += &dz * alpha;
        s += &ds * alpha;
        tau += alpha * dtau;
        kappa += alpha * dkap;
    }

    // marginal boundary overshoot (common for boundary optima) is repaired
    // by a minimal-norm nudge back into the cone before the verdict
    if best_obj.is_finite() {
        polish_feasibility(p, &mut best_x);
        best_obj = p.objective.dot(&best_x);
    }
    // the optimality verdict is tied to the actual returned point: cone
    // feasibility is re-verified through the independent eigensolver path
    let report = check_feasible_with(p, &best_x, FEASIBILITY_TOL, EQ_TOL);
    if report.feasible
        && best_res.gap <= opts.accept_gap_tol
        && best_res.dual <= opts.accept_feas_tol.max(1e-7)
    {
        return Ok(SdpSolution {
            x: best_x,
            objective_value: best_obj,
            dual_objective: best_dobj,
            status: SolveStatus::Optimal,
            kkt_residuals: best_res,
            iterations: best_iter.max(iterations_done),
            certificate: None,
        });
    }
    if let Some((ry, rz_ray, scale, stat)) = best_ray {
        if stat <= opts.infeas_tol {
            return Ok(finish_infeasible(
                p,
                &cone,
                &ry,
                &rz_ray,
                scale,
                stat,
                best_res,
                iterations_done,
            ));
        }
    }
    Ok(SdpSolution {
        x: best_x,
        objective_value: best_obj,
        dual_objective: best_dobj,
        status: SolveStatus::MaxIterations,
        kkt_residuals: best_res,
        iterations: best_iter.max(iterations_done),
        certificate: None,
    })
}

/// Minimal-norm correction pushing `lambda_max(F(x))` just inside the cone:
/// along the gradient `g_i = v' F_i v` of the top eigenvalue (projected onto
/// the equality null space), repeated while the overshoot is tiny. Objective
/// motion is on the order of the overshoot itself.
fn polish_feasibility(p: &SdpProblem, x: &mut DVector<f64>) {
    for _ in 0..8 {
        let blocks = p.eval_constraint(x);
        let mut worst = f64::NEG_INFINITY;
        let mut grad = DVector::<f64>::zeros(p.n_vars());
        for (b, blk) in blocks.iter().enumerate() {
            if blk.nrows() == 0 {
                continue;
            }
            let eig = blk.clone().symmetric_eigen();
            let mut top = 0;
            for i in 1..eig.eigenvalues.len() {
                if eig.eigenvalues[i] > eig.eigenvalues[top] {
                    top = i;
                }
            }
            if eig.eigenvalues[top] > worst {
                worst = eig.eigenvalues[top];
                let v = eig.eigenvectors.column(top);
                for i in 0..p.n_vars() {
                    grad[i] = (v.transpose() * &p.f[i][b] * v)[(0, 0)];
                }
            }
        }
        // leave alone if already strictly inside or too far out to repair
        if worst <= 0.2 * FEASIBILITY_TOL || worst > 1e-6 {
            return;
        }
        if let Some((a_eq, _)) = &p.eq {
            // project the correction onto the equality null space
            let aat = a_eq * a_eq.transpose();
            if let Some(lam) = aat.lu().solve(&(a_eq * &grad)) {
                grad -= a_eq.transpose() * lam;
            }
        }
        let gg = grad.dot(&grad);
        if gg <= 1e-300 {
            return;
        }
        let shift = (worst + 0.1 * FEASIBILITY_TOL) / gg;
        *x -= grad * shift;
    }
}

#[allow(clippy::too_many_arguments)]
fn newton_step(
    cone: &Cone,
    w: &[BlockScaling],
    gc: &DMatrix<f64>,
    a_eq: &DMatrix<f64>,
    factor: &KktFactor,
    c: &DVector<f64>,
    b_eq: &DVector<f64>,
    h: &DVector<f64>,
    sol2: &(DVector<f64>, DVector<f64>, DVector<f64>),
    rx: &DVector<f64>,
    ry: &DVector<f64>,
    rz: &DVector<f64>,
    rtau: f64,
    tau: f64,
    kappa: f64,
    eta: f64,
    ds_target: &DVector<f64>,
    dtk_target: f64,
) -> (
    DVector<f64>,
    DVector<f64>,
    DVector<f64>,
    DVector<f64>,
    f64,
    f64,
) {
    // lambda o (W^{-T} ds + W dz) = ds_target
    let vs = cone.jordan_solve(w, ds_target);
    let wt_vs = cone.congruence(&vs, |b| w[b].r.transpose()); // W' vs
    let bx = -rx * eta;
    let by = -ry * eta;
    let bz = -rz * eta - &wt_vs;
    let sol1 = kkt_solve(cone, w, gc, a_eq, factor, &bx, &by, &bz);

    let btau = -eta * rtau - dtk_target / tau;
    let denom = c.dot(&sol2.0) + b_eq.dot(&sol2.1) + h.dot(&sol2.2) - kappa / tau;
    let dtau = (btau - c.dot(&sol1.0) - b_eq.dot(&sol1.1) - h.dot(&sol1.2)) / denom;

    let dx = &sol1.0 + &sol2.0 * dtau;
    let dy = &sol1.1 + &sol2.1 * dtau;
    let dz = &sol1.2 + &sol2.2 * dtau;
    // ds = W'(vs - W dz)
    let wdz = cone.congruence(&dz, |b| w[b].r.clone());
    let inner = &vs - &wdz;
    let ds = cone.congruence(&inner, |b| w[b].r.transpose());
    let dkap = (dtk_target - kappa * dtau) / tau;
    (dx, dy, dz, ds, dtau, dkap)
}

fn factor_kkt(
    cone: &Cone,
    w: &[BlockScaling],
    gc: &DMatrix<f64>,
    a_eq: &DMatrix<f64>,
) -> Option<KktFactor> {
    let m = gc.ncols();
    // H = Gc' (W'W)^{-1} Gc, with (W'W)^{-1} u = (rti rti') U (rti rti')
    let mut winv_g = DMatrix::<f64>::zeros(gc.nrows(), m);
    for i in 0..m {
        let col = DVector::from_column_slice(gc.column(i).as_slice());
        let transformed = cone.congruence(&col, |b| (&w[b].rti * w[b].rti.transpose()).transpose());
        winv_g.set_column(i, &transformed);
    }
    let mut hmat = gc.transpose() * &winv_g;
    // symmetrize against rounding and add a proactive tiny ridge; the
    // iterative refinement in kkt_solve absorbs the perturbation while the
    // factorization stays usable at extreme conditioning
    let ridge = 1e-13 * (1.0 + hmat.trace() / m as f64);
    for i in 0..m {
        for j in 0..i {
            let v = 0.5 * (hmat[(i, j)] + hmat[(j, i)]);
            hmat[(i, j)] = v;
            hmat[(j, i)] = v;
        }
        hmat[(i, i)] += ridge;
    }
    let mut chol_h = Cholesky::new(hmat.clone());
    if chol_h.is_none() {
        let bigger = 1e-9 * (1.0 + hmat.trace() / m as f64);
        for i in 0..m {
            hmat[(i, i)] += bigger;
        }
        chol_h = Cholesky::new(hmat);
    }
    let chol_h = chol_h?;
    let chol_eq = if a_eq.nrows() > 0 {
        let hinv_at = chol_h.solve(&a_eq.transpose());
        let mm = a_eq * hinv_at;
        Some(Cholesky::new(mm)?)
    } else {
        None
    };
    Some(KktFactor { chol_h, chol_eq })
}

/// Solve the reduced system
/// `A'uy + Gc'uz = bx`, `A ux = by`, `Gc ux - W'W uz = bz`,
/// with two rounds of iterative refinement against the exact residuals
/// (the Schur complement grows ill-conditioned as the iterates approach the
/// cone boundary; refinement keeps late iterations productive).
#[allow(clippy::too_many_arguments)]
fn kkt_solve(
    cone: &Cone,
    w: &[BlockScaling],
    gc: &DMatrix<f64>,
    a_eq: &DMatrix<f64>,
    factor: &KktFactor,
    bx: &DVector<f64>,
    by: &DVector<f64>,
    bz: &DVector<f64>,
) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
    let winv = |v: &DVector<f64>| -> DVector<f64> {
        cone.congruence(v, |b| (&w[b].rti * w[b].rti.transpose()).transpose())
    };
    let wfwd = |v: &DVector<f64>| -> DVector<f64> {
        cone.congruence(v, |b| &w[b].r * w[b].r.transpose())
    };
    let base_solve = |bx: &DVector<f64>, by: &DVector<f64>, bz: &DVector<f64>| {
        let r1 = bx + gc.transpose() * winv(bz);
        let (ux, uy) = match &factor.chol_eq {
            None => (factor.chol_h.solve(&r1), DVector::zeros(0)),
            Some(chol_eq) => {
                let hinv_r1 = factor.chol_h.solve(&r1);
                let rhs = a_eq * &hinv_r1 - by;
                let uy = chol_eq.solve(&rhs);
                let ux = factor.chol_h.solve(&(&r1 - a_eq.transpose() * &uy));
                (ux, uy)
            }
        };
        let uz = winv(&(gc * &ux - bz));
        (ux, uy, uz)
    };

    let (mut ux, mut uy, mut uz) = base_solve(bx, by, bz);
    let scale = 1.0 + bx.norm() + by.norm() + bz.norm();
    let mut prev = f64::INFINITY;
    for _ in 0..4 {
        let res_x = bx - (a_eq.transpose() * &uy + gc.transpose() * &uz);
        let res_y = by - a_eq * &ux;
        let res_z = bz - (gc * &ux - wfwd(&uz));
        let rnorm = (res_x.norm() + res_y.norm() + res_z.norm()) / scale;
        if !rnorm.is_finite() || rnorm < 1e-14 || rnorm >= prev {
            break;
        }
        prev = rnorm;
        let (dx, dy, dz) = base_solve(&res_x, &res_y, &res_z);
        ux += dx;
        uy += dy;
        uz += dz;
    }
    (ux, uy, uz)
}

#[allow(clippy::too_many_arguments)]
fn finish_infeasible(
    p: &SdpProblem,
    cone: &Cone,
    y: &DVector<f64>,
    z: &DVector<f64>,
    scale: f64,
    stat: f64,
    res: KktResiduals,
    iterations: usize,
) -> SdpSolution {
    let z_blocks = (0..p.n_blocks())
        .map(|b| smat(cone.block(z, b), p.block_sizes[b]) / scale)
        .collect();
    let eq_multiplier = if !y.is_empty() { Some(y / scale) } else { None };
    SdpSolution {
        x: DVector::zeros(p.n_vars()),
        objective_value: f64::INFINITY,
        dual_objective: f64::INFINITY,
        status: SolveStatus::Infeasible,
        kkt_residuals: res,
        iterations,
        certificate: Some(InfeasibilityCertificate {
            z_blocks,
            eq_multiplier,
            stationarity_residual: stat,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::check_feasible;
    use approx::assert_abs_diff_eq;

    fn solve_default(p: &SdpProblem) -> SdpSolution {
        solve(p, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn scalar_bound() {
        // maximize x over 0 <= x <= 2, i.e. min -x: optimum at x = 2
        let p = SdpProblem::new(
            DVector::from_vec(vec![-1.0]),
            vec![2],
            vec![DMatrix::from_row_slice(2, 2, &[-2.0, 0.0, 0.0, 0.0])],
            vec![vec![DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])]],
        )
        .unwrap();
        let sol = solve_default(&p);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.x[0], 2.0, epsilon = 1e-7);
        assert!(check_feasible(&p, &sol.x).feasible);
    }

    #[test]
    fn matrix_bound_two_variables() {
        // min x1 + x2 s.t. [[x1, 1], [1, x2]] >= 0 (i.e. x1 x2 >= 1, x1 > 0):
        // optimum x1 = x2 = 1, objective 2.
        let f0 = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        let f1 = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 0.0]);
        let f2 = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, -1.0]);
        let p = SdpProblem::new(
            DVector::from_vec(vec![1.0, 1.0]),
            vec![2],
            vec![f0],
            vec![vec![f1], vec![f2]],
        )
        .unwrap();
        let sol = solve_default(&p);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.x[0], 1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(sol.x[1], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn equality_constrained() {
        // min x1 + 2 x2 s.t. x1 + x2 = 1, diag(x1, x2) >= 0 elementwise:
        // F(x) = diag(-x1, -x2) <= 0. Optimum x = (1, 0), objective 1.
        let p = SdpProblem::new(
            DVector::from_vec(vec![1.0, 2.0]),
            vec![2],
            vec![DMatrix::zeros(2, 2)],
            vec![
                vec![DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 0.0])],
                vec![DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, -1.0])],
            ],
        )
        .unwrap()
        .with_equalities(
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        let sol = solve_default(&p);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.x[0], 1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(sol.x[1], 0.0, epsilon = 1e-5);
    }

    #[test]
    fn detects_infeasible_with_certificate() {
        // x <= -1 and x >= 1 simultaneously
        let p = SdpProblem::new(
            DVector::from_vec(vec![0.0]),
            vec![2],
            vec![DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0])],
            vec![vec![DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])]],
        )
        .unwrap();
        let sol = solve_default(&p);
        assert_eq!(sol.status, SolveStatus::Infeasible);
        let cert = sol.certificate.expect("certificate expected");
        assert!(cert.stationarity_residual <= 1e-9);
        // the ray is PSD and strictly separates: <F0, Z> > 0
        let z = &cert.z_blocks[0];
        let obj: f64 = z[(0, 0)] + z[(1, 1)];
        assert!(obj > 0.0);
    }

    #[test]
    fn deterministic_bitwise() {
        let p = SdpProblem::new(
            DVector::from_vec(vec![1.0, 1.0]),
            vec![2],
            vec![DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0])],
            vec![
                vec![DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 0.0])],
                vec![DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, -1.0])],
            ],
        )
        .unwrap();
        let s1 = solve_default(&p);
        let s2 = solve_default(&p);
        assert_eq!(s1.x[0].to_bits(), s2.x[0].to_bits());
        assert_eq!(s1.x[1].to_bits(), s2.x[1].to_bits());
        assert_eq!(
            s1.objective_value.to_bits(),
            s2.objective_value.to_bits()
        );
    }

    #[test]
    fn scaling_invariance_of_argmin() {
        let base = |scale: f64| {
            SdpProblem::new(
                DVector::from_vec(vec![1.0, 1.0]),
                vec![2],
                vec![DMatrix::from_row_slice(2, 2, &[0.0, -scale, -scale, 0.0])],
                vec![
                    vec![DMatrix::from_row_slice(2, 2, &[-scale, 0.0, 0.0, 0.0])],
                    vec![DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, -scale])],
                ],
            )
            .unwrap()
        };
        let s1 = solve_default(&base(1.0));
        let s2 = solve_default(&base(7.5));
        for i in 0..2 {
            assert_abs_diff_eq!(s1.x[i], s2.x[i], epsilon = 1e-7);
        }
    }
}
