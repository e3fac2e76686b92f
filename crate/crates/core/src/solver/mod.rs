//! Interior-point solver for conic programs in standard form.
//!
//! The standard form is
//!
//! ```text
//! minimize    <objective, x>
//! subject to  eq_op x = eq_rhs
//!             g x + s = h,   s in cone
//! ```
//!
//! with `x` free and the cone a product of orthant and semidefinite blocks.
//! The dual reads
//!
//! ```text
//! maximize    -<eq_rhs, y> - <h, z>
//! subject to  eq_op* y + g* z + objective = 0,   z in cone.
//! ```
//!
//! The solver embeds the pair into a homogeneous self-dual model and runs a
//! Nesterov-Todd scaled predictor-corrector method on it. The embedding
//! always has a strictly feasible point, so one run either converges to an
//! optimal primal-dual pair, produces an infeasibility certificate for one
//! side, or reports `Unknown` (never a wrong answer). Problems whose optimal
//! values are attained with zero duality gap are the convergent case;
//! pathological pairs with a finite gap land in `Unknown` by design.
//!
//! The method is deterministic: no randomization enters the iteration.

mod scaling;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cones::{ConeProduct, Point};
use crate::error::{Error, Result};
use crate::operators::LinOp;
use crate::programs::ConicPair;
use scaling::Scaling;

/// Conic program in solver standard form. All decision variables are free;
/// cone membership is imposed on the slack `s = h - g x`.
#[derive(Debug, Clone)]
pub struct StandardProgram {
    /// Linear objective on the decision vector.
    pub objective: Point,
    /// Equality constraint operator (may have zero rows).
    pub eq_op: LinOp,
    /// Equality right-hand side.
    pub eq_rhs: Point,
    /// Cone constraint operator.
    pub g: LinOp,
    /// Cone constraint right-hand side.
    pub h: Point,
    /// Cone of the slack vector; its dimension matches `g` rows.
    pub cone: ConeProduct,
    /// Count of unconstrained decision variables (the full decision vector).
    pub n_free: usize,
}

fn all_finite<'a>(mut it: impl Iterator<Item = &'a f64>) -> bool {
    it.all(|v| v.is_finite())
}

impl StandardProgram {
    /// Builds a program without equality constraints.
    pub fn new(objective: Point, g: LinOp, h: Point, cone: ConeProduct) -> Result<Self> {
        let n = objective.len();
        Self::with_equalities(
            objective,
            LinOp::new(DMatrix::zeros(0, n)),
            Point::zeros(0),
            g,
            h,
            cone,
        )
    }

    /// Builds a program with equality constraints `eq_op x = eq_rhs`.
    pub fn with_equalities(
        objective: Point,
        eq_op: LinOp,
        eq_rhs: Point,
        g: LinOp,
        h: Point,
        cone: ConeProduct,
    ) -> Result<Self> {
        let n = objective.len();
        if g.cols() != n {
            return Err(Error::dims("cone operator columns", n, g.cols()));
        }
        if g.rows() != cone.total_dim() {
            return Err(Error::dims("cone operator rows", cone.total_dim(), g.rows()));
        }
        if h.len() != cone.total_dim() {
            return Err(Error::dims("cone offset length", cone.total_dim(), h.len()));
        }
        if eq_op.cols() != n {
            return Err(Error::dims("equality operator columns", n, eq_op.cols()));
        }
        if eq_rhs.len() != eq_op.rows() {
            return Err(Error::dims("equality rhs length", eq_op.rows(), eq_rhs.len()));
        }
        let finite = all_finite(objective.iter())
            && all_finite(eq_rhs.iter())
            && all_finite(h.iter())
            && all_finite(g.matrix().iter())
            && all_finite(eq_op.matrix().iter());
        if !finite {
            return Err(Error::param("program data", "entries must be finite"));
        }
        Ok(StandardProgram {
            objective,
            eq_op,
            eq_rhs,
            g,
            h,
            cone,
            n_free: n,
        })
    }
}

/// Solver knobs. Defaults suit well-scaled desk-size instances.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relative primal and dual feasibility tolerance.
    pub feas_tol: f64,
    /// Relative duality gap tolerance.
    pub gap_tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
    /// Log one line per iteration to stderr.
    pub verbose: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            feas_tol: 1e-8,
            gap_tol: 1e-8,
            max_iter: 200,
            verbose: false,
        }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<()> {
        if !(self.feas_tol > 0.0 && self.feas_tol.is_finite()) {
            return Err(Error::param("feas_tol", "must be positive and finite"));
        }
        if !(self.gap_tol > 0.0 && self.gap_tol.is_finite()) {
            return Err(Error::param("gap_tol", "must be positive and finite"));
        }
        if self.max_iter == 0 {
            return Err(Error::param("max_iter", "must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome classification of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Converged to a primal-dual pair within tolerances.
    Optimal,
    /// The primal constraints admit no solution; `y_eq`/`z` certify it.
    PrimalInfeasible,
    /// The dual admits no solution; `x`/`s` hold an improving ray.
    DualInfeasible,
    /// No conclusion within the iteration budget.
    Unknown,
}

/// Result of a solve. Field meaning depends on `status`:
/// `Optimal` fills every field with the converged quantities; for
/// `PrimalInfeasible` the certificate lives in `y_eq` and `z` (normalized so
/// `-<eq_rhs,y> - <h,z> = 1`); for `DualInfeasible` the improving ray lives
/// in `x` and `s` (normalized so the objective drift is `-1`); `Unknown`
/// reports the last iterate. Objectives and gap are `NaN` when the status
/// does not define them.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: Status,
    pub x: Point,
    pub s: Point,
    pub z: Point,
    pub y_eq: Point,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub gap: f64,
    pub iterations: usize,
}

struct Iterate {
    x: DVector<f64>,
    y: DVector<f64>,
    z: DVector<f64>,
    s: DVector<f64>,
    tau: f64,
    kappa: f64,
}

/// Solves a standard-form program. Numerical breakdowns surface as
/// `Status::Unknown`; `Err` is reserved for invalid options.
pub fn solve(prog: &StandardProgram, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;

    let n = prog.objective.len();
    let p = prog.eq_rhs.len();
    let m = prog.cone.total_dim();
    let nu = prog.cone.degree() as f64;
    let c = &prog.objective;
    let b = &prog.eq_rhs;
    let h = &prog.h;
    let a_mat = prog.eq_op.matrix();
    let g_mat = prog.g.matrix();

    let e = prog.cone.canonical_interior();
    let mut it = Iterate {
        x: DVector::zeros(n),
        y: DVector::zeros(p),
        z: e.clone(),
        s: e.clone(),
        tau: 1.0,
        kappa: 1.0,
    };

    let norm_b = 1.0 + b.norm();
    let norm_h = 1.0 + h.norm();
    let norm_c = 1.0 + c.norm();

    let unknown = |it: &Iterate, iters: usize, why: &str, verbose: bool| {
        if verbose {
            eprintln!("solver: stopping without conclusion ({why})");
        }
        let t = it.tau.max(1e-300);
        SolveResult {
            status: Status::Unknown,
            x: &it.x / t,
            s: &it.s / t,
            z: &it.z / t,
            y_eq: &it.y / t,
            primal_obj: f64::NAN,
            dual_obj: f64::NAN,
            gap: f64::NAN,
            iterations: iters,
        }
    };

    for iter in 0..opts.max_iter {
        // Residuals of the homogeneous model.
        let r1 = a_mat.tr_mul(&it.y) + g_mat.tr_mul(&it.z) + c * it.tau;
        let r2 = -(a_mat * &it.x) + b * it.tau;
        let r3 = -(g_mat * &it.x) + h * it.tau - &it.s;
        let r4 = -c.dot(&it.x) - b.dot(&it.y) - h.dot(&it.z) - it.kappa;
        let mu = (it.s.dot(&it.z) + it.tau * it.kappa) / (nu + 1.0);

        // Convergence test on the de-homogenized iterate.
        let xh = &it.x / it.tau;
        let yh = &it.y / it.tau;
        let zh = &it.z / it.tau;
        let sh = &it.s / it.tau;
        let pres_eq = (a_mat * &xh - b).norm() / norm_b;
        let pres_cone = (g_mat * &xh + &sh - h).norm() / norm_h;
        let pres = pres_eq.max(pres_cone);
        let dres = (a_mat.tr_mul(&yh) + g_mat.tr_mul(&zh) + c).norm() / norm_c;
        let pobj = c.dot(&xh);
        let dobj = -b.dot(&yh) - h.dot(&zh);
        let gap = (pobj - dobj).abs();
        let gap_rel = gap / (1.0 + pobj.abs() + dobj.abs());

        if opts.verbose {
            eprintln!(
                "solver: iter {iter:3}  mu {mu:9.2e}  pres {pres:9.2e}  dres {dres:9.2e}  \
                 gap {gap_rel:9.2e}  tau {:9.2e}  kappa {:9.2e}",
                it.tau, it.kappa
            );
        }

        if !(pres.is_finite() && dres.is_finite() && mu.is_finite()) {
            return Ok(unknown(&it, iter, "non-finite iterate", opts.verbose));
        }

        if pres <= opts.feas_tol && dres <= opts.feas_tol && gap_rel <= opts.gap_tol {
            return Ok(SolveResult {
                status: Status::Optimal,
                x: xh,
                s: sh,
                z: zh,
                y_eq: yh,
                primal_obj: pobj,
                dual_obj: dobj,
                gap,
                iterations: iter,
            });
        }

        // Infeasibility certificates of the original pair.
        let cert_p = -(b.dot(&it.y) + h.dot(&it.z));
        if cert_p > 0.0 {
            let ybar = &it.y / cert_p;
            let zbar = &it.z / cert_p;
            let res = (a_mat.tr_mul(&ybar) + g_mat.tr_mul(&zbar)).norm();
            if res <= opts.feas_tol * norm_c {
                return Ok(SolveResult {
                    status: Status::PrimalInfeasible,
                    x: xh,
                    s: sh,
                    z: zbar,
                    y_eq: ybar,
                    primal_obj: f64::NAN,
                    dual_obj: f64::NAN,
                    gap: f64::NAN,
                    iterations: iter,
                });
            }
        }
        let cert_d = -c.dot(&it.x);
        if cert_d > 0.0 {
            let xbar = &it.x / cert_d;
            let sbar = &it.s / cert_d;
            let res_eq = (a_mat * &xbar).norm();
            let res_cone = (g_mat * &xbar + &sbar).norm();
            if res_eq <= opts.feas_tol * norm_b && res_cone <= opts.feas_tol * norm_h {
                return Ok(SolveResult {
                    status: Status::DualInfeasible,
                    x: xbar,
                    s: sbar,
                    z: zh,
                    y_eq: yh,
                    primal_obj: f64::NAN,
                    dual_obj: f64::NAN,
                    gap: f64::NAN,
                    iterations: iter,
                });
            }
        }

        if it.tau.max(it.kappa) < 1e-12 {
            return Ok(unknown(&it, iter, "homogenizing variables collapsed", opts.verbose));
        }

        let sc = match Scaling::compute(&prog.cone, &it.s, &it.z) {
            Ok(sc) => sc,
            Err(_) => return Ok(unknown(&it, iter, "scaling breakdown", opts.verbose)),
        };
        let lambda = sc.lambda();
        let h_mat = sc.h_matrix();

        // Reduced KKT system in (dx, dy, dz, dtau); ds and dkappa are
        // recovered by back-substitution.
        let dim = n + p + m + 1;
        let (ox, oy, oz, ot) = (0, n, n + p, n + p + m);
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((ox, oy), (n, p))
            .copy_from(&a_mat.transpose());
        kkt.view_mut((ox, oz), (n, m)).copy_from(&g_mat.transpose());
        kkt.view_mut((ox, ot), (n, 1)).copy_from(&DMatrix::from_column_slice(
            n,
            1,
            c.as_slice(),
        ));
        kkt.view_mut((oy, ox), (p, n)).copy_from(&(-a_mat));
        kkt.view_mut((oy, ot), (p, 1)).copy_from(&DMatrix::from_column_slice(
            p,
            1,
            b.as_slice(),
        ));
        kkt.view_mut((oz, ox), (m, n)).copy_from(&(-g_mat));
        kkt.view_mut((oz, oz), (m, m)).copy_from(&h_mat);
        kkt.view_mut((oz, ot), (m, 1)).copy_from(&DMatrix::from_column_slice(
            m,
            1,
            h.as_slice(),
        ));
        for j in 0..n {
            kkt[(ot, ox + j)] = -c[j];
        }
        for j in 0..p {
            kkt[(ot, oy + j)] = -b[j];
        }
        for j in 0..m {
            kkt[(ot, oz + j)] = -h[j];
        }
        kkt[(ot, ot)] = it.kappa / it.tau;

        let lu = kkt.lu();

        let solve_dirs = |rhs: &DVector<f64>| -> Option<(DVector<f64>, DVector<f64>, DVector<f64>, f64)> {
            let sol = lu.solve(rhs)?;
            let dx = DVector::from_column_slice(&sol.as_slice()[ox..ox + n]);
            let dy = DVector::from_column_slice(&sol.as_slice()[oy..oy + p]);
            let dz = DVector::from_column_slice(&sol.as_slice()[oz..oz + m]);
            let dtau = sol[ot];
            Some((dx, dy, dz, dtau))
        };

        // Predictor: aim straight at the complementarity target zero.
        let mut rhs = DVector::zeros(dim);
        rhs.rows_mut(ox, n).copy_from(&(-&r1));
        rhs.rows_mut(oy, p).copy_from(&(-&r2));
        rhs.rows_mut(oz, m).copy_from(&(-&r3 - &it.s));
        rhs[ot] = -r4 - it.kappa;
        let Some((_dx_a, _dy_a, dz_a, dtau_a)) = solve_dirs(&rhs) else {
            return Ok(unknown(&it, iter, "singular step system", opts.verbose));
        };
        let ds_a = -&it.s - &h_mat * &dz_a;
        let dkappa_a = -it.kappa - (it.kappa / it.tau) * dtau_a;

        let (qs_a, qz_a) = match (sc.apply_w_inv(&ds_a), sc.apply_w(&dz_a)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(unknown(&it, iter, "scaling breakdown", opts.verbose)),
        };
        let mut alpha_aff = sc
            .max_step(&qs_a)
            .and_then(|a| sc.max_step(&qz_a).map(|b| a.min(b)))
            .unwrap_or(0.0);
        if dtau_a < 0.0 {
            alpha_aff = alpha_aff.min(-it.tau / dtau_a);
        }
        if dkappa_a < 0.0 {
            alpha_aff = alpha_aff.min(-it.kappa / dkappa_a);
        }
        alpha_aff = alpha_aff.min(1.0);
        let sigma = (1.0 - alpha_aff).powi(3).clamp(0.0, 1.0);

        // Corrector: recenter toward sigma*mu and compensate the
        // second-order error of the predictor.
        let lam_sq = match sc.jordan(&lambda, &lambda) {
            Ok(v) => v,
            Err(_) => return Ok(unknown(&it, iter, "scaling breakdown", opts.verbose)),
        };
        let eta = match sc.jordan(&qs_a, &qz_a) {
            Ok(v) => v,
            Err(_) => return Ok(unknown(&it, iter, "scaling breakdown", opts.verbose)),
        };
        let ds_target = -lam_sq + &e * (sigma * mu) - eta;
        let dk_target = -it.tau * it.kappa + sigma * mu - dtau_a * dkappa_a;
        let ds_half = match sc.lambda_solve(&ds_target).and_then(|v| sc.apply_w(&v)) {
            Ok(v) => v,
            Err(_) => return Ok(unknown(&it, iter, "scaling breakdown", opts.verbose)),
        };

        let shrink = 1.0 - sigma;
        rhs.rows_mut(ox, n).copy_from(&(-&r1 * shrink));
        rhs.rows_mut(oy, p).copy_from(&(-&r2 * shrink));
        rhs.rows_mut(oz, m).copy_from(&(-&r3 * shrink + &ds_half));
        rhs[ot] = -r4 * shrink + dk_target / it.tau;
        let Some((dx, dy, dz, dtau)) = solve_dirs(&rhs) else {
            return Ok(unknown(&it, iter, "singular step system", opts.verbose));
        };
        let ds = &ds_half - &h_mat * &dz;
        let dkappa = (dk_target - it.kappa * dtau) / it.tau;

        let (qs, qz) = match (sc.apply_w_inv(&ds), sc.apply_w(&dz)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(unknown(&it, iter, "scaling breakdown", opts.verbose)),
        };
        let mut alpha_max = sc
            .max_step(&qs)
            .and_then(|a| sc.max_step(&qz).map(|b| a.min(b)))
            .unwrap_or(0.0);
        if dtau < 0.0 {
            alpha_max = alpha_max.min(-it.tau / dtau);
        }
        if dkappa < 0.0 {
            alpha_max = alpha_max.min(-it.kappa / dkappa);
        }
        let alpha = (0.99 * alpha_max).min(1.0);
        if alpha < 1e-11 {
            return Ok(unknown(&it, iter, "step length stalled", opts.verbose));
        }

        it.x += &dx * alpha;
        it.y += &dy * alpha;
        it.z += &dz * alpha;
        it.s += &ds * alpha;
        it.tau += alpha * dtau;
        it.kappa += alpha * dkappa;
    }

    Ok(unknown(&it, opts.max_iter, "iteration budget exhausted", opts.verbose))
}

/// Mapping from a solved standard form back to the originating pair.
#[derive(Debug, Clone, Copy)]
pub struct PairMap {
    dim_c: usize,
}

impl PairMap {
    /// Primal point of the pair (the decision vector itself).
    pub fn primal(&self, res: &SolveResult) -> Point {
        res.x.clone()
    }

    /// Dual point of the pair, read off the multiplier of the image slack.
    pub fn dual(&self, res: &SolveResult) -> Point {
        let tail = res.z.len() - self.dim_c;
        DVector::from_column_slice(&res.z.as_slice()[self.dim_c..self.dim_c + tail])
    }
}

/// Encodes a primal-dual pair in standard form. The decision vector is the
/// primal point `x`; the slack stacks `x` itself and the image slack
/// `op x - b`, constrained to `cone_c x cone_k`.
pub fn to_standard(pair: &ConicPair) -> (StandardProgram, PairMap) {
    let nc = pair.cone_c().total_dim();
    let nk = pair.cone_k().total_dim();
    let mut g = DMatrix::zeros(nc + nk, nc);
    g.view_mut((0, 0), (nc, nc))
        .copy_from(&(-DMatrix::<f64>::identity(nc, nc)));
    g.view_mut((nc, 0), (nk, nc)).copy_from(&(-pair.op().matrix()));
    let mut h = Point::zeros(nc + nk);
    h.rows_mut(nc, nk).copy_from(&(-pair.b()));
    let blocks = [pair.cone_c().blocks(), pair.cone_k().blocks()].concat();
    let cone = ConeProduct::new(blocks).expect("pair cones are valid");
    let prog = StandardProgram::new(pair.c().clone(), LinOp::new(g), h, cone)
        .expect("pair dimensions are validated at construction");
    (prog, PairMap { dim_c: nc })
}

/// Solve outcome translated back to pair coordinates. For `Optimal`, `x` and
/// `y` are the optimal points; for `PrimalInfeasible`, `y` is the certificate
/// ray; for `DualInfeasible`, `x` is the improving ray.
#[derive(Debug, Clone)]
pub struct PairSolution {
    pub status: Status,
    pub x: Point,
    pub y: Point,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Solves a primal-dual pair by the standard-form embedding.
pub fn solve_pair(pair: &ConicPair, opts: &SolveOptions) -> Result<PairSolution> {
    let (prog, map) = to_standard(pair);
    let res = solve(&prog, opts)?;
    let x = map.primal(&res);
    let y = map.dual(&res);
    let (pobj, dobj, gap) = if res.status == Status::Optimal {
        let pobj = pair.c().dot(&x);
        let dobj = pair.b().dot(&y);
        (pobj, dobj, (pobj - dobj).abs())
    } else {
        (f64::NAN, f64::NAN, f64::NAN)
    };
    Ok(PairSolution {
        status: res.status,
        x,
        y,
        primal_obj: pobj,
        dual_obj: dobj,
        gap,
        iterations: res.iterations,
    })
}
