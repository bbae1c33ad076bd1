//! Homogeneous self-dual interior-point solver for conic programs over
//! products of orthant, second-order and PSD blocks, with Nesterov-Todd
//! scaling and Mehrotra predictor-corrector steps.
//!
//! The solver works on the geometry
//! `min c'u  s.t.  F u - g in K` (u free), whose conic dual is
//! `max g'lam  s.t.  F'lam = c, lam in K` (K self-dual).
//!
//! The homogeneous embedding returns, from one kernel, either an optimal
//! primal/dual pair, a Farkas certificate of primal infeasibility
//! (`F'lam = 0, lam in K, g'lam = 1`), or an improving ray certifying dual
//! infeasibility / primal unboundedness (`F r in K, c'r = -1`).
//! Problems that admit none of those (weakly infeasible or unattained
//! optima) surface as `IllPosed` after the iteration cap, with the best
//! iterate reported when it meets a relaxed tolerance.

use serde::Serialize;

use crate::cone::{smat, svec, ConeBlock, ConeProduct};
use crate::error::CoreError;
use crate::linalg::{dot, norm2, norm_inf, sym_eigen, LuFactors, Matrix};
use crate::model::Instance;

/// A continuous conic program `min objective . u  s.t.  rows u >=_cone rhs`.
#[derive(Clone, Debug)]
pub struct ConicProgram {
    pub objective: Vec<f64>,
    pub rows: Matrix,
    pub rhs: Vec<f64>,
    pub cone: ConeProduct,
}

impl ConicProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) {
        let m = self.cone.total_dim();
        assert_eq!(self.rows.nrows(), m, "row count must match cone dimension");
        assert_eq!(self.rows.ncols(), self.objective.len());
        assert_eq!(self.rhs.len(), m);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    IllPosed,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residuals {
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
}

impl Residuals {
    fn worst(&self) -> f64 {
        self.primal_res.max(self.dual_res).max(self.gap)
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// lam with F'lam ~ 0, lam in K, g'lam = 1: no feasible point exists.
    FarkasDual(Vec<f64>),
    /// r with F r in K (to tolerance) and objective . r = -1: improving ray.
    ImprovingRay(Vec<f64>),
}

#[derive(Clone, Debug)]
pub struct ContinuousResult {
    pub status: SolveStatus,
    pub primal: Option<Vec<f64>>,
    pub dual_lambda: Option<Vec<f64>>,
    pub objective: f64,
    pub residuals: Residuals,
    pub certificate: Option<Certificate>,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Target for primal/dual residuals and relative gap.
    pub tol: f64,
    /// Acceptance tolerance for the best iterate when the cap is reached.
    pub relaxed_tol: f64,
    pub max_iter: usize,
    /// tau/kappa ratio below which the iterate is treated as a ray.
    pub infeas_ratio: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            relaxed_tol: 1e-6,
            max_iter: 200,
            infeas_ratio: 1e-8,
        }
    }
}

// ---------------------------------------------------------------------------
// Jordan algebra helpers (block-local)
// ---------------------------------------------------------------------------

fn jordan_product(block: ConeBlock, a: &[f64], b: &[f64]) -> Vec<f64> {
    match block {
        ConeBlock::Orthant { .. } => a.iter().zip(b).map(|(x, y)| x * y).collect(),
        ConeBlock::SecondOrder { dim } => {
            let (ah, at) = (&a[..dim - 1], a[dim - 1]);
            let (bh, bt) = (&b[..dim - 1], b[dim - 1]);
            let mut out: Vec<f64> = ah
                .iter()
                .zip(bh)
                .map(|(x, y)| at * y + bt * x)
                .collect();
            out.push(dot(a, b));
            out
        }
        ConeBlock::PsdTriangle { order } => {
            let am = smat(a, order);
            let bm = smat(b, order);
            let ab = am.matmul(&bm);
            let sym = Matrix::from_fn(order, order, |i, j| 0.5 * (ab[(i, j)] + ab[(j, i)]));
            svec(&sym)
        }
    }
}

/// Solves lam o q = d for q (L_lam q = d).
fn jordan_solve(block: ConeBlock, lam: &[f64], d: &[f64]) -> Option<Vec<f64>> {
    match block {
        ConeBlock::Orthant { .. } => {
            let mut out = Vec::with_capacity(d.len());
            for (&l, &v) in lam.iter().zip(d) {
                if l.abs() < 1e-300 {
                    return None;
                }
                out.push(v / l);
            }
            Some(out)
        }
        ConeBlock::SecondOrder { dim } => {
            let (lh, lt) = (&lam[..dim - 1], lam[dim - 1]);
            let (dh, dt) = (&d[..dim - 1], d[dim - 1]);
            let det = lt * lt - dot(lh, lh);
            if det.abs() < 1e-300 || lt.abs() < 1e-300 {
                return None;
            }
            let qt = (lt * dt - dot(lh, dh)) / det;
            let mut out: Vec<f64> = dh.iter().zip(lh).map(|(x, l)| (x - qt * l) / lt).collect();
            out.push(qt);
            Some(out)
        }
        ConeBlock::PsdTriangle { order } => {
            let (ev, q) = sym_eigen(&smat(lam, order));
            let dm = smat(d, order);
            let dt = q.transpose().matmul(&dm).matmul(&q);
            let mut xt = Matrix::zeros(order, order);
            for i in 0..order {
                for j in 0..order {
                    let denom = ev[i] + ev[j];
                    if denom.abs() < 1e-300 {
                        return None;
                    }
                    xt[(i, j)] = 2.0 * dt[(i, j)] / denom;
                }
            }
            let x = q.matmul(&xt).matmul(&q.transpose());
            Some(svec(&Matrix::from_fn(order, order, |i, j| {
                0.5 * (x[(i, j)] + x[(j, i)])
            })))
        }
    }
}

fn jordan_identity(block: ConeBlock) -> Vec<f64> {
    block.interior_direction()
}

/// Largest step alpha with p + alpha dp staying in the block (inf if never
/// leaving). `p` must be strictly interior.
fn step_to_boundary(block: ConeBlock, p: &[f64], dp: &[f64]) -> f64 {
    match block {
        ConeBlock::Orthant { .. } => {
            let mut a = f64::INFINITY;
            for (&pi, &di) in p.iter().zip(dp) {
                if di < 0.0 {
                    a = a.min(-pi / di);
                }
            }
            a
        }
        ConeBlock::SecondOrder { dim } => {
            let j_quad = |x: &[f64], y: &[f64]| {
                x[dim - 1] * y[dim - 1] - dot(&x[..dim - 1], &y[..dim - 1])
            };
            let a = j_quad(dp, dp);
            let b = 2.0 * j_quad(p, dp);
            let c = j_quad(p, p);
            if c < 0.0 {
                return 0.0;
            }
            let disc = b * b - 4.0 * a * c;
            if (a > 0.0 && b > 0.0) || disc < 0.0 {
                // also guard the scalar component going negative first
                if dp[dim - 1] < 0.0 {
                    return -p[dim - 1] / dp[dim - 1];
                }
                return f64::INFINITY;
            }
            let sd = disc.sqrt();
            let r1 = (-b + sd) / (2.0 * a);
            let r2 = (-b - sd) / (2.0 * a);
            let mut best = f64::INFINITY;
            if r1 > 0.0 {
                best = best.min(r1);
            }
            if r2 > 0.0 {
                best = best.min(r2);
            }
            if a == 0.0 && b < 0.0 {
                best = best.min(-c / b);
            }
            best
        }
        ConeBlock::PsdTriangle { order } => {
            let pm = smat(p, order);
            let dm = smat(dp, order);
            // generalized eigenvalue bound via L^-1 D L^-T with P = L L^T
            let l = match crate::linalg::cholesky(&pm) {
                Some(l) => l,
                None => return 0.0,
            };
            // M = L^-1 D L^-T, computed column by column
            let mut m = Matrix::zeros(order, order);
            for j in 0..order {
                let col = crate::linalg::solve_lower(&l, &dm.col(j));
                for i in 0..order {
                    m[(i, j)] = col[i];
                }
            }
            // now apply L^-1 to the transpose side: M := M L^-T == (L^-1 M^T)^T
            let mt = m.transpose();
            let mut out = Matrix::zeros(order, order);
            for j in 0..order {
                let col = crate::linalg::solve_lower(&l, &mt.col(j));
                for i in 0..order {
                    out[(i, j)] = col[i];
                }
            }
            let sym = Matrix::from_fn(order, order, |i, j| 0.5 * (out[(i, j)] + out[(j, i)]));
            let (ev, _) = sym_eigen(&sym);
            if ev[0] >= 0.0 {
                f64::INFINITY
            } else {
                -1.0 / ev[0]
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Nesterov-Todd scaling
// ---------------------------------------------------------------------------

enum BlockScaling {
    Orthant { w: Vec<f64> },
    Soc { w: Matrix, winv: Matrix, w2: Matrix },
    Psd { thalf: Matrix, thalf_inv: Matrix, t: Matrix, order: usize },
}

impl BlockScaling {
    fn compute(block: ConeBlock, s: &[f64], z: &[f64]) -> Option<BlockScaling> {
        match block {
            ConeBlock::Orthant { .. } => {
                let mut w = Vec::with_capacity(s.len());
                for (&si, &zi) in s.iter().zip(z) {
                    if si <= 0.0 || zi <= 0.0 {
                        return None;
                    }
                    w.push((si / zi).sqrt());
                }
                Some(BlockScaling::Orthant { w })
            }
            ConeBlock::SecondOrder { dim } => {
                let jq = |x: &[f64]| x[dim - 1] * x[dim - 1] - dot(&x[..dim - 1], &x[..dim - 1]);
                let ds = jq(s);
                let dz = jq(z);
                if ds <= 0.0 || dz <= 0.0 || s[dim - 1] <= 0.0 || z[dim - 1] <= 0.0 {
                    return None;
                }
                let snorm: Vec<f64> = s.iter().map(|v| v / ds.sqrt()).collect();
                let znorm: Vec<f64> = z.iter().map(|v| v / dz.sqrt()).collect();
                let gamma = ((1.0 + dot(&snorm, &znorm)) / 2.0).sqrt();
                // v = (s~ + J z~) / (2 gamma), J = diag(-1,..,-1,+1)
                let mut v: Vec<f64> = snorm
                    .iter()
                    .zip(&znorm)
                    .enumerate()
                    .map(|(i, (&si, &zi))| {
                        if i + 1 == dim {
                            (si + zi) / (2.0 * gamma)
                        } else {
                            (si - zi) / (2.0 * gamma)
                        }
                    })
                    .collect();
                // guard tiny drift in the hyperbolic normalization
                let vjv = v[dim - 1] * v[dim - 1] - dot(&v[..dim - 1], &v[..dim - 1]);
                if vjv <= 0.0 {
                    return None;
                }
                let corr = vjv.sqrt();
                for vi in &mut v {
                    *vi /= corr;
                }
                let beta = (ds / dz).powf(0.25);
                let jdiag = |i: usize| if i + 1 == dim { 1.0 } else { -1.0 };
                // v is the quadratic-representation point: P(v) z~ = s~, so
                // W^2 = beta^2 (2vv' - J) and W = beta (2uu' - J) with the
                // Jordan square root u = (v + e) / sqrt(2 (v_t + 1))
                let vt = v[dim - 1];
                let cu = (2.0 * (vt + 1.0)).sqrt();
                if !(cu > 0.0) {
                    return None;
                }
                let u: Vec<f64> = v
                    .iter()
                    .enumerate()
                    .map(|(i, &vi)| if i + 1 == dim { (vi + 1.0) / cu } else { vi / cu })
                    .collect();
                let w = Matrix::from_fn(dim, dim, |i, j| {
                    let jd = if i == j { jdiag(i) } else { 0.0 };
                    beta * (2.0 * u[i] * u[j] - jd)
                });
                let winv = Matrix::from_fn(dim, dim, |i, j| {
                    let jd = if i == j { jdiag(i) } else { 0.0 };
                    (2.0 * (jdiag(i) * u[i]) * (jdiag(j) * u[j]) - jd) / beta
                });
                let w2 = Matrix::from_fn(dim, dim, |i, j| {
                    let jd = if i == j { jdiag(i) } else { 0.0 };
                    beta * beta * (2.0 * v[i] * v[j] - jd)
                });
                Some(BlockScaling::Soc { w, winv, w2 })
            }
            ConeBlock::PsdTriangle { order } => {
                let sm = smat(s, order);
                let zm = smat(z, order);
                let (es, qs) = sym_eigen(&sm);
                if es[0] <= 0.0 {
                    return None;
                }
                let s_half = spectral_pow(&qs, &es, 0.5);
                let bm = s_half.matmul(&zm).matmul(&s_half);
                let (eb, qb) = sym_eigen(&bm);
                if eb[0] <= 0.0 {
                    return None;
                }
                let b_inv_half = spectral_pow(&qb, &eb, -0.5);
                let t = s_half.matmul(&b_inv_half).matmul(&s_half);
                let tsym = Matrix::from_fn(order, order, |i, j| 0.5 * (t[(i, j)] + t[(j, i)]));
                let (et, qt) = sym_eigen(&tsym);
                if et[0] <= 0.0 {
                    return None;
                }
                let thalf = spectral_pow(&qt, &et, 0.5);
                let thalf_inv = spectral_pow(&qt, &et, -0.5);
                Some(BlockScaling::Psd {
                    thalf,
                    thalf_inv,
                    t: tsym,
                    order,
                })
            }
        }
    }

    fn apply_w(&self, x: &[f64]) -> Vec<f64> {
        match self {
            BlockScaling::Orthant { w } => w.iter().zip(x).map(|(wi, xi)| wi * xi).collect(),
            BlockScaling::Soc { w, .. } => w.matvec(x),
            BlockScaling::Psd { thalf, order, .. } => {
                let xm = smat(x, *order);
                svec(&thalf.matmul(&xm).matmul(thalf))
            }
        }
    }

    fn apply_winv(&self, x: &[f64]) -> Vec<f64> {
        match self {
            BlockScaling::Orthant { w } => w.iter().zip(x).map(|(wi, xi)| xi / wi).collect(),
            BlockScaling::Soc { winv, .. } => winv.matvec(x),
            BlockScaling::Psd {
                thalf_inv, order, ..
            } => {
                let xm = smat(x, *order);
                svec(&thalf_inv.matmul(&xm).matmul(thalf_inv))
            }
        }
    }

    /// Writes W^2 into `dst` at diagonal offset `at`.
    fn write_w2(&self, dst: &mut Matrix, at: usize) {
        match self {
            BlockScaling::Orthant { w } => {
                for (i, wi) in w.iter().enumerate() {
                    dst[(at + i, at + i)] = wi * wi;
                }
            }
            BlockScaling::Soc { w2, .. } => {
                dst.set_block(at, at, w2);
            }
            BlockScaling::Psd { t, order, .. } => {
                // W^2 = P(T): columns are svec(T E_k T)
                let dim = crate::cone::svec_dim(*order);
                for k in 0..dim {
                    let mut e = vec![0.0; dim];
                    e[k] = 1.0;
                    let em = smat(&e, *order);
                    let col = svec(&t.matmul(&em).matmul(t));
                    for (i, v) in col.iter().enumerate() {
                        dst[(at + i, at + k)] = *v;
                    }
                }
            }
        }
    }
}

fn spectral_pow(q: &Matrix, evals: &[f64], p: f64) -> Matrix {
    let n = q.nrows();
    let mut out = Matrix::zeros(n, n);
    for k in 0..n {
        let lam = evals[k].max(1e-300).powf(p);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += lam * q[(i, k)] * q[(j, k)];
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The solver
// ---------------------------------------------------------------------------

struct Snapshot {
    primal: Vec<f64>,
    dual: Vec<f64>,
    residuals: Residuals,
    objective: f64,
    #[allow(dead_code)]
    dual_objective: f64,
}

/// Solves the conic program with default options.
pub fn solve(prog: &ConicProgram) -> ContinuousResult {
    solve_with(prog, &SolverOptions::default())
}

pub fn solve_with(prog: &ConicProgram, opts: &SolverOptions) -> ContinuousResult {
    prog.validate();
    let n = prog.num_vars();
    let m = prog.cone.total_dim();
    let f = &prog.rows;
    let g = &prog.rhs;
    let c = &prog.objective;
    let cone = &prog.cone;
    let ranges = cone.block_ranges();
    let nu = cone.barrier_degree() as f64;
    let norm_g = norm2(g);
    let norm_c = norm2(c);

    let mut u = vec![0.0; n];
    let mut z = cone.interior_direction();
    let mut s = cone.interior_direction();
    let mut tau = 1.0f64;
    let mut kappa = 1.0f64;

    let mut best: Option<Snapshot> = None;
    let mut iterations = 0;

    let finish_optimal = |snap: Snapshot, iterations: usize| ContinuousResult {
        status: SolveStatus::Optimal,
        objective: snap.objective,
        primal: Some(snap.primal),
        dual_lambda: Some(snap.dual),
        residuals: snap.residuals,
        certificate: None,
        iterations,
    };

    for iter in 0..opts.max_iter {
        iterations = iter;
        // residuals of the homogeneous system
        let rd = {
            let mut v = f.tr_matvec(&z);
            for (vi, &ci) in v.iter_mut().zip(c) {
                *vi -= ci * tau;
            }
            v
        };
        let rp = {
            let fu = f.matvec(&u);
            (0..m).map(|i| -fu[i] + g[i] * tau + s[i]).collect::<Vec<f64>>()
        };
        let rg = dot(c, &u) - dot(g, &z) + kappa;

        // unscaled convergence check
        if tau > 1e-12 {
            let uh: Vec<f64> = u.iter().map(|v| v / tau).collect();
            let zh: Vec<f64> = z.iter().map(|v| v / tau).collect();
            let sh: Vec<f64> = s.iter().map(|v| v / tau).collect();
            let fu = f.matvec(&uh);
            let pres_vec: Vec<f64> = (0..m).map(|i| fu[i] - g[i] - sh[i]).collect();
            let pres = norm2(&pres_vec) / (1.0 + norm_g);
            let dres_vec = {
                let mut v = f.tr_matvec(&zh);
                for (vi, &ci) in v.iter_mut().zip(c) {
                    *vi -= ci;
                }
                v
            };
            let dres = norm2(&dres_vec) / (1.0 + norm_c);
            let pobj = dot(c, &uh);
            let dobj = dot(g, &zh);
            let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
            let res = Residuals {
                primal_res: pres,
                dual_res: dres,
                gap,
            };
            if best.as_ref().map_or(true, |b| res.worst() < b.residuals.worst()) {
                best = Some(Snapshot {
                    primal: uh.clone(),
                    dual: zh.clone(),
                    residuals: res,
                    objective: pobj,
                    dual_objective: dobj,
                });
            }
            if res.worst() <= opts.tol {
                return finish_optimal(best.take().unwrap(), iter);
            }
        }

        // infeasibility certificates (self-verifying, strict tolerance)
        let gz = dot(g, &z);
        if gz > 1e-12 {
            let lam: Vec<f64> = z.iter().map(|v| v / gz).collect();
            let res = norm2(&f.tr_matvec(&lam)) / (1.0 + norm2(&lam));
            if res <= opts.tol {
                return ContinuousResult {
                    status: SolveStatus::PrimalInfeasible,
                    primal: None,
                    dual_lambda: None,
                    objective: f64::INFINITY,
                    residuals: Residuals {
                        primal_res: res,
                        dual_res: 0.0,
                        gap: 0.0,
                    },
                    certificate: Some(Certificate::FarkasDual(lam)),
                    iterations: iter,
                };
            }
        }
        let cu = dot(c, &u);
        if cu < -1e-12 {
            let ray: Vec<f64> = u.iter().map(|v| v / (-cu)).collect();
            let viol = (-cone.margin(&f.matvec(&ray)).unwrap_or(f64::NEG_INFINITY)).max(0.0);
            if viol / (1.0 + norm2(&ray)) <= opts.tol {
                return ContinuousResult {
                    status: SolveStatus::DualInfeasible,
                    primal: None,
                    dual_lambda: None,
                    objective: f64::NEG_INFINITY,
                    residuals: Residuals {
                        primal_res: viol,
                        dual_res: 0.0,
                        gap: 0.0,
                    },
                    certificate: Some(Certificate::ImprovingRay(ray)),
                    iterations: iter,
                };
            }
        }

        // NT scaling per block
        let mut scalings = Vec::with_capacity(ranges.len());
        let mut ok = true;
        for (block, r) in &ranges {
            match BlockScaling::compute(*block, &s[r.clone()], &z[r.clone()]) {
                Some(sc) => scalings.push(sc),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            break;
        }
        let lam: Vec<f64> = {
            let mut out = vec![0.0; m];
            for (sc, (_, r)) in scalings.iter().zip(&ranges) {
                let lb = sc.apply_w(&z[r.clone()]);
                out[r.clone()].copy_from_slice(&lb);
            }
            out
        };
        let mu = (dot(&s, &z) + tau * kappa) / (nu + 1.0);

        // assemble KKT
        let nn = n + m + 1;
        let mut kkt = Matrix::zeros(nn, nn);
        for i in 0..n {
            for j in 0..m {
                kkt[(i, n + j)] = f[(j, i)];
            }
            kkt[(i, n + m)] = -c[i];
        }
        for i in 0..m {
            for j in 0..n {
                kkt[(n + i, j)] = -f[(i, j)];
            }
            kkt[(n + i, n + m)] = g[i];
        }
        {
            let mut w2 = Matrix::zeros(m, m);
            for (sc, (_, r)) in scalings.iter().zip(&ranges) {
                sc.write_w2(&mut w2, r.start);
            }
            for i in 0..m {
                for j in 0..m {
                    kkt[(n + i, n + j)] -= w2[(i, j)];
                }
            }
        }
        for j in 0..n {
            kkt[(n + m, j)] = c[j];
        }
        for j in 0..m {
            kkt[(n + m, n + j)] = -g[j];
        }
        kkt[(n + m, n + m)] = -kappa / tau;
        let lu = LuFactors::new(&kkt);
        if lu.is_singular() {
            break;
        }

        let solve_dir = |lu: &LuFactors,
                         rhs1: &[f64],
                         rhs2: &[f64],
                         rhs3: f64|
         -> Option<(Vec<f64>, Vec<f64>, f64)> {
            let mut rhs = Vec::with_capacity(nn);
            rhs.extend_from_slice(rhs1);
            rhs.extend_from_slice(rhs2);
            rhs.push(rhs3);
            let sol = lu.solve(&rhs)?;
            Some((sol[..n].to_vec(), sol[n..n + m].to_vec(), sol[n + m]))
        };

        // affine direction
        let rhs1: Vec<f64> = rd.iter().map(|v| -v).collect();
        let rhs2: Vec<f64> = (0..m).map(|i| -rp[i] + s[i]).collect();
        let rhs3 = -rg + kappa;
        let (dua, dza, dta) = match solve_dir(&lu, &rhs1, &rhs2, rhs3) {
            Some(d) => d,
            None => break,
        };
        // ds from row (2), dkappa from row (3)
        let dsa: Vec<f64> = {
            let fdu = f.matvec(&dua);
            (0..m).map(|i| -rp[i] + fdu[i] - g[i] * dta).collect()
        };
        let dka = -rg - dot(c, &dua) + dot(g, &dza);

        let alpha_aff = {
            let mut a = f64::INFINITY;
            for (block, r) in &ranges {
                a = a.min(step_to_boundary(*block, &s[r.clone()], &dsa[r.clone()]));
                a = a.min(step_to_boundary(*block, &z[r.clone()], &dza[r.clone()]));
            }
            if dta < 0.0 {
                a = a.min(-tau / dta);
            }
            if dka < 0.0 {
                a = a.min(-kappa / dka);
            }
            a.min(1.0)
        };
        let mu_aff = {
            let sa: Vec<f64> = s.iter().zip(&dsa).map(|(v, d)| v + alpha_aff * d).collect();
            let za: Vec<f64> = z.iter().zip(&dza).map(|(v, d)| v + alpha_aff * d).collect();
            (dot(&sa, &za) + (tau + alpha_aff * dta) * (kappa + alpha_aff * dka)) / (nu + 1.0)
        };
        let sigma = (mu_aff / mu).max(0.0).min(1.0).powi(3);

        // combined direction with Mehrotra correction
        let mut wq = vec![0.0; m];
        let mut failed = false;
        for (sc, (block, r)) in scalings.iter().zip(&ranges) {
            let lamb = &lam[r.clone()];
            let winv_ds = sc.apply_winv(&dsa[r.clone()]);
            let w_dz = sc.apply_w(&dza[r.clone()]);
            let corr = jordan_product(*block, &winv_ds, &w_dz);
            let lam2 = jordan_product(*block, lamb, lamb);
            let e = jordan_identity(*block);
            let d: Vec<f64> = (0..e.len())
                .map(|i| sigma * mu * e[i] - lam2[i] - corr[i])
                .collect();
            match jordan_solve(*block, lamb, &d) {
                Some(q) => {
                    let wqb = sc.apply_w(&q);
                    wq[r.clone()].copy_from_slice(&wqb);
                }
                None => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            break;
        }
        let dkt = sigma * mu - tau * kappa - dta * dka;
        let rhs2c: Vec<f64> = (0..m).map(|i| -rp[i] - wq[i]).collect();
        let rhs3c = -rg - dkt / tau;
        let (du, dz, dt) = match solve_dir(&lu, &rhs1, &rhs2c, rhs3c) {
            Some(d) => d,
            None => break,
        };
        let ds: Vec<f64> = {
            let fdu = f.matvec(&du);
            (0..m).map(|i| -rp[i] + fdu[i] - g[i] * dt).collect()
        };
        let dk = -rg - dot(c, &du) + dot(g, &dz);

        let alpha = {
            let mut a = f64::INFINITY;
            for (block, r) in &ranges {
                a = a.min(step_to_boundary(*block, &s[r.clone()], &ds[r.clone()]));
                a = a.min(step_to_boundary(*block, &z[r.clone()], &dz[r.clone()]));
            }
            if dt < 0.0 {
                a = a.min(-tau / dt);
            }
            if dk < 0.0 {
                a = a.min(-kappa / dk);
            }
            (0.99 * a).min(1.0)
        };
        if !alpha.is_finite() || alpha < 1e-11 {
            break;
        }
        for (v, d) in u.iter_mut().zip(&du) {
            *v += alpha * d;
        }
        for (v, d) in z.iter_mut().zip(&dz) {
            *v += alpha * d;
        }
        for (v, d) in s.iter_mut().zip(&ds) {
            *v += alpha * d;
        }
        tau += alpha * dt;
        kappa += alpha * dk;
    }

    // loop finished without a strict-tolerance exit
    if tau <= opts.infeas_ratio * kappa.max(1.0) {
        // ray regime: try certificates at relaxed tolerance
        let gz = dot(g, &z);
        if gz > 1e-12 {
            let lam: Vec<f64> = z.iter().map(|v| v / gz).collect();
            let res = norm2(&f.tr_matvec(&lam)) / (1.0 + norm2(&lam));
            if res <= opts.relaxed_tol {
                return ContinuousResult {
                    status: SolveStatus::PrimalInfeasible,
                    primal: None,
                    dual_lambda: None,
                    objective: f64::INFINITY,
                    residuals: Residuals {
                        primal_res: res,
                        dual_res: 0.0,
                        gap: 0.0,
                    },
                    certificate: Some(Certificate::FarkasDual(lam)),
                    iterations,
                };
            }
        }
        let cu = dot(c, &u);
        if cu < -1e-12 {
            let ray: Vec<f64> = u.iter().map(|v| v / (-cu)).collect();
            let viol = (-cone.margin(&f.matvec(&ray)).unwrap_or(f64::NEG_INFINITY)).max(0.0);
            if viol / (1.0 + norm2(&ray)) <= opts.relaxed_tol {
                return ContinuousResult {
                    status: SolveStatus::DualInfeasible,
                    primal: None,
                    dual_lambda: None,
                    objective: f64::NEG_INFINITY,
                    residuals: Residuals {
                        primal_res: viol,
                        dual_res: 0.0,
                        gap: 0.0,
                    },
                    certificate: Some(Certificate::ImprovingRay(ray)),
                    iterations,
                };
            }
        }
    }
    if let Some(snap) = best {
        if snap.residuals.worst() <= opts.relaxed_tol {
            return finish_optimal(snap, iterations);
        }
        return ContinuousResult {
            status: SolveStatus::IllPosed,
            objective: snap.objective,
            primal: Some(snap.primal),
            dual_lambda: Some(snap.dual),
            residuals: snap.residuals,
            certificate: None,
            iterations,
        };
    }
    ContinuousResult {
        status: SolveStatus::IllPosed,
        primal: None,
        dual_lambda: None,
        objective: f64::NAN,
        residuals: Residuals {
            primal_res: f64::INFINITY,
            dual_res: f64::INFINITY,
            gap: f64::INFINITY,
        },
        certificate: None,
        iterations,
    }
}

/// Solves the continuous conic program of an instance with no integer
/// variables (callers relax first).
pub fn solve_continuous(inst: &Instance) -> ContinuousResult {
    assert_eq!(inst.n1(), 0, "solve_continuous requires n1 = 0; relax first");
    let prog = ConicProgram {
        objective: inst.d.clone(),
        rows: inst.g.clone(),
        rhs: inst.b.clone(),
        cone: inst.cone.clone(),
    };
    solve(&prog)
}

// ---------------------------------------------------------------------------
// Dual feasibility of the continuous relaxation
// ---------------------------------------------------------------------------

/// Outcome of the dual feasibility search for the relaxation of an instance:
/// find lam in K with [A G]'lam = (c, d) (binary bound rows included).
#[derive(Clone, Debug)]
pub enum DualFeasibility {
    Feasible(Vec<f64>),
    Infeasible(FarkasCertificate),
    Unknown,
}

/// Approximate Farkas certificate that no dual multiplier exists:
/// `q . mu = 1` exactly and `-M mu` lies in K up to `margin_violation`,
/// where M = [A G] (with bound rows) and q = (c, d).
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub mu: Vec<f64>,
    pub margin_violation: f64,
}

const DUAL_EQ_TOL: f64 = 1e-7;
const DUAL_CONE_TOL: f64 = 1e-7;

/// Searches for a feasible multiplier of the conic dual of the continuous
/// relaxation, or for a Farkas-style certificate that none exists.
///
/// The equality system M'lam = q is eliminated exactly (particular solution
/// plus null-space basis), and feasibility is decided by maximizing the cone
/// margin over growing boxes. Certificates are found by maximizing the
/// margin of -M mu over q.mu = 1 and sweeping the unbounded direction, with
/// every accepted vector re-verified directly from the raw data.
pub fn check_dual_feasible(inst: &Instance) -> DualFeasibility {
    let rel = if inst.n1() > 0 {
        inst.continuous_relaxation()
    } else {
        inst.clone()
    };
    let mmat = &rel.g; // m x n
    let q = &rel.d;
    let cone = &rel.cone;
    let m = rel.m();
    let n = mmat.ncols();

    if norm_inf(q) == 0.0 {
        return DualFeasibility::Feasible(vec![0.0; m]);
    }

    // particular solution of M'lam = q
    let mt = mmat.transpose();
    let qr_mt = crate::linalg::PivotedQr::new(&mt, 1e-12);
    let lam0 = qr_mt.lstsq(q);
    let resid = {
        let v = mt.matvec(&lam0);
        let r: Vec<f64> = q.iter().zip(&v).map(|(a, b)| a - b).collect();
        r
    };
    if norm2(&resid) > 1e-9 * (1.0 + norm2(q)) {
        // inconsistent linear system: exact Farkas direction in ker(M)
        let qr_scale = dot(q, &resid);
        if qr_scale.abs() > 1e-300 {
            let mu: Vec<f64> = resid.iter().map(|v| v / qr_scale).collect();
            let neg_mmu: Vec<f64> = mmat.matvec(&mu).iter().map(|v| -v).collect();
            let viol = (-cone.margin(&neg_mmu).unwrap()).max(0.0);
            if viol <= DUAL_CONE_TOL {
                return DualFeasibility::Infeasible(FarkasCertificate {
                    mu,
                    margin_violation: viol,
                });
            }
        }
        return DualFeasibility::Unknown;
    }

    let qr_m = crate::linalg::PivotedQr::new(mmat, 1e-12);
    let nullb = qr_m.null_basis_of_transpose(); // m x p, basis of {dl: M'dl = 0}
    let p = nullb.ncols();
    let e = cone.interior_direction();

    // feasibility: max t s.t. lam0 + N xi - t e in K, |xi| <= r, t <= 1
    let mut prev_t = f64::NEG_INFINITY;
    for &radius in &[1e2, 1e4, 1e6] {
        let nv = p + 1;
        let mut rows = Matrix::zeros(m + 2 * p + 1, nv);
        let mut rhs = vec![0.0; m + 2 * p + 1];
        for i in 0..m {
            for j in 0..p {
                rows[(i, j)] = nullb[(i, j)];
            }
            rows[(i, p)] = -e[i];
            rhs[i] = -lam0[i];
        }
        for j in 0..p {
            rows[(m + 2 * j, j)] = 1.0; // xi_j >= -radius
            rhs[m + 2 * j] = -radius;
            rows[(m + 2 * j + 1, j)] = -1.0; // -xi_j >= -radius
            rhs[m + 2 * j + 1] = -radius;
        }
        rows[(m + 2 * p, p)] = -1.0; // t <= 1
        rhs[m + 2 * p] = -1.0;
        let mut objective = vec![0.0; nv];
        objective[p] = -1.0; // max t
        let mut cone_posed = cone.clone();
        cone_posed.push_block(ConeBlock::Orthant { dim: 2 * p + 1 });
        let prog = ConicProgram {
            objective,
            rows,
            rhs,
            cone: cone_posed,
        };
        let res = solve(&prog);
        if res.status == SolveStatus::Optimal {
            let sol = res.primal.as_ref().unwrap();
            let t = sol[p];
            let lam: Vec<f64> = (0..m)
                .map(|i| lam0[i] + (0..p).map(|j| nullb[(i, j)] * sol[j]).sum::<f64>())
                .collect();
            let eq_res = {
                let v = mt.matvec(&lam);
                norm_inf(&q.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<f64>>())
            };
            let margin = cone.margin(&lam).unwrap();
            if eq_res <= DUAL_EQ_TOL && margin >= -DUAL_CONE_TOL {
                return DualFeasibility::Feasible(lam);
            }
            if t <= prev_t + 1e-7 * (1.0 + t.abs()) {
                break; // stagnant: escalating the box does not help
            }
            prev_t = t;
        }
    }

    // certificate search: mu with q.mu = 1 and -M mu in K (approximately)
    let qmat = Matrix::from_fn(n, 1, |i, _| q[i]);
    let qr_q = crate::linalg::PivotedQr::new(&qmat, 1e-12);
    let qnull = qr_q.null_basis_of_transpose(); // n x (n-1)
    let pq = qnull.ncols();
    let qn2 = dot(q, q);
    let mu0: Vec<f64> = q.iter().map(|v| v / qn2).collect();

    let eval_mu = |mu: &[f64]| -> f64 {
        let neg: Vec<f64> = mmat.matvec(mu).iter().map(|v| -v).collect();
        (-cone.margin(&neg).unwrap()).max(0.0)
    };

    // direction from a well-scaled box problem
    let radius = 100.0;
    let nv = pq + 1;
    let mq = mmat.matmul(&qnull); // m x pq
    let m_mu0 = mmat.matvec(&mu0);
    let mut rows = Matrix::zeros(m + 2 * pq + 1, nv);
    let mut rhs = vec![0.0; m + 2 * pq + 1];
    for i in 0..m {
        for j in 0..pq {
            rows[(i, j)] = -mq[(i, j)];
        }
        rows[(i, pq)] = -e[i];
        rhs[i] = m_mu0[i];
    }
    for j in 0..pq {
        rows[(m + 2 * j, j)] = 1.0;
        rhs[m + 2 * j] = -radius;
        rows[(m + 2 * j + 1, j)] = -1.0;
        rhs[m + 2 * j + 1] = -radius;
    }
    rows[(m + 2 * pq, pq)] = -1.0;
    rhs[m + 2 * pq] = -1.0;
    let mut objective = vec![0.0; nv];
    objective[pq] = -1.0;
    let mut cone_posed = cone.clone();
    cone_posed.push_block(ConeBlock::Orthant { dim: 2 * pq + 1 });
    let prog = ConicProgram {
        objective,
        rows,
        rhs,
        cone: cone_posed,
    };
    let res = solve(&prog);
    let mut candidates: Vec<Vec<f64>> = vec![mu0.clone()];
    if res.status == SolveStatus::Optimal {
        let sol = res.primal.as_ref().unwrap();
        let xi = &sol[..pq];
        if norm_inf(xi) > 1e-9 {
            let dir = qnull.matvec(xi);
            let dirn = norm_inf(&dir);
            let dir: Vec<f64> = dir.iter().map(|v| v / dirn).collect();
            // the box optimum itself, then the unbounded-direction sweep
            candidates.push((0..n).map(|i| mu0[i] + qnull.matvec(xi)[i]).collect());
            let mut t = 1.0;
            while t <= 1e12 {
                candidates.push((0..n).map(|i| mu0[i] + t * dir[i]).collect());
                t *= 10.0;
            }
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mut mu in candidates {
        // large sweep multiples amplify the basis' tiny non-orthogonality;
        // restore q.mu = 1 exactly before judging the candidate
        let drift = 1.0 - dot(q, &mu);
        for (mi, qi) in mu.iter_mut().zip(q) {
            *mi += qi * drift / qn2;
        }
        let viol = eval_mu(&mu);
        if best.as_ref().map_or(true, |(bv, _)| viol < *bv) {
            best = Some((viol, mu));
        }
    }
    if let Some((viol, mu)) = best {
        if viol <= DUAL_CONE_TOL {
            return DualFeasibility::Infeasible(FarkasCertificate {
                mu,
                margin_violation: viol,
            });
        }
    }
    DualFeasibility::Unknown
}

// ---------------------------------------------------------------------------
// Certificate verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckItem>,
    pub pass: bool,
}

impl VerifyReport {
    fn from_checks(checks: Vec<CheckItem>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerifyReport { checks, pass }
    }

    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.checks.iter().find(|c| !c.pass)
    }
}

fn check_le(name: &str, value: f64, threshold: f64) -> CheckItem {
    CheckItem {
        name: name.into(),
        value,
        threshold,
        pass: value <= threshold,
    }
}

/// Recomputes every claim of a continuous result from the raw instance data
/// with no solver state.
pub fn verify_certificate(inst: &Instance, res: &ContinuousResult, tol: f64) -> VerifyReport {
    let rel = if inst.n1() > 0 {
        inst.continuous_relaxation()
    } else {
        inst.clone()
    };
    let f = &rel.g;
    let g = &rel.b;
    let c = &rel.d;
    let cone = &rel.cone;
    let mut checks = Vec::new();
    match res.status {
        SolveStatus::Optimal => {
            match (&res.primal, &res.dual_lambda) {
                (Some(u), Some(lam)) => {
                    let fu = f.matvec(u);
                    let sres: Vec<f64> = fu.iter().zip(g).map(|(a, b)| a - b).collect();
                    let pviol = (-cone.margin(&sres).unwrap()).max(0.0);
                    checks.push(check_le("primal cone feasibility", pviol, tol));
                    let dres = {
                        let v = f.tr_matvec(lam);
                        norm_inf(&v.iter().zip(c).map(|(a, b)| a - b).collect::<Vec<f64>>())
                    };
                    checks.push(check_le("dual equality residual", dres, tol));
                    let lam_viol = (-cone.margin(lam).unwrap()).max(0.0);
                    checks.push(check_le("dual cone membership", lam_viol, tol));
                    let gap = (dot(c, u) - dot(g, lam)).abs();
                    checks.push(check_le(
                        "objective gap",
                        gap,
                        tol * (1.0 + dot(c, u).abs() + dot(g, lam).abs()),
                    ));
                }
                _ => checks.push(CheckItem {
                    name: "optimal result carries primal and dual points".into(),
                    value: 1.0,
                    threshold: 0.0,
                    pass: false,
                }),
            }
        }
        SolveStatus::PrimalInfeasible => match &res.certificate {
            Some(Certificate::FarkasDual(lam)) => {
                let scale = 1.0 + norm_inf(lam);
                let eqres = norm_inf(&f.tr_matvec(lam));
                checks.push(check_le("Farkas column residual", eqres, tol * scale));
                let lam_viol = (-cone.margin(lam).unwrap()).max(0.0);
                checks.push(check_le("Farkas cone membership", lam_viol, tol * scale));
                let pos = dot(g, lam);
                checks.push(CheckItem {
                    name: "Farkas positivity b.lam > 0".into(),
                    value: pos,
                    threshold: tol,
                    pass: pos > tol,
                });
            }
            _ => checks.push(CheckItem {
                name: "primal-infeasible result carries a Farkas certificate".into(),
                value: 1.0,
                threshold: 0.0,
                pass: false,
            }),
        },
        SolveStatus::DualInfeasible => match &res.certificate {
            Some(Certificate::ImprovingRay(r)) => {
                let scale = 1.0 + norm_inf(r);
                let viol = (-cone.margin(&f.matvec(r)).unwrap()).max(0.0);
                checks.push(check_le("ray cone membership", viol, tol * scale));
                let obj = dot(c, r);
                checks.push(CheckItem {
                    name: "ray improves objective c.r < 0".into(),
                    value: obj,
                    threshold: -tol,
                    pass: obj < -tol,
                });
            }
            _ => checks.push(CheckItem {
                name: "dual-infeasible result carries an improving ray".into(),
                value: 1.0,
                threshold: 0.0,
                pass: false,
            }),
        },
        SolveStatus::IllPosed => checks.push(CheckItem {
            name: "ill-posed result makes no claim".into(),
            value: 0.0,
            threshold: 1.0,
            pass: true,
        }),
    }
    VerifyReport::from_checks(checks)
}

/// Checks a Farkas certificate produced by [`check_dual_feasible`] directly
/// against the relaxation data.
pub fn verify_farkas(inst: &Instance, cert: &FarkasCertificate, tol: f64) -> Result<VerifyReport, CoreError> {
    let rel = if inst.n1() > 0 {
        inst.continuous_relaxation()
    } else {
        inst.clone()
    };
    if cert.mu.len() != rel.n2() {
        return Err(CoreError::DimensionMismatch {
            what: "Farkas certificate".into(),
            expected: rel.n2(),
            got: cert.mu.len(),
        });
    }
    let neg: Vec<f64> = rel.g.matvec(&cert.mu).iter().map(|v| -v).collect();
    let viol = (-rel.cone.margin(&neg)?).max(0.0);
    let qmu = dot(&rel.d, &cert.mu);
    let checks = vec![
        check_le("-M mu cone violation", viol, tol),
        CheckItem {
            name: "normalization q.mu = 1".into(),
            value: qmu,
            threshold: 1e-9,
            pass: (qmu - 1.0).abs() <= 1e-9,
        },
    ];
    Ok(VerifyReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::cone::ConeBlock;

    fn lp(rows: Vec<Vec<f64>>, rhs: Vec<f64>, obj: Vec<f64>) -> ConicProgram {
        let m = rhs.len();
        ConicProgram {
            objective: obj,
            rows: Matrix::from_rows(&rows),
            rhs,
            cone: ConeProduct::new(vec![ConeBlock::Orthant { dim: m }]).unwrap(),
        }
    }

    #[test]
    fn lp_bounded_min() {
        // min x s.t. x >= 1  -> 1
        let prog = lp(vec![vec![1.0]], vec![1.0], vec![1.0]);
        let res = solve(&prog);
        assert_eq!(res.status, SolveStatus::Optimal);
        assert!((res.objective - 1.0).abs() < 1e-7, "{}", res.objective);
    }

    #[test]
    fn lp_two_var() {
        // min -x - 2y s.t. x <= 1, y <= 2, x,y >= 0 -> -5 at (1,2)
        let prog = lp(
            vec![
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
            ],
            vec![-1.0, -2.0, 0.0, 0.0],
            vec![-1.0, -2.0],
        );
        let res = solve(&prog);
        assert_eq!(res.status, SolveStatus::Optimal);
        assert!((res.objective + 5.0).abs() < 1e-7);
        let x = res.primal.unwrap();
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn lp_primal_infeasible_certificate() {
        // x >= 1 and -x >= 0: infeasible
        let prog = lp(vec![vec![1.0], vec![-1.0]], vec![1.0, 0.0], vec![0.0]);
        let res = solve(&prog);
        assert_eq!(res.status, SolveStatus::PrimalInfeasible);
        match res.certificate {
            Some(Certificate::FarkasDual(ref lam)) => {
                assert!(lam.iter().all(|&v| v >= -1e-9));
                let fr = prog.rows.tr_matvec(lam);
                assert!(norm_inf(&fr) < 1e-6);
                assert!((dot(&prog.rhs, lam) - 1.0).abs() < 1e-9);
            }
            _ => panic!("missing certificate"),
        }
    }

    #[test]
    fn lp_unbounded_ray() {
        // min -x s.t. x >= 0: unbounded below
        let prog = lp(vec![vec![1.0]], vec![0.0], vec![-1.0]);
        let res = solve(&prog);
        assert_eq!(res.status, SolveStatus::DualInfeasible);
        match res.certificate {
            Some(Certificate::ImprovingRay(ref r)) => {
                assert!((dot(&prog.objective, r) + 1.0).abs() < 1e-9);
                assert!(r[0] > 0.0);
            }
            _ => panic!("missing ray"),
        }
    }

    #[test]
    fn soc_sqrt2_sanity() {
        let inst = builtin::sqrt2_soc();
        let res = solve_continuous(&inst);
        assert_eq!(res.status, SolveStatus::Optimal);
        assert!(
            (res.objective - std::f64::consts::SQRT_2).abs() < 1e-6,
            "objective {}",
            res.objective
        );
        assert!(res.iterations <= 60);
    }

    #[test]
    fn psd_min_eigenvalue_sanity() {
        let inst = builtin::psd_margin();
        let res = solve_continuous(&inst);
        assert_eq!(res.status, SolveStatus::Optimal);
        let expect = -(2.0 - std::f64::consts::SQRT_2);
        assert!((res.objective - expect).abs() < 1e-6, "{}", res.objective);
    }

    #[test]
    fn nt_scaling_consistency_soc_and_psd() {
        // property: lam = W z = W^{-1} s for random-ish interior points
        let soc = ConeBlock::SecondOrder { dim: 4 };
        let s = [0.3, -0.2, 0.1, 1.5];
        let z = [-0.1, 0.4, 0.2, 2.0];
        let sc = BlockScaling::compute(soc, &s, &z).unwrap();
        let lam1 = sc.apply_w(&z);
        let lam2 = sc.apply_winv(&s);
        for (a, b) in lam1.iter().zip(&lam2) {
            assert!((a - b).abs() < 1e-10, "{lam1:?} vs {lam2:?}");
        }

        let psd = ConeBlock::PsdTriangle { order: 3 };
        let sm = Matrix::from_rows(&[
            vec![2.0, 0.3, 0.1],
            vec![0.3, 1.5, -0.2],
            vec![0.1, -0.2, 1.0],
        ]);
        let zm = Matrix::from_rows(&[
            vec![1.0, -0.1, 0.0],
            vec![-0.1, 2.0, 0.4],
            vec![0.0, 0.4, 0.8],
        ]);
        let s = svec(&sm);
        let z = svec(&zm);
        let sc = BlockScaling::compute(psd, &s, &z).unwrap();
        let lam1 = sc.apply_w(&z);
        let lam2 = sc.apply_winv(&s);
        for (a, b) in lam1.iter().zip(&lam2) {
            assert!((a - b).abs() < 1e-9, "{lam1:?} vs {lam2:?}");
        }
    }

    #[test]
    fn check_dual_feasible_zero_objective() {
        // c = 0, d = 0: lambda = 0 works
        let inst = builtin::example_1();
        let mut zeroed = inst.clone();
        zeroed.c = vec![0.0, 0.0];
        match check_dual_feasible(&zeroed) {
            DualFeasibility::Feasible(lam) => assert!(norm_inf(&lam) < 1e-12),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn check_dual_feasible_example_2() {
        let inst = builtin::example_2();
        match check_dual_feasible(&inst) {
            DualFeasibility::Feasible(lam) => {
                let atl = inst.a.tr_matvec(&lam);
                assert!((atl[0]).abs() < 1e-6, "{atl:?}");
                assert!((atl[1] - 1.0).abs() < 1e-6, "{atl:?}");
                assert!(inst.cone.margin(&lam).unwrap() >= -1e-7);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn check_dual_feasible_example_1_certificate() {
        let inst = builtin::example_1();
        match check_dual_feasible(&inst) {
            DualFeasibility::Infeasible(cert) => {
                assert!(cert.margin_violation <= 1e-6, "{}", cert.margin_violation);
                let rep = verify_farkas(&inst, &cert, 1e-6).unwrap();
                assert!(rep.pass, "{rep:?}");
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn verify_rejects_tampered_lambda() {
        let inst = builtin::sqrt2_soc();
        let mut res = solve_continuous(&inst);
        assert_eq!(res.status, SolveStatus::Optimal);
        assert!(verify_certificate(&inst, &res, 1e-6).pass);
        if let Some(lam) = res.dual_lambda.as_mut() {
            lam[0] += 0.5;
        }
        let rep = verify_certificate(&inst, &res, 1e-6);
        assert!(!rep.pass);
        assert!(rep.first_failure().is_some());
    }
}
