//! Subadditive dual function representations, the perturbed-problem
//! constructions behind the strong-duality proofs, dual feasibility
//! checking, and cut-generating-function machinery.
//!
//! A dual candidate is a function f on R^m that should satisfy, for the
//! instance at hand, the column value constraints `f(A^j) = -f(-A^j) = c_j`,
//! the bar constraints `fbar(G^j) = -fbar(-G^j) = d_j`, `f(0) = 0`,
//! subadditivity and K-monotonicity. Linear candidates `f(u) = lam.u` are
//! certified exactly (membership of lam in K = K*); oracle-backed candidates
//! are sampled, and the report says which.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::ConeBlock;
use crate::error::CoreError;
use crate::ipm::{self, ConicProgram, SolveStatus};
use crate::linalg::{dot, norm_inf, Matrix};
use crate::mip::{IntegerBox, ValueFunctionOracle};
use crate::model::Instance;

/// Absolute tolerance on column value constraints.
pub const VALUE_TOL: f64 = 1e-6;

/// A representation of a subadditive dual candidate.
#[derive(Debug)]
pub enum DualFunction {
    /// f(u) = lam . u; exact, with fbar = f.
    Linear(Vec<f64>),
    /// f = value function of an instance, restricted to the oracle box.
    ValueFn(ValueFunctionOracle),
    /// Triple-argument function on a lifted domain (binary bound rows or the
    /// w-perturbation rows appended after the cone rows).
    BinaryLifted {
        base: Box<DualFunction>,
        /// Dimension of the unlifted domain.
        base_dim: usize,
    },
    /// F(u) := base(u, 0, 0) for a base on R^{m+2}.
    Restricted { base: Box<DualFunction> },
    /// The optimal dual function of the final construction: the value
    /// function of the (x, y, w, s) conic MIP assembled by [`build_fstar`].
    FStar {
        oracle: ValueFunctionOracle,
        spec: PerturbationSpec,
    },
}

/// Data of the w/s perturbation constructions.
#[derive(Debug)]
pub struct PerturbationSpec {
    pub inst: Instance,
    /// Strictly interior perturbation direction v.
    pub v: Vec<f64>,
    pub eps: f64,
    /// M = theta(b) - theta(b - v).
    pub m_coeff: f64,
    /// Optimal value of the continuous bounded-w problem.
    pub theta_star: f64,
    pub box_: IntegerBox,
}

/// A valid inequality pi.x + gamma.y >= pi0 for the feasible region.
#[derive(Clone, Debug)]
pub struct Inequality {
    pub pi: Vec<f64>,
    pub gamma: Vec<f64>,
    pub pi0: f64,
    /// True when some gamma coefficient came from a numeric fbar profile
    /// rather than an exact evaluation.
    pub bar_numeric: bool,
}

/// fbar evaluation: exact for linear functions, a delta-profile otherwise.
#[derive(Clone, Debug)]
pub struct BarProfile {
    pub estimate: f64,
    /// (delta, f(delta u)/delta) samples, largest delta first.
    pub samples: Vec<(f64, f64)>,
    pub reliable: bool,
    pub exact: bool,
}

impl DualFunction {
    pub fn domain_dim(&self) -> usize {
        match self {
            DualFunction::Linear(lam) => lam.len(),
            DualFunction::ValueFn(oracle) => oracle.domain_dim(),
            DualFunction::BinaryLifted { base, .. } => base.domain_dim(),
            DualFunction::Restricted { base } => base.domain_dim() - 2,
            DualFunction::FStar { oracle, .. } => oracle.domain_dim() - 2,
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            DualFunction::Linear(_) => true,
            DualFunction::BinaryLifted { base, .. } | DualFunction::Restricted { base } => {
                base.is_exact()
            }
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DualFunction::Linear(_) => "linear".into(),
            DualFunction::ValueFn(_) => "value-function".into(),
            DualFunction::BinaryLifted { .. } => "binary-lifted".into(),
            DualFunction::Restricted { .. } => "restricted".into(),
            DualFunction::FStar { .. } => "f-star".into(),
        }
    }
}

/// Evaluates the dual function; oracle-backed variants may return +-inf.
pub fn evaluate(f: &DualFunction, u: &[f64]) -> Result<f64, CoreError> {
    if u.len() != f.domain_dim() {
        return Err(CoreError::DimensionMismatch {
            what: "dual function argument".into(),
            expected: f.domain_dim(),
            got: u.len(),
        });
    }
    match f {
        DualFunction::Linear(lam) => Ok(dot(lam, u)),
        DualFunction::ValueFn(oracle) => oracle.value(u),
        DualFunction::BinaryLifted { base, .. } => evaluate(base, u),
        DualFunction::Restricted { base } => {
            let mut lifted = u.to_vec();
            lifted.push(0.0);
            lifted.push(0.0);
            evaluate(base, &lifted)
        }
        DualFunction::FStar { oracle, .. } => {
            let mut lifted = u.to_vec();
            lifted.push(0.0);
            lifted.push(0.0);
            oracle.value(&lifted)
        }
    }
}

const BAR_DELTAS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Upper directional limit fbar(u) = limsup_{delta->0+} f(delta u)/delta.
/// Exact for linear functions; reported as a numeric profile otherwise.
pub fn evaluate_bar(f: &DualFunction, u: &[f64]) -> Result<BarProfile, CoreError> {
    if u.len() != f.domain_dim() {
        return Err(CoreError::DimensionMismatch {
            what: "dual function argument".into(),
            expected: f.domain_dim(),
            got: u.len(),
        });
    }
    if let DualFunction::Linear(lam) = f {
        return Ok(BarProfile {
            estimate: dot(lam, u),
            samples: vec![],
            reliable: true,
            exact: true,
        });
    }
    let mut samples = Vec::with_capacity(BAR_DELTAS.len());
    for &delta in &BAR_DELTAS {
        let scaled: Vec<f64> = u.iter().map(|v| v * delta).collect();
        let val = evaluate(f, &scaled)?;
        samples.push((delta, if val.is_finite() { val / delta } else { val }));
    }
    let finite: Vec<f64> = samples
        .iter()
        .map(|&(_, v)| v)
        .filter(|v| v.is_finite())
        .collect();
    let estimate = finite.iter().cloned().fold(f64::NAN, f64::max);
    let tail: Vec<f64> = samples.iter().rev().take(3).map(|&(_, v)| v).collect();
    let reliable = tail.iter().all(|v| v.is_finite()) && {
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo <= 1e-3
    };
    Ok(BarProfile {
        estimate,
        samples,
        reliable,
        exact: false,
    })
}

// ---------------------------------------------------------------------------
// Dual feasibility checking
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityVerdict {
    Feasible,
    Infeasible,
    FeasibleUpToSampling,
}

#[derive(Clone, Debug)]
pub struct ConstraintCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    pub verdict: FeasibilityVerdict,
    pub checks: Vec<ConstraintCheck>,
    pub notes: Vec<String>,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.verdict != FeasibilityVerdict::Infeasible
    }
}

fn data_norm(inst: &Instance) -> f64 {
    inst.a
        .norm_inf()
        .max(inst.g.norm_inf())
        .max(norm_inf(&inst.b))
        .max(1.0)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Checks the dual constraints of f against the instance. Linear candidates
/// get exact subadditivity/monotonicity certification through cone
/// membership of lam; oracle candidates are sampled with `samples` pairs.
pub fn check_dual_feasibility(
    f: &DualFunction,
    inst: &Instance,
    tol: f64,
    samples: usize,
) -> Result<FeasibilityReport, CoreError> {
    let m = inst.m();
    if f.domain_dim() != m {
        return Err(CoreError::DimensionMismatch {
            what: "dual function domain".into(),
            expected: m,
            got: f.domain_dim(),
        });
    }
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let mut hard_violation = false;

    // column value constraints f(A^j) = -f(-A^j) = c_j
    for j in 0..inst.n1() {
        let col = inst.a.col(j);
        let neg: Vec<f64> = col.iter().map(|v| -v).collect();
        let fpos = evaluate(f, &col)?;
        let fneg = evaluate(f, &neg)?;
        let ok = fpos.is_finite()
            && fneg.is_finite()
            && (fpos - inst.c[j]).abs() <= tol
            && (fneg + inst.c[j]).abs() <= tol;
        if !ok {
            hard_violation = true;
        }
        checks.push(ConstraintCheck {
            name: format!("value constraint on integer column {}", j + 1),
            ok,
            detail: format!("f(A^j)={fpos:.9}, -f(-A^j)={:.9}, c_j={}", -fneg, inst.c[j]),
        });
    }

    // bar constraints on continuous columns
    for j in 0..inst.n2() {
        let col = inst.g.col(j);
        let neg: Vec<f64> = col.iter().map(|v| -v).collect();
        let bpos = evaluate_bar(f, &col)?;
        let bneg = evaluate_bar(f, &neg)?;
        let ok = bpos.estimate.is_finite()
            && bneg.estimate.is_finite()
            && (bpos.estimate - inst.d[j]).abs() <= tol
            && (bneg.estimate + inst.d[j]).abs() <= tol;
        if !(bpos.reliable && bneg.reliable) {
            notes.push(format!(
                "fbar profile on continuous column {} is numeric-only",
                j + 1
            ));
        }
        if !ok && bpos.exact {
            hard_violation = true;
        }
        checks.push(ConstraintCheck {
            name: format!("bar constraint on continuous column {}", j + 1),
            ok,
            detail: format!(
                "fbar(G^j)={:.9} (reliable={}), -fbar(-G^j)={:.9}, d_j={}",
                bpos.estimate, bpos.reliable, -bneg.estimate, inst.d[j]
            ),
        });
    }

    // f(0) = 0
    let f0 = evaluate(f, &vec![0.0; m])?;
    let ok0 = f0.is_finite() && f0.abs() <= f64::max(1e-9, tol * 1e-3);
    if !ok0 {
        hard_violation = true;
    }
    checks.push(ConstraintCheck {
        name: "f(0) = 0".into(),
        ok: ok0,
        detail: format!("f(0) = {f0:.3e}"),
    });

    let mut sampled = false;
    match f {
        DualFunction::Linear(lam) => {
            // lam in K* certifies subadditivity (equality) and K-monotonicity
            let margin = inst.cone.margin(lam)?;
            let ok = margin >= -1e-9;
            if !ok {
                hard_violation = true;
                let mut worst = (0usize, f64::INFINITY);
                for (k, (block, r)) in inst.cone.block_ranges().iter().enumerate() {
                    let bm = block.margin(&lam[r.clone()]);
                    if bm < worst.1 {
                        worst = (k, bm);
                    }
                }
                checks.push(ConstraintCheck {
                    name: "K-monotonicity (lam in K*)".into(),
                    ok: false,
                    detail: format!(
                        "lam leaves the dual cone on block {} (margin {:.3e})",
                        worst.0 + 1,
                        worst.1
                    ),
                });
            } else {
                checks.push(ConstraintCheck {
                    name: "K-monotonicity (lam in K*)".into(),
                    ok: true,
                    detail: format!("cone margin {margin:.3e}"),
                });
                checks.push(ConstraintCheck {
                    name: "subadditivity".into(),
                    ok: true,
                    detail: "exact for linear functions".into(),
                });
            }
        }
        _ => {
            sampled = true;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5ddc0de);
            let scale = data_norm(inst);
            let mut sub_ok = true;
            let mut sub_detail = String::from("no finite sample triples");
            let mut tested = 0;
            for _ in 0..samples {
                let u: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
                let v: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
                let uv: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
                let (fu, fv, fuv) = (evaluate(f, &u)?, evaluate(f, &v)?, evaluate(f, &uv)?);
                if !(fu.is_finite() && fv.is_finite() && fuv.is_finite()) {
                    continue;
                }
                tested += 1;
                if fuv > fu + fv + 1e-6 {
                    sub_ok = false;
                    sub_detail = format!("f(u+v)={fuv:.9} > f(u)+f(v)={:.9}", fu + fv);
                    break;
                }
            }
            if sub_ok {
                sub_detail = format!("{tested} finite sampled pairs");
            } else {
                hard_violation = true;
            }
            checks.push(ConstraintCheck {
                name: "subadditivity (sampled)".into(),
                ok: sub_ok,
                detail: sub_detail,
            });

            let mut mono_ok = true;
            let mut mono_detail = String::new();
            let mut tested = 0;
            for _ in 0..samples {
                let w: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
                let raw: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
                let k = inst.cone.project(&raw)?;
                let wk: Vec<f64> = w.iter().zip(&k).map(|(a, b)| a + b).collect();
                let (fw, fwk) = (evaluate(f, &w)?, evaluate(f, &wk)?);
                if !(fw.is_finite() && fwk.is_finite()) {
                    continue;
                }
                tested += 1;
                if fwk < fw - 1e-6 {
                    mono_ok = false;
                    mono_detail = format!("f(w+k)={fwk:.9} < f(w)={fw:.9} for k in K");
                    break;
                }
            }
            if mono_ok {
                mono_detail = format!("{tested} finite sampled directions");
            } else {
                hard_violation = true;
            }
            checks.push(ConstraintCheck {
                name: "K-monotonicity (sampled)".into(),
                ok: mono_ok,
                detail: mono_detail,
            });
        }
    }

    let verdict = if hard_violation {
        FeasibilityVerdict::Infeasible
    } else if sampled {
        FeasibilityVerdict::FeasibleUpToSampling
    } else {
        FeasibilityVerdict::Feasible
    };
    Ok(FeasibilityReport {
        verdict,
        checks,
        notes,
    })
}

// ---------------------------------------------------------------------------
// Perturbed problem constructions
// ---------------------------------------------------------------------------

/// Binary right-hand-side perturbation: the instance over Z^{n1} x R^{n2}
/// with cone K x R+^{n1} x R+^{n1}, rows x >= -eps e and -x >= -(1+eps) e
/// appended. Its feasible region coincides with the binary original.
pub fn build_binary_perturbation(inst: &Instance, eps: f64) -> Result<Instance, CoreError> {
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "eps must lie strictly in (0, 1), got {eps}"
        )));
    }
    if inst.binary_mask.iter().any(|&b| !b) {
        return Err(CoreError::InvalidArgument(
            "binary perturbation requires every integer variable to be binary".into(),
        ));
    }
    let (n1, n2, m) = (inst.n1(), inst.n2(), inst.m());
    let mut a = Matrix::zeros(m + 2 * n1, n1);
    let mut g = Matrix::zeros(m + 2 * n1, n2);
    let mut b = inst.b.clone();
    for i in 0..m {
        for j in 0..n1 {
            a[(i, j)] = inst.a[(i, j)];
        }
        for j in 0..n2 {
            g[(i, j)] = inst.g[(i, j)];
        }
    }
    for j in 0..n1 {
        a[(m + j, j)] = 1.0; // x_j >= -eps
        a[(m + n1 + j, j)] = -1.0; // -x_j >= -(1+eps)
    }
    b.extend(std::iter::repeat(-eps).take(n1));
    b.extend(std::iter::repeat(-(1.0 + eps)).take(n1));
    let mut cone = inst.cone.clone();
    cone.push_block(ConeBlock::Orthant { dim: n1 });
    cone.push_block(ConeBlock::Orthant { dim: n1 });
    Instance::new(a, g, b, inst.c.clone(), inst.d.clone(), cone, vec![false; n1])
}

fn require_interior(inst: &Instance, v: &[f64]) -> Result<(), CoreError> {
    let margin = inst.cone.margin(v)?;
    if margin <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "perturbation direction is not strictly interior (margin {margin:.3e})"
        )));
    }
    Ok(())
}

/// The w-perturbed instance of the strong-duality proof: one extra binary
/// variable w with column v and objective coefficient
/// M = theta(b) - theta(b - v). The perturbed optimum equals the original.
pub fn build_w_perturbation(
    inst: &Instance,
    v: &[f64],
    box_: &IntegerBox,
) -> Result<(Instance, PerturbationSpec), CoreError> {
    build_w_perturbation_with_eps(inst, v, 0.5, box_)
}

pub fn build_w_perturbation_with_eps(
    inst: &Instance,
    v: &[f64],
    eps: f64,
    box_: &IntegerBox,
) -> Result<(Instance, PerturbationSpec), CoreError> {
    require_interior(inst, v)?;
    let oracle = ValueFunctionOracle::new(inst.clone(), box_.clone())?;
    let theta_b = oracle.value(&inst.b)?;
    let bv: Vec<f64> = inst.b.iter().zip(v).map(|(b, vi)| b - vi).collect();
    let theta_bv = oracle.value(&bv)?;
    let m_coeff = theta_b - theta_bv;
    if !m_coeff.is_finite() {
        return Err(CoreError::InvalidArgument(format!(
            "M = theta(b) - theta(b-v) is not finite (theta(b)={theta_b}, theta(b-v)={theta_bv})"
        )));
    }
    let (n1, m) = (inst.n1(), inst.m());
    let mut a = Matrix::zeros(m, n1 + 1);
    for i in 0..m {
        for j in 0..n1 {
            a[(i, j)] = inst.a[(i, j)];
        }
        a[(i, n1)] = v[i];
    }
    let mut c = inst.c.clone();
    c.push(m_coeff);
    let mut mask = inst.binary_mask.clone();
    mask.push(true);
    let perturbed = Instance::new(
        a,
        inst.g.clone(),
        inst.b.clone(),
        c,
        inst.d.clone(),
        inst.cone.clone(),
        mask,
    )?;
    let theta_star = solve_theta_star(inst, v, eps, m_coeff)?;
    let spec = PerturbationSpec {
        inst: inst.clone(),
        v: v.to_vec(),
        eps,
        m_coeff,
        theta_star,
        box_: box_.clone(),
    };
    Ok((perturbed, spec))
}

/// Solves the continuous bounded-w problem: min c.x + d.y + M w subject to
/// Ax + Gy + v w >=_K b, w >= -eps, -w >= -(1+eps), everything continuous.
fn solve_theta_star(inst: &Instance, v: &[f64], eps: f64, m_coeff: f64) -> Result<f64, CoreError> {
    let (n1, n2, m) = (inst.n1(), inst.n2(), inst.m());
    let nv = n1 + n2 + 1;
    let mut rows = Matrix::zeros(m + 2, nv);
    let mut rhs = vec![0.0; m + 2];
    for i in 0..m {
        for j in 0..n1 {
            rows[(i, j)] = inst.a[(i, j)];
        }
        for j in 0..n2 {
            rows[(i, n1 + j)] = inst.g[(i, j)];
        }
        rows[(i, n1 + n2)] = v[i];
        rhs[i] = inst.b[i];
    }
    rows[(m, n1 + n2)] = 1.0;
    rhs[m] = -eps;
    rows[(m + 1, n1 + n2)] = -1.0;
    rhs[m + 1] = -(1.0 + eps);
    let mut objective = inst.c.clone();
    objective.extend_from_slice(&inst.d);
    objective.push(m_coeff);
    let mut cone = inst.cone.clone();
    cone.push_block(ConeBlock::Orthant { dim: 2 });
    let prog = ConicProgram {
        objective,
        rows,
        rhs,
        cone,
    };
    let res = ipm::solve(&prog);
    match res.status {
        SolveStatus::Optimal => Ok(res.objective),
        SolveStatus::IllPosed if res.residuals.primal_res <= 1e-4 && res.objective.is_finite() => {
            // unattained optimum: accept the best iterate value
            Ok(res.objective)
        }
        other => Err(CoreError::Numerical(format!(
            "continuous bounded-w problem did not solve (status {other:?})"
        ))),
    }
}

/// Builds the optimal dual function of the final construction: the value
/// function of the conic MIP over (x, y, w, s) with columns [A G v -b],
/// the eps rows on (w, s), and objective coefficients M on w and
/// theta(b) - 2 Theta* on s. Both w and s are restricted to {0, 1}.
pub fn build_fstar(
    inst: &Instance,
    eps: f64,
    v: &[f64],
    box_: &IntegerBox,
) -> Result<DualFunction, CoreError> {
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "eps must lie strictly in (0, 1), got {eps}"
        )));
    }
    require_interior(inst, v)?;
    let oracle0 = ValueFunctionOracle::new(inst.clone(), box_.clone())?;
    let theta_b = oracle0.value(&inst.b)?;
    let bv: Vec<f64> = inst.b.iter().zip(v).map(|(b, vi)| b - vi).collect();
    let theta_bv = oracle0.value(&bv)?;
    let m_coeff = theta_b - theta_bv;
    if !theta_b.is_finite() || !m_coeff.is_finite() {
        return Err(CoreError::InvalidArgument(
            "f* construction needs finite theta(b) and theta(b-v)".into(),
        ));
    }
    let theta_star = solve_theta_star(inst, v, eps, m_coeff)?;
    let s_coeff = theta_b - 2.0 * theta_star;

    let (n1, n2, m) = (inst.n1(), inst.n2(), inst.m());
    let mut a = Matrix::zeros(m + 2, n1 + 2);
    let mut g = Matrix::zeros(m + 2, n2);
    let mut b = vec![0.0; m + 2];
    for i in 0..m {
        for j in 0..n1 {
            a[(i, j)] = inst.a[(i, j)];
        }
        a[(i, n1)] = v[i]; // w column
        a[(i, n1 + 1)] = -inst.b[i]; // s column
        for j in 0..n2 {
            g[(i, j)] = inst.g[(i, j)];
        }
        b[i] = inst.b[i];
    }
    // w + eps s >= 0 and -w + (1+eps) s >= 0
    a[(m, n1)] = 1.0;
    a[(m, n1 + 1)] = eps;
    a[(m + 1, n1)] = -1.0;
    a[(m + 1, n1 + 1)] = 1.0 + eps;
    let mut c = inst.c.clone();
    c.push(m_coeff);
    c.push(s_coeff);
    let mut mask = inst.binary_mask.clone();
    mask.push(true);
    mask.push(true);
    let mut cone = inst.cone.clone();
    cone.push_block(ConeBlock::Orthant { dim: 1 });
    cone.push_block(ConeBlock::Orthant { dim: 1 });
    let extended = Instance::new(a, g, b, c, inst.d.clone(), cone, mask)?;
    let mut lower = box_.lower.clone();
    let mut upper = box_.upper.clone();
    lower.extend_from_slice(&[0, 0]);
    upper.extend_from_slice(&[1, 1]);
    let ext_box = IntegerBox::new(lower, upper)?;
    let oracle = ValueFunctionOracle::new(extended, ext_box)?;
    let spec = PerturbationSpec {
        inst: inst.clone(),
        v: v.to_vec(),
        eps,
        m_coeff,
        theta_star,
        box_: box_.clone(),
    };
    Ok(DualFunction::FStar { oracle, spec })
}

/// Value-function dual of the w-perturbed problem on the lifted domain
/// R^{m+2}: f'(u, p, q) = inf c.x + d.y + M w s.t. Ax + Gy + vw >= u,
/// w >= p, -w >= q, with w binary. Restricting to (u, 0, 0) yields a dual
/// candidate for the original instance.
pub fn build_w_lifted_valuefn(
    inst: &Instance,
    v: &[f64],
    box_: &IntegerBox,
) -> Result<DualFunction, CoreError> {
    let (perturbed, _spec) = build_w_perturbation(inst, v, box_)?;
    // append the bound rows for w so the lifted argument controls them
    let (n1p, n2, m) = (perturbed.n1(), perturbed.n2(), perturbed.m());
    let mut a = Matrix::zeros(m + 2, n1p);
    let mut g = Matrix::zeros(m + 2, n2);
    let mut b = perturbed.b.clone();
    for i in 0..m {
        for j in 0..n1p {
            a[(i, j)] = perturbed.a[(i, j)];
        }
        for j in 0..n2 {
            g[(i, j)] = perturbed.g[(i, j)];
        }
    }
    a[(m, n1p - 1)] = 1.0; // w >= p
    a[(m + 1, n1p - 1)] = -1.0; // -w >= q
    b.push(0.0);
    b.push(-1.0);
    let mut cone = perturbed.cone.clone();
    cone.push_block(ConeBlock::Orthant { dim: 1 });
    cone.push_block(ConeBlock::Orthant { dim: 1 });
    let lifted = Instance::new(
        a,
        g,
        b,
        perturbed.c.clone(),
        perturbed.d.clone(),
        cone,
        perturbed.binary_mask.clone(),
    )?;
    let mut lower = box_.lower.clone();
    let mut upper = box_.upper.clone();
    lower.push(0);
    upper.push(1);
    let ext_box = IntegerBox::new(lower, upper)?;
    let oracle = ValueFunctionOracle::new(lifted, ext_box)?;
    Ok(DualFunction::BinaryLifted {
        base: Box::new(DualFunction::ValueFn(oracle)),
        base_dim: inst.m(),
    })
}

// ---------------------------------------------------------------------------
// Cut generation
// ---------------------------------------------------------------------------

/// Builds the valid inequality pi.x + gamma.y >= pi0 with pi_j = F(A^j),
/// gamma_j = Fbar(G^j), pi0 = F(b). The column value constraints are not
/// required; F only needs f(0) = 0, monotonicity and subadditivity.
pub fn generate_cut(f: &DualFunction, inst: &Instance) -> Result<Inequality, CoreError> {
    if f.domain_dim() != inst.m() {
        return Err(CoreError::DimensionMismatch {
            what: "cut-generating function domain".into(),
            expected: inst.m(),
            got: f.domain_dim(),
        });
    }
    let f0 = evaluate(f, &vec![0.0; inst.m()])?;
    if !(f0.is_finite() && f0.abs() <= 1e-9) {
        return Err(CoreError::InvalidArgument(format!(
            "cut-generating function must satisfy f(0) = 0, got {f0:.3e}"
        )));
    }
    if let DualFunction::Linear(lam) = f {
        let margin = inst.cone.margin(lam)?;
        if margin < -1e-9 {
            return Err(CoreError::InvalidArgument(format!(
                "linear cut-generating function needs lam in K* (margin {margin:.3e})"
            )));
        }
    }
    let mut pi = Vec::with_capacity(inst.n1());
    for j in 0..inst.n1() {
        let val = evaluate(f, &inst.a.col(j))?;
        if !val.is_finite() {
            return Err(CoreError::Numerical(format!(
                "F(A^{}) is not finite; cannot generate a cut",
                j + 1
            )));
        }
        pi.push(val);
    }
    let mut gamma = Vec::with_capacity(inst.n2());
    let mut bar_numeric = false;
    for j in 0..inst.n2() {
        let prof = evaluate_bar(f, &inst.g.col(j))?;
        if !prof.estimate.is_finite() {
            return Err(CoreError::Numerical(format!(
                "Fbar(G^{}) is not finite; cannot generate a cut",
                j + 1
            )));
        }
        bar_numeric |= !prof.exact;
        gamma.push(prof.estimate);
    }
    let pi0 = evaluate(f, &inst.b)?;
    if !pi0.is_finite() {
        return Err(CoreError::Numerical("F(b) is not finite".into()));
    }
    Ok(Inequality {
        pi,
        gamma,
        pi0,
        bar_numeric,
    })
}

/// True iff every feasible point over the box satisfies the inequality to
/// 1e-7: integer assignments are enumerated and, per assignment, the
/// continuous part is driven to the cut's worst case by minimizing gamma.y.
pub fn verify_cut(
    ineq: &Inequality,
    inst: &Instance,
    box_: &IntegerBox,
) -> Result<bool, CoreError> {
    let box_ = box_.clone().clamp_binary(inst);
    let card = box_.cardinality();
    if card > crate::mip::BOX_CAP {
        return Err(CoreError::BoxTooLarge {
            assignments: card,
            cap: crate::mip::BOX_CAP,
        });
    }
    for x in box_.iter() {
        let xr: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let pix = dot(&ineq.pi, &xr);
        let ax = inst.a.matvec(&xr);
        let rhs: Vec<f64> = inst.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        if inst.n2() == 0 {
            let slack: Vec<f64> = rhs.iter().map(|v| -v).collect();
            if inst.cone.margin(&slack)? >= -crate::mip::FEAS_TOL && pix < ineq.pi0 - 1e-7 {
                return Ok(false);
            }
        } else {
            let prog = ConicProgram {
                objective: ineq.gamma.clone(),
                rows: inst.g.clone(),
                rhs,
                cone: inst.cone.clone(),
            };
            let res = ipm::solve(&prog);
            match res.status {
                SolveStatus::Optimal => {
                    if pix + res.objective < ineq.pi0 - 1e-7 {
                        return Ok(false);
                    }
                }
                SolveStatus::DualInfeasible => return Ok(false),
                SolveStatus::PrimalInfeasible | SolveStatus::IllPosed => {}
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::cone::svec;
    use crate::mip::{solve_mip, MipStatus};

    #[test]
    fn linear_evaluate_example_2() {
        let inst = builtin::example_2();
        let f = DualFunction::Linear(builtin::example_2_lambda());
        assert!((evaluate(&f, &inst.b).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(evaluate(&f, &vec![0.0; 6]).unwrap(), 0.0);
    }

    #[test]
    fn valuefn_evaluate_ceil() {
        let oracle = ValueFunctionOracle::new(
            builtin::ceil_instance(),
            IntegerBox::symmetric(1, 100),
        )
        .unwrap();
        let f = DualFunction::ValueFn(oracle);
        assert_eq!(evaluate(&f, &[2.3]).unwrap(), 3.0);
        assert_eq!(evaluate(&f, &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn bar_linear_exact() {
        let f = DualFunction::Linear(vec![2.0, -1.0]);
        let prof = evaluate_bar(&f, &[3.0, 1.0]).unwrap();
        assert!(prof.exact && prof.reliable);
        assert_eq!(prof.estimate, 5.0);
    }

    #[test]
    fn bar_ceil_oracle_unreliable_at_one() {
        // ceil(delta)/delta = 1/delta blows up: the profile must be flagged
        let oracle = ValueFunctionOracle::new(
            builtin::ceil_instance(),
            IntegerBox::symmetric(1, 100),
        )
        .unwrap();
        let f = DualFunction::ValueFn(oracle);
        let prof = evaluate_bar(&f, &[1.0]).unwrap();
        assert!(!prof.exact);
        assert!(!prof.reliable, "profile {:?}", prof.samples);
    }

    #[test]
    fn check_linear_feasible_example_2() {
        let inst = builtin::example_2();
        let f = DualFunction::Linear(builtin::example_2_lambda());
        let rep = check_dual_feasibility(&f, &inst, 1e-8, 100).unwrap();
        assert_eq!(rep.verdict, FeasibilityVerdict::Feasible, "{rep:?}");
    }

    #[test]
    fn check_linear_outside_cone_is_infeasible() {
        let inst = builtin::example_2();
        // lam = -e1 e1' is not PSD: monotonicity fails on a K-direction
        let lam: Vec<f64> = builtin::example_2_lambda().iter().map(|v| -v).collect();
        let f = DualFunction::Linear(lam);
        let rep = check_dual_feasibility(&f, &inst, 1e-8, 100).unwrap();
        assert_eq!(rep.verdict, FeasibilityVerdict::Infeasible);
        assert!(rep
            .checks
            .iter()
            .any(|c| !c.ok && c.name.contains("K-monotonicity") && c.detail.contains("block")));
    }

    #[test]
    fn valuefn_self_dual_example_2() {
        let inst = builtin::example_2();
        let oracle = ValueFunctionOracle::new(inst.clone(), IntegerBox::symmetric(2, 5)).unwrap();
        let f = DualFunction::ValueFn(oracle);
        let rep = check_dual_feasibility(&f, &inst, 1e-6, 60).unwrap();
        assert_eq!(rep.verdict, FeasibilityVerdict::FeasibleUpToSampling, "{rep:?}");
        assert_eq!(evaluate(&f, &inst.b).unwrap(), 0.0);
    }

    #[test]
    fn binary_perturbation_rows_and_equivalence() {
        let inst = builtin::knapsack_binary();
        let pert = build_binary_perturbation(&inst, 0.5).unwrap();
        assert_eq!(pert.m(), inst.m() + 4);
        assert_eq!(pert.b[inst.m()], -0.5);
        assert_eq!(pert.b[inst.m() + 2], -1.5);
        assert!(pert.binary_mask.iter().all(|&b| !b));
        let b0 = solve_mip(&inst, &IntegerBox::symmetric(2, 1)).unwrap();
        let b1 = solve_mip(&pert, &IntegerBox::symmetric(2, 3)).unwrap();
        assert_eq!(b0.value, b1.value);
        assert!(build_binary_perturbation(&inst, 0.0).is_err());
        assert!(build_binary_perturbation(&builtin::example_1(), 0.5).is_err());
    }

    #[test]
    fn w_perturbation_example_2() {
        let inst = builtin::example_2();
        let v = svec(&Matrix::identity(3));
        let box_ = IntegerBox::symmetric(2, 5);
        let (pert, spec) = build_w_perturbation(&inst, &v, &box_).unwrap();
        assert_eq!(spec.m_coeff, 2.0);
        assert_eq!(pert.n1(), 3);
        // perturbed optimum equals the original optimum
        let mut lower = box_.lower.clone();
        let mut upper = box_.upper.clone();
        lower.push(0);
        upper.push(1);
        let res = solve_mip(&pert, &IntegerBox::new(lower, upper).unwrap()).unwrap();
        assert_eq!(res.status, MipStatus::Optimal);
        assert_eq!(res.value, 0.0);
    }

    #[test]
    fn w_perturbation_rejects_unbounded_direction() {
        // Example 1 with v = e_K: theta(b - v) is unbounded-suspected
        let inst = builtin::example_1();
        let v = vec![0.0, 0.0, 1.0];
        let box_ = IntegerBox::new(vec![-60, -10], vec![10, 0]).unwrap();
        assert!(build_w_perturbation(&inst, &v, &box_).is_err());
    }

    #[test]
    fn cut_from_linear_half() {
        let inst = builtin::two_x_le_3();
        let f = DualFunction::Linear(vec![0.5]);
        let cut = generate_cut(&f, &inst).unwrap();
        assert!((cut.pi[0] + 1.0).abs() < 1e-12);
        assert!((cut.pi0 + 1.5).abs() < 1e-12);
        assert!(verify_cut(&cut, &inst, &IntegerBox::symmetric(1, 10)).unwrap());
    }

    #[test]
    fn cut_from_value_function_is_integer_tight() {
        let inst = builtin::two_x_le_3();
        let oracle = ValueFunctionOracle::new(inst.clone(), IntegerBox::symmetric(1, 100)).unwrap();
        let f = DualFunction::ValueFn(oracle);
        let cut = generate_cut(&f, &inst).unwrap();
        assert!((cut.pi[0] + 1.0).abs() < 1e-12);
        assert!((cut.pi0 + 1.0).abs() < 1e-12);
        assert!(verify_cut(&cut, &inst, &IntegerBox::symmetric(1, 10)).unwrap());
    }

    #[test]
    fn zero_cut_is_valid() {
        let inst = builtin::two_x_le_3();
        let f = DualFunction::Linear(vec![0.0]);
        let cut = generate_cut(&f, &inst).unwrap();
        assert_eq!(cut.pi0, 0.0);
        assert!(verify_cut(&cut, &inst, &IntegerBox::symmetric(1, 10)).unwrap());
    }

    #[test]
    fn fabricated_cut_is_rejected() {
        let inst = builtin::two_x_le_3();
        // claim x <= 0, i.e. -x >= 0: violated by the feasible x = 1
        let cut = Inequality {
            pi: vec![-1.0],
            gamma: vec![],
            pi0: 0.0,
            bar_numeric: false,
        };
        assert!(!verify_cut(&cut, &inst, &IntegerBox::symmetric(1, 10)).unwrap());
    }

    #[test]
    fn fstar_example_2() {
        let inst = builtin::example_2();
        let v = svec(&Matrix::identity(3));
        let f = build_fstar(&inst, 0.5, &v, &IntegerBox::symmetric(2, 5)).unwrap();
        let fb = evaluate(&f, &inst.b).unwrap();
        assert!(fb.abs() <= 1e-6, "f*(b) = {fb}");
        assert_eq!(evaluate(&f, &vec![0.0; 6]).unwrap(), 0.0);
        // f*(A^1) matches c_1 = 0
        let fa1 = evaluate(&f, &inst.a.col(0)).unwrap();
        assert!(fa1.abs() <= 1e-6, "f*(A^1) = {fa1}");
    }

    #[test]
    fn restricted_monotone_chain() {
        let inst = builtin::example_2();
        let v = svec(&Matrix::identity(3));
        let lifted = build_w_lifted_valuefn(&inst, &v, &IntegerBox::symmetric(2, 5)).unwrap();
        let restricted = DualFunction::Restricted {
            base: Box::new(lifted),
        };
        let mut at_00 = inst.b.clone();
        at_00.extend_from_slice(&[0.0, 0.0]);
        let mut at_0m1 = inst.b.clone();
        at_0m1.extend_from_slice(&[0.0, -1.0]);
        let f_restricted = evaluate(&restricted, &inst.b).unwrap();
        let base = match &restricted {
            DualFunction::Restricted { base } => base,
            _ => unreachable!(),
        };
        let f00 = evaluate(base, &at_00).unwrap();
        let f0m1 = evaluate(base, &at_0m1).unwrap();
        assert_eq!(f_restricted, f00);
        assert!(f00 >= f0m1 - 1e-9, "f'(b,0,0)={f00} < f'(b,0,-1)={f0m1}");
    }
}
