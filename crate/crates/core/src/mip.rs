//! Desk-scale mixed-integer conic solving by exhaustive integer enumeration
//! over boxes, with continuous subproblems handled by the interior-point
//! solver. Provides the value function oracle and strict feasibility
//! searches.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::cone::ConeBlock;
use crate::error::CoreError;
use crate::ipm::{self, ConicProgram, SolveStatus};
use crate::linalg::{dot, Matrix};
use crate::model::{Instance, Side, TwoBlockView};

/// Hard cap on enumerated integer assignments for a user-supplied box.
pub const BOX_CAP: u128 = 1_000_000;

/// Feasibility slack accepted on enumerated witnesses.
pub const FEAS_TOL: f64 = 1e-9;

/// Strictness threshold for interior-point searches.
pub const STRICT_TOL: f64 = 1e-7;

/// Componentwise integer box for the integer variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerBox {
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl IntegerBox {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self, CoreError> {
        if lower.len() != upper.len() {
            return Err(CoreError::DimensionMismatch {
                what: "integer box".into(),
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(CoreError::InvalidArgument("box lower bound exceeds upper".into()));
        }
        Ok(IntegerBox { lower, upper })
    }

    /// Uniform box [-r, r]^n.
    pub fn symmetric(n: usize, r: i64) -> Self {
        IntegerBox {
            lower: vec![-r; n],
            upper: vec![r; n],
        }
    }

    /// Default enumeration box for an instance: [-20, 20] per integer
    /// variable, clamped to [0, 1] for binary variables.
    pub fn default_for(inst: &Instance) -> Self {
        IntegerBox::symmetric(inst.n1(), 20).clamp_binary(inst)
    }

    /// Clamps binary variables to [0, 1].
    pub fn clamp_binary(mut self, inst: &Instance) -> Self {
        for (j, &bin) in inst.binary_mask.iter().enumerate() {
            if bin {
                self.lower[j] = self.lower[j].max(0);
                self.upper[j] = self.upper[j].min(1);
            }
        }
        self
    }

    pub fn cardinality(&self) -> u128 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| (u - l + 1) as u128)
            .product()
    }

    fn expand(&self, factor: i64) -> IntegerBox {
        IntegerBox {
            lower: self.lower.iter().map(|&l| l * factor).collect(),
            upper: self.upper.iter().map(|&u| u * factor).collect(),
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| l <= v && v <= u)
    }

    fn touches_boundary(&self, x: &[i64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .any(|(v, (l, u))| (v == l || v == u) && l < u)
    }

    /// Lexicographic iteration over all integer assignments.
    pub fn iter(&self) -> BoxIter<'_> {
        BoxIter {
            box_: self,
            current: self.lower.clone(),
            done: self.lower.is_empty() && false,
            started: false,
        }
    }
}

pub struct BoxIter<'a> {
    box_: &'a IntegerBox,
    current: Vec<i64>,
    done: bool,
    started: bool,
}

impl<'a> Iterator for BoxIter<'a> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.box_.lower.is_empty() {
                self.done = true;
                return Some(vec![]);
            }
            return Some(self.current.clone());
        }
        // odometer increment, last coordinate fastest
        let n = self.current.len();
        if n == 0 {
            return None;
        }
        let mut k = n;
        loop {
            if k == 0 {
                self.done = true;
                return None;
            }
            k -= 1;
            if self.current[k] < self.box_.upper[k] {
                self.current[k] += 1;
                for j in k + 1..n {
                    self.current[j] = self.box_.lower[j];
                }
                return Some(self.current.clone());
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MipStatus {
    Optimal,
    Infeasible,
    UnboundedSuspected,
    BoxLimited,
}

/// One feasible point with its objective, used as unboundedness evidence.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EvidencePoint {
    pub x: Vec<i64>,
    pub y: Vec<f64>,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct MipResult {
    pub status: MipStatus,
    /// Optimal value on the box; +inf when infeasible, -inf when unbounded
    /// is suspected.
    pub value: f64,
    pub witness: Option<(Vec<i64>, Vec<f64>)>,
    /// Feasible points with strictly decreasing objectives (unbounded case).
    pub evidence: Vec<EvidencePoint>,
}

/// Value decrease across the expansion schedule that upgrades a boundary
/// optimum to UnboundedSuspected.
const UNBOUNDED_DECREASE: f64 = 10.0;
const MAX_EXPANSIONS: usize = 6;

struct SubproblemOutcome {
    /// (value over continuous part, y) or None when infeasible.
    best: Option<(f64, Vec<f64>)>,
    unbounded_ray: Option<Vec<f64>>,
    ill_posed: bool,
}

/// Solves the continuous subproblem min d.y s.t. G y >=_K b - A x.
fn solve_subproblem(inst: &Instance, x: &[i64]) -> SubproblemOutcome {
    let xr: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    let ax = inst.a.matvec(&xr);
    let rhs: Vec<f64> = inst.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    if inst.n2() == 0 {
        let margin = inst.cone.margin(&rhs.iter().map(|v| -v).collect::<Vec<f64>>()).unwrap();
        // feasible iff Ax - b in K, i.e. -(rhs) in K
        if margin >= -FEAS_TOL {
            return SubproblemOutcome {
                best: Some((0.0, vec![])),
                unbounded_ray: None,
                ill_posed: false,
            };
        }
        return SubproblemOutcome {
            best: None,
            unbounded_ray: None,
            ill_posed: false,
        };
    }
    let prog = ConicProgram {
        objective: inst.d.clone(),
        rows: inst.g.clone(),
        rhs,
        cone: inst.cone.clone(),
    };
    let res = ipm::solve(&prog);
    match res.status {
        SolveStatus::Optimal => SubproblemOutcome {
            best: Some((res.objective, res.primal.unwrap())),
            unbounded_ray: None,
            ill_posed: false,
        },
        SolveStatus::PrimalInfeasible => SubproblemOutcome {
            best: None,
            unbounded_ray: None,
            ill_posed: false,
        },
        SolveStatus::DualInfeasible => {
            let ray = match res.certificate {
                Some(ipm::Certificate::ImprovingRay(r)) => Some(r),
                _ => None,
            };
            SubproblemOutcome {
                best: None,
                unbounded_ray: ray,
                ill_posed: false,
            }
        }
        SolveStatus::IllPosed => SubproblemOutcome {
            best: None,
            unbounded_ray: None,
            ill_posed: true,
        },
    }
}

struct BoxScan {
    best: Option<(f64, Vec<i64>, Vec<f64>)>,
    any_feasible: bool,
    unbounded: Option<(Vec<i64>, Vec<f64>)>,
    ill_posed: bool,
    /// Some optimal-value point touches the box boundary (the optimum may
    /// continue improving outside the box even when the chosen witness is
    /// interior).
    boundary_tied: bool,
}

fn scan_box(inst: &Instance, box_: &IntegerBox) -> BoxScan {
    let mut scan = BoxScan {
        best: None,
        any_feasible: false,
        unbounded: None,
        ill_posed: false,
        boundary_tied: false,
    };
    let mut ties: Vec<Vec<i64>> = Vec::new();
    for x in box_.iter() {
        let out = solve_subproblem(inst, &x);
        if out.ill_posed {
            scan.ill_posed = true;
        }
        if let Some(ray) = out.unbounded_ray {
            scan.unbounded = Some((x.clone(), ray));
            scan.any_feasible = true;
            return scan;
        }
        if let Some((yval, y)) = out.best {
            scan.any_feasible = true;
            let cx: f64 = x.iter().zip(&inst.c).map(|(&xi, ci)| xi as f64 * ci).sum();
            let total = cx + yval;
            match &scan.best {
                Some((bv, _, _)) if total < bv - 1e-9 => {
                    ties.clear();
                    ties.push(x.clone());
                    scan.best = Some((total, x.clone(), y));
                }
                Some((bv, bx, _)) if (total - bv).abs() <= 1e-9 => {
                    ties.push(x.clone());
                    if x < *bx {
                        scan.best = Some((total, x.clone(), y));
                    }
                }
                Some(_) => {}
                None => {
                    ties.push(x.clone());
                    scan.best = Some((total, x.clone(), y));
                }
            }
        }
    }
    // binary coordinates are exhausted by the clamped box; touching their
    // bounds says nothing about behavior outside
    scan.boundary_tied = ties.iter().any(|x| {
        x.iter().enumerate().any(|(j, v)| {
            !inst.binary_mask[j]
                && (*v == box_.lower[j] || *v == box_.upper[j])
                && box_.lower[j] < box_.upper[j]
        })
    });
    scan
}

/// Builds decreasing-objective evidence from an improving ray of the
/// continuous subproblem at `x`.
fn ray_evidence(inst: &Instance, x: &[i64], y0: &[f64], ray: &[f64]) -> Vec<EvidencePoint> {
    let cx: f64 = x.iter().zip(&inst.c).map(|(&xi, ci)| xi as f64 * ci).sum();
    let mut out = Vec::new();
    let mut t = 1.0;
    for _ in 0..5 {
        let y: Vec<f64> = y0.iter().zip(ray).map(|(a, r)| a + t * r).collect();
        let obj = cx + dot(&inst.d, &y);
        out.push(EvidencePoint {
            x: x.to_vec(),
            y,
            objective: obj,
        });
        t *= 10.0;
    }
    out
}

/// Exhaustive enumeration over the box, with an internal expansion schedule
/// to distinguish boundary optima from suspected unboundedness.
pub fn solve_mip(inst: &Instance, box_: &IntegerBox) -> Result<MipResult, CoreError> {
    solve_mip_impl(inst, box_, false)
}

/// Like [`solve_mip`] but always runs the expansion schedule, even when the
/// box minimizer is interior. Used by unboundedness witness searches, where
/// an interior minimum on the small box says nothing about the full problem.
pub fn solve_mip_expanding(inst: &Instance, box_: &IntegerBox) -> Result<MipResult, CoreError> {
    solve_mip_impl(inst, box_, true)
}

fn solve_mip_impl(
    inst: &Instance,
    box_: &IntegerBox,
    force_expansion: bool,
) -> Result<MipResult, CoreError> {
    if box_.lower.len() != inst.n1() {
        return Err(CoreError::DimensionMismatch {
            what: "integer box".into(),
            expected: inst.n1(),
            got: box_.lower.len(),
        });
    }
    let box_ = box_.clone().clamp_binary(inst);
    let card = box_.cardinality();
    if card > BOX_CAP {
        return Err(CoreError::BoxTooLarge {
            assignments: card,
            cap: BOX_CAP,
        });
    }
    let scan = scan_box(inst, &box_);
    if let Some((x, ray)) = scan.unbounded {
        let y0 = solve_feasible_y(inst, &x).unwrap_or_else(|| vec![0.0; inst.n2()]);
        return Ok(MipResult {
            status: MipStatus::UnboundedSuspected,
            value: f64::NEG_INFINITY,
            witness: None,
            evidence: ray_evidence(inst, &x, &y0, &ray),
        });
    }
    if !scan.any_feasible {
        return Ok(MipResult {
            status: MipStatus::Infeasible,
            value: f64::INFINITY,
            witness: None,
            evidence: vec![],
        });
    }
    let (value, xbest, ybest) = scan.best.clone().unwrap();
    if !scan.boundary_tied && !force_expansion {
        let status = if scan.ill_posed {
            MipStatus::BoxLimited
        } else {
            MipStatus::Optimal
        };
        return Ok(MipResult {
            status,
            value,
            witness: Some((xbest, ybest)),
            evidence: vec![],
        });
    }
    // an optimal-value point touches the boundary: expand to tell a
    // genuinely box-limited optimum from suspected unboundedness
    let mut levels: Vec<EvidencePoint> = vec![EvidencePoint {
        x: xbest.clone(),
        y: ybest.clone(),
        objective: value,
    }];
    let mut scan_values = vec![value];
    let mut current = box_.clone();
    // IPM-backed subproblems make large expansion scans expensive
    let scan_cap: u128 = if inst.n2() > 0 { 30_000 } else { BOX_CAP };
    for _ in 0..MAX_EXPANSIONS {
        let bigger = current.expand(2).clamp_binary(inst);
        if bigger.cardinality() > scan_cap || bigger == current {
            break;
        }
        current = bigger;
        let scan = scan_box(inst, &current);
        if let Some((x, ray)) = scan.unbounded {
            let y0 = solve_feasible_y(inst, &x).unwrap_or_else(|| vec![0.0; inst.n2()]);
            return Ok(MipResult {
                status: MipStatus::UnboundedSuspected,
                value: f64::NEG_INFINITY,
                witness: None,
                evidence: ray_evidence(inst, &x, &y0, &ray),
            });
        }
        if let Some((v, x, y)) = scan.best {
            scan_values.push(v);
            if v < levels.last().unwrap().objective - 1e-9 {
                levels.push(EvidencePoint {
                    x,
                    y,
                    objective: v,
                });
            }
        }
        let total_drop = levels.first().unwrap().objective - levels.last().unwrap().objective;
        if total_drop >= UNBOUNDED_DECREASE {
            return Ok(MipResult {
                status: MipStatus::UnboundedSuspected,
                value: f64::NEG_INFINITY,
                witness: None,
                evidence: levels,
            });
        }
    }
    let stabilized = scan_values.len() >= 2 && {
        let last = scan_values[scan_values.len() - 1];
        let prev = scan_values[scan_values.len() - 2];
        (last - prev).abs() <= 1e-9
    };
    let status = if stabilized
        && (scan_values.last().unwrap() - value).abs() <= 1e-9
        && !scan.ill_posed
    {
        MipStatus::Optimal
    } else {
        MipStatus::BoxLimited
    };
    Ok(MipResult {
        status,
        value,
        witness: Some((xbest, ybest)),
        evidence: vec![],
    })
}

/// Any feasible y for fixed x (max-margin), used to anchor ray evidence.
fn solve_feasible_y(inst: &Instance, x: &[i64]) -> Option<Vec<f64>> {
    if inst.n2() == 0 {
        return Some(vec![]);
    }
    let xr: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    let ax = inst.a.matvec(&xr);
    let rhs: Vec<f64> = inst.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    strict_subproblem(&inst.g, &rhs, &inst.cone, None).map(|(y, _)| y)
}

/// Maximizes t s.t. G y - t e_K >= rhs (t capped at 1); returns (y, t).
/// With `partial` set, strictness is required only on the given rows; the
/// complement must merely stay feasible.
fn strict_subproblem(
    g: &Matrix,
    rhs: &[f64],
    cone: &crate::cone::ConeProduct,
    partial: Option<&[bool]>,
) -> Option<(Vec<f64>, f64)> {
    let m = rhs.len();
    let n2 = g.ncols();
    let e = cone.interior_direction();
    let strict_row = |i: usize| partial.map_or(true, |mask| mask[i]);
    let mut rows = Matrix::zeros(m + 1, n2 + 1);
    let mut rhs2 = vec![0.0; m + 1];
    for i in 0..m {
        for j in 0..n2 {
            rows[(i, j)] = g[(i, j)];
        }
        if strict_row(i) {
            rows[(i, n2)] = -e[i];
        }
        rhs2[i] = rhs[i];
    }
    rows[(m, n2)] = -1.0; // t <= 1
    rhs2[m] = -1.0;
    let mut objective = vec![0.0; n2 + 1];
    objective[n2] = -1.0;
    let mut cone2 = cone.clone();
    cone2.push_block(ConeBlock::Orthant { dim: 1 });
    let prog = ConicProgram {
        objective,
        rows,
        rhs: rhs2,
        cone: cone2,
    };
    let res = ipm::solve(&prog);
    if res.status != SolveStatus::Optimal {
        return None;
    }
    let sol = res.primal?;
    let t = sol[n2];
    Some((sol[..n2].to_vec(), t))
}

/// Searches the box for a mixed-integer point satisfying the conic rows
/// strictly; returns the first (x, y, margin) with margin > STRICT_TOL.
pub fn find_strict_mixed_point(
    inst: &Instance,
    box_: &IntegerBox,
) -> Result<Option<(Vec<i64>, Vec<f64>, f64)>, CoreError> {
    let box_ = box_.clone().clamp_binary(inst);
    let card = box_.cardinality();
    if card > BOX_CAP {
        return Err(CoreError::BoxTooLarge {
            assignments: card,
            cap: BOX_CAP,
        });
    }
    for x in box_.iter() {
        let xr: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let ax = inst.a.matvec(&xr);
        let rhs: Vec<f64> = inst.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        if inst.n2() == 0 {
            let slack: Vec<f64> = rhs.iter().map(|v| -v).collect();
            let margin = inst.cone.margin(&slack)?;
            if margin > STRICT_TOL {
                return Ok(Some((x, vec![], margin)));
            }
        } else if let Some((y, t)) = strict_subproblem(&inst.g, &rhs, &inst.cone, None) {
            if t > STRICT_TOL {
                return Ok(Some((x, y, t)));
            }
        }
    }
    Ok(None)
}

/// Like [`find_strict_mixed_point`] but requiring strict margin only on S1
/// rows of the view and plain feasibility on S2 rows.
pub fn find_strict_partial(
    view: &TwoBlockView<'_>,
    box_: &IntegerBox,
) -> Result<Option<(Vec<i64>, Vec<f64>)>, CoreError> {
    let inst = view.parent;
    let box_ = box_.clone().clamp_binary(inst);
    let card = box_.cardinality();
    if card > BOX_CAP {
        return Err(CoreError::BoxTooLarge {
            assignments: card,
            cap: BOX_CAP,
        });
    }
    let mut strict_mask = vec![false; inst.m()];
    for i in view.rows_of(Side::S1) {
        strict_mask[i] = true;
    }
    // with no S1 rows every mask entry is false and the search degenerates to
    // plain feasibility; with empty S2 it equals find_strict_mixed_point
    for x in box_.iter() {
        let xr: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let ax = inst.a.matvec(&xr);
        let rhs: Vec<f64> = inst.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        if inst.n2() == 0 {
            let slack: Vec<f64> = rhs.iter().map(|v| -v).collect();
            let mut ok = true;
            let mut strict_margin = f64::INFINITY;
            for (block, r) in inst.cone.block_ranges() {
                let bm = block.margin(&slack[r.clone()]);
                let is_strict = strict_mask[r.start];
                if is_strict {
                    strict_margin = strict_margin.min(bm);
                } else if bm < -FEAS_TOL {
                    ok = false;
                    break;
                }
            }
            if ok && strict_margin > STRICT_TOL {
                return Ok(Some((x, vec![])));
            }
        } else if let Some((y, t)) = strict_subproblem(&inst.g, &rhs, &inst.cone, Some(&strict_mask)) {
            if t > STRICT_TOL {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// Memoizing value-function oracle for an instance over a fixed box.
pub struct ValueFunctionOracle {
    inst: Instance,
    box_: IntegerBox,
    cache: Mutex<HashMap<Vec<i128>, f64>>,
}

impl std::fmt::Debug for ValueFunctionOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ValueFunctionOracle(m={}, n1={}, n2={})",
            self.inst.m(),
            self.inst.n1(),
            self.inst.n2()
        )
    }
}

/// RHS quantization step for the oracle cache.
const CACHE_QUANTUM: f64 = 1e-12;

impl ValueFunctionOracle {
    pub fn new(inst: Instance, box_: IntegerBox) -> Result<Self, CoreError> {
        if box_.lower.len() != inst.n1() {
            return Err(CoreError::DimensionMismatch {
                what: "oracle box".into(),
                expected: inst.n1(),
                got: box_.lower.len(),
            });
        }
        Ok(ValueFunctionOracle {
            inst,
            box_,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn domain_dim(&self) -> usize {
        self.inst.m()
    }

    pub fn integer_box(&self) -> &IntegerBox {
        &self.box_
    }

    /// The value function at right-hand side h, restricted to the oracle box:
    /// +inf for infeasible, -inf when unboundedness is suspected.
    pub fn value(&self, h: &[f64]) -> Result<f64, CoreError> {
        if h.len() != self.inst.m() {
            return Err(CoreError::DimensionMismatch {
                what: "value function argument".into(),
                expected: self.inst.m(),
                got: h.len(),
            });
        }
        let key: Vec<i128> = h.iter().map(|&v| (v / CACHE_QUANTUM).round() as i128).collect();
        if let Some(&v) = self.cache.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let perturbed = self.inst.perturb_rhs(h)?;
        let res = solve_mip(&perturbed, &self.box_)?;
        let v = res.value;
        self.cache.lock().unwrap().insert(key, v);
        Ok(v)
    }
}

pub fn value_function(oracle: &ValueFunctionOracle, h: &[f64]) -> Result<f64, CoreError> {
    oracle.value(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn example_1_optimal_zero() {
        let inst = builtin::example_1();
        let res = solve_mip(&inst, &IntegerBox::symmetric(2, 10)).unwrap();
        assert_eq!(res.status, MipStatus::Optimal);
        assert_eq!(res.value, 0.0);
        let (x, _) = res.witness.unwrap();
        assert_eq!(x[1], 0);
    }

    #[test]
    fn example_1_perturbed_unbounded() {
        let inst = builtin::example_1();
        let eq13 = inst.perturb_rhs(&[0.0, 0.0, -0.5]).unwrap();
        let box_ = IntegerBox::new(vec![-60, -10], vec![10, 0]).unwrap();
        let res = solve_mip(&eq13, &box_).unwrap();
        assert_eq!(res.status, MipStatus::UnboundedSuspected);
        assert!(res.evidence.len() >= 2);
        for w in res.evidence.windows(2) {
            assert!(w[1].objective < w[0].objective);
        }
    }

    #[test]
    fn example_2_optimal_zero() {
        let inst = builtin::example_2();
        let res = solve_mip(&inst, &IntegerBox::symmetric(2, 5)).unwrap();
        assert_eq!(res.status, MipStatus::Optimal);
        assert_eq!(res.value, 0.0);
        let (x, _) = res.witness.unwrap();
        assert_eq!(x, vec![0, 0]);
    }

    #[test]
    fn ceil_value_function() {
        let oracle =
            ValueFunctionOracle::new(builtin::ceil_instance(), IntegerBox::symmetric(1, 100))
                .unwrap();
        assert_eq!(oracle.value(&[2.3]).unwrap(), 3.0);
        assert_eq!(oracle.value(&[-4.0]).unwrap(), -4.0);
        // cached path returns the same
        assert_eq!(oracle.value(&[2.3]).unwrap(), 3.0);
    }

    #[test]
    fn example_2_value_at_b_minus_identity() {
        let inst = builtin::example_2();
        let v = crate::cone::svec(&crate::linalg::Matrix::identity(3));
        let h: Vec<f64> = inst.b.iter().zip(&v).map(|(b, vi)| b - vi).collect();
        let oracle = ValueFunctionOracle::new(inst, IntegerBox::symmetric(2, 5)).unwrap();
        assert_eq!(oracle.value(&h).unwrap(), -2.0);
    }

    #[test]
    fn strict_point_absent_in_examples() {
        let inst = builtin::example_1();
        assert!(find_strict_mixed_point(&inst, &IntegerBox::symmetric(2, 10))
            .unwrap()
            .is_none());
        let inst = builtin::example_2();
        assert!(find_strict_mixed_point(&inst, &IntegerBox::symmetric(2, 5))
            .unwrap()
            .is_none());
    }

    #[test]
    fn strict_point_found_on_halfline() {
        let inst = builtin::strict_halfline_1d();
        let got = find_strict_mixed_point(&inst, &IntegerBox::symmetric(1, 3))
            .unwrap()
            .expect("interior integer exists");
        assert_eq!(got.0, vec![0]);
        assert!((got.2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn box_cap_is_explicit_error() {
        let inst = builtin::example_1();
        let err = solve_mip(&inst, &IntegerBox::symmetric(2, 2000)).unwrap_err();
        assert!(matches!(err, CoreError::BoxTooLarge { .. }));
    }

    #[test]
    fn infeasible_instance_reports_infinity() {
        // x >= 1/2 and -x >= -1/4 has no integer (or real) solution
        let cone = crate::cone::ConeProduct::new(vec![ConeBlock::Orthant { dim: 2 }]).unwrap();
        let inst = Instance::new(
            Matrix::from_rows(&[vec![1.0], vec![-1.0]]),
            Matrix::zeros(2, 0),
            vec![0.5, -0.25],
            vec![1.0],
            vec![],
            cone,
            vec![false],
        )
        .unwrap();
        let res = solve_mip(&inst, &IntegerBox::symmetric(1, 5)).unwrap();
        assert_eq!(res.status, MipStatus::Infeasible);
        assert_eq!(res.value, f64::INFINITY);
    }
}
