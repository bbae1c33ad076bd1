//! Instance data model for conic mixed-integer programs and the CMIP text
//! format.
//!
//! An [`Instance`] holds the data of
//! `min c'x + d'y  s.t.  Ax + Gy >=_K b,  x in Z^{n1},  y in R^{n2}`
//! plus a per-integer-variable binary mask (binary bounds `0 <= x_j <= 1` are
//! implied, not materialized as rows) and optional exact-rational mirrors for
//! orthant blocks tagged `rational`.
//!
//! The CMIP format is UTF-8 JSON with top-level keys `vars`, `cones`, `rows`;
//! see the README for a worked example. PSD blocks are expressed directly in
//! svec coordinates (off-diagonal entries scaled by sqrt(2)).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cone::{ConeBlock, ConeProduct};
use crate::error::CoreError;
use crate::linalg::Matrix;

/// Exact rational entry `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, CoreError> {
        if den == 0 {
            return Err(CoreError::Validation("rational with zero denominator".into()));
        }
        Ok(Rational { num, den })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Exact-rational mirror of one row (all columns plus the right-hand side).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalRow {
    /// One entry per integer column, then one per continuous column.
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// The data of one conic mixed-integer program.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    /// m x n1 matrix on the integer variables.
    pub a: Matrix,
    /// m x n2 matrix on the continuous variables.
    pub g: Matrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub cone: ConeProduct,
    /// Per-integer-variable flag; true means bounds 0 <= x_j <= 1 are implied.
    pub binary_mask: Vec<bool>,
    /// Per-cone-block flag asserting exact rational rows (orthant blocks only).
    pub rational_blocks: Vec<bool>,
    /// Exact mirrors for rows inside rational-tagged blocks, indexed by row.
    pub rational_rows: Vec<Option<RationalRow>>,
    pub int_names: Vec<String>,
    pub cont_names: Vec<String>,
}

/// Assignment of a cone block to the nonlinear (S1) or side-constraint (S2)
/// part of a two-block split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    S1,
    S2,
}

/// A two-block view of a parent instance: every cone block belongs to exactly
/// one of S1 (cone K1) or S2 (cone K2).
#[derive(Clone, Debug)]
pub struct TwoBlockView<'a> {
    pub parent: &'a Instance,
    pub side: Vec<Side>,
}

impl Instance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: Matrix,
        g: Matrix,
        b: Vec<f64>,
        c: Vec<f64>,
        d: Vec<f64>,
        cone: ConeProduct,
        binary_mask: Vec<bool>,
    ) -> Result<Self, CoreError> {
        let n1 = c.len();
        let n2 = d.len();
        let int_names = (0..n1).map(|j| format!("x{}", j + 1)).collect();
        let cont_names = (0..n2).map(|j| format!("y{}", j + 1)).collect();
        let inst = Instance {
            a,
            g,
            b,
            c,
            d,
            rational_blocks: vec![false; cone.blocks().len()],
            rational_rows: vec![None; cone.total_dim()],
            cone,
            binary_mask,
            int_names,
            cont_names,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn n1(&self) -> usize {
        self.c.len()
    }

    pub fn n2(&self) -> usize {
        self.d.len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let (n1, n2, m) = (self.n1(), self.n2(), self.m());
        if n1 + n2 == 0 {
            return Err(CoreError::Validation("n1+n2 must be >= 1".into()));
        }
        if m == 0 {
            return Err(CoreError::Validation("instance must have at least one row".into()));
        }
        let checks = [
            ("A rows", self.a.nrows(), m),
            ("A cols", self.a.ncols(), n1),
            ("G rows", self.g.nrows(), m),
            ("G cols", self.g.ncols(), n2),
            ("cone dim", self.cone.total_dim(), m),
            ("binary mask", self.binary_mask.len(), n1),
            ("rational block tags", self.rational_blocks.len(), self.cone.blocks().len()),
            ("rational rows", self.rational_rows.len(), m),
            ("int names", self.int_names.len(), n1),
            ("cont names", self.cont_names.len(), n2),
        ];
        for (what, got, expected) in checks {
            if got != expected {
                return Err(CoreError::DimensionMismatch {
                    what: what.into(),
                    expected,
                    got,
                });
            }
        }
        for (tag, block) in self.rational_blocks.iter().zip(self.cone.blocks()) {
            if *tag && !matches!(block, ConeBlock::Orthant { .. }) {
                return Err(CoreError::Validation(
                    "rational tag on non-orthant block".into(),
                ));
            }
        }
        Ok(())
    }

    /// Drops all integrality: every variable becomes continuous, and binary
    /// bounds 0 <= x_j <= 1 are materialized as an appended orthant block.
    pub fn continuous_relaxation(&self) -> Instance {
        let (n1, n2, m) = (self.n1(), self.n2(), self.m());
        let n = n1 + n2;
        let binaries: Vec<usize> = (0..n1).filter(|&j| self.binary_mask[j]).collect();
        let extra = 2 * binaries.len();
        let mut g = Matrix::zeros(m + extra, n);
        for i in 0..m {
            for j in 0..n1 {
                g[(i, j)] = self.a[(i, j)];
            }
            for j in 0..n2 {
                g[(i, n1 + j)] = self.g[(i, j)];
            }
        }
        let mut b = self.b.clone();
        for (k, &j) in binaries.iter().enumerate() {
            g[(m + 2 * k, j)] = 1.0; //  x_j >= 0
            g[(m + 2 * k + 1, j)] = -1.0; // -x_j >= -1
            b.push(0.0);
            b.push(-1.0);
        }
        let mut cone = self.cone.clone();
        let mut rational_blocks = self.rational_blocks.clone();
        let mut rational_rows = self.rational_rows.clone();
        if extra > 0 {
            cone.push_block(ConeBlock::Orthant { dim: extra });
            rational_blocks.push(false);
            rational_rows.extend(std::iter::repeat(None).take(extra));
        }
        let mut d = self.c.clone();
        d.extend_from_slice(&self.d);
        let mut cont_names = self.int_names.clone();
        cont_names.extend_from_slice(&self.cont_names);
        Instance {
            a: Matrix::zeros(m + extra, 0),
            g,
            b,
            c: vec![],
            d,
            cone,
            binary_mask: vec![],
            rational_blocks,
            rational_rows,
            int_names: vec![],
            cont_names,
        }
    }

    /// Replaces the right-hand side by `h`, sharing all other data. Rational
    /// mirrors are kept only when `h` equals the current right-hand side
    /// bit-for-bit (otherwise the exactness claim would be false).
    pub fn perturb_rhs(&self, h: &[f64]) -> Result<Instance, CoreError> {
        if h.len() != self.m() {
            return Err(CoreError::DimensionMismatch {
                what: "perturbed rhs".into(),
                expected: self.m(),
                got: h.len(),
            });
        }
        let mut out = self.clone();
        if h != self.b.as_slice() {
            out.rational_blocks = vec![false; self.cone.blocks().len()];
            out.rational_rows = vec![None; self.m()];
        }
        out.b = h.to_vec();
        Ok(out)
    }

    /// Splits the cone blocks into an S1/S2 two-block view.
    pub fn split_blocks(&self, assignment: &[Side]) -> Result<TwoBlockView<'_>, CoreError> {
        if assignment.len() != self.cone.blocks().len() {
            return Err(CoreError::InvalidArgument(format!(
                "block assignment covers {} of {} cone blocks",
                assignment.len(),
                self.cone.blocks().len()
            )));
        }
        Ok(TwoBlockView {
            parent: self,
            side: assignment.to_vec(),
        })
    }
}

impl<'a> TwoBlockView<'a> {
    /// Row indices belonging to the given side, in parent order.
    pub fn rows_of(&self, side: Side) -> Vec<usize> {
        let mut out = Vec::new();
        for ((_, range), &s) in self.parent.cone.block_ranges().iter().zip(&self.side) {
            if s == side {
                out.extend(range.clone());
            }
        }
        out
    }

    pub fn cone_of(&self, side: Side) -> ConeProduct {
        let blocks: Vec<ConeBlock> = self
            .parent
            .cone
            .blocks()
            .iter()
            .zip(&self.side)
            .filter(|(_, &s)| s == side)
            .map(|(&b, _)| b)
            .collect();
        ConeProduct::new(blocks).expect("subset of a valid cone product")
    }

    /// Submatrices (A_i, G_i, b_i) of the given side.
    pub fn data_of(&self, side: Side) -> (Matrix, Matrix, Vec<f64>) {
        let rows = self.rows_of(side);
        let a = Matrix::from_fn(rows.len(), self.parent.n1(), |i, j| self.parent.a[(rows[i], j)]);
        let g = Matrix::from_fn(rows.len(), self.parent.n2(), |i, j| self.parent.g[(rows[i], j)]);
        let b = rows.iter().map(|&i| self.parent.b[i]).collect();
        (a, g, b)
    }

    /// True when every S2 block is a rational-tagged orthant and S2 is
    /// nonempty (the shape of a rational polyhedron).
    pub fn s2_all_rational_orthant(&self) -> bool {
        let mut any = false;
        for ((block, tag), &s) in self
            .parent
            .cone
            .blocks()
            .iter()
            .zip(&self.parent.rational_blocks)
            .zip(&self.side)
        {
            if s == Side::S2 {
                any = true;
                if !(matches!(block, ConeBlock::Orthant { .. }) && *tag) {
                    return false;
                }
            }
        }
        any
    }
}

// ---------------------------------------------------------------------------
// CMIP text format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CmipFile {
    vars: Vec<CmipVar>,
    cones: Vec<CmipCone>,
    rows: Vec<CmipRow>,
}

#[derive(Serialize, Deserialize)]
struct CmipVar {
    name: String,
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    objective: f64,
}

#[derive(Serialize, Deserialize)]
struct CmipCone {
    kind: String,
    dim: usize,
    #[serde(default, skip_serializing_if = "is_false")]
    rational: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Serialize, Deserialize)]
struct CmipRow {
    #[serde(default)]
    coeffs: BTreeMap<String, CoeffVal>,
    rhs: CoeffVal,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffVal {
    Num(f64),
    Rat([i64; 2]),
}

impl CoeffVal {
    fn value(&self) -> f64 {
        match self {
            CoeffVal::Num(v) => *v,
            CoeffVal::Rat([n, d]) => *n as f64 / *d as f64,
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        match self {
            CoeffVal::Num(v) if v.fract() == 0.0 && v.abs() < 9e15 => {
                Some(Rational { num: *v as i64, den: 1 })
            }
            CoeffVal::Num(_) => None,
            CoeffVal::Rat([n, d]) => Some(Rational { num: *n, den: *d }),
        }
    }
}

/// Parses a CMIP instance from text. Rational-tagged entries are kept exact.
pub fn parse_instance(text: &str) -> Result<Instance, CoreError> {
    let file: CmipFile = serde_json::from_str(text).map_err(|e| CoreError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build_instance(file)
}

fn build_instance(file: CmipFile) -> Result<Instance, CoreError> {
    if file.vars.is_empty() {
        return Err(CoreError::Validation("n1+n2 must be >= 1".into()));
    }
    let mut int_names = Vec::new();
    let mut cont_names = Vec::new();
    let mut c = Vec::new();
    let mut d = Vec::new();
    let mut binary_mask = Vec::new();
    // map var name -> (is_int, column within its group)
    let mut columns: BTreeMap<String, (bool, usize)> = BTreeMap::new();
    for v in &file.vars {
        if columns.contains_key(&v.name) {
            return Err(CoreError::Validation(format!("duplicate variable '{}'", v.name)));
        }
        match v.kind.as_str() {
            "int" | "bin" => {
                columns.insert(v.name.clone(), (true, int_names.len()));
                int_names.push(v.name.clone());
                c.push(v.objective);
                binary_mask.push(v.kind == "bin");
            }
            "cont" => {
                columns.insert(v.name.clone(), (false, cont_names.len()));
                cont_names.push(v.name.clone());
                d.push(v.objective);
            }
            other => {
                return Err(CoreError::Validation(format!(
                    "variable '{}' has unknown type '{}'",
                    v.name, other
                )))
            }
        }
    }
    let mut blocks = Vec::new();
    let mut rational_blocks = Vec::new();
    for cb in &file.cones {
        let block = match cb.kind.as_str() {
            "orthant" => ConeBlock::Orthant { dim: cb.dim },
            "soc" => ConeBlock::SecondOrder { dim: cb.dim },
            "psd" => ConeBlock::PsdTriangle { order: cb.dim },
            other => return Err(CoreError::Validation(format!("unknown cone kind '{other}'"))),
        };
        block.validate()?;
        if cb.rational && !matches!(block, ConeBlock::Orthant { .. }) {
            return Err(CoreError::Validation("rational tag on non-orthant block".into()));
        }
        blocks.push(block);
        rational_blocks.push(cb.rational);
    }
    let cone = ConeProduct::new(blocks)?;
    let m = cone.total_dim();
    if file.rows.len() != m {
        return Err(CoreError::DimensionMismatch {
            what: "rows".into(),
            expected: m,
            got: file.rows.len(),
        });
    }
    let (n1, n2) = (int_names.len(), cont_names.len());
    let mut a = Matrix::zeros(m, n1);
    let mut g = Matrix::zeros(m, n2);
    let mut b = vec![0.0; m];
    let mut rational_rows: Vec<Option<RationalRow>> = vec![None; m];
    // which rows live in rational blocks
    let mut row_rational = vec![false; m];
    for ((_, range), &tag) in cone.block_ranges().iter().zip(&rational_blocks) {
        if tag {
            for i in range.clone() {
                row_rational[i] = true;
            }
        }
    }
    for (i, row) in file.rows.iter().enumerate() {
        let mut rat_coeffs = vec![Rational { num: 0, den: 1 }; n1 + n2];
        let mut rat_ok = row_rational[i];
        for (name, val) in &row.coeffs {
            let &(is_int, col) = columns.get(name).ok_or_else(|| {
                CoreError::Validation(format!("row {} references unknown variable '{}'", i + 1, name))
            })?;
            if is_int {
                a[(i, col)] = val.value();
            } else {
                g[(i, col)] = val.value();
            }
            if rat_ok {
                match val.as_rational() {
                    Some(r) => rat_coeffs[if is_int { col } else { n1 + col }] = r,
                    None => rat_ok = false,
                }
            }
        }
        b[i] = row.rhs.value();
        if row_rational[i] {
            if !rat_ok {
                return Err(CoreError::Validation(format!(
                    "row {} is in a rational block but has a non-rational coefficient",
                    i + 1
                )));
            }
            match row.rhs.as_rational() {
                Some(r) => {
                    rational_rows[i] = Some(RationalRow {
                        coeffs: rat_coeffs,
                        rhs: r,
                    })
                }
                None => {
                    return Err(CoreError::Validation(format!(
                        "row {} is in a rational block but has a non-rational rhs",
                        i + 1
                    )))
                }
            }
        }
    }
    let inst = Instance {
        a,
        g,
        b,
        c,
        d,
        cone,
        binary_mask,
        rational_blocks,
        rational_rows,
        int_names,
        cont_names,
    };
    inst.validate()?;
    Ok(inst)
}

/// Serializes an instance back to CMIP text. Rational-tagged entries are
/// written as `[num, den]` pairs; floats round-trip via shortest
/// representation.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut vars = Vec::new();
    for (j, name) in inst.int_names.iter().enumerate() {
        vars.push(CmipVar {
            name: name.clone(),
            kind: if inst.binary_mask[j] { "bin" } else { "int" }.into(),
            objective: inst.c[j],
        });
    }
    for (j, name) in inst.cont_names.iter().enumerate() {
        vars.push(CmipVar {
            name: name.clone(),
            kind: "cont".into(),
            objective: inst.d[j],
        });
    }
    let cones = inst
        .cone
        .blocks()
        .iter()
        .zip(&inst.rational_blocks)
        .map(|(b, &rational)| {
            let (kind, dim) = match *b {
                ConeBlock::Orthant { dim } => ("orthant", dim),
                ConeBlock::SecondOrder { dim } => ("soc", dim),
                ConeBlock::PsdTriangle { order } => ("psd", order),
            };
            CmipCone {
                kind: kind.into(),
                dim,
                rational,
            }
        })
        .collect();
    let mut rows = Vec::new();
    for i in 0..inst.m() {
        let mut coeffs = BTreeMap::new();
        if let Some(rat) = &inst.rational_rows[i] {
            for (j, name) in inst.int_names.iter().enumerate() {
                let r = rat.coeffs[j];
                if r.num != 0 {
                    coeffs.insert(name.clone(), CoeffVal::Rat([r.num, r.den]));
                }
            }
            for (j, name) in inst.cont_names.iter().enumerate() {
                let r = rat.coeffs[inst.n1() + j];
                if r.num != 0 {
                    coeffs.insert(name.clone(), CoeffVal::Rat([r.num, r.den]));
                }
            }
            rows.push(CmipRow {
                coeffs,
                rhs: CoeffVal::Rat([rat.rhs.num, rat.rhs.den]),
            });
        } else {
            for (j, name) in inst.int_names.iter().enumerate() {
                if inst.a[(i, j)] != 0.0 {
                    coeffs.insert(name.clone(), CoeffVal::Num(inst.a[(i, j)]));
                }
            }
            for (j, name) in inst.cont_names.iter().enumerate() {
                if inst.g[(i, j)] != 0.0 {
                    coeffs.insert(name.clone(), CoeffVal::Num(inst.g[(i, j)]));
                }
            }
            rows.push(CmipRow {
                coeffs,
                rhs: CoeffVal::Num(inst.b[i]),
            });
        }
    }
    let file = CmipFile {
        vars,
        cones,
        rows,
    };
    serde_json::to_string_pretty(&file).expect("CMIP serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn parse_example1_file() {
        let text = r#"{
            "vars": [
                {"name": "x1", "type": "int", "objective": 0},
                {"name": "x2", "type": "int", "objective": 1}
            ],
            "cones": [{"kind": "soc", "dim": 3}],
            "rows": [
                {"coeffs": {"x1": 1}, "rhs": 0},
                {"coeffs": {"x2": 1}, "rhs": 0},
                {"coeffs": {"x1": 1}, "rhs": 0}
            ]
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.m(), 3);
        assert_eq!(inst.n1(), 2);
        assert_eq!(inst.n2(), 0);
        assert_eq!(inst, builtin::example_1());
    }

    #[test]
    fn parse_empty_vars_is_error() {
        let text = r#"{"vars": [], "cones": [{"kind": "orthant", "dim": 1}], "rows": [{"rhs": 0}]}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("n1+n2 must be >= 1"));
    }

    #[test]
    fn parse_psd3_has_triangle_dim() {
        let text = r#"{
            "vars": [{"name": "x1", "type": "int"}, {"name": "x2", "type": "int", "objective": 1}],
            "cones": [{"kind": "psd", "dim": 3}],
            "rows": [
                {"coeffs": {"x2": 1}, "rhs": -1},
                {"rhs": 0},
                {"coeffs": {"x1": 1}, "rhs": 0},
                {"rhs": 0},
                {"coeffs": {"x2": 1.4142135623730951}, "rhs": 0},
                {"rhs": 0}
            ]
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.m(), 6);
    }

    #[test]
    fn parse_rejects_rational_tag_on_soc() {
        let text = r#"{
            "vars": [{"name": "x", "type": "int"}],
            "cones": [{"kind": "soc", "dim": 3, "rational": true}],
            "rows": [{"rhs": 0}, {"rhs": 0}, {"coeffs": {"x": 1}, "rhs": 0}]
        }"#;
        assert!(parse_instance(text).is_err());
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse_instance("{ nope") {
            Err(CoreError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn relaxation_drops_mask() {
        let inst = builtin::example_1();
        let rel = inst.continuous_relaxation();
        assert_eq!(rel.n1(), 0);
        assert_eq!(rel.n2(), 2);
        assert_eq!(rel.m(), 3);
        assert_eq!(rel.cone, inst.cone);
    }

    #[test]
    fn relaxation_of_binary_instance_gains_bound_rows() {
        let inst = builtin::knapsack_binary();
        assert_eq!(inst.n1(), 2);
        let rel = inst.continuous_relaxation();
        assert_eq!(rel.m(), inst.m() + 4);
        // bound rows: x1 >= 0, -x1 >= -1, x2 >= 0, -x2 >= -1
        let m = inst.m();
        assert_eq!(rel.g[(m, 0)], 1.0);
        assert_eq!(rel.b[m], 0.0);
        assert_eq!(rel.g[(m + 1, 0)], -1.0);
        assert_eq!(rel.b[m + 1], -1.0);
    }

    #[test]
    fn relaxation_of_continuous_instance_is_identity_on_data() {
        let inst = builtin::sqrt2_soc();
        let rel = inst.continuous_relaxation();
        assert_eq!(rel.g, inst.g);
        assert_eq!(rel.b, inst.b);
        assert_eq!(rel.d, inst.d);
    }

    #[test]
    fn perturb_rhs_same_is_identity() {
        let inst = builtin::example_1();
        let p = inst.perturb_rhs(&inst.b.clone()).unwrap();
        assert_eq!(p, inst);
    }

    #[test]
    fn perturb_rhs_gives_eq13() {
        let inst = builtin::example_1();
        let p = inst.perturb_rhs(&[0.0, 0.0, -0.5]).unwrap();
        assert_eq!(p.b, vec![0.0, 0.0, -0.5]);
        assert_eq!(p.a, inst.a);
    }

    #[test]
    fn perturb_rhs_dimension_mismatch() {
        let inst = builtin::example_1();
        assert!(inst.perturb_rhs(&[0.0]).is_err());
    }

    #[test]
    fn split_blocks_roundtrip() {
        let inst = builtin::knapsack_binary();
        let nb = inst.cone.blocks().len();
        let view = inst.split_blocks(&vec![Side::S1; nb]).unwrap();
        assert!(view.rows_of(Side::S2).is_empty());
        let (a1, _, b1) = view.data_of(Side::S1);
        assert_eq!(a1, inst.a);
        assert_eq!(b1, inst.b);
        assert!(inst.split_blocks(&[]).is_err());
    }

    #[test]
    fn cmip_roundtrip_is_exact() {
        for inst in [
            builtin::example_1(),
            builtin::example_2(),
            builtin::knapsack_binary(),
            builtin::rational_box_mip(),
        ] {
            let text = serialize_instance(&inst);
            let back = parse_instance(&text).unwrap();
            assert_eq!(back, inst, "round trip failed for:\n{text}");
        }
    }
}
