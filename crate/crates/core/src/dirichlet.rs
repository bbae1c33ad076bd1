//! Computational lattice geometry: mixed lattices, Diophantine half-line
//! approximation, Dirichlet convex set probing, recession-cone condition
//! checks, affine invariance and the finiteness-property experiment.
//!
//! Searches enumerate lattice coefficient vectors in growing infinity-norm
//! shells and never claim nonexistence; a "counterexample" verdict requires
//! an exact emptiness certificate, currently implemented for rays whose
//! direction forces the trivial integer solution (irrational slope entered
//! at float precision, analyzed exactly through the float's rational value).

use serde::Serialize;

use crate::cone::{ConeBlock, ConeProduct};
use crate::error::CoreError;
use crate::ipm::{self, ConicProgram, SolveStatus};
use crate::linalg::{cholesky, dot, norm2, Matrix, PivotedQr};

/// A mixed lattice {A u + B y : u integer, y real} with the lattice part
/// orthogonal to the continuous span.
#[derive(Clone, Debug)]
pub struct MixedLattice {
    a: Matrix,
    b: Matrix,
}

impl MixedLattice {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self, CoreError> {
        if b.ncols() > 0 && a.nrows() != b.nrows() {
            return Err(CoreError::DimensionMismatch {
                what: "mixed lattice generators".into(),
                expected: a.nrows(),
                got: b.nrows(),
            });
        }
        if a.ncols() > 0 {
            let qr = PivotedQr::new(&a, 1e-10);
            if qr.rank() < a.ncols() {
                return Err(CoreError::Validation(
                    "lattice generators must be linearly independent".into(),
                ));
            }
        }
        // lattice part must lie in the orthogonal complement of span(B)
        for i in 0..a.ncols() {
            for j in 0..b.ncols() {
                if dot(&a.col(i), &b.col(j)).abs() > 1e-9 {
                    return Err(CoreError::Validation(
                        "lattice part is not orthogonal to the continuous span".into(),
                    ));
                }
            }
        }
        Ok(MixedLattice { a, b })
    }

    /// The standard integer lattice Z^n.
    pub fn standard(n: usize) -> Self {
        MixedLattice {
            a: Matrix::identity(n),
            b: Matrix::zeros(n, 0),
        }
    }

    /// Pure continuous subspace spanned by the given columns.
    pub fn continuous(b: Matrix) -> Self {
        let n = b.nrows();
        MixedLattice {
            a: Matrix::zeros(n, 0),
            b,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows().max(self.b.nrows())
    }

    pub fn lattice_rank(&self) -> usize {
        self.a.ncols()
    }

    pub fn continuous_rank(&self) -> usize {
        self.b.ncols()
    }

    pub fn generators(&self) -> (&Matrix, &Matrix) {
        (&self.a, &self.b)
    }

    pub fn is_standard(&self) -> bool {
        self.b.ncols() == 0 && self.a == Matrix::identity(self.a.nrows())
    }

    pub fn point(&self, u: &[i64], y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (j, &uj) in u.iter().enumerate() {
            for i in 0..n {
                out[i] += self.a[(i, j)] * uj as f64;
            }
        }
        for (j, &yj) in y.iter().enumerate() {
            for i in 0..n {
                out[i] += self.b[(i, j)] * yj;
            }
        }
        out
    }

    /// Writes z as A u + B y with integer u; None when z is not on the
    /// lattice (residual above 1e-9 or non-integer coefficients).
    pub fn decompose(&self, z: &[f64]) -> Option<(Vec<i64>, Vec<f64>)> {
        let n = self.dim();
        if z.len() != n {
            return None;
        }
        let k = self.a.ncols();
        let l = self.b.ncols();
        let joint = Matrix::from_fn(n, k + l, |i, j| {
            if j < k {
                self.a[(i, j)]
            } else {
                self.b[(i, j - k)]
            }
        });
        let qr = PivotedQr::new(&joint, 1e-12);
        let coeff = qr.lstsq(z);
        let recon = joint.matvec(&coeff);
        let resid = norm2(&z.iter().zip(&recon).map(|(a, b)| a - b).collect::<Vec<f64>>());
        if resid > 1e-9 {
            return None;
        }
        let mut u = Vec::with_capacity(k);
        for &c in &coeff[..k] {
            let r = c.round();
            if (c - r).abs() > 1e-9 {
                return None;
            }
            u.push(r as i64);
        }
        Some((u, coeff[k..].to_vec()))
    }

    /// True when r lies in the affine hull span(A) + span(B).
    pub fn in_affine_hull(&self, r: &[f64]) -> bool {
        let n = self.dim();
        let k = self.a.ncols();
        let l = self.b.ncols();
        if k + l == 0 {
            return norm2(r) <= 1e-7;
        }
        let joint = Matrix::from_fn(n, k + l, |i, j| {
            if j < k {
                self.a[(i, j)]
            } else {
                self.b[(i, j - k)]
            }
        });
        let qr = PivotedQr::new(&joint, 1e-12);
        let coeff = qr.lstsq(r);
        let recon = joint.matvec(&coeff);
        norm2(&r.iter().zip(&recon).map(|(a, b)| a - b).collect::<Vec<f64>>()) <= 1e-7
    }
}

/// Infinity-norm shell iterator over Z^k: shell s lists all u with
/// ||u||_inf = s in lexicographic order. Deterministic search order for the
/// half-line witnesses.
pub struct ShellIter {
    k: usize,
    bound: i64,
    shell: i64,
    inner: Vec<i64>,
    exhausted: bool,
}

impl ShellIter {
    pub fn new(k: usize, bound: i64) -> Self {
        ShellIter {
            k,
            bound,
            shell: 0,
            inner: vec![],
            exhausted: false,
        }
    }

    fn advance_inner(&mut self) -> bool {
        // lexicographic odometer over [-shell, shell]^k, skipping interior
        loop {
            let n = self.inner.len();
            let mut i = n;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if self.inner[i] < self.shell {
                    self.inner[i] += 1;
                    for j in i + 1..n {
                        self.inner[j] = -self.shell;
                    }
                    break;
                }
            }
            if self.inner.iter().any(|v| v.abs() == self.shell) {
                return true;
            }
        }
    }
}

impl Iterator for ShellIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.exhausted {
            return None;
        }
        if self.k == 0 {
            self.exhausted = true;
            return Some(vec![]);
        }
        if self.inner.is_empty() {
            self.inner = vec![0; self.k];
            return Some(self.inner.clone());
        }
        loop {
            if self.advance_inner() {
                return Some(self.inner.clone());
            }
            self.shell += 1;
            if self.shell > self.bound {
                self.exhausted = true;
                return None;
            }
            self.inner = vec![-self.shell; self.k];
            return Some(self.inner.clone());
        }
    }
}

/// One Dirichlet query: approximate the half-line {z + t r : t >= gamma}
/// within distance eps by a lattice point.
#[derive(Clone, Debug, Serialize)]
pub struct HalfLineQuery {
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    pub eps: f64,
    pub gamma: f64,
}

impl HalfLineQuery {
    pub fn new(z: Vec<f64>, r: Vec<f64>, eps: f64, gamma: f64) -> Result<Self, CoreError> {
        if eps <= 0.0 {
            return Err(CoreError::InvalidArgument("eps must be positive".into()));
        }
        if gamma < 0.0 {
            return Err(CoreError::InvalidArgument("gamma must be nonnegative".into()));
        }
        Ok(HalfLineQuery { z, r, eps, gamma })
    }
}

/// Distance from w to the half-line {z + t r : t >= gamma}, with the exact
/// clamped-projection formula.
pub fn halfline_distance(w: &[f64], z: &[f64], r: &[f64], gamma: f64) -> f64 {
    let rn = dot(r, r);
    let diff: Vec<f64> = w.iter().zip(z).map(|(a, b)| a - b).collect();
    let t = if rn > 0.0 {
        (dot(&diff, r) / rn).max(gamma)
    } else {
        gamma
    };
    norm2(&diff.iter().zip(r).map(|(d, ri)| d - t * ri).collect::<Vec<f64>>())
}

/// Minimizes the distance from p + B y to the half-line over y and t >= gamma
/// jointly; returns (y, distance).
fn best_continuous_shift(
    bmat: &Matrix,
    p: &[f64],
    z: &[f64],
    r: &[f64],
    gamma: f64,
) -> (Vec<f64>, f64) {
    let l = bmat.ncols();
    let n = p.len();
    if l == 0 {
        return (vec![], halfline_distance(p, z, r, gamma));
    }
    // unconstrained joint least squares over (y, t): ||B y - t r - (z - p)||
    let joint = Matrix::from_fn(n, l + 1, |i, j| if j < l { bmat[(i, j)] } else { -r[i] });
    let target: Vec<f64> = z.iter().zip(p).map(|(a, b)| a - b).collect();
    let qr = PivotedQr::new(&joint, 1e-12);
    let coeff = qr.lstsq(&target);
    let t_unc = coeff[l];
    if t_unc >= gamma {
        let y = coeff[..l].to_vec();
        let w = {
            let by = bmat.matvec(&y);
            p.iter().zip(&by).map(|(a, b)| a + b).collect::<Vec<f64>>()
        };
        return (y, halfline_distance(&w, z, r, gamma));
    }
    // constraint active: t = gamma, solve over y alone
    let qr_b = PivotedQr::new(bmat, 1e-12);
    let target: Vec<f64> = (0..n).map(|i| z[i] + gamma * r[i] - p[i]).collect();
    let y = qr_b.lstsq(&target);
    let w = {
        let by = bmat.matvec(&y);
        p.iter().zip(&by).map(|(a, b)| a + b).collect::<Vec<f64>>()
    };
    (y, halfline_distance(&w, z, r, gamma))
}

/// Searches lattice coefficient shells (infinity-norm up to `search_bound`)
/// for a point of the mixed lattice within `q.eps` of the half-line. The
/// continuous part is resolved exactly per lattice point. Never claims
/// nonexistence: a None is merely "nothing within this bound".
pub fn approximate_halfline(
    m: &MixedLattice,
    q: &HalfLineQuery,
    search_bound: i64,
) -> Result<Option<Vec<f64>>, CoreError> {
    let (zu, _zy) = m.decompose(&q.z).ok_or_else(|| {
        CoreError::InvalidArgument("query point z is not on the mixed lattice".into())
    })?;
    if !m.in_affine_hull(&q.r) {
        return Err(CoreError::InvalidArgument(
            "direction r lies outside the affine hull of the mixed lattice".into(),
        ));
    }
    // search relative to z's lattice coordinates so small shells cover the
    // natural neighborhood of the half-line start
    let k = m.lattice_rank();
    for u_rel in ShellIter::new(k, search_bound) {
        let u: Vec<i64> = u_rel.iter().zip(&zu).map(|(a, b)| a + b).collect();
        let p = m.point(&u, &vec![0.0; 0]);
        let (y, dist) = best_continuous_shift(&m.b, &p, &q.z, &q.r, q.gamma);
        if dist < q.eps {
            let mut w = p;
            let by = m.b.matvec(&y);
            for (wi, byi) in w.iter_mut().zip(&by) {
                *wi += byi;
            }
            return Ok(Some(w));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Convex bodies
// ---------------------------------------------------------------------------

/// Convex bodies used as X and P in the Dirichlet and finiteness machinery.
#[derive(Clone, Debug)]
pub enum ConvexBody {
    /// Intersection of half-spaces a.x >= b, with per-row exactness flags.
    Polyhedron {
        rows: Vec<(Vec<f64>, f64)>,
        rational: Vec<bool>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// (x - c)' S (x - c) <= 1 with S positive definite.
    Ellipsoid {
        shape: Matrix,
        center: Vec<f64>,
    },
    /// apex + cone(generators).
    ShiftedCone {
        apex: Vec<f64>,
        generators: Vec<Vec<f64>>,
    },
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polyhedron { rows, .. } => rows.first().map_or(0, |(a, _)| a.len()),
            ConvexBody::Ball { center, .. } => center.len(),
            ConvexBody::Ellipsoid { center, .. } => center.len(),
            ConvexBody::ShiftedCone { apex, .. } => apex.len(),
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        match self {
            ConvexBody::Polyhedron { rows, rational } => {
                if rows.is_empty() {
                    return Err(CoreError::Validation("polyhedron needs at least one row".into()));
                }
                if rows.len() != rational.len() {
                    return Err(CoreError::Validation(
                        "polyhedron rational flags must match rows".into(),
                    ));
                }
                Ok(())
            }
            ConvexBody::Ball { radius, .. } => {
                if *radius <= 0.0 {
                    return Err(CoreError::Validation("ball radius must be positive".into()));
                }
                Ok(())
            }
            ConvexBody::Ellipsoid { shape, center } => {
                if shape.nrows() != center.len() || shape.ncols() != center.len() {
                    return Err(CoreError::Validation("ellipsoid shape dimension mismatch".into()));
                }
                if cholesky(shape).is_none() {
                    return Err(CoreError::Validation(
                        "ellipsoid shape must be positive definite".into(),
                    ));
                }
                Ok(())
            }
            ConvexBody::ShiftedCone { generators, apex } => {
                if generators.iter().any(|g| g.len() != apex.len()) {
                    return Err(CoreError::Validation("cone generator dimension mismatch".into()));
                }
                Ok(())
            }
        }
    }

    /// Signed feasibility slack: nonnegative inside (to tolerance), the most
    /// violated constraint outside. For cones the slack is geometric.
    pub fn membership_slack(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Polyhedron { rows, .. } => rows
                .iter()
                .map(|(a, b)| dot(a, x) - b)
                .fold(f64::INFINITY, f64::min),
            ConvexBody::Ball { center, radius } => {
                radius - norm2(&x.iter().zip(center).map(|(a, b)| a - b).collect::<Vec<f64>>())
            }
            ConvexBody::Ellipsoid { shape, center } => {
                let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                1.0 - dot(&d, &shape.matvec(&d))
            }
            ConvexBody::ShiftedCone { apex, generators } => {
                let d: Vec<f64> = x.iter().zip(apex).map(|(a, b)| a - b).collect();
                cone_membership_slack(generators, &d)
            }
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.membership_slack(x) >= -tol
    }

    /// Membership of r in the recession cone.
    pub fn recession_contains(&self, r: &[f64]) -> bool {
        match self {
            ConvexBody::Polyhedron { rows, .. } => rows.iter().all(|(a, _)| dot(a, r) >= -1e-9),
            ConvexBody::Ball { .. } | ConvexBody::Ellipsoid { .. } => norm2(r) <= 1e-9,
            ConvexBody::ShiftedCone { generators, .. } => {
                cone_membership_slack(generators, r) >= -1e-9
            }
        }
    }

    /// Generator list of the recession cone when it is available in closed
    /// form: {0} for bounded kinds, the generators for shifted cones, and a
    /// two-ray description for planar polyhedra. None otherwise.
    pub fn recession_generators(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            ConvexBody::Ball { .. } | ConvexBody::Ellipsoid { .. } => Some(vec![]),
            ConvexBody::ShiftedCone { generators, .. } => Some(generators.clone()),
            ConvexBody::Polyhedron { rows, .. } => {
                let n = self.dim();
                if n != 2 {
                    return None;
                }
                // the recession cone {r: a.r >= 0 for all rows} in the plane:
                // scan directions on the circle and keep the extreme feasible ones
                let feasible = |theta: f64| -> bool {
                    let r = [theta.cos(), theta.sin()];
                    rows.iter().all(|(a, _)| a[0] * r[0] + a[1] * r[1] >= -1e-12)
                };
                let steps = 14400;
                let mut arcs: Vec<(usize, usize)> = Vec::new();
                let mut start: Option<usize> = None;
                for i in 0..steps {
                    let th = 2.0 * std::f64::consts::PI * i as f64 / steps as f64;
                    if feasible(th) {
                        if start.is_none() {
                            start = Some(i);
                        }
                    } else if let Some(s) = start.take() {
                        arcs.push((s, i - 1));
                    }
                }
                if let Some(s) = start {
                    if let Some(first) = arcs.first().cloned() {
                        if first.0 == 0 {
                            arcs.remove(0);
                            arcs.push((s, steps + first.1));
                        } else {
                            arcs.push((s, steps - 1));
                        }
                    } else {
                        arcs.push((s, steps - 1));
                    }
                }
                match arcs.len() {
                    0 => Some(vec![]),
                    1 => {
                        let (s, e) = arcs[0];
                        if e - s >= steps - 1 {
                            return None; // whole plane: a line, not handled
                        }
                        let th_s = 2.0 * std::f64::consts::PI * s as f64 / steps as f64;
                        let th_e = 2.0 * std::f64::consts::PI * (e % steps) as f64 / steps as f64;
                        let mut gens = vec![vec![th_s.cos(), th_s.sin()]];
                        if e > s {
                            gens.push(vec![th_e.cos(), th_e.sin()]);
                        }
                        Some(gens)
                    }
                    _ => None,
                }
            }
        }
    }

    pub fn is_rational_polyhedron(&self) -> bool {
        matches!(self, ConvexBody::Polyhedron { rational, .. } if rational.iter().all(|&r| r))
    }

    pub fn is_bounded_kind(&self) -> bool {
        matches!(self, ConvexBody::Ball { .. } | ConvexBody::Ellipsoid { .. })
    }

    /// True for the Dirichlet classes handled exactly: rational polyhedra
    /// and bounded bodies.
    pub fn is_corollary_class(&self) -> bool {
        self.is_rational_polyhedron() || self.is_bounded_kind()
    }

    /// Affine image U x + t of the body (U invertible).
    pub fn transform(&self, u: &Matrix, uinv: &Matrix, t: &[f64]) -> ConvexBody {
        match self {
            ConvexBody::Polyhedron { rows, rational } => {
                let new_rows = rows
                    .iter()
                    .map(|(a, b)| {
                        let aprime = uinv.tr_matvec(a);
                        let bprime = b + dot(&aprime, t);
                        (aprime, bprime)
                    })
                    .collect();
                ConvexBody::Polyhedron {
                    rows: new_rows,
                    rational: rational.clone(),
                }
            }
            ConvexBody::Ball { center, radius } => {
                // the image of a ball under a general unimodular map is an
                // ellipsoid: (y-c')' U^-T U^-1 (y-c') <= radius^2
                let mut cprime = u.matvec(center);
                for (ci, ti) in cprime.iter_mut().zip(t) {
                    *ci += ti;
                }
                let uinv_t = uinv.transpose();
                let shape = uinv_t.matmul(uinv).scale(1.0 / (radius * radius));
                ConvexBody::Ellipsoid {
                    shape,
                    center: cprime,
                }
            }
            ConvexBody::Ellipsoid { shape, center } => {
                let mut cprime = u.matvec(center);
                for (ci, ti) in cprime.iter_mut().zip(t) {
                    *ci += ti;
                }
                let uinv_t = uinv.transpose();
                let new_shape = uinv_t.matmul(shape).matmul(uinv);
                ConvexBody::Ellipsoid {
                    shape: new_shape,
                    center: cprime,
                }
            }
            ConvexBody::ShiftedCone { apex, generators } => {
                let mut aprime = u.matvec(apex);
                for (ai, ti) in aprime.iter_mut().zip(t) {
                    *ai += ti;
                }
                ConvexBody::ShiftedCone {
                    apex: aprime,
                    generators: generators.iter().map(|g| u.matvec(g)).collect(),
                }
            }
        }
    }
}

/// Signed slack of d in cone(generators): exact colinearity test for a single
/// generator, a nonnegative least-squares fit through the conic solver
/// otherwise.
fn cone_membership_slack(generators: &[Vec<f64>], d: &[f64]) -> f64 {
    if norm2(d) <= 1e-12 {
        return 0.0;
    }
    match generators.len() {
        0 => -norm2(d),
        1 => {
            let g = &generators[0];
            let gn = dot(g, g);
            if gn == 0.0 {
                return -norm2(d);
            }
            let alpha = dot(d, g) / gn;
            if alpha < 0.0 {
                return -norm2(d);
            }
            let resid: Vec<f64> = d.iter().zip(g).map(|(a, b)| a - alpha * b).collect();
            -norm2(&resid)
        }
        _ => {
            // min ||G alpha - d||_inf via LP: slack = -optimum
            let n = d.len();
            let k = generators.len();
            let nv = k + 1; // alpha, t
            let mut rows = Matrix::zeros(2 * n + k + 1, nv);
            let mut rhs = vec![0.0; 2 * n + k + 1];
            for i in 0..n {
                for j in 0..k {
                    rows[(i, j)] = -generators[j][i];
                    rows[(n + i, j)] = generators[j][i];
                }
                rows[(i, k)] = 1.0;
                rows[(n + i, k)] = 1.0;
                rhs[i] = -d[i];
                rhs[n + i] = d[i];
            }
            for j in 0..k {
                rows[(2 * n + j, j)] = 1.0;
            }
            rows[(2 * n + k, k)] = 1.0;
            let mut objective = vec![0.0; nv];
            objective[k] = 1.0;
            let cone = ConeProduct::new(vec![ConeBlock::Orthant { dim: 2 * n + k + 1 }]).unwrap();
            let prog = ConicProgram {
                objective,
                rows,
                rhs,
                cone,
            };
            let res = ipm::solve(&prog);
            if res.status == SolveStatus::Optimal {
                -res.objective
            } else {
                -norm2(d)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Dirichlet probing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub enum ProbeOutcome {
    Witness { w: Vec<f64>, distance: f64 },
    NoWitnessWithinBound,
    /// Exact emptiness argument: P cap M is trivial within any searchable
    /// bound, and the remaining point misses the half-line by >= eps.
    Counterexample { certificate: String },
}

/// Probes the Dirichlet property of P with respect to M on a query list.
pub fn dirichlet_probe(
    p: &ConvexBody,
    m: &MixedLattice,
    queries: &[HalfLineQuery],
    search_bound: i64,
) -> Result<Vec<ProbeOutcome>, CoreError> {
    p.validate()?;
    let mut out = Vec::with_capacity(queries.len());
    for q in queries {
        let (zu, _) = m.decompose(&q.z).ok_or_else(|| {
            CoreError::InvalidArgument("query point z is not on the mixed lattice".into())
        })?;
        if !p.contains(&q.z, 1e-9) {
            return Err(CoreError::InvalidArgument("query point z is not in P".into()));
        }
        if !p.recession_contains(&q.r) {
            return Err(CoreError::InvalidArgument(
                "query direction r is not in the recession cone of P".into(),
            ));
        }
        if norm2(&q.r) <= 1e-12 {
            out.push(ProbeOutcome::Witness {
                w: q.z.clone(),
                distance: 0.0,
            });
            continue;
        }
        let mut found = None;
        let k = m.lattice_rank();
        for u_rel in ShellIter::new(k, search_bound) {
            let u: Vec<i64> = u_rel.iter().zip(&zu).map(|(a, b)| a + b).collect();
            let pnt = m.point(&u, &[]);
            let (y, dist) = best_continuous_shift(&m.b, &pnt, &q.z, &q.r, q.gamma);
            if dist < q.eps {
                let mut w = pnt;
                let by = m.b.matvec(&y);
                for (wi, byi) in w.iter_mut().zip(&by) {
                    *wi += byi;
                }
                if p.contains(&w, 1e-9) {
                    found = Some(ProbeOutcome::Witness { w, distance: dist });
                    break;
                }
            }
        }
        if let Some(w) = found {
            out.push(w);
            continue;
        }
        if let Some(cert) = ray_emptiness_certificate(p, m, q) {
            out.push(ProbeOutcome::Counterexample { certificate: cert });
        } else {
            out.push(ProbeOutcome::NoWitnessWithinBound);
        }
    }
    Ok(out)
}

/// Bound within which the exact ray analysis must rule out integer points.
const CERT_BOUND: i128 = 1_000_000_000;

/// Exact emptiness certificate for a single-generator shifted cone over the
/// standard lattice: the float direction, read as the exact rational it is,
/// admits no nonzero integer multiple within CERT_BOUND, so P cap M = {apex};
/// the certificate then records that the apex misses the half-line by >= eps.
fn ray_emptiness_certificate(p: &ConvexBody, m: &MixedLattice, q: &HalfLineQuery) -> Option<String> {
    let (apex, generators) = match p {
        ConvexBody::ShiftedCone { apex, generators } => (apex, generators),
        _ => return None,
    };
    if generators.len() != 1 || !m.is_standard() {
        return None;
    }
    if apex.iter().any(|a| a.fract() != 0.0) {
        return None;
    }
    let g = &generators[0];
    let min_norm = minimal_integer_multiple_norm(g)?;
    if min_norm <= CERT_BOUND {
        return None; // integer points exist on the ray within reach
    }
    let apex_dist = halfline_distance(apex, &q.z, &q.r, q.gamma);
    if apex_dist < q.eps {
        return None;
    }
    Some(format!(
        "P cap M = {{apex}}: the smallest nonzero integer point on the ray has \
         infinity-norm about {:.3e} (exact rational analysis of the direction), \
         beyond any bound <= {}; dist(apex, half-line) = {:.6} >= eps = {}",
        min_norm as f64, CERT_BOUND, apex_dist, q.eps
    ))
}

/// Exact rational decomposition of a float: f = num / den with den a power
/// of two, in lowest terms.
fn float_to_rational(f: f64) -> Option<(i128, i128)> {
    if !f.is_finite() {
        return None;
    }
    if f == 0.0 {
        return Some((0, 1));
    }
    let bits = f.to_bits();
    let sign = if bits >> 63 == 1 { -1i128 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & 0xf_ffff_ffff_ffff) as i128;
    let (mant, exp) = if exp_bits == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1i128 << 52), exp_bits - 1075)
    };
    let mut num = sign * mant;
    let mut den: i128 = 1;
    if exp >= 0 {
        if exp > 70 {
            return None; // astronomically large; caller treats as huge
        }
        num = num.checked_shl(exp as u32)?;
    } else {
        let shift = (-exp) as u32;
        if shift > 126 {
            return None;
        }
        den = den.checked_shl(shift)?;
    }
    let g = gcd_i128(num.abs(), den);
    Some((num / g, den / g))
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Infinity-norm of the smallest nonzero integer vector on the ray through g,
/// from the exact rational values of the float coordinates. None means the
/// computation overflowed, which only happens when the answer is enormous.
fn minimal_integer_multiple_norm(g: &[f64]) -> Option<i128> {
    // alpha g integer for all i  <=>  alpha in lcm_i(q_i) / gcd_i(p_i) * Z
    // where g_i = p_i / q_i in lowest terms (zero coordinates impose nothing)
    let mut lcm_q: i128 = 1;
    let mut gcd_p: i128 = 0;
    let mut max_abs = 0.0f64;
    for &gi in g {
        if gi == 0.0 {
            continue;
        }
        max_abs = max_abs.max(gi.abs());
        let (p, q) = float_to_rational(gi)?;
        let p = p.abs();
        lcm_q = lcm_q.checked_mul(q / gcd_i128(lcm_q, q))?;
        gcd_p = gcd_i128(gcd_p, p);
    }
    if gcd_p == 0 {
        return None; // zero direction
    }
    // minimal alpha = lcm_q / gcd_p; minimal point norm = alpha * max|g|
    let alpha = lcm_q as f64 / gcd_p as f64;
    let norm = alpha * max_abs;
    if norm > 1e30 {
        return Some(i128::MAX);
    }
    Some(norm.ceil() as i128)
}

// ---------------------------------------------------------------------------
// Recession condition and affine invariance
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RecessionVerdict {
    Holds,
    FailsSuspected,
    Unknown,
}

/// Checks rec(P) = rec(conv(P cap M)): exact for rational polyhedra over the
/// standard mixed lattice and for bounded bodies with a lattice point; tested
/// by half-line search for explicit recession generators otherwise.
pub fn recession_condition_check(
    p: &ConvexBody,
    m: &MixedLattice,
    search_bound: i64,
) -> Result<RecessionVerdict, CoreError> {
    p.validate()?;
    if p.is_rational_polyhedron() && m.is_standard() {
        return Ok(RecessionVerdict::Holds);
    }
    if p.is_bounded_kind() {
        // both recession cones are {0} as soon as P cap M is nonempty
        if find_lattice_point_in(p, m, search_bound).is_some() {
            return Ok(RecessionVerdict::Holds);
        }
        return Ok(RecessionVerdict::Unknown);
    }
    let gens = match p.recession_generators() {
        Some(g) => g,
        None => return Ok(RecessionVerdict::Unknown),
    };
    let z = match find_lattice_point_in(p, m, search_bound) {
        Some(z) => z,
        None => return Ok(RecessionVerdict::Unknown),
    };
    for r in &gens {
        if norm2(r) <= 1e-12 {
            continue;
        }
        let q = HalfLineQuery::new(z.clone(), r.clone(), 0.5, 2.0)?;
        let outcomes = dirichlet_probe(p, m, &[q], search_bound)?;
        match &outcomes[0] {
            ProbeOutcome::Witness { .. } => {}
            _ => return Ok(RecessionVerdict::FailsSuspected),
        }
    }
    Ok(RecessionVerdict::Unknown)
}

fn find_lattice_point_in(p: &ConvexBody, m: &MixedLattice, bound: i64) -> Option<Vec<f64>> {
    for u in ShellIter::new(m.lattice_rank(), bound.min(50)) {
        let pnt = m.point(&u, &[]);
        if m.continuous_rank() == 0 {
            if p.contains(&pnt, 1e-9) {
                return Some(pnt);
            }
        } else {
            // project the continuous part toward the body is out of scope;
            // accept only the bare lattice point
            if p.contains(&pnt, 1e-9) {
                return Some(pnt);
            }
        }
    }
    None
}

/// Integer affine map x -> U x + shift with |det U| = 1, preserving Z^n.
#[derive(Clone, Debug)]
pub struct UnimodularMap {
    pub u: Matrix,
    pub shift: Vec<f64>,
}

impl UnimodularMap {
    pub fn new(u: Matrix, shift: Vec<f64>) -> Result<Self, CoreError> {
        if u.nrows() != u.ncols() {
            return Err(CoreError::Validation("unimodular map must be square".into()));
        }
        let n = u.nrows();
        for i in 0..n {
            for j in 0..n {
                if u[(i, j)].fract() != 0.0 {
                    return Err(CoreError::Validation("unimodular map must have integer entries".into()));
                }
            }
        }
        if shift.iter().any(|s| s.fract() != 0.0) {
            return Err(CoreError::Validation("shift must be integer".into()));
        }
        let det = integer_det(&u);
        if det.abs() != 1 {
            return Err(CoreError::Validation(format!(
                "map is not lattice-preserving: determinant {det}"
            )));
        }
        Ok(UnimodularMap { u, shift })
    }

    pub fn inverse_matrix(&self) -> Matrix {
        let n = self.u.nrows();
        let det = integer_det(&self.u) as f64;
        // adjugate divided by det (+-1): exact integer inverse
        Matrix::from_fn(n, n, |i, j| {
            let minor = integer_minor_det(&self.u, j, i) as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign * minor / det
        })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = self.u.matvec(x);
        for (o, s) in out.iter_mut().zip(&self.shift) {
            *o += s;
        }
        out
    }
}

fn integer_det(m: &Matrix) -> i128 {
    let n = m.nrows();
    let mut im = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            im[i][j] = m[(i, j)] as i128;
        }
    }
    int_det_rec(&im)
}

fn integer_minor_det(m: &Matrix, skip_row: usize, skip_col: usize) -> i128 {
    let n = m.nrows();
    let mut im = Vec::new();
    for i in 0..n {
        if i == skip_row {
            continue;
        }
        let mut row = Vec::new();
        for j in 0..n {
            if j == skip_col {
                continue;
            }
            row.push(m[(i, j)] as i128);
        }
        im.push(row);
    }
    int_det_rec(&im)
}

fn int_det_rec(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut det = 0i128;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                det += sign * m[0][j] * int_det_rec(&minor);
            }
            det
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub original: Vec<bool>,
    pub transformed: Vec<bool>,
    pub agree: bool,
}

/// Runs the probe on (P, queries) and on (T(P), transformed queries) and
/// compares the witness-found patterns.
pub fn affine_invariance_test(
    p: &ConvexBody,
    m: &MixedLattice,
    t: &UnimodularMap,
    queries: &[HalfLineQuery],
    search_bound: i64,
) -> Result<InvarianceReport, CoreError> {
    if !m.is_standard() {
        return Err(CoreError::InvalidArgument(
            "affine invariance test supports the standard lattice".into(),
        ));
    }
    let uinv = t.inverse_matrix();
    let tp = p.transform(&t.u, &uinv, &t.shift);
    let tq: Vec<HalfLineQuery> = queries
        .iter()
        .map(|q| HalfLineQuery {
            z: t.apply(&q.z),
            r: t.u.matvec(&q.r),
            eps: q.eps,
            gamma: q.gamma,
        })
        .collect();
    let before = dirichlet_probe(p, m, queries, search_bound)?;
    let after = dirichlet_probe(&tp, m, &tq, search_bound)?;
    let to_bool = |o: &ProbeOutcome| matches!(o, ProbeOutcome::Witness { .. });
    let original: Vec<bool> = before.iter().map(to_bool).collect();
    let transformed: Vec<bool> = after.iter().map(to_bool).collect();
    let agree = original == transformed;
    Ok(InvarianceReport {
        original,
        transformed,
        agree,
    })
}

// ---------------------------------------------------------------------------
// Finiteness experiment
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SideClass {
    Stabilizing,
    Growing,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessReport {
    /// sup c.x over X cap S cap box, per box in the schedule.
    pub s_values: Vec<f64>,
    /// sup c.x over X cap P cap box, per box.
    pub p_values: Vec<f64>,
    pub s_class: SideClass,
    pub p_class: SideClass,
    pub hypothesis_ok: bool,
    /// False exactly when the S side stabilizes while the P side grows,
    /// which the finiteness theorem forbids under the hypothesis.
    pub consistent: bool,
}

fn classify(values: &[f64]) -> SideClass {
    if values.len() < 2 {
        return SideClass::Stabilizing;
    }
    let last = values[values.len() - 1];
    let prev = values[values.len() - 2];
    if !last.is_finite() || !prev.is_finite() {
        return SideClass::Stabilizing; // empty intersections do not grow
    }
    if (last - prev).abs() < 1e-6 {
        SideClass::Stabilizing
    } else {
        SideClass::Growing
    }
}

/// sup c.x over the intersection of bodies and the box [-bound, bound]^n via
/// the conic solver (extra cone variables for shifted-cone bodies).
fn continuous_sup(
    bodies: &[&ConvexBody],
    c: &[f64],
    bound: f64,
) -> Result<f64, CoreError> {
    let n = c.len();
    let mut extra = 0usize;
    for b in bodies {
        if let ConvexBody::ShiftedCone { generators, .. } = b {
            extra += generators.len();
        }
    }
    let nv = n + extra;
    let mut rows_list: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut blocks = Vec::new();
    let mut next_extra = n;
    for b in bodies {
        match b {
            ConvexBody::Polyhedron { rows, .. } => {
                for (a, beta) in rows {
                    let mut row = vec![0.0; nv];
                    row[..n].copy_from_slice(a);
                    rows_list.push(row);
                    rhs.push(*beta);
                }
                blocks.push(ConeBlock::Orthant {
                    dim: rows.len(),
                });
            }
            ConvexBody::Ball { center, radius } => {
                for i in 0..n {
                    let mut row = vec![0.0; nv];
                    row[i] = 1.0;
                    rows_list.push(row);
                    rhs.push(center[i]);
                }
                rows_list.push(vec![0.0; nv]);
                rhs.push(-radius);
                blocks.push(ConeBlock::SecondOrder { dim: n + 1 });
            }
            ConvexBody::Ellipsoid { shape, center } => {
                let l = cholesky(shape).ok_or_else(|| {
                    CoreError::Validation("ellipsoid shape must be positive definite".into())
                })?;
                let lt = l.transpose();
                for i in 0..n {
                    let mut row = vec![0.0; nv];
                    for j in 0..n {
                        row[j] = lt[(i, j)];
                    }
                    rows_list.push(row);
                    rhs.push(dot(&lt.row(i).to_vec(), center));
                }
                rows_list.push(vec![0.0; nv]);
                rhs.push(-1.0);
                blocks.push(ConeBlock::SecondOrder { dim: n + 1 });
            }
            ConvexBody::ShiftedCone { apex, generators } => {
                let k = generators.len();
                // x - G alpha = apex as orthant pairs, alpha >= 0
                for i in 0..n {
                    let mut row = vec![0.0; nv];
                    row[i] = 1.0;
                    for (j, gen) in generators.iter().enumerate() {
                        row[next_extra + j] = -gen[i];
                    }
                    let neg: Vec<f64> = row.iter().map(|v| -v).collect();
                    rows_list.push(row);
                    rhs.push(apex[i]);
                    rows_list.push(neg);
                    rhs.push(-apex[i]);
                }
                for j in 0..k {
                    let mut row = vec![0.0; nv];
                    row[next_extra + j] = 1.0;
                    rows_list.push(row);
                    rhs.push(0.0);
                }
                blocks.push(ConeBlock::Orthant { dim: 2 * n + k });
                next_extra += k;
            }
        }
    }
    // box rows on x
    for i in 0..n {
        let mut row = vec![0.0; nv];
        row[i] = 1.0;
        rows_list.push(row.clone());
        rhs.push(-bound);
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        rows_list.push(neg);
        rhs.push(-bound);
    }
    blocks.push(ConeBlock::Orthant { dim: 2 * n });
    let mut objective = vec![0.0; nv];
    for i in 0..n {
        objective[i] = -c[i]; // max c.x
    }
    let prog = ConicProgram {
        objective,
        rows: Matrix::from_rows(&rows_list),
        rhs,
        cone: ConeProduct::new(blocks)?,
    };
    let res = ipm::solve(&prog);
    match res.status {
        SolveStatus::Optimal => Ok(-res.objective),
        SolveStatus::PrimalInfeasible => Ok(f64::NEG_INFINITY),
        other => Err(CoreError::Numerical(format!(
            "bounded sup subproblem did not solve (status {other:?})"
        ))),
    }
}

/// Lattice-side sup over X cap P cap M within the coefficient box.
fn lattice_sup(
    x_body: &ConvexBody,
    p_body: &ConvexBody,
    m: &MixedLattice,
    c: &[f64],
    bound: i64,
) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for u in ShellIter::new(m.lattice_rank(), bound) {
        let pnt = m.point(&u, &[]);
        if x_body.contains(&pnt, 1e-9) && p_body.contains(&pnt, 1e-9) {
            let val = dot(c, &pnt);
            if val > best {
                best = val;
            }
        }
    }
    best
}

/// Compares sup c.x over X cap S and over X cap P across the box schedule.
/// P must belong to one of the exactly-handled Dirichlet classes.
pub fn finiteness_experiment(
    x_body: &ConvexBody,
    p_body: &ConvexBody,
    m: &MixedLattice,
    c: &[f64],
    schedule: &[i64],
) -> Result<FinitenessReport, CoreError> {
    x_body.validate()?;
    p_body.validate()?;
    if !p_body.is_corollary_class() {
        return Err(CoreError::InvalidArgument(
            "P must be a rational polyhedron or a bounded body".into(),
        ));
    }
    if m.continuous_rank() != 0 {
        return Err(CoreError::InvalidArgument(
            "the finiteness experiment enumerates pure lattices".into(),
        ));
    }
    // hypothesis: int(X) cap S nonempty
    let first = *schedule.first().unwrap_or(&10);
    let mut hypothesis_ok = false;
    for u in ShellIter::new(m.lattice_rank(), first) {
        let pnt = m.point(&u, &[]);
        if x_body.membership_slack(&pnt) > 1e-7 && p_body.contains(&pnt, 1e-9) {
            hypothesis_ok = true;
            break;
        }
    }
    let mut s_values = Vec::new();
    let mut p_values = Vec::new();
    for &bound in schedule {
        s_values.push(lattice_sup(x_body, p_body, m, c, bound));
        p_values.push(continuous_sup(&[x_body, p_body], c, bound as f64)?);
    }
    let s_class = classify(&s_values);
    let p_class = classify(&p_values);
    let consistent = !(s_class == SideClass::Stabilizing && p_class == SideClass::Growing);
    Ok(FinitenessReport {
        s_values,
        p_values,
        s_class,
        p_class,
        hypothesis_ok,
        consistent,
    })
}

/// Default box schedule for finiteness experiments.
pub fn default_schedule() -> Vec<i64> {
    vec![10, 20, 40]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> f64 {
        std::f64::consts::SQRT_2
    }

    #[test]
    fn shell_iter_orders_by_infinity_norm() {
        let pts: Vec<Vec<i64>> = ShellIter::new(2, 1).collect();
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts.len(), 9);
        assert!(pts[1..].iter().all(|p| p.iter().any(|v| v.abs() == 1)));
    }

    #[test]
    fn halfline_z2_sqrt2_witness() {
        // the (5,7) witness: dist to the point at t = 5 is |7 - 7.0710..| < 0.1
        let m = MixedLattice::standard(2);
        let q = HalfLineQuery::new(vec![0.0, 0.0], vec![1.0, sqrt2()], 0.1, 5.0).unwrap();
        let w = approximate_halfline(&m, &q, 20).unwrap().expect("witness");
        assert_eq!(w, vec![5.0, 7.0]);
        let d = halfline_distance(&w, &q.z, &q.r, q.gamma);
        assert!(d < 0.1 && d > 0.05, "distance {d}");
    }

    #[test]
    fn halfline_endpoint_is_a_witness() {
        let m = MixedLattice::standard(2);
        let q = HalfLineQuery::new(vec![3.0, 3.0], vec![1.0, 0.0], 0.5, 0.0).unwrap();
        let w = approximate_halfline(&m, &q, 5).unwrap().unwrap();
        assert_eq!(w, vec![3.0, 3.0]);
    }

    #[test]
    fn halfline_continuous_line_covers() {
        let b = Matrix::from_fn(2, 1, |_, _| 1.0);
        let m = MixedLattice::continuous(b);
        let q = HalfLineQuery::new(vec![0.0, 0.0], vec![1.0, 1.0], 0.01, 3.0).unwrap();
        let w = approximate_halfline(&m, &q, 0).unwrap().unwrap();
        assert!((w[0] - 3.0).abs() < 1e-9 && (w[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn halfline_rejects_offlattice_start() {
        let m = MixedLattice::standard(2);
        let q = HalfLineQuery::new(vec![0.5, 0.0], vec![1.0, 0.0], 0.1, 0.0).unwrap();
        assert!(approximate_halfline(&m, &q, 5).is_err());
    }

    #[test]
    fn probe_rational_polyhedron_finds_witness() {
        // P = {x2 >= 0, x2 <= x1}, query along r = (2, 1)
        let p = ConvexBody::Polyhedron {
            rows: vec![(vec![0.0, 1.0], 0.0), (vec![1.0, -1.0], 0.0)],
            rational: vec![true, true],
        };
        let m = MixedLattice::standard(2);
        let q = HalfLineQuery::new(vec![1.0, 0.0], vec![2.0, 1.0], 0.25, 3.0).unwrap();
        let out = dirichlet_probe(&p, &m, &[q], 50).unwrap();
        match &out[0] {
            ProbeOutcome::Witness { w, distance } => {
                assert!(*distance < 0.25);
                assert!(p.contains(w, 1e-9));
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn probe_irrational_ray_is_counterexample() {
        let p = ConvexBody::ShiftedCone {
            apex: vec![0.0, 0.0],
            generators: vec![vec![1.0, sqrt2()]],
        };
        let m = MixedLattice::standard(2);
        let q = HalfLineQuery::new(vec![0.0, 0.0], vec![1.0, sqrt2()], 0.1, 1.0).unwrap();
        let out = dirichlet_probe(&p, &m, &[q], 30).unwrap();
        match &out[0] {
            ProbeOutcome::Counterexample { certificate } => {
                assert!(certificate.contains("apex"));
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn probe_ball_zero_ray_degenerate() {
        let p = ConvexBody::Ball {
            center: vec![0.0, 0.0],
            radius: 2.0,
        };
        let m = MixedLattice::standard(2);
        let q = HalfLineQuery::new(vec![1.0, 1.0], vec![0.0, 0.0], 1.0, 0.0).unwrap();
        let out = dirichlet_probe(&p, &m, &[q], 10).unwrap();
        assert!(matches!(out[0], ProbeOutcome::Witness { .. }));
    }

    #[test]
    fn rational_fraction_of_float_is_exact() {
        let (p, q) = float_to_rational(1.5).unwrap();
        assert_eq!((p, q), (3, 2));
        let (p, q) = float_to_rational(-0.25).unwrap();
        assert_eq!((p, q), (-1, 4));
        // sqrt(2) as a float has a huge denominator
        let (_, q) = float_to_rational(std::f64::consts::SQRT_2).unwrap();
        assert!(q > 1i128 << 40);
    }

    #[test]
    fn minimal_multiple_rational_direction_is_small() {
        let norm = minimal_integer_multiple_norm(&[1.0, 1.5]).unwrap();
        assert_eq!(norm, 3); // alpha = 2 gives (2, 3)
        let norm = minimal_integer_multiple_norm(&[1.0, sqrt2()]).unwrap();
        assert!(norm > CERT_BOUND);
    }

    #[test]
    fn recession_check_cases() {
        let m = MixedLattice::standard(2);
        let rational = ConvexBody::Polyhedron {
            rows: vec![(vec![0.0, 1.0], 0.0), (vec![1.0, -1.0], 0.0)],
            rational: vec![true, true],
        };
        assert_eq!(
            recession_condition_check(&rational, &m, 50).unwrap(),
            RecessionVerdict::Holds
        );
        let ball = ConvexBody::Ball {
            center: vec![0.2, 0.1],
            radius: 2.0,
        };
        assert_eq!(
            recession_condition_check(&ball, &m, 50).unwrap(),
            RecessionVerdict::Holds
        );
        let ray = ConvexBody::ShiftedCone {
            apex: vec![0.0, 0.0],
            generators: vec![vec![1.0, sqrt2()]],
        };
        assert_eq!(
            recession_condition_check(&ray, &m, 30).unwrap(),
            RecessionVerdict::FailsSuspected
        );
    }

    #[test]
    fn unimodular_shear_agrees() {
        let p = ConvexBody::Polyhedron {
            rows: vec![(vec![0.0, 1.0], 0.0), (vec![1.0, -1.0], 0.0)],
            rational: vec![true, true],
        };
        let m = MixedLattice::standard(2);
        let shear = UnimodularMap::new(
            Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]),
            vec![0.0, 0.0],
        )
        .unwrap();
        let queries = vec![
            HalfLineQuery::new(vec![1.0, 0.0], vec![2.0, 1.0], 0.25, 3.0).unwrap(),
            HalfLineQuery::new(vec![2.0, 1.0], vec![1.0, 0.0], 0.25, 1.0).unwrap(),
        ];
        let rep = affine_invariance_test(&p, &m, &shear, &queries, 50).unwrap();
        assert!(rep.agree, "{rep:?}");
        assert!(rep.original.iter().all(|&b| b));
    }

    #[test]
    fn unimodular_identity_and_bad_determinant() {
        let id = UnimodularMap::new(Matrix::identity(2), vec![0.0, 0.0]);
        assert!(id.is_ok());
        let bad = UnimodularMap::new(
            Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]),
            vec![0.0, 0.0],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn finiteness_ball_stabilizes() {
        let x = ConvexBody::Ball {
            center: vec![0.0, 0.0],
            radius: 10.0,
        };
        let p = ConvexBody::Polyhedron {
            rows: vec![(vec![0.0, 0.0], -1.0)],
            rational: vec![true],
        };
        let m = MixedLattice::standard(2);
        let rep = finiteness_experiment(&x, &p, &m, &[1.0, 0.0], &default_schedule()).unwrap();
        assert!(rep.hypothesis_ok);
        assert_eq!(rep.s_class, SideClass::Stabilizing);
        assert_eq!(rep.p_class, SideClass::Stabilizing);
        assert!((rep.s_values.last().unwrap() - 10.0).abs() < 1e-9);
        assert!((rep.p_values.last().unwrap() - 10.0).abs() < 1e-6);
        assert!(rep.consistent);
    }

    #[test]
    fn finiteness_halfplane_capped_coordinate() {
        let x = ConvexBody::Polyhedron {
            rows: vec![(vec![0.0, -1.0], -5.0)],
            rational: vec![true],
        };
        let p = ConvexBody::Polyhedron {
            rows: vec![
                (vec![1.0, 0.0], -100.0),
                (vec![-1.0, 0.0], -100.0),
                (vec![0.0, 1.0], -100.0),
                (vec![0.0, -1.0], -100.0),
            ],
            rational: vec![true; 4],
        };
        let m = MixedLattice::standard(2);
        let rep = finiteness_experiment(&x, &p, &m, &[0.0, 1.0], &default_schedule()).unwrap();
        assert_eq!(rep.s_class, SideClass::Stabilizing);
        assert_eq!(rep.p_class, SideClass::Stabilizing);
        assert!((rep.s_values.last().unwrap() - 5.0).abs() < 1e-9);
        assert!(rep.consistent);
    }

    #[test]
    fn finiteness_unbounded_grows_on_both_sides() {
        // X = upper half-plane, P = rational orthant, c along the recession
        let x = ConvexBody::Polyhedron {
            rows: vec![(vec![0.0, 1.0], -0.5)],
            rational: vec![false],
        };
        let p = ConvexBody::Polyhedron {
            rows: vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
            rational: vec![true, true],
        };
        let m = MixedLattice::standard(2);
        let rep = finiteness_experiment(&x, &p, &m, &[1.0, 1.0], &default_schedule()).unwrap();
        assert_eq!(rep.s_class, SideClass::Growing);
        assert_eq!(rep.p_class, SideClass::Growing);
        assert!(rep.consistent);
    }
}
