//! Small dense linear algebra: row-major matrices, LU with partial pivoting,
//! Householder QR with column pivoting, and cyclic Jacobi eigendecomposition.
//!
//! Everything here targets desk-scale problems (dimensions in the tens), so
//! dense O(n^3) routines are used throughout.

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.6} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nr = rows.len();
        let nc = if nr == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(nr * nc);
        for r in rows {
            assert_eq!(r.len(), nc, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: nr,
            cols: nc,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// self^T * x without forming the transpose.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "tr_matvec dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi != 0.0 {
                for (o, &a) in out.iter_mut().zip(self.row(i)) {
                    *o += a * xi;
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a != 0.0 {
                    for j in 0..other.cols {
                        out[(i, j)] += a * other[(k, j)];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (v, o) in m.data.iter_mut().zip(&other.data) {
            *v += o;
        }
        m
    }

    /// Copies `block` into self with top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |a, &v| a.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, &v| m.max(v.abs()))
}

/// a + s*b
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    axpy(a, -1.0, b)
}

pub fn scale_vec(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// LU factorization with partial pivoting, for repeated solves against the
/// same square matrix.
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
    singular: bool,
}

impl LuFactors {
    pub fn new(a: &Matrix) -> Self {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-300 {
                singular = true;
                continue;
            }
            if p != k {
                perm.swap(k, p);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] -= f * v;
                    }
                }
            }
        }
        LuFactors { lu, perm, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        if self.singular {
            return None;
        }
        let n = self.lu.rows;
        assert_eq!(rhs.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            let d = self.lu[(i, i)];
            if d.abs() < 1e-300 {
                return None;
            }
            x[i] = s / d;
        }
        Some(x)
    }
}

pub fn lu_solve(a: &Matrix, rhs: &[f64]) -> Option<Vec<f64>> {
    LuFactors::new(a).solve(rhs)
}

/// Cholesky factorization (lower triangular) of a symmetric positive definite
/// matrix. Returns None if a nonpositive pivot is met.
pub fn cholesky(a: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[(i, j)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Some(l)
}

/// Forward/back substitution against a lower-triangular factor: solves L x = b.
pub fn solve_lower(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.nrows();
    let mut x = b.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for j in 0..i {
            s -= l[(i, j)] * x[j];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Returns (eigenvalues ascending, eigenvector matrix with eigenvectors
/// in columns). Intended for orders up to ~16.
pub fn sym_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    // symmetrize against tiny asymmetries from upstream arithmetic
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = Matrix::identity(n);
    let scale = m.norm_inf().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(m[(i, j)].abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let evals: Vec<f64> = idx.iter().map(|&i| m[(i, i)]).collect();
    let evecs = Matrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    (evals, evecs)
}

/// Householder QR with column pivoting of an m x n matrix.
/// Provides least-squares solves, numerical rank, and orthonormal bases for
/// the range of M and the null space of M^T.
pub struct PivotedQr {
    q: Matrix,       // m x m orthogonal
    r: Matrix,       // m x n upper triangular (of the permuted matrix)
    col_perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    pub fn new(a: &Matrix, rank_tol: f64) -> Self {
        let m = a.nrows();
        let n = a.ncols();
        let mut r = a.clone();
        let mut q = Matrix::identity(m);
        let mut col_perm: Vec<usize> = (0..n).collect();
        let mut col_norms: Vec<f64> = (0..n).map(|j| norm2(&r.col(j))).collect();
        let scale = col_norms.iter().fold(0.0f64, |x, &y| x.max(y)).max(1e-300);
        let kmax = m.min(n);
        let mut rank = 0;
        for k in 0..kmax {
            // pivot: move the column with the largest remaining norm to position k
            let (pj, _) = col_norms
                .iter()
                .enumerate()
                .skip(k)
                .fold((k, -1.0), |(bj, bv), (j, &v)| {
                    if v > bv {
                        (j, v)
                    } else {
                        (bj, bv)
                    }
                });
            if pj != k {
                col_perm.swap(k, pj);
                col_norms.swap(k, pj);
                for i in 0..m {
                    let tmp = r[(i, k)];
                    r[(i, k)] = r[(i, pj)];
                    r[(i, pj)] = tmp;
                }
            }
            let mut x: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
            let nx = norm2(&x);
            if nx <= rank_tol * scale {
                break;
            }
            rank = k + 1;
            let alpha = if x[0] >= 0.0 { -nx } else { nx };
            x[0] -= alpha;
            let nv = norm2(&x);
            if nv > 1e-300 {
                for v in &mut x {
                    *v /= nv;
                }
                // apply H = I - 2 v v^T to rows k.. of r and q
                for j in k..n {
                    let mut s = 0.0;
                    for (t, &vv) in x.iter().enumerate() {
                        s += vv * r[(k + t, j)];
                    }
                    s *= 2.0;
                    for (t, &vv) in x.iter().enumerate() {
                        r[(k + t, j)] -= s * vv;
                    }
                }
                for j in 0..m {
                    let mut s = 0.0;
                    for (t, &vv) in x.iter().enumerate() {
                        s += vv * q[(k + t, j)];
                    }
                    s *= 2.0;
                    for (t, &vv) in x.iter().enumerate() {
                        q[(k + t, j)] -= s * vv;
                    }
                }
            }
            for (j, cn) in col_norms.iter_mut().enumerate().skip(k + 1) {
                let updated: f64 = (k + 1..m).map(|i| r[(i, j)] * r[(i, j)]).sum();
                *cn = updated.sqrt();
            }
        }
        // q currently holds Q^T composed from Householder reflections
        PivotedQr {
            q: q.transpose(),
            r,
            col_perm,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Least-squares solution of min ||A x - b||_2 (minimum norm on the
    /// pivoted leading block; free components set to zero).
    pub fn lstsq(&self, b: &[f64]) -> Vec<f64> {
        let n = self.r.ncols();
        let qtb = self.q.tr_matvec(b);
        let mut y = vec![0.0; n];
        for i in (0..self.rank).rev() {
            let mut s = qtb[i];
            for j in i + 1..self.rank {
                s -= self.r[(i, j)] * y[j];
            }
            y[i] = s / self.r[(i, i)];
        }
        let mut x = vec![0.0; n];
        for (k, &orig) in self.col_perm.iter().enumerate() {
            x[orig] = y[k];
        }
        x
    }

    /// Orthonormal basis for the range of A (columns).
    pub fn range_basis(&self) -> Matrix {
        let m = self.q.nrows();
        Matrix::from_fn(m, self.rank, |i, j| self.q[(i, j)])
    }

    /// Orthonormal basis for null(A^T) = range(A)^perp (columns).
    pub fn null_basis_of_transpose(&self) -> Matrix {
        let m = self.q.nrows();
        Matrix::from_fn(m, m - self.rank, |i, j| self.q[(i, self.rank + j)])
    }
}
