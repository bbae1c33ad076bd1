//! Cone algebra for products of regular cones: nonnegative orthants,
//! second-order (Lorentz) cones and small PSD cones in scaled-triangle
//! ("svec") coordinates.
//!
//! Conventions:
//! - Second-order blocks store the scalar component LAST: `(head..., t)`
//!   is in the cone iff `||head||_2 <= t`.
//! - PSD blocks of order `p` occupy `p(p+1)/2` coordinates in column-major
//!   upper-triangle order `(11, 12, 22, 13, 23, 33, ...)` with off-diagonal
//!   entries scaled by sqrt(2), so the Euclidean inner product of two svec
//!   vectors equals the trace inner product of the matrices. Every block is
//!   then self-dual under the plain dot product.
//!
//! Membership is exposed through a raw signed margin; thresholds belong to
//! callers.

use crate::error::CoreError;
use crate::linalg::{sym_eigen, Matrix};
use serde::{Deserialize, Serialize};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// One regular cone block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeBlock {
    /// Nonnegative orthant of the given dimension.
    Orthant { dim: usize },
    /// Lorentz cone `{ x : ||x[..dim-1]|| <= x[dim-1] }`, dim >= 2.
    SecondOrder { dim: usize },
    /// PSD matrices of the given order in svec coordinates.
    PsdTriangle { order: usize },
}

impl ConeBlock {
    pub fn ambient_dim(&self) -> usize {
        match *self {
            ConeBlock::Orthant { dim } => dim,
            ConeBlock::SecondOrder { dim } => dim,
            ConeBlock::PsdTriangle { order } => order * (order + 1) / 2,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        match *self {
            ConeBlock::Orthant { dim } if dim >= 1 => Ok(()),
            ConeBlock::SecondOrder { dim } if dim >= 2 => Ok(()),
            ConeBlock::PsdTriangle { order } if (1..=16).contains(&order) => Ok(()),
            _ => Err(CoreError::InvalidCone(format!("invalid cone block {self:?}"))),
        }
    }

    /// Signed membership margin of a block-local vector.
    pub fn margin(&self, s: &[f64]) -> f64 {
        debug_assert_eq!(s.len(), self.ambient_dim());
        match *self {
            ConeBlock::Orthant { .. } => s.iter().cloned().fold(f64::INFINITY, f64::min),
            ConeBlock::SecondOrder { dim } => {
                let head = &s[..dim - 1];
                s[dim - 1] - crate::linalg::norm2(head)
            }
            ConeBlock::PsdTriangle { order } => {
                let (ev, _) = sym_eigen(&smat(s, order));
                ev[0]
            }
        }
    }

    /// Euclidean projection of a block-local vector onto the block.
    pub fn project(&self, s: &[f64]) -> Vec<f64> {
        debug_assert_eq!(s.len(), self.ambient_dim());
        match *self {
            ConeBlock::Orthant { .. } => s.iter().map(|&v| v.max(0.0)).collect(),
            ConeBlock::SecondOrder { dim } => {
                let t = s[dim - 1];
                let head = &s[..dim - 1];
                let r = crate::linalg::norm2(head);
                if r <= t {
                    s.to_vec()
                } else if r <= -t {
                    vec![0.0; dim]
                } else {
                    let a = (r + t) / 2.0;
                    let mut out: Vec<f64> = head.iter().map(|&h| h * (a / r)).collect();
                    out.push(a);
                    out
                }
            }
            ConeBlock::PsdTriangle { order } => {
                let (ev, vecs) = sym_eigen(&smat(s, order));
                let mut out = Matrix::zeros(order, order);
                for k in 0..order {
                    let lam = ev[k].max(0.0);
                    if lam > 0.0 {
                        for i in 0..order {
                            for j in 0..order {
                                out[(i, j)] += lam * vecs[(i, k)] * vecs[(j, k)];
                            }
                        }
                    }
                }
                svec(&out)
            }
        }
    }

    /// Canonical strictly interior unit element.
    pub fn interior_direction(&self) -> Vec<f64> {
        match *self {
            ConeBlock::Orthant { dim } => vec![1.0; dim],
            ConeBlock::SecondOrder { dim } => {
                let mut e = vec![0.0; dim];
                e[dim - 1] = 1.0;
                e
            }
            ConeBlock::PsdTriangle { order } => svec(&Matrix::identity(order)),
        }
    }
}

/// Ordered product of cone blocks; self-dual under the svec inner product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeProduct {
    blocks: Vec<ConeBlock>,
}

impl ConeProduct {
    pub fn new(blocks: Vec<ConeBlock>) -> Result<Self, CoreError> {
        for b in &blocks {
            b.validate()?;
        }
        Ok(ConeProduct { blocks })
    }

    pub fn blocks(&self) -> &[ConeBlock] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.ambient_dim()).sum()
    }

    /// Block index ranges in ambient coordinates.
    pub fn block_ranges(&self) -> Vec<(ConeBlock, std::ops::Range<usize>)> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut at = 0;
        for &b in &self.blocks {
            let d = b.ambient_dim();
            out.push((b, at..at + d));
            at += d;
        }
        out
    }

    fn check_dim(&self, s: &[f64]) -> Result<(), CoreError> {
        if s.len() != self.total_dim() {
            return Err(CoreError::DimensionMismatch {
                what: "cone vector".into(),
                expected: self.total_dim(),
                got: s.len(),
            });
        }
        Ok(())
    }

    /// Minimum over blocks of the block margin. `>= 0` iff `s` is in the cone
    /// (up to floating tolerance decided by the caller), `> 0` iff interior.
    pub fn margin(&self, s: &[f64]) -> Result<f64, CoreError> {
        self.check_dim(s)?;
        let mut m = f64::INFINITY;
        for (b, r) in self.block_ranges() {
            m = m.min(b.margin(&s[r]));
        }
        Ok(m)
    }

    /// Blockwise Euclidean projection onto the cone.
    pub fn project(&self, s: &[f64]) -> Result<Vec<f64>, CoreError> {
        self.check_dim(s)?;
        let mut out = Vec::with_capacity(s.len());
        for (b, r) in self.block_ranges() {
            out.extend(b.project(&s[r]));
        }
        Ok(out)
    }

    /// Canonical strictly interior element e_K (all-ones orthant, SOC apex
    /// direction, identity matrices).
    pub fn interior_direction(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_dim());
        for b in &self.blocks {
            out.extend(b.interior_direction());
        }
        out
    }

    /// Concatenation of two products.
    pub fn concat(&self, other: &ConeProduct) -> ConeProduct {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        ConeProduct { blocks }
    }

    pub fn push_block(&mut self, b: ConeBlock) {
        b.validate().expect("valid block");
        self.blocks.push(b);
    }

    /// Barrier degree (Jordan rank): orthant dim + 2 per SOC + order per PSD.
    pub fn barrier_degree(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| match *b {
                ConeBlock::Orthant { dim } => dim,
                ConeBlock::SecondOrder { .. } => 2,
                ConeBlock::PsdTriangle { order } => order,
            })
            .sum()
    }
}

pub fn svec_dim(order: usize) -> usize {
    order * (order + 1) / 2
}

/// Scaled vectorization of a symmetric matrix (upper triangle, column-major,
/// off-diagonals times sqrt(2)).
pub fn svec(m: &Matrix) -> Vec<f64> {
    let p = m.nrows();
    debug_assert_eq!(p, m.ncols());
    let mut out = Vec::with_capacity(svec_dim(p));
    for j in 0..p {
        for i in 0..=j {
            if i == j {
                out.push(m[(i, j)]);
            } else {
                out.push(0.5 * (m[(i, j)] + m[(j, i)]) * SQRT2);
            }
        }
    }
    out
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], order: usize) -> Matrix {
    debug_assert_eq!(v.len(), svec_dim(order));
    let mut m = Matrix::zeros(order, order);
    let mut k = 0;
    for j in 0..order {
        for i in 0..=j {
            if i == j {
                m[(i, j)] = v[k];
            } else {
                let val = v[k] / SQRT2;
                m[(i, j)] = val;
                m[(j, i)] = val;
            }
            k += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;

    fn l3() -> ConeProduct {
        ConeProduct::new(vec![ConeBlock::SecondOrder { dim: 3 }]).unwrap()
    }

    #[test]
    fn margin_l3_apex_and_boundary() {
        let k = l3();
        assert_eq!(k.margin(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        // boundary point (1,0,1): margin = 1 - ||(1,0)|| = 0
        assert!(k.margin(&[1.0, 0.0, 1.0]).unwrap().abs() < 1e-15);
        assert!(k.margin(&[0.0, 0.0, 1.0]).unwrap() > 0.0);
    }

    #[test]
    fn margin_psd_diag() {
        // eigenvalues of diag(-1, 0, 0) by hand: margin -1
        let k = ConeProduct::new(vec![ConeBlock::PsdTriangle { order: 3 }]).unwrap();
        let mut m = Matrix::zeros(3, 3);
        m[(0, 0)] = -1.0;
        let s = svec(&m);
        assert!((k.margin(&s).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn project_orthant_clips() {
        let k = ConeProduct::new(vec![ConeBlock::Orthant { dim: 2 }]).unwrap();
        assert_eq!(k.project(&[-1.0, 2.0]).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn project_soc_polar_interior_to_apex() {
        let k = l3();
        let p = k.project(&[0.0, 0.0, -1.0]).unwrap();
        assert!(crate::linalg::norm2(&p) < 1e-15);
    }

    #[test]
    fn project_psd_clips_negative_eigenvalue() {
        // [[0,1],[1,0]] has eigenvalues +-1; clipping -1 gives [[.5,.5],[.5,.5]]
        let k = ConeProduct::new(vec![ConeBlock::PsdTriangle { order: 2 }]).unwrap();
        let mut m = Matrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        let p = k.project(&svec(&m)).unwrap();
        let pm = smat(&p, 2);
        for i in 0..2 {
            for j in 0..2 {
                assert!((pm[(i, j)] - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn interior_direction_margins() {
        let k = ConeProduct::new(vec![ConeBlock::Orthant { dim: 3 }]).unwrap();
        assert_eq!(k.interior_direction(), vec![1.0, 1.0, 1.0]);
        let k = l3();
        assert_eq!(k.interior_direction(), vec![0.0, 0.0, 1.0]);
        let k = ConeProduct::new(vec![ConeBlock::PsdTriangle { order: 3 }]).unwrap();
        let e = k.interior_direction();
        assert!((k.margin(&e).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn svec_inner_product_matches_trace() {
        let a = Matrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 3.0]]);
        let b = Matrix::from_rows(&[vec![1.0, 4.0], vec![4.0, 0.5]]);
        let tr = {
            let ab = a.matmul(&b);
            ab[(0, 0)] + ab[(1, 1)]
        };
        assert!((dot(&svec(&a), &svec(&b)) - tr).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let k = l3();
        assert!(k.margin(&[1.0, 2.0]).is_err());
        assert!(k.project(&[1.0, 2.0]).is_err());
    }
}
