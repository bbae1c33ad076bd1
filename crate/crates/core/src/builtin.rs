//! Embedded reference instances used by the CLI, tests and documentation.
//!
//! The instances are constructed in code rather than loaded from files so
//! that golden tests do not depend on the working directory.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{svec, ConeBlock, ConeProduct};
use crate::linalg::Matrix;
use crate::model::{Instance, Rational, RationalRow};

/// Lorentz-cone instance `min x2  s.t. (x1, x2, x1) in L^3, x in Z^2`.
/// Feasible (x2 = 0 forced) but not strictly feasible; its subadditive dual
/// is infeasible.
pub fn example_1() -> Instance {
    let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
    let cone = ConeProduct::new(vec![ConeBlock::SecondOrder { dim: 3 }]).unwrap();
    Instance::new(
        a,
        Matrix::zeros(3, 0),
        vec![0.0; 3],
        vec![0.0, 1.0],
        vec![],
        cone,
        vec![false, false],
    )
    .unwrap()
}

/// PSD instance `min x2  s.t. x1*E22 + x2*(E11+E23+E32) >= -E11 (psd order 3)`.
/// Feasible (x2 = 0 forced), not strictly feasible, and its subadditive dual
/// is strong: Lambda = e1 e1' is feasible for the conic dual of the
/// relaxation.
pub fn example_2() -> Instance {
    let a1 = {
        let mut m = Matrix::zeros(3, 3);
        m[(1, 1)] = 1.0;
        svec(&m)
    };
    let a2 = {
        let mut m = Matrix::zeros(3, 3);
        m[(0, 0)] = 1.0;
        m[(1, 2)] = 1.0;
        m[(2, 1)] = 1.0;
        svec(&m)
    };
    let b = {
        let mut m = Matrix::zeros(3, 3);
        m[(0, 0)] = -1.0;
        svec(&m)
    };
    let a = Matrix::from_fn(6, 2, |i, j| if j == 0 { a1[i] } else { a2[i] });
    let cone = ConeProduct::new(vec![ConeBlock::PsdTriangle { order: 3 }]).unwrap();
    Instance::new(
        a,
        Matrix::zeros(6, 0),
        b,
        vec![0.0, 1.0],
        vec![],
        cone,
        vec![false, false],
    )
    .unwrap()
}

/// The conic dual multiplier `svec(e1 e1')` used with [`example_2`].
pub fn example_2_lambda() -> Vec<f64> {
    let mut m = Matrix::zeros(3, 3);
    m[(0, 0)] = 1.0;
    svec(&m)
}

/// Continuous SOC sanity instance: `min y3 s.t. (y1, y2, y3) in L^3` with
/// y1 = y2 = 1 fixed through pairs of orthant rows. Optimum sqrt(2).
pub fn sqrt2_soc() -> Instance {
    // orthant rows: y1 >= 1, -y1 >= -1, y2 >= 1, -y2 >= -1; then the L^3 rows
    let g = Matrix::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ]);
    let b = vec![1.0, -1.0, 1.0, -1.0, 0.0, 0.0, 0.0];
    let cone = ConeProduct::new(vec![
        ConeBlock::Orthant { dim: 4 },
        ConeBlock::SecondOrder { dim: 3 },
    ])
    .unwrap();
    Instance::new(
        Matrix::zeros(7, 0),
        g,
        b,
        vec![],
        vec![0.0, 0.0, 1.0],
        cone,
        vec![],
    )
    .unwrap()
}

/// Continuous PSD sanity instance: `min -t s.t. C - t I psd` for the
/// tridiagonal C with eigenvalues {2 - sqrt(2), 2, 2 + sqrt(2)}; the optimum
/// is -(2 - sqrt(2)), the analytic smallest eigenvalue.
pub fn psd_margin() -> Instance {
    let c_mat = Matrix::from_rows(&[
        vec![2.0, 1.0, 0.0],
        vec![1.0, 2.0, 1.0],
        vec![0.0, 1.0, 2.0],
    ]);
    let id = svec(&Matrix::identity(3));
    let bvec: Vec<f64> = svec(&c_mat).iter().map(|v| -v).collect();
    let g = Matrix::from_fn(6, 1, |i, _| -id[i]);
    let cone = ConeProduct::new(vec![ConeBlock::PsdTriangle { order: 3 }]).unwrap();
    Instance::new(
        Matrix::zeros(6, 0),
        g,
        bvec,
        vec![],
        vec![-1.0],
        cone,
        vec![],
    )
    .unwrap()
}

/// One-dimensional rounding instance `min x s.t. x >= h, x in Z`; its value
/// function is ceil(h).
pub fn ceil_instance() -> Instance {
    let cone = ConeProduct::new(vec![ConeBlock::Orthant { dim: 1 }]).unwrap();
    Instance::new(
        Matrix::from_rows(&[vec![1.0]]),
        Matrix::zeros(1, 0),
        vec![0.0],
        vec![1.0],
        vec![],
        cone,
        vec![false],
    )
    .unwrap()
}

/// Cut-generation instance `min -x s.t. -2x >= -3, x in Z` (i.e. 2x <= 3).
pub fn two_x_le_3() -> Instance {
    let cone = ConeProduct::new(vec![ConeBlock::Orthant { dim: 1 }]).unwrap();
    Instance::new(
        Matrix::from_rows(&[vec![-2.0]]),
        Matrix::zeros(1, 0),
        vec![-3.0],
        vec![-1.0],
        vec![],
        cone,
        vec![false],
    )
    .unwrap()
}

/// Small binary knapsack `min -x1 - 2 x2 s.t. x1 + x2 <= 1, x in {0,1}^2`.
pub fn knapsack_binary() -> Instance {
    let cone = ConeProduct::new(vec![ConeBlock::Orthant { dim: 1 }]).unwrap();
    Instance::new(
        Matrix::from_rows(&[vec![-1.0, -1.0]]),
        Matrix::zeros(1, 0),
        vec![-1.0],
        vec![-1.0, -2.0],
        vec![],
        cone,
        vec![true, true],
    )
    .unwrap()
}

/// `min x s.t. 0 <= x <= 1, x in Z` with exact rational rows: a bounded
/// rational box instance.
pub fn rational_box_mip() -> Instance {
    let cone = ConeProduct::new(vec![ConeBlock::Orthant { dim: 2 }]).unwrap();
    let mut inst = Instance::new(
        Matrix::from_rows(&[vec![1.0], vec![-1.0]]),
        Matrix::zeros(2, 0),
        vec![0.0, -1.0],
        vec![1.0],
        vec![],
        cone,
        vec![false],
    )
    .unwrap();
    inst.rational_blocks = vec![true];
    inst.rational_rows = vec![
        Some(RationalRow {
            coeffs: vec![Rational { num: 1, den: 1 }],
            rhs: Rational { num: 0, den: 1 },
        }),
        Some(RationalRow {
            coeffs: vec![Rational { num: -1, den: 1 }],
            rhs: Rational { num: -1, den: 1 },
        }),
    ];
    inst
}

/// `min x s.t. x >= -1/2, x in Z`: strictly feasible at every integer >= 0.
pub fn strict_halfline_1d() -> Instance {
    let cone = ConeProduct::new(vec![ConeBlock::Orthant { dim: 1 }]).unwrap();
    Instance::new(
        Matrix::from_rows(&[vec![1.0]]),
        Matrix::zeros(1, 0),
        vec![-0.5],
        vec![1.0],
        vec![],
        cone,
        vec![false],
    )
    .unwrap()
}

/// Configuration for the random desk-scale instance generator.
#[derive(Clone, Copy, Debug)]
pub struct RandomConfig {
    pub max_n1: usize,
    pub max_n2: usize,
    /// Construct c, d as A'lam0, G'lam0 for an interior lam0, making the
    /// dual of the relaxation feasible by construction.
    pub dual_feasible: bool,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_n1: 3,
            max_n2: 2,
            dual_feasible: true,
        }
    }
}

/// Deterministic random instance with m <= 6 and mixed cone blocks; feasible
/// by construction (the right-hand side is built from a feasible point).
pub fn random_instance(seed: u64, cfg: RandomConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = match rng.gen_range(0..5) {
        0 => vec![ConeBlock::Orthant {
            dim: rng.gen_range(1..=3),
        }],
        1 => vec![ConeBlock::SecondOrder { dim: 3 }],
        2 => vec![ConeBlock::PsdTriangle { order: 2 }],
        3 => vec![
            ConeBlock::Orthant {
                dim: rng.gen_range(1..=2),
            },
            ConeBlock::SecondOrder { dim: 3 },
        ],
        _ => vec![
            ConeBlock::Orthant {
                dim: rng.gen_range(1..=3),
            },
            ConeBlock::PsdTriangle { order: 2 },
        ],
    };
    let cone = ConeProduct::new(blocks).unwrap();
    let m = cone.total_dim();
    let n1 = rng.gen_range(1..=cfg.max_n1);
    let n2 = rng.gen_range(0..=cfg.max_n2);
    let coeff = |rng: &mut ChaCha8Rng| (rng.gen_range(-20i32..=20) as f64) / 10.0;
    let a = Matrix::from_fn(m, n1, |_, _| coeff(&mut rng));
    let g = Matrix::from_fn(m, n2, |_, _| coeff(&mut rng));
    // feasible by construction: b = A x0 + G y0 - w with w in K
    let x0: Vec<f64> = (0..n1).map(|_| rng.gen_range(-1i64..=1) as f64).collect();
    let y0: Vec<f64> = (0..n2).map(|_| coeff(&mut rng)).collect();
    let raw: Vec<f64> = (0..m).map(|_| coeff(&mut rng)).collect();
    let w = cone.project(&raw).unwrap();
    let ax = a.matvec(&x0);
    let gy = g.matvec(&y0);
    let b: Vec<f64> = (0..m).map(|i| ax[i] + gy[i] - w[i]).collect();
    let (c, d) = if cfg.dual_feasible {
        let raw: Vec<f64> = (0..m).map(|_| coeff(&mut rng)).collect();
        let mut lam0 = cone.project(&raw).unwrap();
        let e = cone.interior_direction();
        for (l, ei) in lam0.iter_mut().zip(&e) {
            *l += 0.3 * ei;
        }
        (a.tr_matvec(&lam0), g.tr_matvec(&lam0))
    } else {
        (
            (0..n1).map(|_| coeff(&mut rng)).collect(),
            (0..n2).map(|_| coeff(&mut rng)).collect(),
        )
    };
    Instance::new(a, g, b, c, d, cone, vec![false; n1]).unwrap()
}

/// Deterministic random all-binary instance: feasible at a binary point by
/// construction, with a mixed cone block.
pub fn random_binary_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(7));
    let blocks = match rng.gen_range(0..3) {
        0 => vec![ConeBlock::Orthant {
            dim: rng.gen_range(1..=3),
        }],
        1 => vec![ConeBlock::SecondOrder { dim: 3 }],
        _ => vec![ConeBlock::PsdTriangle { order: 2 }],
    };
    let cone = ConeProduct::new(blocks).unwrap();
    let m = cone.total_dim();
    let n1 = rng.gen_range(1..=3);
    let coeff = |rng: &mut ChaCha8Rng| (rng.gen_range(-20i32..=20) as f64) / 10.0;
    let a = Matrix::from_fn(m, n1, |_, _| coeff(&mut rng));
    let x0: Vec<f64> = (0..n1).map(|_| rng.gen_range(0i64..=1) as f64).collect();
    let raw: Vec<f64> = (0..m).map(|_| coeff(&mut rng)).collect();
    let w = cone.project(&raw).unwrap();
    let ax = a.matvec(&x0);
    let b: Vec<f64> = (0..m).map(|i| ax[i] - w[i]).collect();
    let c: Vec<f64> = (0..n1).map(|_| coeff(&mut rng)).collect();
    Instance::new(
        a,
        Matrix::zeros(m, 0),
        b,
        c,
        vec![],
        cone,
        vec![true; n1],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_dimensions() {
        assert_eq!(example_1().m(), 3);
        assert_eq!(example_2().m(), 6);
        assert_eq!(sqrt2_soc().m(), 7);
    }

    #[test]
    fn example_2_lambda_satisfies_columns() {
        let inst = example_2();
        let lam = example_2_lambda();
        let atl = inst.a.tr_matvec(&lam);
        assert!((atl[0] - 0.0).abs() < 1e-15);
        assert!((atl[1] - 1.0).abs() < 1e-15);
        // f(b) = <b, lambda> = -1
        assert!((crate::linalg::dot(&inst.b, &lam) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_instances_are_feasible_by_construction() {
        for seed in 0..20 {
            let inst = random_instance(seed, RandomConfig::default());
            inst.validate().unwrap();
        }
    }
}
