//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured quantities (run with --nocapture to see them).

use std::time::Instant;

use subdual::builtin;
use subdual::certify::{certify, ContDualSummary};
use subdual::cone::svec;
use subdual::dirichlet::{
    affine_invariance_test, approximate_halfline, default_schedule, dirichlet_probe,
    finiteness_experiment, halfline_distance, ConvexBody, HalfLineQuery, MixedLattice,
    ProbeOutcome, SideClass, UnimodularMap,
};
use subdual::dual::{
    build_binary_perturbation, build_fstar, build_w_perturbation, check_dual_feasibility,
    evaluate, generate_cut, verify_cut, DualFunction, FeasibilityVerdict, Inequality,
};
use subdual::ipm::{check_dual_feasible, solve_continuous, verify_farkas, DualFeasibility, SolveStatus};
use subdual::linalg::{dot, Matrix};
use subdual::mip::{solve_mip, IntegerBox, MipStatus, ValueFunctionOracle};
use subdual::model::Instance;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[test]
fn criterion_1_example_1_reproduction() {
    let start = Instant::now();
    let inst = builtin::example_1();
    let box_ = IntegerBox::symmetric(2, 10);

    // primal optimal value 0, exact on the enumerated optimum
    let res = solve_mip(&inst, &box_).unwrap();
    assert_eq!(res.status, MipStatus::Optimal);
    assert!(res.value.abs() <= 1e-9, "value {}", res.value);

    // continuous-dual infeasibility certificate verifying at 1e-6
    let cert = match check_dual_feasible(&inst) {
        DualFeasibility::Infeasible(cert) => cert,
        other => panic!("expected an infeasibility certificate, got {other:?}"),
    };
    let report = verify_farkas(&inst, &cert, 1e-6).unwrap();
    assert!(report.pass, "{report:?}");

    // Eq-(13) witness table for eps = 0.5: objectives 0, -1, ..., -10 with
    // margins >= -1e-7 at x1 = ceil((x2^2 - eps^2) / (2 eps))
    let eps = 0.5;
    for k in 0..=10i64 {
        let x2 = -k;
        let x1 = (((x2 * x2) as f64 - eps * eps) / (2.0 * eps)).ceil() as i64;
        let slack = [x1 as f64, x2 as f64, x1 as f64 + eps];
        let margin = inst.cone.margin(&slack).unwrap();
        assert!(margin >= -1e-7, "k={k}: margin {margin}");
        assert_eq!(x2, -k); // objective value is x2 itself
    }

    // the certifier ties it together with the DualInfeasible verdict
    let report = certify(&inst, None, &box_).unwrap();
    assert_eq!(report.verdict.to_string(), "DualInfeasible");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 2.0, "took {elapsed:?}");
    println!("criterion 1 PASS: example 1 reproduced in {elapsed:?}");
}

#[test]
fn criterion_2_example_2_reproduction() {
    let start = Instant::now();
    let inst = builtin::example_2();
    let box_ = IntegerBox::symmetric(2, 5);

    // lambda = svec(e1 e1') passes the dual feasibility check exactly
    let lam = builtin::example_2_lambda();
    let f = DualFunction::Linear(lam.clone());
    let feas = check_dual_feasibility(&f, &inst, 1e-8, 200).unwrap();
    assert_eq!(feas.verdict, FeasibilityVerdict::Feasible, "{feas:?}");

    // evaluate(Linear(lambda), b) = -1
    let fb = evaluate(&f, &inst.b).unwrap();
    assert!((fb + 1.0).abs() <= 1e-9, "f(b) = {fb}");

    // solve_mip value 0 on [-5, 5]^2
    let res = solve_mip(&inst, &box_).unwrap();
    assert_eq!(res.status, MipStatus::Optimal);
    assert!(res.value.abs() <= 1e-9);

    // golden verdict string and zero gap with the value-function dual
    let report = certify(&inst, None, &box_).unwrap();
    assert_eq!(
        report.verdict.to_string(),
        "StrongDual (Theorem 3 via Corollary 1)"
    );
    assert!(report.gap.defined);
    assert!(report.gap.gap.abs() <= 1e-6, "gap {:?}", report.gap);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 2 PASS: example 2 reproduced in {elapsed:?}");
}

#[test]
fn criterion_3_ipm_sanity() {
    let res = solve_continuous(&builtin::sqrt2_soc());
    assert_eq!(res.status, SolveStatus::Optimal);
    assert!(
        (res.objective - std::f64::consts::SQRT_2).abs() <= 1e-6,
        "sqrt2 objective {}",
        res.objective
    );
    assert!(res.iterations <= 60, "{} iterations", res.iterations);

    let res = solve_continuous(&builtin::psd_margin());
    assert_eq!(res.status, SolveStatus::Optimal);
    let expect = -(2.0 - std::f64::consts::SQRT_2);
    assert!(
        (res.objective - expect).abs() <= 1e-6,
        "psd objective {} vs {expect}",
        res.objective
    );
    println!("criterion 3 PASS: sqrt(2) and analytic PSD margin within 1e-6");
}

#[test]
fn criterion_4_weak_duality_random_suite() {
    let mut lambda_found = 0;
    let mut optimal = 0;
    for seed in 0..100u64 {
        let cfg = builtin::RandomConfig {
            max_n1: 3,
            max_n2: 2,
            dual_feasible: seed % 2 == 0,
        };
        let inst = builtin::random_instance(seed, cfg);
        let box_ = IntegerBox::symmetric(inst.n1(), 3);
        let mip = match solve_mip(&inst, &box_) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if mip.status != MipStatus::Optimal {
            continue;
        }
        optimal += 1;
        if let DualFeasibility::Feasible(lam) = check_dual_feasible(&inst) {
            lambda_found += 1;
            // lambda lives on the relaxation (bound rows included for
            // binaries; none here), so b matches the instance rhs
            let bound = dot(&inst.b, &lam[..inst.m()]);
            assert!(
                bound <= mip.value + 1e-6,
                "seed {seed}: weak duality violated: {bound} > {}",
                mip.value
            );
        }
    }
    assert!(optimal >= 50, "only {optimal} optimal instances");
    assert!(lambda_found >= 25, "only {lambda_found} dual multipliers found");
    println!(
        "criterion 4 PASS: zero weak-duality violations over {optimal} optimal / {lambda_found} with multipliers"
    );
}

fn sample_oracle_properties(
    inst: &Instance,
    box_: &IntegerBox,
    pairs: usize,
    seed: u64,
) -> (usize, usize) {
    let oracle = ValueFunctionOracle::new(inst.clone(), box_.clone()).unwrap();
    let m = inst.m();
    let scale = inst
        .a
        .norm_inf()
        .max(inst.g.norm_inf())
        .max(inst.b.iter().fold(0.0f64, |a, &v| a.max(v.abs())))
        .max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sub_checked = 0;
    let mut mono_checked = 0;
    for _ in 0..pairs {
        let u: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
        let v: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
        let uv: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let (fu, fv, fuv) = (
            oracle.value(&u).unwrap(),
            oracle.value(&v).unwrap(),
            oracle.value(&uv).unwrap(),
        );
        if fu.is_finite() && fv.is_finite() && fuv.is_finite() {
            sub_checked += 1;
            assert!(
                fuv <= fu + fv + 1e-6,
                "subadditivity violated: {fuv} > {fu} + {fv}"
            );
        }
    }
    for _ in 0..pairs {
        let w: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
        let raw: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
        let k = inst.cone.project(&raw).unwrap();
        let wk: Vec<f64> = w.iter().zip(&k).map(|(a, b)| a + b).collect();
        let (fw, fwk) = (oracle.value(&w).unwrap(), oracle.value(&wk).unwrap());
        if fw.is_finite() && fwk.is_finite() {
            mono_checked += 1;
            assert!(
                fwk >= fw - 1e-6,
                "K-monotonicity violated: {fwk} < {fw}"
            );
        }
    }
    // theta(b - v) <= theta(b) for v in K
    let theta_b = oracle.value(&inst.b).unwrap();
    if theta_b.is_finite() {
        for _ in 0..20 {
            let raw: Vec<f64> = (0..m).map(|_| gaussian(&mut rng) * scale).collect();
            let v = inst.cone.project(&raw).unwrap();
            let bv: Vec<f64> = inst.b.iter().zip(&v).map(|(a, b)| a - b).collect();
            let theta_bv = oracle.value(&bv).unwrap();
            assert!(
                theta_bv <= theta_b + 1e-9,
                "theta(b - v) = {theta_bv} > theta(b) = {theta_b}"
            );
        }
    }
    (sub_checked, mono_checked)
}

#[test]
fn criterion_5_value_function_properties() {
    // the rounding oracle
    let (s, m) = sample_oracle_properties(
        &builtin::ceil_instance(),
        &IntegerBox::symmetric(1, 100),
        200,
        11,
    );
    assert!(s >= 150 && m >= 150, "ceil oracle: {s} / {m} finite samples");

    // 20 random conic oracles (pure-integer so the enumeration stays fast)
    for seed in 0..20u64 {
        let cfg = builtin::RandomConfig {
            max_n1: 2,
            max_n2: 0,
            dual_feasible: true,
        };
        let inst = builtin::random_instance(seed + 300, cfg);
        let box_ = IntegerBox::symmetric(inst.n1(), 6);
        sample_oracle_properties(&inst, &box_, 200, seed + 1000);
    }
    println!("criterion 5 PASS: sampled subadditivity, K-monotonicity, theta(b-v) <= theta(b)");
}

#[test]
fn criterion_6_perturbation_equivalences() {
    // Eq-(6) value equality on a 5-instance binary suite
    let mut suite = vec![builtin::knapsack_binary()];
    for seed in 0..4u64 {
        suite.push(builtin::random_binary_instance(seed));
    }
    for (i, inst) in suite.iter().enumerate() {
        let box_ = IntegerBox::symmetric(inst.n1(), 1);
        let original = solve_mip(inst, &box_).unwrap();
        for eps in [0.25, 0.5, 0.9] {
            let pert = build_binary_perturbation(inst, eps).unwrap();
            let pbox = IntegerBox::symmetric(pert.n1(), 3);
            let perturbed = solve_mip(&pert, &pbox).unwrap();
            assert_eq!(original.status, perturbed.status, "instance {i} eps {eps}");
            if original.value.is_finite() {
                assert!(
                    (original.value - perturbed.value).abs() <= 1e-9,
                    "instance {i} eps {eps}: {} vs {}",
                    original.value,
                    perturbed.value
                );
            }
        }
    }

    // Eq-(8) on Example 2 with v = I: M = 2 and unchanged optimum
    let inst = builtin::example_2();
    let v = svec(&Matrix::identity(3));
    let box_ = IntegerBox::symmetric(2, 5);
    let (pert, spec) = build_w_perturbation(&inst, &v, &box_).unwrap();
    assert_eq!(spec.m_coeff, 2.0);
    let mut lower = box_.lower.clone();
    let mut upper = box_.upper.clone();
    lower.push(0);
    upper.push(1);
    let res = solve_mip(&pert, &IntegerBox::new(lower, upper).unwrap()).unwrap();
    assert_eq!(res.status, MipStatus::Optimal);
    assert!(res.value.abs() <= 1e-9);

    // f* on Example 2 (eps = 1/2, v = I): f*(b) = 0 and sampled feasibility
    let fstar = build_fstar(&inst, 0.5, &v, &box_).unwrap();
    let fb = evaluate(&fstar, &inst.b).unwrap();
    assert!(fb.abs() <= 1e-6, "f*(b) = {fb}");
    let feas = check_dual_feasibility(&fstar, &inst, 1e-6, 60).unwrap();
    assert_eq!(
        feas.verdict,
        FeasibilityVerdict::FeasibleUpToSampling,
        "{feas:?}"
    );
    println!("criterion 6 PASS: Eq-(6)/Eq-(8) equivalences and f*(b) = 0");
}

#[test]
fn criterion_7_cut_correctness() {
    let inst = builtin::two_x_le_3();
    let box_ = IntegerBox::symmetric(1, 10);

    // Linear(1/2): -x >= -1.5, i.e. x <= 1.5
    let half = DualFunction::Linear(vec![0.5]);
    let cut = generate_cut(&half, &inst).unwrap();
    assert!((cut.pi[0] + 1.0).abs() <= 1e-12);
    assert!((cut.pi0 + 1.5).abs() <= 1e-12);
    assert!(verify_cut(&cut, &inst, &box_).unwrap());

    // value function: x <= 1, integer-tight, separates x = 1.5
    let oracle = ValueFunctionOracle::new(inst.clone(), IntegerBox::symmetric(1, 100)).unwrap();
    let vf = DualFunction::ValueFn(oracle);
    let cut = generate_cut(&vf, &inst).unwrap();
    assert!((cut.pi[0] + 1.0).abs() <= 1e-12);
    assert!((cut.pi0 + 1.0).abs() <= 1e-12);
    assert!(verify_cut(&cut, &inst, &box_).unwrap());
    let fractional = 1.5f64;
    assert!(
        cut.pi[0] * fractional < cut.pi0 - 1e-9,
        "value-function cut does not separate x = 1.5"
    );

    // cuts generated across the random suite stay valid
    let mut generated = 0;
    for seed in 0..20u64 {
        let cfg = builtin::RandomConfig {
            max_n1: 2,
            max_n2: 1,
            dual_feasible: true,
        };
        let inst = builtin::random_instance(seed + 500, cfg);
        let box_ = IntegerBox::symmetric(inst.n1(), 3);
        if let DualFeasibility::Feasible(lam) = check_dual_feasible(&inst) {
            let f = DualFunction::Linear(lam[..inst.m()].to_vec());
            if let Ok(cut) = generate_cut(&f, &inst) {
                generated += 1;
                assert!(
                    verify_cut(&cut, &inst, &box_).unwrap(),
                    "seed {seed}: linear cut violated"
                );
            }
        }
        let oracle = ValueFunctionOracle::new(inst.clone(), box_.clone()).unwrap();
        let f = DualFunction::ValueFn(oracle);
        if let Ok(cut) = generate_cut(&f, &inst) {
            generated += 1;
            assert!(
                verify_cut(&cut, &inst, &box_).unwrap(),
                "seed {seed}: value-function cut violated"
            );
        }
    }
    assert!(generated >= 10, "only {generated} cuts generated");
    println!("criterion 7 PASS: golden cuts and {generated} random-suite cuts verified");
}

#[test]
fn criterion_8_dirichlet_suite() {
    let m2 = MixedLattice::standard(2);
    let sqrt2 = std::f64::consts::SQRT_2;

    // half-line witness at bound 20, re-verified independently
    let q = HalfLineQuery::new(vec![0.0, 0.0], vec![1.0, sqrt2], 0.1, 5.0).unwrap();
    let w = approximate_halfline(&m2, &q, 20).unwrap().expect("witness");
    let dist = halfline_distance(&w, &q.z, &q.r, q.gamma);
    assert!(dist < 0.1, "distance {dist}");
    assert!(w.iter().all(|v| v.fract() == 0.0), "witness off-lattice: {w:?}");

    // irrational ray: exact counterexample certificate
    let ray = ConvexBody::ShiftedCone {
        apex: vec![0.0, 0.0],
        generators: vec![vec![1.0, sqrt2]],
    };
    let q = HalfLineQuery::new(vec![0.0, 0.0], vec![1.0, sqrt2], 0.1, 1.0).unwrap();
    let out = dirichlet_probe(&ray, &m2, &[q], 30).unwrap();
    assert!(
        matches!(out[0], ProbeOutcome::Counterexample { .. }),
        "{:?}",
        out[0]
    );

    // rational polyhedron and ball suites: witnesses for every query at 50
    let poly = ConvexBody::Polyhedron {
        rows: vec![(vec![0.0, 1.0], 0.0), (vec![1.0, -1.0], 0.0)],
        rational: vec![true, true],
    };
    let poly_queries = vec![
        HalfLineQuery::new(vec![1.0, 0.0], vec![2.0, 1.0], 0.25, 3.0).unwrap(),
        HalfLineQuery::new(vec![1.0, 0.0], vec![1.0, 0.0], 0.25, 5.0).unwrap(),
        HalfLineQuery::new(vec![2.0, 1.0], vec![1.0, 1.0], 0.25, 2.0).unwrap(),
        HalfLineQuery::new(vec![3.0, 2.0], vec![3.0, 1.0], 0.5, 4.0).unwrap(),
    ];
    for (i, o) in dirichlet_probe(&poly, &m2, &poly_queries, 50)
        .unwrap()
        .iter()
        .enumerate()
    {
        assert!(matches!(o, ProbeOutcome::Witness { .. }), "poly query {i}: {o:?}");
    }
    let ball = ConvexBody::Ball {
        center: vec![0.3, -0.2],
        radius: 4.0,
    };
    let ball_queries = vec![
        HalfLineQuery::new(vec![0.0, 0.0], vec![0.0, 0.0], 0.5, 0.0).unwrap(),
        HalfLineQuery::new(vec![1.0, 1.0], vec![0.0, 0.0], 1.0, 0.0).unwrap(),
        HalfLineQuery::new(vec![-2.0, 0.0], vec![0.0, 0.0], 0.75, 0.0).unwrap(),
    ];
    for (i, o) in dirichlet_probe(&ball, &m2, &ball_queries, 50)
        .unwrap()
        .iter()
        .enumerate()
    {
        assert!(matches!(o, ProbeOutcome::Witness { .. }), "ball query {i}: {o:?}");
    }

    // shear invariance
    let shear = UnimodularMap::new(
        Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]),
        vec![0.0, 0.0],
    )
    .unwrap();
    let rep = affine_invariance_test(&poly, &m2, &shear, &poly_queries, 50).unwrap();
    assert!(rep.agree, "{rep:?}");
    println!("criterion 8 PASS: half-line, counterexample, suites and shear invariance");
}

#[test]
fn criterion_9_finiteness_experiments() {
    let m2 = MixedLattice::standard(2);
    let schedule = default_schedule();
    let big_box = |r: f64| ConvexBody::Polyhedron {
        rows: vec![
            (vec![1.0, 0.0], -r),
            (vec![-1.0, 0.0], -r),
            (vec![0.0, 1.0], -r),
            (vec![0.0, -1.0], -r),
        ],
        rational: vec![true; 4],
    };
    let pairs: Vec<(ConvexBody, ConvexBody, Vec<f64>)> = vec![
        (
            ConvexBody::Ball {
                center: vec![0.0, 0.0],
                radius: 10.0,
            },
            big_box(100.0),
            vec![1.0, 0.0],
        ),
        (
            ConvexBody::Ball {
                center: vec![0.5, 0.5],
                radius: 6.0,
            },
            big_box(50.0),
            vec![1.0, 1.0],
        ),
        (
            ConvexBody::Polyhedron {
                rows: vec![(vec![0.0, -1.0], -5.0)],
                rational: vec![true],
            },
            big_box(100.0),
            vec![0.0, 1.0],
        ),
        (
            ConvexBody::Polyhedron {
                rows: vec![(vec![0.0, 1.0], -0.5)],
                rational: vec![false],
            },
            ConvexBody::Polyhedron {
                rows: vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
                rational: vec![true, true],
            },
            vec![1.0, 1.0],
        ),
        (
            ConvexBody::Ellipsoid {
                shape: Matrix::from_rows(&[vec![0.05, 0.0], vec![0.0, 0.1]]),
                center: vec![0.0, 0.0],
            },
            big_box(100.0),
            vec![1.0, 0.0],
        ),
        (
            ConvexBody::Polyhedron {
                rows: vec![(vec![1.0, 1.0], -3.0)],
                rational: vec![true],
            },
            ConvexBody::Ball {
                center: vec![0.0, 0.0],
                radius: 8.0,
            },
            vec![-1.0, -1.0],
        ),
        (
            ConvexBody::Polyhedron {
                rows: vec![(vec![-1.0, 0.0], -7.0)],
                rational: vec![true],
            },
            big_box(64.0),
            vec![1.0, 0.0],
        ),
        (
            ConvexBody::Ball {
                center: vec![-1.0, 2.0],
                radius: 9.0,
            },
            ConvexBody::Polyhedron {
                rows: vec![(vec![0.0, 1.0], 0.0)],
                rational: vec![true],
            },
            vec![0.0, 1.0],
        ),
        (
            ConvexBody::Polyhedron {
                rows: vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
                rational: vec![false, false],
            },
            big_box(37.0),
            vec![1.0, 2.0],
        ),
        (
            ConvexBody::Polyhedron {
                rows: vec![(vec![0.0, -1.0], -4.0), (vec![-1.0, 0.0], -6.0)],
                rational: vec![true, true],
            },
            ConvexBody::Polyhedron {
                rows: vec![(vec![0.0, 1.0], 0.0)],
                rational: vec![true],
            },
            vec![1.0, 1.0],
        ),
    ];
    assert_eq!(pairs.len(), 10);
    for (i, (x, p, c)) in pairs.iter().enumerate() {
        let rep = finiteness_experiment(x, p, &m2, c, &schedule).unwrap();
        assert!(rep.hypothesis_ok, "pair {i}: hypothesis fails: {rep:?}");
        assert!(
            !(rep.s_class == SideClass::Stabilizing && rep.p_class == SideClass::Growing),
            "pair {i}: S stabilizes while P grows: {rep:?}"
        );
        assert!(rep.consistent);
    }
    println!("criterion 9 PASS: 10 finiteness pairs, no forbidden pattern");
}

// keep the helper type referenced so the suite compiles when criteria evolve
#[allow(dead_code)]
fn _cut_type_witness(_: &Inequality) {}
