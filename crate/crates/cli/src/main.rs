//! Command-line front end: solve, relax, certify, value tables, cuts,
//! Dirichlet experiments, and built-in reproductions of the two reference
//! instances.
//!
//! Exit codes: 0 definitive result, 1 inconclusive (Unknown/BoxLimited/
//! no-witness), 2 input error, 3 numerical failure.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subdual::certify::{certify, Verdict};
use subdual::dirichlet::{
    affine_invariance_test, approximate_halfline, dirichlet_probe, finiteness_experiment,
    ConvexBody, HalfLineQuery, MixedLattice, ProbeOutcome, UnimodularMap,
};
use subdual::dual::{
    build_fstar, check_dual_feasibility, evaluate, generate_cut, verify_cut, DualFunction,
};
use subdual::ipm::{solve_continuous, verify_certificate, SolveStatus};
use subdual::linalg::Matrix;
use subdual::mip::{solve_mip, IntegerBox, MipStatus, ValueFunctionOracle};
use subdual::model::{parse_instance, Instance, Side};
use subdual::CoreError;

#[derive(Parser)]
#[command(
    name = "subdual",
    version,
    about = "Conic mixed-integer programs and their subadditive duals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Integer box as L,U (all variables) or L1,U1,L2,U2,... (per variable).
    #[arg(long, allow_hyphen_values = true)]
    box_: Option<String>,
    /// Output path for the machine-readable certificate block.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a conic MIP by integer enumeration over a box.
    Solve {
        /// CMIP file path, or - for standard input.
        file: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Solve the continuous relaxation and its conic dual.
    Relax {
        file: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Verification tolerance for the result certificate.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run the strong-duality certifier and print the verdict.
    Certify {
        file: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Cone block split as a comma list of s1/s2 (e.g. s1,s2,s2).
        #[arg(long)]
        split: Option<String>,
    },
    /// Evaluate the value function on right-hand sides read from a file
    /// (one comma- or space-separated vector per line); emits CSV.
    Value {
        file: String,
        #[arg(long)]
        rhs_file: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate a cut from a dual function: linear:<vector-file>, valuefn,
    /// or fstar.
    Cut {
        file: String,
        #[arg(long)]
        function: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Epsilon for the fstar construction.
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Strictly interior direction file for fstar (defaults to e_K).
        #[arg(long)]
        v: Option<String>,
        /// Sample count for the dual feasibility report.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Dirichlet convex set experiments.
    Dirichlet {
        #[command(subcommand)]
        sub: DirichletCmd,
    },
    /// Built-in reproductions of the reference instances (1 or 2).
    Example { which: u32 },
}

#[derive(Subcommand)]
enum DirichletCmd {
    /// Probe the Dirichlet property on a query suite.
    Probe {
        #[arg(long)]
        body: String,
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        queries: String,
        #[arg(long, default_value_t = 50)]
        bound: i64,
        /// Also run the shear-invariance comparison with this unimodular
        /// matrix (comma-separated rows; e.g. 1,1,0,1 for the 2x2 shear).
        #[arg(long)]
        shear: Option<String>,
    },
    /// Search a lattice point near a half-line.
    Halfline {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 20)]
        bound: i64,
    },
    /// Compare sup c.x over X cap S and X cap P across a box schedule.
    Finiteness {
        /// The closed convex set X.
        #[arg(long)]
        body: String,
        /// The Dirichlet convex set P.
        #[arg(long)]
        pbody: String,
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        objective: String,
        #[arg(long, default_value = "10,20,40")]
        schedule: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                CoreError::Numerical(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn read_input(path: &str) -> Result<String, CoreError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CoreError::InvalidArgument(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CoreError::InvalidArgument(format!("cannot read '{path}': {e}")))
    }
}

fn load_instance(path: &str) -> Result<Instance, CoreError> {
    parse_instance(&read_input(path)?)
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, CoreError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CoreError::InvalidArgument(format!("not a number: '{t}'")))
        })
        .collect()
}

fn parse_box(inst: &Instance, spec: &Option<String>) -> Result<IntegerBox, CoreError> {
    let n1 = inst.n1();
    let Some(spec) = spec else {
        return Ok(IntegerBox::default_for(inst));
    };
    let nums = parse_numbers(spec)?;
    let ints: Vec<i64> = nums.iter().map(|&v| v as i64).collect();
    if ints.len() == 2 {
        IntegerBox::new(vec![ints[0]; n1], vec![ints[1]; n1]).map(|b| b.clamp_binary(inst))
    } else if ints.len() == 2 * n1 {
        let lower = ints.iter().step_by(2).cloned().collect();
        let upper = ints.iter().skip(1).step_by(2).cloned().collect();
        IntegerBox::new(lower, upper).map(|b| b.clamp_binary(inst))
    } else {
        Err(CoreError::InvalidArgument(format!(
            "--box expects 2 or {} numbers, got {}",
            2 * n1,
            ints.len()
        )))
    }
}

fn emit_cert(common: &CommonOpts, payload: &serde_json::Value) -> Result<(), CoreError> {
    let body = serde_json::to_string_pretty(payload).expect("serializable");
    let block = format!("---BEGIN CERT---\n{body}\n---END CERT---\n");
    match &common.out {
        Some(path) => std::fs::write(path, &block)
            .map_err(|e| CoreError::InvalidArgument(format!("cannot write '{path}': {e}"))),
        None => {
            print!("{block}");
            Ok(())
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.9}")).collect();
    format!("({})", parts.join(", "))
}

fn run(cli: Cli) -> Result<ExitCode, CoreError> {
    match cli.command {
        Command::Solve { file, common } => {
            let inst = load_instance(&file)?;
            let box_ = parse_box(&inst, &common.box_)?;
            let res = solve_mip(&inst, &box_)?;
            println!("status: {:?}", res.status);
            println!("value: {}", res.value);
            if let Some((x, y)) = &res.witness {
                println!("witness: x={x:?} y={}", fmt_vec(y));
            }
            for p in &res.evidence {
                println!("evidence: x={:?} objective={}", p.x, p.objective);
            }
            emit_cert(
                &common,
                &serde_json::json!({
                    "command": "solve",
                    "status": res.status,
                    "value": res.value,
                    "witness": res.witness,
                    "evidence": res.evidence,
                }),
            )?;
            Ok(ExitCode::from(
                if res.status == MipStatus::BoxLimited { 1 } else { 0 },
            ))
        }
        Command::Relax { file, common, tol } => {
            let inst = load_instance(&file)?;
            let rel = inst.continuous_relaxation();
            let res = solve_continuous(&rel);
            println!("status: {:?}", res.status);
            println!("objective: {}", res.objective);
            if let Some(lam) = &res.dual_lambda {
                println!("lambda: {}", fmt_vec(lam));
            }
            println!(
                "residuals: primal={:.3e} dual={:.3e} gap={:.3e}",
                res.residuals.primal_res, res.residuals.dual_res, res.residuals.gap
            );
            let report = verify_certificate(&rel, &res, tol);
            println!(
                "verification at {tol:.1e}: {}",
                if report.pass { "pass" } else { "FAIL" }
            );
            emit_cert(
                &common,
                &serde_json::json!({
                    "command": "relax",
                    "status": res.status,
                    "objective": res.objective,
                    "lambda": res.dual_lambda,
                    "residuals": res.residuals,
                    "verification": report,
                }),
            )?;
            Ok(ExitCode::from(
                if res.status == SolveStatus::IllPosed { 1 } else { 0 },
            ))
        }
        Command::Certify {
            file,
            common,
            split,
        } => {
            let inst = load_instance(&file)?;
            let box_ = parse_box(&inst, &common.box_)?;
            let view = match &split {
                Some(spec) => {
                    let sides: Result<Vec<Side>, CoreError> = spec
                        .split(',')
                        .map(|t| match t.trim() {
                            "s1" | "S1" => Ok(Side::S1),
                            "s2" | "S2" => Ok(Side::S2),
                            other => Err(CoreError::InvalidArgument(format!(
                                "--split entries must be s1 or s2, got '{other}'"
                            ))),
                        })
                        .collect();
                    Some(inst.split_blocks(&sides?)?)
                }
                None => None,
            };
            let report = certify(&inst, view.as_ref(), &box_)?;
            print_certificate(&report);
            emit_cert(&common, &serde_json::to_value(&report).expect("serializable"))?;
            let code = match report.verdict {
                Verdict::StrongDual(_) | Verdict::DualInfeasible => 0,
                Verdict::WeakOnly | Verdict::Unknown => 1,
            };
            Ok(ExitCode::from(code))
        }
        Command::Value {
            file,
            rhs_file,
            common,
        } => {
            let inst = load_instance(&file)?;
            let box_ = parse_box(&inst, &common.box_)?;
            let oracle = ValueFunctionOracle::new(inst.clone(), box_)?;
            let text = read_input(&rhs_file)?;
            let header: Vec<String> = (1..=inst.m()).map(|i| format!("h{i}")).collect();
            println!("{},value", header.join(","));
            for line in text.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let h = parse_numbers(line)?;
                let v = oracle.value(&h)?;
                let hs: Vec<String> = h.iter().map(|x| x.to_string()).collect();
                println!("{},{}", hs.join(","), v);
            }
            Ok(ExitCode::from(0))
        }
        Command::Cut {
            file,
            function,
            common,
            eps,
            v,
            samples,
        } => {
            let inst = load_instance(&file)?;
            let box_ = parse_box(&inst, &common.box_)?;
            let f = if let Some(path) = function.strip_prefix("linear:") {
                DualFunction::Linear(parse_numbers(&read_input(path)?)?)
            } else if function == "valuefn" {
                DualFunction::ValueFn(ValueFunctionOracle::new(inst.clone(), box_.clone())?)
            } else if function == "fstar" {
                let vdir = match &v {
                    Some(path) => parse_numbers(&read_input(path)?)?,
                    None => inst.cone.interior_direction(),
                };
                build_fstar(&inst, eps, &vdir, &box_)?
            } else {
                return Err(CoreError::InvalidArgument(format!(
                    "--function must be linear:<file>, valuefn or fstar; got '{function}'"
                )));
            };
            let feas = check_dual_feasibility(&f, &inst, 1e-6, samples)?;
            println!("dual feasibility: {:?}", feas.verdict);
            for note in &feas.notes {
                println!("note: {note}");
            }
            let cut = generate_cut(&f, &inst)?;
            let pi: Vec<String> = cut.pi.iter().map(|x| format!("{x:.9}")).collect();
            let gamma: Vec<String> = cut.gamma.iter().map(|x| format!("{x:.9}")).collect();
            println!(
                "cut: [{}] . x + [{}] . y >= {:.9}",
                pi.join(", "),
                gamma.join(", "),
                cut.pi0
            );
            if cut.bar_numeric {
                println!("warning: continuous coefficients use a numeric fbar profile");
            }
            let valid = verify_cut(&cut, &inst, &box_)?;
            println!("verify_cut: {}", if valid { "valid" } else { "VIOLATED" });
            emit_cert(
                &common,
                &serde_json::json!({
                    "command": "cut",
                    "pi": cut.pi,
                    "gamma": cut.gamma,
                    "pi0": cut.pi0,
                    "bar_numeric": cut.bar_numeric,
                    "verified": valid,
                }),
            )?;
            Ok(ExitCode::from(if valid { 0 } else { 1 }))
        }
        Command::Dirichlet { sub } => run_dirichlet(sub),
        Command::Example { which } => run_example(which),
    }
}

fn print_certificate(report: &subdual::certify::CertificateReport) {
    println!("primal: status={:?} value={}", report.primal_status, report.primal_value);
    if let Some((x, y)) = &report.primal_witness {
        println!("primal witness: x={x:?} y={}", fmt_vec(y));
    }
    match &report.cont_dual {
        subdual::certify::ContDualSummary::Feasible { lambda } => {
            println!("continuous dual: feasible, lambda={}", fmt_vec(lambda));
        }
        subdual::certify::ContDualSummary::Infeasible {
            margin_violation, ..
        } => {
            println!(
                "continuous dual: infeasible (Farkas-style certificate, margin violation {margin_violation:.3e})"
            );
        }
        subdual::certify::ContDualSummary::Unknown => println!("continuous dual: unknown"),
    }
    for (key, entry) in &report.conditions {
        let extra = entry
            .witness
            .as_deref()
            .or(entry.note.as_deref())
            .unwrap_or("");
        println!("condition {key}: {:?} {extra}", entry.status);
    }
    if report.gap.defined {
        println!(
            "gap: primal={} best_dual={} gap={:.3e}",
            report.gap.primal_value, report.gap.best_dual_value, report.gap.gap
        );
    } else {
        println!("gap: undefined (non-finite side)");
    }
    println!("verdict: {}", report.verdict);
}

// ---------------------------------------------------------------------------
// Dirichlet subcommands
// ---------------------------------------------------------------------------

fn parse_body(path: &str) -> Result<ConvexBody, CoreError> {
    let text = read_input(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CoreError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let kind = v["kind"]
        .as_str()
        .ok_or_else(|| CoreError::Validation("body file needs a 'kind'".into()))?;
    let to_vec = |val: &serde_json::Value| -> Result<Vec<f64>, CoreError> {
        val.as_array()
            .ok_or_else(|| CoreError::Validation("expected an array of numbers".into()))?
            .iter()
            .map(|x| {
                x.as_f64()
                    .ok_or_else(|| CoreError::Validation("expected a number".into()))
            })
            .collect()
    };
    let body = match kind {
        "polyhedron" => {
            let rows_val = v["rows"]
                .as_array()
                .ok_or_else(|| CoreError::Validation("polyhedron needs 'rows'".into()))?;
            let mut rows = Vec::new();
            let mut rational = Vec::new();
            for r in rows_val {
                rows.push((
                    to_vec(&r["a"])?,
                    r["b"].as_f64().ok_or_else(|| {
                        CoreError::Validation("polyhedron row needs a numeric 'b'".into())
                    })?,
                ));
                rational.push(r["rational"].as_bool().unwrap_or(false));
            }
            ConvexBody::Polyhedron { rows, rational }
        }
        "ball" => ConvexBody::Ball {
            center: to_vec(&v["center"])?,
            radius: v["radius"]
                .as_f64()
                .ok_or_else(|| CoreError::Validation("ball needs a numeric 'radius'".into()))?,
        },
        "ellipsoid" => {
            let rows_val = v["shape"]
                .as_array()
                .ok_or_else(|| CoreError::Validation("ellipsoid needs 'shape'".into()))?;
            let mut rows = Vec::new();
            for r in rows_val {
                rows.push(to_vec(r)?);
            }
            ConvexBody::Ellipsoid {
                shape: Matrix::from_rows(&rows),
                center: to_vec(&v["center"])?,
            }
        }
        "cone" => {
            let gens_val = v["generators"]
                .as_array()
                .ok_or_else(|| CoreError::Validation("cone needs 'generators'".into()))?;
            let mut generators = Vec::new();
            for g in gens_val {
                generators.push(to_vec(g)?);
            }
            ConvexBody::ShiftedCone {
                apex: to_vec(&v["apex"])?,
                generators,
            }
        }
        other => {
            return Err(CoreError::Validation(format!(
                "unknown body kind '{other}' (expected polyhedron|ball|ellipsoid|cone)"
            )))
        }
    };
    body.validate()?;
    Ok(body)
}

fn parse_lattice(path: &str) -> Result<MixedLattice, CoreError> {
    let text = read_input(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CoreError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Some(n) = v["standard"].as_u64() {
        return Ok(MixedLattice::standard(n as usize));
    }
    let read_mat = |val: &serde_json::Value| -> Result<Option<Matrix>, CoreError> {
        if val.is_null() {
            return Ok(None);
        }
        let rows_val = val
            .as_array()
            .ok_or_else(|| CoreError::Validation("matrix must be a list of rows".into()))?;
        let mut rows = Vec::new();
        for r in rows_val {
            let row: Result<Vec<f64>, CoreError> = r
                .as_array()
                .ok_or_else(|| CoreError::Validation("matrix row must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| CoreError::Validation("expected a number".into()))
                })
                .collect();
            rows.push(row?);
        }
        Ok(Some(Matrix::from_rows(&rows)))
    };
    let a = read_mat(&v["a"])?;
    let b = read_mat(&v["b"])?;
    let n = a
        .as_ref()
        .map(|m| m.nrows())
        .or(b.as_ref().map(|m| m.nrows()))
        .ok_or_else(|| CoreError::Validation("lattice file needs 'a' or 'b'".into()))?;
    MixedLattice::new(
        a.unwrap_or_else(|| Matrix::zeros(n, 0)),
        b.unwrap_or_else(|| Matrix::zeros(n, 0)),
    )
}

fn parse_queries(path: &str) -> Result<Vec<HalfLineQuery>, CoreError> {
    let text = read_input(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CoreError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let arr = v
        .as_array()
        .ok_or_else(|| CoreError::Validation("queries file must be a JSON list".into()))?;
    let mut out = Vec::new();
    for q in arr {
        let to_vec = |val: &serde_json::Value| -> Result<Vec<f64>, CoreError> {
            val.as_array()
                .ok_or_else(|| CoreError::Validation("query vectors must be arrays".into()))?
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| CoreError::Validation("expected a number".into()))
                })
                .collect()
        };
        out.push(HalfLineQuery::new(
            to_vec(&q["z"])?,
            to_vec(&q["r"])?,
            q["eps"].as_f64().unwrap_or(0.25),
            q["gamma"].as_f64().unwrap_or(0.0),
        )?);
    }
    Ok(out)
}

fn run_dirichlet(sub: DirichletCmd) -> Result<ExitCode, CoreError> {
    match sub {
        DirichletCmd::Probe {
            body,
            lattice,
            queries,
            bound,
            shear,
        } => {
            let p = parse_body(&body)?;
            let m = parse_lattice(&lattice)?;
            let qs = parse_queries(&queries)?;
            let outcomes = dirichlet_probe(&p, &m, &qs, bound)?;
            let mut inconclusive = false;
            for (i, o) in outcomes.iter().enumerate() {
                match o {
                    ProbeOutcome::Witness { w, distance } => {
                        println!("query {}: witness {} at distance {distance:.6}", i + 1, fmt_vec(w));
                    }
                    ProbeOutcome::NoWitnessWithinBound => {
                        inconclusive = true;
                        println!("query {}: no witness within bound {bound}", i + 1);
                    }
                    ProbeOutcome::Counterexample { certificate } => {
                        println!("query {}: counterexample: {certificate}", i + 1);
                    }
                }
            }
            if let Some(spec) = shear {
                let nums = parse_numbers(&spec)?;
                let n = (nums.len() as f64).sqrt() as usize;
                let u = Matrix::from_fn(n, n, |i, j| nums[i * n + j]);
                let map = UnimodularMap::new(u, vec![0.0; n])?;
                let rep = affine_invariance_test(&p, &m, &map, &qs, bound)?;
                println!(
                    "affine invariance: {}",
                    if rep.agree { "verdicts agree" } else { "VERDICTS DIFFER" }
                );
            }
            Ok(ExitCode::from(if inconclusive { 1 } else { 0 }))
        }
        DirichletCmd::Halfline {
            lattice,
            z,
            r,
            eps,
            gamma,
            bound,
        } => {
            let m = parse_lattice(&lattice)?;
            let q = HalfLineQuery::new(parse_numbers(&z)?, parse_numbers(&r)?, eps, gamma)?;
            match approximate_halfline(&m, &q, bound)? {
                Some(w) => {
                    let d = subdual::dirichlet::halfline_distance(&w, &q.z, &q.r, q.gamma);
                    println!("witness: {} at distance {d:.6}", fmt_vec(&w));
                    Ok(ExitCode::from(0))
                }
                None => {
                    println!("no witness within bound {bound}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        DirichletCmd::Finiteness {
            body,
            pbody,
            lattice,
            objective,
            schedule,
        } => {
            let x = parse_body(&body)?;
            let p = parse_body(&pbody)?;
            let m = parse_lattice(&lattice)?;
            let c = parse_numbers(&objective)?;
            let sched: Vec<i64> = parse_numbers(&schedule)?.iter().map(|&v| v as i64).collect();
            let rep = finiteness_experiment(&x, &p, &m, &c, &sched)?;
            println!("hypothesis int(X) cap S nonempty: {}", rep.hypothesis_ok);
            println!("S-side sups: {:?} -> {:?}", rep.s_values, rep.s_class);
            println!("P-side sups: {:?} -> {:?}", rep.p_values, rep.p_class);
            if rep.consistent {
                println!("consistent with the finiteness property");
            } else {
                println!("INCONSISTENT: S side stabilizes while P side grows");
            }
            Ok(ExitCode::from(if rep.consistent { 0 } else { 1 }))
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in examples
// ---------------------------------------------------------------------------

fn run_example(which: u32) -> Result<ExitCode, CoreError> {
    match which {
        1 => example_1(),
        2 => example_2(),
        other => Err(CoreError::InvalidArgument(format!(
            "example must be 1 or 2, got {other}"
        ))),
    }
}

fn example_1() -> Result<ExitCode, CoreError> {
    let inst = subdual::builtin::example_1();
    println!("Example 1: min x2 s.t. (x1, x2, x1) in L^3, x in Z^2");
    let box_ = IntegerBox::symmetric(2, 10);
    let res = solve_mip(&inst, &box_)?;
    println!(
        "primal over [-10,10]^2: status={:?} value={} witness={:?}",
        res.status,
        res.value,
        res.witness.as_ref().map(|(x, _)| x.clone())
    );
    let report = certify(&inst, None, &box_)?;
    match &report.cont_dual {
        subdual::certify::ContDualSummary::Infeasible {
            margin_violation, ..
        } => println!(
            "continuous dual: infeasible (certificate margin violation {margin_violation:.3e} <= 1e-6)"
        ),
        other => println!("continuous dual: {other:?}"),
    }
    let eps = 0.5;
    println!("perturbed problem (rhs (0, 0, -eps), eps = {eps}) witness family:");
    println!("  k    x1    x2    objective    margin");
    let mut table = Vec::new();
    for k in 0..=10i64 {
        let x2 = -k;
        let x1 = (((x2 * x2) as f64 - eps * eps) / (2.0 * eps)).ceil() as i64;
        let s = [x1 as f64, x2 as f64, x1 as f64 + eps];
        let margin = inst.cone.margin(&s)?;
        println!("  {k:<4} {x1:<5} {x2:<5} {:<12} {margin:.3e}", x2);
        table.push(serde_json::json!({
            "k": k, "x1": x1, "x2": x2, "objective": x2, "margin": margin,
        }));
    }
    println!("verdict: {}", report.verdict);
    let payload = serde_json::json!({
        "command": "example 1",
        "report": report,
        "witness_table": table,
    });
    let common = CommonOpts {
        box_: None,
        out: None,
    };
    emit_cert(&common, &payload)?;
    Ok(ExitCode::from(0))
}

fn example_2() -> Result<ExitCode, CoreError> {
    let inst = subdual::builtin::example_2();
    println!("Example 2: min x2 s.t. x1 E22 + x2 (E11+E23+E32) >= -E11 over S^3_+, x in Z^2");
    let box_ = IntegerBox::symmetric(2, 5);
    let res = solve_mip(&inst, &box_)?;
    println!(
        "primal over [-5,5]^2: status={:?} value={} witness={:?}",
        res.status,
        res.value,
        res.witness.as_ref().map(|(x, _)| x.clone())
    );
    let lam = subdual::builtin::example_2_lambda();
    let f = DualFunction::Linear(lam.clone());
    let feas = check_dual_feasibility(&f, &inst, 1e-8, 200)?;
    println!(
        "lambda = svec(e1 e1'): dual feasibility {:?}",
        feas.verdict
    );
    println!("f(b) = {}", evaluate(&f, &inst.b)?);
    let report = certify(&inst, None, &box_)?;
    if report.gap.defined {
        println!(
            "gap evidence: primal={} best_dual={} gap={:.3e}",
            report.gap.primal_value, report.gap.best_dual_value, report.gap.gap
        );
    }
    println!("verdict: {}", report.verdict);
    let payload = serde_json::json!({
        "command": "example 2",
        "report": report,
        "lambda": lam,
        "lambda_feasibility": format!("{:?}", feas.verdict),
    });
    let common = CommonOpts {
        box_: None,
        out: None,
    };
    emit_cert(&common, &payload)?;
    Ok(ExitCode::from(0))
}
