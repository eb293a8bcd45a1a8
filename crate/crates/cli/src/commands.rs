use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use serde_json::json;

use adversary_core::advdual::{
    build_sdp, build_witnesses, certify as certify_witnesses, extract_vectors, numerical_error,
    size_and_max_rank, verify_deciding,
};
use adversary_core::compress::{check_jl_lemmas, exact_compress, jl_compress, JlLemmaReport};
use adversary_core::experiment::{fig1_csv, fig2_csv, run_all, ExperimentConfig};
use adversary_core::linalg::RANK_TOL;
use adversary_core::sdp::solve as solve_sdp;
use adversary_core::simulate::{simulate_function, ReflectionKind, SimParams, WitnessSource};
use adversary_core::{BooleanFunction, Certificate, Compressed, Sdp, Solution, VectorSet, Witnesses};

use crate::input::{self, Loaded, RunConfig};
use crate::{
    CompressArgs, CompressKind, ExperimentArgs, Mode, ReflectionChoice, SimulateArgs, SolveArgs,
    Status, UsageError,
};

#[derive(Serialize)]
struct SolutionArtifact<'a> {
    function: &'a BooleanFunction,
    objective: f64,
    primal_residual: f64,
    dual_residual: f64,
    iterations: usize,
    block_dims: Vec<usize>,
    blocks: Vec<Vec<Vec<f64>>>,
}

struct Solved {
    solution: Solution,
    vectors: VectorSet,
    reconstruction_error: f64,
}

fn run_solver(f: &BooleanFunction, cfg: &RunConfig) -> Result<Solved> {
    let p: Sdp = build_sdp(f)?;
    let solution = solve_sdp(&p, &cfg.solver)?;
    let ext = extract_vectors(&solution, f, RANK_TOL)?;
    Ok(Solved { solution, vectors: ext.vectors, reconstruction_error: ext.reconstruction_error })
}

fn write_solved(out: &Path, cfg: &RunConfig, f: &BooleanFunction, s: &Solved) -> Result<()> {
    let sol = &s.solution;
    let blocks = sol
        .x
        .blocks
        .iter()
        .map(|b| b.row_iter().map(|r| r.iter().copied().collect()).collect())
        .collect();
    input::write_json(
        out,
        "solution.json",
        cfg,
        SolutionArtifact {
            function: f,
            objective: sol.objective_value,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
            iterations: sol.iterations_used,
            block_dims: sol.x.dims(),
            blocks,
        },
    )?;
    let (size, max_rank) = size_and_max_rank(&s.vectors);
    input::write_json(
        out,
        "vectors.json",
        cfg,
        json!({
            "size": size,
            "max_rank": max_rank,
            "reconstruction_error": s.reconstruction_error,
            "vector_set": s.vectors,
        }),
    )?;
    Ok(())
}

/// The vector set named by the input, solving the SDP first when the input
/// is a function.
fn vectors_for(cfg: &RunConfig, out: &Path) -> Result<VectorSet> {
    match input::load(cfg)? {
        Loaded::Vectors(vs) => Ok(vs),
        Loaded::Function(f) => {
            let solved = run_solver(&f, cfg)?;
            write_solved(out, cfg, &f, &solved)?;
            Ok(solved.vectors)
        }
    }
}

fn write_certificate(out: &Path, cfg: &RunConfig, w: &Witnesses) -> Result<Certificate> {
    let epsilon = numerical_error(w)?;
    let cert = certify_witnesses(w)?;
    input::write_json(out, "certificate.json", cfg, json!({ "numerical_error": epsilon, "certificate": cert }))?;
    println!(
        "size {:.6}  epsilon {:.3e}  kappa {}  kappa* {}  threshold {:.3e}  {}",
        cert.size,
        cert.epsilon,
        cert.kappa,
        cert.kappa_star.map_or("-".to_string(), |k| k.to_string()),
        cert.threshold,
        if cert.pass { "pass" } else { "fail" }
    );
    Ok(cert)
}

fn certificate_status(cert: &Certificate) -> Status {
    if cert.pass {
        Status::Pass
    } else {
        Status::Fail(format!(
            "certificate fails: epsilon {:.3e} is above every threshold (at kappa* = kappa: {:.3e})",
            cert.epsilon, cert.threshold_at_kappa
        ))
    }
}

pub fn solve(a: &SolveArgs) -> Result<Status> {
    let cfg = RunConfig::new("solve", &a.input, &a.solver)?.with("c", a.c);
    let f = match input::load(&cfg)? {
        Loaded::Function(f) => f,
        Loaded::Vectors(_) => return Err(UsageError("solve expects a Boolean function".into()).into()),
    };
    let solved = run_solver(&f, &cfg)?;
    write_solved(&a.out, &cfg, &f, &solved)?;
    println!(
        "objective {:.6}  primal residual {:.3e}  iterations {}",
        solved.solution.objective_value, solved.solution.primal_residual, solved.solution.iterations_used
    );
    let w = build_witnesses(&solved.vectors, a.c)?;
    let cert = write_certificate(&a.out, &cfg, &w)?;
    Ok(certificate_status(&cert))
}

pub fn certify(a: &SolveArgs) -> Result<Status> {
    let cfg = RunConfig::new("certify", &a.input, &a.solver)?.with("c", a.c);
    let vs = vectors_for(&cfg, &a.out)?;
    let w = build_witnesses(&vs, a.c)?;
    let cert = write_certificate(&a.out, &cfg, &w)?;
    Ok(certificate_status(&cert))
}

#[derive(Serialize)]
struct ExactArtifact<'a> {
    method: &'static str,
    input_dimension: usize,
    output_dimension: usize,
    size_before: f64,
    size_after: f64,
    max_deviation: f64,
    vector_set: &'a VectorSet,
}

#[derive(Serialize)]
struct JlArtifact<'a> {
    method: &'static str,
    lemmas: &'a JlLemmaReport,
    compressed: &'a Compressed,
}

fn exact_stage(out: &Path, cfg: &RunConfig, vs: &VectorSet) -> Result<VectorSet> {
    let compressed = exact_compress(vs)?;
    let dev = verify_deciding(&compressed, 1e-9);
    input::write_json(
        out,
        "compressed.json",
        cfg,
        ExactArtifact {
            method: "exact",
            input_dimension: vs.dim(),
            output_dimension: compressed.dim(),
            size_before: size_and_max_rank(vs).0,
            size_after: size_and_max_rank(&compressed).0,
            max_deviation: dev.max_deviation,
            vector_set: &compressed,
        },
    )?;
    println!("exact compression: dimension {} -> {}, deviation {:.3e}", vs.dim(), compressed.dim(), dev.max_deviation);
    Ok(compressed)
}

fn jl_stage(out: &Path, cfg: &RunConfig, w: &Witnesses) -> Result<(Compressed, JlLemmaReport)> {
    let kappa = certify_witnesses(w)?.kappa;
    let cw = jl_compress(w, kappa, cfg.seed)?;
    let lemmas = check_jl_lemmas(&cw);
    input::write_json(out, "compressed.json", cfg, JlArtifact { method: "jl", lemmas: &lemmas, compressed: &cw })?;
    let p = &cw.projection;
    println!(
        "jl compression: {} rows x {} columns ({:?}), epsilon {:.3e}, attempt {}/{}, verified {}, lemma bounds {}",
        p.n_rows,
        p.d,
        p.kind,
        p.epsilon,
        p.attempt + 1,
        p.attempts,
        p.verified,
        if lemmas.all_hold { "hold" } else { "violated" }
    );
    if !p.verified {
        return Err(adversary_core::Error::JlExhausted { attempts: p.attempts }.into());
    }
    Ok((cw, lemmas))
}

pub fn compress(a: &CompressArgs) -> Result<Status> {
    let cfg = RunConfig::new("compress", &a.input, &a.solver)?.with("c", a.c).with("compress", a.compress);
    let vs = vectors_for(&cfg, &a.out)?;
    match a.compress {
        CompressKind::None => Err(UsageError("--compress must be exact or jl".into()).into()),
        CompressKind::Exact => {
            exact_stage(&a.out, &cfg, &vs)?;
            Ok(Status::Pass)
        }
        CompressKind::Jl => {
            let w = build_witnesses(&vs, a.c)?;
            let (_, lemmas) = jl_stage(&a.out, &cfg, &w)?;
            Ok(if lemmas.all_hold {
                Status::Pass
            } else {
                Status::Fail("compressed vectors violate the projection bounds".into())
            })
        }
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<Status> {
    let reflection = a.reflection.unwrap_or(if a.compress == CompressKind::Jl {
        ReflectionChoice::Jl
    } else {
        ReflectionChoice::Exact
    });
    if (reflection == ReflectionChoice::Jl) != (a.compress == CompressKind::Jl) {
        return Err(UsageError("--reflection jl goes together with --compress jl".into()).into());
    }
    if a.kappa_star.is_some() && reflection != ReflectionChoice::Svd {
        return Err(UsageError("--kappa-star only applies to --reflection svd".into()).into());
    }
    let c = a.pipeline.c;
    let cfg = RunConfig::new("simulate", &a.input, &a.solver)?
        .with("c", c)
        .with("delta", a.pipeline.delta)
        .with("theta", a.pipeline.theta)
        .with("compress", a.compress)
        .with("reflection", reflection)
        .with("kappa_star", a.kappa_star);
    let mut vs = vectors_for(&cfg, &a.out)?;
    if a.compress == CompressKind::Exact {
        vs = exact_stage(&a.out, &cfg, &vs)?;
    }
    let w = build_witnesses(&vs, c)?;
    let jl = if a.compress == CompressKind::Jl { Some(jl_stage(&a.out, &cfg, &w)?) } else { None };
    let (source, mut params) = match reflection {
        ReflectionChoice::Exact => {
            (WitnessSource::Exact(&w), SimParams::default_for(ReflectionKind::Exact, c, w.size))
        }
        ReflectionChoice::Svd => {
            let k = match a.kappa_star {
                Some(k) => k,
                None => match certify_witnesses(&w)?.kappa_star {
                    Some(k) => k,
                    None => {
                        return Ok(Status::Fail(
                            "certificate fails, so there is no certified kappa*; pass --kappa-star".into(),
                        ))
                    }
                },
            };
            (WitnessSource::Svd(&w, k), SimParams::default_for(ReflectionKind::Svd { kappa_star: k }, c, w.size))
        }
        ReflectionChoice::Jl => {
            let cw = &jl.as_ref().expect("compressed above").0;
            (WitnessSource::Jl(cw), SimParams { theta: cw.params.theta, delta: cw.params.delta, c })
        }
    };
    if let Some(theta) = a.pipeline.theta {
        params.theta = theta;
    }
    if let Some(delta) = a.pipeline.delta {
        params.delta = delta;
    }
    params.validate().map_err(|e| UsageError(e.to_string()))?;
    let report = simulate_function(&source, params)?;
    input::write_csv(&a.out, "simulation.csv", &cfg, &report.to_csv())?;
    input::write_json(
        &a.out,
        "simulation.json",
        &cfg,
        json!({ "report": report, "lemmas": jl.as_ref().map(|j| &j.1) }),
    )?;
    let wrong = report.rows.iter().filter(|r| r.verdict != adversary_core::simulate::Verdict::Correct).count();
    println!(
        "simulated {} inputs, theta {:.3e}, delta {:.3e}: {} not decided correctly",
        report.rows.len(),
        params.theta,
        params.delta,
        wrong
    );
    Ok(if report.success {
        Status::Pass
    } else {
        Status::Fail(format!("simulation fails on {wrong} of {} inputs", report.rows.len()))
    })
}

pub fn experiment(a: &ExperimentArgs) -> Result<Status> {
    let iters = if !a.iters.is_empty() {
        a.iters.clone()
    } else if a.mode == Mode::Fig1 {
        vec![100, 300, 1000, 3000]
    } else {
        vec![3000]
    };
    let last = *iters.last().expect("non-empty");
    let admm = input::admm_config(last, a.feas_tol, a.round_tol, a.mu)?;
    let ecfg = ExperimentConfig {
        ns: a.ns.clone(),
        domain_size: a.domain_size,
        reps: a.reps,
        iters,
        master_seed: a.seed,
        admm,
        c: a.c,
    };
    ecfg.validate().map_err(|e| UsageError(e.to_string()))?;
    let cfg = RunConfig::bare("experiment", a.seed, ecfg.admm.clone()).with("mode", a.mode).with("experiment", &ecfg);
    let runs = run_all(&ecfg)?;
    let (name, body) = match a.mode {
        Mode::Fig1 => ("fig1.csv", fig1_csv(&runs)),
        Mode::Fig2 => ("fig2.csv", fig2_csv(&runs)),
    };
    let path = input::write_csv(&a.out, name, &cfg, &body)?;
    println!("{} instances -> {}", runs.len(), path.display());
    Ok(Status::Pass)
}
