//! Desk-scale replication runs: numerical error against solver iterations
//! and certificate pass rates on random functions.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::advdual::{
    build_sdp, build_witnesses, certify, extract_vectors, size_and_max_rank, Certificate, WitnessVectors,
};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::linalg::RANK_TOL;
use crate::sdp::{AdmmConfig, AdmmSolver, StandardFormSdp};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    pub domain_size: usize,
    pub reps: usize,
    /// Iteration checkpoints, increasing; the last one is the full budget.
    pub iters: Vec<usize>,
    /// Instance `k` of each `n` uses seed `master_seed + k`.
    pub master_seed: u64,
    pub admm: AdmmConfig,
    pub c: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ns: vec![5, 15, 25],
            domain_size: 32,
            reps: 20,
            iters: vec![100, 300, 1000, 3000],
            master_seed: 0,
            admm: AdmmConfig::default(),
            c: 100.0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        if self.ns.is_empty() || self.iters.is_empty() {
            return Err(Error::InvalidParameter("need at least one n and one iteration count".into()));
        }
        if self.iters.windows(2).any(|w| w[0] >= w[1]) || self.iters[0] == 0 {
            return Err(Error::InvalidParameter("iteration checkpoints must be positive and increasing".into()));
        }
        self.admm.validate()
    }
}

/// Pipeline state of one instance at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub seed: u64,
    pub iterations: usize,
    pub objective: f64,
    pub primal_residual: f64,
    pub size: f64,
    pub kappa_prime: usize,
    pub certificate: Certificate<f64>,
}

impl Checkpoint {
    pub fn epsilon(&self) -> f64 {
        self.certificate.epsilon
    }

    /// `κ′ ≤ κ ≤ 2nκ′`.
    pub fn rank_sandwich_holds(&self) -> bool {
        let k = self.certificate.kappa;
        self.kappa_prime <= k && k <= 2 * self.n * self.kappa_prime
    }
}

pub struct InstanceRun {
    pub checkpoints: Vec<Checkpoint>,
    /// Witnesses at the last checkpoint.
    pub witnesses: WitnessVectors<f64>,
}

/// Solve one random instance once, evaluating the pipeline at each checkpoint
/// of the same solver trajectory.
pub fn run_instance(n: usize, domain_size: usize, seed: u64, cfg: &ExperimentConfig) -> Result<InstanceRun> {
    let f = BooleanFunction::random(n, domain_size, seed)?;
    let p: StandardFormSdp<f64> = build_sdp(&f)?;
    let admm = AdmmConfig { max_iters: *cfg.iters.last().expect("validated"), ..cfg.admm.clone() };
    let mut solver = AdmmSolver::new(&p, admm)?;
    let mut checkpoints = Vec::with_capacity(cfg.iters.len());
    let mut last = None;
    for &t in &cfg.iters {
        solver.run_to(t)?;
        let sol = solver.solution();
        let vs = extract_vectors(&sol, &f, RANK_TOL)?.vectors;
        let (size, kappa_prime) = size_and_max_rank(&vs);
        let w = build_witnesses(&vs, cfg.c)?;
        let certificate = certify(&w)?;
        checkpoints.push(Checkpoint {
            n,
            seed,
            iterations: sol.iterations_used,
            objective: sol.objective_value,
            primal_residual: sol.primal_residual,
            size,
            kappa_prime,
            certificate,
        });
        last = Some(w);
    }
    Ok(InstanceRun { checkpoints, witnesses: last.expect("at least one checkpoint") })
}

/// Every `(n, rep)` instance, in parallel, sorted by `(n, seed)`.
pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<InstanceRun>> {
    cfg.validate()?;
    let jobs: Vec<(usize, u64)> = cfg
        .ns
        .iter()
        .flat_map(|&n| (0..cfg.reps as u64).map(move |k| (n, cfg.master_seed + k)))
        .collect();
    let mut runs = jobs
        .par_iter()
        .map(|&(n, seed)| run_instance(n, cfg.domain_size, seed, cfg))
        .collect::<Result<Vec<_>>>()?;
    runs.sort_by_key(|r| (r.checkpoints[0].n, r.checkpoints[0].seed));
    Ok(runs)
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 { values[n / 2] } else { 0.5 * (values[n / 2 - 1] + values[n / 2]) }
}

/// `(n, T) → ε` values across seeds.
pub fn epsilon_by_budget(runs: &[InstanceRun]) -> Vec<((usize, usize), Vec<f64>)> {
    let mut out: Vec<((usize, usize), Vec<f64>)> = Vec::new();
    for run in runs {
        for cp in &run.checkpoints {
            let key = (cp.n, cp.iterations);
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(cp.epsilon()),
                None => out.push((key, vec![cp.epsilon()])),
            }
        }
    }
    out.sort_by_key(|(k, _)| *k);
    out
}

pub const FIG1_HEADER: &str = "kind,n,iterations,seed,epsilon,mean,std,median";
pub const FIG2_HEADER: &str = "n,seed,epsilon,threshold_kappa,threshold_best,kappa,kappa_star,pass_kappa,pass";

/// One `instance` row per (n, T, seed), then one `aggregate` row per (n, T)
/// with mean, sample standard deviation and median of ε.
pub fn fig1_csv(runs: &[InstanceRun]) -> String {
    let mut out = String::from(FIG1_HEADER);
    out.push('\n');
    let mut rows: Vec<&Checkpoint> = runs.iter().flat_map(|r| &r.checkpoints).collect();
    rows.sort_by_key(|c| (c.n, c.iterations, c.seed));
    for c in rows {
        let _ = writeln!(out, "instance,{},{},{},{:e},,,", c.n, c.iterations, c.seed, c.epsilon());
    }
    for ((n, t), mut eps) in epsilon_by_budget(runs) {
        let k = eps.len() as f64;
        let mean = eps.iter().sum::<f64>() / k;
        let var = if eps.len() > 1 { eps.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
        let med = median(&mut eps);
        let _ = writeln!(out, "aggregate,{n},{t},,,{mean:e},{:e},{med:e}", var.sqrt());
    }
    out
}

/// One row per instance at its final checkpoint.
pub fn fig2_csv(runs: &[InstanceRun]) -> String {
    let mut out = String::from(FIG2_HEADER);
    out.push('\n');
    for r in runs {
        let c = r.checkpoints.last().expect("at least one checkpoint");
        let cert = &c.certificate;
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{:e},{},{},{},{}",
            c.n,
            c.seed,
            cert.epsilon,
            cert.threshold_at_kappa,
            cert.threshold,
            cert.kappa,
            cert.kappa_star.map_or(String::new(), |k| k.to_string()),
            cert.pass_at_kappa,
            cert.pass
        );
    }
    out
}
