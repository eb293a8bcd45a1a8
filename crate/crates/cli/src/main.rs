//! `adversary`: solve the adversary dual for a Boolean function, certify the
//! numerical solution, compress it and simulate the resulting algorithm.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use adversary_core::Error as CoreError;

#[derive(Parser, Debug)]
#[command(name = "adversary", version, about = "Adversary-bound SDP pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the adversary dual and certify the extracted vectors.
    Solve(SolveArgs),
    /// Certify a vector set (or solve a function first).
    Certify(SolveArgs),
    /// Compress a vector set, exactly or with a random projection.
    Compress(CompressArgs),
    /// Simulate phase estimation for every input of the domain.
    Simulate(SimulateArgs),
    /// Random-instance experiments: error versus iterations and versus the
    /// certificate threshold.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Truth table (`<bits> <0|1>` lines or JSON) or a vectors.json file.
    #[arg(long, conflicts_with = "random")]
    pub input: Option<PathBuf>,
    /// Random function with `n` input bits on a domain of the given size.
    #[arg(long, value_name = "N,SIZE", value_parser = parse_random)]
    pub random: Option<(usize, usize)>,
    /// Seed for random functions and projections.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Iteration budget.
    #[arg(long, default_value_t = 3000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0.0)]
    pub feas_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub round_tol: f64,
    /// Augmented Lagrangian penalty.
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
}

#[derive(Args, Debug, Clone)]
pub struct PipelineArgs {
    /// Witness scaling constant.
    #[arg(long, default_value_t = 100.0)]
    pub c: f64,
    /// Phase-estimation failure probability; defaults to 1/25.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Phase precision; defaults to the value for the chosen reflection.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 100.0)]
    pub c: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CompressArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 100.0)]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = CompressKind::Exact)]
    pub compress: CompressKind,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Compression applied before simulating; `jl` implies `--reflection jl`.
    #[arg(long, value_enum, default_value_t = CompressKind::None)]
    pub compress: CompressKind,
    /// Span the reflection is taken about.
    #[arg(long, value_enum)]
    pub reflection: Option<ReflectionChoice>,
    /// Cut index for `--reflection svd`; defaults to the certified one.
    #[arg(long)]
    pub kappa_star: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Input lengths.
    #[arg(long, value_delimiter = ',', default_values_t = [5, 15, 25])]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 32)]
    pub domain_size: usize,
    /// Random instances per input length.
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    /// Master seed; instance k uses seed + k.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Iteration checkpoints. Defaults to 100,300,1000,3000 for fig1 and
    /// 3000 for fig2.
    #[arg(long, value_delimiter = ',')]
    pub iters: Vec<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub feas_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub round_tol: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 100.0)]
    pub c: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompressKind {
    None,
    Exact,
    Jl,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReflectionChoice {
    Exact,
    Svd,
    Jl,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fig1,
    Fig2,
}

fn parse_random(s: &str) -> Result<(usize, usize), String> {
    let (n, size) = s.split_once(',').ok_or("expected N,SIZE")?;
    let n = n.trim().parse().map_err(|e| format!("bad N: {e}"))?;
    let size = size.trim().parse().map_err(|e| format!("bad SIZE: {e}"))?;
    Ok((n, size))
}

/// Bad flags or inputs; exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// How a successful run ended.
pub enum Status {
    Pass,
    /// Certificate or simulation did not pass; exit code 3.
    Fail(String),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CoreError>() {
            return match e {
                CoreError::Divergence { .. }
                | CoreError::NotPsd { .. }
                | CoreError::ZeroSize
                | CoreError::ZeroConstraints
                | CoreError::EmptyFamily(_)
                | CoreError::Precondition(_)
                | CoreError::NotUnitary { .. }
                | CoreError::NoConvergence
                | CoreError::JlExhausted { .. } => 2,
                _ => 1,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Certify(a) => commands::certify(&a),
        Command::Compress(a) => commands::compress(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Experiment(a) => commands::experiment(&a),
    };
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail(msg)) => {
            eprintln!("adversary: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("adversary: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
