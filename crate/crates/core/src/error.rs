use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid Boolean function: {0}")]
    InvalidFunction(String),

    #[error("domain size {domain_size} exceeds 2^{n}")]
    DomainTooLarge { n: usize, domain_size: usize },

    #[error("bit strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("function is constant; the adversary program has no pair constraints")]
    ConstantFunction,

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("all constraint matrices are zero")]
    ZeroConstraints,

    #[error("solver diverged at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("Gram block is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("vector set has size zero")]
    ZeroSize,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty family: {0}")]
    EmptyFamily(&'static str),

    #[error("near-orthonormal basis precondition violated: {0}")]
    Precondition(String),

    #[error("kappa* = {kappa_star} outside 1..={kappa}")]
    KappaOutOfRange { kappa_star: usize, kappa: usize },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("eigendecomposition did not converge")]
    NoConvergence,

    #[error("no verified JL projection after {attempts} attempts")]
    JlExhausted { attempts: usize },
}
