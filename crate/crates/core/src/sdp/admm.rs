//! Alternating direction augmented Lagrangian method (Wen, Goldfarb, Yin)
//! applied to the dual of a standard-form SDP. With penalty `mu = 1` each
//! pass is:
//!
//! ```text
//! y ← −(𝒜𝒜*)⁺(𝒜(X) − b + 𝒜(S − C))
//! V ← C − 𝒜*(y) − X
//! S ← V₊
//! X ← S − V
//! X ← round(X)
//! ```

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{build_normal_operator, project_psd, BlockMatrix, NormalOperator, StandardFormSdp};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdmmConfig {
    /// Iteration budget `T`.
    pub max_iters: usize,
    /// Stop early once `‖𝒜(X) − b‖ ≤ feas_tol`. Zero means run the full budget
    /// unless the residual vanishes exactly.
    pub feas_tol: f64,
    /// Entries within this distance of 0 or 1 are snapped after every pass.
    pub round_tol: f64,
    /// Augmented Lagrangian penalty.
    pub mu: f64,
    /// Relative eigenvalue cutoff for the pseudoinverse of `𝒜𝒜*`.
    pub cutoff: f64,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self { max_iters: 3000, feas_tol: 0.0, round_tol: 1e-9, mu: 1.0, cutoff: 1e-12 }
    }
}

impl AdmmConfig {
    pub fn with_iters(max_iters: usize) -> Self {
        Self { max_iters, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("iteration budget must be at least 1".into()));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu = {} must be positive", self.mu)));
        }
        if self.feas_tol < 0.0 || self.round_tol < 0.0 || self.cutoff < 0.0 {
            return Err(Error::InvalidParameter("tolerances must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SdpState<T: Real> {
    pub x: BlockMatrix<T>,
    /// Dual slack `S`.
    pub s: BlockMatrix<T>,
    pub y: DVector<T>,
    pub iteration: usize,
    pub primal_residual: T,
    pub dual_residual: T,
}

impl<T: Real> SdpState<T> {
    /// `X⁰ = 0`, `S⁰ = I`.
    pub fn initial(p: &StandardFormSdp<T>) -> Self {
        let x = BlockMatrix::zeros(&p.block_dims);
        let s = BlockMatrix::identity(&p.block_dims);
        let y = DVector::zeros(p.num_constraints());
        let primal_residual = p.primal_residual(&x);
        let c = p.objective.to_dense(&p.block_dims);
        let dual_residual = c.sub(&s).frobenius_norm();
        Self { x, s, y, iteration: 0, primal_residual, dual_residual }
    }
}

/// One ADMM pass.
pub fn admm_iterate<T: Real>(
    state: &SdpState<T>,
    p: &StandardFormSdp<T>,
    pinv: &NormalOperator<T>,
    round_tol: f64,
    mu: f64,
) -> Result<SdpState<T>> {
    if state.x.dims() != p.block_dims || state.s.dims() != p.block_dims {
        return Err(Error::InvalidProblem("state dimensions do not match the problem".into()));
    }
    let mu_t = T::lit(mu);
    let b = DVector::from_column_slice(&p.rhs);
    let c = p.objective.to_dense(&p.block_dims);

    let rhs = (p.apply_constraints(&state.x) - &b) * mu_t + p.apply_constraints(&state.s.sub(&c));
    let y = -pinv.apply(&rhs);
    let aty = p.adjoint(&y);
    let v = c.sub(&aty).sub(&state.x.scale(mu_t));
    let s = project_psd(&v);
    let mut x = s.sub(&v).scale(T::one() / mu_t);
    x.round_near_integers(T::lit(round_tol));

    let iteration = state.iteration + 1;
    if !x.is_finite() || !s.is_finite() || !y.iter().all(|v| v.is_finite_value()) {
        return Err(Error::Divergence { iteration });
    }
    let primal_residual = (p.apply_constraints(&x) - &b).norm();
    let dual_residual = c.sub(&aty).sub(&s).frobenius_norm();
    Ok(SdpState { x, s, y, iteration, primal_residual, dual_residual })
}

#[derive(Clone, Debug)]
pub struct SdpSolution<T: Real> {
    pub x: BlockMatrix<T>,
    pub objective_value: T,
    pub primal_residual: T,
    pub dual_residual: T,
    pub iterations_used: usize,
}

/// Stateful driver, useful when intermediate iterates are needed.
pub struct AdmmSolver<'a, T: Real> {
    problem: &'a StandardFormSdp<T>,
    normal: NormalOperator<T>,
    config: AdmmConfig,
    state: SdpState<T>,
}

impl<'a, T: Real> AdmmSolver<'a, T> {
    pub fn new(problem: &'a StandardFormSdp<T>, config: AdmmConfig) -> Result<Self> {
        config.validate()?;
        problem.validate()?;
        let normal = build_normal_operator(problem, config.cutoff)?;
        let state = SdpState::initial(problem);
        Ok(Self { problem, normal, config, state })
    }

    pub fn state(&self) -> &SdpState<T> {
        &self.state
    }

    pub fn normal_operator(&self) -> &NormalOperator<T> {
        &self.normal
    }

    pub fn step(&mut self) -> Result<&SdpState<T>> {
        self.state = admm_iterate(
            &self.state,
            self.problem,
            &self.normal,
            self.config.round_tol,
            self.config.mu,
        )?;
        Ok(&self.state)
    }

    pub fn converged(&self) -> bool {
        self.state.iteration > 0
            && self.state.primal_residual <= T::lit(self.config.feas_tol)
    }

    /// Iterate until `iteration == until`, the budget, or convergence.
    pub fn run_to(&mut self, until: usize) -> Result<&SdpState<T>> {
        let stop = until.min(self.config.max_iters);
        while self.state.iteration < stop && !self.converged() {
            self.step()?;
        }
        Ok(&self.state)
    }

    pub fn solution(&self) -> SdpSolution<T> {
        SdpSolution {
            objective_value: self.problem.objective_value(&self.state.x),
            x: self.state.x.clone(),
            primal_residual: self.state.primal_residual,
            dual_residual: self.state.dual_residual,
            iterations_used: self.state.iteration,
        }
    }
}

/// Run ADMM from `X⁰ = 0, S⁰ = I` for `config.max_iters` passes or until the
/// primal residual drops to `config.feas_tol`.
pub fn solve<T: Real>(p: &StandardFormSdp<T>, config: &AdmmConfig) -> Result<SdpSolution<T>> {
    let mut solver = AdmmSolver::new(p, config.clone())?;
    solver.run_to(config.max_iters)?;
    Ok(solver.solution())
}
