//! Standard-form semidefinite programs over a block-diagonal PSD variable
//!
//! ```text
//! min tr(C X)  s.t.  tr(A_i X) = b_i,  X = diag(X_1, ..., X_k) ⪰ 0
//! ```
//!
//! and an alternating-direction augmented Lagrangian solver for them.

mod admm;
mod block;
mod operator;

pub use admm::{admm_iterate, solve, AdmmConfig, AdmmSolver, SdpSolution, SdpState};
pub use block::{project_psd, BlockMatrix};
pub use operator::{build_normal_operator, NormalOperator};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One stored entry of a symmetric block matrix. Off-diagonal entries are
/// stored once (`row < col`) and stand for both `(row, col)` and `(col, row)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, usize, T)", into = "(usize, usize, usize, T)")]
#[serde(bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de>"))]
pub struct Entry<T> {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: T,
}

impl<T> From<(usize, usize, usize, T)> for Entry<T> {
    fn from((block, row, col, value): (usize, usize, usize, T)) -> Self {
        Entry::new(block, row, col, value)
    }
}

impl<T> From<Entry<T>> for (usize, usize, usize, T) {
    fn from(e: Entry<T>) -> Self {
        (e.block, e.row, e.col, e.value)
    }
}

impl<T> Entry<T> {
    pub fn new(block: usize, row: usize, col: usize, value: T) -> Self {
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        Self { block, row, col, value }
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }
}

/// Sparse symmetric matrix in block layout, as a coordinate list.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de>"))]
pub struct SparseSym<T> {
    pub entries: Vec<Entry<T>>,
}

impl<T: Real> SparseSym<T> {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn push(&mut self, block: usize, row: usize, col: usize, value: T) {
        self.entries.push(Entry::new(block, row, col, value));
    }

    /// `tr(self · X)`.
    pub fn inner(&self, x: &BlockMatrix<T>) -> T {
        let two = T::lit(2.0);
        self.entries.iter().fold(T::zero(), |acc, e| {
            let v = x.blocks[e.block][(e.row, e.col)];
            if e.is_diagonal() {
                acc + e.value * v
            } else {
                acc + two * e.value * v
            }
        })
    }

    /// `out += scale · self`.
    pub fn add_to(&self, out: &mut BlockMatrix<T>, scale: T) {
        for e in &self.entries {
            let b = &mut out.blocks[e.block];
            b[(e.row, e.col)] += scale * e.value;
            if !e.is_diagonal() {
                b[(e.col, e.row)] += scale * e.value;
            }
        }
    }

    pub fn to_dense(&self, dims: &[usize]) -> BlockMatrix<T> {
        let mut out = BlockMatrix::zeros(dims);
        self.add_to(&mut out, T::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.value == T::zero())
    }
}

/// `min tr(C X)` subject to `tr(A_i X) = b_i` and block-diagonal `X ⪰ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de>"))]
pub struct StandardFormSdp<T> {
    pub block_dims: Vec<usize>,
    pub objective: SparseSym<T>,
    pub constraints: Vec<SparseSym<T>>,
    pub rhs: Vec<T>,
}

impl<T: Real> StandardFormSdp<T> {
    pub fn new(
        block_dims: Vec<usize>,
        objective: SparseSym<T>,
        constraints: Vec<SparseSym<T>>,
        rhs: Vec<T>,
    ) -> Result<Self> {
        let p = Self { block_dims, objective, constraints, rhs };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_dims.is_empty() || self.block_dims.contains(&0) {
            return Err(Error::InvalidProblem("block dimensions must be positive".into()));
        }
        if self.rhs.len() != self.constraints.len() {
            return Err(Error::InvalidProblem(format!(
                "{} right-hand sides for {} constraints",
                self.rhs.len(),
                self.constraints.len()
            )));
        }
        if let Some(b) = self.rhs.iter().find(|b| !b.is_finite_value()) {
            return Err(Error::InvalidProblem(format!("non-finite right-hand side {b:?}")));
        }
        let check = |m: &SparseSym<T>, what: &str| -> Result<()> {
            for e in &m.entries {
                let dim = *self.block_dims.get(e.block).ok_or_else(|| {
                    Error::InvalidProblem(format!("{what}: block {} out of range", e.block))
                })?;
                if e.row >= dim || e.col >= dim {
                    return Err(Error::InvalidProblem(format!(
                        "{what}: entry ({}, {}) outside block {} of size {dim}",
                        e.row, e.col, e.block
                    )));
                }
                if !e.value.is_finite_value() {
                    return Err(Error::InvalidProblem(format!("{what}: non-finite entry")));
                }
            }
            Ok(())
        };
        check(&self.objective, "objective")?;
        for (i, a) in self.constraints.iter().enumerate() {
            check(a, &format!("constraint {i}"))?;
        }
        Ok(())
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// `𝒜(X) = [tr(A_1 X), ..., tr(A_m X)]`.
    pub fn apply_constraints(&self, x: &BlockMatrix<T>) -> nalgebra::DVector<T> {
        nalgebra::DVector::from_iterator(
            self.constraints.len(),
            self.constraints.iter().map(|a| a.inner(x)),
        )
    }

    /// `𝒜*(y) = Σ_i y_i A_i`.
    pub fn adjoint(&self, y: &nalgebra::DVector<T>) -> BlockMatrix<T> {
        let mut out = BlockMatrix::zeros(&self.block_dims);
        for (a, &yi) in self.constraints.iter().zip(y.iter()) {
            a.add_to(&mut out, yi);
        }
        out
    }

    pub fn objective_value(&self, x: &BlockMatrix<T>) -> T {
        self.objective.inner(x)
    }

    pub fn primal_residual(&self, x: &BlockMatrix<T>) -> T {
        let b = nalgebra::DVector::from_column_slice(&self.rhs);
        (self.apply_constraints(x) - b).norm()
    }
}
