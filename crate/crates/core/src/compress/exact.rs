use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::advdual::DecidingVectorSet;
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::linalg::{self, RANK_TOL};
use crate::scalar::Real;

/// A vector set over `C^m`, stored like [`DecidingVectorSet`].
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVectorSet<T: Real> {
    pub function: BooleanFunction,
    pub dim: usize,
    pub blocks: Vec<DMatrix<Complex<T>>>,
}

impl<T: Real> ComplexVectorSet<T> {
    pub fn from_fn(
        function: BooleanFunction,
        dim: usize,
        mut v: impl FnMut(usize, usize) -> DVector<Complex<T>>,
    ) -> Result<Self> {
        let mut blocks = vec![DMatrix::zeros(function.len(), dim); function.n()];
        for (j, block) in blocks.iter_mut().enumerate() {
            for x in 0..function.len() {
                let vec = v(x, j);
                if vec.len() != dim {
                    return Err(Error::LengthMismatch(vec.len(), dim));
                }
                block.set_row(x, &vec.transpose());
            }
        }
        Ok(ComplexVectorSet { function, dim, blocks })
    }

    /// `Σ_{j: x_j≠y_j} ⟨v_{x,j}|v_{y,j}⟩`, conjugate-linear in the first slot.
    pub fn pair_sum(&self, x: usize, y: usize) -> Complex<T> {
        let (a, b) = (self.function.input(x), self.function.input(y));
        (0..self.function.n())
            .filter(|&j| a.bit(j) != b.bit(j))
            .map(|j| self.blocks[j].row(x).transpose().dotc(&self.blocks[j].row(y).transpose()))
            .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v)
    }
}

/// Map each `v ∈ C^m` to `Re v ⊕ Im v ∈ R^{2m}`. Real inner products of the
/// images are the real parts of the complex ones, and norms are unchanged.
pub fn realify<T: Real>(vs: &ComplexVectorSet<T>) -> Result<DecidingVectorSet<T>> {
    let m = vs.dim;
    let blocks = vs
        .blocks
        .iter()
        .map(|b| DMatrix::from_fn(b.nrows(), 2 * m, |x, l| if l < m { b[(x, l)].re } else { b[(x, l - m)].im }))
        .collect();
    DecidingVectorSet::new(vs.function.clone(), blocks)
}

/// Express every `v_{x,j}` in an orthonormal basis of
/// `span{v_{x,j} : f(x)=1}`, padded to the largest such rank.
///
/// Components of 0-input vectors orthogonal to that span are dropped; they
/// never meet a 1-input vector in a pair constraint.
pub fn exact_compress<T: Real>(vs: &DecidingVectorSet<T>) -> Result<DecidingVectorSet<T>> {
    let ones = vs.function().ones();
    let projected: Vec<DMatrix<T>> = vs
        .blocks()
        .iter()
        .map(|b| {
            let span = b.select_rows(ones.iter()).transpose();
            let q = linalg::orthonormal_range(&span, RANK_TOL);
            b * q
        })
        .collect();
    let kappa = projected.iter().map(|p| p.ncols()).max().unwrap_or(0);
    let blocks = projected
        .into_iter()
        .map(|p| {
            let mut padded = DMatrix::zeros(p.nrows(), kappa);
            padded.columns_mut(0, p.ncols()).copy_from(&p);
            padded
        })
        .collect();
    DecidingVectorSet::new(vs.function().clone(), blocks)
}
