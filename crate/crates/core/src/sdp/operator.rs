use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::StandardFormSdp;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;

/// The Moore–Penrose pseudoinverse of `𝒜𝒜*`, formed once per problem.
#[derive(Clone, Debug)]
pub struct NormalOperator<T: Real> {
    /// `𝒜𝒜*` itself: `gram[(i, k)] = ⟨A_i, A_k⟩_F`.
    pub gram: DMatrix<T>,
    pub pinv: DMatrix<T>,
    pub rank: usize,
}

impl<T: Real> NormalOperator<T> {
    pub fn apply(&self, v: &DVector<T>) -> DVector<T> {
        &self.pinv * v
    }
}

/// Frobenius Gram matrix of the constraint maps.
pub(crate) fn constraint_gram<T: Real>(p: &StandardFormSdp<T>) -> DMatrix<T> {
    let m = p.constraints.len();
    let mut by_position: HashMap<(usize, usize, usize), Vec<(usize, T)>> = HashMap::new();
    for (i, a) in p.constraints.iter().enumerate() {
        for e in &a.entries {
            let slot = by_position.entry((e.block, e.row, e.col)).or_default();
            match slot.last_mut() {
                Some((k, v)) if *k == i => *v += e.value,
                _ => slot.push((i, e.value)),
            }
        }
    }
    let mut gram = DMatrix::zeros(m, m);
    for ((_, row, col), list) in by_position {
        let weight = if row == col { T::one() } else { T::lit(2.0) };
        for &(i, vi) in &list {
            for &(k, vk) in &list {
                gram[(i, k)] += weight * vi * vk;
            }
        }
    }
    gram
}

/// Pseudoinverse of `𝒜𝒜*` via a symmetric eigendecomposition; eigenvalues
/// below `cutoff · λ_max` are treated as zero.
pub fn build_normal_operator<T: Real>(p: &StandardFormSdp<T>, cutoff: f64) -> Result<NormalOperator<T>> {
    if p.constraints.iter().all(|a| a.is_zero()) {
        return Err(Error::ZeroConstraints);
    }
    let gram = constraint_gram(p);
    let (vals, vecs) = linalg::sym_eigen(&gram);
    let top = vals[0];
    let cut = top * T::lit(cutoff);
    let m = gram.nrows();
    let mut pinv = DMatrix::zeros(m, m);
    let mut rank = 0;
    for (k, &lambda) in vals.iter().enumerate() {
        if lambda > cut {
            let q = vecs.column(k);
            pinv.ger(T::one() / lambda, &q, &q, T::one());
            rank += 1;
        }
    }
    Ok(NormalOperator { gram, pinv, rank })
}
