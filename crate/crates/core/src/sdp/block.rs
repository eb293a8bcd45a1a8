use nalgebra::DMatrix;

use crate::linalg;
use crate::scalar::Real;

/// A block-diagonal symmetric matrix stored block by block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix<T: Real> {
    pub blocks: Vec<DMatrix<T>>,
}

impl<T: Real> BlockMatrix<T> {
    pub fn zeros(dims: &[usize]) -> Self {
        Self { blocks: dims.iter().map(|&d| DMatrix::zeros(d, d)).collect() }
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self { blocks: dims.iter().map(|&d| DMatrix::identity(d, d)).collect() }
    }

    pub fn from_blocks(blocks: Vec<DMatrix<T>>) -> Self {
        Self { blocks }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.blocks.iter().map(|b| b.norm_squared()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    /// `tr(self · other)` for symmetric blocks.
    pub fn dot(&self, other: &Self) -> T {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.dot(b)).fold(T::zero(), |a, b| a + b)
    }

    pub fn trace(&self) -> T {
        self.blocks.iter().map(|b| b.trace()).fold(T::zero(), |a, b| a + b)
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(&DMatrix<T>, &DMatrix<T>) -> DMatrix<T>) -> Self {
        Self { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self { blocks: self.blocks.iter().map(|b| b * s).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|v| v.is_finite_value()))
    }

    pub fn max_asymmetry(&self) -> T {
        self.blocks
            .iter()
            .map(|b| linalg::max_abs(&(b - b.transpose())))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Smallest eigenvalue over all blocks.
    pub fn min_eigenvalue(&self) -> T {
        self.blocks
            .iter()
            .map(|b| {
                let (vals, _) = linalg::sym_eigen(b);
                vals[vals.len() - 1]
            })
            .fold(T::max_value().unwrap_or(T::one()), |a, b| a.min(b))
    }

    /// Snap entries within `tol` of 0 or 1 to that integer.
    pub fn round_near_integers(&mut self, tol: T) {
        if tol <= T::zero() {
            return;
        }
        for b in &mut self.blocks {
            for v in b.iter_mut() {
                if v.abs() <= tol {
                    *v = T::zero();
                } else if (*v - T::one()).abs() <= tol {
                    *v = T::one();
                }
            }
        }
    }
}

/// Blockwise Frobenius-nearest PSD matrix. Each block is symmetrized first;
/// 1×1 and diagonal blocks are clamped instead of eigendecomposed.
pub fn project_psd<T: Real>(v: &BlockMatrix<T>) -> BlockMatrix<T> {
    BlockMatrix { blocks: v.blocks.iter().map(linalg::project_psd_dense).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    #[test]
    fn clamps_diagonal_block() {
        let v = BlockMatrix::from_blocks(vec![dmatrix![2.0, 0.0; 0.0, -3.0]]);
        assert_eq!(project_psd(&v).blocks[0], dmatrix![2.0, 0.0; 0.0, 0.0]);
    }

    #[test]
    fn psd_input_is_fixed() {
        let v = BlockMatrix::from_blocks(vec![dmatrix![2.0, 1.0; 1.0, 2.0], dmatrix![0.5]]);
        let p = project_psd(&v);
        assert!(p.sub(&v).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rounding_is_identity_at_zero_tolerance() {
        let mut m = BlockMatrix::from_blocks(vec![dmatrix![1e-12, 1.0 - 1e-12; 1.0 - 1e-12, 0.3]]);
        let before = m.clone();
        m.round_near_integers(0.0);
        assert_eq!(m, before);
        m.round_near_integers(1e-9);
        assert_eq!(m.blocks[0], dmatrix![0.0, 1.0; 1.0, 0.3]);
    }

    fn arb_block() -> impl Strategy<Value = DMatrix<f64>> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec(-5.0f64..5.0, n * n)
                .prop_map(move |v| {
                    let m = DMatrix::from_vec(n, n, v);
                    (&m + m.transpose()) * 0.5
                })
        })
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_nonexpansive(a in arb_block(), b in arb_block()) {
            let pa = project_psd(&BlockMatrix::from_blocks(vec![a.clone()]));
            let ppa = project_psd(&pa);
            prop_assert!(pa.sub(&ppa).frobenius_norm() < 1e-9);
            prop_assert!(pa.min_eigenvalue() > -1e-9);
            if a.nrows() == b.nrows() {
                let pb = project_psd(&BlockMatrix::from_blocks(vec![b.clone()]));
                let lhs = pa.sub(&pb).frobenius_norm();
                let rhs = (&a - &b).norm();
                prop_assert!(lhs <= rhs + 1e-9);
            }
        }
    }
}
