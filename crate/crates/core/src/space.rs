//! Coordinates of the algorithm space `C ⊕ C^n ⊗ C^m ⊗ C^2`.

use serde::{Deserialize, Serialize};

use crate::boolfn::BitString;
use crate::error::{Error, Result};

/// Index convention: coordinate 0 is `|0̂⟩`, then `(i, ℓ, b)` in
/// lexicographic order, i.e. `1 + (i·m + ℓ)·2 + b` (all 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmSpace {
    pub n: usize,
    pub m: usize,
}

impl AlgorithmSpace {
    pub fn new(n: usize, m: usize) -> Self {
        AlgorithmSpace { n, m }
    }

    pub fn dim(&self) -> usize {
        1 + 2 * self.n * self.m
    }

    #[inline]
    pub fn coord(&self, i: usize, l: usize, b: bool) -> usize {
        1 + (i * self.m + l) * 2 + b as usize
    }

    /// Diagonal of `Π_x = |0̂⟩⟨0̂| + Σ_i |i⟩⟨i| ⊗ I ⊗ |x_i⟩⟨x_i|`.
    pub fn pi_mask(&self, x: &BitString) -> Result<Vec<bool>> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch(x.len(), self.n));
        }
        let mut mask = vec![false; self.dim()];
        mask[0] = true;
        for i in 0..self.n {
            for l in 0..self.m {
                mask[self.coord(i, l, x.bit(i))] = true;
            }
        }
        Ok(mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_are_a_bijection() {
        let s = AlgorithmSpace::new(3, 2);
        let mut seen = vec![false; s.dim()];
        seen[0] = true;
        for i in 0..3 {
            for l in 0..2 {
                for b in [false, true] {
                    let c = s.coord(i, l, b);
                    assert!(!seen[c]);
                    seen[c] = true;
                }
            }
        }
        assert!(seen.iter().all(|&v| v));
    }

    #[test]
    fn mask_counts() {
        let s = AlgorithmSpace::new(2, 3);
        let x: BitString = "10".parse().unwrap();
        let mask = s.pi_mask(&x).unwrap();
        assert_eq!(mask.iter().filter(|&&b| b).count(), 1 + 2 * 3);
        assert!(s.pi_mask(&"1".parse().unwrap()).is_err());
    }
}
