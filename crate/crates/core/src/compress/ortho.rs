use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// An orthonormal set `o_j = Σ_i a[(j, i)] ζ_i` built from nearly
/// orthonormal `ζ`.
#[derive(Clone, Debug)]
pub struct NearOrthoBasis<T: Real> {
    pub vectors: Vec<DVector<T>>,
    pub coefficients: DMatrix<T>,
}

/// Gram-Schmidt on `zeta`, tracking each output as a combination of the
/// inputs. Requires `ε·r < 1/4` and `|⟨ζ_j|ζ_i⟩ − δ_ij| ≤ ε`.
pub fn near_ortho_basis<T: Real>(zeta: &[DVector<T>], epsilon: T) -> Result<NearOrthoBasis<T>> {
    let r = zeta.len();
    if !(epsilon * T::from_count(r) < T::lit(0.25)) {
        return Err(Error::Precondition(format!("epsilon·r = {:?} is not below 1/4", epsilon * T::from_count(r))));
    }
    for (j, zj) in zeta.iter().enumerate() {
        for (i, zi) in zeta.iter().enumerate().take(j + 1) {
            let target = if i == j { T::one() } else { T::zero() };
            let dev = (zj.dot(zi) - target).abs();
            if dev > epsilon {
                return Err(Error::Precondition(format!("Gram entry ({j}, {i}) deviates by {dev:?}")));
            }
        }
    }
    let mut primes: Vec<DVector<T>> = Vec::with_capacity(r);
    let mut a_prime = DMatrix::<T>::zeros(r, r);
    for j in 0..r {
        let mut v = zeta[j].clone();
        let mut coeff = DVector::<T>::zeros(r);
        coeff[j] = T::one();
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for (k, p) in primes.iter().enumerate() {
                let t = p.dot(&v) / p.norm_squared();
                v.axpy(-t, p, T::one());
                coeff -= a_prime.row(k).transpose() * t;
            }
        }
        a_prime.set_row(j, &coeff.transpose());
        primes.push(v);
    }
    let mut coefficients = a_prime;
    let vectors = primes
        .into_iter()
        .enumerate()
        .map(|(j, p)| {
            let nrm = p.norm();
            coefficients.row_mut(j).unscale_mut(nrm);
            p / nrm
        })
        .collect();
    Ok(NearOrthoBasis { vectors, coefficients })
}
