use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::advdual::WitnessVectors;
use crate::boolfn::{BitString, BooleanFunction};
use crate::compress::CompressedWitnesses;
use crate::error::{Error, Result};
use crate::linalg::{self, RANK_TOL};
use crate::scalar::Real;
use crate::space::AlgorithmSpace;

/// Which span the reflection `R = 2Δ − I` is taken about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReflectionKind {
    /// `span{ψ_x}`.
    Exact,
    /// The top `kappa_star` singular directions of the `ψ` rows.
    Svd { kappa_star: usize },
    /// `span{ψ′_x}` of compressed witnesses.
    Jl,
}

/// Witness data together with the reflection built from it.
#[derive(Clone, Copy, Debug)]
pub enum WitnessSource<'a, T: Real> {
    Exact(&'a WitnessVectors<T>),
    Svd(&'a WitnessVectors<T>, usize),
    Jl(&'a CompressedWitnesses<T>),
}

impl<T: Real> WitnessSource<'_, T> {
    pub fn kind(&self) -> ReflectionKind {
        match *self {
            WitnessSource::Exact(_) => ReflectionKind::Exact,
            WitnessSource::Svd(_, k) => ReflectionKind::Svd { kappa_star: k },
            WitnessSource::Jl(_) => ReflectionKind::Jl,
        }
    }

    pub fn function(&self) -> &BooleanFunction {
        match self {
            WitnessSource::Exact(w) | WitnessSource::Svd(w, _) => w.vectors.function(),
            WitnessSource::Jl(cw) => &cw.function,
        }
    }

    pub fn space(&self) -> AlgorithmSpace {
        match self {
            WitnessSource::Exact(w) | WitnessSource::Svd(w, _) => w.space,
            WitnessSource::Jl(cw) => cw.space,
        }
    }

    /// Size `A` of the underlying vector set.
    pub fn size(&self) -> f64 {
        match self {
            WitnessSource::Exact(w) | WitnessSource::Svd(w, _) => w.size.as_f64(),
            WitnessSource::Jl(cw) => cw.params.size,
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            WitnessSource::Exact(w) | WitnessSource::Svd(w, _) => w.c.as_f64(),
            WitnessSource::Jl(cw) => cw.params.c,
        }
    }
}

/// Diagonal `Π_x`.
pub fn build_pi_x<T: Real>(space: &AlgorithmSpace, x: &BitString) -> Result<DMatrix<T>> {
    let mask = space.pi_mask(x)?;
    Ok(DMatrix::from_fn(space.dim(), space.dim(), |r, c| {
        if r == c && mask[r] { T::one() } else { T::zero() }
    }))
}

/// Orthonormal columns spanning the range of `Δ`.
pub fn reflection_basis<T: Real>(source: &WitnessSource<'_, T>) -> Result<DMatrix<T>> {
    match *source {
        WitnessSource::Exact(w) => {
            if w.psi.is_empty() {
                return Err(Error::EmptyFamily("psi"));
            }
            Ok(linalg::orthonormal_range(&linalg::columns(w.space.dim(), &w.psi), RANK_TOL))
        }
        WitnessSource::Svd(w, kappa_star) => {
            if w.psi.is_empty() {
                return Err(Error::EmptyFamily("psi"));
            }
            let svd = linalg::thin_svd(&linalg::columns(w.space.dim(), &w.psi));
            let kappa = linalg::numerical_rank(svd.singular_values.as_slice(), RANK_TOL);
            if kappa_star == 0 || kappa_star > kappa {
                return Err(Error::KappaOutOfRange { kappa_star, kappa });
            }
            Ok(svd.u.columns(0, kappa_star).into_owned())
        }
        WitnessSource::Jl(cw) => {
            if cw.psi_c.is_empty() {
                return Err(Error::EmptyFamily("psi"));
            }
            Ok(linalg::orthonormal_range(&linalg::columns(cw.space.dim(), &cw.psi_c), RANK_TOL))
        }
    }
}

/// Dense `R = 2Δ − I`.
pub fn reflection_from<T: Real>(source: &WitnessSource<'_, T>) -> Result<DMatrix<T>> {
    let b = reflection_basis(source)?;
    let n = b.nrows();
    Ok(&b * b.transpose() * T::lit(2.0) - DMatrix::<T>::identity(n, n))
}
