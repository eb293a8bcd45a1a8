use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::vectors::{size_and_max_rank, DecidingVectorSet};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::AlgorithmSpace;

/// The normalized vectors `ψ_x` (1-inputs) and `φ_x` (0-inputs) of a
/// deciding vector set, in the coordinates of [`AlgorithmSpace`].
#[derive(Clone, Debug)]
pub struct WitnessVectors<T: Real> {
    pub c: T,
    /// Size `A` of the underlying set.
    pub size: T,
    pub space: AlgorithmSpace,
    pub vectors: DecidingVectorSet<T>,
    /// Domain indices of the 1-inputs, aligned with `psi` and `nu`.
    pub ones: Vec<usize>,
    /// Domain indices of the 0-inputs, aligned with `phi` and `mu`.
    pub zeros: Vec<usize>,
    pub psi: Vec<DVector<T>>,
    pub phi: Vec<DVector<T>>,
    pub nu: Vec<T>,
    pub mu: Vec<T>,
}

impl<T: Real> WitnessVectors<T> {
    /// Rows `ψ_x` in domain order of the 1-inputs.
    pub fn psi_matrix(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.psi.len(), self.space.dim(), |r, c| self.psi[r][c])
    }

    pub fn psi_of(&self, x: usize) -> Option<&DVector<T>> {
        self.ones.iter().position(|&o| o == x).map(|k| &self.psi[k])
    }

    pub fn phi_of(&self, x: usize) -> Option<&DVector<T>> {
        self.zeros.iter().position(|&z| z == x).map(|k| &self.phi[k])
    }
}

/// `|0̂⟩ + sign·scale·Σ_i |i⟩|v_{x,i}⟩|b_i⟩` with `b_i = x_i` or its complement.
fn embed<T: Real>(
    vs: &DecidingVectorSet<T>,
    space: &AlgorithmSpace,
    x: usize,
    scale: T,
    complement: bool,
) -> DVector<T> {
    let mut out = DVector::zeros(space.dim());
    out[0] = T::one();
    let bits = vs.function().input(x);
    for i in 0..space.n {
        let b = bits.bit(i) != complement;
        for (l, &v) in vs.block(i).row(x).iter().enumerate() {
            out[space.coord(i, l, b)] = scale * v;
        }
    }
    out
}

pub fn build_witnesses<T: Real>(vs: &DecidingVectorSet<T>, c: T) -> Result<WitnessVectors<T>> {
    if !(c > T::zero()) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c:?}")));
    }
    let (size, _) = size_and_max_rank(vs);
    if !(size > T::zero()) {
        return Err(Error::ZeroSize);
    }
    let f = vs.function();
    let space = AlgorithmSpace::new(f.n(), vs.dim());
    let ca = c * size;
    let ones = f.ones();
    let zeros = f.zeros();
    let mut psi = Vec::with_capacity(ones.len());
    let mut nu = Vec::with_capacity(ones.len());
    for &x in &ones {
        let v = embed(vs, &space, x, T::one() / ca.sqrt(), false);
        let nrm2 = v.norm_squared();
        psi.push(v / nrm2.sqrt());
        nu.push(nrm2);
    }
    let mut phi = Vec::with_capacity(zeros.len());
    let mut mu = Vec::with_capacity(zeros.len());
    for &x in &zeros {
        let v = embed(vs, &space, x, -ca.sqrt(), true);
        let nrm2 = v.norm_squared();
        phi.push(v / nrm2.sqrt());
        mu.push(nrm2);
    }
    Ok(WitnessVectors { c, size, space, vectors: vs.clone(), ones, zeros, psi, phi, nu, mu })
}

/// `ε = max |⟨ψ_x|φ_y⟩|` over 1-inputs `x` and 0-inputs `y`.
pub fn numerical_error<T: Real>(w: &WitnessVectors<T>) -> Result<T> {
    if w.psi.is_empty() {
        return Err(Error::EmptyFamily("psi"));
    }
    if w.phi.is_empty() {
        return Err(Error::EmptyFamily("phi"));
    }
    let mut eps = T::zero();
    for p in &w.psi {
        for q in &w.phi {
            eps = eps.max(p.dot(q).abs());
        }
    }
    Ok(eps)
}

#[derive(Serialize)]
struct RawWitness<'a> {
    x: &'a crate::boolfn::BitString,
    normalizer: f64,
    vector: Vec<f64>,
}

impl<T: Real> Serialize for WitnessVectors<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = self.vectors.function();
        let raw = |idx: &[usize], vecs: &[DVector<T>], norms: &[T]| -> Vec<RawWitness<'_>> {
            idx.iter()
                .zip(vecs)
                .zip(norms)
                .map(|((&x, v), &z)| RawWitness {
                    x: f.input(x),
                    normalizer: z.as_f64(),
                    vector: v.iter().map(|c| c.as_f64()).collect(),
                })
                .collect()
        };
        let mut st = s.serialize_struct("WitnessVectors", 5)?;
        st.serialize_field("c", &self.c.as_f64())?;
        st.serialize_field("size", &self.size.as_f64())?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("psi", &raw(&self.ones, &self.psi, &self.nu))?;
        st.serialize_field("phi", &raw(&self.zeros, &self.phi, &self.mu))?;
        st.end()
    }
}
