use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::reflection::{reflection_from, WitnessSource};
use super::spectral::{low_phase_mass, phase_profile};
use crate::advdual::{numerical_error, WitnessVectors};
use crate::error::{Error, Result};
use crate::linalg::{self, RANK_TOL};
use crate::report::Bound;
use crate::scalar::Real;

/// Round-off allowance when comparing the two sides of an inequality.
const SLACK: f64 = 1e-10;

/// Both sides of a lemma's inequality, oriented as `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// The lemma's hypothesis quantity.
    pub epsilon: f64,
    pub holds: bool,
}

/// Mass of `P_Θ(U)` on an arbitrary vector, as `(‖P_Θ v‖², ‖v‖²)`.
fn projected_mass<T: Real>(u: &DMatrix<Complex<T>>, v: &DVector<Complex<T>>, theta: T) -> Result<T> {
    let norm = v.norm();
    if norm == T::zero() {
        return Ok(T::zero());
    }
    let profile = phase_profile(u, &v.unscale(norm))?;
    Ok(low_phase_mass(&profile, theta) * norm * norm)
}

/// With `ε = ‖(I − U)v‖²` for unit `v`: `‖P_Θ(U)v‖² ≥ 1 − 1.1ε/Θ²`.
/// Reported as `lhs = 1 − 1.1ε/Θ²`, `rhs = ‖P_Θ(U)v‖²`.
pub fn check_preserve_lemma<T: Real>(u: &DMatrix<Complex<T>>, v: &DVector<Complex<T>>, theta: T) -> Result<LemmaCheck> {
    if !(theta > T::zero() && theta <= T::one()) {
        return Err(Error::InvalidParameter(format!("theta must lie in (0, 1], got {theta:?}")));
    }
    let eps = (v - u * v).norm_squared();
    let mass = projected_mass(u, v, theta)?;
    let lhs = T::one() - T::lit(1.1) * eps / (theta * theta);
    Ok(LemmaCheck {
        lhs: lhs.as_f64(),
        rhs: mass.as_f64(),
        epsilon: eps.as_f64(),
        holds: lhs.as_f64() <= mass.as_f64() + SLACK,
    })
}

/// With `U = (2Π − I)R` and `ε = ‖(I + R)w‖`:
/// `‖P_Θ(U)Πw‖ ≤ ε/2 + (Θ/2)‖w‖`.
pub fn check_robust_gap_lemma<T: Real>(
    pi: &DMatrix<Complex<T>>,
    r: &DMatrix<Complex<T>>,
    w: &DVector<Complex<T>>,
    theta: T,
) -> Result<LemmaCheck> {
    if !(theta > T::zero()) {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta:?}")));
    }
    let n = pi.nrows();
    let two = Complex::new(T::lit(2.0), T::zero());
    let u = (pi * two - DMatrix::<Complex<T>>::identity(n, n)) * r;
    let eps = (w + r * w).norm();
    let lhs = projected_mass(&u, &(pi * w), theta)?.sqrt();
    let half = T::lit(0.5);
    let rhs = eps * half + theta * half * w.norm();
    Ok(LemmaCheck {
        lhs: lhs.as_f64(),
        rhs: rhs.as_f64(),
        epsilon: eps.as_f64(),
        holds: lhs.as_f64() <= rhs.as_f64() + SLACK,
    })
}

/// The two singular-value bounds for the reflection about the top `κ*`
/// singular directions of the `ψ` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvdLemmaReport {
    pub kappa_star: usize,
    /// `max ‖Rψ_x − ψ_x‖ ≤ 2 s_{κ*+1}`.
    pub psi: Bound,
    /// `max ‖(I + R)φ_y‖ ≤ 2(s_{κ*+1} + ε√n₁)/s_{κ*}`.
    pub phi: Bound,
    pub holds: bool,
}

pub fn check_svd_lemmas<T: Real>(w: &WitnessVectors<T>, kappa_star: usize) -> Result<SvdLemmaReport> {
    let r = reflection_from(&WitnessSource::Svd(w, kappa_star))?;
    let svd = linalg::thin_svd(&linalg::columns(w.space.dim(), &w.psi));
    let s = svd.singular_values.as_slice();
    let kappa = linalg::numerical_rank(s, RANK_TOL);
    let next = if kappa_star < kappa { s[kappa_star].as_f64() } else { 0.0 };
    let eps = numerical_error(w)?.as_f64();
    let psi_worst = w.psi.iter().map(|p| (&r * p - p).norm().as_f64()).fold(0.0, f64::max);
    let phi_worst = w.phi.iter().map(|q| (&r * q + q).norm().as_f64()).fold(0.0, f64::max);
    let n1 = w.psi.len() as f64;
    let psi = Bound::new(psi_worst, 2.0 * next + SLACK);
    let phi = Bound::new(phi_worst, 2.0 * (next + eps * n1.sqrt()) / s[kappa_star - 1].as_f64() + SLACK);
    Ok(SvdLemmaReport { kappa_star, psi, phi, holds: psi.holds && phi.holds })
}
