use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;

/// Largest accepted deviation from unitarity.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Absolute slack on phase comparisons.
pub const PHASE_SLACK: f64 = 1e-12;

/// Eigenphases of a unitary and the weight a state puts on each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile<T> {
    /// Distinct phases, increasing.
    pub phases: Vec<T>,
    pub weights: Vec<T>,
    pub unitarity_defect: T,
}

fn group<T: Real>(mut pairs: Vec<(T, T)>, tol: T) -> (Vec<T>, Vec<T>) {
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut phases: Vec<T> = Vec::new();
    let mut weights: Vec<T> = Vec::new();
    for (p, w) in pairs {
        match phases.last() {
            Some(&last) if (p - last).abs() <= tol => *weights.last_mut().unwrap() += w,
            _ => {
                phases.push(p);
                weights.push(w);
            }
        }
    }
    (phases, weights)
}

fn unitarity_error<T: Real>(u: &DMatrix<Complex<T>>) -> T {
    let n = u.nrows();
    let g = u.adjoint() * u - DMatrix::<Complex<T>>::identity(n, n);
    g.iter().fold(T::zero(), |a, z| a.max(z.modulus()))
}

/// Eigenphases in `(−π, π]` of a unitary `u` and the weights of the unit
/// vector `state`. Eigenvalues closer than `1e-9` are merged.
pub fn phase_profile<T: Real>(u: &DMatrix<Complex<T>>, state: &DVector<Complex<T>>) -> Result<PhaseProfile<T>> {
    if !u.is_square() || u.nrows() != state.len() {
        return Err(Error::LengthMismatch(u.nrows(), state.len()));
    }
    let defect = unitarity_error(u);
    if defect > T::lit(UNITARITY_TOL) {
        return Err(Error::NotUnitary { defect: defect.as_f64() });
    }
    let (q, t) = u
        .clone()
        .try_schur(T::default_epsilon(), 10_000)
        .ok_or(Error::NoConvergence)?
        .unpack();
    let coeffs = q.adjoint() * state;
    let mut eig_defect = T::zero();
    let pairs = (0..u.nrows())
        .map(|i| {
            let lambda = t[(i, i)];
            eig_defect = eig_defect.max((lambda.modulus() - T::one()).abs());
            let mut phase = lambda.argument();
            // Keep phases in (−π, π].
            if phase <= -T::pi() + T::lit(PHASE_SLACK) {
                phase = T::pi();
            }
            (phase, coeffs[i].modulus_squared())
        })
        .collect();
    let (phases, weights) = group(pairs, T::lit(1e-9));
    Ok(PhaseProfile { phases, weights, unitarity_defect: eig_defect })
}

/// Profile of a real orthogonal `u` and real unit `state`, through
/// `H = (U + Uᵀ)/2`: each eigenspace of `H` with eigenvalue `cos β` is the
/// sum of the `e^{±iβ}` eigenspaces of `U`, so the reported phases are
/// `|β| ∈ [0, π]` with the `±β` weights pooled.
pub fn real_phase_profile<T: Real>(u: &DMatrix<T>, state: &DVector<T>) -> Result<PhaseProfile<T>> {
    if !u.is_square() || u.nrows() != state.len() {
        return Err(Error::LengthMismatch(u.nrows(), state.len()));
    }
    let n = u.nrows();
    let defect = linalg::max_abs(&(u.tr_mul(u) - DMatrix::<T>::identity(n, n)));
    if defect > T::lit(UNITARITY_TOL) {
        return Err(Error::NotUnitary { defect: defect.as_f64() });
    }
    let h = (u + u.transpose()) * T::lit(0.5);
    let (vals, vecs) = linalg::sym_eigen(&h);
    let coeffs = vecs.tr_mul(state);
    let pairs = (0..n)
        .map(|i| (vals[i].max(-T::one()).min(T::one()).acos(), coeffs[i] * coeffs[i]))
        .collect();
    let (phases, weights) = group(pairs, T::lit(1e-9));
    Ok(PhaseProfile { phases, weights, unitarity_defect: defect })
}

/// `‖P_Θ(U)|s⟩‖²`: weight on phases with `|β| ≤ Θ`.
pub fn low_phase_mass<T: Real>(p: &PhaseProfile<T>, theta: T) -> T {
    let cut = theta + T::lit(PHASE_SLACK);
    p.phases
        .iter()
        .zip(&p.weights)
        .filter(|(b, _)| b.abs() <= cut)
        .fold(T::zero(), |a, (_, &w)| a + w)
}

/// Phase-estimation bounds on the probability of reading phase 0 from the
/// masses below `Θ/2` and `Θ`: `mass_half·(1−δ) − δ ≤ p₀ ≤ mass_full + δ`,
/// clamped to `[0, 1]`.
pub fn outcome_bounds<T: Real>(mass_half: T, mass_full: T, delta: T) -> (T, T) {
    let lower = (mass_half * (T::one() - delta) - delta).max(T::zero()).min(T::one());
    let upper = (mass_full + delta).min(T::one());
    (lower, upper)
}

pub fn pe_outcome_bounds<T: Real>(p: &PhaseProfile<T>, theta: T, delta: T) -> (T, T) {
    outcome_bounds(low_phase_mass(p, theta * T::lit(0.5)), low_phase_mass(p, theta), delta)
}
