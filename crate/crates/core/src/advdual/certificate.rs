use serde::{Deserialize, Serialize};

use super::witness::{numerical_error, WitnessVectors};
use crate::error::Result;
use crate::linalg::{self, RANK_TOL};
use crate::scalar::Real;

/// Singular-value test deciding whether an approximate deciding set still
/// yields a bounded-error algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate<T> {
    pub epsilon: T,
    /// `s_1 ≥ … ≥ s_κ` of the matrix with rows `ψ_x`.
    pub singular_values: Vec<T>,
    pub kappa: usize,
    pub kappa_star: Option<usize>,
    pub n1: usize,
    pub size: T,
    pub c: T,
    /// `(s_k/(2√c A) − s_{k+1})/√n1` for `k = 1..=κ`, with `s_{κ+1} = 0`.
    pub thresholds: Vec<T>,
    /// Threshold at `kappa_star`, or at `κ` when nothing passes.
    pub threshold: T,
    /// `1/(2√(1000c) A)`.
    pub tail_bound: T,
    pub pass: bool,
    pub threshold_at_kappa: T,
    /// The test restricted to `κ* = κ`.
    pub pass_at_kappa: bool,
}

impl<T: Real> Certificate<T> {
    /// Whether both conditions hold at `k` (1-based).
    pub fn passes_at(&self, k: usize) -> bool {
        if k == 0 || k > self.kappa {
            return false;
        }
        let tail = self.singular_values.get(k).copied().filter(|_| k < self.kappa).unwrap_or(T::zero());
        self.epsilon <= self.thresholds[k - 1] && tail <= self.tail_bound
    }
}

pub fn certify<T: Real>(w: &WitnessVectors<T>) -> Result<Certificate<T>> {
    Ok(certify_with_epsilon(w, numerical_error(w)?))
}

/// [`certify`] with a precomputed `ε`.
pub fn certify_with_epsilon<T: Real>(w: &WitnessVectors<T>, epsilon: T) -> Certificate<T> {
    let n1 = w.psi.len();
    let svd = linalg::thin_svd(&w.psi_matrix());
    let all = svd.singular_values.as_slice();
    let kappa = linalg::numerical_rank(all, RANK_TOL);
    let s: Vec<T> = all[..kappa].to_vec();
    let two = T::lit(2.0);
    let lead = two * w.c.sqrt() * w.size;
    let sqrt_n1 = T::from_count(n1.max(1)).sqrt();
    let next = |k: usize| if k < kappa { s[k] } else { T::zero() };
    let thresholds: Vec<T> = (1..=kappa).map(|k| (s[k - 1] / lead - next(k)) / sqrt_n1).collect();
    let tail_bound = T::one() / (two * (T::lit(1000.0) * w.c).sqrt() * w.size);

    let mut cert = Certificate {
        epsilon,
        singular_values: s,
        kappa,
        kappa_star: None,
        n1,
        size: w.size,
        c: w.c,
        threshold: thresholds.last().copied().unwrap_or(T::zero()),
        threshold_at_kappa: thresholds.last().copied().unwrap_or(T::zero()),
        thresholds,
        tail_bound,
        pass: false,
        pass_at_kappa: false,
    };
    cert.pass_at_kappa = cert.passes_at(kappa);
    // Largest margin wins; ties go to the smallest κ*.
    let mut best: Option<(usize, T)> = None;
    for k in 1..=kappa {
        if cert.passes_at(k) {
            let margin = cert.thresholds[k - 1] - epsilon;
            if best.is_none_or(|(_, m)| margin > m) {
                best = Some((k, margin));
            }
        }
    }
    if let Some((k, _)) = best {
        cert.kappa_star = Some(k);
        cert.threshold = cert.thresholds[k - 1];
        cert.pass = true;
    }
    cert
}
