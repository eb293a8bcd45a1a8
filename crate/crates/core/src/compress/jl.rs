use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_MAX_ATTEMPTS: usize = 100;

/// How the sampled map is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JlMapKind {
    /// The `N×d` Gaussian matrix itself.
    Dense,
    /// `N > d`: a `d×d` matrix `F` with `FᵀF` distributed exactly as `SᵀS`
    /// for Gaussian `S`, so `Fu` has the same inner products as `Su`.
    Factored,
}

/// A sampled projection `S` with entries `N(0, 1/N)`.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct JlProjection<T: Real> {
    /// Nominal compressed dimension `N`.
    pub n_rows: u64,
    pub d: usize,
    pub kind: JlMapKind,
    pub epsilon: f64,
    pub verified: bool,
    pub seed: u64,
    /// Index `k` of the accepted attempt (its seed is `seed + k`).
    pub attempt: usize,
    pub attempts: usize,
    /// Largest ratio of observed distortion to allowed distortion.
    pub worst_ratio: f64,
    #[serde(skip)]
    pub matrix: DMatrix<T>,
}

impl<T: Real> JlProjection<T> {
    pub fn output_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &DVector<T>) -> DVector<T> {
        &self.matrix * v
    }
}

/// `N = ⌈8 ln(k+1)/ε²⌉ + 1` for a family of `k` vectors.
pub fn jl_dimension(family_size: usize, epsilon: f64) -> u64 {
    (8.0 * ((family_size + 1) as f64).ln() / (epsilon * epsilon)).ceil() as u64 + 1
}

/// The matrix drawn by attempt `attempt`, reproducible from the seed.
pub fn sample_jl_attempt<T: Real>(d: usize, n_rows: u64, seed: u64, attempt: usize) -> DMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
    let n = n_rows as f64;
    if n_rows as u128 <= d as u128 {
        let scale = 1.0 / n.sqrt();
        return DMatrix::from_fn(n_rows as usize, d, |_, _| {
            let g: f64 = StandardNormal.sample(&mut rng);
            T::lit(g * scale)
        });
    }
    // Bartlett: L lower triangular with L_ii² ~ χ²_{N−i}, L_ij ~ N(0,1)
    // gives LLᵀ ~ Wishart_d(I, N), the law of GᵀG for N×d Gaussian G.
    let mut l = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        let chi = ChiSquared::new(n - i as f64).expect("positive degrees of freedom");
        l[(i, i)] = chi.sample(&mut rng).sqrt();
        for j in 0..i {
            l[(i, j)] = StandardNormal.sample(&mut rng);
        }
    }
    let scale = 1.0 / n.sqrt();
    DMatrix::from_fn(d, d, |r, c| T::lit(l[(c, r)] * scale))
}

/// Worst ratio of distortion to its allowance over `family ∪ {0}`: pairwise
/// squared distances within `ε‖u−v‖²` and inner products within
/// `2ε(‖u‖²+‖v‖²)`. A ratio ≤ 1 means the map verifies.
fn worst_ratio<T: Real>(family: &[DVector<T>], matrix: &DMatrix<T>, epsilon: f64) -> f64 {
    let k = family.len();
    let d = family[0].len();
    let mut cols = DMatrix::<f64>::zeros(d, k);
    for (c, v) in family.iter().enumerate() {
        for r in 0..d {
            cols[(r, c)] = v[r].as_f64();
        }
    }
    let m = matrix.map(|v| v.as_f64());
    let images = &m * &cols;
    let g = cols.transpose() * &cols;
    let h = images.transpose() * &images;
    // Gram-based distances lose about machine epsilon times the norms.
    let slack = |a: usize, b: usize| 64.0 * f64::EPSILON * (g[(a, a)] + g[(b, b)] + h[(a, a)] + h[(b, b)]);
    let mut worst = 0.0f64;
    let mut ratio = |err: f64, allowed: f64, a: usize, b: usize| {
        let err = (err - slack(a, b)).max(0.0);
        if err > 0.0 {
            worst = worst.max(if allowed > 0.0 { err / allowed } else { f64::INFINITY });
        }
    };
    for a in 0..k {
        // Pairs with the origin.
        ratio((h[(a, a)] - g[(a, a)]).abs(), epsilon * g[(a, a)], a, a);
        for b in 0..a {
            if family[a] == family[b] {
                continue;
            }
            let dist = g[(a, a)] + g[(b, b)] - 2.0 * g[(a, b)];
            let dist_img = h[(a, a)] + h[(b, b)] - 2.0 * h[(a, b)];
            ratio((dist_img - dist).abs(), epsilon * dist, a, b);
        }
        for b in 0..=a {
            let allowed = 2.0 * epsilon * (g[(a, a)] + g[(b, b)]);
            ratio((h[(a, b)] - g[(a, b)]).abs(), allowed, a, b);
        }
    }
    worst
}

/// Sample Gaussian projections until one preserves the family to `epsilon`.
/// Attempt `k` uses seed `seed + k`; the first verifying attempt is kept.
/// When every attempt fails, the least distorting one is returned with
/// `verified = false`.
pub fn sample_jl_matrix<T: Real>(
    d: usize,
    epsilon: f64,
    family: &[DVector<T>],
    max_attempts: usize,
    seed: u64,
) -> Result<JlProjection<T>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("JL epsilon must be positive, got {epsilon}")));
    }
    if family.is_empty() {
        return Err(Error::EmptyFamily("JL family"));
    }
    if max_attempts == 0 {
        return Err(Error::InvalidParameter("max_attempts must be at least 1".into()));
    }
    if let Some(v) = family.iter().find(|v| v.len() != d) {
        return Err(Error::LengthMismatch(v.len(), d));
    }
    let n_rows = jl_dimension(family.len(), epsilon);
    let kind = if n_rows as u128 <= d as u128 { JlMapKind::Dense } else { JlMapKind::Factored };
    let mut best: Option<JlProjection<T>> = None;
    for attempt in 0..max_attempts {
        let matrix = sample_jl_attempt::<T>(d, n_rows, seed, attempt);
        let ratio = if d == 0 { 0.0 } else { worst_ratio(family, &matrix, epsilon) };
        let candidate = JlProjection {
            n_rows,
            d,
            kind,
            epsilon,
            verified: ratio <= 1.0,
            seed,
            attempt,
            attempts: attempt + 1,
            worst_ratio: ratio,
            matrix,
        };
        if candidate.verified {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|b| ratio < b.worst_ratio) {
            best = Some(candidate);
        }
    }
    let mut best = best.expect("at least one attempt");
    best.attempts = max_attempts;
    Ok(best)
}
