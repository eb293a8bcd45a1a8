use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::reflection::{reflection_basis, ReflectionKind, WitnessSource};
use super::spectral::{low_phase_mass, outcome_bounds, real_phase_profile};
use crate::boolfn::BitString;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;
use crate::space::AlgorithmSpace;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub theta: f64,
    pub delta: f64,
    pub c: f64,
}

impl SimParams {
    /// `Θ = 1/(2√c A)` for the SVD reflection and `1/(4√c A)` otherwise,
    /// with `δ = 1/25`.
    pub fn default_for(kind: ReflectionKind, c: f64, size: f64) -> Self {
        let k = if matches!(kind, ReflectionKind::Svd { .. }) { 2.0 } else { 4.0 };
        SimParams { theta: 1.0 / (k * c.sqrt() * size), delta: 1.0 / 25.0, c }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::InvalidParameter(format!("theta must lie in (0, 1], got {}", self.theta)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.c > 0.0) {
            return Err(Error::InvalidParameter(format!("c must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Correct,
    Incorrect,
    /// The bounds straddle the 1/3 to 2/3 band.
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Correct => "correct",
            Verdict::Incorrect => "incorrect",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

impl Verdict {
    fn judge(label: bool, lower: f64, upper: f64) -> Self {
        let (hit, miss) = if label {
            (lower >= 2.0 / 3.0, upper <= 1.0 / 3.0)
        } else {
            (upper <= 1.0 / 3.0, lower >= 2.0 / 3.0)
        };
        if hit {
            Verdict::Correct
        } else if miss {
            Verdict::Incorrect
        } else {
            Verdict::Indeterminate
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub x: BitString,
    pub label: bool,
    /// `‖P_{Θ/2}(U)|0̂⟩‖²`.
    pub mass_half: f64,
    /// `‖P_Θ(U)|0̂⟩‖²`.
    pub mass_full: f64,
    pub lower: f64,
    pub upper: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub reflection: ReflectionKind,
    pub params: SimParams,
    pub size: f64,
    /// Rank of the reflection's +1 eigenspace.
    pub reflection_rank: usize,
    /// Phase estimation uses on the order of `(1/Θ)·ln(1/δ)` queries.
    pub query_scale: f64,
    pub max_unitarity_defect: f64,
    pub rows: Vec<SimRow>,
    pub success: bool,
}

impl SimulationReport {
    pub const CSV_HEADER: &'static str = "x,f,mass_half,mass_full,lower,upper,verdict";

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{:e},{:e},{:e},{:e},{}",
                    r.x, r.label as u8, r.mass_half, r.mass_full, r.lower, r.upper, r.verdict
                )
            })
            .collect()
    }

    /// Header line plus one line per input.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for line in self.csv_rows() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Masses of `|0̂⟩` below `Θ/2` and `Θ` for `U = (2Π_x − I)(2BBᵀ − I)`,
/// computed on the invariant subspace `span{B, Π_x B, |0̂⟩}`.
fn input_masses<T: Real>(
    space: &AlgorithmSpace,
    basis: &DMatrix<T>,
    x: &BitString,
    theta: T,
) -> Result<(T, T, T)> {
    let mask = space.pi_mask(x)?;
    let dim = space.dim();
    let k = basis.ncols();
    let two = T::lit(2.0);
    // span{B, Π_x B, |0̂⟩} = Π_x·span{B, |0̂⟩} ⊕ (I − Π_x)·span{B, |0̂⟩}, and the
    // two halves live on disjoint coordinates, so each is orthonormalized on
    // its own rows. A single SVD of the stacked generators loses accuracy
    // when Π_x B nearly lies in span B.
    let mut q_cols: Vec<DVector<T>> = Vec::new();
    for side in [true, false] {
        let rows: Vec<usize> = (0..dim).filter(|&r| mask[r] == side).collect();
        if rows.is_empty() {
            continue;
        }
        let mut gen = DMatrix::zeros(rows.len(), k + 1);
        for (i, &r) in rows.iter().enumerate() {
            gen.row_mut(i).columns_mut(0, k).copy_from(&basis.row(r));
            if r == 0 {
                gen[(i, k)] = T::one();
            }
        }
        let local = linalg::orthonormal_range(&gen, 1e-12);
        for c in 0..local.ncols() {
            let mut v = DVector::zeros(dim);
            for (i, &r) in rows.iter().enumerate() {
                v[r] = local[(i, c)];
            }
            q_cols.push(v);
        }
    }
    let q = linalg::columns(dim, &q_cols);
    // U Q = (2Π − I)(2B(BᵀQ) − Q)
    let mut uq = basis * basis.tr_mul(&q) * two - &q;
    for r in 0..dim {
        if !mask[r] {
            uq.row_mut(r).neg_mut();
        }
    }
    let uw = q.tr_mul(&uq);
    let leak = linalg::max_abs(&(&uq - &q * &uw));
    let state: DVector<T> = q.row(0).transpose();
    let profile = real_phase_profile(&uw, &state)?;
    let half = low_phase_mass(&profile, theta * T::lit(0.5));
    let full = low_phase_mass(&profile, theta);
    Ok((half, full, profile.unitarity_defect.max(leak)))
}

/// Phase-0 outcome bounds of the algorithm for every input.
pub fn simulate_function<T: Real>(source: &WitnessSource<'_, T>, params: SimParams) -> Result<SimulationReport> {
    params.validate()?;
    let basis = reflection_basis(source)?;
    let space = source.space();
    let f = source.function();
    let theta = T::lit(params.theta);
    let rows = (0..f.len())
        .into_par_iter()
        .map(|x| {
            let (half, full, defect) = input_masses(&space, &basis, f.input(x), theta)?;
            let (lower, upper) = outcome_bounds(half.as_f64(), full.as_f64(), params.delta);
            let label = f.value(x);
            let row = SimRow {
                x: f.input(x).clone(),
                label,
                mass_half: half.as_f64(),
                mass_full: full.as_f64(),
                lower,
                upper,
                verdict: Verdict::judge(label, lower, upper),
            };
            Ok((row, defect.as_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_unitarity_defect = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    if max_unitarity_defect > super::spectral::UNITARITY_TOL {
        return Err(Error::NotUnitary { defect: max_unitarity_defect });
    }
    let rows: Vec<SimRow> = rows.into_iter().map(|r| r.0).collect();
    let success = rows.iter().all(|r| r.verdict == Verdict::Correct);
    Ok(SimulationReport {
        reflection: source.kind(),
        params,
        size: source.size(),
        reflection_rank: basis.ncols(),
        query_scale: (1.0 / params.delta).ln() / params.theta,
        max_unitarity_defect,
        rows,
        success,
    })
}
