use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::build::GramLayout;
use crate::boolfn::{BitString, BooleanFunction};
use crate::error::{Error, Result};
use crate::linalg::{self, RANK_TOL};
use crate::scalar::Real;
use crate::sdp::SdpSolution;

/// Vectors `v_{x,j} ∈ R^m` for every input `x` and index `j`.
///
/// Stored per index: `blocks[j]` is `|X|×m` with row `x` holding `v_{x,j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecidingVectorSet<T: Real> {
    function: BooleanFunction,
    dim: usize,
    blocks: Vec<DMatrix<T>>,
}

impl<T: Real> DecidingVectorSet<T> {
    pub fn new(function: BooleanFunction, blocks: Vec<DMatrix<T>>) -> Result<Self> {
        if blocks.len() != function.n() {
            return Err(Error::LengthMismatch(blocks.len(), function.n()));
        }
        let dim = blocks.first().map_or(0, |b| b.ncols());
        for b in &blocks {
            if b.nrows() != function.len() {
                return Err(Error::LengthMismatch(b.nrows(), function.len()));
            }
            if b.ncols() != dim {
                return Err(Error::LengthMismatch(b.ncols(), dim));
            }
        }
        Ok(DecidingVectorSet { function, dim, blocks })
    }

    /// Build from a closure returning `v_{x,j}` (domain index, 0-based index).
    pub fn from_fn(
        function: BooleanFunction,
        dim: usize,
        mut v: impl FnMut(usize, usize) -> DVector<T>,
    ) -> Result<Self> {
        let mut blocks = vec![DMatrix::zeros(function.len(), dim); function.n()];
        for (j, block) in blocks.iter_mut().enumerate() {
            for x in 0..function.len() {
                let vec = v(x, j);
                if vec.len() != dim {
                    return Err(Error::LengthMismatch(vec.len(), dim));
                }
                block.set_row(x, &vec.transpose());
            }
        }
        Self::new(function, blocks)
    }

    pub fn function(&self) -> &BooleanFunction {
        &self.function
    }

    pub fn n(&self) -> usize {
        self.function.n()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block(&self, j: usize) -> &DMatrix<T> {
        &self.blocks[j]
    }

    pub fn blocks(&self) -> &[DMatrix<T>] {
        &self.blocks
    }

    pub fn vector(&self, x: usize, j: usize) -> DVector<T> {
        self.blocks[j].row(x).transpose()
    }

    /// `Σ_j ‖v_{x,j}‖²`.
    pub fn norm_sq(&self, x: usize) -> T {
        self.blocks
            .iter()
            .map(|b| b.row(x).norm_squared())
            .fold(T::zero(), |a, b| a + b)
    }

    /// `Σ_{j: x_j≠y_j} ⟨v_{x,j}|v_{y,j}⟩`.
    pub fn pair_sum(&self, x: usize, y: usize) -> T {
        let (a, b) = (self.function.input(x), self.function.input(y));
        (0..self.n())
            .filter(|&j| a.bit(j) != b.bit(j))
            .map(|j| self.blocks[j].row(x).dot(&self.blocks[j].row(y)))
            .fold(T::zero(), |acc, v| acc + v)
    }

    pub fn scaled(&self, s: T) -> Self {
        DecidingVectorSet {
            function: self.function.clone(),
            dim: self.dim,
            blocks: self.blocks.iter().map(|b| b * s).collect(),
        }
    }

    /// The same vectors viewed as a set for `¬f`. The constraints only
    /// involve pairs with different labels, so this is still deciding.
    pub fn negated(&self) -> Self {
        DecidingVectorSet {
            function: self.function.negate(),
            dim: self.dim,
            blocks: self.blocks.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    x: BitString,
    vectors: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    function: BooleanFunction,
    dimension: usize,
    vectors: Vec<RawEntry>,
}

impl<T: Real> Serialize for DecidingVectorSet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vectors = (0..self.function.len())
            .map(|x| RawEntry {
                x: self.function.input(x).clone(),
                vectors: self
                    .blocks
                    .iter()
                    .map(|b| b.row(x).iter().map(|v| v.as_f64()).collect())
                    .collect(),
            })
            .collect();
        RawSet { function: self.function.clone(), dimension: self.dim, vectors }.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for DecidingVectorSet<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSet::deserialize(d)?;
        if raw.vectors.len() != raw.function.len() {
            return Err(D::Error::custom("one vector entry per domain element expected"));
        }
        let f = raw.function;
        let mut blocks = vec![DMatrix::zeros(f.len(), raw.dimension); f.n()];
        for (x, entry) in raw.vectors.iter().enumerate() {
            if &entry.x != f.input(x) {
                return Err(D::Error::custom(format!("entry {x} is {}, expected {}", entry.x, f.input(x))));
            }
            if entry.vectors.len() != f.n() {
                return Err(D::Error::custom(format!("entry {} needs {} vectors", entry.x, f.n())));
            }
            for (j, v) in entry.vectors.iter().enumerate() {
                if v.len() != raw.dimension {
                    return Err(D::Error::custom(format!("entry {} has a vector of wrong length", entry.x)));
                }
                for (l, &c) in v.iter().enumerate() {
                    blocks[j][(x, l)] = T::lit(c);
                }
            }
        }
        DecidingVectorSet::new(f, blocks).map_err(D::Error::custom)
    }
}

/// Factorization of a solver's Gram blocks.
#[derive(Clone, Debug)]
pub struct Extraction<T: Real> {
    pub vectors: DecidingVectorSet<T>,
    /// `‖G − VVᵀ‖_F`, summed in quadrature over Gram blocks.
    pub reconstruction_error: T,
    /// Kept eigenpairs per Gram block.
    pub block_ranks: Vec<usize>,
}

/// Factor the Gram part of `sol` as `G ≈ VVᵀ`, keeping eigenpairs with
/// `λ > rank_tol·λ_max`. Negative eigenvalues down to
/// `−rank_tol·λ_max·dim` are accepted as round-off, since entrywise rounding
/// by up to `rank_tol` can move the spectrum by `dim·rank_tol`.
pub fn extract_vectors<T: Real>(
    sol: &SdpSolution<T>,
    f: &BooleanFunction,
    rank_tol: f64,
) -> Result<Extraction<T>> {
    let dims = sol.x.dims();
    let layout = GramLayout::detect(f, &dims);
    let grams = layout.gram_blocks(f);
    if dims.len() < grams {
        return Err(Error::InvalidProblem("solution has too few blocks".into()));
    }
    let size = f.len();
    let mut factors = Vec::with_capacity(grams);
    let mut err2 = T::zero();
    for g in &sol.x.blocks[..grams] {
        let g = linalg::symmetrize(g);
        let (vals, vecs) = linalg::sym_eigen(&g);
        let top = vals[0].max(T::zero());
        let min = vals[vals.len() - 1];
        if min < -(T::lit(rank_tol) * top * T::from_count(g.nrows())) {
            return Err(Error::NotPsd { min_eigenvalue: min.as_f64() });
        }
        let cut = T::lit(rank_tol) * top;
        let kept = if top > T::zero() { vals.iter().take_while(|&&l| l > cut).count() } else { 0 };
        let mut v = DMatrix::zeros(g.nrows(), kept);
        for k in 0..kept {
            let s = vals[k].sqrt();
            v.set_column(k, &(vecs.column(k) * s));
        }
        err2 += (&g - &v * v.transpose()).norm_squared();
        factors.push(v);
    }
    let block_ranks: Vec<usize> = factors.iter().map(|v| v.ncols()).collect();
    let m = block_ranks.iter().copied().max().unwrap_or(0);
    let blocks = match layout {
        GramLayout::PerIndex => factors
            .into_iter()
            .map(|v| {
                let mut padded = DMatrix::zeros(size, m);
                padded.columns_mut(0, v.ncols()).copy_from(&v);
                padded
            })
            .collect(),
        GramLayout::Joint => {
            let v = &factors[0];
            (0..f.n())
                .map(|j| DMatrix::from_fn(size, m, |x, l| v[(x * f.n() + j, l)]))
                .collect()
        }
    };
    Ok(Extraction {
        vectors: DecidingVectorSet::new(f.clone(), blocks)?,
        reconstruction_error: err2.sqrt(),
        block_ranks,
    })
}

/// Size `A = max_x Σ_j ‖v_{x,j}‖²` and maximum rank `κ′`, the largest
/// numerical rank of `{v_{x,j} : f(x)=1}` over `j`.
pub fn size_and_max_rank<T: Real>(vs: &DecidingVectorSet<T>) -> (T, usize) {
    let size = (0..vs.function.len())
        .map(|x| vs.norm_sq(x))
        .fold(T::zero(), |a, b| a.max(b));
    let ones = vs.function.ones();
    let kappa = vs
        .blocks
        .iter()
        .map(|b| {
            let rows = b.select_rows(ones.iter());
            let svd = linalg::thin_svd(&rows);
            linalg::numerical_rank(svd.singular_values.as_slice(), RANK_TOL)
        })
        .max()
        .unwrap_or(0);
    (size, kappa)
}

/// Worst violation of the pair constraints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecidingDeviation<T> {
    pub max_deviation: T,
    pub within_tol: bool,
    /// Domain indices `(x, y)`, `f(x)=1`, of the worst pair.
    pub worst_pair: Option<(usize, usize)>,
}

/// `max |Σ_{j: x_j≠y_j} ⟨v_{x,j}|v_{y,j}⟩ − 1|` over mixed pairs.
pub fn verify_deciding<T: Real>(vs: &DecidingVectorSet<T>, tol: T) -> DecidingDeviation<T> {
    let mut worst = T::zero();
    let mut worst_pair = None;
    for (x, y) in vs.function.mixed_pairs() {
        let dev = (vs.pair_sum(x, y) - T::one()).abs();
        if worst_pair.is_none() || dev > worst {
            worst = dev;
            worst_pair = Some((x, y));
        }
    }
    DecidingDeviation { max_deviation: worst, within_tol: worst <= tol, worst_pair }
}
