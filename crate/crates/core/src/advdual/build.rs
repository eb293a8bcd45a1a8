use serde::{Deserialize, Serialize};

use crate::boolfn::{differing_indices, BooleanFunction};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sdp::{SparseSym, StandardFormSdp};

/// How the Gram matrix of the vectors `v_{x,j}` is laid out in the PSD variable.
///
/// No constraint couples `v_{x,j}` with `v_{y,k}` for `j ≠ k`, so the
/// cross-index blocks of the full Gram matrix are free and may be dropped.
/// `PerIndex` uses one `|X|×|X|` block per index; `Joint` keeps a single
/// `(n|X|)×(n|X|)` block indexed by `(x, j)` with `x` major.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GramLayout {
    #[default]
    PerIndex,
    Joint,
}

impl GramLayout {
    /// Recover the layout from a problem's block structure.
    pub fn detect(f: &BooleanFunction, block_dims: &[usize]) -> Self {
        if block_dims.first() == Some(&(f.n() * f.len())) {
            GramLayout::Joint
        } else {
            GramLayout::PerIndex
        }
    }

    pub(crate) fn gram_blocks(self, f: &BooleanFunction) -> usize {
        match self {
            GramLayout::PerIndex => f.n(),
            GramLayout::Joint => 1,
        }
    }

    /// (block, position) of `G[(x, j), ·]`.
    pub(crate) fn locate(self, f: &BooleanFunction, x: usize, j: usize) -> (usize, usize) {
        match self {
            GramLayout::PerIndex => (j, x),
            GramLayout::Joint => (0, x * f.n() + j),
        }
    }
}

/// [`build_sdp_with_layout`] with the per-index layout.
pub fn build_sdp<T: Real>(f: &BooleanFunction) -> Result<StandardFormSdp<T>> {
    build_sdp_with_layout(f, GramLayout::PerIndex)
}

/// Standard form of
///
/// ```text
/// min t  s.t.  Σ_{j: x_j≠y_j} ⟨v_{x,j}|v_{y,j}⟩ = 1   for f(x) ≠ f(y)
///              Σ_j ‖v_{x,j}‖² + s_x − t = 0           for x ∈ X
/// ```
///
/// over the Gram blocks, a 1×1 block for `t` and one 1×1 slack block per
/// input. Pair constraints come first (domain-index order, `x < y`), then one
/// max constraint per input.
pub fn build_sdp_with_layout<T: Real>(
    f: &BooleanFunction,
    layout: GramLayout,
) -> Result<StandardFormSdp<T>> {
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let n = f.n();
    let size = f.len();
    let gram_blocks = layout.gram_blocks(f);
    let mut block_dims = match layout {
        GramLayout::PerIndex => vec![size; n],
        GramLayout::Joint => vec![n * size],
    };
    let t_block = gram_blocks;
    block_dims.push(1);
    block_dims.extend(std::iter::repeat_n(1, size));
    let slack_block = |x: usize| t_block + 1 + x;

    let mut objective = SparseSym::new();
    objective.push(t_block, 0, 0, T::one());

    let half = T::lit(0.5);
    let mut constraints = Vec::new();
    let mut rhs = Vec::new();
    for a in 0..size {
        for b in (a + 1)..size {
            if f.value(a) == f.value(b) {
                continue;
            }
            let mut row = SparseSym::new();
            for j in differing_indices(f.input(a), f.input(b))? {
                let (block, pa) = layout.locate(f, a, j - 1);
                let (_, pb) = layout.locate(f, b, j - 1);
                row.push(block, pa, pb, half);
            }
            constraints.push(row);
            rhs.push(T::one());
        }
    }
    for x in 0..size {
        let mut row = SparseSym::new();
        for j in 0..n {
            let (block, p) = layout.locate(f, x, j);
            row.push(block, p, p, T::one());
        }
        row.push(slack_block(x), 0, 0, T::one());
        row.push(t_block, 0, 0, -T::one());
        constraints.push(row);
        rhs.push(T::zero());
    }
    StandardFormSdp::new(block_dims, objective, constraints, rhs)
}
