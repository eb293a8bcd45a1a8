//! Dimension reduction for deciding vector sets: realification, exact
//! compression to the maximum rank, and Johnson-Lindenstrauss compression of
//! the witness vectors.

mod exact;
mod jl;
mod ortho;
mod witness;

pub use exact::{exact_compress, realify, ComplexVectorSet};
pub use jl::{jl_dimension, sample_jl_attempt, sample_jl_matrix, JlMapKind, JlProjection, DEFAULT_MAX_ATTEMPTS};
pub use ortho::{near_ortho_basis, NearOrthoBasis};
pub use witness::{
    check_jl_lemmas, jl_compress, jl_compress_with, jl_epsilon, CompressedWitnesses, JlLemmaReport, JlOptions,
    JlParams,
};
