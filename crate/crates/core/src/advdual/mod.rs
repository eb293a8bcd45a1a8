//! The general adversary dual: building it as a standard-form SDP, turning a
//! solution into a deciding vector set, and checking how well that set
//! supports a bounded-error algorithm.

mod build;
mod certificate;
mod vectors;
mod witness;

pub use build::{build_sdp, build_sdp_with_layout, GramLayout};
pub use certificate::{certify, certify_with_epsilon, Certificate};
pub use vectors::{
    extract_vectors, size_and_max_rank, verify_deciding, DecidingDeviation, DecidingVectorSet,
    Extraction,
};
pub use witness::{build_witnesses, numerical_error, WitnessVectors};

/// Default witness constant `c`.
pub const DEFAULT_C: f64 = 100.0;
