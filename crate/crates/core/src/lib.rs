//! Numerical toolkit for the general adversary bound of Boolean functions.
//!
//! The pipeline: [`advdual::build_sdp`] writes the adversary dual as a
//! block-diagonal standard-form SDP, [`sdp::solve`] runs ADMM on it,
//! [`advdual::extract_vectors`] factors the solution into a deciding vector
//! set, and [`advdual::certify`] decides from singular values whether the
//! approximate set still yields a bounded-error query algorithm.
//! [`compress`] reduces the vector dimension, and [`simulate`] checks the
//! resulting algorithm by exact spectral analysis of its unitary.
//!
//! Numerical code is generic over [`scalar::Real`]; the aliases below fix
//! it to `f64`.
//!
//! ```
//! use adversary_core::{advdual, sdp, BooleanFunction};
//!
//! let f = BooleanFunction::or(2).unwrap();
//! let problem: adversary_core::Sdp = advdual::build_sdp(&f).unwrap();
//! let sol = sdp::solve(&problem, &sdp::AdmmConfig::with_iters(500)).unwrap();
//! assert!((sol.objective_value - 2f64.sqrt()).abs() < 1e-3);
//! ```

pub mod advdual;
pub mod boolfn;
pub mod compress;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod sdp;
pub mod simulate;
pub mod space;

pub use boolfn::{BitString, BooleanFunction};
pub use error::{Error, Result};

pub type Sdp = sdp::StandardFormSdp<f64>;
pub type Solution = sdp::SdpSolution<f64>;
pub type VectorSet = advdual::DecidingVectorSet<f64>;
pub type Witnesses = advdual::WitnessVectors<f64>;
pub type Certificate = advdual::Certificate<f64>;
pub type Compressed = compress::CompressedWitnesses<f64>;
pub type Projection = compress::JlProjection<f64>;
