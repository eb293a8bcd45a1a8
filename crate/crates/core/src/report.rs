//! Small shared report types.

use serde::{Deserialize, Serialize};

/// An inequality `observed ≤ bound` as measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub observed: f64,
    pub bound: f64,
    pub holds: bool,
}

impl Bound {
    pub fn new(observed: f64, bound: f64) -> Self {
        Bound { observed, bound, holds: observed <= bound }
    }
}
