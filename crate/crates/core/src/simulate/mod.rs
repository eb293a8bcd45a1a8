//! Spectral verification of the query algorithm `U = (2Π_x − I)R`: phase
//! profiles of `|0̂⟩`, phase-estimation outcome bounds per input, and
//! numerical checks of the robustness lemmas.

mod lemmas;
mod reflection;
mod run;
mod spectral;

pub use crate::space::AlgorithmSpace;
pub use lemmas::{check_preserve_lemma, check_robust_gap_lemma, check_svd_lemmas, LemmaCheck, SvdLemmaReport};
pub use reflection::{build_pi_x, reflection_basis, reflection_from, ReflectionKind, WitnessSource};
pub use run::{simulate_function, SimParams, SimRow, SimulationReport, Verdict};
pub use spectral::{
    low_phase_mass, outcome_bounds, pe_outcome_bounds, phase_profile, real_phase_profile, PhaseProfile,
    PHASE_SLACK, UNITARITY_TOL,
};
