//! Stabilizer extraction, transfer verification, robustness subspaces and bounds.

mod bounds;
mod checks;
mod stabilizer;
mod subspace;
mod transfer;

pub use bounds::{theorem1_bound, theorem1_factors, BoundFactors, BoundQuery, BoundVariant};
pub use checks::{
    convexity_check, v_sign_counts, norms_from_v_phases, lemma_s1_check, saturation_check, v_operator,
    ConvexityReport, SaturationReport, SaturationRow, PHASE_TOL, SATURATION_TOL,
};
pub use stabilizer::{
    commutator_norm, commutator_norms, commutator_operator, extract_stabilizers, pullback, StabilizerPair,
};
pub use subspace::{robustness_report, robustness_subspace, RobustnessReport, NULL_TOL, REVERIFY_TOL};
pub use transfer::{test_states, verify_transfer, AncillaState, TransferReport, STATE_TOL};
