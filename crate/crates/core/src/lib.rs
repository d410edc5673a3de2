//! Exact feasibility tests for diagonals of self-adjoint operators with
//! finite spectrum, and the minimal-element structure of feasible interior
//! eigenvalue lists for a fixed diagonal.
//!
//! All decisions use exact rationals ([`Scalar`]). Floating point appears
//! only in matrix witnesses.

pub mod error;
pub mod feasibility;
pub mod lambda_sets;
pub mod majorization;
pub mod numerics;
pub mod sequences;
pub mod spectrum;
pub mod transforms;

pub use error::{Error, Result};
pub use lambda_sets::{
    beta_sequence, eta_of, lambda_membership, membership_report, minimal_element, minimal_set, minimal_set_with_epsilon, MinimalCase,
    MembershipReport, MinimalElementReport, MinimalEntry,
};
pub use majorization::{
    construct_matrix, decreasing_rearrangement, finite_rank_check, majorizes, schur_horn_check, Orientation,
    RealVector, SymmetricMatrixWitness,
};
pub use numerics::{frac_mod_one, ExtendedCount, Scalar};
pub use sequences::{cut_stats, f_value, in_class_f, Band, CutStatistics, DiagonalSequence, GeometricTail, Mass};
pub use spectrum::{classify, normalize, NormalizedSpec, SpectrumClass, SpectrumPair, SpectrumSpec};
pub use feasibility::{
    decide_diagonal, equivalence_audit, interior_majorization_check, kadison_check, Branch, FeasibilityVerdict,
    Slack, ZSequence, ZSide,
};
pub use transforms::{decouple, move_toward_endpoints, split_extremes, truncate_to_finite, Aggregate, TransformReceipt};
