//! Analysis of quantum Markov chains: decomposition of the state space into
//! bottom strongly connected components (BSCCs) and a transient remainder,
//! and reachability, repeated-reachability, and persistence probabilities.
//!
//! A chain is a finite-dimensional Hilbert space together with a
//! trace-preserving super-operator in Kraus form. The long-run behaviour is
//! captured by the asymptotic average of the channel, realized here as the
//! eigenvalue-1 spectral projector of its matrix representation; every
//! probability the crate computes is one projector trace against such an
//! average. Brute-force iteration oracles live in [`oracle`] so results can
//! be cross-checked by an independent route.

pub mod analysis;
pub mod bscc;
pub mod channel;
pub mod error;
pub mod format;
pub mod mat;
pub mod models;
pub mod oracle;
pub mod spaces;
pub mod spectral;
pub mod tolerance;

pub use analysis::{
    absorption_limit_check, persistence_probability, reach_probability,
    repeated_reachability_probability, satisfaction_subspaces, AnalysisKind, AnalysisReport,
};
pub use bscc::{
    check_bscc, contains_bscc, decompose_fixed_support, decompose_state_space, is_transient,
    Decomposition,
};
pub use channel::{positive_part_split, Channel, DensityOperator};
pub use error::QmcError;
pub use oracle::{absorption_sweep, cesaro_average, power_iterate, IterationTrace};
pub use spaces::{image, reachable_space, Subspace};
pub use spectral::{asymptotic_average, fixed_point_basis, AsymptoticAverage, FixedPointBasis};
pub use tolerance::ToleranceConfig;
