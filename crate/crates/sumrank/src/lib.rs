//! Sum-rank metric codes over finite field towers, the matroid-like rank
//! functions they induce on product subspace lattices, and the generalized
//! weight machinery connecting the two.
//!
//! Everything here targets exhaustive verification at small parameters:
//! enumeration orders are deterministic, subspaces are kept in canonical
//! form, and each nontrivial identity is computed along independent
//! routes so the test suite can compare them. Brute-force searches are
//! bounded by [`error::ScaleGuard`] and refuse to run past their ceiling.

pub mod code;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod matroid;
pub mod sweep;
pub mod tower;
pub mod weights;

pub use code::{
    dist, project, projection_matrix, srank, support, support_of_subcode,
    support_of_subcode_exhaustive, support_space, support_space_by_filter, SumRankCode,
};
pub use error::{Error, Result, ScaleGuard};
pub use lattice::{gaussian_binomial, Ground, ProductElement, Subspace};
pub use matrix::{dot, row_space_intersection, FieldLevel, Matrix};
pub use matroid::{duality_commutes, AxiomViolation, RankOracle, RankTable, SumMatroid};
pub use sweep::{
    check_code, check_ground, run_sweep, with_alternative_basis, CheckKind, CheckOptions,
    SweepFailure, SweepOutcome,
};
pub use tower::{default_modulus, BasisOrder, FieldElem, FieldTower};
pub use weights::{
    code_wei_duality_check, code_weights, first_singleton_tight_index, lemma_min_equivalence,
    matroid_weights, msrd_matrix_criterion, msrd_rank, r_msrd_crosscheck,
    reconstructed_dual_weights, route_equality_check, singleton_check,
    subcode_weights_bruteforce, uniform_correspondence, wei_duality_check, MsrdCertificate,
    MsrdWitness, RMsrdReport, RouteEqualityReport, SingletonReport,
    UniformCorrespondenceReport, WeiReport, WeightHierarchy, WeightSource,
};
