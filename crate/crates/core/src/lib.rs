//! Info-clustering and information-theoretic feature selection over exactly
//! specified discrete sources.
//!
//! Rational backends compute exactly; the pmf backend computes in `f64` and
//! compares with [`scalar::TOLERANCE`]. Every algorithm here is exhaustive at
//! its core and therefore guarded to small ground sets.

pub mod clustering;
pub mod document;
pub mod duality;
pub mod error;
pub mod featsel;
pub mod partition;
pub mod scalar;
pub mod set;
pub mod sources;
pub mod submodular;

pub use clustering::{
    clusters, dilworth_truncation, dilworth_truncation_bruteforce, extended_clusters, extended_clusters_bruteforce,
    mmi, mmi_bruteforce, psp, ClusterSet, DtBruteForce, DtMethod, DtResult, PspResult,
};
pub use document::{load_model, ModelDocument};
pub use duality::{check_block_structure, sweep_duality, sweep_gammas, verify_duality, BlockStructureReport, DualityReport};
pub use error::{Error, Result};
pub use featsel::{
    check_lagrangian_link, check_supermodular_objective, objective, penalized, pp, relax_optimize, size_constrained,
    FeatureProblem, LagrangianReport, PpRegion, PpResult, RelaxResult, SizeConstrained, Supermodularity,
};
pub use partition::{block_partition, enumerate_partitions, partition_join, partition_meet, refines, Partition};
pub use scalar::{Number, Rational, Scalar, TOLERANCE};
pub use set::{GroundSet, Subset, MAX_GROUND};
pub use sources::{
    conditional_entropy, entropy, is_mutually_independent, mutual_information, EntropyTableSource, LinearAtomicSource,
    PmfSource, ScalarKind, Severity, SourceModel, Violation, ViolationKind,
};
pub use submodular::{check_submodular, partition_value, residual, sfm_bruteforce, SetFunction};
