//! Separating an open convex set from a disjoint subspace in `R^n` by way of
//! dominated extensions of linear functionals.
//!
//! Sampled checks run on rayon by default; build without the `parallel`
//! feature for a sequential run with identical results.

pub mod convex;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod gauge;
pub mod instances;
pub mod linalg;
pub mod lp;
pub mod par;
pub mod separation;

pub use convex::{
    build_symmetrized_body, ConicHull, ConvexSet, HalfSpace, OracleSet, SymmetrizedBody,
};
pub use error::{Error, Result};
pub use extension::{
    domination_check, extend_full, ExtensionState, ExtensionStep, GammaInterval, GammaRule,
    IntervalMethod, SearchOptions,
};
pub use gauge::{check_seminorm_axioms, AxiomReport, Seminorm};
pub use linalg::{decompose, kernel_hyperplane, Hyperplane, PartialFunctional, Subspace, Vector};
pub use separation::{
    brute_force_2d_normals, extend_via_separation, separate, verify_separation, AdmissibleAngles,
    PipelineInstance, SeparationCertificate, SeparationOptions, SeparationResult,
};
