//! Experiments built from the optics primitives: microcluster construction,
//! pair bonding, closed forms, series coefficients and parameter sweeps.

mod closed_form;
mod expansion;
mod microcluster;
mod pair;
mod policy_search;
mod sweep;

pub use closed_form::{
    antidiagonal, binomial_transform_table, closed_form_table1, coefficient_magnitudes, in_terms_of_q,
    reference_formula, Formula,
};
pub use expansion::{
    coefficient_expansion, expansion_caps, expansion_monomials, CoefficientReport, MAX_EXPANSION_LEAVES,
};
pub use microcluster::{build_microcluster, microcluster_fidelity, MicroclusterHandle, Settings};
pub use pair::{fuse_pair, fuse_pair_joint, PairFusionSpec, PairOutcome};
pub use policy_search::{policy_search, reference_cells, Mismatch, PolicyScore, PolicySearchReport};
pub use sweep::{sweep_records, worker_pool, PGrid, SweepRecord, WORKERS_ENV};
