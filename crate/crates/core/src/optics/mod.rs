//! Photonic primitives: EPR sources, Type-1 fusion with an imperfect PBS,
//! Pauli noise, single-photon measurements and their byproduct corrections.

mod calibrate;
mod clifford;
mod fusion;
mod measure;
mod noise;
mod targets;

pub use calibrate::{calibrate_byproducts, calibrate_from, verify_byproducts, Calibration};
pub use clifford::{ByproductTable, Clifford};
pub use fusion::{
    epr, epr_with_roles, failure_weights, fuse_fail, fuse_success, fuse_success_core, kraus_sum,
    success_probability,
};
pub use measure::{measure_y_remove, measure_z_remove, y_eigenket};
pub use noise::{pauli_channel, pauli_channels, ErrorPlacementPolicy, NoiseModel, Placement};
pub use targets::{pair_target, star_state};
