use thiserror::Error;

use crate::register::QubitId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown qubit {0}")]
    UnknownQubit(QubitId),

    #[error("qubit label {0} already present")]
    LabelCollision(QubitId),

    #[error("zero trace: no successful branch survived")]
    ZeroTrace,

    #[error("attempt exceeds leaves (attempt {attempt}, leaves {leaves})")]
    AttemptExceedsLeaves { attempt: usize, leaves: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("byproduct calibration failed: {0}")]
    Calibration(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
