//! Labeled qubit registers: pure states, density operators and the local
//! operators that act on them.

mod density;
mod kernels;
mod operator;
mod pure;
mod qubit;

pub use density::{fidelity, Backend, DensityOperator};
pub use operator::LocalOperator;
pub use pure::PureState;
pub use qubit::{QubitAllocator, QubitId, Role};
