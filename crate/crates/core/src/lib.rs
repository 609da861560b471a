pub mod acceptance;
pub mod algebra;
pub mod cli;
pub mod error;
pub mod optics;
pub mod protocols;
pub mod register;

pub use error::{Error, Result};
