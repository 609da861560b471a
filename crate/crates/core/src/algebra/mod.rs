//! Exact scalar arithmetic: Gaussian rationals, multivariate polynomials,
//! unreduced rational functions and truncated power series, plus the
//! [`Scalar`] contract they share with `Complex64`.

mod gaussian;
mod polynomial;
mod rational_function;
mod scalar;
mod series;
mod variable;

pub use gaussian::{parse_rational, GaussianRational};
pub use polynomial::{Point, Polynomial};
pub use rational_function::RationalFunction;
pub use scalar::{FidelityScalar, Scalar};
pub use series::{Caps, TruncatedSeries};
pub use variable::{Monomial, Variable, NUM_VARS};

pub use num_complex::Complex64;
pub use num_rational::BigRational;
