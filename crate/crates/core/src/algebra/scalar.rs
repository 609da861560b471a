//! The scalar contract shared by every backend.
//!
//! Quantum states are generic over a [`Scalar`]: plain `Complex64` for
//! numeric sweeps, [`GaussianRational`] for exact evaluation at a rational
//! parameter point, [`Polynomial`] for fully symbolic runs, and
//! [`TruncatedSeries`] for low-order coefficient extraction.

use std::fmt::Debug;
use std::hash::Hasher;

use num_complex::Complex64;

use super::gaussian::GaussianRational;
use super::polynomial::Polynomial;
use super::rational_function::RationalFunction;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_gaussian(g: &GaussianRational) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_int(n))
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = Scalar::add(self, rhs);
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Feeds a value-determined hash; equal values must hash equally.
    fn hash_into<H: Hasher>(&self, h: &mut H);

    /// Quarter turns `k` such that `i^k·self` has a canonical leading phase,
    /// or `None` for zero. Used to merge states that differ by a unit phase.
    fn phase_quadrant(&self) -> Option<u8>;
}

/// Scalars that support forming the fidelity ratio `num / den`.
pub trait FidelityScalar: Scalar {
    type Ratio: Clone + Debug;
    fn ratio(num: &Self, den: &Self) -> Result<Self::Ratio>;
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn hash_into<H: Hasher>(&self, h: &mut H) {
        GaussianRational::hash_into(self, h)
    }
    fn phase_quadrant(&self) -> Option<u8> {
        GaussianRational::phase_quadrant(self)
    }
}

impl FidelityScalar for GaussianRational {
    type Ratio = GaussianRational;
    fn ratio(num: &Self, den: &Self) -> Result<Self::Ratio> {
        if den.is_zero() {
            return Err(Error::ZeroTrace);
        }
        Ok(num * &den.inv()?)
    }
}

impl Scalar for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        Polynomial::constant(g.clone())
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Polynomial::conj(self)
    }
    fn hash_into<H: Hasher>(&self, h: &mut H) {
        Polynomial::hash_into(self, h)
    }
    fn phase_quadrant(&self) -> Option<u8> {
        self.leading_coeff().and_then(GaussianRational::phase_quadrant)
    }
}

impl FidelityScalar for Polynomial {
    type Ratio = RationalFunction;
    fn ratio(num: &Self, den: &Self) -> Result<Self::Ratio> {
        if den.is_zero() {
            return Err(Error::ZeroTrace);
        }
        RationalFunction::new(num.clone(), den.clone())
    }
}

impl Scalar for TruncatedSeries {
    fn zero() -> Self {
        TruncatedSeries::constant(GaussianRational::zero())
    }
    fn one() -> Self {
        TruncatedSeries::constant(GaussianRational::one())
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        TruncatedSeries::constant(g.clone())
    }
    fn is_zero(&self) -> bool {
        TruncatedSeries::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        TruncatedSeries::conj(self)
    }
    fn is_one(&self) -> bool {
        self.polynomial() == &Polynomial::one()
    }
    fn hash_into<H: Hasher>(&self, h: &mut H) {
        self.polynomial().hash_into(h)
    }
    fn phase_quadrant(&self) -> Option<u8> {
        self.polynomial().leading_coeff().and_then(GaussianRational::phase_quadrant)
    }
}

impl FidelityScalar for TruncatedSeries {
    type Ratio = TruncatedSeries;
    fn ratio(num: &Self, den: &Self) -> Result<Self::Ratio> {
        if den.is_zero() {
            return Err(Error::ZeroTrace);
        }
        Ok(num * &den.inverse()?)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        let (re, im) = g.to_f64();
        Complex64::new(re, im)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn hash_into<H: Hasher>(&self, h: &mut H) {
        // +0.0 and -0.0 compare equal, so hash them alike
        h.write_u64((self.re + 0.0).to_bits());
        h.write_u64((self.im + 0.0).to_bits());
    }
    fn phase_quadrant(&self) -> Option<u8> {
        if Scalar::is_zero(self) {
            return None;
        }
        let (re, im) = (self.re, self.im);
        Some(if re > 0.0 && im >= 0.0 {
            0
        } else if im > 0.0 && re <= 0.0 {
            3
        } else if re < 0.0 && im <= 0.0 {
            2
        } else {
            1
        })
    }
}

impl FidelityScalar for Complex64 {
    type Ratio = f64;
    fn ratio(num: &Self, den: &Self) -> Result<f64> {
        if den.norm() == 0.0 {
            return Err(Error::ZeroTrace);
        }
        Ok((num / den).re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_phases<S: Scalar>(base: S) {
        let mut z = base;
        let i = S::from_gaussian(&GaussianRational::i());
        for _ in 0..4 {
            let q = z.phase_quadrant().unwrap();
            let mut w = z.clone();
            for _ in 0..q {
                w = w.mul(&i);
            }
            assert_eq!(w.phase_quadrant(), Some(0));
            z = z.mul(&i);
        }
    }

    #[test]
    fn phase_quadrants_are_consistent() {
        unit_phases(Complex64::new(2.0, 1.0));
        unit_phases(&GaussianRational::from_int(3) - &GaussianRational::i());
        unit_phases(&Polynomial::var(crate::algebra::Variable::Alpha) + &Polynomial::one());
    }
}
