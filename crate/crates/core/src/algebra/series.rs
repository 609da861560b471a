//! Power series about the origin, truncated per variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gaussian::GaussianRational;
use super::polynomial::Polynomial;
use super::variable::{Monomial, Variable, NUM_VARS};
use crate::error::{Error, Result};

/// Per-variable degree caps. A cap of [`Caps::UNBOUNDED`] keeps every power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Caps(pub [u8; NUM_VARS]);

impl Caps {
    pub const UNBOUNDED: u8 = u8::MAX;

    /// Every variable capped at degree zero.
    pub fn zero() -> Self {
        Caps([0; NUM_VARS])
    }

    pub fn unbounded() -> Self {
        Caps([Self::UNBOUNDED; NUM_VARS])
    }

    pub fn with(mut self, v: Variable, degree: u8) -> Self {
        self.0[v.index()] = degree;
        self
    }

    pub fn get(&self, v: Variable) -> u8 {
        self.0[v.index()]
    }

    pub fn meet(&self, other: &Caps) -> Caps {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(other.0) {
            *a = (*a).min(b);
        }
        Caps(c)
    }

    fn is_bounded(&self) -> bool {
        self.0.iter().all(|&c| c != Self::UNBOUNDED)
    }

    /// Largest total degree a stored monomial can have.
    fn max_total_degree(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }
}

/// A polynomial that only remembers monomials within its caps. Ring
/// operations combine caps by taking the smaller cap per variable, so
/// constants (which carry unbounded caps) adopt the caps of whatever they
/// meet.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    caps: Caps,
    poly: Polynomial,
}

impl TruncatedSeries {
    pub fn new(poly: &Polynomial, caps: Caps) -> Self {
        Self { poly: poly.truncate(&caps.0), caps }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self { caps: Caps::unbounded(), poly: Polynomial::constant(c) }
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.poly.coeff(m)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { caps: self.caps, poly: self.poly.conj() }
    }

    /// Multiplicative inverse within the caps.
    ///
    /// Writing `s = c·(1 + u)` with `u` having no constant term, `1/s` is
    /// `c⁻¹·Σ (-u)^k`, a finite sum because `u` is nilpotent under the caps.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.poly.constant_term();
        if c.is_zero() {
            return Err(Error::Domain(
                "series has zero constant term; the expansion point is a pole".into(),
            ));
        }
        let rest = &self.poly - &Polynomial::constant(c.clone());
        if rest.is_zero() {
            return Ok(Self { caps: self.caps, poly: Polynomial::constant(c.inv()?) });
        }
        if !self.caps.is_bounded() {
            return Err(Error::Domain("cannot invert a non-constant series with unbounded caps".into()));
        }
        let c_inv = c.inv()?;
        let u = Self::new(&rest.scale(&-&c_inv), self.caps);
        let mut acc = Self::new(&Polynomial::one(), self.caps);
        let mut power = acc.clone();
        for _ in 0..self.caps.max_total_degree() {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(Self { caps: self.caps, poly: acc.poly.scale(&c_inv) })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(", self.poly)?;
        let mut first = true;
        for v in Variable::ALL {
            let c = self.caps.get(v);
            if c != Caps::UNBOUNDED {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "{v}^{}", c as u32 + 1)?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let caps = self.caps.meet(&rhs.caps);
        let poly = &self.poly + &rhs.poly;
        if caps == self.caps && caps == rhs.caps {
            TruncatedSeries { caps, poly }
        } else {
            TruncatedSeries::new(&poly, caps)
        }
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let caps = self.caps.meet(&rhs.caps);
        let mut poly = Polynomial::zero();
        for (ma, ca) in self.poly.terms() {
            if !ma.within(&caps.0) {
                continue;
            }
            for (mb, cb) in rhs.poly.terms() {
                let m = ma.mul(mb);
                if m.within(&caps.0) {
                    poly.add_term(m, &(ca * cb));
                }
            }
        }
        TruncatedSeries { caps, poly }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { caps: self.caps, poly: -&self.poly }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Polynomial {
        Polynomial::var(Variable::Alpha)
    }

    #[test]
    fn geometric_inverse() {
        let caps = Caps::zero().with(Variable::Alpha, 2);
        let s = TruncatedSeries::new(&(&Polynomial::one() - &a()), caps);
        let inv = s.inverse().unwrap();
        let expected = &(&Polynomial::one() + &a()) + &a().pow(2);
        assert_eq!(inv.polynomial(), &expected);
        let back = &s * &inv;
        assert_eq!(back.polynomial(), &Polynomial::one());
    }

    #[test]
    fn pole_is_rejected() {
        let caps = Caps::zero().with(Variable::Alpha, 2);
        assert!(TruncatedSeries::new(&a(), caps).inverse().is_err());
    }

    #[test]
    fn constants_adopt_caps() {
        let caps = Caps::zero().with(Variable::Alpha, 1);
        let s = TruncatedSeries::new(&(&Polynomial::one() + &a()), caps);
        let two = TruncatedSeries::constant(GaussianRational::from_int(2));
        let prod = &(&two * &s) * &s;
        assert_eq!(prod.caps(), &caps);
        // 2(1 + 2α + α²) truncated at α¹
        assert_eq!(prod.polynomial(), &(&Polynomial::from_int(2) + &a().scale(&GaussianRational::from_int(4))));
    }
}
