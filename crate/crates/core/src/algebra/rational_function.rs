use std::fmt;

use num_complex::Complex64;

use super::gaussian::GaussianRational;
use super::polynomial::{Point, Polynomial};
use super::series::{Caps, TruncatedSeries};
use crate::error::{Error, Result};

/// Quotient of two polynomials, kept unreduced. Two rational functions are
/// equal when `num₁·den₂ = num₂·den₁`.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(Self { num, den })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self { num: self.num.pow(exp), den: self.den.pow(exp) }
    }

    pub fn substitute(&self, subs: &[(super::Variable, Polynomial)]) -> Result<Self> {
        Self::new(self.num.substitute(subs), self.den.substitute(subs))
    }

    /// Cross-multiplication equality.
    pub fn equivalent(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// If the denominator divides out to a constant, the equivalent polynomial.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        if self.den.is_constant() {
            let c = self.den.constant_term().inv().ok()?;
            Some(self.num.scale(&c))
        } else {
            None
        }
    }

    pub fn eval(&self, point: &Point<GaussianRational>) -> Result<GaussianRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::Domain(format!("denominator {} vanishes at {:?}", self.den, point)));
        }
        Ok(&self.num.eval(point)? * &d.inv()?)
    }

    pub fn eval_f64(&self, point: &Point<f64>) -> Result<Complex64> {
        let d = self.den.eval_f64(point)?;
        if d.norm() == 0.0 {
            return Err(Error::Domain(format!("denominator {} vanishes at {:?}", self.den, point)));
        }
        Ok(self.num.eval_f64(point)? / d)
    }

    /// Taylor expansion about the origin: `num` times the truncated inverse
    /// of `den`.
    pub fn series_expand(&self, caps: Caps) -> Result<TruncatedSeries> {
        let den = TruncatedSeries::new(&self.den, caps);
        if den.polynomial().constant_term().is_zero() {
            return Err(Error::Domain(format!(
                "denominator {} vanishes at the expansion point",
                self.den
            )));
        }
        let num = TruncatedSeries::new(&self.num, caps);
        Ok(&num * &den.inverse()?)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equivalent(other)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_polynomial() {
            write!(f, "{p}")
        } else if let Some(c) = self.den.leading_coeff().and_then(|c| c.inv().ok()) {
            write!(f, "({}) / ({})", self.num.scale(&c), self.den.scale(&c))
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Variable};

    fn alpha() -> Polynomial {
        Polynomial::var(Variable::Alpha)
    }

    fn eq2() -> RationalFunction {
        let one = Polynomial::one();
        let num = (&one - &alpha()).pow(2);
        let den = &one + &(&alpha().pow(2) - &alpha()).scale(&GaussianRational::from_int(2));
        RationalFunction::new(num, den).unwrap()
    }

    #[test]
    fn power_matches_definition() {
        let f = eq2();
        let sq = f.pow(2);
        let manual = RationalFunction::new(f.num().pow(2), f.den().pow(2)).unwrap();
        assert!(sq.equivalent(&manual));
        assert!(sq.equivalent(&f.mul(&f)));
    }

    #[test]
    fn eval_at_half() {
        let pt = Point::new().with(Variable::Alpha, GaussianRational::from_ratio(1, 2));
        assert_eq!(eq2().eval(&pt).unwrap(), GaussianRational::from_ratio(1, 2));
    }

    #[test]
    fn eval_float_at_one_percent() {
        // Direct substitution: (0.99)² / (1 + 2(0.0001 - 0.01)) = 0.9801 / 0.9802.
        let oracle = 0.9801_f64 / 0.9802;
        let pt = Point::new().with(Variable::Alpha, 0.01);
        let v = eq2().eval_f64(&pt).unwrap();
        assert!((v.re - oracle).abs() < 1e-15);
        assert!(format!("{:.12}", v.re).starts_with("0.99989798"));
    }

    #[test]
    fn zero_denominator_is_reported() {
        let f = RationalFunction::new(Polynomial::one(), alpha()).unwrap();
        let pt = Point::new().with(Variable::Alpha, GaussianRational::zero());
        assert!(matches!(f.eval(&pt), Err(Error::Domain(_))));
        assert!(RationalFunction::new(Polynomial::one(), Polynomial::zero()).is_err());
        assert!(f.series_expand(Caps::zero().with(Variable::Alpha, 2)).is_err());
    }

    #[test]
    fn eq2_series_to_second_order() {
        let s = eq2().series_expand(Caps::zero().with(Variable::Alpha, 2)).unwrap();
        let expected = &Polynomial::one() - &alpha().pow(2);
        assert_eq!(s.polynomial(), &expected);
        // numeric cross-check at α = 1e-4: remainder is O(α³)
        let a = 1e-4_f64;
        let exact = (1.0 - a).powi(2) / (1.0 + 2.0 * (a * a - a));
        assert!((exact - (1.0 - a * a)).abs() < 1e-11);
        assert_eq!(s.coeff(&Monomial::var_pow(Variable::Alpha, 2)), GaussianRational::from_int(-1));
    }

    #[test]
    fn polynomial_series_is_itself() {
        let f = &(&Polynomial::one() - &Polynomial::var(Variable::P).scale(&GaussianRational::from_int(2)))
            - &Polynomial::var(Variable::Pz);
        let rf = RationalFunction::from_polynomial(f.clone());
        let s = rf
            .series_expand(Caps::zero().with(Variable::P, 1).with(Variable::Pz, 1))
            .unwrap();
        assert_eq!(s.polynomial(), &f);
    }
}
