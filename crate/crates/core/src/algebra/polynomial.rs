//! Sparse multivariate polynomials with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Signed;

use super::gaussian::GaussianRational;
use super::variable::{Monomial, Variable, NUM_VARS};
use crate::error::{Error, Result};

/// A partial assignment of values to variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    values: [Option<T>; NUM_VARS],
}

impl<T: Clone> Point<T> {
    pub fn new() -> Self {
        Self { values: Default::default() }
    }

    pub fn with(mut self, v: Variable, value: T) -> Self {
        self.values[v.index()] = Some(value);
        self
    }

    pub fn set(&mut self, v: Variable, value: T) {
        self.values[v.index()] = Some(value);
    }

    pub fn get(&self, v: Variable) -> Option<&T> {
        self.values[v.index()].as_ref()
    }

    fn require(&self, v: Variable) -> Result<&T> {
        self.get(v)
            .ok_or_else(|| Error::Domain(format!("no value assigned to variable {v}")))
    }
}

impl<T: Clone> Default for Point<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Multivariate polynomial. Zero coefficients are never stored, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn var(v: Variable) -> Self {
        Self::term(GaussianRational::one(), Monomial::var(v))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// Builds from `(coefficient, monomial)` pairs, combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = (GaussianRational, Monomial)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (c, m) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn degree_in(&self, v: Variable) -> u8 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<Variable> {
        Variable::ALL
            .into_iter()
            .filter(|&v| self.terms.keys().any(|m| m.exponent(v) > 0))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// Conjugates coefficients only; variables are real.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, a)| (*m, a.conj())).collect() }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every monomial that exceeds `caps` in some variable.
    pub fn truncate(&self, caps: &[u8; NUM_VARS]) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.within(caps))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Replaces each listed variable by a polynomial. Variables not listed are
    /// left alone; all substitutions happen simultaneously.
    pub fn substitute(&self, subs: &[(Variable, Polynomial)]) -> Self {
        let mut power_cache: Vec<Vec<Polynomial>> = vec![Vec::new(); subs.len()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut rest = m.0;
            let mut factor = Self::one();
            for (i, (v, image)) in subs.iter().enumerate() {
                let e = rest[v.index()] as usize;
                rest[v.index()] = 0;
                if e == 0 {
                    continue;
                }
                let cache = &mut power_cache[i];
                if cache.is_empty() {
                    cache.push(Self::one());
                }
                while cache.len() <= e {
                    let next = cache.last().unwrap() * image;
                    cache.push(next);
                }
                factor = &factor * &cache[e];
            }
            let term = Self::term(c.clone(), Monomial(rest));
            out = &out + &(&factor * &term);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &Point<GaussianRational>) -> Result<GaussianRational> {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.variables() {
                t = &t * &point.require(v)?.pow(e as u32);
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &Point<f64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let (re, im) = c.to_f64();
            let mut t = Complex64::new(re, im);
            for (v, e) in m.variables() {
                t *= point.require(v)?.powi(e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub(crate) fn hash_into<H: Hasher>(&self, h: &mut H) {
        for (m, c) in &self.terms {
            m.hash(h);
            c.hash_into(h);
        }
    }

    /// Leading coefficient in descending monomial order.
    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.terms.values().next_back()
    }
}

/// Canonical rendering: monomials in descending graded-lex order, explicit
/// signs, rationals as `a/b`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_real() && c.re().is_negative();
            let mag = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut out, other) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<GaussianRational> for Polynomial {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl From<Variable> for Polynomial {
    fn from(v: Variable) -> Self {
        Self::var(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Polynomial {
        Polynomial::var(Variable::Alpha)
    }

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn binomial_square() {
        let one_minus = &Polynomial::one() - &alpha();
        let sq = &one_minus * &one_minus;
        let expected = Polynomial::from_terms([
            (gr(1, 1), Monomial::ONE),
            (gr(-2, 1), Monomial::var(Variable::Alpha)),
            (gr(1, 1), Monomial::var_pow(Variable::Alpha, 2)),
        ]);
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "alpha^2 - 2*alpha + 1");
    }

    #[test]
    fn substitution_reaches_q_form() {
        // 1 - p_x - p_y - p_z with p_x = p_y = p, then p = (q + 1)/2.
        let f = &(&(&Polynomial::one() - &Polynomial::var(Variable::Px)) - &Polynomial::var(Variable::Py))
            - &Polynomial::var(Variable::Pz);
        let p = Polynomial::var(Variable::P);
        let g = f.substitute(&[(Variable::Px, p.clone()), (Variable::Py, p)]);
        let half = gr(1, 2);
        let p_of_q = (&Polynomial::var(Variable::Q) + &Polynomial::one()).scale(&half);
        let h = g.substitute(&[(Variable::P, p_of_q)]);
        let expected = -(&Polynomial::var(Variable::Q) + &Polynomial::var(Variable::Pz));
        assert_eq!(h, expected);
        assert_eq!(h.to_string(), "-p_z - q");
    }

    #[test]
    fn conjugate_only_touches_coefficients() {
        let f = Polynomial::term(GaussianRational::i(), Monomial::var(Variable::Alpha));
        assert_eq!(f.conj(), Polynomial::term(-GaussianRational::i(), Monomial::var(Variable::Alpha)));
    }

    #[test]
    fn evaluation() {
        let q = Polynomial::var(Variable::Q);
        let pz = Polynomial::var(Variable::Pz);
        let f = -(&q + &pz);
        let pt = Point::new().with(Variable::Q, gr(-1, 1)).with(Variable::Pz, gr(0, 1));
        assert_eq!(f.eval(&pt).unwrap(), GaussianRational::one());

        let g = &(&Polynomial::one() - &Polynomial::var(Variable::P).scale(&gr(2, 1))) - &pz;
        let pt = Point::new().with(Variable::P, gr(1, 100)).with(Variable::Pz, gr(1, 100));
        assert_eq!(g.eval(&pt).unwrap(), gr(97, 100));

        assert!(Polynomial::zero().eval(&Point::new()).unwrap().is_zero());
        assert!(matches!(g.eval(&Point::new()), Err(Error::Domain(_))));
        let fp = Point::new().with(Variable::P, 0.01).with(Variable::Pz, 0.01);
        assert!((g.eval_f64(&fp).unwrap().re - 0.97).abs() < 1e-15);
    }
}
