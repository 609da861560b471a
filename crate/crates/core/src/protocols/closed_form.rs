use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{GaussianRational, Monomial, Polynomial, RationalFunction, Variable};
use crate::error::{Error, Result};

type G = GaussianRational;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Closed form of the `n`-leaf microcluster fidelity in `(q, p_z)` with
/// `α = 0`, `p_x = p_y = p`, `q = 2p − 1`:
/// `(−1)^(n−1) Σ_k c_{n,k} q^(n−1−k) p_z^k`, `c_{n,0} = 1`,
/// `c_{n,k} = 2^(k−1) C(n−1, k)`.
pub fn closed_form_table1(n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("a microcluster needs at least one leaf".into()));
    }
    let sign = if (n - 1).is_multiple_of(2) { 1 } else { -1 };
    let m = (n - 1) as u64;
    let terms = (0..=m).map(|k| {
        let c = if k == 0 { BigInt::one() } else { (BigInt::one() << (k - 1)) * binomial(m, k) };
        let mono = Monomial::var_pow(Variable::Q, (m - k) as u8).mul(&Monomial::var_pow(Variable::Pz, k as u8));
        (G::real(num_rational::BigRational::from_integer(c * sign)), mono)
    });
    Ok(Polynomial::from_terms(terms))
}

/// Rewrites a polynomial in `p` (the common `p_x = p_y` rate) in terms of
/// `q = 2p − 1`.
pub fn in_terms_of_q(poly: &Polynomial) -> Polynomial {
    let half = G::from_ratio(1, 2);
    let p = (&Polynomial::var(Variable::Q) + &Polynomial::one()).scale(&half);
    poly.substitute(&[(Variable::P, p)])
}

/// The integer grid: `entry(r, c) = 1` for `c = 0`, otherwise
/// `2^(c−1) (c+r−1)! / (c! (r−1)!)`, with `r` counted from 1.
pub fn binomial_transform_table(rows: usize, cols: usize) -> Result<Vec<Vec<BigInt>>> {
    if rows == 0 || cols == 0 {
        return Err(Error::Domain("table needs at least one row and one column".into()));
    }
    Ok((1..=rows as u64)
        .map(|r| {
            (0..cols as u64)
                .map(|c| if c == 0 { BigInt::one() } else { (BigInt::one() << (c - 1)) * binomial(c + r - 1, c) })
                .collect()
        })
        .collect())
}

/// Entries with `r + c = n` (`r ≥ 1`, `c` from 0), from `(n, 0)` up to `(1, n−1)`.
pub fn antidiagonal(n: usize) -> Result<Vec<BigInt>> {
    let grid = binomial_transform_table(n, n)?;
    Ok((0..n).map(|c| grid[n - 1 - c][c].clone()).collect())
}

/// Coefficient magnitudes of a `(q, p_z)` polynomial, ordered by ascending
/// power of `p_z`.
pub fn coefficient_magnitudes(poly: &Polynomial) -> Vec<BigInt> {
    let mut terms: Vec<(u8, BigInt)> = poly
        .terms()
        .map(|(m, c)| (m.exponent(Variable::Pz), c.re().to_integer()))
        .map(|(e, c)| (e, if c < BigInt::from(0) { -c } else { c }))
        .collect();
    terms.sort();
    terms.into_iter().map(|(_, c)| c).collect()
}

/// Named closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    /// Two-leaf fidelity with PBS error only: `(1−α)² / (1 + 2(α² − α))`.
    Eq2,
    /// `leaves`-leaf fidelity with PBS error only: `Eq2^(leaves−1)`.
    Eq3 { leaves: usize },
    /// `1 − 3(leaves − 1) p` for `p_x = p_y = p_z = p`.
    FirstOrderEquiprobable { leaves: usize },
}

impl Formula {
    pub const SELECTORS: [&'static str; 3] = ["eq2", "eq3", "first_order_equiprobable"];

    /// Parses a selector, attaching `leaves` where it matters.
    pub fn parse(selector: &str, leaves: usize) -> Result<Self> {
        match selector {
            "eq2" => Ok(Formula::Eq2),
            "eq3" => Ok(Formula::Eq3 { leaves }),
            "first_order_equiprobable" => Ok(Formula::FirstOrderEquiprobable { leaves }),
            _ => Err(Error::Usage(format!(
                "unknown formula `{selector}` (expected one of {})",
                Formula::SELECTORS.join(", ")
            ))),
        }
    }

    pub fn selector(&self) -> &'static str {
        match self {
            Formula::Eq2 => "eq2",
            Formula::Eq3 { .. } => "eq3",
            Formula::FirstOrderEquiprobable { .. } => "first_order_equiprobable",
        }
    }
}

impl FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Formula::parse(s, 2)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq2 => f.write_str("eq2"),
            Formula::Eq3 { leaves } => write!(f, "eq3(n={leaves})"),
            Formula::FirstOrderEquiprobable { leaves } => write!(f, "first_order_equiprobable(n={leaves})"),
        }
    }
}

pub fn reference_formula(formula: Formula) -> Result<RationalFunction> {
    let alpha = Polynomial::var(Variable::Alpha);
    let one = Polynomial::one();
    let eq2 = || {
        let keep = &one - &alpha;
        let den = &one + &(&(&alpha * &alpha) - &alpha).scale(&G::from_int(2));
        RationalFunction::new(&keep * &keep, den)
    };
    match formula {
        Formula::Eq2 => eq2(),
        Formula::Eq3 { leaves } => {
            if leaves == 0 {
                return Err(Error::Domain("a microcluster needs at least one leaf".into()));
            }
            Ok(eq2()?.pow(leaves as u32 - 1))
        }
        Formula::FirstOrderEquiprobable { leaves } => {
            if leaves == 0 {
                return Err(Error::Domain("a microcluster needs at least one leaf".into()));
            }
            let slope = G::from_int(-3 * (leaves as i64 - 1));
            Ok(RationalFunction::from_polynomial(&one + &Polynomial::var(Variable::P).scale(&slope)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Point;

    fn q() -> Polynomial {
        Polynomial::var(Variable::Q)
    }
    fn pz() -> Polynomial {
        Polynomial::var(Variable::Pz)
    }

    #[test]
    fn closed_form_rows() {
        let g = G::from_int;
        let row3 = &(&(&q() * &q()) + &(&q() * &pz()).scale(&g(2))) + &(&pz() * &pz()).scale(&g(2));
        assert_eq!(closed_form_table1(3).unwrap(), row3);
        assert_eq!(closed_form_table1(1).unwrap(), Polynomial::one());
        let six = closed_form_table1(6).unwrap();
        let m = Monomial::var(Variable::Q).mul(&Monomial::var_pow(Variable::Pz, 4));
        assert_eq!(six.coeff(&m), g(-40));
        assert_eq!(six.coeff(&Monomial::var_pow(Variable::Pz, 5)), g(-16));
    }

    #[test]
    fn grid_rows_and_antidiagonals() {
        let t = binomial_transform_table(5, 5).unwrap();
        let row = |r: usize| t[r].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(row(0), "1,1,2,4,8");
        assert_eq!(row(2), "1,3,12,40,120");
        let anti: Vec<String> = antidiagonal(4).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(anti, ["1", "3", "6", "4"]);
        assert!(binomial_transform_table(0, 3).is_err());
    }

    #[test]
    fn formulas() {
        let eq2 = reference_formula(Formula::Eq2).unwrap();
        let v = eq2.eval_f64(&Point::new().with(Variable::Alpha, 0.01)).unwrap().re;
        // 0.9801 / 0.9802
        assert!((v - 0.9801 / 0.9802).abs() < 1e-15);
        assert_eq!(reference_formula(Formula::Eq3 { leaves: 4 }).unwrap(), eq2.mul(&eq2).mul(&eq2));
        let fo = reference_formula(Formula::FirstOrderEquiprobable { leaves: 5 }).unwrap();
        let expected = &Polynomial::one() - &Polynomial::var(Variable::P).scale(&G::from_int(12));
        assert_eq!(fo.as_polynomial().unwrap(), expected);
        assert!(matches!(Formula::parse("eq9", 2), Err(Error::Usage(_))));
    }

    #[test]
    fn q_substitution() {
        // 1 - 2p - p_z  ->  -q - p_z
        let p = Polynomial::var(Variable::P);
        let f = &(&Polynomial::one() - &p.scale(&G::from_int(2))) - &pz();
        assert_eq!(in_terms_of_q(&f), -(&q() + &pz()));
    }
}
