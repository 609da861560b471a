use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The fixed set of symbols that can appear in an expression.
///
/// `P` and `Q` are derived: `P` stands for a shared Pauli rate after
/// substitution (`p_x = p_y = p`, optionally `p_z = p` too) and `Q = 2P - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    Px,
    Py,
    Pz,
    Alpha,
    P,
    Q,
}

pub const NUM_VARS: usize = 6;

impl Variable {
    pub const ALL: [Variable; NUM_VARS] =
        [Variable::Px, Variable::Py, Variable::Pz, Variable::Alpha, Variable::P, Variable::Q];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::Px => "p_x",
            Variable::Py => "p_y",
            Variable::Pz => "p_z",
            Variable::Alpha => "alpha",
            Variable::P => "p",
            Variable::Q => "q",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variable::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown variable `{s}`")))
    }
}

/// Exponent vector over [`Variable::ALL`].
///
/// Ordered graded-lexicographically: total degree first, then exponents
/// compared in variable order, a larger exponent of an earlier variable
/// ranking higher.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; NUM_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NUM_VARS]);

    pub fn var(v: Variable) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Variable, e: u8) -> Self {
        let mut m = [0; NUM_VARS];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponent(&self, v: Variable) -> u8 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; NUM_VARS]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a = a.checked_add(b).expect("monomial exponent overflow");
        }
        Monomial(m)
    }

    pub fn within(&self, caps: &[u8; NUM_VARS]) -> bool {
        self.0.iter().zip(caps).all(|(e, c)| e <= c)
    }

    pub fn variables(&self) -> impl Iterator<Item = (Variable, u8)> + '_ {
        Variable::ALL.into_iter().filter_map(|v| match self.exponent(v) {
            0 => None,
            e => Some((v, e)),
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.variables() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
