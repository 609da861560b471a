use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Caps, GaussianRational, Monomial, Polynomial, TruncatedSeries, Variable};
use crate::error::{Error, Result};
use crate::optics::{ErrorPlacementPolicy, NoiseModel};

use super::microcluster::Settings;
use super::pair::{fuse_pair, PairFusionSpec};

/// Largest cluster the truncated-series expansion accepts.
pub const MAX_EXPANSION_LEAVES: usize = 6;

/// First order in `p`, second order in `α`.
pub fn expansion_caps() -> Caps {
    Caps::zero().with(Variable::P, 1).with(Variable::Alpha, 2)
}

/// `1, α, p, α², αp, α²p` in monomial order.
pub fn expansion_monomials() -> Vec<Monomial> {
    let mut out = Vec::new();
    for p in 0..=1 {
        for a in 0..=2 {
            out.push(Monomial::var_pow(Variable::P, p).mul(&Monomial::var_pow(Variable::Alpha, a)));
        }
    }
    out.sort();
    out
}

/// Low-order coefficients of a pair fidelity with `p_x = p_y = p_z = p`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientReport {
    pub leaves: usize,
    pub attempt: usize,
    pub policy: ErrorPlacementPolicy,
    pub coefficients: BTreeMap<Monomial, GaussianRational>,
}

impl CoefficientReport {
    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.coefficients.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::from_terms(self.coefficients.iter().map(|(m, c)| (c.clone(), *m)))
    }
}

impl fmt::Display for CoefficientReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) {}: {}", self.leaves, self.attempt, self.policy, self.polynomial())
    }
}

/// Expands the exact pair fidelity about `p = α = 0` and keeps the
/// monomials of [`expansion_monomials`].
pub fn coefficient_expansion(
    leaves: usize,
    attempt: usize,
    policy: ErrorPlacementPolicy,
    settings: &Settings,
) -> Result<CoefficientReport> {
    if leaves > MAX_EXPANSION_LEAVES {
        return Err(Error::Capacity(format!(
            "series expansion is limited to {MAX_EXPANSION_LEAVES} leaves; evaluate the exact backend at \
             several rational points and solve for the coefficients instead"
        )));
    }
    let noise: NoiseModel<TruncatedSeries> = NoiseModel::symbolic_equiprobable().truncated(expansion_caps());
    let spec = PairFusionSpec::new(leaves, attempt, noise, policy)?;
    let series = fuse_pair(&spec, settings)?.fidelity;
    let coefficients = expansion_monomials().into_iter().map(|m| (m, series.coeff(&m))).collect();
    Ok(CoefficientReport { leaves, attempt, policy, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_set() {
        let names: Vec<String> = expansion_monomials().iter().map(ToString::to_string).collect();
        assert_eq!(names.len(), 6);
        assert_eq!(names[0], "1");
        assert!(names.contains(&"alpha^2*p".to_string()));
    }

    #[test]
    fn single_leaf_expansion() {
        let r = coefficient_expansion(1, 1, Default::default(), &Settings::branches()).unwrap();
        assert_eq!(r.coeff(&Monomial::ONE), GaussianRational::one());
        assert_eq!(r.coeff(&Monomial::var(Variable::P)), GaussianRational::from_int(-2));
        assert!(coefficient_expansion(MAX_EXPANSION_LEAVES + 1, 1, Default::default(), &Settings::branches()).is_err());
    }
}
