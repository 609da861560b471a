use std::collections::VecDeque;
use std::fmt;

use crate::algebra::{GaussianRational, Scalar};
use crate::error::Result;
use crate::register::{DensityOperator, LocalOperator, PureState, QubitId};

type G = GaussianRational;

/// A single-qubit Clifford up to global phase, stored as an unnormalized
/// matrix `M` with `M M† = d·I`.
#[derive(Clone, PartialEq)]
pub struct Clifford {
    name: String,
    m: [G; 4],
    d: i64,
}

fn mul2(a: &[G; 4], b: &[G; 4]) -> [G; 4] {
    [
        &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
        &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
        &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
        &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
    ]
}

/// Divides by the first nonzero entry and reports the normalization `d`.
fn canonical(m: [G; 4]) -> ([G; 4], i64) {
    let lead = m.iter().find(|x| !x.is_zero()).expect("nonzero clifford").clone();
    let inv = lead.inv().expect("nonzero lead");
    let m = m.map(|x| &x * &inv);
    let d = &(&m[0] * &m[0].conj()) + &(&m[1] * &m[1].conj());
    let d = d.re().to_integer().try_into().expect("small normalization");
    (m, d)
}

impl Clifford {
    fn from_matrix(name: &str, m: [G; 4]) -> Self {
        let (m, d) = canonical(m);
        Self { name: name.to_string(), m, d }
    }

    pub fn identity() -> Self {
        Self::from_matrix("I", [G::one(), G::zero(), G::zero(), G::one()])
    }

    pub fn x() -> Self {
        Self::from_matrix("X", [G::zero(), G::one(), G::one(), G::zero()])
    }

    pub fn y() -> Self {
        Self::from_matrix("Y", [G::zero(), -G::i(), G::i(), G::zero()])
    }

    pub fn z() -> Self {
        Self::from_matrix("Z", [G::one(), G::zero(), G::zero(), G::from_int(-1)])
    }

    /// All 24 elements, shortest words in `H` and `S` first, identity first.
    pub fn group() -> Vec<Clifford> {
        let h = [G::one(), G::one(), G::one(), G::from_int(-1)];
        let s = [G::one(), G::zero(), G::zero(), G::i()];
        let mut out = vec![Clifford::identity()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gname, gen) in [("H", &h), ("S", &s)] {
                let base = &out[i];
                let (m, d) = canonical(mul2(gen, &base.m));
                if out.iter().any(|c| c.m == m) {
                    continue;
                }
                let word = if base.name == "I" { gname.to_string() } else { format!("{gname}{}", base.name) };
                out.push(Clifford { name: word, m, d });
                queue.push_back(out.len() - 1);
            }
        }
        for named in [Clifford::x(), Clifford::y(), Clifford::z()] {
            if let Some(c) = out.iter_mut().find(|c| c.m == named.m) {
                c.name = named.name;
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_identity(&self) -> bool {
        self.m == Clifford::identity().m
    }

    pub fn operator<S: Scalar>(&self) -> LocalOperator<S> {
        LocalOperator::from_gaussian(1, &self.m)
    }

    /// `ρ → M ρ M† / d`.
    pub fn apply<S: Scalar>(&self, rho: &DensityOperator<S>, q: QubitId) -> Result<DensityOperator<S>> {
        if self.is_identity() {
            return Ok(rho.clone());
        }
        let out = rho.apply(&self.operator(), &[q])?;
        Ok(if self.d == 1 { out } else { out.scale(&S::from_gaussian(&G::from_ratio(1, self.d))) })
    }

    /// `ψ → M ψ`, unnormalized.
    pub fn apply_pure<S: Scalar>(&self, psi: &PureState<S>, q: QubitId) -> Result<PureState<S>> {
        if self.is_identity() {
            return Ok(psi.clone());
        }
        psi.apply(&self.operator(), &[q])
    }
}

impl fmt::Debug for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Outcome-dependent corrections.
#[derive(Clone, Debug, PartialEq)]
pub struct ByproductTable {
    /// Fusion detector outcome `−`, applied to the survivor.
    pub fusion_minus: Clifford,
    /// Failed-fusion photon found in `|1⟩`, applied to that side's root.
    pub failure_one: Clifford,
    /// Extraneous leaf found in `|1⟩`, applied to its own root.
    pub leaf_one: Clifford,
    /// Connector `y−` outcome, applied to root A and root B.
    pub y_minus: [Clifford; 2],
}

impl Default for ByproductTable {
    fn default() -> Self {
        Self {
            fusion_minus: Clifford::z(),
            failure_one: Clifford::z(),
            leaf_one: Clifford::z(),
            y_minus: [Clifford::z(), Clifford::z()],
        }
    }
}

impl fmt::Display for ByproductTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fusion outcome -  : {} on survivor", self.fusion_minus)?;
        writeln!(f, "failed photon 1   : {} on root", self.failure_one)?;
        writeln!(f, "leaf outcome 1    : {} on root", self.leaf_one)?;
        writeln!(f, "y outcome -       : {} (x) {} on roots", self.y_minus[0], self.y_minus[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_24_distinct_elements() {
        let g = Clifford::group();
        assert_eq!(g.len(), 24);
        assert!(g[0].is_identity());
        for c in &g {
            assert!(c.d == 1 || c.d == 2, "{} has d = {}", c.name, c.d);
            // M M† = d I
            let adj = [c.m[0].conj(), c.m[2].conj(), c.m[1].conj(), c.m[3].conj()];
            let p = mul2(&c.m, &adj);
            assert_eq!(p, [G::from_int(c.d), G::zero(), G::zero(), G::from_int(c.d)]);
        }
        for name in ["X", "Y", "Z", "H", "S"] {
            assert!(g.iter().any(|c| c.name == name), "missing {name}");
        }
    }
}
