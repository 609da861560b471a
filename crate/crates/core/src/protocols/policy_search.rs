use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::algebra::{GaussianRational, Monomial, Polynomial, Variable};
use crate::error::Result;
use crate::optics::ErrorPlacementPolicy;

use super::expansion::{coefficient_expansion, expansion_monomials, CoefficientReport};
use super::microcluster::Settings;
use super::sweep::worker_pool;

type G = GaussianRational;

/// Published low-order pair fidelities, `(leaves, attempt)` to polynomial in
/// `α` and `p`, for every cell with `attempt ≤ leaves ≤ 4`.
pub fn reference_cells() -> Vec<((usize, usize), Polynomial)> {
    // (leaves, attempt, p, αp, α², α²p)
    #[allow(clippy::type_complexity)]
    let rows: [(usize, usize, i64, i64, (i64, i64), i64); 10] = [
        (1, 1, -8, 0, (-5, 2), 28),
        (2, 1, -12, 8, (-5, 2), 40),
        (2, 2, -14, 0, (-6, 1), 142),
        (3, 1, -16, 24, (-5, 2), 28),
        (3, 2, -18, 8, (-6, 1), 192),
        (3, 3, -20, 0, (-23, 2), 424),
        (4, 1, -20, 48, (-5, 2), -24),
        (4, 2, -22, 24, (-6, 1), 218),
        (4, 3, -24, 8, (-23, 2), 536),
        (4, 4, -26, 0, (-19, 1), 954),
    ];
    let p = Monomial::var(Variable::P);
    let a = Monomial::var(Variable::Alpha);
    let a2 = Monomial::var_pow(Variable::Alpha, 2);
    rows.iter()
        .map(|&(n, k, cp, cap, (a2n, a2d), ca2p)| {
            let poly = Polynomial::from_terms([
                (G::one(), Monomial::ONE),
                (G::from_int(cp), p),
                (G::from_int(cap), a.mul(&p)),
                (G::from_ratio(a2n, a2d), a2),
                (G::from_int(ca2p), a2.mul(&p)),
            ]);
            ((n, k), poly)
        })
        .collect()
}

/// A coefficient that differs from its reference value.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub leaves: usize,
    pub attempt: usize,
    pub monomial: Monomial,
    pub computed: G,
    pub reference: G,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyScore {
    pub policy: ErrorPlacementPolicy,
    pub matches: usize,
    pub total: usize,
    pub cells: Vec<CoefficientReport>,
    pub mismatches: Vec<Mismatch>,
}

/// Policies ranked by exactly matching coefficients, best first.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicySearchReport {
    pub ranking: Vec<PolicyScore>,
}

impl PolicySearchReport {
    pub fn best(&self) -> &PolicyScore {
        &self.ranking[0]
    }
}

fn score(policy: ErrorPlacementPolicy, cells: Vec<CoefficientReport>, refs: &[((usize, usize), Polynomial)]) -> PolicyScore {
    let monomials = expansion_monomials();
    let mut matches = 0;
    let mut mismatches = Vec::new();
    for (report, (_, reference)) in cells.iter().zip(refs) {
        for m in &monomials {
            let (computed, want) = (report.coeff(m), reference.coeff(m));
            if computed == want {
                matches += 1;
            } else {
                mismatches.push(Mismatch {
                    leaves: report.leaves,
                    attempt: report.attempt,
                    monomial: *m,
                    computed,
                    reference: want,
                });
            }
        }
    }
    PolicyScore { policy, matches, total: cells.len() * monomials.len(), cells, mismatches }
}

/// Expands every reference cell under every placement policy and ranks the
/// policies. Ties keep the order of [`ErrorPlacementPolicy::all`].
pub fn policy_search(settings: &Settings) -> Result<PolicySearchReport> {
    let refs = reference_cells();
    let policies = ErrorPlacementPolicy::all();
    let jobs: Vec<(ErrorPlacementPolicy, usize, usize)> =
        policies.iter().flat_map(|&pol| refs.iter().map(move |&((n, k), _)| (pol, n, k))).collect();
    let results: Vec<CoefficientReport> = worker_pool()?.install(|| {
        jobs.par_iter().map(|&(pol, n, k)| coefficient_expansion(n, k, pol, settings)).collect::<Result<Vec<_>>>()
    })?;
    let mut ranking: Vec<PolicyScore> = policies
        .iter()
        .zip(results.chunks(refs.len()))
        .map(|(&pol, chunk)| score(pol, chunk.to_vec(), &refs))
        .collect();
    ranking.sort_by_key(|s| std::cmp::Reverse(s.matches));
    Ok(PolicySearchReport { ranking })
}

impl fmt::Display for PolicySearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "# pair fidelity coefficients, p_x = p_y = p_z = p, fidelity renormalized by the branch trace");
        let _ = writeln!(out, "# monomials: {}", expansion_monomials().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
        for (rank, s) in self.ranking.iter().enumerate() {
            let _ = writeln!(out, "rank {} {}: {}/{} coefficients match", rank + 1, s.policy, s.matches, s.total);
        }
        let _ = writeln!(out, "best: {}", self.best().policy);
        for s in &self.ranking {
            let _ = writeln!(out, "\n[{}]", s.policy);
            for c in &s.cells {
                let _ = writeln!(out, "  ({}, {}) {}", c.leaves, c.attempt, c.polynomial());
            }
            for m in &s.mismatches {
                let _ = writeln!(
                    out,
                    "  mismatch ({}, {}) {}: computed {} reference {}",
                    m.leaves, m.attempt, m.monomial, m.computed, m.reference
                );
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_cells_are_complete() {
        let cells = reference_cells();
        assert_eq!(cells.len(), 10);
        for ((n, k), poly) in &cells {
            assert!(k <= n);
            assert_eq!(poly.constant_term(), G::one());
        }
        let first = &cells[0].1;
        assert_eq!(first.coeff(&Monomial::var_pow(Variable::Alpha, 2)), G::from_ratio(-5, 2));
    }
}
