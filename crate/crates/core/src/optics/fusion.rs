use crate::algebra::{FidelityScalar, GaussianRational, Scalar};
use crate::error::{Error, Result};
use crate::register::{DensityOperator, LocalOperator, PureState, QubitAllocator, QubitId, Role};

use super::clifford::ByproductTable;
use super::noise::{pauli_channels, ErrorPlacementPolicy, NoiseModel};

/// A fresh two-qubit graph state `|0+⟩ + |1−⟩`, amplitudes `(1, 1, 1, −1)`.
pub fn epr<S: Scalar>(alloc: &mut QubitAllocator) -> (PureState<S>, QubitId, QubitId) {
    epr_with_roles(alloc, Role::EprHalf, Role::EprHalf)
}

pub fn epr_with_roles<S: Scalar>(alloc: &mut QubitAllocator, a: Role, b: Role) -> (PureState<S>, QubitId, QubitId) {
    let (qa, qb) = (alloc.fresh(a), alloc.fresh(b));
    let g = GaussianRational::from_int;
    let psi = PureState::from_gaussian(vec![qa, qb], &[g(1), g(1), g(1), g(-1)]).expect("fresh labels");
    (psi, qa, qb)
}

/// Failure weights `1 − W²` on the computational outcomes `00, 01, 10, 11`.
pub fn failure_weights<S: Scalar>(alpha: &S) -> [S; 4] {
    let keep = S::one().sub(alpha);
    let same = S::one().sub(&keep.mul(&keep));
    let diff = S::one().sub(&alpha.mul(alpha));
    [same.clone(), diff.clone(), diff, same]
}

/// `W†W + diag(1 − W²)`; the identity when the fusion POVM is complete.
pub fn kraus_sum<S: Scalar>(alpha: &S) -> LocalOperator<S> {
    let w = LocalOperator::pbs_weight(alpha);
    let wtw = w.adjoint().compose(&w);
    let fail = failure_weights(alpha);
    LocalOperator::diagonal((0..4).map(|i| wtw.entry(i, i).add(&fail[i])).collect())
}

fn check_pair<S: Scalar>(rho: &DensityOperator<S>, qa: QubitId, qb: QubitId) -> Result<()> {
    for q in [qa, qb] {
        if !rho.contains(q) {
            return Err(Error::UnknownQubit(q));
        }
    }
    if qa == qb {
        return Err(Error::Domain(format!("cannot fuse {qa} with itself")));
    }
    Ok(())
}

/// The success branch with no Pauli channels: PBS weighting, an even mixture
/// over which photon reaches the detector, the `±` outcomes, and the
/// outcome-`−` correction. The remaining photon takes the id `survivor` at
/// `qa`'s position. Trace equals `Tr(W ρ W†)`.
pub fn fuse_success_core<S: Scalar>(
    rho: &DensityOperator<S>,
    qa: QubitId,
    qb: QubitId,
    alpha: &S,
    survivor: QubitId,
    table: &ByproductTable,
) -> Result<DensityOperator<S>> {
    check_pair(rho, qa, qb)?;
    let order: Vec<QubitId> =
        rho.qubits().iter().filter(|&&q| q != qb).map(|&q| if q == qa { survivor } else { q }).collect();
    let weighted = rho.apply(&LocalOperator::pbs_weight(alpha), &[qa, qb])?;
    let (one, minus_one) = (S::one(), S::from_int(-1));
    let mut parts = Vec::with_capacity(4);
    for (m, o) in [(qa, qb), (qb, qa)] {
        for minus in [false, true] {
            let ket = [one.clone(), if minus { minus_one.clone() } else { one.clone() }];
            let mut t = weighted.project_remove(m, &ket)?;
            if minus {
                t = table.fusion_minus.apply(&t, o)?;
            }
            parts.push(t.relabel(o, survivor)?.reorder(&order)?);
        }
    }
    Ok(DensityOperator::sum(parts)?.scale(&S::from_gaussian(&GaussianRational::from_ratio(1, 4))))
}

/// Success branch of Type-1 fusion with channels placed per `policy`.
/// `roots` are the cluster roots for placements that touch them.
#[allow(clippy::too_many_arguments)]
pub fn fuse_success<S: Scalar>(
    rho: &DensityOperator<S>,
    qa: QubitId,
    qb: QubitId,
    noise: &NoiseModel<S>,
    policy: &ErrorPlacementPolicy,
    roots: &[QubitId],
    survivor: QubitId,
    table: &ByproductTable,
) -> Result<DensityOperator<S>> {
    check_pair(rho, qa, qb)?;
    let placement = policy.placement;
    let mut rho = rho.clone();
    if placement.before_fusion() {
        rho = pauli_channels(&rho, &[qa, qb], noise)?;
    }
    let out = fuse_success_core(&rho, qa, qb, &noise.alpha, survivor, table)?;
    let targets: Vec<QubitId> = if placement.on_leaves() {
        out.qubits().to_vec()
    } else {
        let mut t = Vec::new();
        if placement.on_survivor() {
            t.push(survivor);
        }
        if placement.on_roots() {
            t.extend(roots.iter().copied().filter(|&r| r != survivor));
        }
        t
    };
    pauli_channels(&out, &targets, noise)
}

/// Failure branch: both photons measured in the computational basis with
/// weights `1 − W²`, a correction on `root_a`/`root_b` for each `1`.
#[allow(clippy::too_many_arguments)]
pub fn fuse_fail<S: Scalar>(
    rho: &DensityOperator<S>,
    qa: QubitId,
    qb: QubitId,
    root_a: QubitId,
    root_b: QubitId,
    noise: &NoiseModel<S>,
    policy: &ErrorPlacementPolicy,
    table: &ByproductTable,
) -> Result<DensityOperator<S>> {
    check_pair(rho, qa, qb)?;
    for r in [root_a, root_b] {
        if !rho.contains(r) || r == qa || r == qb {
            return Err(Error::UnknownQubit(r));
        }
    }
    let weights = failure_weights(&noise.alpha);
    let basis = |b: usize| if b == 0 { [S::one(), S::zero()] } else { [S::zero(), S::one()] };
    let mut parts = Vec::new();
    for b1 in 0..2 {
        for b2 in 0..2 {
            let w = &weights[b1 * 2 + b2];
            if w.is_zero() {
                continue;
            }
            let mut t = rho.project_remove(qa, &basis(b1))?.project_remove(qb, &basis(b2))?;
            if b1 == 1 {
                t = table.failure_one.apply(&t, root_a)?;
            }
            if b2 == 1 {
                t = table.failure_one.apply(&t, root_b)?;
            }
            parts.push(t.scale(w));
        }
    }
    let out = DensityOperator::sum(parts)?;
    if policy.noisy_failures {
        pauli_channels(&out, &[root_a, root_b], noise)
    } else {
        Ok(out)
    }
}

/// `Tr(W ρ W†) / Tr ρ`.
pub fn success_probability<S: FidelityScalar>(
    rho: &DensityOperator<S>,
    qa: QubitId,
    qb: QubitId,
    alpha: &S,
) -> Result<S::Ratio> {
    check_pair(rho, qa, qb)?;
    let tr = rho.trace();
    if tr.is_zero() {
        return Err(Error::Domain("success probability of a zero-trace state".into()));
    }
    let weighted = rho.apply(&LocalOperator::pbs_weight(alpha), &[qa, qb])?;
    S::ratio(&weighted.trace(), &tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Polynomial, Variable};
    use crate::register::{fidelity, Backend};

    type G = GaussianRational;

    fn two_pairs<S: Scalar>(backend: Backend) -> (DensityOperator<S>, [QubitId; 4], QubitAllocator) {
        let mut alloc = QubitAllocator::new();
        let (a, a0, a1) = epr::<S>(&mut alloc);
        let (b, b0, b1) = epr::<S>(&mut alloc);
        let rho = DensityOperator::from_pure(&a.tensor(&b).unwrap(), backend);
        (rho, [a0, a1, b0, b1], alloc)
    }

    #[test]
    fn epr_overlap() {
        let mut alloc = QubitAllocator::new();
        let (psi, a, b) = epr::<G>(&mut alloc);
        assert_eq!(psi.norm_sqr(), G::from_int(4));
        let (_, c, d) = epr::<G>(&mut alloc);
        assert!(![a, b].contains(&c) && ![a, b].contains(&d));
        let rho = DensityOperator::from_pure(&psi, Backend::Branches);
        assert_eq!(fidelity(&psi, &rho).unwrap(), G::one());
    }

    #[test]
    fn ideal_fusion_makes_a_star() {
        for backend in [Backend::Branches, Backend::Dense] {
            let (rho, [a0, a1, b0, b1], mut alloc) = two_pairs::<G>(backend);
            let s = alloc.fresh(Role::Root);
            let out = fuse_success_core(&rho, a1, b0, &G::zero(), s, &ByproductTable::default()).unwrap();
            assert_eq!(out.qubits(), &[a0, s, b1]);
            let g = G::from_int;
            // |0,+,+> + |1,-,-> with root s first
            let star = PureState::from_gaussian(
                vec![s, a0, b1],
                &[g(1), g(1), g(1), g(1), g(1), g(-1), g(-1), g(1)],
            )
            .unwrap();
            assert_eq!(fidelity(&star, &out).unwrap(), G::one());
        }
    }

    #[test]
    fn success_probability_values() {
        let (rho, [_, a1, b0, _], _) = two_pairs::<G>(Backend::Branches);
        assert_eq!(success_probability(&rho, a1, b0, &G::zero()).unwrap(), G::from_ratio(1, 2));
        assert_eq!(success_probability(&rho, a1, b0, &G::from_ratio(1, 2)).unwrap(), G::from_ratio(1, 4));

        let (rho, [_, a1, b0, _], _) = two_pairs::<Polynomial>(Backend::Branches);
        let alpha = Polynomial::var(Variable::Alpha);
        let p = success_probability(&rho, a1, b0, &alpha).unwrap();
        let one_minus = &Polynomial::one() - &alpha;
        let expected = (&(&one_minus * &one_minus) + &(&alpha * &alpha)).scale(&G::from_ratio(1, 2));
        assert!(p.equivalent(&crate::algebra::RationalFunction::from_polynomial(expected)));

        let mut alloc = QubitAllocator::new();
        let (x, y) = (alloc.fresh(Role::EprHalf), alloc.fresh(Role::EprHalf));
        let zz = DensityOperator::from_pure(&PureState::<G>::basis(vec![x, y], &[0, 0]).unwrap(), Backend::Dense);
        assert_eq!(success_probability(&zz, x, y, &G::zero()).unwrap(), G::one());
    }

    #[test]
    fn success_and_failure_traces_complete() {
        let alpha = Polynomial::var(Variable::Alpha);
        assert_eq!(kraus_sum(&alpha), LocalOperator::diagonal(vec![Polynomial::one(); 4]));
        let noise = NoiseModel::symbolic_alpha_only();
        let (rho, [a0, a1, b0, b1], mut alloc) = two_pairs::<Polynomial>(Backend::Branches);
        let s = alloc.fresh(Role::Connector);
        let policy = ErrorPlacementPolicy::default();
        let table = ByproductTable::default();
        let ok = fuse_success(&rho, a1, b0, &noise, &policy, &[a0, b1], s, &table).unwrap();
        let bad = fuse_fail(&rho, a1, b0, a0, b1, &noise, &policy, &table).unwrap();
        assert_eq!(&ok.trace() + &bad.trace(), rho.trace());
    }

    #[test]
    fn ideal_failure_is_anticorrelated() {
        let (rho, [a0, a1, b0, b1], _) = two_pairs::<G>(Backend::Dense);
        let noise = NoiseModel::ideal();
        let out = fuse_fail(&rho, a1, b0, a0, b1, &noise, &Default::default(), &ByproductTable::default()).unwrap();
        assert_eq!(out.qubits(), &[a0, b1]);
        assert_eq!(out.trace(), rho.trace().mul(&G::from_ratio(1, 2)));
        // each side ends in |+><+| after its correction: a product state
        let g = G::from_int;
        let plus_plus = PureState::from_gaussian(vec![a0, b1], &[g(1), g(1), g(1), g(1)]).unwrap();
        assert_eq!(fidelity(&plus_plus, &out).unwrap(), G::one());
    }

    #[test]
    fn unknown_qubits_are_domain_errors() {
        let (rho, [a0, _, b0, _], mut alloc) = two_pairs::<G>(Backend::Branches);
        let stray = alloc.fresh(Role::Leaf { birth: 9 });
        let s = alloc.fresh(Role::Root);
        let t = ByproductTable::default();
        assert!(matches!(fuse_success_core(&rho, a0, stray, &G::zero(), s, &t), Err(Error::UnknownQubit(_))));
        assert!(fuse_success_core(&rho, a0, a0, &G::zero(), s, &t).is_err());
        assert!(success_probability(&rho, stray, b0, &G::zero()).is_err());
    }
}
