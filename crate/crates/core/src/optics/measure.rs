use crate::algebra::{GaussianRational, Scalar};
use crate::error::{Error, Result};
use crate::register::{DensityOperator, QubitId};

use super::clifford::ByproductTable;

fn require<S: Scalar>(rho: &DensityOperator<S>, qs: &[QubitId]) -> Result<()> {
    match qs.iter().find(|q| !rho.contains(**q)) {
        Some(&q) => Err(Error::UnknownQubit(q)),
        None => Ok(()),
    }
}

/// Computational-basis measurement of `q`, summed over outcomes, with the
/// outcome-`1` correction on `root`.
pub fn measure_z_remove<S: Scalar>(
    rho: &DensityOperator<S>,
    q: QubitId,
    root: QubitId,
    table: &ByproductTable,
) -> Result<DensityOperator<S>> {
    require(rho, &[q, root])?;
    let zero = rho.project_remove(q, &[S::one(), S::zero()])?;
    let one = rho.project_remove(q, &[S::zero(), S::one()])?;
    zero.add(&table.leaf_one.apply(&one, root)?)
}

/// `y`-basis eigenkets `(1, i)` for `+` and `(1, −i)` for `−`.
pub fn y_eigenket<S: Scalar>(plus: bool) -> [S; 2] {
    let i = GaussianRational::i();
    [S::one(), S::from_gaussian(&if plus { i } else { -i })]
}

/// `y`-basis measurement of the connector `q`, summed over outcomes, with
/// the `y−` corrections on the two roots.
pub fn measure_y_remove<S: Scalar>(
    rho: &DensityOperator<S>,
    q: QubitId,
    root_a: QubitId,
    root_b: QubitId,
    table: &ByproductTable,
) -> Result<DensityOperator<S>> {
    require(rho, &[q, root_a, root_b])?;
    let plus = rho.project_remove(q, &y_eigenket(true))?;
    let mut minus = rho.project_remove(q, &y_eigenket(false))?;
    minus = table.y_minus[0].apply(&minus, root_a)?;
    minus = table.y_minus[1].apply(&minus, root_b)?;
    plus.add(&minus).map(|r| r.scale(&S::from_gaussian(&GaussianRational::from_ratio(1, 2))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::{fidelity, Backend, LocalOperator, PureState, QubitAllocator, Role};

    type G = GaussianRational;

    fn g(n: i64) -> G {
        G::from_int(n)
    }

    fn chain() -> (PureState<G>, [QubitId; 3]) {
        let mut alloc = QubitAllocator::new();
        let (a, c, b) = (alloc.fresh(Role::Root), alloc.fresh(Role::Connector), alloc.fresh(Role::Root));
        // |0,+,+> + |1,-,-> over (c, a, b): the centre of a 3-chain first
        let psi = PureState::from_gaussian(vec![c, a, b], &[g(1), g(1), g(1), g(1), g(1), g(-1), g(-1), g(1)])
            .unwrap();
        (psi, [a, c, b])
    }

    fn pair_target(a: QubitId, b: QubitId) -> PureState<G> {
        let (p, m) = (&g(1) + &G::i(), &g(1) - &G::i());
        PureState::from_gaussian(vec![a, b], &[m.clone(), p.clone(), p, m]).unwrap()
    }

    #[test]
    fn y_outcomes_on_a_chain() {
        let (psi, [a, c, b]) = chain();
        let plus = psi.project_remove(c, &y_eigenket(true)).unwrap().reorder(&[a, b]).unwrap();
        let t = pair_target(a, b);
        assert_eq!(plus, t);
        let minus = psi.project_remove(c, &y_eigenket(false)).unwrap();
        let z = LocalOperator::z();
        let fixed = minus.apply(&z, &[a]).unwrap().apply(&z, &[b]).unwrap();
        let overlap = t.inner(&fixed).unwrap();
        assert_eq!(&overlap * &overlap.conj(), &t.norm_sqr() * &fixed.norm_sqr());

        let rho = DensityOperator::from_pure(&psi, Backend::Branches);
        let out = measure_y_remove(&rho, c, a, b, &ByproductTable::default()).unwrap();
        assert_eq!(fidelity(&t, &out).unwrap(), g(1));
        assert_eq!(out.trace(), rho.trace());
    }

    #[test]
    fn z_measurement_of_a_leaf() {
        let mut alloc = QubitAllocator::new();
        let (r, l1, l2) = (alloc.fresh(Role::Root), alloc.fresh(Role::Leaf { birth: 0 }), alloc.fresh(Role::Leaf { birth: 1 }));
        let star = PureState::<G>::from_gaussian(vec![r, l1, l2], &[g(1), g(1), g(1), g(1), g(1), g(-1), g(-1), g(1)])
            .unwrap();
        let epr = PureState::from_gaussian(vec![r, l1], &[g(1), g(1), g(1), g(-1)]).unwrap();
        let t = ByproductTable::default();
        for backend in [Backend::Branches, Backend::Dense] {
            let rho = DensityOperator::from_pure(&star, backend);
            let out = measure_z_remove(&rho, l2, r, &t).unwrap();
            assert_eq!(fidelity(&epr, &out).unwrap(), g(1));
            assert_eq!(out.trace(), rho.trace());
            // a Z error on the measured leaf changes nothing
            let zed = rho.apply(&LocalOperator::z(), &[l2]).unwrap();
            assert_eq!(measure_z_remove(&zed, l2, r, &t).unwrap().matrix(), out.matrix());
        }
        let rho = DensityOperator::from_pure(&star, Backend::Branches);
        let stray = alloc.fresh(Role::Root);
        assert!(matches!(measure_z_remove(&rho, stray, r, &t), Err(Error::UnknownQubit(_))));
    }
}
