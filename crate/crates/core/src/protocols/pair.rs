use crate::algebra::{FidelityScalar, Scalar};
use crate::error::{Error, Result};
use crate::optics::{
    failure_weights, fuse_fail, fuse_success, fuse_success_core, measure_y_remove, measure_z_remove, pair_target,
    pauli_channel, pauli_channels, ErrorPlacementPolicy, NoiseModel,
};
use crate::register::{fidelity, DensityOperator, QubitAllocator, QubitId, Role};

use super::microcluster::{build_microcluster, MicroclusterHandle, Settings};

/// Two `leaves`-leaf microclusters bonded at fusion attempt `attempt`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairFusionSpec<S> {
    pub leaves: usize,
    pub attempt: usize,
    pub noise: NoiseModel<S>,
    pub policy: ErrorPlacementPolicy,
}

impl<S: Scalar> PairFusionSpec<S> {
    pub fn new(leaves: usize, attempt: usize, noise: NoiseModel<S>, policy: ErrorPlacementPolicy) -> Result<Self> {
        let spec = Self { leaves, attempt, noise, policy };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.leaves == 0 {
            return Err(Error::Domain("a microcluster needs at least one leaf".into()));
        }
        if self.attempt == 0 {
            return Err(Error::Domain("attempts are numbered from 1".into()));
        }
        if self.attempt > self.leaves {
            return Err(Error::AttemptExceedsLeaves { attempt: self.attempt, leaves: self.leaves });
        }
        Ok(())
    }
}

/// The two-root state left after bonding, and its fidelity.
#[derive(Clone, Debug)]
pub struct PairOutcome<S: FidelityScalar> {
    pub state: DensityOperator<S>,
    pub root_a: QubitId,
    pub root_b: QubitId,
    pub fidelity: S::Ratio,
}

fn finish<S: FidelityScalar>(state: DensityOperator<S>, root_a: QubitId, root_b: QubitId) -> Result<PairOutcome<S>> {
    let state = state.reorder(&[root_a, root_b])?;
    let fidelity = fidelity(&pair_target(root_a, root_b)?, &state)?;
    Ok(PairOutcome { state, root_a, root_b, fidelity })
}

fn basis<S: Scalar>(b: usize) -> [S; 2] {
    if b == 0 {
        [S::one(), S::zero()]
    } else {
        [S::zero(), S::one()]
    }
}

/// One cluster's share of the pipeline: each entry is a failure-outcome
/// history and the (unweighted) state of root plus bonding leaf.
struct Side<S> {
    root: QubitId,
    bond: QubitId,
    histories: Vec<(Vec<usize>, DensityOperator<S>)>,
}

fn prepare_side<S: Scalar>(
    cluster: MicroclusterHandle<S>,
    spec: &PairFusionSpec<S>,
    settings: &Settings,
) -> Result<Side<S>> {
    let (noise, policy, table) = (&spec.noise, &spec.policy, &settings.byproducts);
    let root = cluster.root;
    let mut leaves = cluster.leaves;
    let mut histories = vec![(Vec::new(), cluster.state.settle())];
    for _ in 1..spec.attempt {
        let leaf = leaves.pop().expect("validated attempt");
        let mut next = Vec::with_capacity(histories.len() * 2);
        for (bits, rho) in &histories {
            for b in 0..2 {
                let mut t = rho.project_remove(leaf, &basis(b))?;
                if b == 1 {
                    t = table.failure_one.apply(&t, root)?;
                }
                if policy.noisy_failures {
                    t = pauli_channel(&t, root, noise)?;
                }
                let mut bits = bits.clone();
                bits.push(b);
                next.push((bits, t.settle()));
            }
        }
        histories = next;
    }
    let bond = leaves.pop().expect("validated attempt");
    let placement = policy.placement;
    let mut local = Vec::new();
    if placement.before_fusion() {
        local.push(bond);
    }
    if placement.on_roots() {
        local.push(root);
    }
    if placement.on_leaves() {
        local.extend_from_slice(&leaves);
    }
    let histories = histories
        .into_iter()
        .map(|(bits, rho)| {
            let mut rho = pauli_channels(&rho, &local, noise)?.settle();
            for &leaf in &leaves {
                rho = measure_z_remove(&rho, leaf, root, table)?.settle();
            }
            Ok((bits, rho))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Side { root, bond, histories })
}

/// Builds two microclusters, runs `attempt − 1` failed fusions on their
/// newest leaves, bonds them at the next-newest pair, removes extraneous
/// leaves by z-measurement and the connector by y-measurement.
///
/// The two clusters stay factorized until the bonding fusion: each failure
/// history is tracked per side and the two sides are combined with the
/// joint failure weights. Every operation before bonding is local to one
/// side, so this equals [`fuse_pair_joint`].
pub fn fuse_pair<S: FidelityScalar>(spec: &PairFusionSpec<S>, settings: &Settings) -> Result<PairOutcome<S>> {
    spec.validate()?;
    let mut alloc = QubitAllocator::new();
    let a = build_microcluster(spec.leaves, &spec.noise, settings, &mut alloc)?;
    let b = build_microcluster(spec.leaves, &spec.noise, settings, &mut alloc)?;
    let a = prepare_side(a, spec, settings)?;
    let b = prepare_side(b, spec, settings)?;
    let connector = alloc.fresh(Role::Connector);
    let weights = failure_weights(&spec.noise.alpha);
    let placement = spec.policy.placement;
    let table = &settings.byproducts;
    let mut parts = Vec::new();
    for (bits_a, rho_a) in &a.histories {
        for (bits_b, rho_b) in &b.histories {
            let mut w = S::one();
            for (x, y) in bits_a.iter().zip(bits_b) {
                w = w.mul(&weights[x * 2 + y]);
            }
            if w.is_zero() {
                continue;
            }
            let joint = rho_a.tensor(rho_b)?;
            let mut rho = fuse_success_core(&joint, a.bond, b.bond, &spec.noise.alpha, connector, table)?;
            if placement.on_survivor() {
                rho = pauli_channel(&rho, connector, &spec.noise)?;
            }
            rho = measure_y_remove(&rho, connector, a.root, b.root, table)?;
            parts.push(rho.scale(&w));
        }
    }
    finish(DensityOperator::sum(parts)?, a.root, b.root)
}

/// The same pipeline on the full joint register, in protocol order.
pub fn fuse_pair_joint<S: FidelityScalar>(spec: &PairFusionSpec<S>, settings: &Settings) -> Result<PairOutcome<S>> {
    spec.validate()?;
    let mut alloc = QubitAllocator::new();
    let a = build_microcluster(spec.leaves, &spec.noise, settings, &mut alloc)?;
    let b = build_microcluster(spec.leaves, &spec.noise, settings, &mut alloc)?;
    let (ra, rb) = (a.root, b.root);
    let (mut la, mut lb) = (a.leaves, b.leaves);
    let mut rho = a.state.tensor(&b.state)?.settle();
    let table = &settings.byproducts;
    for _ in 1..spec.attempt {
        let (qa, qb) = (la.pop().expect("validated"), lb.pop().expect("validated"));
        rho = fuse_fail(&rho, qa, qb, ra, rb, &spec.noise, &spec.policy, table)?.settle();
    }
    let (qa, qb) = (la.pop().expect("validated"), lb.pop().expect("validated"));
    let connector = alloc.fresh(Role::Connector);
    rho = fuse_success(&rho, qa, qb, &spec.noise, &spec.policy, &[ra, rb], connector, table)?;
    for &leaf in &la {
        rho = measure_z_remove(&rho, leaf, ra, table)?;
    }
    for &leaf in &lb {
        rho = measure_z_remove(&rho, leaf, rb, table)?;
    }
    rho = measure_y_remove(&rho, connector, ra, rb, table)?;
    finish(rho, ra, rb)
}
