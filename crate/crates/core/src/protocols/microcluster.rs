use crate::algebra::{FidelityScalar, Scalar};
use crate::error::{Error, Result};
use crate::optics::{epr_with_roles, fuse_success, star_state, ByproductTable, ErrorPlacementPolicy, NoiseModel};
use crate::register::{fidelity, Backend, DensityOperator, PureState, QubitAllocator, QubitId, Role};

/// Shared run settings: density backend and byproduct corrections.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub backend: Backend,
    pub byproducts: ByproductTable,
}

impl Settings {
    /// Branch backend: cheap while states stay close to pure, as freshly
    /// built microclusters do.
    pub fn branches() -> Self {
        Self { backend: Backend::Branches, byproducts: ByproductTable::default() }
    }

    /// Dense backend: better for floats and for the mixed states left by
    /// failed fusions.
    pub fn dense() -> Self {
        Self { backend: Backend::Dense, byproducts: ByproductTable::default() }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }
}

/// A built microcluster. Leaves are oldest first.
#[derive(Clone, Debug)]
pub struct MicroclusterHandle<S: Scalar> {
    pub state: DensityOperator<S>,
    pub root: QubitId,
    pub leaves: Vec<QubitId>,
}

impl<S: Scalar> MicroclusterHandle<S> {
    pub fn target(&self) -> Result<PureState<S>> {
        star_state(self.root, &self.leaves)
    }

    pub fn fidelity(&self) -> Result<S::Ratio>
    where
        S: FidelityScalar,
    {
        fidelity(&self.target()?, &self.state)
    }
}

/// Builds an `n`-leaf microcluster from EPR pairs. Each successful fusion
/// leaves a Pauli channel on the new root only.
pub fn build_microcluster<S: Scalar>(
    n: usize,
    noise: &NoiseModel<S>,
    settings: &Settings,
    alloc: &mut QubitAllocator,
) -> Result<MicroclusterHandle<S>> {
    if n == 0 {
        return Err(Error::Domain("a microcluster needs at least one leaf".into()));
    }
    let backend = settings.backend;
    if n == 1 {
        let (psi, root, leaf) = epr_with_roles::<S>(alloc, Role::Root, Role::Leaf { birth: 0 });
        return Ok(MicroclusterHandle { state: DensityOperator::from_pure(&psi, backend), root, leaves: vec![leaf] });
    }
    let policy = ErrorPlacementPolicy::default();
    let (p1, a, b) = epr_with_roles::<S>(alloc, Role::Leaf { birth: 0 }, Role::EprHalf);
    let (p2, c, d) = epr_with_roles::<S>(alloc, Role::EprHalf, Role::Leaf { birth: 1 });
    let mut root = alloc.fresh(Role::Root);
    let joined = DensityOperator::from_pure(&p1.tensor(&p2)?, backend);
    let mut state = fuse_success(&joined, b, c, noise, &policy, &[], root, &settings.byproducts)?;
    let mut leaves = vec![a, d];
    for birth in 2..n as u32 {
        let (p, c, d) = epr_with_roles::<S>(alloc, Role::EprHalf, Role::Leaf { birth });
        let next = alloc.fresh(Role::Root);
        let joined = state.tensor(&DensityOperator::from_pure(&p, backend))?;
        state = fuse_success(&joined, root, c, noise, &policy, &[], next, &settings.byproducts)?;
        root = next;
        leaves.push(d);
    }
    Ok(MicroclusterHandle { state, root, leaves })
}

/// Fidelity of a freshly built `n`-leaf microcluster against the ideal star.
pub fn microcluster_fidelity<S: FidelityScalar>(
    n: usize,
    noise: &NoiseModel<S>,
    settings: &Settings,
) -> Result<S::Ratio> {
    build_microcluster(n, noise, settings, &mut QubitAllocator::new())?.fidelity()
}
