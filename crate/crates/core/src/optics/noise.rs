use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{Caps, GaussianRational, Polynomial, Scalar, TruncatedSeries, Variable};
use crate::error::{Error, Result};
use crate::register::{DensityOperator, LocalOperator, QubitId};

/// PBS imperfection `alpha` and the Pauli error probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel<S> {
    pub alpha: S,
    pub p_x: S,
    pub p_y: S,
    pub p_z: S,
}

impl<S: Scalar> NoiseModel<S> {
    pub fn new(alpha: S, p_x: S, p_y: S, p_z: S) -> Self {
        Self { alpha, p_x, p_y, p_z }
    }

    pub fn ideal() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    /// `p_x = p_y = p_z = p`.
    pub fn equiprobable(alpha: S, p: S) -> Self {
        Self::new(alpha, p.clone(), p.clone(), p)
    }

    pub fn is_noiseless(&self) -> bool {
        [&self.alpha, &self.p_x, &self.p_y, &self.p_z].iter().all(|v| v.is_zero())
    }

    pub fn pauli_free(&self) -> bool {
        [&self.p_x, &self.p_y, &self.p_z].iter().all(|v| v.is_zero())
    }

    /// Swaps `p_x` and `p_y`.
    pub fn swap_xy(&self) -> Self {
        Self::new(self.alpha.clone(), self.p_y.clone(), self.p_x.clone(), self.p_z.clone())
    }

    pub fn map<T, F: Fn(&S) -> T>(&self, f: F) -> NoiseModel<T> {
        NoiseModel { alpha: f(&self.alpha), p_x: f(&self.p_x), p_y: f(&self.p_y), p_z: f(&self.p_z) }
    }
}

impl NoiseModel<GaussianRational> {
    /// Range checks: `0 ≤ α ≤ 1/2`, `p_i ≥ 0`, `Σ p_i ≤ 1`, all real.
    pub fn validate(&self) -> Result<()> {
        let vals = [("alpha", &self.alpha), ("p_x", &self.p_x), ("p_y", &self.p_y), ("p_z", &self.p_z)];
        for (name, v) in vals {
            if !v.is_real() {
                return Err(Error::Domain(format!("{name} must be real, got {v}")));
            }
            if v.re() < &num_rational::BigRational::from_integer(0.into()) {
                return Err(Error::Domain(format!("{name} must be nonnegative, got {v}")));
            }
        }
        if self.alpha.re() > &num_rational::BigRational::new(1.into(), 2.into()) {
            return Err(Error::Domain(format!("alpha must be at most 1/2, got {}", self.alpha)));
        }
        let total = &(&self.p_x + &self.p_y) + &self.p_z;
        if total.re() > &num_rational::BigRational::from_integer(1.into()) {
            return Err(Error::Domain(format!("p_x + p_y + p_z must be at most 1, got {total}")));
        }
        Ok(())
    }

    pub fn lift<T: Scalar>(&self) -> NoiseModel<T> {
        self.map(T::from_gaussian)
    }
}

impl NoiseModel<Complex64> {
    pub fn validate(&self) -> Result<()> {
        let vals = [("alpha", self.alpha), ("p_x", self.p_x), ("p_y", self.p_y), ("p_z", self.p_z)];
        for (name, v) in vals {
            if v.im != 0.0 || !v.re.is_finite() || v.re < 0.0 {
                return Err(Error::Domain(format!("{name} must be a finite nonnegative real, got {v}")));
            }
        }
        if self.alpha.re > 0.5 {
            return Err(Error::Domain(format!("alpha must be at most 1/2, got {}", self.alpha.re)));
        }
        if self.p_x.re + self.p_y.re + self.p_z.re > 1.0 {
            return Err(Error::Domain("p_x + p_y + p_z must be at most 1".into()));
        }
        Ok(())
    }
}

impl NoiseModel<Polynomial> {
    /// Independent symbols `alpha, p_x, p_y, p_z`.
    pub fn symbolic() -> Self {
        Self::new(
            Polynomial::var(Variable::Alpha),
            Polynomial::var(Variable::Px),
            Polynomial::var(Variable::Py),
            Polynomial::var(Variable::Pz),
        )
    }

    /// `alpha` and a single symbol `p` for all three Pauli rates.
    pub fn symbolic_equiprobable() -> Self {
        Self::equiprobable(Polynomial::var(Variable::Alpha), Polynomial::var(Variable::P))
    }

    /// `alpha = 0`, `p_x = p_y = p`, independent `p_z`.
    pub fn symbolic_xy_symmetric() -> Self {
        let p = Polynomial::var(Variable::P);
        Self::new(Polynomial::zero(), p.clone(), p, Polynomial::var(Variable::Pz))
    }

    /// `alpha = 0` and a single symbol `p` for all three Pauli rates.
    pub fn symbolic_pauli_equiprobable() -> Self {
        Self::equiprobable(Polynomial::zero(), Polynomial::var(Variable::P))
    }

    /// `alpha` only, Pauli channel off.
    pub fn symbolic_alpha_only() -> Self {
        Self::new(Polynomial::var(Variable::Alpha), Polynomial::zero(), Polynomial::zero(), Polynomial::zero())
    }

    pub fn truncated(&self, caps: Caps) -> NoiseModel<TruncatedSeries> {
        self.map(|p| TruncatedSeries::new(p, caps))
    }
}

/// `ρ → (1 − Σp)ρ + p_x XρX + p_y YρY + p_z ZρZ` on qubit `q`.
pub fn pauli_channel<S: Scalar>(
    rho: &DensityOperator<S>,
    q: QubitId,
    noise: &NoiseModel<S>,
) -> Result<DensityOperator<S>> {
    if !rho.contains(q) {
        return Err(Error::UnknownQubit(q));
    }
    if noise.pauli_free() {
        return Ok(rho.clone());
    }
    let keep = S::one().sub(&noise.p_x).sub(&noise.p_y).sub(&noise.p_z);
    let mut parts = vec![rho.scale(&keep)];
    for (p, op) in [
        (&noise.p_x, LocalOperator::x()),
        (&noise.p_y, LocalOperator::y()),
        (&noise.p_z, LocalOperator::z()),
    ] {
        if !p.is_zero() {
            parts.push(rho.apply(&op, &[q])?.scale(p));
        }
    }
    DensityOperator::sum(parts)
}

pub fn pauli_channels<S: Scalar>(
    rho: &DensityOperator<S>,
    qubits: &[QubitId],
    noise: &NoiseModel<S>,
) -> Result<DensityOperator<S>> {
    let mut rho = rho.clone();
    for &q in qubits {
        rho = pauli_channel(&rho, q, noise)?;
    }
    Ok(rho)
}

/// Where Pauli channels act around a successful bonding fusion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Placement {
    #[default]
    SurvivorOnly,
    BothFusionPhotons,
    SurvivorPlusRoots,
    AllClusterPhotons,
}

impl Placement {
    pub const ALL: [Placement; 4] = [
        Placement::SurvivorOnly,
        Placement::BothFusionPhotons,
        Placement::SurvivorPlusRoots,
        Placement::AllClusterPhotons,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Placement::SurvivorOnly => "survivor-only",
            Placement::BothFusionPhotons => "both-fusion-photons",
            Placement::SurvivorPlusRoots => "survivor-plus-roots",
            Placement::AllClusterPhotons => "all-cluster-photons",
        }
    }

    /// Photons that receive a channel before the fusion.
    pub fn before_fusion(self) -> bool {
        self == Placement::BothFusionPhotons
    }

    /// Whether the survivor receives a channel after the fusion.
    pub fn on_survivor(self) -> bool {
        self != Placement::BothFusionPhotons
    }

    pub fn on_roots(self) -> bool {
        matches!(self, Placement::SurvivorPlusRoots | Placement::AllClusterPhotons)
    }

    pub fn on_leaves(self) -> bool {
        self == Placement::AllClusterPhotons
    }
}

/// Error placement for the bonding fusion, plus whether failed attempts
/// also leave a channel on both roots.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorPlacementPolicy {
    pub placement: Placement,
    pub noisy_failures: bool,
}

impl ErrorPlacementPolicy {
    pub fn new(placement: Placement, noisy_failures: bool) -> Self {
        Self { placement, noisy_failures }
    }

    /// Success and failure traces add up to the input trace. Channels placed
    /// before the fusion act on the success branch only, and the PBS filter
    /// makes its probability depend on them.
    pub fn is_trace_preserving(&self) -> bool {
        !self.placement.before_fusion()
    }

    /// Every placement, quiet failures first.
    pub fn all() -> Vec<Self> {
        [false, true]
            .into_iter()
            .flat_map(|nf| Placement::ALL.into_iter().map(move |p| Self::new(p, nf)))
            .collect()
    }
}

impl fmt::Display for ErrorPlacementPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.placement.name())?;
        if self.noisy_failures {
            f.write_str("+noisy-failures")?;
        }
        Ok(())
    }
}

impl FromStr for ErrorPlacementPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (base, noisy) = match s.strip_suffix("+noisy-failures") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let placement = Placement::ALL
            .into_iter()
            .find(|p| p.name() == base)
            .ok_or_else(|| Error::Usage(format!("unknown policy `{s}`")))?;
        Ok(Self::new(placement, noisy))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::{Backend, PureState, QubitAllocator, Role};

    #[test]
    fn channel_on_ground_state() {
        let mut alloc = QubitAllocator::new();
        let q = alloc.fresh(Role::Root);
        let zero = PureState::<Polynomial>::basis(vec![q], &[0]).unwrap();
        let noise = NoiseModel::symbolic();
        for backend in [Backend::Dense, Backend::Branches] {
            let rho = pauli_channel(&DensityOperator::from_pure(&zero, backend), q, &noise).unwrap();
            let m = rho.matrix();
            let px = Polynomial::var(Variable::Px);
            let py = Polynomial::var(Variable::Py);
            assert_eq!(m[0], &(&Polynomial::one() - &px) - &py);
            assert_eq!(m[3], &px + &py);
            assert!(m[1].is_zero() && m[2].is_zero());
            assert_eq!(rho.trace(), Polynomial::one());
        }
    }

    #[test]
    fn policy_names_round_trip() {
        for p in ErrorPlacementPolicy::all() {
            assert_eq!(p.to_string().parse::<ErrorPlacementPolicy>().unwrap(), p);
        }
        assert_eq!(ErrorPlacementPolicy::default().to_string(), "survivor-only");
        assert!("nowhere".parse::<ErrorPlacementPolicy>().is_err());
    }

    #[test]
    fn range_checks() {
        let g = |n, d| GaussianRational::from_ratio(n, d);
        assert!(NoiseModel::new(g(1, 2), g(1, 3), g(1, 3), g(1, 3)).validate().is_ok());
        assert!(NoiseModel::new(g(3, 5), g(0, 1), g(0, 1), g(0, 1)).validate().is_err());
        assert!(NoiseModel::new(g(0, 1), g(1, 2), g(1, 2), g(1, 100)).validate().is_err());
        assert!(NoiseModel::new(g(0, 1), g(-1, 2), g(0, 1), g(0, 1)).validate().is_err());
        let c = |x| Complex64::new(x, 0.0);
        assert!(NoiseModel::new(c(0.01), c(0.003), c(0.003), c(0.003)).validate().is_ok());
        assert!(NoiseModel::new(c(f64::NAN), c(0.0), c(0.0), c(0.0)).validate().is_err());
    }
}
