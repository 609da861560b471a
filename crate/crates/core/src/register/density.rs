//! Unnormalized mixed states.
//!
//! A [`DensityOperator`] is either a dense Hermitian matrix or a list of
//! weighted pure branches `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`. Both realizations answer the same
//! questions (trace, overlap, channel application) identically; the branch
//! form keeps symbolic runs small, the dense form keeps float runs flat.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::hash::Hasher;

use num_complex::Complex64;

use super::kernels;
use super::operator::LocalOperator;
use super::pure::{self, PureState};
use super::qubit::QubitId;
use crate::algebra::{FidelityScalar, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Dense,
    Branches,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Backend::Dense),
            "branches" => Ok(Backend::Branches),
            _ => Err(Error::Usage(format!("unknown density backend `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Branch<S> {
    weight: S,
    amps: Vec<S>,
}

#[derive(Clone, Debug, PartialEq)]
enum Repr<S> {
    Dense(Vec<S>),
    Branches(Vec<Branch<S>>),
}

#[derive(Clone, PartialEq)]
pub struct DensityOperator<S> {
    qubits: Vec<QubitId>,
    repr: Repr<S>,
}

impl<S: Scalar> DensityOperator<S> {
    pub fn from_pure(state: &PureState<S>, backend: Backend) -> Self {
        let rho = Self {
            qubits: state.qubits().to_vec(),
            repr: Repr::Branches(compact(vec![Branch { weight: S::one(), amps: state.amplitudes().to_vec() }])),
        };
        match backend {
            Backend::Branches => rho,
            Backend::Dense => rho.to_dense(),
        }
    }

    /// `Σ wᵢ |ψᵢ⟩⟨ψᵢ|` in branch form. Every state must cover the same qubits;
    /// they are brought into the first state's order.
    pub fn from_branches(branches: Vec<(S, PureState<S>)>) -> Result<Self> {
        let Some((_, first)) = branches.first() else {
            return Err(Error::Domain("empty mixture".into()));
        };
        let qubits = first.qubits().to_vec();
        let mut out = Vec::with_capacity(branches.len());
        for (w, s) in branches {
            let s = s.reorder(&qubits).map_err(|_| mismatch(&qubits, s.qubits()))?;
            out.push(Branch { weight: w, amps: s.into_parts().1 });
        }
        Ok(Self { qubits, repr: Repr::Branches(compact(out)) })
    }

    /// The zero operator on a register, in the requested backend.
    pub fn zero(qubits: Vec<QubitId>, backend: Backend) -> Result<Self> {
        pure::check_unique(&qubits)?;
        let dim = 1usize << qubits.len();
        let repr = match backend {
            Backend::Dense => Repr::Dense(vec![S::zero(); dim * dim]),
            Backend::Branches => Repr::Branches(Vec::new()),
        };
        Ok(Self { qubits, repr })
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits.len()
    }

    pub fn backend(&self) -> Backend {
        match self.repr {
            Repr::Dense(_) => Backend::Dense,
            Repr::Branches(_) => Backend::Branches,
        }
    }

    /// Branch count for the branch realization; `None` for dense.
    pub fn branch_count(&self) -> Option<usize> {
        match &self.repr {
            Repr::Branches(b) => Some(b.len()),
            Repr::Dense(_) => None,
        }
    }

    pub fn contains(&self, q: QubitId) -> bool {
        self.qubits.contains(&q)
    }

    pub fn to_dense(&self) -> Self {
        match &self.repr {
            Repr::Dense(_) => self.clone(),
            Repr::Branches(branches) => {
                let d = self.dim();
                let mut m = vec![S::zero(); d * d];
                for b in branches {
                    let scaled: Vec<S> = b.amps.iter().map(|a| a.mul(&b.weight)).collect();
                    let conj: Vec<S> = b.amps.iter().map(S::conj).collect();
                    for (r, ar) in scaled.iter().enumerate() {
                        if ar.is_zero() {
                            continue;
                        }
                        for (c, ac) in conj.iter().enumerate() {
                            if !ac.is_zero() {
                                m[r * d + c].add_assign(&ar.mul(ac));
                            }
                        }
                    }
                }
                Self { qubits: self.qubits.clone(), repr: Repr::Dense(m) }
            }
        }
    }

    /// Switches to the dense form once the branch list is longer than the
    /// matrix side, where the matrix becomes the cheaper representation.
    pub fn settle(self) -> Self {
        match self.branch_count() {
            Some(n) if n > self.dim() => self.to_dense(),
            _ => self,
        }
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Self> {
        match (backend, &self.repr) {
            (Backend::Dense, _) => Ok(self.to_dense()),
            (Backend::Branches, Repr::Branches(_)) => Ok(self.clone()),
            (Backend::Branches, Repr::Dense(_)) => {
                Err(Error::Domain("a dense operator cannot be converted back to branches".into()))
            }
        }
    }

    /// Row-major dense matrix entries.
    pub fn matrix(&self) -> Vec<S> {
        match self.to_dense().repr {
            Repr::Dense(m) => m,
            Repr::Branches(_) => unreachable!(),
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut qubits = self.qubits.clone();
        qubits.extend_from_slice(&other.qubits);
        pure::check_unique(&qubits)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Branches(a), Repr::Branches(b)) => {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        let amps = x.amps.iter().flat_map(|u| y.amps.iter().map(move |v| u.mul(v))).collect();
                        out.push(Branch { weight: x.weight.mul(&y.weight), amps });
                    }
                }
                Repr::Branches(compact(out))
            }
            _ => {
                let (a, b) = (self.matrix(), other.matrix());
                let (da, db) = (self.dim(), other.dim());
                let d = da * db;
                let mut m = vec![S::zero(); d * d];
                for ra in 0..da {
                    for ca in 0..da {
                        let x = &a[ra * da + ca];
                        if x.is_zero() {
                            continue;
                        }
                        for rb in 0..db {
                            for cb in 0..db {
                                m[(ra * db + rb) * d + ca * db + cb] = x.mul(&b[rb * db + cb]);
                            }
                        }
                    }
                }
                Repr::Dense(m)
            }
        };
        Ok(Self { qubits, repr })
    }

    /// `ρ → M ρ M†` with `M` acting on `targets`.
    pub fn apply(&self, op: &LocalOperator<S>, targets: &[QubitId]) -> Result<Self> {
        let masks = pure::op_masks(&self.qubits, op, targets)?;
        let d = self.dim();
        let groups = kernels::groups(d, &masks);
        let nz = op.nonzero();
        let repr = match &self.repr {
            Repr::Branches(branches) => Repr::Branches(compact(
                branches
                    .iter()
                    .map(|b| {
                        let mut amps = b.amps.clone();
                        kernels::transform(&mut amps, &groups, &nz, 1, 0);
                        Branch { weight: b.weight.clone(), amps }
                    })
                    .collect(),
            )),
            Repr::Dense(m) => {
                let mut m = m.clone();
                for c in 0..d {
                    kernels::transform(&mut m, &groups, &nz, d, c);
                }
                let nz_conj: Vec<_> = nz.iter().map(|(i, j, v)| (*i, *j, v.conj())).collect();
                for r in 0..d {
                    kernels::transform(&mut m, &groups, &nz_conj, 1, r * d);
                }
                Repr::Dense(m)
            }
        };
        Ok(Self { qubits: self.qubits.clone(), repr })
    }

    /// Contracts `q` against `⟨ket|` on both sides and removes it.
    pub fn project_remove(&self, q: QubitId, ket: &[S; 2]) -> Result<Self> {
        let n = self.qubits.len();
        let pos = pure::position(&self.qubits, q)?;
        let bm = kernels::mask(n, pos);
        let (c0, c1) = (ket[0].conj(), ket[1].conj());
        let half = self.dim() / 2;
        let contract = |v: &dyn Fn(usize) -> S, i: usize, k0: &S, k1: &S| {
            let i0 = kernels::insert_zero(i, bm);
            v(i0).mul(k0).add(&v(i0 | bm).mul(k1))
        };
        let repr = match &self.repr {
            Repr::Branches(branches) => Repr::Branches(compact(
                branches
                    .iter()
                    .map(|b| Branch {
                        weight: b.weight.clone(),
                        amps: (0..half).map(|i| contract(&|k| b.amps[k].clone(), i, &c0, &c1)).collect(),
                    })
                    .collect(),
            )),
            Repr::Dense(m) => {
                let d = self.dim();
                // rows: ⟨ket| from the left; columns: |ket⟩ from the right
                let (k0, k1) = (ket[0].clone(), ket[1].clone());
                let mut rows = vec![S::zero(); half * d];
                for r in 0..half {
                    for c in 0..d {
                        rows[r * d + c] = contract(&|k| m[k * d + c].clone(), r, &c0, &c1);
                    }
                }
                let mut out = vec![S::zero(); half * half];
                for r in 0..half {
                    for c in 0..half {
                        out[r * half + c] = contract(&|k| rows[r * d + k].clone(), c, &k0, &k1);
                    }
                }
                Repr::Dense(out)
            }
        };
        let mut qubits = self.qubits.clone();
        qubits.remove(pos);
        Ok(Self { qubits, repr })
    }

    /// Multiplies by a scalar weight. Callers pass real weights.
    pub fn scale(&self, w: &S) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(m.iter().map(|x| x.mul(w)).collect()),
            Repr::Branches(b) => Repr::Branches(compact(
                b.iter().map(|x| Branch { weight: x.weight.mul(w), amps: x.amps.clone() }).collect(),
            )),
        };
        Self { qubits: self.qubits.clone(), repr }
    }

    /// Unnormalized mixture `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let other = other.reorder(&self.qubits).map_err(|_| mismatch(&self.qubits, &other.qubits))?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Branches(a), Repr::Branches(b)) => {
                Repr::Branches(compact(a.iter().chain(b.iter()).cloned().collect()))
            }
            _ => {
                let (a, b) = (self.matrix(), other.matrix());
                Repr::Dense(a.iter().zip(&b).map(|(x, y)| x.add(y)).collect())
            }
        };
        Ok(Self { qubits: self.qubits.clone(), repr })
    }

    /// Sum of a nonempty list of operators over the same qubits.
    pub fn sum<I: IntoIterator<Item = Self>>(items: I) -> Result<Self> {
        let mut it = items.into_iter();
        let first = it.next().ok_or_else(|| Error::Domain("empty mixture".into()))?;
        let Repr::Branches(_) = first.repr else {
            return it.try_fold(first, |acc, x| acc.add(&x));
        };
        let qubits = first.qubits.clone();
        let mut branches = Vec::new();
        let mut dense: Option<Self> = None;
        for x in std::iter::once(first).chain(it) {
            let x = x.reorder(&qubits).map_err(|_| mismatch(&qubits, &x.qubits))?;
            match x.repr {
                Repr::Branches(b) => branches.extend(b),
                Repr::Dense(_) => dense = Some(match dense { None => x, Some(d) => d.add(&x)? }),
            }
        }
        let rho = Self { qubits, repr: Repr::Branches(compact(branches)) };
        match dense {
            None => Ok(rho),
            Some(d) => d.add(&rho),
        }
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        match &self.repr {
            Repr::Dense(m) => {
                let d = self.dim();
                for i in 0..d {
                    acc.add_assign(&m[i * d + i]);
                }
            }
            Repr::Branches(b) => {
                for x in b {
                    let mut n = S::zero();
                    for a in &x.amps {
                        n.add_assign(&a.conj().mul(a));
                    }
                    acc.add_assign(&x.weight.mul(&n));
                }
            }
        }
        acc
    }

    /// `⟨t|ρ|t⟩`.
    pub fn overlap(&self, target: &PureState<S>) -> Result<S> {
        let t = target.reorder(&self.qubits).map_err(|_| mismatch(&self.qubits, target.qubits()))?;
        let t = t.amplitudes();
        let mut acc = S::zero();
        match &self.repr {
            Repr::Branches(b) => {
                for x in b {
                    let mut amp = S::zero();
                    for (ti, xi) in t.iter().zip(&x.amps) {
                        if !ti.is_zero() && !xi.is_zero() {
                            amp.add_assign(&ti.conj().mul(xi));
                        }
                    }
                    acc.add_assign(&x.weight.mul(&amp.mul(&amp.conj())));
                }
            }
            Repr::Dense(m) => {
                let d = self.dim();
                for r in 0..d {
                    if t[r].is_zero() {
                        continue;
                    }
                    let mut row = S::zero();
                    for c in 0..d {
                        if !t[c].is_zero() {
                            row.add_assign(&m[r * d + c].mul(&t[c]));
                        }
                    }
                    acc.add_assign(&t[r].conj().mul(&row));
                }
            }
        }
        Ok(acc)
    }

    pub fn reorder(&self, order: &[QubitId]) -> Result<Self> {
        if order == self.qubits.as_slice() {
            return Ok(self.clone());
        }
        let perm = pure::reorder_permutation(&self.qubits, order)?;
        let repr = match &self.repr {
            Repr::Branches(b) => Repr::Branches(
                b.iter()
                    .map(|x| Branch {
                        weight: x.weight.clone(),
                        amps: perm.iter().map(|&o| x.amps[o].clone()).collect(),
                    })
                    .collect(),
            ),
            Repr::Dense(m) => {
                let d = self.dim();
                let mut out = Vec::with_capacity(d * d);
                for &r in &perm {
                    for &c in &perm {
                        out.push(m[r * d + c].clone());
                    }
                }
                Repr::Dense(out)
            }
        };
        Ok(Self { qubits: order.to_vec(), repr })
    }

    pub fn relabel(&self, old: QubitId, new: QubitId) -> Result<Self> {
        Ok(Self { qubits: pure::relabeled(&self.qubits, old, new)?, repr: self.repr.clone() })
    }

    /// Exact Hermiticity check of the dense matrix.
    pub fn is_hermitian(&self) -> bool {
        match &self.repr {
            Repr::Branches(_) => true,
            Repr::Dense(m) => {
                let d = self.dim();
                (0..d).all(|r| (r..d).all(|c| m[r * d + c] == m[c * d + r].conj()))
            }
        }
    }

    /// Debug rendering: register, then `|r⟩⟨c| : value` per nonzero entry of
    /// the dense matrix, in index order.
    pub fn render(&self) -> String {
        let n = self.num_qubits();
        let d = self.dim();
        let mut out = format!("[{}]\n", pure::render_register(&self.qubits));
        for (k, v) in self.matrix().iter().enumerate() {
            if !v.is_zero() {
                let _ = writeln!(
                    out,
                    "|{}><{}| : {:?}",
                    pure::render_basis(k / d, n),
                    pure::render_basis(k % d, n),
                    v
                );
            }
        }
        out
    }
}

impl DensityOperator<Complex64> {
    /// Largest deviation from Hermiticity over all entry pairs.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.matrix();
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((m[r * d + c] - m[c * d + r].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let d = self.dim();
        let m = self.matrix();
        let mat = nalgebra::DMatrix::from_fn(d, d, |r, c| (m[r * d + c] + m[c * d + r].conj()) * 0.5);
        nalgebra::SymmetricEigen::new(mat).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// `⟨t|ρ|t⟩ / (⟨t|t⟩ · Tr ρ)`.
pub fn fidelity<S: FidelityScalar>(target: &PureState<S>, rho: &DensityOperator<S>) -> Result<S::Ratio> {
    let norm = target.norm_sqr();
    if norm.is_zero() {
        return Err(Error::Domain("fidelity target is the zero vector".into()));
    }
    let tr = rho.trace();
    if tr.is_zero() {
        return Err(Error::ZeroTrace);
    }
    let num = rho.overlap(target)?;
    S::ratio(&num, &norm.mul(&tr))
}

fn mismatch(a: &[QubitId], b: &[QubitId]) -> Error {
    Error::Domain(format!(
        "mismatched qubit lists [{}] vs [{}]",
        pure::render_register(a),
        pure::render_register(b)
    ))
}

/// Drops zero branches, fixes each state's global unit phase, and merges
/// branches holding identical states. Order of first appearance is kept.
fn compact<S: Scalar>(branches: Vec<Branch<S>>) -> Vec<Branch<S>> {
    let mut out: Vec<Branch<S>> = Vec::with_capacity(branches.len());
    let mut index: HashMap<u64, Vec<usize>> = HashMap::new();
    for mut b in branches {
        if b.weight.is_zero() {
            continue;
        }
        let Some(k) = b.amps.iter().find_map(S::phase_quadrant) else {
            continue;
        };
        if k != 0 {
            let unit = S::from_gaussian(&crate::algebra::GaussianRational::i_pow(k));
            for a in &mut b.amps {
                *a = a.mul(&unit);
            }
        }
        let mut h = DefaultHasher::new();
        for a in &b.amps {
            a.hash_into(&mut h);
        }
        let key = h.finish();
        let slot = index.entry(key).or_default();
        if let Some(&i) = slot.iter().find(|&&i| out[i].amps == b.amps) {
            out[i].weight.add_assign(&b.weight);
        } else {
            slot.push(out.len());
            out.push(b);
        }
    }
    out.retain(|b| !b.weight.is_zero());
    out
}

impl<S: Scalar> fmt::Debug for DensityOperator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussianRational as G;
    use crate::register::{QubitAllocator, Role};

    fn g(n: i64) -> G {
        G::from_int(n)
    }

    fn reg(n: usize) -> Vec<QubitId> {
        let mut a = QubitAllocator::new();
        (0..n).map(|_| a.fresh(Role::EprHalf)).collect()
    }

    #[test]
    fn mixture_trace_and_overlap() {
        let q = reg(1);
        let zero = PureState::<G>::basis(q.clone(), &[0]).unwrap();
        let one = PureState::<G>::basis(q.clone(), &[1]).unwrap();
        for backend in [Backend::Branches, Backend::Dense] {
            let mix = DensityOperator::from_pure(&zero, backend)
                .add(&DensityOperator::from_pure(&one, backend))
                .unwrap();
            assert_eq!(mix.trace(), g(2));
            let rho1 = DensityOperator::from_pure(&one, backend);
            assert_eq!(rho1.overlap(&zero).unwrap(), g(0));
            assert_eq!(mix.scale(&G::from_ratio(1, 2)).trace(), g(1));
            assert_eq!(fidelity(&zero, &mix).unwrap(), G::from_ratio(1, 2));
        }
    }

    #[test]
    fn mismatched_registers_are_rejected() {
        let q = reg(2);
        let a = DensityOperator::from_pure(&PureState::<G>::basis(vec![q[0]], &[0]).unwrap(), Backend::Branches);
        let b = DensityOperator::from_pure(&PureState::<G>::basis(vec![q[1]], &[0]).unwrap(), Backend::Branches);
        assert!(matches!(a.add(&b), Err(Error::Domain(_))));
    }

    #[test]
    fn branches_merge_up_to_unit_phase() {
        let q = reg(1);
        let plus = PureState::<G>::from_gaussian(q.clone(), &[g(1), g(1)]).unwrap();
        let rho = DensityOperator::from_branches(vec![
            (g(1), plus.clone()),
            (g(2), plus.scale(&G::i())),
            (g(3), plus.scale(&g(-1))),
        ])
        .unwrap();
        assert_eq!(rho.branch_count(), Some(1));
        assert_eq!(rho.trace(), g(12));
    }

    #[test]
    fn zero_trace_fidelity_is_an_error() {
        let q = reg(1);
        let zero = PureState::<G>::basis(q.clone(), &[0]).unwrap();
        let rho = DensityOperator::<G>::zero(q, Backend::Dense).unwrap();
        assert!(matches!(fidelity(&zero, &rho), Err(Error::ZeroTrace)));
    }

    #[test]
    fn dense_and_branch_projection_agree() {
        let q = reg(3);
        let amps: Vec<G> = (0..8).map(|k| &g(k) + &(&G::i() * &g(7 - k))).collect();
        let psi = PureState::new(q.clone(), amps).unwrap();
        let b = DensityOperator::from_pure(&psi, Backend::Branches);
        let d = DensityOperator::from_pure(&psi, Backend::Dense);
        let ket = [g(1), &g(2) - &G::i()];
        let pb = b.project_remove(q[1], &ket).unwrap();
        let pd = d.project_remove(q[1], &ket).unwrap();
        assert_eq!(pb.matrix(), pd.matrix());
        let y = LocalOperator::y();
        assert_eq!(b.apply(&y, &[q[2]]).unwrap().matrix(), d.apply(&y, &[q[2]]).unwrap().matrix());
        assert!(pd.is_hermitian());
    }
}
