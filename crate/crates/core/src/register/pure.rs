use std::collections::HashSet;
use std::fmt;

use super::kernels;
use super::operator::LocalOperator;
use super::qubit::QubitId;
use crate::algebra::{GaussianRational, Scalar};
use crate::error::{Error, Result};

/// An unnormalized pure state over a labeled qubit register.
#[derive(Clone, PartialEq)]
pub struct PureState<S> {
    qubits: Vec<QubitId>,
    amps: Vec<S>,
}

pub(crate) fn check_unique(qubits: &[QubitId]) -> Result<()> {
    let mut seen = HashSet::new();
    for q in qubits {
        if !seen.insert(q.label()) {
            return Err(Error::LabelCollision(*q));
        }
    }
    Ok(())
}

pub(crate) fn position(qubits: &[QubitId], q: QubitId) -> Result<usize> {
    qubits.iter().position(|&x| x == q).ok_or(Error::UnknownQubit(q))
}

impl<S: Scalar> PureState<S> {
    pub fn new(qubits: Vec<QubitId>, amps: Vec<S>) -> Result<Self> {
        if amps.len() != 1usize << qubits.len() {
            return Err(Error::Domain(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                qubits.len()
            )));
        }
        check_unique(&qubits)?;
        Ok(Self { qubits, amps })
    }

    pub fn from_gaussian(qubits: Vec<QubitId>, amps: &[GaussianRational]) -> Result<Self> {
        Self::new(qubits, amps.iter().map(S::from_gaussian).collect())
    }

    /// A zero-qubit state holding a single amplitude.
    pub fn scalar(c: S) -> Self {
        Self { qubits: Vec::new(), amps: vec![c] }
    }

    /// Computational basis state; `bits[k]` is the value of `qubits[k]`.
    pub fn basis(qubits: Vec<QubitId>, bits: &[u8]) -> Result<Self> {
        if bits.len() != qubits.len() {
            return Err(Error::Domain("basis label length mismatch".into()));
        }
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        let mut amps = vec![S::zero(); 1 << qubits.len()];
        amps[idx] = S::one();
        Self::new(qubits, amps)
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn amplitudes(&self) -> &[S] {
        &self.amps
    }

    pub(crate) fn into_parts(self) -> (Vec<QubitId>, Vec<S>) {
        (self.qubits, self.amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn position(&self, q: QubitId) -> Result<usize> {
        position(&self.qubits, q)
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(S::is_zero)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut qubits = self.qubits.clone();
        qubits.extend_from_slice(&other.qubits);
        check_unique(&qubits)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a.mul(b));
            }
        }
        Ok(Self { qubits, amps })
    }

    pub fn apply(&self, op: &LocalOperator<S>, targets: &[QubitId]) -> Result<Self> {
        let masks = op_masks(&self.qubits, op, targets)?;
        let groups = kernels::groups(self.amps.len(), &masks);
        let mut amps = self.amps.clone();
        kernels::transform(&mut amps, &groups, &op.nonzero(), 1, 0);
        Ok(Self { qubits: self.qubits.clone(), amps })
    }

    /// Contracts `q` against `⟨ket|`: `ψ' = conj(k0)·ψ(q=0) + conj(k1)·ψ(q=1)`,
    /// removing `q` from the register.
    pub fn project_remove(&self, q: QubitId, ket: &[S; 2]) -> Result<Self> {
        let n = self.qubits.len();
        let pos = self.position(q)?;
        let bm = kernels::mask(n, pos);
        let (c0, c1) = (ket[0].conj(), ket[1].conj());
        let amps = (0..self.amps.len() / 2)
            .map(|i| {
                let i0 = kernels::insert_zero(i, bm);
                let a = self.amps[i0].mul(&c0);
                a.add(&self.amps[i0 | bm].mul(&c1))
            })
            .collect();
        let mut qubits = self.qubits.clone();
        qubits.remove(pos);
        Ok(Self { qubits, amps })
    }

    /// `⟨self|other⟩`, after bringing `other` into this register's order.
    pub fn inner(&self, other: &Self) -> Result<S> {
        let other = other.reorder(&self.qubits)?;
        let mut acc = S::zero();
        for (a, b) in self.amps.iter().zip(&other.amps) {
            acc.add_assign(&a.conj().mul(b));
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> S {
        let mut acc = S::zero();
        for a in &self.amps {
            acc.add_assign(&a.conj().mul(a));
        }
        acc
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { qubits: self.qubits.clone(), amps: self.amps.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn reorder(&self, order: &[QubitId]) -> Result<Self> {
        if order == self.qubits.as_slice() {
            return Ok(self.clone());
        }
        let perm = reorder_permutation(&self.qubits, order)?;
        Ok(Self { qubits: order.to_vec(), amps: perm.iter().map(|&o| self.amps[o].clone()).collect() })
    }

    pub fn relabel(&self, old: QubitId, new: QubitId) -> Result<Self> {
        let qubits = relabeled(&self.qubits, old, new)?;
        Ok(Self { qubits, amps: self.amps.clone() })
    }

    /// Multiplies by the unit `i^k` that puts the first nonzero amplitude in
    /// canonical phase. Density `|ψ⟩⟨ψ|` is unchanged.
    pub fn canonical_phase(&self) -> Self {
        let k = self.amps.iter().find_map(S::phase_quadrant).unwrap_or(0);
        if k == 0 {
            return self.clone();
        }
        self.scale(&S::from_gaussian(&GaussianRational::i_pow(k)))
    }
}

pub(crate) fn op_masks<S: Scalar>(
    qubits: &[QubitId],
    op: &LocalOperator<S>,
    targets: &[QubitId],
) -> Result<Vec<usize>> {
    if targets.len() != op.arity() {
        return Err(Error::Domain(format!(
            "{}-qubit operator applied to {} targets",
            op.arity(),
            targets.len()
        )));
    }
    if targets.len() == 2 && targets[0] == targets[1] {
        return Err(Error::Domain(format!("operator targets must be distinct, got {} twice", targets[0])));
    }
    let n = qubits.len();
    targets.iter().map(|&t| position(qubits, t).map(|p| kernels::mask(n, p))).collect()
}

pub(crate) fn reorder_permutation(current: &[QubitId], order: &[QubitId]) -> Result<Vec<usize>> {
    if order.len() != current.len() {
        return Err(Error::Domain("reorder must list every qubit exactly once".into()));
    }
    check_unique(order)?;
    let old_positions = order.iter().map(|&q| position(current, q)).collect::<Result<Vec<_>>>()?;
    Ok(kernels::permutation(current.len(), &old_positions))
}

pub(crate) fn relabeled(qubits: &[QubitId], old: QubitId, new: QubitId) -> Result<Vec<QubitId>> {
    let pos = position(qubits, old)?;
    if qubits.iter().any(|q| *q != old && q.label() == new.label()) {
        return Err(Error::LabelCollision(new));
    }
    let mut out = qubits.to_vec();
    out[pos] = new;
    Ok(out)
}

fn basis_label(idx: usize, n: usize) -> String {
    (0..n).map(|p| if (idx >> (n - 1 - p)) & 1 == 1 { '1' } else { '0' }).collect()
}

pub(crate) fn render_register(qubits: &[QubitId]) -> String {
    qubits.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Debug rendering: register, then `|bits⟩: amplitude` per nonzero entry.
impl<S: Scalar> fmt::Display for PureState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", render_register(&self.qubits))?;
        let n = self.qubits.len();
        for (i, a) in self.amps.iter().enumerate() {
            if !a.is_zero() {
                writeln!(f, "|{}> : {:?}", basis_label(i, n), a)?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for PureState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn render_basis(idx: usize, n: usize) -> String {
    basis_label(idx, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::{QubitAllocator, Role};

    type G = GaussianRational;

    fn g(n: i64) -> G {
        G::from_int(n)
    }

    fn reg(n: usize) -> Vec<QubitId> {
        let mut a = QubitAllocator::new();
        (0..n).map(|_| a.fresh(Role::EprHalf)).collect()
    }

    #[test]
    fn tensor_of_basis_states() {
        let q = reg(2);
        let zero = PureState::<G>::basis(vec![q[0]], &[0]).unwrap();
        let one = PureState::<G>::basis(vec![q[1]], &[1]).unwrap();
        assert_eq!(zero.tensor(&one).unwrap(), PureState::basis(q.clone(), &[0, 1]).unwrap());
        assert!(matches!(zero.tensor(&zero), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn local_operators() {
        let q = reg(2);
        let zero = PureState::<G>::basis(vec![q[0]], &[0]).unwrap();
        assert_eq!(zero.apply(&LocalOperator::x(), &[q[0]]).unwrap(), PureState::basis(vec![q[0]], &[1]).unwrap());

        let bell = PureState::from_gaussian(q.clone(), &[g(1), g(0), g(0), g(1)]).unwrap();
        let zb = bell.apply(&LocalOperator::z(), &[q[1]]).unwrap();
        assert_eq!(zb.amplitudes(), &[g(1), g(0), g(0), g(-1)]);

        let a = G::from_ratio(1, 10);
        let w = bell.apply(&LocalOperator::pbs_weight(&a), &[q[0], q[1]]).unwrap();
        assert_eq!(w.amplitudes(), &[G::from_ratio(9, 10), g(0), g(0), G::from_ratio(9, 10)]);

        assert!(matches!(bell.apply(&LocalOperator::x(), &[reg(3)[2]]), Err(Error::UnknownQubit(_))));
    }

    #[test]
    fn projections() {
        let q = reg(3);
        let ghz = PureState::from_gaussian(q.clone(), &[g(1), g(0), g(0), g(0), g(0), g(0), g(0), g(1)]).unwrap();
        let plus = ghz.project_remove(q[1], &[g(1), g(1)]).unwrap();
        assert_eq!(plus.amplitudes(), &[g(1), g(0), g(0), g(1)]);
        assert_eq!(plus.qubits(), &[q[0], q[2]]);
        let minus = ghz.project_remove(q[1], &[g(1), g(-1)]).unwrap();
        assert_eq!(minus.amplitudes(), &[g(1), g(0), g(0), g(-1)]);

        // ⟨0| + i⟨1| has ket coefficients (1, -i); contracting |0> + i|1> gives 1 + i·i = 0.
        // Ket (1, i) yields ⟨0| - i⟨1| and 1 - i·i = 2.
        let one = PureState::from_gaussian(vec![q[0]], &[g(1), G::i()]).unwrap();
        let s = one.project_remove(q[0], &[g(1), G::i()]).unwrap();
        assert_eq!(s.amplitudes(), &[g(2)]);
        assert!(s.qubits().is_empty());
    }

    #[test]
    fn reorder_round_trip() {
        let q = reg(3);
        let amps: Vec<G> = (0..8).map(g).collect();
        let s = PureState::new(q.clone(), amps).unwrap();
        let r = s.reorder(&[q[2], q[0], q[1]]).unwrap();
        // new index |q2 q0 q1> = |1 0 0> is old |q0 q1 q2> = |0 0 1>
        assert_eq!(r.amplitudes()[4], g(1));
        assert_eq!(r.reorder(&q).unwrap(), s);
        assert_eq!(s.inner(&r).unwrap(), s.norm_sqr());
    }
}
