use crate::algebra::{GaussianRational, Scalar};
use crate::error::Result;
use crate::register::{PureState, QubitId};

/// The ideal star `|0,+ⁿ⟩ + |1,−ⁿ⟩` on `root` followed by `leaves`.
pub fn star_state<S: Scalar>(root: QubitId, leaves: &[QubitId]) -> Result<PureState<S>> {
    let n = leaves.len();
    let mut qubits = vec![root];
    qubits.extend_from_slice(leaves);
    let half = 1usize << n;
    let amps: Vec<S> = (0..2 * half)
        .map(|idx| {
            if idx < half || (idx - half).count_ones().is_multiple_of(2) {
                S::one()
            } else {
                S::from_int(-1)
            }
        })
        .collect();
    PureState::new(qubits, amps)
}

/// `|++⟩ − i|−−⟩` on the two roots: amplitudes `(1−i, 1+i, 1+i, 1−i)`.
pub fn pair_target<S: Scalar>(root_a: QubitId, root_b: QubitId) -> Result<PureState<S>> {
    let one = GaussianRational::one();
    let (p, m) = (&one + &GaussianRational::i(), &one - &GaussianRational::i());
    PureState::from_gaussian(vec![root_a, root_b], &[m.clone(), p.clone(), p, m])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::{QubitAllocator, Role};

    type G = GaussianRational;

    #[test]
    fn small_stars() {
        let mut alloc = QubitAllocator::new();
        let r = alloc.fresh(Role::Root);
        let l: Vec<_> = (0..2).map(|b| alloc.fresh(Role::Leaf { birth: b })).collect();
        let g = G::from_int;
        let one = star_state::<G>(r, &l[..1]).unwrap();
        assert_eq!(one.amplitudes(), &[g(1), g(1), g(1), g(-1)]);
        let two = star_state::<G>(r, &l).unwrap();
        assert_eq!(two.amplitudes(), &[g(1), g(1), g(1), g(1), g(1), g(-1), g(-1), g(1)]);
        assert_eq!(pair_target::<G>(l[0], l[1]).unwrap().norm_sqr(), g(8));
    }
}
