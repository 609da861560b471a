//! Index arithmetic shared by the pure-state and density-matrix code paths.
//!
//! Qubit `k` of an `n`-qubit register lives at bit `n - 1 - k` of a basis
//! index, so the first qubit in the list is the most significant.

use crate::algebra::Scalar;

pub(crate) fn mask(n: usize, position: usize) -> usize {
    1 << (n - 1 - position)
}

/// Index groups touched by an operator on the given bit masks: one group per
/// assignment of the untouched bits, each listing `2^k` indices ordered by
/// operator index (first mask is the operator's high bit).
pub(crate) fn groups(dim: usize, masks: &[usize]) -> Vec<Vec<usize>> {
    let all: usize = masks.iter().sum();
    let k = masks.len();
    (0..dim)
        .filter(|i| i & all == 0)
        .map(|base| {
            (0..1usize << k)
                .map(|j| {
                    let mut idx = base;
                    for (t, m) in masks.iter().enumerate() {
                        if j >> (k - 1 - t) & 1 == 1 {
                            idx |= m;
                        }
                    }
                    idx
                })
                .collect()
        })
        .collect()
}

/// `v[group] <- M · v[group]` for every group, reading elements at
/// `offset + index * stride`.
pub(crate) fn transform<S: Scalar>(
    data: &mut [S],
    groups: &[Vec<usize>],
    nz: &[(usize, usize, S)],
    stride: usize,
    offset: usize,
) {
    let size = groups.first().map_or(0, Vec::len);
    let mut old = vec![S::zero(); size];
    for group in groups {
        for (j, &idx) in group.iter().enumerate() {
            old[j] = data[offset + idx * stride].clone();
        }
        for &idx in group.iter() {
            data[offset + idx * stride] = S::zero();
        }
        for (i, j, m) in nz {
            if old[*j].is_zero() {
                continue;
            }
            let target = &mut data[offset + group[*i] * stride];
            target.add_assign(&m.mul(&old[*j]));
        }
    }
}

/// Old index with a zero inserted at `bit_mask`.
pub(crate) fn insert_zero(i: usize, bit_mask: usize) -> usize {
    let low = i & (bit_mask - 1);
    let high = (i & !(bit_mask - 1)) << 1;
    high | low
}

/// For each index in the new ordering, the index in the old ordering.
/// `old_positions[p]` is the old position of the qubit now at position `p`.
pub(crate) fn permutation(n: usize, old_positions: &[usize]) -> Vec<usize> {
    (0..1usize << n)
        .map(|ni| {
            let mut oi = 0;
            for (p, &op) in old_positions.iter().enumerate() {
                if (ni >> (n - 1 - p)) & 1 == 1 {
                    oi |= 1 << (n - 1 - op);
                }
            }
            oi
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_layout() {
        // 3 qubits, operator on qubits (2, 0): masks 1 and 4.
        let g = groups(8, &[mask(3, 2), mask(3, 0)]);
        assert_eq!(g, vec![vec![0, 4, 1, 5], vec![2, 6, 3, 7]]);
    }

    #[test]
    fn insert_bit() {
        assert_eq!(insert_zero(0b11, 0b010), 0b101);
        assert_eq!(insert_zero(0b11, 0b100), 0b011);
        assert_eq!(insert_zero(0b11, 0b001), 0b110);
    }

    #[test]
    fn swap_permutation() {
        // new order (q1, q0): new index 0b01 means q1=0, q0=1 -> old 0b10
        assert_eq!(permutation(2, &[1, 0]), vec![0, 2, 1, 3]);
    }
}
