//! Zero-noise byproduct calibration.
//!
//! Every measurement branch of the ideal microcluster and pair pipelines is
//! enumerated as a pure state and compared with its target. Branches are
//! kept unnormalized; zero-probability branches are dropped.

use crate::algebra::GaussianRational;
use crate::error::{Error, Result};
use crate::register::{LocalOperator, PureState, QubitAllocator, QubitId, Role};

use super::clifford::{ByproductTable, Clifford};
use super::fusion::{epr_with_roles, failure_weights};
use super::measure::y_eigenket;
use super::targets::{pair_target, star_state};

type G = GaussianRational;
type Branch = (String, PureState<G>);

fn is_target(target: &PureState<G>, psi: &PureState<G>) -> Result<bool> {
    let ov = target.inner(psi)?;
    Ok(&ov * &ov.conj() == &target.norm_sqr() * &psi.norm_sqr())
}

fn fuse_branches(
    branches: Vec<Branch>,
    qa: QubitId,
    qb: QubitId,
    survivor: QubitId,
    table: &ByproductTable,
) -> Result<Vec<Branch>> {
    let w = LocalOperator::pbs_weight(&G::zero());
    let mut out = Vec::new();
    for (path, psi) in branches {
        let order: Vec<QubitId> =
            psi.qubits().iter().filter(|&&q| q != qb).map(|&q| if q == qa { survivor } else { q }).collect();
        let weighted = psi.apply(&w, &[qa, qb])?;
        for (tag, m, o) in [("a", qa, qb), ("b", qb, qa)] {
            for minus in [false, true] {
                let ket = [G::one(), G::from_int(if minus { -1 } else { 1 })];
                let mut t = weighted.project_remove(m, &ket)?;
                if minus {
                    t = table.fusion_minus.apply_pure(&t, o)?;
                }
                if !t.is_zero() {
                    let t = t.relabel(o, survivor)?.reorder(&order)?;
                    out.push((format!("{path} fuse[{tag}{}]", if minus { '-' } else { '+' }), t));
                }
            }
        }
    }
    Ok(out)
}

fn basis(b: u8) -> [G; 2] {
    if b == 0 {
        [G::one(), G::zero()]
    } else {
        [G::zero(), G::one()]
    }
}

/// Every branch of the ideal `n`-leaf construction, with root and leaves.
fn microcluster_branches(n: usize, table: &ByproductTable) -> Result<(Vec<Branch>, QubitId, Vec<QubitId>)> {
    let mut alloc = QubitAllocator::new();
    if n == 1 {
        let (psi, r, l) = epr_with_roles(&mut alloc, Role::Root, Role::Leaf { birth: 0 });
        return Ok((vec![(String::new(), psi)], r, vec![l]));
    }
    let (p1, a, b) = epr_with_roles::<G>(&mut alloc, Role::Leaf { birth: 0 }, Role::EprHalf);
    let (p2, c, d) = epr_with_roles::<G>(&mut alloc, Role::EprHalf, Role::Leaf { birth: 1 });
    let mut root = alloc.fresh(Role::Root);
    let mut branches = fuse_branches(vec![(String::new(), p1.tensor(&p2)?)], b, c, root, table)?;
    let mut leaves = vec![a, d];
    for birth in 2..n as u32 {
        let (p, c, d) = epr_with_roles::<G>(&mut alloc, Role::EprHalf, Role::Leaf { birth });
        let next = alloc.fresh(Role::Root);
        let joined = branches.into_iter().map(|(s, psi)| Ok((s, psi.tensor(&p)?))).collect::<Result<Vec<_>>>()?;
        branches = fuse_branches(joined, root, c, next, table)?;
        root = next;
        leaves.push(d);
    }
    Ok((branches, root, leaves))
}

/// One side of a pair pipeline: the ideal star after `k − 1` failed
/// attempts and z-measurement of the extraneous leaves. Each entry records
/// the failure outcomes so the two sides can be matched.
type SideBranches = (Vec<(Vec<u8>, Branch)>, QubitId, QubitId);

fn side_branches(
    n: usize,
    k: usize,
    alloc: &mut QubitAllocator,
    table: &ByproductTable,
) -> Result<SideBranches> {
    let root = alloc.fresh(Role::Root);
    let leaves: Vec<QubitId> = (0..n as u32).map(|b| alloc.fresh(Role::Leaf { birth: b })).collect();
    let mut out = vec![(Vec::new(), (String::new(), star_state::<G>(root, &leaves)?))];
    for j in 1..k {
        let leaf = leaves[n - j];
        let mut next = Vec::new();
        for (bits, (path, psi)) in out {
            for b in 0..2u8 {
                let mut t = psi.project_remove(leaf, &basis(b))?;
                if b == 1 {
                    t = table.failure_one.apply_pure(&t, root)?;
                }
                if !t.is_zero() {
                    let mut bits = bits.clone();
                    bits.push(b);
                    next.push((bits, (format!("{path} fail{j}[{b}]"), t)));
                }
            }
        }
        out = next;
    }
    for &leaf in &leaves[..n - k] {
        let mut next = Vec::new();
        for (bits, (path, psi)) in out {
            for b in 0..2u8 {
                let mut t = psi.project_remove(leaf, &basis(b))?;
                if b == 1 {
                    t = table.leaf_one.apply_pure(&t, root)?;
                }
                if !t.is_zero() {
                    next.push((bits.clone(), (format!("{path} z{leaf}[{b}]"), t)));
                }
            }
        }
        out = next;
    }
    Ok((out, root, leaves[n - k]))
}

fn pair_branches(n: usize, k: usize, table: &ByproductTable) -> Result<(Vec<Branch>, QubitId, QubitId)> {
    let mut alloc = QubitAllocator::new();
    let (side_a, ra, la) = side_branches(n, k, &mut alloc, table)?;
    let (side_b, rb, lb) = side_branches(n, k, &mut alloc, table)?;
    let weights = failure_weights(&G::zero());
    let mut joined = Vec::new();
    for (bits_a, (path_a, psi_a)) in &side_a {
        for (bits_b, (path_b, psi_b)) in &side_b {
            let possible = bits_a.iter().zip(bits_b).all(|(&x, &y)| !weights[(x * 2 + y) as usize].is_zero());
            if possible {
                joined.push((format!("A:{path_a} | B:{path_b} |"), psi_a.tensor(psi_b)?));
            }
        }
    }
    let c = alloc.fresh(Role::Connector);
    let fused = fuse_branches(joined, la, lb, c, table)?;
    let mut out = Vec::new();
    for (path, psi) in fused {
        for plus in [true, false] {
            let mut t = psi.project_remove(c, &y_eigenket::<G>(plus))?;
            if !plus {
                t = table.y_minus[0].apply_pure(&t, ra)?;
                t = table.y_minus[1].apply_pure(&t, rb)?;
            }
            if !t.is_zero() {
                out.push((format!("{path} y[{}]", if plus { '+' } else { '-' }), t));
            }
        }
    }
    Ok((out, ra, rb))
}

/// Which pipelines a check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Scope {
    Microclusters,
    BondOnly,
    Leaves,
    Failures,
    Everything,
}

fn check(table: &ByproductTable, max_leaves: usize, scope: Scope) -> Result<usize> {
    let mut checked = 0;
    if matches!(scope, Scope::Microclusters | Scope::Everything) {
        for n in 1..=max_leaves {
            let (branches, root, leaves) = microcluster_branches(n, table)?;
            let target = star_state::<G>(root, &leaves)?;
            for (path, psi) in branches {
                if !is_target(&target, &psi)? {
                    return Err(Error::Calibration(format!("{n}-leaf microcluster branch{path}")));
                }
                checked += 1;
            }
        }
    }
    for n in 1..=max_leaves {
        for k in 1..=n {
            let wanted = match scope {
                Scope::Microclusters => false,
                Scope::BondOnly => n == 1,
                Scope::Leaves => k == 1,
                Scope::Failures | Scope::Everything => true,
            };
            if !wanted {
                continue;
            }
            let (branches, ra, rb) = pair_branches(n, k, table)?;
            let target = pair_target::<G>(ra, rb)?;
            for (path, psi) in branches {
                if !is_target(&target, &psi)? {
                    return Err(Error::Calibration(format!("pair ({n}, {k}) branch {path}")));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Checks every zero-noise branch for up to `max_leaves` leaves, returning
/// the number of branches checked or naming the first failing branch.
pub fn verify_byproducts(table: &ByproductTable, max_leaves: usize) -> Result<usize> {
    check(table, max_leaves, Scope::Everything)
}

/// Result of a calibration run.
#[derive(Clone, Debug)]
pub struct Calibration {
    pub table: ByproductTable,
    pub branches: usize,
    /// Slots that had to be searched, in order.
    pub searched: Vec<&'static str>,
}

/// Starts from `start`, replaces any slot whose branches fail with the first
/// working Clifford (two per `y−`), and verifies the result.
pub fn calibrate_from(start: ByproductTable, max_leaves: usize) -> Result<Calibration> {
    let group = Clifford::group();
    let mut table = start;
    let mut searched = Vec::new();

    type Slot = fn(&mut ByproductTable) -> &mut Clifford;
    let singles: [(&'static str, Slot, Scope); 3] = [
        ("fusion_minus", |t| &mut t.fusion_minus, Scope::Microclusters),
        ("leaf_one", |t| &mut t.leaf_one, Scope::Leaves),
        ("failure_one", |t| &mut t.failure_one, Scope::Failures),
    ];

    let search_single = |table: &mut ByproductTable, (name, slot, scope): &(&'static str, Slot, Scope)| -> Result<bool> {
        if check(table, max_leaves, *scope).is_ok() {
            return Ok(false);
        }
        for c in &group {
            *slot(table) = c.clone();
            if check(table, max_leaves, *scope).is_ok() {
                return Ok(true);
            }
        }
        Err(Error::Calibration(format!("no Clifford correction satisfies {name}")))
    };

    if search_single(&mut table, &singles[0])? {
        searched.push(singles[0].0);
    }
    if check(&table, max_leaves, Scope::BondOnly).is_err() {
        let found = group.iter().flat_map(|a| group.iter().map(move |b| [a.clone(), b.clone()])).find(|pair| {
            let mut t = table.clone();
            t.y_minus = pair.clone();
            check(&t, max_leaves, Scope::BondOnly).is_ok()
        });
        table.y_minus = found.ok_or_else(|| Error::Calibration("no Clifford pair satisfies y_minus".into()))?;
        searched.push("y_minus");
    }
    for slot in &singles[1..] {
        if search_single(&mut table, slot)? {
            searched.push(slot.0);
        }
    }
    let branches = verify_byproducts(&table, max_leaves)?;
    Ok(Calibration { table, branches, searched })
}

/// Calibrates from the default table over pipelines with up to four leaves.
pub fn calibrate_byproducts() -> Result<ByproductTable> {
    Ok(calibrate_from(ByproductTable::default(), 4)?.table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_verifies() {
        let n = verify_byproducts(&ByproductTable::default(), 3).unwrap();
        assert!(n > 0);
    }

    #[test]
    fn missing_fusion_correction_fails() {
        let table = ByproductTable { fusion_minus: Clifford::identity(), ..Default::default() };
        assert!(matches!(verify_byproducts(&table, 2), Err(Error::Calibration(_))));
    }

    #[test]
    fn search_repairs_broken_slots() {
        let broken = ByproductTable {
            fusion_minus: Clifford::x(),
            leaf_one: Clifford::identity(),
            y_minus: [Clifford::identity(), Clifford::identity()],
            ..Default::default()
        };
        let cal = calibrate_from(broken, 2).unwrap();
        assert_eq!(cal.searched, vec!["fusion_minus", "y_minus", "leaf_one"]);
        assert!(verify_byproducts(&cal.table, 2).is_ok());
        let again = calibrate_from(ByproductTable::default(), 2).unwrap();
        assert!(again.searched.is_empty());
        assert_eq!(again.table, ByproductTable::default());
    }
}
