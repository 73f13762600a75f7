//! Greedy set cover on a materialized sub-instance.
//!
//! Picks the set covering the most uncovered elements, lowest set id on
//! ties, until everything is covered. Gains only decrease, so a lazy max-heap
//! of stale gains is exact: a popped entry whose recomputed gain still equals
//! its key dominates every other entry.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use crate::cover::{Cover, Provenance};
use crate::system::{ElemId, SetId, SetSystem};

use super::SolveError;

/// Greedy cover of `elements` using `family`. Elements listed by a family
/// member but absent from `elements` are ignored.
pub fn greedy_cover(
    elements: &[ElemId],
    family: &BTreeMap<SetId, Vec<ElemId>>,
) -> Result<Cover, SolveError> {
    let index: HashMap<ElemId, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let sets: Vec<(SetId, Vec<usize>)> = family
        .iter()
        .map(|(&s, members)| {
            let mut local: Vec<usize> = members.iter().filter_map(|e| index.get(e).copied()).collect();
            local.sort_unstable();
            local.dedup();
            (s, local)
        })
        .collect();
    let picked = greedy_indices(index.len(), &sets)?;
    Ok(Cover::new(picked, Provenance::Greedy))
}

/// Greedy over a whole system without any oracle accounting.
pub fn greedy_full(sys: &SetSystem) -> Result<Cover, SolveError> {
    let sets: Vec<(SetId, Vec<usize>)> = sys
        .set_ids()
        .map(|s| (s, sys.elements(s).iter().map(|e| e.index()).collect()))
        .collect();
    let picked = greedy_indices(sys.n(), &sets)?;
    Ok(Cover::new(picked, Provenance::Greedy))
}

fn greedy_indices(n: usize, sets: &[(SetId, Vec<usize>)]) -> Result<Vec<SetId>, SolveError> {
    let mut coverable = vec![false; n];
    for (_, members) in sets {
        for &i in members {
            coverable[i] = true;
        }
    }
    if let Some(missing) = coverable.iter().position(|c| !c) {
        return Err(SolveError::Infeasible(format!(
            "element at local index {missing} lies in no available set"
        )));
    }

    let mut covered = vec![false; n];
    let mut remaining = n;
    let mut heap: BinaryHeap<(usize, Reverse<SetId>, usize)> = sets
        .iter()
        .enumerate()
        .filter(|(_, (_, m))| !m.is_empty())
        .map(|(k, (s, m))| (m.len(), Reverse(*s), k))
        .collect();
    let mut picked = Vec::new();

    while remaining > 0 {
        let Some((stale, id, k)) = heap.pop() else {
            unreachable!("coverability checked above");
        };
        let gain = sets[k].1.iter().filter(|&&i| !covered[i]).count();
        if gain == 0 {
            continue;
        }
        if gain < stale {
            heap.push((gain, id, k));
            continue;
        }
        for &i in &sets[k].1 {
            if !covered[i] {
                covered[i] = true;
                remaining -= 1;
            }
        }
        picked.push(id.0);
    }
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(entries: &[(u32, &[u32])]) -> BTreeMap<SetId, Vec<ElemId>> {
        entries
            .iter()
            .map(|(s, es)| (SetId(*s), es.iter().map(|&e| ElemId(e)).collect()))
            .collect()
    }

    fn elems(es: &[u32]) -> Vec<ElemId> {
        es.iter().map(|&e| ElemId(e)).collect()
    }

    #[test]
    fn single_set() {
        let c = greedy_cover(&elems(&[1]), &fam(&[(1, &[1])])).unwrap();
        assert_eq!(c.set_ids(), &[SetId(1)]);
    }

    #[test]
    fn triangle_ties_break_low() {
        let f = fam(&[(1, &[1, 2]), (2, &[2, 3]), (3, &[1, 3])]);
        let c = greedy_cover(&elems(&[1, 2, 3]), &f).unwrap();
        assert_eq!(c.set_ids(), &[SetId(1), SetId(2)]);
    }

    #[test]
    fn ignores_foreign_elements() {
        let f = fam(&[(1, &[1, 7, 8, 9]), (2, &[2, 3])]);
        let c = greedy_cover(&elems(&[2, 3]), &f).unwrap();
        assert_eq!(c.set_ids(), &[SetId(2)]);
    }

    #[test]
    fn infeasible_and_empty() {
        let f = fam(&[(1, &[1])]);
        assert!(matches!(
            greedy_cover(&elems(&[1, 2]), &f),
            Err(SolveError::Infeasible(_))
        ));
        assert!(greedy_cover(&[], &f).unwrap().is_empty());
    }
}
