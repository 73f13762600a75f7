//! Exact minimum set cover by enumeration over subsets of increasing size.

use crate::cover::{Cover, Provenance};
use crate::system::{SetId, SetSystem};

use super::SolveError;

pub const BRUTE_FORCE_MAX_SETS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCover {
    pub k: usize,
    pub cover: Cover,
}

pub fn brute_force_min_cover(sys: &SetSystem) -> Result<ExactCover, SolveError> {
    let m = sys.m();
    if m > BRUTE_FORCE_MAX_SETS {
        return Err(SolveError::TooLarge {
            m,
            cap: BRUTE_FORCE_MAX_SETS,
        });
    }
    if !sys.is_feasible() {
        return Err(SolveError::Infeasible("some element lies in no set".into()));
    }
    let words = sys.n().div_ceil(64);
    let rows: Vec<Vec<u64>> = sys
        .set_ids()
        .map(|s| {
            let mut w = vec![0u64; words];
            for e in sys.elements(s) {
                w[e.index() / 64] |= 1 << (e.index() % 64);
            }
            w
        })
        .collect();
    let mut full = vec![u64::MAX; words];
    if sys.n() % 64 != 0 {
        full[words - 1] = (1u64 << (sys.n() % 64)) - 1;
    }
    if words == 0 {
        return Ok(ExactCover {
            k: 0,
            cover: Cover::empty(Provenance::BruteForce),
        });
    }

    let mut chosen = Vec::with_capacity(m);
    for r in 1..=m {
        let mut acc = vec![0u64; words];
        if search(&rows, &full, r, 0, &mut acc, &mut chosen) {
            let ids = chosen.iter().map(|&i| SetId::from_index(i)).collect();
            return Ok(ExactCover {
                k: r,
                cover: Cover::new(ids, Provenance::BruteForce),
            });
        }
    }
    unreachable!("feasible instance is covered by all sets")
}

fn search(
    rows: &[Vec<u64>],
    full: &[u64],
    left: usize,
    start: usize,
    acc: &mut Vec<u64>,
    chosen: &mut Vec<usize>,
) -> bool {
    if left == 0 {
        return acc.iter().zip(full).all(|(a, f)| a == f);
    }
    for i in start..=rows.len() - left {
        let saved = acc.clone();
        for (a, r) in acc.iter_mut().zip(&rows[i]) {
            *a |= r;
        }
        chosen.push(i);
        if search(rows, full, left - 1, i + 1, acc, chosen) {
            return true;
        }
        chosen.pop();
        *acc = saved;
    }
    false
}
