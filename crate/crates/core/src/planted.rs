//! Instances with a known optimum.
//!
//! The universe is split into `k` random blocks, each of which is one of the
//! sets; every other set is a strict random subset of a single block. Since
//! no set crosses a block boundary, each block needs its own set and the
//! optimum is exactly `k`.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::system::{ElemId, SetId, SetSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("planted instance needs 1 <= k <= min(m, n), got m={m} n={n} k={k}")]
pub struct PlantedError {
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub system: SetSystem,
    /// Ids of the block sets, ascending.
    pub planted: Vec<SetId>,
}

pub fn gen_planted<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<Planted, PlantedError> {
    if k == 0 || k > m || k > n {
        return Err(PlantedError { m, n, k });
    }
    let mut elems: Vec<ElemId> = (0..n).map(ElemId::from_index).collect();
    elems.shuffle(rng);
    // Near-equal blocks: the first n % k blocks get one extra element.
    let (base, extra) = (n / k, n % k);
    let mut blocks = Vec::with_capacity(k);
    let mut at = 0;
    for b in 0..k {
        let len = base + usize::from(b < extra);
        blocks.push(elems[at..at + len].to_vec());
        at += len;
    }

    let mut sets: Vec<Vec<ElemId>> = blocks.clone();
    for _ in k..m {
        let block = &blocks[rng.gen_range(0..k)];
        sets.push(strict_subset(block, rng));
    }
    // Hide the blocks among the noise.
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut shuffled = vec![Vec::new(); m];
    let mut planted = Vec::with_capacity(k);
    for (src, &dst) in order.iter().enumerate() {
        shuffled[dst] = std::mem::take(&mut sets[src]);
        if src < k {
            planted.push(SetId::from_index(dst));
        }
    }
    planted.sort_unstable();
    let system = SetSystem::from_sets(n, shuffled).expect("generated sets are in range");
    Ok(Planted { system, planted })
}

/// Non-empty strict subset with inclusion rate ½; empty for singleton blocks.
fn strict_subset<R: Rng + ?Sized>(block: &[ElemId], rng: &mut R) -> Vec<ElemId> {
    if block.len() < 2 {
        return Vec::new();
    }
    loop {
        let pick: Vec<ElemId> = block.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !pick.is_empty() && pick.len() < block.len() {
            return pick;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Cover, Provenance};
    use crate::oracle::covers;
    use crate::rng;
    use crate::solvers::brute_force_min_cover;

    #[test]
    fn optimum_is_k() {
        for seed in 0..10 {
            let mut r = rng::stream(seed, "planted", 0);
            let p = gen_planted(12, 12, 3, &mut r).unwrap();
            assert_eq!(brute_force_min_cover(&p.system).unwrap().k, 3);
            assert!(covers(&p.system, &Cover::new(p.planted.clone(), Provenance::Given)));
        }
    }

    #[test]
    fn rejects_bad_k() {
        let mut r = rng::stream(0, "planted", 0);
        assert!(gen_planted(5, 5, 0, &mut r).is_err());
        assert!(gen_planted(5, 8, 6, &mut r).is_err());
    }
}
