//! Cover-verification instances built from slabs.
//!
//! With `m = n` and `w = n/k`, slab `p` is the block of elements
//! `(p−1)w + 1 ..= pw`. Every slab shares the same row structure:
//!
//! * query block `S_1..S_k`: the first `w − 1` slab elements;
//! * swapper block `r = 1..w−1`: sets `S_{rk+1}..S_{(r+1)k}`, each holding the
//!   whole slab except its `r`-th element.
//!
//! Swap `(x, y)` in a slab exchanges the slab's `y`-th and last element
//! between `S_x` and `S_{yk+x}`, after which the query block covers the slab.
//! Each slab admits `k(w−1) = n − k` swaps, touching pairwise distinct cells.

use rand::Rng;

use super::LbError;
use crate::cover::{Cover, Provenance};
use crate::system::{ElemId, SetId, SetSystem, SwapRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlabLabel {
    Yes,
    No,
}

impl SlabLabel {
    pub fn label(self) -> &'static str {
        match self {
            SlabLabel::Yes => "yes",
            SlabLabel::No => "no",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlabInstance {
    pub system: SetSystem,
    pub n: usize,
    pub k: usize,
    /// Per slab, the applied swap `(x, y)` with `x ∈ 1..=k`, `y ∈ 1..w`.
    pub swaps_per_slab: Vec<Option<(usize, usize)>>,
    pub label: SlabLabel,
    /// 1-based index of the slab left unswapped (no instances only).
    pub unswapped_slab: Option<usize>,
    pub records: Vec<SwapRecord>,
}

impl SlabInstance {
    pub fn width(&self) -> usize {
        self.n / self.k
    }

    /// The sets whose coverage is in question: `S_1..S_k`.
    pub fn query_cover(&self) -> Cover {
        Cover::new((1..=self.k as u32).map(SetId).collect(), Provenance::Given)
    }

    /// The element the query block misses, for no instances.
    pub fn witness(&self) -> Option<ElemId> {
        self.unswapped_slab.map(|p| ElemId((p * self.width()) as u32))
    }

    /// Tables restricted to slab `p` (1-based) with slab-local element ids:
    /// each set's entries for that slab, then each slab element's set list.
    pub fn slab_tables(&self, p: usize) -> (Vec<Vec<ElemId>>, Vec<Vec<SetId>>) {
        let w = self.width();
        let lo = ((p - 1) * w) as u32;
        let local = |e: ElemId| e.0 > lo && e.0 <= lo + w as u32;
        let elt = self
            .system
            .elt_of_table()
            .iter()
            .map(|row| row.iter().filter(|&&e| local(e)).map(|e| ElemId(e.0 - lo)).collect())
            .collect();
        let set = (1..=w as u32)
            .map(|j| self.system.sets_containing(ElemId(lo + j)).to_vec())
            .collect();
        (elt, set)
    }
}

fn check_params(n: usize, k: usize) -> Result<usize, LbError> {
    if k == 0 || n % k != 0 || n / k < 2 {
        return Err(LbError::Params(format!(
            "slabs need k >= 1, k | n and n/k >= 2, got n={n} k={k}"
        )));
    }
    Ok(n / k)
}

/// All `k` slabs with no swap applied, tables in ascending order.
pub fn basic_slabs(n: usize, k: usize) -> Result<SetSystem, LbError> {
    let w = check_params(n, k)?;
    let mut sets = vec![Vec::new(); n];
    for p in 0..k {
        let off = p * w;
        for row in sets.iter_mut().take(k) {
            row.extend((1..w).map(|j| ElemId((off + j) as u32)));
        }
        for r in 1..w {
            for x in 0..k {
                sets[r * k + x].extend((1..=w).filter(|&j| j != r).map(|j| ElemId((off + j) as u32)));
            }
        }
    }
    Ok(SetSystem::from_sets(n, sets).expect("slab ids in range"))
}

/// Slabs with the given per-slab swaps; at most one slab may be left alone.
pub fn gen_slab_with_swaps(
    n: usize,
    k: usize,
    swaps: &[Option<(usize, usize)>],
) -> Result<SlabInstance, LbError> {
    let w = check_params(n, k)?;
    if swaps.len() != k {
        return Err(LbError::Params(format!("need one entry per slab ({k}), got {}", swaps.len())));
    }
    let unswapped: Vec<usize> = (1..=k).filter(|&p| swaps[p - 1].is_none()).collect();
    if unswapped.len() > 1 {
        return Err(LbError::Params(format!("at most one slab may stay unswapped, got {unswapped:?}")));
    }
    let mut system = basic_slabs(n, k)?;
    let mut records = Vec::new();
    for (p, swap) in swaps.iter().enumerate() {
        let Some((x, y)) = *swap else { continue };
        if !(1..=k).contains(&x) || !(1..w).contains(&y) {
            return Err(LbError::Params(format!(
                "swap ({x}, {y}) outside [1, {k}] x [1, {}]",
                w - 1
            )));
        }
        let off = p * w;
        let e = ElemId((off + y) as u32);
        let e_last = ElemId((off + w) as u32);
        let rec = system
            .apply_swap(e, e_last, SetId(x as u32), SetId((y * k + x) as u32))
            .map_err(|err| LbError::Stuck(err.to_string()))?;
        records.push(rec);
    }
    Ok(SlabInstance {
        system,
        n,
        k,
        swaps_per_slab: swaps.to_vec(),
        label: if unswapped.is_empty() { SlabLabel::Yes } else { SlabLabel::No },
        unswapped_slab: unswapped.first().copied(),
        records,
    })
}

/// One uniform swap per slab; for `No`, one uniform slab is left unswapped.
pub fn gen_slab_instance<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    label: SlabLabel,
    rng: &mut R,
) -> Result<SlabInstance, LbError> {
    let w = check_params(n, k)?;
    let mut swaps: Vec<Option<(usize, usize)>> = (0..k)
        .map(|_| Some((rng.gen_range(1..=k), rng.gen_range(1..w))))
        .collect();
    if label == SlabLabel::No {
        swaps[rng.gen_range(0..k)] = None;
    }
    gen_slab_with_swaps(n, k, &swaps)
}
