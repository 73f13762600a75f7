//! Set Sampling and Element Sampling primitives.

use rand::seq::index;
use rand::Rng;

use crate::oracle::{Oracle, QueryError};
use crate::system::{ElemId, SetId};

use super::memo::Reader;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSample {
    /// Picked sets in draw order.
    pub picked: Vec<SetId>,
    /// Union of the picked sets, ascending.
    pub covered: Vec<ElemId>,
}

/// Draws `ell` distinct sets uniformly and reads each one in full
/// (`Σ (|S| + 1)` EltOf queries). `ell` is clamped to `m`.
pub fn set_sample<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    ell: usize,
    rng: &mut R,
) -> Result<SetSample, QueryError> {
    set_sample_with(&mut Reader::new(oracle), ell, rng)
}

pub(crate) fn set_sample_with<R: Rng + ?Sized>(
    reader: &mut Reader<'_, '_>,
    ell: usize,
    rng: &mut R,
) -> Result<SetSample, QueryError> {
    let picked = pick_sets(reader.m(), ell, rng);
    let mut mask = vec![false; reader.n()];
    for &s in &picked {
        for e in reader.enumerate_set(s)? {
            mask[e.index()] = true;
        }
    }
    let covered = mask
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| ElemId::from_index(i))
        .collect();
    Ok(SetSample { picked, covered })
}

/// `ell` distinct uniformly random set ids (no queries).
pub fn pick_sets<R: Rng + ?Sized>(m: usize, ell: usize, rng: &mut R) -> Vec<SetId> {
    index::sample(rng, m, ell.min(m))
        .into_iter()
        .map(SetId::from_index)
        .collect()
}

/// Uniform sample without replacement of `min(size, |u_rem|)` elements of
/// the materialized remainder, returned ascending. No queries.
pub fn element_sample<R: Rng + ?Sized>(u_rem: &[ElemId], size: usize, rng: &mut R) -> Vec<ElemId> {
    if size >= u_rem.len() {
        return u_rem.to_vec();
    }
    let mut out: Vec<ElemId> = index::sample(rng, u_rem.len(), size)
        .into_iter()
        .map(|i| u_rem[i])
        .collect();
    out.sort_unstable();
    out
}
