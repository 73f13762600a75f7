use std::collections::BTreeMap;

use crate::cover::Cover;
use crate::oracle::{Oracle, QueryError};
use crate::system::{ElemId, SetId};

use super::config::RhoMode;
use super::greedy::greedy_cover;
use super::memo::Reader;

/// Materializes the projection of the family onto `x` through SetOf
/// (`deg(e) + 1` queries per element) and solves it with greedy.
///
/// Returns `None` when the greedy cover exceeds `ρ ℓ` with `ρ = ρ(|x|)`, or
/// when some element of `x` lies in no set.
pub fn offline_sc(
    oracle: &mut Oracle<'_>,
    x: &[ElemId],
    ell: usize,
    rho: RhoMode,
) -> Result<Option<Cover>, QueryError> {
    offline_with(&mut Reader::new(oracle), x, ell, rho)
}

pub(crate) fn offline_with(
    reader: &mut Reader<'_, '_>,
    x: &[ElemId],
    ell: usize,
    rho: RhoMode,
) -> Result<Option<Cover>, QueryError> {
    let family = materialize(reader, x)?;
    // An element of degree 0 makes greedy report infeasibility.
    let Ok(cover) = greedy_cover(x, &family) else {
        return Ok(None);
    };
    let budget = rho.rho(x.len()) * ell as f64;
    Ok((cover.len() as f64 <= budget).then_some(cover))
}

/// Family of all sets meeting `x`, read through SetOf.
pub(crate) fn materialize(
    reader: &mut Reader<'_, '_>,
    x: &[ElemId],
) -> Result<BTreeMap<SetId, Vec<ElemId>>, QueryError> {
    let mut family: BTreeMap<SetId, Vec<ElemId>> = BTreeMap::new();
    for &e in x {
        for &s in reader.enumerate_element(e)? {
            family.entry(s).or_default().push(e);
        }
    }
    Ok(family)
}
