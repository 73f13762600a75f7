//! Compounds: `t` independent median/modified parts laid out block-diagonally.

use rand::Rng;

use super::modify::gen_modified_instance;
use super::LbError;
use crate::system::{ElemId, SetId, SetSystem};

pub const DEFAULT_C_WEIGHT: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartKind {
    Median,
    /// Planted pair in compound-wide set ids, and the swap count.
    Modified { chosen_sets: Vec<SetId>, swaps: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    /// Part `i` (0-based) owns elements `i·n + 1 ..= (i+1)·n` and sets
    /// `i·m + 1 ..= (i+1)·m`.
    pub elem_offset: usize,
    pub set_offset: usize,
    pub kind: PartKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompoundInstance {
    pub system: SetSystem,
    pub parts: Vec<Part>,
    /// Shape of each part.
    pub part_m: usize,
    pub part_n: usize,
}

impl CompoundInstance {
    pub fn median_parts(&self) -> usize {
        self.parts.iter().filter(|p| p.kind == PartKind::Median).count()
    }

    /// `2t + #median`: each modified part needs exactly two sets and each
    /// median part at least three.
    pub fn opt_lower_bound(&self) -> usize {
        2 * self.parts.len() + self.median_parts()
    }

    /// Part `i` as a standalone system with local ids, tables in oracle order.
    pub fn part_system(&self, i: usize) -> SetSystem {
        let p = &self.parts[i];
        let (m, n) = (self.part_m, self.part_n);
        let elt_of = (0..m)
            .map(|s| {
                self.system.elements(SetId::from_index(p.set_offset + s))
                    .iter()
                    .map(|e| ElemId(e.0 - p.elem_offset as u32))
                    .collect()
            })
            .collect();
        let set_of = (0..n)
            .map(|e| {
                self.system.sets_containing(ElemId::from_index(p.elem_offset + e))
                    .iter()
                    .map(|s| SetId(s.0 - p.set_offset as u32))
                    .collect()
            })
            .collect();
        SetSystem::from_tables(m, n, elt_of, set_of).expect("parts are self-contained")
    }
}

/// Each part is the median itself with probability `c_weight / C(m, 2)`,
/// otherwise a fresh modified draw.
pub fn gen_compound<R: Rng + ?Sized>(
    median: &SetSystem,
    t: usize,
    c_weight: f64,
    rng: &mut R,
) -> Result<CompoundInstance, LbError> {
    let (m, n) = (median.m(), median.n());
    if t == 0 {
        return Err(LbError::Params("a compound needs t >= 1 parts".into()));
    }
    let pairs = (m * m.saturating_sub(1) / 2) as f64;
    let prob = c_weight / pairs;
    if !(prob > 0.0 && prob <= 1.0) {
        return Err(LbError::Params(format!(
            "median probability c/C(m,2) = {prob} must lie in (0, 1]"
        )));
    }

    let mut elt_of: Vec<Vec<ElemId>> = Vec::with_capacity(m * t);
    let mut set_of: Vec<Vec<SetId>> = vec![Vec::new(); n * t];
    let mut parts = Vec::with_capacity(t);
    for i in 0..t {
        let (eo, so) = (i * n, i * m);
        let (sys, kind) = if rng.gen_bool(prob) {
            (median.clone(), PartKind::Median)
        } else {
            let mi = gen_modified_instance(median, rng)?;
            let kind = PartKind::Modified {
                chosen_sets: mi.chosen_sets.iter().map(|s| SetId(s.0 + so as u32)).collect(),
                swaps: mi.swaps.len(),
            };
            (mi.system, kind)
        };
        for row in sys.elt_of_table() {
            elt_of.push(row.iter().map(|e| ElemId(e.0 + eo as u32)).collect());
        }
        for (j, row) in sys.set_of_table().iter().enumerate() {
            set_of[eo + j] = row.iter().map(|s| SetId(s.0 + so as u32)).collect();
        }
        parts.push(Part {
            elem_offset: eo,
            set_offset: so,
            kind,
        });
    }
    let system = SetSystem::from_tables(m * t, n * t, elt_of, set_of)
        .map_err(|e| LbError::Stuck(e.to_string()))?;
    Ok(CompoundInstance {
        system,
        parts,
        part_m: m,
        part_n: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowerbound::bits::Incidence;
    use crate::lowerbound::median::{gen_random_instance, MedianParams};
    use crate::rng;

    fn median() -> SetSystem {
        let p = MedianParams::simplified(60, 300).unwrap();
        gen_random_instance(60, 300, p.p0, &mut rng::stream(21, "test", 0))
    }

    #[test]
    fn forced_branches() {
        let med = median();
        let pairs = 60.0 * 59.0 / 2.0;
        let mut r = rng::stream(0, "test", 0);
        let all_median = gen_compound(&med, 4, pairs, &mut r).unwrap();
        assert_eq!(all_median.median_parts(), 4);
        assert_eq!(all_median.opt_lower_bound(), 12);
        for i in 0..4 {
            assert_eq!(all_median.part_system(i), med);
        }
        let all_modified = gen_compound(&med, 4, 1e-12, &mut r).unwrap();
        assert_eq!(all_modified.median_parts(), 0);
        assert_eq!(all_modified.opt_lower_bound(), 8);
        assert!(gen_compound(&med, 0, 8.0, &mut r).is_err());
        assert!(gen_compound(&med, 2, 2.0 * pairs, &mut r).is_err());
    }

    #[test]
    fn parts_are_disjoint_and_pair_coverable_iff_modified() {
        let med = median();
        assert!(Incidence::new(&med).covering_pair().is_none());
        let c = gen_compound(&med, 5, 300.0, &mut rng::stream(3, "test", 0)).unwrap();
        c.system.check_duality().unwrap();
        for (i, part) in c.parts.iter().enumerate() {
            let sys = c.part_system(i);
            let pair = Incidence::new(&sys).covering_pair();
            match &part.kind {
                PartKind::Median => assert!(pair.is_none()),
                PartKind::Modified { chosen_sets, .. } => {
                    assert!(pair.is_some());
                    let local: Vec<SetId> =
                        chosen_sets.iter().map(|s| SetId(s.0 - part.set_offset as u32)).collect();
                    assert!(local.iter().all(|s| s.0 >= 1 && s.0 as usize <= 60));
                }
            }
        }
    }
}
