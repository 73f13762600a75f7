//! Turning a median instance into a modified one with a planted small cover.
//!
//! Pick `k` distinct sets; every element they miss is matched to a fresh
//! element of `S_k ∩ (S_1 ∪ … ∪ S_{k−1})` and swapped into `S_k` from a
//! random candidate set. For `k = 2` this is the simplified procedure.
//!
//! A plan is drawn on the median's bitsets first and applied afterwards.
//! That is equivalent to drawing step by step: a swap only changes the
//! memberships of its own two elements in its own two sets, and no later
//! step's candidate test looks at those (uncovered elements and matched
//! partners are all distinct, and `S_k` never contains an uncovered element).

use std::fmt::Write as _;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use super::bits::Incidence;
use super::LbError;
use crate::cover::{Cover, Provenance};
use crate::numfmt::fmt_g;
use crate::rng;
use crate::system::{ElemId, Entry, SetId, SetSystem, SwapRecord};

/// Sets containing `e` but not `e_prime`.
pub fn candidate_sets(sys: &SetSystem, e: ElemId, e_prime: ElemId) -> Result<Vec<SetId>, LbError> {
    if e == e_prime {
        return Err(LbError::Params(format!("candidate sets need e != e', got {e} twice")));
    }
    Ok(sys
        .sets_containing(e)
        .iter()
        .copied()
        .filter(|&s| !sys.contains(s, e_prime))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    /// Initially uncovered element moved into `S_k`.
    pub e: ElemId,
    /// Matched element moved out of `S_k`.
    pub e_prime: ElemId,
    /// Candidate set giving up `e` in exchange for `e_prime`.
    pub s: SetId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPlan {
    /// `S_1, …, S_k` in draw order.
    pub chosen: Vec<SetId>,
    pub steps: Vec<PlanStep>,
}

impl ModPlan {
    pub fn target(&self) -> SetId {
        *self.chosen.last().expect("k >= 2")
    }
}

pub fn plan_modification<R: Rng + ?Sized>(
    inc: &Incidence,
    k: usize,
    rng: &mut R,
) -> Result<ModPlan, LbError> {
    let m = inc.m();
    if k < 2 || k > m {
        return Err(LbError::Params(format!("need 2 <= k <= m, got k={k} m={m}")));
    }
    let picked = index::sample(rng, m, k).into_vec();
    let (head, last) = picked.split_at(k - 1);
    let target = last[0];
    let union = inc.union_of(&picked);
    let mut pool_bits = inc.union_of(head);
    pool_bits.intersect_with(&inc.rows[target]);
    let mut pool: Vec<usize> = pool_bits.ones().collect();

    let mut steps = Vec::new();
    for e in (0..inc.n()).filter(|&e| !union.contains(e)) {
        if pool.is_empty() {
            return Err(LbError::Stuck(format!(
                "no element left to match with {}",
                ElemId::from_index(e)
            )));
        }
        let e_prime = pool.swap_remove(rng.gen_range(0..pool.len()));
        let mut cand = inc.cols[e].clone();
        cand.difference_with(&inc.cols[e_prime]);
        let cand: Vec<usize> = cand.ones().collect();
        if cand.is_empty() {
            return Err(LbError::Stuck(format!(
                "no candidate set for ({}, {})",
                ElemId::from_index(e),
                ElemId::from_index(e_prime)
            )));
        }
        let s = cand[rng.gen_range(0..cand.len())];
        steps.push(PlanStep {
            e: ElemId::from_index(e),
            e_prime: ElemId::from_index(e_prime),
            s: SetId::from_index(s),
        });
    }
    Ok(ModPlan {
        chosen: picked.into_iter().map(SetId::from_index).collect(),
        steps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedInstance {
    pub system: SetSystem,
    /// `S_1, …, S_k` in draw order; their union is the universe.
    pub chosen_sets: Vec<SetId>,
    pub swaps: Vec<SwapRecord>,
    pub matching: Vec<(ElemId, ElemId)>,
}

impl ModifiedInstance {
    pub fn chosen_cover(&self) -> Cover {
        Cover::new(self.chosen_sets.clone(), Provenance::Given)
    }

    /// Every table entry touched by the swaps.
    pub fn modified_entries(&self) -> Vec<Entry> {
        let mut out: Vec<Entry> = self.swaps.iter().flat_map(|r| r.positions).collect();
        out.sort_unstable();
        out
    }
}

pub fn apply_plan(median: &SetSystem, plan: &ModPlan) -> Result<ModifiedInstance, LbError> {
    let mut system = median.clone();
    let target = plan.target();
    let mut swaps = Vec::with_capacity(plan.steps.len());
    for step in &plan.steps {
        let rec = system
            .apply_swap(step.e, step.e_prime, step.s, target)
            .map_err(|err| LbError::Stuck(err.to_string()))?;
        swaps.push(rec);
    }
    Ok(ModifiedInstance {
        system,
        chosen_sets: plan.chosen.clone(),
        swaps,
        matching: plan.steps.iter().map(|s| (s.e, s.e_prime)).collect(),
    })
}

pub fn gen_modified_instance<R: Rng + ?Sized>(
    median: &SetSystem,
    rng: &mut R,
) -> Result<ModifiedInstance, LbError> {
    gen_modified_instance_general(median, 2, rng)
}

pub fn gen_modified_instance_general<R: Rng + ?Sized>(
    median: &SetSystem,
    k: usize,
    rng: &mut R,
) -> Result<ModifiedInstance, LbError> {
    let inc = Incidence::new(median);
    let plan = plan_modification(&inc, k, rng)?;
    apply_plan(median, &plan)
}

/// Empirical probability, per (element, set) cell, that the set swaps the
/// element out in a modified draw.
#[derive(Debug, Clone, PartialEq)]
pub struct PCellEstimate {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    /// Hit counts, element-major: `counts[e * m + s]` (0-based).
    counts: Vec<u32>,
    /// Swaps over all trials.
    pub total_swaps: u64,
}

impl PCellEstimate {
    pub fn count(&self, e: ElemId, s: SetId) -> u32 {
        self.counts[e.index() * self.m + s.index()]
    }

    pub fn freq(&self, e: ElemId, s: SetId) -> f64 {
        f64::from(self.count(e, s)) / self.trials as f64
    }

    /// Cells with a positive count, in (element, set) order.
    pub fn nonzero(&self) -> impl Iterator<Item = (ElemId, SetId, u32)> + '_ {
        let m = self.m;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| (ElemId::from_index(i / m), SetId::from_index(i % m), c))
    }

    /// The most frequently hit cell (first in cell order on ties).
    pub fn max(&self) -> Option<(ElemId, SetId, f64)> {
        let mut best: Option<(ElemId, SetId, u32)> = None;
        for (e, s, c) in self.nonzero() {
            if best.map_or(true, |b| c > b.2) {
                best = Some((e, s, c));
            }
        }
        best.map(|(e, s, c)| (e, s, f64::from(c) / self.trials as f64))
    }

    /// Sum of all cell frequencies: two cells change per swap.
    pub fn total_mass(&self) -> f64 {
        self.counts.iter().map(|&c| f64::from(c)).sum::<f64>() / self.trials as f64
    }

    pub fn mean_swaps(&self) -> f64 {
        self.total_swaps as f64 / self.trials as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("element,set,count,frequency\n");
        for (e, s, c) in self.nonzero() {
            let _ = writeln!(out, "{},{},{},{}", e.0, s.0, c, fmt_g(f64::from(c) / self.trials as f64));
        }
        out
    }
}

/// Runs the simplified procedure `trials` times on `median` and records,
/// for every swap, both cells whose set gave up an element: the candidate
/// set losing `e` and `S_2` losing `e'`. Trial `t` draws from stream
/// `("pcell", t)` of `seed`, so the result does not depend on threading.
pub fn estimate_p_elt_set(median: &SetSystem, trials: u64, seed: u64) -> Result<PCellEstimate, LbError> {
    if trials == 0 {
        return Err(LbError::Params("trials must be at least 1".into()));
    }
    let inc = Incidence::new(median);
    let (m, n) = (median.m(), median.n());
    let (counts, total_swaps) = (0..trials)
        .into_par_iter()
        .try_fold(
            || (vec![0u32; m * n], 0u64),
            |(mut acc, mut swaps), t| {
                let mut r = rng::stream(seed, "pcell", t);
                let plan = plan_modification(&inc, 2, &mut r)?;
                let target = plan.target();
                for st in &plan.steps {
                    acc[st.e.index() * m + st.s.index()] += 1;
                    acc[st.e_prime.index() * m + target.index()] += 1;
                }
                swaps += plan.steps.len() as u64;
                Ok::<_, LbError>((acc, swaps))
            },
        )
        .try_reduce(
            || (vec![0u32; m * n], 0u64),
            |(mut a, sa), (b, sb)| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                Ok((a, sa + sb))
            },
        )?;
    Ok(PCellEstimate {
        m,
        n,
        trials,
        counts,
        total_swaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowerbound::median::{gen_random_instance, MedianParams};
    use crate::oracle::covers;

    fn median() -> SetSystem {
        let p = MedianParams::simplified(100, 400).unwrap();
        gen_random_instance(100, 400, p.p0, &mut rng::stream(11, "test", 0))
    }

    #[test]
    fn candidates_forced_case() {
        let sys = SetSystem::from_sets(
            2,
            vec![vec![ElemId(1)], vec![ElemId(2)], vec![ElemId(1), ElemId(2)]],
        )
        .unwrap();
        assert_eq!(candidate_sets(&sys, ElemId(1), ElemId(2)).unwrap(), vec![SetId(1)]);
        assert_eq!(candidate_sets(&sys, ElemId(2), ElemId(1)).unwrap(), vec![SetId(2)]);
        assert!(candidate_sets(&sys, ElemId(1), ElemId(1)).is_err());
    }

    #[test]
    fn chosen_sets_cover_after_swaps() {
        let med = median();
        let before_uncovered = |chosen: &[SetId]| {
            (1..=400u32)
                .filter(|&e| !chosen.iter().any(|&s| med.contains(s, ElemId(e))))
                .count()
        };
        for seed in 0..20 {
            let mi = gen_modified_instance(&med, &mut rng::stream(seed, "test", 1)).unwrap();
            assert!(covers(&mi.system, &mi.chosen_cover()));
            assert_eq!(mi.swaps.len(), before_uncovered(&mi.chosen_sets));
            mi.system.check_duality().unwrap();
            // Swaps touch pairwise distinct entries, and nothing else changed.
            let touched = mi.modified_entries();
            let mut dedup = touched.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), touched.len());
            assert_eq!(mi.system.diff_entries(&med), touched);
        }
    }

    #[test]
    fn general_k_covers() {
        // Few elements escape three sets at p0 = 0.3, and the pool is large.
        let med = gen_random_instance(150, 300, 0.3, &mut rng::stream(3, "test", 0));
        for seed in 0..10 {
            let mi = gen_modified_instance_general(&med, 3, &mut rng::stream(seed, "test", 2)).unwrap();
            assert_eq!(mi.chosen_sets.len(), 3);
            assert!(covers(&mi.system, &mi.chosen_cover()));
        }
    }

    #[test]
    fn k2_general_equals_simplified() {
        let med = median();
        let a = gen_modified_instance(&med, &mut rng::stream(4, "test", 0)).unwrap();
        let b = gen_modified_instance_general(&med, 2, &mut rng::stream(4, "test", 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn p_cell_support_and_mass() {
        let med = median();
        let est = estimate_p_elt_set(&med, 300, 9).unwrap();
        for (e, s, _) in est.nonzero() {
            assert!(med.contains(s, e), "cell ({e}, {s}) not in the median");
        }
        assert!((est.total_mass() - 2.0 * est.mean_swaps()).abs() < 1e-9);
        assert_eq!(est, estimate_p_elt_set(&med, 300, 9).unwrap());
    }
}
