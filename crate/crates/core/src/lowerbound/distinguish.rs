//! Query-limited distinguishers.
//!
//! Each trial flips a fair coin between a negative instance (the median
//! itself, or a yes slab instance) and a positive one (a modified draw, or a
//! no slab instance). The distinguisher knows the construction: it compares
//! oracle answers with a reference instance and only answers "positive" on
//! conclusive evidence, defaulting to "negative" otherwise.
//!
//! * Median vs. modified: any answer that differs from the median proves a
//!   modification.
//! * Slab yes vs. no: a differing cell proves its slab was swapped. "No" is
//!   conclusive once every possible swap of some slab has been probed and
//!   none happened.

use std::collections::HashMap;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use super::modify::gen_modified_instance;
use super::slab::{basic_slabs, gen_slab_instance, SlabLabel};
use super::LbError;
use crate::numfmt::fmt_g;
use crate::oracle::Oracle;
use crate::rng;
use crate::system::{ElemId, Entry, SetId, SetSystem, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// `q` distinct table cells drawn uniformly from both tables.
    UniformRandom,
    /// The first `q` cells in a fixed order: EltOf row by row, then SetOf.
    Scan,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::UniformRandom => "uniform",
            Strategy::Scan => "scan",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Mixture<'a> {
    MedianVsModified(&'a SetSystem),
    SlabYesNo { n: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishResult {
    pub trials: u64,
    pub correct: u64,
    pub accuracy: f64,
    /// 95% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
}

impl DistinguishResult {
    pub const CSV_HEADER: &'static str = "trials,correct,accuracy,ci_low,ci_high";

    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.trials,
            self.correct,
            fmt_g(self.accuracy),
            fmt_g(self.ci_low),
            fmt_g(self.ci_high)
        )
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Cell addressing over both tables of a fixed shape.
struct Cells {
    /// Row lengths: EltOf rows then SetOf rows.
    starts: Vec<usize>,
    m: usize,
    total: usize,
}

impl Cells {
    fn new(sys: &SetSystem) -> Self {
        let mut starts = Vec::with_capacity(sys.m() + sys.n() + 1);
        let mut at = 0;
        for row in sys.elt_of_table() {
            starts.push(at);
            at += row.len();
        }
        for row in sys.set_of_table() {
            starts.push(at);
            at += row.len();
        }
        starts.push(at);
        Cells {
            starts,
            m: sys.m(),
            total: at,
        }
    }

    fn entry(&self, i: usize) -> Entry {
        let r = self.starts.partition_point(|&s| s <= i) - 1;
        let pos = (i - self.starts[r] + 1) as u32;
        if r < self.m {
            Entry {
                table: Table::EltOf,
                row: r as u32 + 1,
                pos,
            }
        } else {
            Entry {
                table: Table::SetOf,
                row: (r - self.m) as u32 + 1,
                pos,
            }
        }
    }
}

fn reference_answer(sys: &SetSystem, c: Entry) -> u32 {
    match c.table {
        Table::EltOf => sys.elements(SetId(c.row))[c.pos as usize - 1].0,
        Table::SetOf => sys.sets_containing(ElemId(c.row))[c.pos as usize - 1].0,
    }
}

fn ask(oracle: &mut Oracle<'_>, c: Entry) -> Option<u32> {
    let pos = c.pos as usize;
    match c.table {
        Table::EltOf => oracle.elt_of(SetId(c.row), pos).ok().flatten().map(|e| e.0),
        Table::SetOf => oracle.set_of(ElemId(c.row), pos).ok().flatten().map(|s| s.0),
    }
}

/// For slab mixtures: which (slab, swap) each swap-sensitive cell belongs to.
struct SlabIndex {
    cell_swap: HashMap<Entry, (usize, usize)>,
    swaps_per_slab: usize,
}

impl SlabIndex {
    fn new(basic: &SetSystem, n: usize, k: usize) -> Self {
        let w = n / k;
        let mut sys = basic.clone();
        let mut cell_swap = HashMap::new();
        for p in 0..k {
            let off = p * w;
            let mut id = 0;
            for x in 1..=k {
                for y in 1..w {
                    let (e, last) = (ElemId((off + y) as u32), ElemId((off + w) as u32));
                    let (s, s2) = (SetId(x as u32), SetId((y * k + x) as u32));
                    let rec = sys.apply_swap(e, last, s, s2).expect("legal slab swap");
                    sys.apply_swap(last, e, s, s2).expect("inverse swap");
                    for c in rec.positions {
                        cell_swap.insert(c, (p, id));
                    }
                    id += 1;
                }
            }
        }
        SlabIndex {
            cell_swap,
            swaps_per_slab: n - k,
        }
    }
}

/// Runs `trials` independent trials; trial `t` uses stream
/// `("distinguish", t)` of `seed`.
pub fn distinguisher_experiment(
    mixture: Mixture<'_>,
    strategy: Strategy,
    q: u64,
    trials: u64,
    seed: u64,
) -> Result<DistinguishResult, LbError> {
    let (reference, slab_index) = match mixture {
        Mixture::MedianVsModified(median) => (median.clone(), None),
        Mixture::SlabYesNo { n, k } => {
            let basic = basic_slabs(n, k)?;
            let idx = SlabIndex::new(&basic, n, k);
            (basic, Some(idx))
        }
    };
    let cells = Cells::new(&reference);

    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool, LbError> {
            let mut r = rng::stream(seed, "distinguish", t);
            let positive = r.gen_bool(0.5);
            let instance = match mixture {
                Mixture::MedianVsModified(median) => {
                    if positive {
                        gen_modified_instance(median, &mut r)?.system
                    } else {
                        median.clone()
                    }
                }
                Mixture::SlabYesNo { n, k } => {
                    let label = if positive { SlabLabel::No } else { SlabLabel::Yes };
                    gen_slab_instance(n, k, label, &mut r)?.system
                }
            };
            let take = (q.min(cells.total as u64)) as usize;
            let picks: Vec<usize> = match strategy {
                Strategy::UniformRandom => index::sample(&mut r, cells.total, take).into_vec(),
                Strategy::Scan => (0..take).collect(),
            };
            let mut oracle = Oracle::with_budget(&instance, Some(q));
            let guess = match &slab_index {
                None => picks.iter().any(|&i| {
                    let c = cells.entry(i);
                    ask(&mut oracle, c) != Some(reference_answer(&reference, c))
                }),
                Some(idx) => {
                    let k = match mixture {
                        Mixture::SlabYesNo { k, .. } => k,
                        Mixture::MedianVsModified(_) => unreachable!(),
                    };
                    let mut swapped = vec![false; k];
                    let mut probed: Vec<Vec<bool>> = vec![vec![false; idx.swaps_per_slab]; k];
                    for &i in &picks {
                        let c = cells.entry(i);
                        let answer = ask(&mut oracle, c);
                        if let Some(&(p, id)) = idx.cell_swap.get(&c) {
                            probed[p][id] = true;
                            if answer != Some(reference_answer(&reference, c)) {
                                swapped[p] = true;
                            }
                        }
                    }
                    (0..k).any(|p| !swapped[p] && probed[p].iter().all(|&b| b))
                }
            };
            Ok(guess == positive)
        })
        .collect::<Result<_, _>>()?;

    let correct = outcomes.iter().filter(|&&ok| ok).count() as u64;
    let (ci_low, ci_high) = wilson_interval(correct, trials, 1.96);
    Ok(DistinguishResult {
        trials,
        correct,
        accuracy: if trials == 0 { 0.0 } else { correct as f64 / trials as f64 },
        ci_low,
        ci_high,
    })
}
