//! Median instances: random set systems whose optimum is provably large
//! but which a handful of swaps can turn into one with a tiny cover.
//!
//! Two parameterizations exist. The simplified one targets optimum ≥ 3 versus
//! 2 with `p0 = √(9 ln m / n)`; the general one targets optimum > αk versus k
//! with `p0 = (8(αk+2) ln m / n)^{1/(αk)}`. In both, every (set, element)
//! incidence is present independently with probability `1 − p0`.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::seq::index;
use rand::Rng;

use super::bits::Incidence;
use super::LbError;
use crate::numfmt::fmt_g;
use crate::rng;
use crate::system::{ElemId, SetSystem};

pub const DEFAULT_MAX_ATTEMPTS: usize = 50;
pub const DEFAULT_SAMPLE_TRIALS: u64 = 10_000;
pub const DEFAULT_EXACT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    Simplified,
    General { k: usize, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianParams {
    pub m: usize,
    pub n: usize,
    pub variant: Variant,
    /// Probability that a given incidence is absent.
    pub p0: f64,
}

impl MedianParams {
    pub fn simplified(m: usize, n: usize) -> Result<Self, LbError> {
        check_shape(m, n)?;
        let p0 = (9.0 * (m as f64).ln() / n as f64).sqrt();
        if p0 > 0.5 {
            return Err(LbError::Params(format!(
                "p0 = sqrt(9 ln m / n) = {} exceeds 1/2; n is too small for m",
                fmt_g(p0)
            )));
        }
        Ok(MedianParams {
            m,
            n,
            variant: Variant::Simplified,
            p0,
        })
    }

    pub fn general(m: usize, n: usize, k: usize, alpha: f64) -> Result<Self, LbError> {
        check_shape(m, n)?;
        if k < 2 {
            return Err(LbError::Params(format!("k must be at least 2, got {k}")));
        }
        if !(alpha > 1.0) {
            return Err(LbError::Params(format!("alpha must exceed 1, got {alpha}")));
        }
        let ak = alpha * k as f64;
        let p0 = (8.0 * (ak + 2.0) * (m as f64).ln() / n as f64).powf(1.0 / ak);
        if !(p0 < 1.0) {
            return Err(LbError::Params(format!(
                "p0 = {} is not below 1; n is too small for m, k and alpha",
                fmt_g(p0)
            )));
        }
        Ok(MedianParams {
            m,
            n,
            variant: Variant::General { k, alpha },
            p0,
        })
    }

    /// Same shape and thresholds with an explicit absence probability.
    pub fn with_p0(mut self, p0: f64) -> Result<Self, LbError> {
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(LbError::Params(format!("p0 must lie in (0, 1), got {p0}")));
        }
        self.p0 = p0;
        Ok(self)
    }

    /// Number of sets the modified instances are built to be covered by.
    pub fn k(&self) -> usize {
        match self.variant {
            Variant::Simplified => 2,
            Variant::General { k, .. } => k,
        }
    }

    /// Tuple size of property (a): no this many sets cover the universe.
    pub fn cover_tuple(&self) -> usize {
        match self.variant {
            Variant::Simplified => 2,
            Variant::General { k, alpha } => (alpha * k as f64).floor() as usize,
        }
    }

    /// Whether the parameters lie where the properties are known to hold
    /// with high probability. Outside that range the generator still works
    /// but acceptance may need many attempts.
    pub fn in_proven_range(&self) -> bool {
        match self.variant {
            Variant::Simplified => self.p0 <= 0.5,
            Variant::General { k, alpha } => {
                let ln_m = (self.m as f64).ln();
                let hi = (self.n as f64 / (16.0 * alpha * ln_m)).powf(1.0 / (4.0 * alpha + 1.0));
                k as f64 <= hi
            }
        }
    }
}

fn check_shape(m: usize, n: usize) -> Result<(), LbError> {
    if m < 2 || n < 1 {
        return Err(LbError::Params(format!("need m >= 2 and n >= 1, got m={m} n={n}")));
    }
    Ok(())
}

/// Every incidence present independently with probability `1 − p0`.
pub fn gen_random_instance<R: Rng + ?Sized>(m: usize, n: usize, p0: f64, rng: &mut R) -> SetSystem {
    assert!(p0 > 0.0 && p0 < 1.0, "p0 must lie in (0, 1)");
    let keep = 1.0 - p0;
    let sets = (0..m)
        .map(|_| {
            (0..n)
                .filter(|_| rng.gen_bool(keep))
                .map(ElemId::from_index)
                .collect()
        })
        .collect();
    SetSystem::from_sets(n, sets).expect("ids in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exact,
    Sampled,
    /// Exact whenever the property's tuple count fits the exact budget.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckedBy {
    Exact,
    Sampled,
}

impl CheckedBy {
    pub fn label(self) -> &'static str {
        match self {
            CheckedBy::Exact => "exact",
            CheckedBy::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Random tuples per sampled property.
    pub trials: u64,
    /// Largest tuple count `Auto` still checks exhaustively.
    pub exact_budget: u64,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            trials: DEFAULT_SAMPLE_TRIALS,
            exact_budget: DEFAULT_EXACT_BUDGET,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub id: char,
    pub bound: Bound,
    pub threshold: f64,
    /// Worst value found: the maximum for upper bounds, the minimum for
    /// lower bounds.
    pub measured: f64,
    /// `measured − threshold`.
    pub margin: f64,
    pub holds: bool,
    pub mode: CheckedBy,
    pub trials: Option<u64>,
    /// For sampled checks without violations: a 95% upper confidence bound
    /// on the violating fraction of tuples, Bonferroni-adjusted over the six
    /// properties.
    pub violation_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MedianReport {
    pub properties: Vec<PropertyCheck>,
}

impl MedianReport {
    pub fn all_hold(&self) -> bool {
        self.properties.iter().all(|p| p.holds)
    }

    pub fn failed(&self) -> Vec<char> {
        self.properties.iter().filter(|p| !p.holds).map(|p| p.id).collect()
    }

    pub fn get(&self, id: char) -> Option<&PropertyCheck> {
        self.properties.iter().find(|p| p.id == id)
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("property,bound,threshold,measured,margin,holds,mode,trials,violation_bound\n");
        for p in &self.properties {
            let bound = match p.bound {
                Bound::AtMost => "at_most",
                Bound::AtLeast => "at_least",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                p.id,
                bound,
                fmt_g(p.threshold),
                fmt_g(p.measured),
                fmt_g(p.margin),
                p.holds,
                p.mode.label(),
                p.trials.map(|t| t.to_string()).unwrap_or_default(),
                p.violation_bound.map(fmt_g).unwrap_or_default(),
            );
        }
        out
    }
}

/// The quantity a property bounds, over tuples of sets or elements.
#[derive(Debug, Clone, Copy)]
enum Measure {
    /// Size of the union of `t` sets.
    Union(usize),
    /// Elements missed by the union of `t` sets.
    Uncovered(usize),
    /// `|S_t ∩ (S_1 ∪ … ∪ S_{t−1})|`.
    Pool(usize),
    /// `|(S_t ∩ (S_1 ∪ … ∪ S_{t−1})) \ S|` for a further set `S`.
    PoolMinus(usize),
    /// Sets containing `e` but not `e'`.
    Candidates,
    /// Sets not containing `e`.
    Missing,
}

struct Property {
    id: char,
    measure: Measure,
    bound: Bound,
    threshold: f64,
}

fn properties(params: &MedianParams) -> Vec<Property> {
    let (m, n, p0) = (params.m as f64, params.n as f64, params.p0);
    let ln_m = m.ln();
    let prop = |id, measure, bound, threshold| Property {
        id,
        measure,
        bound,
        threshold,
    };
    use Bound::*;
    use Measure::*;
    match params.variant {
        Variant::Simplified => vec![
            prop('a', Union(2), AtMost, n - 1.0),
            prop('b', Uncovered(2), AtMost, 18.0 * ln_m),
            prop('c', Pool(2), AtLeast, n / 8.0),
            prop('d', Candidates, AtLeast, m * (9.0 * ln_m).sqrt() / (4.0 * n.sqrt())),
            prop('e', PoolMinus(2), AtMost, 6.0 * (n * ln_m).sqrt()),
            prop('f', Missing, AtMost, 6.0 * m * (ln_m / n).sqrt()),
        ],
        Variant::General { k, .. } => {
            let kf = k as f64;
            let tail = 1.0 - p0.powi(k as i32 - 1);
            vec![
                prop('a', Union(params.cover_tuple()), AtMost, n - 1.0),
                prop('b', Uncovered(k), AtMost, 2.0 * n * p0.powi(k as i32)),
                prop('c', Candidates, AtLeast, (1.0 - p0) * p0 * m / 2.0),
                prop('d', Pool(k), AtLeast, (1.0 - p0) * tail * n / 2.0),
                prop('e', PoolMinus(k), AtMost, 2.0 * p0 * (1.0 - p0) * tail * n),
                prop('f', Missing, AtMost, (1.0 + 1.0 / kf) * p0 * m),
            ]
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of tuples an exhaustive check of `measure` visits.
fn tuple_count(measure: Measure, m: usize, n: usize) -> f64 {
    // For t = 2 the pool is symmetric, so the designated set need not vary.
    let roles = |t: usize| if t == 2 { 1.0 } else { t as f64 };
    match measure {
        Measure::Union(t) | Measure::Uncovered(t) => binomial(m, t),
        Measure::Pool(t) => binomial(m, t) * roles(t),
        Measure::PoolMinus(t) => binomial(m, t) * roles(t) * m.saturating_sub(t) as f64,
        Measure::Candidates => (n * n.saturating_sub(1)) as f64,
        Measure::Missing => n as f64,
    }
}

pub fn check_median(sys: &SetSystem, params: &MedianParams, mode: CheckMode) -> MedianReport {
    check_median_with(sys, params, mode, &CheckOptions::default())
}

/// Evaluates the six properties. Never fails: violations are reported.
///
/// Property (a) over tuples of more than three sets is always sampled; its
/// random tuples are complemented by the greedy tuple, the most covering
/// choice a simple search finds.
pub fn check_median_with(
    sys: &SetSystem,
    params: &MedianParams,
    mode: CheckMode,
    opts: &CheckOptions,
) -> MedianReport {
    assert_eq!((sys.m(), sys.n()), (params.m, params.n), "shape mismatch");
    let inc = Incidence::new(sys);
    let mut rng = rng::stream(opts.seed, "median-check", 0);
    let properties = properties(params)
        .into_iter()
        .map(|p| {
            let forced_sampled = matches!(p.measure, Measure::Union(t) if t > 3);
            let exact = !forced_sampled
                && match mode {
                    CheckMode::Exact => true,
                    CheckMode::Sampled => false,
                    CheckMode::Auto => {
                        tuple_count(p.measure, params.m, params.n) <= opts.exact_budget as f64
                    }
                };
            if exact {
                let measured = exhaustive(&inc, p.measure, p.bound);
                finish(&p, measured, CheckedBy::Exact, None)
            } else {
                let mut worst = match p.measure {
                    Measure::Union(t) => greedy_union(&inc, t) as f64,
                    _ => match p.bound {
                        Bound::AtMost => f64::NEG_INFINITY,
                        Bound::AtLeast => f64::INFINITY,
                    },
                };
                for _ in 0..opts.trials {
                    let v = sample(&inc, p.measure, &mut rng) as f64;
                    worst = worse(p.bound, worst, v);
                }
                finish(&p, worst, CheckedBy::Sampled, Some(opts.trials))
            }
        })
        .collect();
    MedianReport { properties }
}

fn finish(p: &Property, measured: f64, mode: CheckedBy, trials: Option<u64>) -> PropertyCheck {
    let holds = match p.bound {
        Bound::AtMost => measured <= p.threshold,
        Bound::AtLeast => measured >= p.threshold,
    };
    let violation_bound = match (trials, holds) {
        (Some(t), true) if t > 0 => Some(1.0 - (0.05f64 / 6.0).powf(1.0 / t as f64)),
        _ => None,
    };
    PropertyCheck {
        id: p.id,
        bound: p.bound,
        threshold: p.threshold,
        measured,
        margin: measured - p.threshold,
        holds,
        mode,
        trials,
        violation_bound,
    }
}

fn worse(bound: Bound, a: f64, b: f64) -> f64 {
    match bound {
        Bound::AtMost => a.max(b),
        Bound::AtLeast => a.min(b),
    }
}

fn exhaustive(inc: &Incidence, measure: Measure, bound: Bound) -> f64 {
    let (m, n) = (inc.m(), inc.n());
    let mut worst = match bound {
        Bound::AtMost => f64::NEG_INFINITY,
        Bound::AtLeast => f64::INFINITY,
    };
    let mut see = |v: usize| worst = worse(bound, worst, v as f64);
    match measure {
        Measure::Union(t) | Measure::Uncovered(t) => {
            for combo in (0..m).combinations(t.min(m)) {
                let u = inc.union_of(&combo).count_ones(..);
                see(if matches!(measure, Measure::Union(_)) { u } else { n - u });
            }
        }
        Measure::Pool(t) | Measure::PoolMinus(t) => {
            for combo in (0..m).combinations(t.min(m)) {
                let roles = if combo.len() == 2 { 1 } else { combo.len() };
                for r in 0..roles {
                    let pool = pool_of(inc, &combo, r);
                    let size = pool.count_ones(..);
                    if matches!(measure, Measure::Pool(_)) {
                        see(size);
                    } else {
                        // max over S of |pool \ S| = |pool| − min |pool ∩ S|.
                        let overlap = (0..m)
                            .filter(|s| !combo.contains(s))
                            .map(|s| pool.intersection_count(&inc.rows[s]))
                            .min();
                        if let Some(o) = overlap {
                            see(size - o);
                        }
                    }
                }
            }
        }
        Measure::Candidates => {
            for e in 0..n {
                for f in 0..n {
                    if e != f {
                        see(inc.cols[e].difference_count(&inc.cols[f]));
                    }
                }
            }
        }
        Measure::Missing => {
            for col in &inc.cols {
                see(m - col.count_ones(..));
            }
        }
    }
    worst
}

/// `S_last ∩ ∪ (others)` for the tuple `combo` with designated index `last`.
fn pool_of(inc: &Incidence, combo: &[usize], last: usize) -> FixedBitSet {
    let mut rest = FixedBitSet::with_capacity(inc.n());
    for (i, &s) in combo.iter().enumerate() {
        if i != last {
            rest.union_with(&inc.rows[s]);
        }
    }
    rest.intersect_with(&inc.rows[combo[last]]);
    rest
}

fn sample<R: Rng + ?Sized>(inc: &Incidence, measure: Measure, rng: &mut R) -> usize {
    let (m, n) = (inc.m(), inc.n());
    match measure {
        Measure::Union(t) | Measure::Uncovered(t) => {
            let combo = index::sample(rng, m, t.min(m)).into_vec();
            let u = inc.union_of(&combo).count_ones(..);
            if matches!(measure, Measure::Union(_)) {
                u
            } else {
                n - u
            }
        }
        Measure::Pool(t) => {
            let combo = index::sample(rng, m, t.min(m)).into_vec();
            pool_of(inc, &combo, 0).count_ones(..)
        }
        Measure::PoolMinus(t) => {
            // First draw is the extra set S, second the designated S_t.
            let draw = index::sample(rng, m, (t + 1).min(m)).into_vec();
            let pool = pool_of(inc, &draw[1..], 0);
            pool.difference_count(&inc.rows[draw[0]])
        }
        Measure::Candidates => {
            let pair = index::sample(rng, n, 2);
            inc.cols[pair.index(0)].difference_count(&inc.cols[pair.index(1)])
        }
        Measure::Missing => m - inc.cols[rng.gen_range(0..n)].count_ones(..),
    }
}

/// Coverage of `t` sets chosen greedily by marginal gain.
fn greedy_union(inc: &Incidence, t: usize) -> usize {
    let mut acc = FixedBitSet::with_capacity(inc.n());
    for _ in 0..t.min(inc.m()) {
        let best = (0..inc.m())
            .max_by_key(|&s| (inc.rows[s].difference_count(&acc), std::cmp::Reverse(s)))
            .expect("m >= 1");
        acc.union_with(&inc.rows[best]);
    }
    acc.count_ones(..)
}

#[derive(Debug, Clone)]
pub struct MedianDraw {
    pub system: SetSystem,
    pub report: MedianReport,
    pub attempts: usize,
}

/// Rejection-samples random instances until one passes every property.
pub fn gen_median_instance<R: Rng + ?Sized>(
    params: &MedianParams,
    mode: CheckMode,
    rng: &mut R,
    max_attempts: usize,
) -> Result<MedianDraw, LbError> {
    let mut failed = Vec::new();
    for attempt in 1..=max_attempts {
        let system = gen_random_instance(params.m, params.n, params.p0, rng);
        let opts = CheckOptions {
            seed: rng.gen(),
            ..CheckOptions::default()
        };
        let report = check_median_with(&system, params, mode, &opts);
        if report.all_hold() {
            return Ok(MedianDraw {
                system,
                report,
                attempts: attempt,
            });
        }
        failed = report.failed();
    }
    Err(LbError::ExhaustedAttempts {
        attempts: max_attempts,
        failed,
    })
}
