//! Lower-bound experiments as CSV.

use crate::lowerbound::distinguish::{distinguisher_experiment, DistinguishResult, Mixture, Strategy};
use crate::lowerbound::modify::{estimate_p_elt_set, PCellEstimate};
use crate::numfmt::fmt_g;
use crate::system::SetSystem;

use super::{csv_text, HarnessError};

pub fn parse_strategy(s: &str) -> Result<Strategy, HarnessError> {
    match s {
        "uniform" => Ok(Strategy::UniformRandom),
        "scan" => Ok(Strategy::Scan),
        other => Err(HarnessError::Usage(format!("unknown strategy `{other}` (uniform or scan)"))),
    }
}

/// The cell-frequency ceiling `4800 ln m / (mn)` the estimate is held to.
pub fn pcell_bound(m: usize, n: usize) -> f64 {
    4800.0 * (m as f64).ln() / (m as f64 * n as f64)
}

/// Whether every touched cell is an incidence of the median.
pub fn zero_outside(est: &PCellEstimate, median: &SetSystem) -> bool {
    est.nonzero().all(|(e, s, _)| median.contains(s, e))
}

pub const PCELL_SUMMARY_COLUMNS: &[&str] = &[
    "m",
    "n",
    "trials",
    "mean_swaps",
    "total_mass",
    "max_frequency",
    "max_element",
    "max_set",
    "bound",
    "within_bound",
    "zero_outside_median",
];

pub struct PCellRun {
    pub estimate: PCellEstimate,
    /// One-line summary CSV.
    pub summary: String,
}

pub fn pcell(median: &SetSystem, trials: u64, seed: u64) -> Result<PCellRun, HarnessError> {
    let est = estimate_p_elt_set(median, trials, seed)?;
    let bound = pcell_bound(median.m(), median.n());
    let (e, s, f) = est
        .max()
        .map(|(e, s, f)| (e.0.to_string(), s.0.to_string(), f))
        .unwrap_or_else(|| (String::new(), String::new(), 0.0));
    let row = vec![
        median.m().to_string(),
        median.n().to_string(),
        trials.to_string(),
        fmt_g(est.mean_swaps()),
        fmt_g(est.total_mass()),
        fmt_g(f),
        e,
        s,
        fmt_g(bound),
        (f <= bound).to_string(),
        zero_outside(&est, median).to_string(),
    ];
    let summary = csv_text(PCELL_SUMMARY_COLUMNS, [row])?;
    Ok(PCellRun { estimate: est, summary })
}

pub const DISTINGUISH_COLUMNS: &[&str] = &[
    "experiment",
    "strategy",
    "q",
    "trials",
    "correct",
    "accuracy",
    "ci_low",
    "ci_high",
];

/// One row per budget in `qs`.
pub fn distinguish(
    mixture: Mixture<'_>,
    strategy: Strategy,
    qs: &[u64],
    trials: u64,
    seed: u64,
) -> Result<(Vec<DistinguishResult>, String), HarnessError> {
    if qs.is_empty() {
        return Err(HarnessError::Usage("need at least one query budget --q".into()));
    }
    let name = match mixture {
        Mixture::MedianVsModified(_) => "distinguish-median",
        Mixture::SlabYesNo { .. } => "distinguish-slab",
    };
    let mut results = Vec::with_capacity(qs.len());
    for &q in qs {
        results.push(distinguisher_experiment(mixture, strategy, q, trials, seed)?);
    }
    let rows = qs.iter().zip(&results).map(|(q, r)| {
        let mut f = vec![name.to_string(), strategy.label().to_string(), q.to_string()];
        f.extend(r.csv_fields().split(',').map(str::to_string));
        f
    });
    let text = csv_text(DISTINGUISH_COLUMNS, rows)?;
    Ok((results, text))
}
