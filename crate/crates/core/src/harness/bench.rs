//! Parameter sweeps from a TOML spec.
//!
//! ```toml
//! name = "large-trend"
//! algorithm = "large"          # greedy | small | large | auto | brute
//! seeds = [1, 2, 3]
//! output = "large.csv"         # optional; --out wins
//!
//! [instance]
//! kind = "planted"             # planted | random | file
//! m = 1024
//! n = 1024
//! k = 32                       # planted
//! # p = 0.3                    # random: incidence density
//! # path = "inst.txt"          # file
//!
//! [config]                     # any solver key of the flat config format
//! eps = 0.5
//!
//! [sweep]                      # any of m, n, k, eps, alpha, q
//! k = [32, 64, 128, 256]
//! ```
//!
//! Cells are the Cartesian product of the sweep lists, varying in the order
//! `m, n, k, eps, alpha, q` with `q` fastest. Each (cell, seed) pair yields
//! one [`ResultRow`]; rows come out in (cell, seed) order whatever order the
//! work pool finishes them in. The instance for a seed is drawn from stream
//! `("bench-instance", 0)` and the solver from `("solve", 0)`, so a bench row
//! matches `subcover solve` on the same instance and seed.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::format::read_instance;
use crate::lowerbound::median::gen_random_instance;
use crate::numfmt::fmt_g;
use crate::planted::gen_planted;
use crate::rng;
use crate::solvers::SolverConfig;
use crate::system::SetSystem;

use super::{csv_text, Algorithm, HarnessError, KvConfig, ResultRow};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub algorithm: String,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub instance: InstanceSpec,
    #[serde(default)]
    pub config: BTreeMap<String, toml::Value>,
    #[serde(default)]
    pub sweep: Sweep,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub kind: String,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub m: Option<Vec<usize>>,
    pub n: Option<Vec<usize>>,
    pub k: Option<Vec<usize>>,
    pub eps: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub q: Option<Vec<u64>>,
}

/// One grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub config: SolverConfig,
    pub q: Option<u64>,
}

fn axis<T: Clone>(name: &str, sweep: &Option<Vec<T>>, base: Option<T>) -> Result<Vec<Option<T>>, HarnessError> {
    match sweep {
        Some(v) if v.is_empty() => Err(HarnessError::Usage(format!("sweep grid `{name}` is empty"))),
        Some(v) => Ok(v.iter().cloned().map(Some).collect()),
        None => Ok(vec![base]),
    }
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| HarnessError::Usage(format!("bench spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), HarnessError> {
        self.algorithm.parse::<Algorithm>()?;
        if self.seeds.is_empty() {
            return Err(HarnessError::Usage("bench spec needs at least one seed".into()));
        }
        let distinct: HashSet<u64> = self.seeds.iter().copied().collect();
        if distinct.len() != self.seeds.len() {
            return Err(HarnessError::Usage("bench seeds must be distinct".into()));
        }
        if !["planted", "random", "file"].contains(&self.instance.kind.as_str()) {
            return Err(HarnessError::Usage(format!(
                "bench instance kind must be planted, random or file, got `{}`",
                self.instance.kind
            )));
        }
        self.cells().map(|_| ())
    }

    fn base_config(&self) -> Result<KvConfig, HarnessError> {
        let text: String = self
            .config
            .iter()
            .map(|(k, v)| match v {
                toml::Value::String(s) => format!("{k}={s}\n"),
                other => format!("{k}={other}\n"),
            })
            .collect();
        KvConfig::parse(&text)
    }

    pub fn cells(&self) -> Result<Vec<Cell>, HarnessError> {
        let kv = self.base_config()?;
        let base = kv.solver_config()?;
        let ms = axis("m", &self.sweep.m, self.instance.m)?;
        let ns = axis("n", &self.sweep.n, self.instance.n)?;
        let ks = axis("k", &self.sweep.k, self.instance.k)?;
        let epss = axis("eps", &self.sweep.eps, Some(base.eps))?;
        let alphas = axis("alpha", &self.sweep.alpha, Some(base.alpha))?;
        let qs = axis("q", &self.sweep.q, None)?;
        let mut cells = Vec::new();
        for &m in &ms {
            for &n in &ns {
                for &k in &ks {
                    for &eps in &epss {
                        for &alpha in &alphas {
                            for &q in &qs {
                                let config = SolverConfig {
                                    eps: eps.expect("defaulted"),
                                    alpha: alpha.expect("defaulted"),
                                    ..base.clone()
                                };
                                config.validate().map_err(|e| HarnessError::Usage(e.to_string()))?;
                                cells.push(Cell { m, n, k, config, q });
                            }
                        }
                    }
                }
            }
        }
        Ok(cells)
    }
}

fn build_instance(spec: &InstanceSpec, cell: &Cell, seed: u64) -> Result<(SetSystem, Option<usize>), HarnessError> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| HarnessError::Usage(format!("bench instance needs `{name}`")))
    };
    let mut rng = rng::stream(seed, "bench-instance", 0);
    match spec.kind.as_str() {
        "planted" => {
            let (m, n, k) = (need(cell.m, "m")?, need(cell.n, "n")?, need(cell.k, "k")?);
            Ok((gen_planted(m, n, k, &mut rng)?.system, Some(k)))
        }
        "random" => {
            let (m, n) = (need(cell.m, "m")?, need(cell.n, "n")?);
            Ok((gen_random_instance(m, n, 1.0 - spec.p.unwrap_or(0.5), &mut rng), None))
        }
        _ => unreachable!("validated"),
    }
}

pub struct BenchOutput {
    pub rows: Vec<ResultRow>,
    pub summary: String,
}

/// Runs every (cell, seed) job. A job whose instance cannot be built (say
/// `k > m` in some cell) or whose solver rejects its arguments yields an
/// `error` row; the sweep carries on.
pub fn run_bench(spec: &ExperimentSpec) -> Result<BenchOutput, HarnessError> {
    let algo: Algorithm = spec.algorithm.parse()?;
    let cells = spec.cells()?;
    let file = match (spec.instance.kind.as_str(), &spec.instance.path) {
        ("file", Some(p)) => Some(read_instance(p)?),
        ("file", None) => return Err(HarnessError::Usage("file instances need `path`".into())),
        _ => None,
    };
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| spec.seeds.iter().map(move |&s| (c, s)))
        .collect();
    let rows: Vec<ResultRow> = jobs
        .par_iter()
        .map(|&(c, seed)| -> Result<ResultRow, HarnessError> {
            let cell = &cells[c];
            let (sys, k, opt, label) = match &file {
                Some(f) => {
                    let opt = f.meta("opt").and_then(|v| v.parse().ok());
                    let k = f.meta("k").and_then(|v| v.parse().ok());
                    (f.system.clone(), k, opt, spec.instance.path.as_ref().unwrap().display().to_string())
                }
                None => match build_instance(&spec.instance, cell, seed) {
                    Ok((sys, k)) => (sys, k, k, spec.instance.kind.clone()),
                    Err(_) => return Ok(error_row(spec, algo, cell, seed)),
                },
            };
            match super::run_solver(&sys, algo, &cell.config, cell.q, seed) {
                Ok(out) => Ok(out.to_row(&label, algo, seed, &sys, k.or(cell.k), opt, &cell.config, cell.q)),
                Err(HarnessError::Solve(_)) => Ok(error_row(spec, algo, cell, seed)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_, _>>()?;
    let summary = summarize(&cells, &rows, spec.seeds.len())?;
    Ok(BenchOutput { rows, summary })
}

fn error_row(spec: &ExperimentSpec, algo: Algorithm, cell: &Cell, seed: u64) -> ResultRow {
    ResultRow {
        instance: spec.instance.kind.clone(),
        algorithm: algo.label().to_string(),
        seed,
        m: cell.m.unwrap_or(0),
        n: cell.n.unwrap_or(0),
        k: cell.k,
        eps: cell.config.eps,
        alpha: cell.config.alpha,
        budget: cell.q,
        elt_of_queries: 0,
        set_of_queries: 0,
        cover_size: None,
        opt_size: None,
        feasible: false,
        status: "error".into(),
        route: None,
        fallback: false,
        wall_ms: None,
    }
}

/// Quantile by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn median_iqr(mut v: Vec<f64>) -> (String, String) {
    if v.is_empty() {
        return (String::new(), String::new());
    }
    v.sort_by(f64::total_cmp);
    let iqr = quantile(&v, 0.75) - quantile(&v, 0.25);
    (fmt_g(quantile(&v, 0.5)), fmt_g(iqr))
}

pub const SUMMARY_COLUMNS: &[&str] = &[
    "cell",
    "m",
    "n",
    "k",
    "eps",
    "alpha",
    "budget",
    "runs",
    "feasible_runs",
    "median_total_queries",
    "iqr_total_queries",
    "median_elt_of_queries",
    "median_set_of_queries",
    "median_cover_size",
    "iqr_cover_size",
];

/// Per-cell median and IQR over the feasible runs.
fn summarize(cells: &[Cell], rows: &[ResultRow], per_cell: usize) -> Result<String, HarnessError> {
    let records = cells.iter().enumerate().map(|(c, cell)| {
        let runs = &rows[c * per_cell..(c + 1) * per_cell];
        let ok: Vec<&ResultRow> = runs.iter().filter(|r| r.feasible).collect();
        let (tq, tq_iqr) = median_iqr(ok.iter().map(|r| r.total_queries() as f64).collect());
        let (eq, _) = median_iqr(ok.iter().map(|r| r.elt_of_queries as f64).collect());
        let (sq, _) = median_iqr(ok.iter().map(|r| r.set_of_queries as f64).collect());
        let (cs, cs_iqr) = median_iqr(ok.iter().filter_map(|r| r.cover_size).map(|x| x as f64).collect());
        let first = &runs[0];
        vec![
            c.to_string(),
            first.m.to_string(),
            first.n.to_string(),
            cell.k.map(|k| k.to_string()).unwrap_or_default(),
            fmt_g(cell.config.eps),
            fmt_g(cell.config.alpha),
            cell.q.map(|q| q.to_string()).unwrap_or_default(),
            runs.len().to_string(),
            ok.len().to_string(),
            tq,
            tq_iqr,
            eq,
            sq,
            cs,
            cs_iqr,
        ]
    });
    csv_text(SUMMARY_COLUMNS, records)
}

/// `<out>` with `.summary.csv` replacing its extension.
pub fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.csv")
}
