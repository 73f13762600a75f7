//! `subcover` argument parsing and dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cover::{Cover, Provenance};
use crate::format::{read_instance, InstanceFile};
use crate::lowerbound::distinguish::Mixture;
use crate::oracle::{verify_cover_naive, Oracle, QueryError};
use crate::solvers::Status;
use crate::system::SetId;

use super::bench::{run_bench, summary_path, ExperimentSpec};
use super::gen::{generate, median_source, report_path, GenKind, GenParams};
use super::lb::{distinguish, parse_strategy, pcell};
use super::{csv_text, emit, guard_output, run_solver, Algorithm, HarnessError, KvConfig, ResultRow};
use super::{EXIT_BUDGET, EXIT_INFEASIBLE, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "subcover", version, about = "Sub-linear query set cover experiments")]
pub struct Cli {
    /// Seed for every random stream of the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat key=value config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Query budget for the oracle.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Add a wall_ms column to result rows (breaks byte-identical reruns).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run a solver and print one result row.
    Solve {
        #[arg(value_enum)]
        algorithm: AlgoArg,
        instance: PathBuf,
    },
    /// Check whether given sets cover the universe by reading them in full.
    Verify(VerifyArgs),
    /// Run a sweep described by a TOML spec.
    Bench { spec: PathBuf },
    /// Lower-bound experiments.
    Lb(LbArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgoArg {
    Greedy,
    Small,
    Large,
    Auto,
    Brute,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Greedy => Algorithm::Greedy,
            AlgoArg::Small => Algorithm::Small,
            AlgoArg::Large => Algorithm::Large,
            AlgoArg::Auto => Algorithm::Auto,
            AlgoArg::Brute => Algorithm::Brute,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Random,
    Planted,
    Median,
    Modified,
    Compound,
    Slab,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Random => GenKind::Random,
            KindArg::Planted => GenKind::Planted,
            KindArg::Median => GenKind::Median,
            KindArg::Modified => GenKind::Modified,
            KindArg::Compound => GenKind::Compound,
            KindArg::Slab => GenKind::Slab,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Planted optimum, slab query-block size, or sets in the modified cover.
    #[arg(long)]
    pub k: Option<usize>,
    /// Incidence density of random instances.
    #[arg(long)]
    pub p: Option<f64>,
    /// Slab answer: yes or no.
    #[arg(long)]
    pub label: Option<String>,
    /// Compound part count.
    #[arg(long)]
    pub t: Option<usize>,
    /// Median instance to modify or compound instead of drawing one.
    #[arg(long)]
    pub from: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    /// File of set ids separated by whitespace or commas; `#` starts a comment.
    #[arg(long, conflicts_with_all = ["sets", "query_cover"])]
    pub cover: Option<PathBuf>,
    /// Comma-separated set ids.
    #[arg(long, value_delimiter = ',', conflicts_with = "query_cover")]
    pub sets: Option<Vec<u32>>,
    /// Use the instance's META query_cover (slab instances).
    #[arg(long)]
    pub query_cover: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LbExperiment {
    Pcell,
    DistinguishMedian,
    DistinguishSlab,
}

#[derive(Debug, Args)]
pub struct LbArgs {
    #[arg(value_enum)]
    pub experiment: LbExperiment,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Slab query-block size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Median instance file instead of a fresh draw.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// uniform or scan.
    #[arg(long, default_value = "uniform")]
    pub strategy: String,
    /// Query budgets, comma-separated; one output row each.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
}

fn load_config(path: Option<&Path>) -> Result<KvConfig, HarnessError> {
    path.map_or_else(|| Ok(KvConfig::default()), KvConfig::load)
}

fn meta_usize(file: &InstanceFile, key: &str) -> Option<usize> {
    file.meta(key).and_then(|v| v.parse().ok())
}

fn parse_ids(text: &str) -> Result<Vec<SetId>, HarnessError> {
    text.lines()
        .flat_map(|l| l.split('#').next().unwrap_or("").split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map(SetId)
                .map_err(|_| HarnessError::Usage(format!("bad set id `{t}`")))
        })
        .collect()
}

/// Runs the command and returns the process exit code.
pub fn run(cli: Cli) -> Result<u8, HarnessError> {
    let out = cli.out.as_deref();
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Gen(a) => {
            if let Some(from) = &a.from {
                guard_output(out, from)?;
            }
            let params = GenParams {
                m: a.m,
                n: a.n,
                k: a.k,
                p: a.p,
                label: a.label,
                t: a.t,
                from: a.from,
                config: cfg,
            };
            let g = generate(a.kind.into(), &params, cli.seed)?;
            emit(out, &g.file.to_text())?;
            if let (Some(report), Some(path)) = (&g.report, out) {
                std::fs::write(report_path(path), report.to_csv())?;
            }
            Ok(EXIT_OK)
        }
        Command::Solve { algorithm, instance } => {
            guard_output(out, &instance)?;
            let file = read_instance(&instance)?;
            let config = cfg.solver_config()?;
            let algo: Algorithm = algorithm.into();
            let outcome = run_solver(&file.system, algo, &config, cli.budget, cli.seed)?;
            let row = outcome.to_row(
                &instance.display().to_string(),
                algo,
                cli.seed,
                &file.system,
                meta_usize(&file, "k"),
                meta_usize(&file, "opt"),
                &config,
                cli.budget,
            );
            emit(out, &ResultRow::to_csv(&[row], cli.timing)?)?;
            Ok(match outcome.status {
                Status::BudgetExhausted => EXIT_BUDGET,
                _ if outcome.feasible => EXIT_OK,
                _ => EXIT_INFEASIBLE,
            })
        }
        Command::Verify(a) => {
            guard_output(out, &a.instance)?;
            let file = read_instance(&a.instance)?;
            let ids = if let Some(path) = &a.cover {
                parse_ids(&std::fs::read_to_string(path)?)?
            } else if let Some(sets) = a.sets {
                sets.into_iter().map(SetId).collect()
            } else if a.query_cover {
                let list = file
                    .meta("query_cover")
                    .ok_or_else(|| HarnessError::Usage("instance has no META query_cover".into()))?;
                parse_ids(list)?
            } else {
                return Err(HarnessError::Usage("give --cover, --sets or --query-cover".into()));
            };
            let cover = Cover::checked(ids, file.system.m(), Provenance::Given)
                .map_err(|e| HarnessError::Usage(e.to_string()))?;
            let mut oracle = Oracle::with_budget(&file.system, cli.budget);
            let (status, covered, witness, code) = match verify_cover_naive(&mut oracle, &cover) {
                Ok(v) if v.covered => ("covered", "true", String::new(), EXIT_OK),
                Ok(v) => (
                    "uncovered",
                    "false",
                    v.witness.map(|w| w.0.to_string()).unwrap_or_default(),
                    EXIT_INFEASIBLE,
                ),
                Err(QueryError::BudgetExhausted { .. }) => ("budget-exhausted", "", String::new(), EXIT_BUDGET),
                Err(e) => return Err(HarnessError::Usage(e.to_string())),
            };
            let c = oracle.counts();
            let text = csv_text(
                &["status", "covered", "witness", "cover_size", "elt_of_queries", "set_of_queries", "total_queries"],
                [vec![
                    status.to_string(),
                    covered.to_string(),
                    witness,
                    cover.len().to_string(),
                    c.elt_of.to_string(),
                    c.set_of.to_string(),
                    c.total().to_string(),
                ]],
            )?;
            emit(out, &text)?;
            Ok(code)
        }
        Command::Bench { spec } => {
            let parsed = ExperimentSpec::load(&spec)?;
            let target = out
                .map(Path::to_path_buf)
                .or_else(|| parsed.output.clone())
                .ok_or_else(|| HarnessError::Usage("bench needs --out or `output` in the spec".into()))?;
            if let Some(path) = &parsed.instance.path {
                guard_output(Some(&target), path)?;
            }
            let result = run_bench(&parsed)?;
            std::fs::write(&target, ResultRow::to_csv(&result.rows, cli.timing)?)?;
            std::fs::write(summary_path(&target), &result.summary)?;
            Ok(EXIT_OK)
        }
        Command::Lb(a) => {
            if let Some(from) = &a.from {
                guard_output(out, from)?;
            }
            let median_params = GenParams {
                m: a.m,
                n: a.n,
                from: a.from.clone(),
                config: cfg,
                ..GenParams::default()
            };
            match a.experiment {
                LbExperiment::Pcell => {
                    let (median, _) = median_source(&median_params, cli.seed)?;
                    let run = pcell(&median, a.trials.unwrap_or(10_000), cli.seed)?;
                    if let Some(path) = out {
                        std::fs::write(path, run.estimate.to_csv())?;
                    }
                    emit(None, &run.summary)?;
                }
                LbExperiment::DistinguishMedian => {
                    let (median, _) = median_source(&median_params, cli.seed)?;
                    let strategy = parse_strategy(&a.strategy)?;
                    let (_, text) = distinguish(
                        Mixture::MedianVsModified(&median),
                        strategy,
                        &a.q,
                        a.trials.unwrap_or(1000),
                        cli.seed,
                    )?;
                    emit(out, &text)?;
                }
                LbExperiment::DistinguishSlab => {
                    let n = a.n.ok_or_else(|| HarnessError::Usage("distinguish-slab needs --n".into()))?;
                    let k = a.k.ok_or_else(|| HarnessError::Usage("distinguish-slab needs --k".into()))?;
                    let strategy = parse_strategy(&a.strategy)?;
                    let (_, text) = distinguish(
                        Mixture::SlabYesNo { n, k },
                        strategy,
                        &a.q,
                        a.trials.unwrap_or(1000),
                        cli.seed,
                    )?;
                    emit(out, &text)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
