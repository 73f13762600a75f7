//! Command-line plumbing: instance generation, solver runs, verification,
//! parameter sweeps and lower-bound experiments.
//!
//! Every command is deterministic in `(seed, config, inputs)`. Randomness is
//! drawn from [`rng::stream`](crate::rng::stream) with these labels:
//!
//! | label            | used by                                     |
//! |------------------|---------------------------------------------|
//! | `gen-<kind>`     | `gen` for the requested instance kind       |
//! | `gen-median`     | the median underlying modified/compound/lb  |
//! | `solve`          | the solver of `solve` and of every bench row|
//! | `bench-instance` | generated bench instances                   |
//! | `pcell`, `distinguish` | per-trial lower-bound streams         |
//!
//! CSV output always starts with a header; floats use six significant digits.

pub mod bench;
pub mod cli;
pub mod config;
pub mod gen;
pub mod lb;
pub mod row;
pub mod solve;

use std::path::Path;

use thiserror::Error;

use crate::format::FormatError;
use crate::lowerbound::LbError;
use crate::oracle::QueryError;
use crate::solvers::SolveError;

pub use config::KvConfig;
pub use row::ResultRow;
pub use solve::{run_solver, Algorithm, SolveOutcome};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INFEASIBLE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Lb(#[from] LbError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Solve(SolveError::Infeasible(_)) => EXIT_INFEASIBLE,
            HarnessError::Solve(SolveError::Query(QueryError::BudgetExhausted { .. })) => EXIT_BUDGET,
            HarnessError::Lb(LbError::ExhaustedAttempts { .. } | LbError::Stuck(_)) => EXIT_INFEASIBLE,
            _ => EXIT_USAGE,
        }
    }
}

impl From<crate::planted::PlantedError> for HarnessError {
    fn from(e: crate::planted::PlantedError) -> Self {
        HarnessError::Usage(e.to_string())
    }
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Refuses to overwrite an input instance.
pub(crate) fn guard_output(out: Option<&Path>, input: &Path) -> Result<(), HarnessError> {
    if let Some(o) = out {
        let same = match (o.canonicalize(), input.canonicalize()) {
            (Ok(a), Ok(b)) => a == b,
            _ => o == input,
        };
        if same {
            return Err(HarnessError::Usage(format!(
                "refusing to overwrite input instance {}",
                input.display()
            )));
        }
    }
    Ok(())
}

/// Serializes records with a header row.
pub(crate) fn csv_text<I, R>(header: &[&str], rows: I) -> Result<String, HarnessError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv fields are utf-8"))
}
