//! Set cover solvers.
//!
//! `greedy` is the ρ-approximate offline black box and `brute` the exact
//! test oracle. The sub-linear algorithms (`small`, `large`, `combined`)
//! only touch the instance through an [`Oracle`](crate::oracle::Oracle), so
//! their query counts are exact.

pub mod brute;
pub mod combined;
pub mod config;
pub mod greedy;
pub mod large;
mod memo;
pub mod offline;
pub mod sampling;
pub mod small;

use thiserror::Error;

use crate::cover::Cover;
use crate::oracle::{QueryCounts, QueryError};

pub use brute::{brute_force_min_cover, ExactCover, BRUTE_FORCE_MAX_SETS};
pub use combined::sublinear_set_cover;
pub use config::{guess_grid, harmonic, ConfigError, RhoMode, SolverConfig};
pub use greedy::{greedy_cover, greedy_full};
pub use large::large_set_cover;
pub use offline::offline_sc;
pub use sampling::{element_sample, set_sample, SetSample};
pub use small::{iter_set_cover, small_set_cover};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("brute force supports at most {cap} sets, instance has {m}")]
    TooLarge { m: usize, cap: usize },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

impl From<ConfigError> for SolveError {
    fn from(e: ConfigError) -> Self {
        SolveError::Invalid(e.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Infeasible,
    BudgetExhausted,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
            Status::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// Which algorithm the combined solver finished with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Small,
    Large,
}

impl Route {
    pub fn label(self) -> &'static str {
        match self {
            Route::Small => "small",
            Route::Large => "large",
        }
    }
}

/// Coarse execution trace, one entry per algorithmic step.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Guess(usize),
    SetSample { sets: usize, uncovered_after: usize },
    ElementSample { requested: usize, drawn: usize },
    Offline { elements: usize, cover: Option<usize> },
    FeasibilityTest { remaining: usize, threshold: f64, passed: bool },
    SizeTest { threshold: usize, rare: usize },
    Fallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub cover: Option<Cover>,
    pub counts: QueryCounts,
    /// Guesses ℓ of the final phase, in the order tried.
    pub guesses_tried: Vec<usize>,
    /// Size of the stage-one cover, for the two-stage solvers.
    pub stage_one_size: Option<usize>,
    pub route: Option<Route>,
    /// Set when the solver fell back to a full materialization (large) or
    /// to its stage-one cover (small).
    pub fallback: bool,
    pub status: Status,
    pub trace: Vec<Step>,
}

impl RunReport {
    pub(crate) fn empty() -> Self {
        RunReport {
            cover: None,
            counts: QueryCounts::default(),
            guesses_tried: Vec::new(),
            stage_one_size: None,
            route: None,
            fallback: false,
            status: Status::Infeasible,
            trace: Vec::new(),
        }
    }

    pub fn cover_size(&self) -> Option<usize> {
        self.cover.as_ref().map(Cover::len)
    }

    /// Records a query error as budget exhaustion. Other query errors are
    /// argument bugs in the solver and panic.
    pub(crate) fn absorb(&mut self, err: QueryError) {
        match err {
            QueryError::BudgetExhausted { .. } => {
                self.cover = None;
                self.status = Status::BudgetExhausted;
            }
            other => panic!("solver issued a malformed query: {other}"),
        }
    }
}
