//! One solver run as a CSV row.
//!
//! Columns, in order:
//!
//! | column           | meaning                                            |
//! |------------------|----------------------------------------------------|
//! | `instance`       | file path or generator name                        |
//! | `algorithm`      | greedy, small, large, auto or brute                |
//! | `seed`           | solver seed                                        |
//! | `m`, `n`         | instance shape                                     |
//! | `k`              | planted/generator k, empty when unknown            |
//! | `eps`, `alpha`   | solver configuration                               |
//! | `budget`         | query budget, empty when unlimited                 |
//! | `elt_of_queries`, `set_of_queries`, `total_queries` | exact counts    |
//! | `cover_size`     | empty when no cover was returned                   |
//! | `opt_size`       | known optimum, empty when unknown                  |
//! | `feasible`       | the cover re-verifies against the instance         |
//! | `status`         | ok, infeasible, budget-exhausted or error          |
//! | `route`          | small/large for `auto`, else empty                 |
//! | `fallback`       | the solver fell back to a safe answer              |
//! | `wall_ms`        | only with `--timing`                               |

use crate::numfmt::fmt_g;

use super::{csv_text, HarnessError};

pub const COLUMNS: &[&str] = &[
    "instance",
    "algorithm",
    "seed",
    "m",
    "n",
    "k",
    "eps",
    "alpha",
    "budget",
    "elt_of_queries",
    "set_of_queries",
    "total_queries",
    "cover_size",
    "opt_size",
    "feasible",
    "status",
    "route",
    "fallback",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub k: Option<usize>,
    pub eps: f64,
    pub alpha: f64,
    pub budget: Option<u64>,
    pub elt_of_queries: u64,
    pub set_of_queries: u64,
    pub cover_size: Option<usize>,
    pub opt_size: Option<usize>,
    pub feasible: bool,
    pub status: String,
    pub route: Option<String>,
    pub fallback: bool,
    pub wall_ms: Option<f64>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl ResultRow {
    pub fn total_queries(&self) -> u64 {
        self.elt_of_queries + self.set_of_queries
    }

    pub fn fields(&self, timing: bool) -> Vec<String> {
        let mut f = vec![
            self.instance.clone(),
            self.algorithm.clone(),
            self.seed.to_string(),
            self.m.to_string(),
            self.n.to_string(),
            opt(&self.k),
            fmt_g(self.eps),
            fmt_g(self.alpha),
            opt(&self.budget),
            self.elt_of_queries.to_string(),
            self.set_of_queries.to_string(),
            self.total_queries().to_string(),
            opt(&self.cover_size),
            opt(&self.opt_size),
            self.feasible.to_string(),
            self.status.clone(),
            opt(&self.route),
            self.fallback.to_string(),
        ];
        if timing {
            f.push(self.wall_ms.map(fmt_g).unwrap_or_default());
        }
        f
    }

    pub fn header(timing: bool) -> Vec<&'static str> {
        let mut h = COLUMNS.to_vec();
        if timing {
            h.push("wall_ms");
        }
        h
    }

    pub fn to_csv(rows: &[ResultRow], timing: bool) -> Result<String, HarnessError> {
        csv_text(&Self::header(timing), rows.iter().map(|r| r.fields(timing)))
    }
}
