//! Running one named solver over a fresh oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::cover::{Cover, Provenance};
use crate::oracle::{covers, Oracle, QueryCounts, QueryError};
use crate::rng;
use crate::solvers::{
    brute_force_min_cover, greedy_cover, large_set_cover, small_set_cover, sublinear_set_cover, RunReport,
    SolveError, SolverConfig, Status, BRUTE_FORCE_MAX_SETS,
};
use crate::system::{ElemId, SetSystem};

use super::{HarnessError, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Reads every set, then runs greedy.
    Greedy,
    Small,
    Large,
    /// Routes between small and large on the stage-one estimate.
    Auto,
    /// Reads every set, then solves exactly.
    Brute,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Small => "small",
            Algorithm::Large => "large",
            Algorithm::Auto => "auto",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "greedy" => Algorithm::Greedy,
            "small" => Algorithm::Small,
            "large" => Algorithm::Large,
            "auto" => Algorithm::Auto,
            "brute" => Algorithm::Brute,
            other => return Err(HarnessError::Usage(format!("unknown algorithm `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub cover: Option<Cover>,
    pub counts: QueryCounts,
    pub status: Status,
    pub route: Option<String>,
    pub fallback: bool,
    /// Optimum established by the run itself (brute force only).
    pub opt: Option<usize>,
    /// Re-verified on a meter-free oracle.
    pub feasible: bool,
    pub wall_ms: f64,
}

fn read_all(oracle: &mut Oracle<'_>) -> Result<BTreeMap<crate::SetId, Vec<ElemId>>, QueryError> {
    let mut family = BTreeMap::new();
    for i in 0..oracle.m() {
        let s = crate::SetId::from_index(i);
        family.insert(s, oracle.enumerate_set(s)?);
    }
    Ok(family)
}

fn from_report(r: RunReport) -> (Option<Cover>, QueryCounts, Status, Option<String>, bool) {
    (r.cover, r.counts, r.status, r.route.map(|x| x.label().to_string()), r.fallback)
}

/// Runs `algo` with solver stream `("solve", 0)` of `seed`. Infeasibility and
/// budget exhaustion are reported in the outcome; only invalid arguments
/// (bad config, brute force above its cap) are errors.
pub fn run_solver(
    sys: &SetSystem,
    algo: Algorithm,
    config: &SolverConfig,
    budget: Option<u64>,
    seed: u64,
) -> Result<SolveOutcome, HarnessError> {
    if algo == Algorithm::Brute && sys.m() > BRUTE_FORCE_MAX_SETS {
        return Err(SolveError::TooLarge {
            m: sys.m(),
            cap: BRUTE_FORCE_MAX_SETS,
        }
        .into());
    }
    let mut rng = rng::stream(seed, "solve", 0);
    let mut oracle = Oracle::with_budget(sys, budget);
    let start = Instant::now();
    let mut opt = None;
    let (cover, counts, status, route, fallback) = match algo {
        Algorithm::Small => from_report(small_set_cover(&mut oracle, config, &mut rng)?),
        Algorithm::Large => from_report(large_set_cover(&mut oracle, config, &mut rng)?),
        Algorithm::Auto => from_report(sublinear_set_cover(&mut oracle, config, &mut rng)?),
        Algorithm::Greedy | Algorithm::Brute => match read_all(&mut oracle) {
            Err(QueryError::BudgetExhausted { .. }) => (None, oracle.counts(), Status::BudgetExhausted, None, false),
            Err(e) => panic!("full read issued a malformed query: {e}"),
            Ok(family) => {
                let solved = if algo == Algorithm::Greedy {
                    let universe: Vec<ElemId> = (0..sys.n()).map(ElemId::from_index).collect();
                    greedy_cover(&universe, &family)
                } else {
                    let rebuilt = SetSystem::from_sets(sys.n(), family.into_values().collect())
                        .expect("rows read from a valid system");
                    brute_force_min_cover(&rebuilt).map(|x| {
                        opt = Some(x.k);
                        x.cover.with_provenance(Provenance::BruteForce)
                    })
                };
                match solved {
                    Ok(c) => (Some(c), oracle.counts(), Status::Ok, None, false),
                    Err(SolveError::Infeasible(_)) => (None, oracle.counts(), Status::Infeasible, None, false),
                    Err(e) => return Err(e.into()),
                }
            }
        },
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let feasible = status == Status::Ok && cover.as_ref().is_some_and(|c| covers(sys, c));
    Ok(SolveOutcome {
        cover,
        counts,
        status,
        route,
        fallback,
        opt,
        feasible,
        wall_ms,
    })
}

impl SolveOutcome {
    #[allow(clippy::too_many_arguments)]
    pub fn to_row(
        &self,
        instance: &str,
        algo: Algorithm,
        seed: u64,
        sys: &SetSystem,
        k: Option<usize>,
        opt_size: Option<usize>,
        config: &SolverConfig,
        budget: Option<u64>,
    ) -> ResultRow {
        ResultRow {
            instance: instance.to_string(),
            algorithm: algo.label().to_string(),
            seed,
            m: sys.m(),
            n: sys.n(),
            k,
            eps: config.eps,
            alpha: config.alpha,
            budget,
            elt_of_queries: self.counts.elt_of,
            set_of_queries: self.counts.set_of,
            cover_size: self.cover.as_ref().map(Cover::len),
            opt_size: self.opt.or(opt_size),
            feasible: self.feasible,
            status: self.status.label().to_string(),
            route: self.route.clone(),
            fallback: self.fallback,
            wall_ms: Some(self.wall_ms),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planted::gen_planted;

    #[test]
    fn every_algorithm_on_a_planted_toy() {
        let p = gen_planted(12, 12, 3, &mut rng::stream(1, "test", 0)).unwrap();
        let cfg = SolverConfig::default();
        for algo in [Algorithm::Greedy, Algorithm::Small, Algorithm::Large, Algorithm::Auto, Algorithm::Brute] {
            let out = run_solver(&p.system, algo, &cfg, None, 4).unwrap();
            assert!(out.feasible, "{algo}");
            assert_eq!(out.status, Status::Ok);
        }
        let brute = run_solver(&p.system, Algorithm::Brute, &cfg, None, 4).unwrap();
        assert_eq!(brute.opt, Some(3));
        let total: u64 = p.system.set_ids().map(|s| p.system.set_size(s) as u64 + 1).sum();
        assert_eq!(brute.counts.elt_of, total);
    }

    #[test]
    fn budget_and_cap() {
        let p = gen_planted(30, 30, 3, &mut rng::stream(1, "test", 0)).unwrap();
        let cfg = SolverConfig::default();
        let out = run_solver(&p.system, Algorithm::Greedy, &cfg, Some(5), 0).unwrap();
        assert_eq!(out.status, Status::BudgetExhausted);
        assert!(!out.feasible);
        assert_eq!(out.counts.total(), 5);
        assert!(matches!(
            run_solver(&p.system, Algorithm::Brute, &cfg, None, 0),
            Err(HarnessError::Solve(SolveError::TooLarge { .. }))
        ));
    }

    #[test]
    fn infeasible_instance() {
        let sys = SetSystem::from_sets(3, vec![vec![ElemId(1)], vec![ElemId(2)]]).unwrap();
        let out = run_solver(&sys, Algorithm::Greedy, &SolverConfig::default(), None, 0).unwrap();
        assert_eq!(out.status, Status::Infeasible);
        assert!(!out.feasible);
    }
}
