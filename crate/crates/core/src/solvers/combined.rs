use rand::Rng;

use crate::cover::Provenance;
use crate::oracle::{Oracle, QueryError};

use super::config::SolverConfig;
use super::large::large_core;
use super::memo::Reader;
use super::small::{iter_core, stage_one, stage_two_range};
use super::{Route, RunReport, SolveError, Status};

/// Runs the small-k stage one to estimate `k'`, then finishes with the
/// large-k algorithm when `k' >= √m` and with small-k stage two otherwise.
/// All queries from both phases are charged to the same oracle.
pub fn sublinear_set_cover<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    config: &SolverConfig,
    rng: &mut R,
) -> Result<RunReport, SolveError> {
    config.validate()?;
    if config.alpha < 2.0 {
        return Err(SolveError::Invalid(format!(
            "the iterative core needs alpha >= 2, got {}",
            config.alpha
        )));
    }
    let mut report = RunReport::empty();
    let mut reader = Reader::new(oracle);
    let oracle = &mut reader;
    let result = (|| -> Result<(), QueryError> {
        let Some(first) = stage_one(oracle, config, rng, &mut report.trace)? else {
            report.status = Status::Infeasible;
            return Ok(());
        };
        let k_prime = first.len();
        report.stage_one_size = Some(k_prime);
        if (k_prime as f64) >= (oracle.m() as f64).sqrt() {
            report.route = Some(Route::Large);
            large_core(oracle, config, rng, &mut report)?;
        } else {
            report.route = Some(Route::Small);
            let (lo, hi) = stage_two_range(k_prime, oracle.n(), config);
            let (second, tried) = iter_core(
                oracle,
                config.alpha,
                config.eps,
                lo,
                hi,
                config,
                rng,
                &mut report.trace,
            )?;
            report.guesses_tried = tried;
            report.cover = Some(match second {
                Some(c) => c,
                None => {
                    report.fallback = true;
                    first
                }
            });
            report.status = Status::Ok;
        }
        Ok(())
    })();
    if let Err(e) = result {
        report.absorb(e);
    }
    if let Some(c) = report.cover.take() {
        report.cover = Some(c.with_provenance(Provenance::Sublinear));
    }
    report.counts = reader.counts();
    Ok(report)
}
