//! The large-k algorithm.
//!
//! Guesses ℓ are tried in decreasing order. For each guess, `⌈εℓ/3⌉` random
//! sets handle the frequent elements; one SetOf probe per element at position
//! `⌈c m ln n / (εℓ)⌉` detects the rare ones, whose set lists are read in
//! full and handed to greedy. The first guess whose greedy cover exceeds
//! `ρℓ` ends the search and the previous guess's solution is returned.
//!
//! The random part is never read, so the output covers the universe only
//! with the probability that Set Sampling succeeds.

use rand::Rng;

use crate::cover::{Cover, Provenance};
use crate::oracle::{Oracle, QueryError};
use crate::system::ElemId;

use super::config::{guess_grid, SolverConfig};
use super::greedy::greedy_cover;
use super::memo::Reader;
use super::offline::materialize;
use super::sampling::pick_sets;
use super::{RunReport, SolveError, Status, Step};

pub fn large_set_cover<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    config: &SolverConfig,
    rng: &mut R,
) -> Result<RunReport, SolveError> {
    config.validate()?;
    let mut report = RunReport::empty();
    if let Err(e) = large_core(&mut Reader::new(oracle), config, rng, &mut report) {
        report.absorb(e);
    }
    report.counts = oracle.counts();
    Ok(report)
}

/// Size-test position for guess `ell`.
pub fn size_test_position(m: usize, n: usize, eps: f64, c_set: f64, ell: usize) -> usize {
    let ln_n = (n.max(2) as f64).ln();
    ((c_set * m as f64 * ln_n) / (eps * ell as f64)).ceil().max(1.0) as usize
}

pub(crate) fn large_core<R: Rng + ?Sized>(
    oracle: &mut Reader<'_, '_>,
    config: &SolverConfig,
    rng: &mut R,
    report: &mut RunReport,
) -> Result<(), QueryError> {
    let (m, n) = (oracle.m(), oracle.n());
    let eps = config.eps;
    let step = eps / (3.0 * config.rho_mode.rho(n));
    let mut grid = guess_grid(1, n.max(1), step);
    grid.reverse();

    let mut last: Option<Cover> = None;
    for ell in grid {
        report.guesses_tried.push(ell);
        report.trace.push(Step::Guess(ell));
        let rnd_count = ((eps * ell as f64) / 3.0).ceil() as usize;
        let rnd = pick_sets(m, rnd_count, rng);

        let threshold = size_test_position(m, n, eps, config.c_set, ell);
        let mut rare: Vec<ElemId> = Vec::new();
        for e in (0..n).map(ElemId::from_index) {
            if oracle.set_of(e, threshold)?.is_none() {
                rare.push(e);
            }
        }
        report.trace.push(Step::SizeTest {
            threshold,
            rare: rare.len(),
        });
        let family = materialize(oracle, &rare)?;
        let d = match greedy_cover(&rare, &family) {
            Ok(d) => d,
            Err(_) => {
                // A rare element in no set: nothing covers the universe.
                report.status = Status::Infeasible;
                return Ok(());
            }
        };
        let rho = if rare.is_empty() {
            1.0
        } else {
            config.rho_mode.rho(rare.len())
        };
        report.trace.push(Step::Offline {
            elements: rare.len(),
            cover: Some(d.len()),
        });
        if d.len() as f64 <= rho * ell as f64 {
            let mut sol = Cover::new(rnd, Provenance::LargeSc);
            sol.extend_distinct(d.set_ids().iter().copied());
            last = Some(sol);
            continue;
        }
        break;
    }

    match last {
        Some(sol) => {
            report.cover = Some(sol);
            report.status = Status::Ok;
        }
        None => {
            // Even ℓ ≥ n failed; read the whole instance instead.
            report.fallback = true;
            report.trace.push(Step::Fallback);
            let all: Vec<ElemId> = (0..n).map(ElemId::from_index).collect();
            let family = materialize(oracle, &all)?;
            match greedy_cover(&all, &family) {
                Ok(c) => {
                    report.cover = Some(c.with_provenance(Provenance::LargeSc));
                    report.status = Status::Ok;
                }
                Err(_) => report.status = Status::Infeasible,
            }
        }
    }
    Ok(())
}
