//! The small-k algorithm: an iterative core that combines Set Sampling with
//! rounds of Element Sampling, driven by a two-stage search over guesses of
//! the optimum.

use rand::Rng;

use crate::cover::{Cover, Provenance};
use crate::oracle::{Oracle, QueryError};
use crate::system::ElemId;

use super::config::{guess_grid, ln_floor1, SolverConfig};
use super::memo::Reader;
use super::offline::offline_with;
use super::sampling::{element_sample, set_sample_with};
use super::{RunReport, SolveError, Status, Step};

/// Runs the iterative core over guesses `ℓ ∈ [l, u]` in increasing order and
/// returns the first guess whose cover passes the feasibility test. Any
/// returned cover covers the universe: the remainder is tracked exactly.
pub fn iter_set_cover<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    alpha: f64,
    eps: f64,
    l: usize,
    u: usize,
    config: &SolverConfig,
    rng: &mut R,
) -> Result<RunReport, SolveError> {
    config.validate()?;
    check_iter_args(alpha, eps, l, u)?;
    let mut report = RunReport::empty();
    let mut reader = Reader::new(oracle);
    match iter_core(&mut reader, alpha, eps, l, u, config, rng, &mut report.trace) {
        Ok((cover, guesses)) => {
            report.guesses_tried = guesses;
            report.status = if cover.is_some() { Status::Ok } else { Status::Infeasible };
            report.cover = cover.map(|c| c.with_provenance(Provenance::SmallSc));
        }
        Err(e) => report.absorb(e),
    }
    report.counts = oracle.counts();
    Ok(report)
}

fn check_iter_args(alpha: f64, eps: f64, l: usize, u: usize) -> Result<(), SolveError> {
    if !(alpha >= 2.0) {
        return Err(SolveError::Invalid(format!(
            "the iterative core needs alpha >= 2, got {alpha}"
        )));
    }
    if !(eps > 0.0) {
        return Err(SolveError::Invalid(format!("eps must be positive, got {eps}")));
    }
    if l == 0 || l > u {
        return Err(SolveError::Invalid(format!("need 1 <= l <= u, got [{l}, {u}]")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn iter_core<R: Rng + ?Sized>(
    oracle: &mut Reader<'_, '_>,
    alpha: f64,
    eps: f64,
    l: usize,
    u: usize,
    config: &SolverConfig,
    rng: &mut R,
    trace: &mut Vec<Step>,
) -> Result<(Option<Cover>, Vec<usize>), QueryError> {
    let (m, n) = (oracle.m(), oracle.n());
    let rho_n = config.rho_mode.rho(n);
    let step = eps / (2.0 * alpha * rho_n);
    let rounds = (alpha.ceil() as usize).saturating_sub(2);
    let exponent = 1.0 / (alpha - 1.0);
    let mut tried = Vec::new();

    for ell in guess_grid(l, u, step) {
        tried.push(ell);
        trace.push(Step::Guess(ell));
        let ratio = (n as f64 / ell as f64).powf(exponent);

        let sample = set_sample_with(oracle, ell, rng)?;
        let mut sol = Cover::new(sample.picked, Provenance::SmallSc);
        let mut uncovered = vec![true; n];
        for e in &sample.covered {
            uncovered[e.index()] = false;
        }
        let mut remaining = collect(&uncovered);
        trace.push(Step::SetSample {
            sets: sol.len(),
            uncovered_after: remaining.len(),
        });

        let mut gave_up = false;
        for _ in 0..rounds {
            let requested =
                (config.c_elt * rho_n * ell as f64 * ln_floor1(m) * ratio).ceil() as usize;
            let x = element_sample(&remaining, requested, rng);
            trace.push(Step::ElementSample {
                requested,
                drawn: x.len(),
            });
            let d = offline_with(oracle, &x, ell, config.rho_mode)?;
            trace.push(Step::Offline {
                elements: x.len(),
                cover: d.as_ref().map(Cover::len),
            });
            let Some(d) = d else {
                gave_up = true;
                break;
            };
            for &s in d.set_ids() {
                for &e in oracle.enumerate_set(s)? {
                    uncovered[e.index()] = false;
                }
            }
            sol.extend_distinct(d.set_ids().iter().copied());
            remaining = collect(&uncovered);
        }
        if gave_up {
            continue;
        }

        let threshold = config.feasibility_slack * ell as f64 * ratio;
        let passed = remaining.len() as f64 <= threshold;
        trace.push(Step::FeasibilityTest {
            remaining: remaining.len(),
            threshold,
            passed,
        });
        if !passed {
            continue;
        }
        let d = offline_with(oracle, &remaining, ell, config.rho_mode)?;
        trace.push(Step::Offline {
            elements: remaining.len(),
            cover: d.as_ref().map(Cover::len),
        });
        if let Some(d) = d {
            sol.extend_distinct(d.set_ids().iter().copied());
            return Ok((Some(sol), tried));
        }
    }
    Ok((None, tried))
}

fn collect(uncovered: &[bool]) -> Vec<ElemId> {
    uncovered
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| ElemId::from_index(i))
        .collect()
}

/// Stage one: the iterative core with `α₁ = max(2, ⌈ln n⌉)`, `ε = 1` over
/// `[1, n]`, giving a rough estimate `k'` of the optimum.
pub(crate) fn stage_one<R: Rng + ?Sized>(
    oracle: &mut Reader<'_, '_>,
    config: &SolverConfig,
    rng: &mut R,
    trace: &mut Vec<Step>,
) -> Result<Option<Cover>, QueryError> {
    let n = oracle.n().max(1);
    let alpha1 = (n as f64).ln().ceil().max(2.0);
    let (cover, _) = iter_core(oracle, alpha1, 1.0, 1, n, config, rng, trace)?;
    Ok(cover)
}

/// Stage-two search range `[max(1, ⌊k'/(ρ ln n)⌋), ⌈k'(1 + ε/(2αρ))⌉]`.
pub(crate) fn stage_two_range(k_prime: usize, n: usize, config: &SolverConfig) -> (usize, usize) {
    let rho = config.rho_mode.rho(n);
    let lo = ((k_prime as f64) / (rho * ln_floor1(n))).floor() as usize;
    let hi = ((k_prime as f64) * (1.0 + config.eps / (2.0 * config.alpha * rho))).ceil() as usize;
    let lo = lo.max(1);
    (lo, hi.max(lo))
}

/// Two-stage small-k solver. If stage two finds nothing in its range the
/// stage-one cover is returned and `fallback` is set.
pub fn small_set_cover<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    config: &SolverConfig,
    rng: &mut R,
) -> Result<RunReport, SolveError> {
    config.validate()?;
    check_iter_args(config.alpha, config.eps, 1, 1)?;
    let mut report = RunReport::empty();
    let mut reader = Reader::new(oracle);
    let oracle = &mut reader;
    let result = (|| -> Result<(), QueryError> {
        let Some(first) = stage_one(oracle, config, rng, &mut report.trace)? else {
            report.status = Status::Infeasible;
            return Ok(());
        };
        report.stage_one_size = Some(first.len());
        let (lo, hi) = stage_two_range(first.len(), oracle.n(), config);
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
        Ok(())
    })();
    if let Err(e) = result {
        report.absorb(e);
    }
    if let Some(c) = report.cover.take() {
        report.cover = Some(c.with_provenance(Provenance::SmallSc));
    }
    report.counts = reader.counts();
    Ok(report)
}
