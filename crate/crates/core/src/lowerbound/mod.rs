//! Hard instance families for query lower bounds.
//!
//! * [`median`]: random instances with six structural properties that make
//!   the optimum large while a few swaps can shrink it.
//! * [`modify`]: the swap procedure turning a median instance into one with
//!   a small planted cover, plus a Monte Carlo estimate of how likely each
//!   incidence cell is to be touched.
//! * [`compound`]: block-diagonal concatenations of median/modified parts.
//! * [`slab`]: cover-verification instances whose yes/no answer hinges on a
//!   single swap per slab.
//! * [`distinguish`]: query-limited distinguishers run against the above.

pub mod bits;
pub mod compound;
pub mod distinguish;
pub mod median;
pub mod modify;
pub mod slab;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LbError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("no median instance after {attempts} attempts (last draw failed {failed:?})")]
    ExhaustedAttempts { attempts: usize, failed: Vec<char> },
    #[error("construction stuck: {0}")]
    Stuck(String),
}
