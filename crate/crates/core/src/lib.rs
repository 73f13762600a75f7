//! Sub-linear query set cover.
//!
//! Instances are held as a pair of dual incidence tables and only read
//! through a counting [`oracle::Oracle`]. The [`solvers`] module contains the
//! sampling-based algorithms together with exact and greedy baselines;
//! [`lowerbound`] builds the hard instance families used to probe query
//! lower bounds; [`harness`] drives everything from the command line.

pub mod cover;
pub mod format;
pub mod harness;
pub mod lowerbound;
pub mod numfmt;
pub mod oracle;
pub mod planted;
pub mod rng;
pub mod solvers;
pub mod system;

pub use cover::{Cover, Provenance};
pub use oracle::{Oracle, QueryCounts, QueryError};
pub use system::{ElemId, SetId, SetSystem};
