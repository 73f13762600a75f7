use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::system::SetId;

/// Which procedure produced a cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Greedy,
    BruteForce,
    SmallSc,
    LargeSc,
    Sublinear,
    SetSample,
    Given,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Greedy => "greedy",
            Provenance::BruteForce => "brute-force",
            Provenance::SmallSc => "small-sc",
            Provenance::LargeSc => "large-sc",
            Provenance::Sublinear => "sublinear",
            Provenance::SetSample => "set-sample",
            Provenance::Given => "given",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("set {0} appears more than once in the cover")]
    Duplicate(u32),
    #[error("set {id} is outside 1..={m}")]
    OutOfRange { id: u32, m: usize },
}

/// A collection of distinct set ids claimed to cover the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    set_ids: Vec<SetId>,
    pub provenance: Provenance,
}

impl Cover {
    pub fn new(set_ids: Vec<SetId>, provenance: Provenance) -> Self {
        debug_assert!(
            {
                let mut seen = HashSet::new();
                set_ids.iter().all(|s| seen.insert(*s))
            },
            "cover has duplicate set ids"
        );
        Cover {
            set_ids,
            provenance,
        }
    }

    /// Validating constructor for covers coming from outside the solvers.
    pub fn checked(set_ids: Vec<SetId>, m: usize, provenance: Provenance) -> Result<Self, CoverError> {
        let mut seen = HashSet::with_capacity(set_ids.len());
        for s in &set_ids {
            if s.0 == 0 || s.0 as usize > m {
                return Err(CoverError::OutOfRange { id: s.0, m });
            }
            if !seen.insert(*s) {
                return Err(CoverError::Duplicate(s.0));
            }
        }
        Ok(Cover {
            set_ids,
            provenance,
        })
    }

    pub fn empty(provenance: Provenance) -> Self {
        Cover {
            set_ids: Vec::new(),
            provenance,
        }
    }

    pub fn set_ids(&self) -> &[SetId] {
        &self.set_ids
    }

    pub fn len(&self) -> usize {
        self.set_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set_ids.is_empty()
    }

    /// Appends sets not already present, keeping first-seen order.
    pub fn extend_distinct(&mut self, more: impl IntoIterator<Item = SetId>) {
        let mut seen: HashSet<SetId> = self.set_ids.iter().copied().collect();
        for s in more {
            if seen.insert(s) {
                self.set_ids.push(s);
            }
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}
