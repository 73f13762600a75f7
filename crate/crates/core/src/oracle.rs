//! Query-counted access to a [`SetSystem`].
//!
//! `EltOf(S, j)` returns the j-th element of `S` and `SetOf(e, j)` the j-th
//! set containing `e`, both 1-based, with `None` past the end of the list.
//! Every answered query bumps exactly one counter. With a budget set, a
//! query that would exceed it is refused and leaves the counters untouched.

use thiserror::Error;

use crate::cover::Cover;
use crate::system::{ElemId, SetId, SetSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("set {0} is not in 1..=m")]
    UnknownSet(u32),
    #[error("element {0} is not in 1..=n")]
    UnknownElement(u32),
    #[error("positions are 1-based")]
    ZeroPosition,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounts {
    pub elt_of: u64,
    pub set_of: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.elt_of + self.set_of
    }
}

#[derive(Debug, Clone)]
pub struct Oracle<'a> {
    sys: &'a SetSystem,
    counts: QueryCounts,
    budget: Option<u64>,
}

impl<'a> Oracle<'a> {
    pub fn new(sys: &'a SetSystem) -> Self {
        Oracle {
            sys,
            counts: QueryCounts::default(),
            budget: None,
        }
    }

    pub fn with_budget(sys: &'a SetSystem, budget: Option<u64>) -> Self {
        Oracle {
            sys,
            counts: QueryCounts::default(),
            budget,
        }
    }

    /// Number of sets; algorithms are allowed to know `|F|`.
    pub fn m(&self) -> usize {
        self.sys.m()
    }

    /// Number of elements; algorithms are allowed to know `|U|`.
    pub fn n(&self) -> usize {
        self.sys.n()
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    fn charge(&self) -> Result<(), QueryError> {
        match self.budget {
            Some(b) if self.counts.total() >= b => Err(QueryError::BudgetExhausted { budget: b }),
            _ => Ok(()),
        }
    }

    pub fn elt_of(&mut self, s: SetId, j: usize) -> Result<Option<ElemId>, QueryError> {
        if s.0 == 0 || s.0 as usize > self.sys.m() {
            return Err(QueryError::UnknownSet(s.0));
        }
        if j == 0 {
            return Err(QueryError::ZeroPosition);
        }
        self.charge()?;
        self.counts.elt_of += 1;
        Ok(self.sys.elements(s).get(j - 1).copied())
    }

    pub fn set_of(&mut self, e: ElemId, j: usize) -> Result<Option<SetId>, QueryError> {
        if e.0 == 0 || e.0 as usize > self.sys.n() {
            return Err(QueryError::UnknownElement(e.0));
        }
        if j == 0 {
            return Err(QueryError::ZeroPosition);
        }
        self.charge()?;
        self.counts.set_of += 1;
        Ok(self.sys.sets_containing(e).get(j - 1).copied())
    }

    /// Reads `s` in full: `|s| + 1` EltOf queries.
    pub fn enumerate_set(&mut self, s: SetId) -> Result<Vec<ElemId>, QueryError> {
        let mut out = Vec::new();
        let mut j = 1;
        while let Some(e) = self.elt_of(s, j)? {
            out.push(e);
            j += 1;
        }
        Ok(out)
    }

    /// Reads the sets containing `e` in full: `deg(e) + 1` SetOf queries.
    pub fn enumerate_element(&mut self, e: ElemId) -> Result<Vec<SetId>, QueryError> {
        let mut out = Vec::new();
        let mut j = 1;
        while let Some(s) = self.set_of(e, j)? {
            out.push(s);
            j += 1;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    pub covered: bool,
    /// Smallest uncovered element when `covered` is false.
    pub witness: Option<ElemId>,
}

/// Reads every set of the cover through `EltOf` and checks the union.
/// Costs exactly `Σ (|S| + 1)` EltOf queries and no SetOf queries.
pub fn verify_cover_naive(oracle: &mut Oracle<'_>, cover: &Cover) -> Result<Verification, QueryError> {
    let mut seen = vec![false; oracle.n()];
    for &s in cover.set_ids() {
        for e in oracle.enumerate_set(s)? {
            seen[e.index()] = true;
        }
    }
    let witness = seen.iter().position(|&b| !b).map(ElemId::from_index);
    Ok(Verification {
        covered: witness.is_none(),
        witness,
    })
}

/// Meter-free feasibility check used to audit solver output.
pub fn covers(sys: &SetSystem, cover: &Cover) -> bool {
    let mut oracle = Oracle::new(sys);
    verify_cover_naive(&mut oracle, cover)
        .map(|v| v.covered)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Provenance;

    fn sys() -> SetSystem {
        SetSystem::from_sets(
            3,
            vec![
                vec![ElemId(1), ElemId(2)],
                vec![ElemId(2), ElemId(3)],
                vec![],
            ],
        )
        .unwrap()
    }

    #[test]
    fn out_of_range_is_none_and_counted() {
        let sys = sys();
        let mut o = Oracle::new(&sys);
        assert_eq!(o.elt_of(SetId(1), 2).unwrap(), Some(ElemId(2)));
        assert_eq!(o.elt_of(SetId(1), 3).unwrap(), None);
        assert_eq!(o.set_of(ElemId(2), 3).unwrap(), None);
        assert_eq!(o.counts(), QueryCounts { elt_of: 2, set_of: 1 });
    }

    #[test]
    fn invalid_arguments_are_not_charged() {
        let sys = sys();
        let mut o = Oracle::new(&sys);
        assert_eq!(o.elt_of(SetId(4), 1), Err(QueryError::UnknownSet(4)));
        assert_eq!(o.set_of(ElemId(1), 0), Err(QueryError::ZeroPosition));
        assert_eq!(o.counts().total(), 0);
    }

    #[test]
    fn budget_refuses_without_side_effects() {
        let sys = sys();
        let mut o = Oracle::with_budget(&sys, Some(2));
        o.elt_of(SetId(1), 1).unwrap();
        o.set_of(ElemId(1), 1).unwrap();
        assert_eq!(
            o.elt_of(SetId(2), 1),
            Err(QueryError::BudgetExhausted { budget: 2 })
        );
        assert_eq!(o.counts(), QueryCounts { elt_of: 1, set_of: 1 });
    }

    #[test]
    fn naive_verification_cost_and_witness() {
        let sys = sys();
        let mut o = Oracle::new(&sys);
        let c = Cover::new(vec![SetId(1), SetId(3)], Provenance::Given);
        let v = verify_cover_naive(&mut o, &c).unwrap();
        assert!(!v.covered);
        assert_eq!(v.witness, Some(ElemId(3)));
        assert_eq!(o.counts(), QueryCounts { elt_of: 2 + 1 + 0 + 1, set_of: 0 });

        let mut o = Oracle::new(&sys);
        let empty = Cover::empty(Provenance::Given);
        let v = verify_cover_naive(&mut o, &empty).unwrap();
        assert_eq!(v.witness, Some(ElemId(1)));
        assert_eq!(o.counts().total(), 0);
    }
}
