//! Per-run answer memory.
//!
//! A solver that has already read a full row never asks for it again: the
//! reader keeps every completely enumerated set and element list and answers
//! later requests for them locally. Partial probes (a single SetOf at some
//! position) are always forwarded and charged.

use std::collections::HashMap;

use crate::oracle::{Oracle, QueryCounts, QueryError};
use crate::system::{ElemId, SetId};

pub(crate) struct Reader<'o, 'a> {
    oracle: &'o mut Oracle<'a>,
    sets: HashMap<SetId, Vec<ElemId>>,
    elems: HashMap<ElemId, Vec<SetId>>,
}

impl<'o, 'a> Reader<'o, 'a> {
    pub(crate) fn new(oracle: &'o mut Oracle<'a>) -> Self {
        Reader {
            oracle,
            sets: HashMap::new(),
            elems: HashMap::new(),
        }
    }

    pub(crate) fn m(&self) -> usize {
        self.oracle.m()
    }

    pub(crate) fn n(&self) -> usize {
        self.oracle.n()
    }

    pub(crate) fn counts(&self) -> QueryCounts {
        self.oracle.counts()
    }

    pub(crate) fn set_of(&mut self, e: ElemId, j: usize) -> Result<Option<SetId>, QueryError> {
        match self.elems.get(&e) {
            Some(row) if j >= 1 => Ok(row.get(j - 1).copied()),
            _ => self.oracle.set_of(e, j),
        }
    }

    pub(crate) fn enumerate_set(&mut self, s: SetId) -> Result<&[ElemId], QueryError> {
        if !self.sets.contains_key(&s) {
            let row = self.oracle.enumerate_set(s)?;
            self.sets.insert(s, row);
        }
        Ok(&self.sets[&s])
    }

    pub(crate) fn enumerate_element(&mut self, e: ElemId) -> Result<&[SetId], QueryError> {
        if !self.elems.contains_key(&e) {
            let row = self.oracle.enumerate_element(e)?;
            self.elems.insert(e, row);
        }
        Ok(&self.elems[&e])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SetSystem;

    #[test]
    fn rows_are_read_once() {
        let sys = SetSystem::from_sets(
            3,
            vec![vec![ElemId(1), ElemId(2)], vec![ElemId(2), ElemId(3)]],
        )
        .unwrap();
        let mut o = Oracle::new(&sys);
        let mut r = Reader::new(&mut o);
        assert_eq!(r.enumerate_set(SetId(1)).unwrap(), &[ElemId(1), ElemId(2)]);
        assert_eq!(r.enumerate_element(ElemId(2)).unwrap(), &[SetId(1), SetId(2)]);
        let before = r.counts();
        r.enumerate_set(SetId(1)).unwrap();
        r.enumerate_element(ElemId(2)).unwrap();
        assert_eq!(r.set_of(ElemId(2), 3).unwrap(), None);
        assert_eq!(r.counts(), before);
        assert_eq!(before.elt_of, 3);
        assert_eq!(before.set_of, 3);
        // Unknown rows still cost a query.
        r.set_of(ElemId(1), 1).unwrap();
        assert_eq!(r.counts().set_of, 4);
    }
}
