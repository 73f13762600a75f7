//! Bitset view of an incidence matrix for the combinatorial checks.

use fixedbitset::FixedBitSet;

use crate::system::SetSystem;

#[derive(Debug, Clone)]
pub struct Incidence {
    /// `rows[s]`: elements of set `s` (0-based bits).
    pub rows: Vec<FixedBitSet>,
    /// `cols[e]`: sets containing element `e`.
    pub cols: Vec<FixedBitSet>,
}

impl Incidence {
    pub fn new(sys: &SetSystem) -> Self {
        let (m, n) = (sys.m(), sys.n());
        let mut rows = vec![FixedBitSet::with_capacity(n); m];
        let mut cols = vec![FixedBitSet::with_capacity(m); n];
        for (i, row) in sys.elt_of_table().iter().enumerate() {
            for e in row {
                rows[i].insert(e.index());
                cols[e.index()].insert(i);
            }
        }
        Incidence { rows, cols }
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    /// Union of the given rows.
    pub fn union_of(&self, sets: &[usize]) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.n());
        for &s in sets {
            acc.union_with(&self.rows[s]);
        }
        acc
    }
}

impl Incidence {
    /// A pair of distinct sets (or, with one set, that set alone) whose
    /// union is everything, if any.
    pub fn covering_pair(&self) -> Option<(usize, usize)> {
        let n = self.n();
        for i in 0..self.m() {
            if self.rows[i].count_ones(..) == n {
                return Some((i, i));
            }
            for j in i + 1..self.m() {
                if self.rows[i].union_count(&self.rows[j]) == n {
                    return Some((i, j));
                }
            }
        }
        None
    }
}
