//! Dual-table incidence structure.
//!
//! A [`SetSystem`] stores the same incidence relation twice: once as the
//! per-set element lists answered by `EltOf`, and once as the per-element set
//! lists answered by `SetOf`. Orderings inside each list are part of the
//! instance, since the oracles answer by position. Canonical construction
//! sorts every list ascending; swaps then rewrite entries in place.

use std::fmt;

use thiserror::Error;

/// 1-based set identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetId(pub u32);

/// 1-based element identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u32);

impl SetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        SetId(i as u32 + 1)
    }
}

impl ElemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        ElemId(i as u32 + 1)
    }
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("set {set} lists element {elem} outside 1..={n}")]
    ElementOutOfRange { set: u32, elem: u32, n: usize },
    #[error("element {elem} lists set {set} outside 1..={m}")]
    SetOutOfRange { elem: u32, set: u32, m: usize },
    #[error("{0} contains a duplicate entry")]
    Duplicate(String),
    #[error("table shape mismatch: expected {expected} rows, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("duality violated: {0}")]
    Duality(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SwapError {
    #[error("swap precondition violated: {0}")]
    Precondition(String),
}

/// Which oracle table an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Table {
    EltOf,
    SetOf,
}

/// One cell of an oracle table: `row` is a set id for `EltOf` and an element
/// id for `SetOf`; `pos` is the 1-based position inside that row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub table: Table,
    pub row: u32,
    pub pos: u32,
}

/// Record of a single swap: `s` loses `e` and gains `e_prime`, `s_prime`
/// loses `e_prime` and gains `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapRecord {
    pub e: ElemId,
    pub e_prime: ElemId,
    pub s: SetId,
    pub s_prime: SetId,
    /// `[EltOf(s), EltOf(s'), SetOf(e), SetOf(e')]`
    pub positions: [Entry; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    m: usize,
    n: usize,
    elt_of: Vec<Vec<ElemId>>,
    set_of: Vec<Vec<SetId>>,
}

impl SetSystem {
    /// Builds a system in canonical order from per-set element lists.
    /// Lists are sorted ascending; `set_of` is derived ascending by set id.
    pub fn from_sets(n: usize, sets: Vec<Vec<ElemId>>) -> Result<Self, SystemError> {
        let m = sets.len();
        let mut elt_of = sets;
        for (i, row) in elt_of.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(SystemError::Duplicate(format!("set {}", i + 1)));
            }
            if let Some(&e) = row.iter().find(|e| e.0 == 0 || e.0 as usize > n) {
                return Err(SystemError::ElementOutOfRange {
                    set: i as u32 + 1,
                    elem: e.0,
                    n,
                });
            }
        }
        let set_of = derive_set_of(n, &elt_of);
        Ok(SetSystem {
            m,
            n,
            elt_of,
            set_of,
        })
    }

    /// Builds a system from per-set lists kept in the given order, deriving
    /// `set_of` ascending.
    pub fn from_elt_of(n: usize, elt_of: Vec<Vec<ElemId>>) -> Result<Self, SystemError> {
        for (i, row) in elt_of.iter().enumerate() {
            check_row(row, n, |e| SystemError::ElementOutOfRange {
                set: i as u32 + 1,
                elem: e,
                n,
            })?;
            if has_duplicates(row) {
                return Err(SystemError::Duplicate(format!("set {}", i + 1)));
            }
        }
        let set_of = derive_set_of(n, &elt_of);
        Ok(SetSystem {
            m: elt_of.len(),
            n,
            elt_of,
            set_of,
        })
    }

    /// Builds a system from both tables, verifying that they describe the
    /// same incidence relation.
    pub fn from_tables(
        m: usize,
        n: usize,
        elt_of: Vec<Vec<ElemId>>,
        set_of: Vec<Vec<SetId>>,
    ) -> Result<Self, SystemError> {
        if elt_of.len() != m {
            return Err(SystemError::Shape {
                expected: m,
                found: elt_of.len(),
            });
        }
        if set_of.len() != n {
            return Err(SystemError::Shape {
                expected: n,
                found: set_of.len(),
            });
        }
        for (i, row) in elt_of.iter().enumerate() {
            check_row(row, n, |e| SystemError::ElementOutOfRange {
                set: i as u32 + 1,
                elem: e,
                n,
            })?;
            if has_duplicates(row) {
                return Err(SystemError::Duplicate(format!("set {}", i + 1)));
            }
        }
        for (j, row) in set_of.iter().enumerate() {
            for s in row {
                if s.0 == 0 || s.0 as usize > m {
                    return Err(SystemError::SetOutOfRange {
                        elem: j as u32 + 1,
                        set: s.0,
                        m,
                    });
                }
            }
            if has_duplicates(row) {
                return Err(SystemError::Duplicate(format!("element {}", j + 1)));
            }
        }
        let sys = SetSystem {
            m,
            n,
            elt_of,
            set_of,
        };
        sys.check_duality()?;
        Ok(sys)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Elements of `s` in oracle order.
    pub fn elements(&self, s: SetId) -> &[ElemId] {
        &self.elt_of[s.index()]
    }

    /// Sets containing `e` in oracle order.
    pub fn sets_containing(&self, e: ElemId) -> &[SetId] {
        &self.set_of[e.index()]
    }

    pub fn set_size(&self, s: SetId) -> usize {
        self.elt_of[s.index()].len()
    }

    pub fn degree(&self, e: ElemId) -> usize {
        self.set_of[e.index()].len()
    }

    pub fn set_ids(&self) -> impl Iterator<Item = SetId> + '_ {
        (0..self.m).map(SetId::from_index)
    }

    pub fn elem_ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.n).map(ElemId::from_index)
    }

    pub fn elt_of_table(&self) -> &[Vec<ElemId>] {
        &self.elt_of
    }

    pub fn set_of_table(&self) -> &[Vec<SetId>] {
        &self.set_of
    }

    /// Total number of incidences (equal in both tables).
    pub fn incidences(&self) -> usize {
        self.elt_of.iter().map(Vec::len).sum()
    }

    /// Membership by scanning the shorter of the two lists.
    pub fn contains(&self, s: SetId, e: ElemId) -> bool {
        let row = &self.elt_of[s.index()];
        let col = &self.set_of[e.index()];
        if row.len() <= col.len() {
            row.contains(&e)
        } else {
            col.contains(&s)
        }
    }

    /// Rebuilds `set_of` from `elt_of` and compares as sets per element.
    pub fn check_duality(&self) -> Result<(), SystemError> {
        let mut seen = vec![Vec::<SetId>::new(); self.n];
        for (i, row) in self.elt_of.iter().enumerate() {
            for e in row {
                seen[e.index()].push(SetId::from_index(i));
            }
        }
        for (j, (derived, stored)) in seen.iter().zip(&self.set_of).enumerate() {
            let mut stored = stored.clone();
            stored.sort_unstable();
            if *derived != stored {
                return Err(SystemError::Duality(format!(
                    "element {} is listed in sets {:?} by EltOf but {:?} by SetOf",
                    j + 1,
                    derived.iter().map(|s| s.0).collect::<Vec<_>>(),
                    stored.iter().map(|s| s.0).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }

    /// True when every element belongs to at least one set.
    pub fn is_feasible(&self) -> bool {
        self.set_of.iter().all(|c| !c.is_empty())
    }

    /// Exchanges `e` and `e_prime` between `s` and `s_prime` in place.
    ///
    /// Requires `e ∈ s`, `e ∉ s'`, `e' ∈ s'`, `e' ∉ s`. Exactly four table
    /// entries change and every list keeps its length.
    pub fn apply_swap(
        &mut self,
        e: ElemId,
        e_prime: ElemId,
        s: SetId,
        s_prime: SetId,
    ) -> Result<SwapRecord, SwapError> {
        let in_range = |x: u32, hi: usize| x >= 1 && x as usize <= hi;
        if !in_range(e.0, self.n) || !in_range(e_prime.0, self.n) {
            return Err(SwapError::Precondition("element id out of range".into()));
        }
        if !in_range(s.0, self.m) || !in_range(s_prime.0, self.m) {
            return Err(SwapError::Precondition("set id out of range".into()));
        }
        let pos_e_in_s = self.elt_of[s.index()].iter().position(|&x| x == e);
        let pos_ep_in_sp = self.elt_of[s_prime.index()]
            .iter()
            .position(|&x| x == e_prime);
        let (Some(pe), Some(pep)) = (pos_e_in_s, pos_ep_in_sp) else {
            return Err(SwapError::Precondition(format!(
                "need {e} ∈ {s} and {e_prime} ∈ {s_prime}"
            )));
        };
        if self.contains(s_prime, e) || self.contains(s, e_prime) {
            return Err(SwapError::Precondition(format!(
                "need {e} ∉ {s_prime} and {e_prime} ∉ {s}"
            )));
        }
        // Both membership facts above imply the SetOf entries exist.
        let ps = self.set_of[e.index()]
            .iter()
            .position(|&x| x == s)
            .expect("duality");
        let psp = self.set_of[e_prime.index()]
            .iter()
            .position(|&x| x == s_prime)
            .expect("duality");

        self.elt_of[s.index()][pe] = e_prime;
        self.elt_of[s_prime.index()][pep] = e;
        self.set_of[e.index()][ps] = s_prime;
        self.set_of[e_prime.index()][psp] = s;

        Ok(SwapRecord {
            e,
            e_prime,
            s,
            s_prime,
            positions: [
                Entry {
                    table: Table::EltOf,
                    row: s.0,
                    pos: pe as u32 + 1,
                },
                Entry {
                    table: Table::EltOf,
                    row: s_prime.0,
                    pos: pep as u32 + 1,
                },
                Entry {
                    table: Table::SetOf,
                    row: e.0,
                    pos: ps as u32 + 1,
                },
                Entry {
                    table: Table::SetOf,
                    row: e_prime.0,
                    pos: psp as u32 + 1,
                },
            ],
        })
    }

    /// Lists every table entry at which `self` and `other` differ. Both
    /// systems must have the same shape.
    pub fn diff_entries(&self, other: &SetSystem) -> Vec<Entry> {
        assert_eq!((self.m, self.n), (other.m, other.n), "shape mismatch");
        let mut out = Vec::new();
        for (i, (a, b)) in self.elt_of.iter().zip(&other.elt_of).enumerate() {
            push_row_diffs(&mut out, Table::EltOf, i as u32 + 1, a, b);
        }
        for (j, (a, b)) in self.set_of.iter().zip(&other.set_of).enumerate() {
            push_row_diffs(&mut out, Table::SetOf, j as u32 + 1, a, b);
        }
        out
    }
}

fn push_row_diffs<T: PartialEq>(out: &mut Vec<Entry>, table: Table, row: u32, a: &[T], b: &[T]) {
    let len = a.len().max(b.len());
    for p in 0..len {
        if a.get(p) != b.get(p) {
            out.push(Entry {
                table,
                row,
                pos: p as u32 + 1,
            });
        }
    }
}

fn derive_set_of(n: usize, elt_of: &[Vec<ElemId>]) -> Vec<Vec<SetId>> {
    let mut set_of = vec![Vec::new(); n];
    for (i, row) in elt_of.iter().enumerate() {
        for e in row {
            set_of[e.index()].push(SetId::from_index(i));
        }
    }
    set_of
}

fn check_row(
    row: &[ElemId],
    n: usize,
    err: impl Fn(u32) -> SystemError,
) -> Result<(), SystemError> {
    match row.iter().find(|e| e.0 == 0 || e.0 as usize > n) {
        Some(e) => Err(err(e.0)),
        None => Ok(()),
    }
}

fn has_duplicates<T: Ord + Copy>(row: &[T]) -> bool {
    let mut v = row.to_vec();
    v.sort_unstable();
    v.windows(2).any(|w| w[0] == w[1])
}
