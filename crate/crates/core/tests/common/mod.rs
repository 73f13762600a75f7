//! Shared property checks, run by `invariants` under proptest and by the
//! acceptance target through an explicit `TestRunner`.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::seq::SliceRandom;

use subcover::format::InstanceFile;
use subcover::harness::{run_solver, Algorithm};
use subcover::oracle::{verify_cover_naive, Oracle, QueryError};
use subcover::rng;
use subcover::solvers::SolverConfig;
use subcover::{ElemId, SetId, SetSystem};

/// Incidence matrix plus a seed that shuffles every table row, so both
/// tables come in non-canonical order.
pub fn arb_system() -> impl Strategy<Value = SetSystem> {
    (1usize..=12, 1usize..=14)
        .prop_flat_map(|(m, n)| (Just(m), Just(n), prop::collection::vec(any::<bool>(), m * n), any::<u64>()))
        .prop_map(|(m, n, bits, seed)| {
            let mut r = rng::stream(seed, "prop-shuffle", 0);
            let mut elt_of: Vec<Vec<ElemId>> = (0..m)
                .map(|s| (0..n).filter(|&e| bits[s * n + e]).map(ElemId::from_index).collect())
                .collect();
            let mut set_of: Vec<Vec<SetId>> = (0..n)
                .map(|e| (0..m).filter(|&s| bits[s * n + e]).map(SetId::from_index).collect())
                .collect();
            elt_of.iter_mut().for_each(|row| row.shuffle(&mut r));
            set_of.iter_mut().for_each(|row| row.shuffle(&mut r));
            SetSystem::from_tables(m, n, elt_of, set_of).expect("dual by construction")
        })
}

/// Both tables rebuild the same system, the text format round-trips, and
/// breaking one SetOf entry is caught.
pub fn duality_rebuild(sys: &SetSystem) -> Result<(), TestCaseError> {
    prop_assert_eq!(sys.check_duality(), Ok(()));
    let rebuilt = SetSystem::from_tables(sys.m(), sys.n(), sys.elt_of_table().to_vec(), sys.set_of_table().to_vec())
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&rebuilt, sys);
    let text = InstanceFile::new(sys.clone()).to_text();
    let parsed = InstanceFile::parse(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&parsed.system, sys);
    prop_assert_eq!(parsed.to_text(), text);

    if let Some(e) = (0..sys.n()).find(|&e| !sys.set_of_table()[e].is_empty()) {
        let mut set_of = sys.set_of_table().to_vec();
        set_of[e].pop();
        prop_assert!(SetSystem::from_tables(sys.m(), sys.n(), sys.elt_of_table().to_vec(), set_of).is_err());
    }
    Ok(())
}

fn legal_swaps(sys: &SetSystem) -> Vec<(ElemId, ElemId, SetId, SetId)> {
    let mut out = Vec::new();
    for s in sys.set_ids() {
        for s2 in sys.set_ids() {
            for &e in sys.elements(s) {
                for &e2 in sys.elements(s2) {
                    if !sys.contains(s2, e) && !sys.contains(s, e2) {
                        out.push((e, e2, s, s2));
                    }
                }
            }
        }
    }
    out
}

/// A legal swap changes exactly its four recorded cells, keeps duality and
/// every row length, and the reverse swap restores the system exactly.
pub fn swap_involution(sys: &SetSystem, pick: usize) -> Result<(), TestCaseError> {
    let legal = legal_swaps(sys);
    if legal.is_empty() {
        return Ok(());
    }
    let (e, e2, s, s2) = legal[pick % legal.len()];
    let mut swapped = sys.clone();
    let rec = swapped.apply_swap(e, e2, s, s2).map_err(|x| TestCaseError::fail(x.to_string()))?;
    let mut diff = sys.diff_entries(&swapped);
    diff.sort_unstable();
    let mut recorded = rec.positions.to_vec();
    recorded.sort_unstable();
    prop_assert_eq!(&diff, &recorded);
    prop_assert_eq!(swapped.check_duality(), Ok(()));
    for x in sys.set_ids() {
        prop_assert_eq!(sys.set_size(x), swapped.set_size(x));
    }
    prop_assert!(swapped.contains(s, e2) && swapped.contains(s2, e));
    prop_assert!(!swapped.contains(s, e) && !swapped.contains(s2, e2));

    let back = swapped.apply_swap(e2, e, s, s2).map_err(|x| TestCaseError::fail(x.to_string()))?;
    let mut undone = back.positions.to_vec();
    undone.sort_unstable();
    prop_assert_eq!(undone, recorded);
    prop_assert_eq!(&swapped, sys);
    // Undoing twice is illegal: `e'` is no longer in `s`.
    prop_assert!(swapped.clone().apply_swap(e2, e, s, s2).is_err());
    Ok(())
}

/// A raw query: table, row id (0 and out-of-range allowed), position.
pub type RawQuery = (bool, u32, usize);

pub fn arb_queries() -> impl Strategy<Value = (Vec<RawQuery>, Option<u64>)> {
    (
        prop::collection::vec((any::<bool>(), 0u32..=15, 0usize..=16), 0..64),
        prop::option::of(0u64..48),
    )
}

/// Counts rise by exactly one per answered query, answers match the tables
/// (null past the end), and rejected queries leave counts untouched.
pub fn counter_exactness(sys: &SetSystem, queries: &[RawQuery], budget: Option<u64>) -> Result<(), TestCaseError> {
    let mut oracle = Oracle::with_budget(sys, budget);
    let (mut elt, mut set) = (0u64, 0u64);
    for &(is_elt, row, pos) in queries {
        let before = oracle.counts();
        let hi = if is_elt { sys.m() } else { sys.n() } as u32;
        let valid = row >= 1 && row <= hi && pos >= 1;
        let over = budget.is_some_and(|b| elt + set >= b);
        let got = if is_elt {
            oracle.elt_of(SetId(row), pos).map(|x| x.map(|e| e.0))
        } else {
            oracle.set_of(ElemId(row), pos).map(|x| x.map(|s| s.0))
        };
        match got {
            Ok(answer) => {
                prop_assert!(valid && !over);
                let expected = if is_elt {
                    sys.elements(SetId(row)).get(pos - 1).map(|e| e.0)
                } else {
                    sys.sets_containing(ElemId(row)).get(pos - 1).map(|s| s.0)
                };
                prop_assert_eq!(answer, expected);
                if is_elt {
                    elt += 1;
                } else {
                    set += 1;
                }
            }
            Err(QueryError::BudgetExhausted { .. }) => {
                prop_assert!(valid && over);
                prop_assert_eq!(oracle.counts(), before);
            }
            Err(_) => {
                prop_assert!(!valid);
                prop_assert_eq!(oracle.counts(), before);
            }
        }
        prop_assert_eq!((oracle.counts().elt_of, oracle.counts().set_of), (elt, set));
    }
    Ok(())
}

fn independently_covers(sys: &SetSystem, ids: &[SetId]) -> bool {
    let mut seen = vec![false; sys.n()];
    for &s in ids {
        for e in sys.elements(s) {
            seen[e.index()] = true;
        }
    }
    seen.iter().all(|&b| b)
}

/// Every solver's `feasible` flag agrees with an independent union check on
/// a re-parsed copy of the instance; naive verification costs Σ(|S|+1)
/// EltOf queries; on feasible systems the full-read solvers always succeed.
pub fn cover_reverify(sys: &SetSystem, seed: u64) -> Result<(), TestCaseError> {
    let copy = InstanceFile::parse(&InstanceFile::new(sys.clone()).to_text())
        .map_err(|e| TestCaseError::fail(e.to_string()))?
        .system;
    let cfg = SolverConfig::default();
    for algo in [Algorithm::Greedy, Algorithm::Small, Algorithm::Large, Algorithm::Auto, Algorithm::Brute] {
        let out = run_solver(sys, algo, &cfg, None, seed).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let truly = out.cover.as_ref().is_some_and(|c| independently_covers(&copy, c.set_ids()));
        prop_assert_eq!(out.feasible, truly, "{}", algo);
        if sys.is_feasible() && matches!(algo, Algorithm::Greedy | Algorithm::Brute) {
            prop_assert!(out.feasible, "{} failed on a feasible system", algo);
        }
        if !sys.is_feasible() {
            prop_assert!(!out.feasible);
        }
        if let Some(c) = &out.cover {
            let mut o = Oracle::new(&copy);
            let v = verify_cover_naive(&mut o, c).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(v.covered, truly);
            let cost: u64 = c.set_ids().iter().map(|&s| copy.set_size(s) as u64 + 1).sum();
            prop_assert_eq!(o.counts().elt_of, cost);
            prop_assert_eq!(o.counts().set_of, 0);
        }
    }
    Ok(())
}

/// Runs all four properties for `cases` cases each with a fixed RNG seed.
pub fn run_invariant_suite(cases: u32) -> Result<(), String> {
    let config = || Config {
        cases,
        failure_persistence: None,
        rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
        ..Config::default()
    };
    let runner = |name: &str| {
        let seed = name.bytes().fold([7u8; 32], |mut acc, b| {
            acc[b as usize % 32] ^= b;
            acc
        });
        TestRunner::new_with_rng(config(), proptest::test_runner::TestRng::from_seed(
            proptest::test_runner::RngAlgorithm::ChaCha,
            &seed,
        ))
    };
    runner("duality")
        .run(&arb_system(), |s| duality_rebuild(&s))
        .map_err(|e| format!("duality: {e}"))?;
    runner("swap")
        .run(&(arb_system(), any::<usize>()), |(s, p)| swap_involution(&s, p))
        .map_err(|e| format!("swap: {e}"))?;
    runner("counter")
        .run(&(arb_system(), arb_queries()), |(s, (q, b))| counter_exactness(&s, &q, b))
        .map_err(|e| format!("counter: {e}"))?;
    runner("cover")
        .run(&(arb_system(), any::<u64>()), |(s, seed)| cover_reverify(&s, seed))
        .map_err(|e| format!("cover: {e}"))?;
    Ok(())
}
