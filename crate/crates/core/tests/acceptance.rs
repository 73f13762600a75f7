//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false`; `cargo test --test acceptance -- 4 7` runs a
//! subset. Exits non-zero if any selected criterion fails.

mod common;

use std::fmt::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::Rng;

use subcover::harness::{run_solver, Algorithm};
use subcover::lowerbound::distinguish::{distinguisher_experiment, Mixture, Strategy};
use subcover::lowerbound::median::{
    check_median, gen_median_instance, gen_random_instance, CheckMode, MedianParams,
};
use subcover::lowerbound::modify::{estimate_p_elt_set, gen_modified_instance};
use subcover::lowerbound::slab::{gen_slab_instance, gen_slab_with_swaps, SlabInstance, SlabLabel};
use subcover::oracle::{covers, verify_cover_naive, Oracle};
use subcover::planted::gen_planted;
use subcover::rng;
use subcover::solvers::{brute_force_min_cover, harmonic, SolverConfig, Status};
use subcover::{ElemId, SetSystem};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn median_of(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v[v.len() / 2]
}

/// A random system with every element in at least one set.
fn small_feasible(seed: u64) -> SetSystem {
    let mut r = rng::stream(seed, "acceptance-small", 0);
    let m = r.gen_range(2..=12);
    let n = r.gen_range(2..=14);
    if seed % 2 == 0 {
        let k = r.gen_range(1..=m.min(n).min(4));
        return gen_planted(m, n, k, &mut r).unwrap().system;
    }
    let density = r.gen_range(0.15..0.5);
    let mut sets: Vec<Vec<ElemId>> = (0..m)
        .map(|_| (0..n).filter(|_| r.gen_bool(density)).map(ElemId::from_index).collect())
        .collect();
    for e in 0..n {
        if !sets.iter().any(|s| s.contains(&ElemId::from_index(e))) {
            let s = r.gen_range(0..m);
            sets[s].push(ElemId::from_index(e));
        }
    }
    SetSystem::from_sets(n, sets).unwrap()
}

fn c1_oracle_equivalence() -> Check {
    let cfg = SolverConfig::default();
    let (mut runs, mut feasible, mut within) = (0, 0, 0);
    let mut misses = Vec::new();
    for seed in 0..200 {
        let sys = small_feasible(seed);
        let opt = brute_force_min_cover(&sys).map_err(|e| e.to_string())?.k;
        let bound = harmonic(sys.n()) * opt as f64 + 1.0;
        for algo in [Algorithm::Greedy, Algorithm::Small, Algorithm::Large] {
            let out = run_solver(&sys, algo, &cfg, None, seed).map_err(|e| e.to_string())?;
            runs += 1;
            if out.feasible {
                feasible += 1;
            } else {
                misses.push(format!("{algo}@{seed}"));
            }
            if out.cover.as_ref().is_some_and(|c| c.len() as f64 <= bound) {
                within += 1;
            }
        }
    }
    let ratio_ok = within as f64 >= 0.99 * runs as f64;
    ensure(
        feasible == runs && ratio_ok,
        format!("{feasible}/{runs} feasible, {within}/{runs} within H(n)*OPT+1{}", if misses.is_empty() {
            String::new()
        } else {
            format!("; infeasible: {}", misses.join(" "))
        }),
    )
}

fn render_slab(inst: &SlabInstance) -> String {
    let (elt, set) = inst.slab_tables(1);
    let mut out = String::new();
    for (s, row) in elt.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|e| format!("e{}", e.0)).collect();
        let _ = writeln!(out, "S{}: {}", s + 1, cells.join(" "));
    }
    for (e, row) in set.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|s| format!("S{}", s.0)).collect();
        let _ = writeln!(out, "e{}: {}", e + 1, cells.join(" "));
    }
    out
}

const SLAB_BEFORE: &str = "\
S1: e1 e2 e3
S2: e1 e2 e3
S3: e1 e2 e3
S4: e2 e3 e4
S5: e2 e3 e4
S6: e2 e3 e4
S7: e1 e3 e4
S8: e1 e3 e4
S9: e1 e3 e4
S10: e1 e2 e4
S11: e1 e2 e4
S12: e1 e2 e4
e1: S1 S2 S3 S7 S8 S9 S10 S11 S12
e2: S1 S2 S3 S4 S5 S6 S10 S11 S12
e3: S1 S2 S3 S4 S5 S6 S7 S8 S9
e4: S4 S5 S6 S7 S8 S9 S10 S11 S12
";

const SLAB_AFTER: &str = "\
S1: e1 e2 e3
S2: e1 e2 e3
S3: e1 e4 e3
S4: e2 e3 e4
S5: e2 e3 e4
S6: e2 e3 e4
S7: e1 e3 e4
S8: e1 e3 e4
S9: e1 e3 e2
S10: e1 e2 e4
S11: e1 e2 e4
S12: e1 e2 e4
e1: S1 S2 S3 S7 S8 S9 S10 S11 S12
e2: S1 S2 S9 S4 S5 S6 S10 S11 S12
e3: S1 S2 S3 S4 S5 S6 S7 S8 S9
e4: S4 S5 S6 S7 S8 S3 S10 S11 S12
";

fn c2_slab_fidelity() -> Check {
    let rest = [Some((1, 1)), Some((2, 3))];
    let before = gen_slab_with_swaps(12, 3, &[None, rest[0], rest[1]]).map_err(|e| e.to_string())?;
    let after = gen_slab_with_swaps(12, 3, &[Some((3, 2)), rest[0], rest[1]]).map_err(|e| e.to_string())?;
    let (b, a) = (render_slab(&before), render_slab(&after));
    ensure(
        b == SLAB_BEFORE && a == SLAB_AFTER,
        format!("before {} / after {}", if b == SLAB_BEFORE { "exact" } else { "differs" }, if a == SLAB_AFTER {
            "exact"
        } else {
            "differs"
        }),
    )
}

fn c3_verification_cost() -> Check {
    let mut checked = 0;
    for (n, k) in [(12, 3), (24, 4), (240, 12), (100, 10)] {
        for seed in 0..5u64 {
            for label in [SlabLabel::Yes, SlabLabel::No] {
                let inst = gen_slab_instance(n, k, label, &mut rng::stream(seed, "acceptance-slab", 0))
                    .map_err(|e| e.to_string())?;
                let mut o = Oracle::new(&inst.system);
                let v = verify_cover_naive(&mut o, &inst.query_cover()).map_err(|e| e.to_string())?;
                let expected = (k * (n - k) + k) as u64;
                if o.counts().elt_of != expected || o.counts().set_of != 0 {
                    return Err(format!("n={n} k={k}: {} EltOf queries, expected {expected}", o.counts().elt_of));
                }
                if v.covered != (label == SlabLabel::Yes) || v.witness != inst.witness() {
                    return Err(format!("n={n} k={k} {}: wrong verdict", label.label()));
                }
                checked += 1;
            }
        }
    }
    // The same count through the binary.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inst = dir.path().join("slab.txt");
    run_cli(&["gen", "slab", "--n", "240", "--k", "12", "--label", "yes", "--seed", "5", "--out"], Some(&inst))?;
    let out = run_cli(&["verify", inst.to_str().unwrap(), "--query-cover"], None)?;
    let row = out.lines().nth(1).unwrap_or("");
    let expected = format!("covered,true,,12,{},0,{}", 12 * 228 + 12, 12 * 228 + 12);
    ensure(
        row == expected,
        format!("{checked} library checks exact; cli row `{row}`"),
    )
}

fn c4_median_generation() -> Check {
    let params = MedianParams::simplified(300, 300).map_err(|e| e.to_string())?;
    let mut pass = 0;
    let mut failures: Vec<String> = Vec::new();
    for seed in 0..50u64 {
        let sys = gen_random_instance(300, 300, params.p0, &mut rng::stream(seed, "acceptance-median", 0));
        let report = check_median(&sys, &params, CheckMode::Exact);
        if report.all_hold() {
            pass += 1;
        } else {
            failures.push(report.failed().iter().collect());
        }
    }
    ensure(
        pass * 100 >= 80 * 50,
        format!("{pass}/50 draws pass all six properties (exact){}", if failures.is_empty() {
            String::new()
        } else {
            format!("; failed sets: {}", failures.join(" "))
        }),
    )
}

fn verified_median() -> Result<SetSystem, String> {
    let params = MedianParams::simplified(300, 300).map_err(|e| e.to_string())?;
    gen_median_instance(&params, CheckMode::Auto, &mut rng::stream(1, "acceptance-median", 1), 50)
        .map(|d| d.system)
        .map_err(|e| e.to_string())
}

fn c5_modified_guarantees() -> Check {
    let median = verified_median()?;
    let cap = 18.0 * (median.m() as f64).ln();
    let (mut pair_covers, mut no_single, mut swaps_ok, mut max_swaps) = (0, 0, 0, 0);
    for seed in 0..100u64 {
        let inst = gen_modified_instance(&median, &mut rng::stream(seed, "acceptance-modified", 0))
            .map_err(|e| e.to_string())?;
        pair_covers += covers(&inst.system, &inst.chosen_cover()) as usize;
        no_single += inst.system.set_ids().all(|s| inst.system.set_size(s) < inst.system.n()) as usize;
        swaps_ok += (inst.swaps.len() as f64 <= cap) as usize;
        max_swaps = max_swaps.max(inst.swaps.len());
    }
    ensure(
        pair_covers == 100 && no_single == 100 && swaps_ok == 100,
        format!(
            "pair covers {pair_covers}/100, no single cover {no_single}/100, swaps <= {cap:.1} in {swaps_ok}/100 (max {max_swaps})"
        ),
    )
}

fn c6_pcell_bound() -> Check {
    let median = verified_median()?;
    let (m, n) = (median.m(), median.n());
    let est = estimate_p_elt_set(&median, 100_000, 6).map_err(|e| e.to_string())?;
    let bound = 4800.0 * (m as f64).ln() / (m * n) as f64;
    let max = est.max().map_or(0.0, |x| x.2);
    let outside = est.nonzero().filter(|&(e, s, _)| !median.contains(s, e)).count();
    ensure(
        max <= bound && outside == 0,
        format!("max frequency {max:.6} <= {bound:.6}; {outside} touched cells outside the median"),
    )
}

fn c7_query_trends() -> Check {
    let cfg = SolverConfig::default();
    let mut medians = Vec::new();
    for k in [32usize, 64, 128, 256] {
        let mut q = Vec::new();
        for seed in 0..20u64 {
            let sys = gen_planted(1024, 1024, k, &mut rng::stream(seed, "bench-instance", 0))
                .map_err(|e| e.to_string())?
                .system;
            let out = run_solver(&sys, Algorithm::Large, &cfg, None, seed).map_err(|e| e.to_string())?;
            q.push(out.counts.total());
        }
        medians.push(median_of(q));
    }
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);

    let mn2 = 256 * 256 / 2;
    let mut worst = 0;
    let mut small_ok = true;
    for seed in 0..20u64 {
        let sys = gen_planted(256, 256, 4, &mut rng::stream(seed, "bench-instance", 0))
            .map_err(|e| e.to_string())?
            .system;
        let out = run_solver(&sys, Algorithm::Small, &cfg, None, seed).map_err(|e| e.to_string())?;
        worst = worst.max(out.counts.total());
        small_ok &= out.status == Status::Ok && out.counts.total() < mn2;
    }
    ensure(
        decreasing && small_ok,
        format!("(a) large medians {medians:?} over k=32,64,128,256; (b) small worst {worst} < {mn2}"),
    )
}

fn c8_distinguishers() -> Check {
    let median = verified_median()?;
    let r_med = distinguisher_experiment(Mixture::MedianVsModified(&median), Strategy::UniformRandom, 0, 1000, 8)
        .map_err(|e| e.to_string())?;
    let r_slab0 = distinguisher_experiment(Mixture::SlabYesNo { n: 240, k: 12 }, Strategy::UniformRandom, 0, 1000, 8)
        .map_err(|e| e.to_string())?;
    let q = 240 * 12 / 20;
    let r_slab = distinguisher_experiment(Mixture::SlabYesNo { n: 240, k: 12 }, Strategy::UniformRandom, q, 2000, 8)
        .map_err(|e| e.to_string())?;
    let contains = |lo: f64, hi: f64| lo <= 0.5 && 0.5 <= hi;
    ensure(
        contains(r_med.ci_low, r_med.ci_high) && contains(r_slab0.ci_low, r_slab0.ci_high) && r_slab.ci_high < 0.9,
        format!(
            "(a) q=0 median CI [{:.3}, {:.3}], slab CI [{:.3}, {:.3}]; (b) q={q} accuracy {:.3} CI [{:.3}, {:.3}]",
            r_med.ci_low, r_med.ci_high, r_slab0.ci_low, r_slab0.ci_high, r_slab.accuracy, r_slab.ci_low, r_slab.ci_high
        ),
    )
}

/// Exit code and stdout; only a usage error (2) or a crash is an error.
fn run_cli_code(args: &[&str]) -> Result<(i32, String), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_subcover"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    match o.status.code() {
        Some(code) if code != 2 => Ok((code, String::from_utf8_lossy(&o.stdout).into_owned())),
        code => Err(format!("{args:?} exited {code:?}: {}", String::from_utf8_lossy(&o.stderr))),
    }
}

fn run_cli(args: &[&str], out: Option<&Path>) -> Result<String, String> {
    let mut argv: Vec<&str> = args.to_vec();
    let out = out.map(|p| p.to_string_lossy().into_owned());
    argv.extend(out.as_deref());
    match run_cli_code(&argv)? {
        (0, stdout) => Ok(stdout),
        (code, _) => Err(format!("{argv:?} exited {code}")),
    }
}

fn c9_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let p = |name: &str| d.join(name).to_string_lossy().into_owned();
    std::fs::write(
        d.join("bench.toml"),
        "name = \"det\"\nalgorithm = \"auto\"\nseeds = [1, 2, 3]\n[instance]\nkind = \"planted\"\nm = 64\nn = 64\n[sweep]\nk = [2, 8]\n",
    )
    .map_err(|e| e.to_string())?;
    // Fixed inputs used by several checks.
    run_cli(&["gen", "median", "--m", "200", "--n", "300", "--seed", "3", "--out", &p("median.txt")], None)?;
    run_cli(&["gen", "planted", "--m", "40", "--n", "40", "--k", "3", "--seed", "3", "--out", &p("planted.txt")], None)?;
    run_cli(&["gen", "slab", "--n", "24", "--k", "4", "--label", "no", "--seed", "3", "--out", &p("slab.txt")], None)?;

    let checks: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        ("gen planted", vec!["gen", "planted", "--m", "30", "--n", "30", "--k", "4", "--seed", "9", "--out", "OUT"], vec![""]),
        ("gen slab", vec!["gen", "slab", "--n", "12", "--k", "3", "--label", "yes", "--seed", "1", "--out", "OUT"], vec![""]),
        ("gen median", vec!["gen", "median", "--m", "200", "--n", "300", "--seed", "4", "--out", "OUT"], vec!["", ".report.csv"]),
        ("gen modified", vec!["gen", "modified", "--from", &p("median.txt"), "--seed", "5", "--out", "OUT"], vec![""]),
        ("gen compound", vec!["gen", "compound", "--from", &p("median.txt"), "--t", "3", "--seed", "5", "--out", "OUT"], vec![""]),
        ("solve auto", vec!["solve", "auto", &p("planted.txt"), "--seed", "7", "--out", "OUT"], vec![""]),
        ("verify", vec!["verify", &p("slab.txt"), "--query-cover", "--out", "OUT"], vec![""]),
        ("bench", vec!["bench", &p("bench.toml"), "--out", "OUT"], vec!["", "SUMMARY"]),
        ("lb pcell", vec!["lb", "pcell", "--from", &p("median.txt"), "--trials", "500", "--seed", "2", "--out", "OUT"], vec![""]),
        ("lb distinguish-slab", vec!["lb", "distinguish-slab", "--n", "24", "--k", "4", "--q", "0,10,40", "--trials", "300", "--seed", "2", "--out", "OUT"], vec![""]),
        ("lb distinguish-median", vec!["lb", "distinguish-median", "--from", &p("median.txt"), "--q", "0,100", "--trials", "100", "--seed", "2", "--out", "OUT"], vec![""]),
    ]
    .into_iter()
    .map(|(name, args, files)| (name, args.into_iter().map(String::from).collect(), files))
    .collect();

    let mut passed = Vec::new();
    for (i, (name, args, suffixes)) in checks.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = d.join(format!("out{i}_{rep}.csv"));
            let argv: Vec<String> = args
                .iter()
                .map(|a| if a == "OUT" { out.to_string_lossy().into_owned() } else { a.clone() })
                .collect();
            let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
            let (code, stdout) = run_cli_code(&argv)?;
            let mut bytes = vec![code.to_le_bytes().to_vec(), stdout.into_bytes()];
            for s in suffixes {
                let path = match *s {
                    "" => out.clone(),
                    "SUMMARY" => out.with_extension("summary.csv"),
                    other => std::path::PathBuf::from(format!("{}{other}", out.display())),
                };
                bytes.push(std::fs::read(&path).map_err(|e| format!("{name}: {}: {e}", path.display()))?);
            }
            outputs.push(bytes);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{name}: outputs differ between identical runs"));
        }
        passed.push(*name);
    }
    ensure(passed.len() >= 10, format!("{} commands byte-identical on rerun", passed.len()))
}

fn c10_invariants() -> Check {
    common::run_invariant_suite(10_000).map(|_| "duality, swap, counter and re-verification properties hold over 4 x 10000 cases".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 10] = [
        (1, "correctness oracle equivalence", c1_oracle_equivalence),
        (2, "slab fidelity", c2_slab_fidelity),
        (3, "naive verification cost", c3_verification_cost),
        (4, "median generation", c4_median_generation),
        (5, "modified-instance guarantees", c5_modified_guarantees),
        (6, "cell probability bound", c6_pcell_bound),
        (7, "query trends", c7_query_trends),
        (8, "distinguisher experiments", c8_distinguishers),
        (9, "determinism", c9_determinism),
        (10, "invariant suite", c10_invariants),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
