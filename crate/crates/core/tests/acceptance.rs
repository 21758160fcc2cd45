//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use propdel::generators::{
    brute_dominating_set, brute_wcs3, from_dominating_set, from_wcs3, random_perturbed_profile,
    random_profile, AntimonotoneFormula, Graph,
};
use propdel::matching::{
    find_minimal_obstruction, is_minimal_obstruction, is_partial_solution, minimal_obstructions,
};
use propdel::mindel::{dominates, solve3, solve3_with, SolverOptions};
use propdel::oracle::{all_minimum_solutions, check_solution, solve_bounded, solve_exhaustive};
use propdel::{ItemSet, Outcome, Profile, Shape};

use common::{all_profiles, perturbed_corpus, random_corpus};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_propdel")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

/// Runs the tool; returns exit code and stdout.
fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON document")
}

/// The exhaustive four-item corpus, the seeded uniform corpus for five to
/// ten items and perturbed extras for the same sizes.
fn corpus() -> Vec<Profile> {
    let mut all = all_profiles(4);
    all.extend(random_corpus(5..=10, 500));
    all.extend(perturbed_corpus(5..=10, 200));
    all
}

fn small(corpus: &[Profile]) -> Vec<&Profile> {
    corpus.iter().filter(|p| p.n_items() <= 8).collect()
}

fn figure_one() -> Verdict {
    let started = Instant::now();
    let fig = fixture("fig1.pid");
    let fig = fig.to_str().unwrap();
    let (check_code, out) = run(&["check", fig]);
    let check = json(&out);
    let check_ok = check_code == 1
        && check["status"] == "obstructed"
        && check["certificate"]["cuts"] == serde_json::json!([4, 4, 4]);
    let mut sizes = Vec::new();
    for method in ["three", "brute"] {
        let (code, out) = run(&["solve", fig, "--method", method]);
        sizes.push((code, json(&out)["min_size"].as_u64()));
    }
    let solve_ok = sizes.iter().all(|s| *s == (0, Some(1)));
    let (code, out) = run(&["verify", fig, "2"]);
    let verify_ok = code == 0 && json(&out)["status"] == "valid";
    let elapsed = started.elapsed();
    verdict(
        check_ok && solve_ok && verify_ok && elapsed < Duration::from_secs(1),
        format!(
            "check cuts {} (exit {}), solve three/brute {:?}, verify {{2}} {}, {:.0} ms",
            check["certificate"]["cuts"],
            check_code,
            sizes.iter().map(|s| s.1).collect::<Vec<_>>(),
            if verify_ok { "valid" } else { "rejected" },
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn oracle_equivalence(corpus: &[Profile]) -> Verdict {
    let started = Instant::now();
    let mismatches: usize = corpus
        .par_iter()
        .filter(|p| {
            let ours = solve3(p, None).map(|o| o.solution.size());
            ours != Ok(solve_exhaustive(p).unwrap().size())
        })
        .count();
    let elapsed = started.elapsed();
    verdict(
        mismatches == 0 && elapsed < Duration::from_secs(300),
        format!(
            "{} profiles, {mismatches} mismatches, {:.1} s",
            corpus.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Violated properties of one certificate, as short labels.
fn certificate_violations(p: &Profile) -> Vec<&'static str> {
    if p.n_items() == 0 {
        return Vec::new();
    }
    let Outcome::Obstruction(cert) = find_minimal_obstruction(p).unwrap() else {
        return Vec::new();
    };
    let q = &cert.prefix;
    let mut bad = Vec::new();
    // A zero cut stands for the virtual cut -2 of a slant with leading cut 1.
    if q.cuts().iter().any(|c| c % 3 != 1 && *c != 0) {
        bad.push("cut not 1 mod 3");
    }
    match q.shape().unwrap() {
        Shape::Straight => {}
        Shape::Slant(lag) => {
            let leading: Vec<ItemSet> = (0..3)
                .filter(|x| *x != lag)
                .map(|x| q.cut_list(x).iter().copied().collect())
                .collect();
            if leading[0] != q.items() || leading[1] != q.items() {
                bad.push("slant leading lists differ from the item set");
            }
        }
        Shape::Irregular => bad.push("irregular shape"),
    }
    if cert.witness_items.len() + 1 != cert.violating_slots.len() {
        bad.push("items != slots - 1");
    }
    if q.boundary().unwrap().len() > 3 {
        bad.push("boundary above 3");
    }
    if p.n_items() <= 8 && !is_minimal_obstruction(q) {
        bad.push("not minimal");
    }
    bad
}

fn structural(corpus: &[Profile]) -> Verdict {
    let results: Vec<(usize, Vec<&'static str>)> = corpus
        .par_iter()
        .map(|p| {
            let mut checked = 0;
            let mut bad = Vec::new();
            let mut profiles = vec![p.clone()];
            profiles.extend(
                p.items()
                    .iter()
                    .map(|i| p.delete_items(&ItemSet::from([*i])).unwrap()),
            );
            for q in &profiles {
                checked += 1;
                bad.extend(certificate_violations(q));
            }
            (checked, bad)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let mut bad: Vec<&str> = results.into_iter().flat_map(|r| r.1).collect();
    let violations = bad.len();
    bad.sort_unstable();
    bad.dedup();
    verdict(
        violations == 0,
        format!(
            "{checked} profiles (corpus and single deletions), {violations} violations {bad:?}"
        ),
    )
}

fn branching_soundness(small: &[&Profile]) -> Verdict {
    let (pairs, violations) = small
        .par_iter()
        .map(|p| {
            let obstructions = minimal_obstructions(&Arc::new((*p).clone()));
            let mut pairs = 0usize;
            let mut violations = 0usize;
            for u in all_minimum_solutions(p).unwrap() {
                for q in &obstructions {
                    pairs += 1;
                    if q.items().intersection(&u).count() > 2 {
                        violations += 1;
                    }
                }
            }
            (pairs, violations)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    verdict(
        violations == 0,
        format!(
            "{} profiles, {pairs} solution-obstruction pairs, {violations} violations",
            small.len()
        ),
    )
}

fn domination_safety(small: &[&Profile]) -> Verdict {
    use itertools::Itertools;
    let (swaps, violations) = small
        .par_iter()
        .map(|p| {
            let obstructions = minimal_obstructions(&Arc::new((*p).clone()));
            let mut swaps = 0usize;
            let mut violations = 0usize;
            for u in all_minimum_solutions(p).unwrap() {
                for q in &obstructions {
                    let items = q.items();
                    let y: ItemSet = items.intersection(&u).copied().collect();
                    if y.is_empty() {
                        continue;
                    }
                    for candidate in items.iter().copied().combinations(y.len()) {
                        let y2: ItemSet = candidate.into_iter().collect();
                        if y2 == y
                            || !is_partial_solution(q, &y2).unwrap()
                            || !dominates(&y2, &y, q).unwrap()
                        {
                            continue;
                        }
                        swaps += 1;
                        let swapped: ItemSet = u.difference(&y).chain(&y2).copied().collect();
                        if check_solution(p, &swapped).unwrap().is_none() {
                            violations += 1;
                        }
                    }
                }
            }
            (swaps, violations)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    verdict(
        violations == 0,
        format!("{swaps} dominating swaps, {violations} violations"),
    )
}

fn reductions() -> Verdict {
    let started = Instant::now();
    let graphs: Vec<Graph> = (0..240u64)
        .map(|s| Graph::random(1 + (s % 7) as usize, [0.2, 0.4, 0.6][(s % 3) as usize], s))
        .collect();
    let (graph_cases, graph_bad) = graphs
        .par_iter()
        .map(|g| {
            let mut cases = 0usize;
            let mut bad = 0usize;
            for k in 0..=g.n_vertices() {
                let Ok(inst) = from_dominating_set(g, k) else {
                    continue;
                };
                cases += 1;
                if solve_bounded(&inst.profile, k).is_some() != brute_dominating_set(g, k).unwrap()
                {
                    bad += 1;
                }
            }
            (cases, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let formulas: Vec<AntimonotoneFormula> = (0..150u64)
        .map(|s| AntimonotoneFormula::random(1 + (s % 4) as usize, 3, 2, 2, s))
        .collect();
    let (formula_cases, formula_bad) = formulas
        .par_iter()
        .map(|phi| {
            let mut cases = 0usize;
            let mut bad = 0usize;
            for k in 0..=phi.n_vars() {
                let Ok(inst) = from_wcs3(phi, k) else {
                    continue;
                };
                cases += 1;
                if solve_bounded(&inst.profile, k).is_some() != brute_wcs3(phi, k).unwrap() {
                    bad += 1;
                }
            }
            (cases, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let elapsed = started.elapsed();
    verdict(
        graph_bad == 0 && formula_bad == 0 && elapsed < Duration::from_secs(600),
        format!(
            "{} graphs / {graph_cases} cases / {graph_bad} mismatches; {} formulas / \
             {formula_cases} cases / {formula_bad} mismatches; {:.1} s",
            graphs.len(),
            formulas.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .map(|(x, y)| (x.ln(), y.max(1.0).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}

fn scaling() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (family, swaps) in [("uniform", None), ("perturbed", Some(()))] {
        let mut points = Vec::new();
        let mut worst = 0.0f64;
        for n in [30usize, 60, 90] {
            let mut entries = 0usize;
            let trials = 5u64;
            for t in 0..trials {
                let seed = 31 * n as u64 + t;
                let p = match swaps {
                    Some(()) => random_perturbed_profile(3, n, n / 10, seed),
                    None => random_profile(3, n, seed),
                };
                let started = Instant::now();
                let outcome = solve3(&p, None).unwrap();
                let secs = started.elapsed().as_secs_f64();
                worst = worst.max(secs);
                pass &= secs < 10.0;
                entries += outcome.stats.memo_entries;
            }
            points.push((n as f64, entries as f64 / trials as f64));
        }
        let slope = log_log_slope(&points);
        pass &= slope < 8.0;
        parts.push(format!(
            "{family}: mean memo entries {:?}, slope {slope:.2}, worst {worst:.3} s",
            points.iter().map(|p| p.1).collect::<Vec<_>>()
        ));
    }
    verdict(pass, parts.join("; "))
}

fn memo_transparency(small: &[&Profile]) -> Verdict {
    let off = SolverOptions {
        memoize: false,
        ..SolverOptions::default()
    };
    let mismatches = small
        .par_iter()
        .filter(|p| {
            let on = solve3(p, None).unwrap().solution.size();
            solve3_with(p, None, off).unwrap().solution.size() != on
        })
        .count();
    verdict(
        mismatches == 0,
        format!("{} profiles, {mismatches} mismatches", small.len()),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let fig = fixture("fig1.pid");
    let fig = fig.to_str().unwrap();
    let k3 = fixture("k3.graph");
    let formula = fixture("two_units.formula");
    let csv = dir.path().join("bench.csv");
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", fig],
        vec!["solve", fig, "--method", "three"],
        vec!["solve", fig, "--method", "three", "--no-memo"],
        vec!["solve", fig, "--method", "brute"],
        vec!["solve", fig, "--method", "bounded", "--k", "1"],
        vec!["verify", fig, "2"],
        vec!["gen", "random", "--items", "12", "--seed", "5"],
        vec![
            "gen", "random", "--items", "12", "--seed", "5", "--swaps", "3", "--k", "2",
        ],
        vec!["gen", "domset", "--graph", k3.to_str().unwrap(), "--k", "1"],
        vec![
            "gen",
            "wcs3",
            "--formula",
            formula.to_str().unwrap(),
            "--k",
            "1",
        ],
        vec!["bench", "--sizes", "8,12", "--trials", "3", "--seed", "9"],
        vec![
            "bench",
            "--sizes",
            "8,12",
            "--trials",
            "2",
            "--swaps",
            "2",
            "--out",
            csv.to_str().unwrap(),
        ],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        let first = run(args);
        let first_file = std::fs::read(&csv).ok();
        let second = run(args);
        let second_file = std::fs::read(&csv).ok();
        if first != second || first_file != second_file || first.0 == 2 {
            differing.push(args.join(" "));
        }
    }
    verdict(
        differing.is_empty(),
        format!(
            "{} commands run twice, differing or failing: {differing:?}",
            commands.len()
        ),
    )
}

fn main() {
    let corpus = corpus();
    let small = small(&corpus);
    let criteria: Vec<Criterion> = vec![
        ("figure one reproduction", Box::new(figure_one)),
        (
            "oracle equivalence",
            Box::new(|| oracle_equivalence(&corpus)),
        ),
        ("certificate structure", Box::new(|| structural(&corpus))),
        (
            "branching soundness",
            Box::new(|| branching_soundness(&small)),
        ),
        ("domination safety", Box::new(|| domination_safety(&small))),
        ("reduction equivalence", Box::new(reductions)),
        ("polynomial scaling", Box::new(scaling)),
        (
            "memoization transparency",
            Box::new(|| memo_transparency(&small)),
        ),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (number, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!(
            "criterion {}: {} {name}: {}",
            number + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
