use std::path::PathBuf;
use std::process::{Command, Output};

use propdel::format::parse_instance;
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn propdel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_propdel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_reports_the_figure_one_obstruction() {
    let out = propdel(&["check", &fixture("fig1.pid")]);
    assert_eq!(code(&out), 1);
    let d = doc(&out);
    assert_eq!(d["status"], "obstructed");
    assert_eq!(d["certificate"]["cuts"], json!([4, 4, 4]));
    assert_eq!(d["certificate"]["items"], json!([1, 2, 3, 4, 5]));
    assert_eq!(d["certificate"]["slots"].as_array().unwrap().len(), 6);
}

#[test]
fn check_returns_an_allocation_after_deleting_item_two() {
    let out = propdel(&["check", &fixture("fig1_minus2.pid")]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(d["status"], "proportional");
    let bundles = d["allocation"].as_array().unwrap();
    assert_eq!(bundles.len(), 3);
    assert!(bundles
        .iter()
        .all(|b| b["items"].as_array().unwrap().len() == 2));
}

#[test]
fn solve_methods_agree_on_figure_one() {
    for method in ["three", "brute", "auto"] {
        let out = propdel(&["solve", &fixture("fig1.pid"), "--method", method]);
        assert_eq!(code(&out), 0, "method {method}");
        let d = doc(&out);
        assert_eq!(d["min_size"], 1, "method {method}");
        assert_eq!(d["deleted"], json!([2]), "method {method}");
    }
    let out = propdel(&[
        "solve",
        &fixture("fig1.pid"),
        "--method",
        "bounded",
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["decision"], true);
}

#[test]
fn budget_sets_the_decision_and_exit_code() {
    let out = propdel(&["solve", &fixture("fig1.pid"), "--k", "0"]);
    assert_eq!(code(&out), 1);
    let d = doc(&out);
    assert_eq!(d["decision"], false);
    assert_eq!(d["min_size"], 1);

    let out = propdel(&[
        "solve",
        &fixture("fig1.pid"),
        "--method",
        "bounded",
        "--k",
        "0",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(doc(&out)["status"], "no_solution");
}

#[test]
fn solver_statistics_are_reported_for_the_three_agent_method() {
    let d = doc(&propdel(&[
        "solve",
        &fixture("fig1.pid"),
        "--method",
        "three",
    ]));
    assert!(d["stats"]["recursions"].as_u64().unwrap() >= 1);
    assert!(d["stats"].get("wall_ms").is_none());
    let d = doc(&propdel(&["solve", &fixture("fig1.pid"), "--timing"]));
    assert!(d["stats"]["wall_ms"].as_f64().is_some());
}

#[test]
fn bounded_without_budget_is_a_usage_error() {
    let out = propdel(&["solve", &fixture("fig1.pid"), "--method", "bounded"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn three_agent_method_rejects_four_agents() {
    let out = propdel(&["solve", &fixture("four_agents.pid"), "--method", "three"]);
    assert_eq!(code(&out), 2);
    let out = propdel(&["solve", &fixture("four_agents.pid")]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["method"], "bounded");
}

#[test]
fn verify_accepts_and_rejects() {
    assert_eq!(code(&propdel(&["verify", &fixture("fig1.pid"), "2"])), 0);
    let out = propdel(&["verify", &fixture("fig1.pid")]);
    assert_eq!(code(&out), 1);
    assert_eq!(doc(&out)["status"], "invalid");
    assert_eq!(code(&propdel(&["verify", &fixture("fig1.pid"), "9"])), 2);
}

#[test]
fn malformed_and_missing_inputs_exit_with_two() {
    let out = propdel(&["check", &fixture("duplicate.pid")]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert_eq!(code(&propdel(&["check", &fixture("no_such_file.pid")])), 2);
    assert_eq!(
        code(&propdel(&[
            "gen",
            "wcs3",
            "--formula",
            &fixture("positive.formula"),
            "--k",
            "1"
        ])),
        2
    );
}

#[test]
fn shared_top_choice_obstruction_lags_the_third_agent() {
    let d = doc(&propdel(&["check", &fixture("shared_first.pid")]));
    assert_eq!(d["certificate"]["cuts"], json!([1, 1, 0]));
    assert_eq!(d["certificate"]["items"], json!([1]));
}

#[test]
fn generated_instances_parse_and_are_seeded() {
    let a = propdel(&["gen", "random", "--items", "9", "--seed", "4"]);
    let b = propdel(&["gen", "random", "--items", "9", "--seed", "4"]);
    let c = propdel(&["gen", "random", "--items", "9", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let inst = parse_instance(&stdout(&a)).unwrap();
    assert_eq!(inst.profile.n_agents(), 3);
    assert_eq!(inst.profile.n_items(), 9);
    assert_eq!(inst.k, None);

    let inst = parse_instance(&stdout(&propdel(&[
        "gen", "random", "--agents", "4", "--items", "8", "--swaps", "2", "--k", "3",
    ])))
    .unwrap();
    assert_eq!(inst.profile.n_agents(), 4);
    assert_eq!(inst.k, Some(3));
}

#[test]
fn gen_domset_on_a_triangle() {
    let inst = parse_instance(&stdout(&propdel(&[
        "gen",
        "domset",
        "--graph",
        &fixture("k3.graph"),
        "--k",
        "1",
    ])))
    .unwrap();
    assert_eq!((inst.profile.n_agents(), inst.profile.n_items()), (16, 33));
    assert_eq!(inst.k, Some(1));
}

#[test]
fn gen_writes_to_a_file_and_solve_reads_it_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wcs.pid");
    let path = path.to_str().unwrap();
    let out = propdel(&[
        "gen",
        "wcs3",
        "--formula",
        &fixture("two_units.formula"),
        "--k",
        "1",
        "--out",
        path,
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let out = propdel(&["solve", path, "--method", "bounded"]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["decision"], true);
}

#[test]
fn bench_writes_one_row_per_trial() {
    let out = propdel(&["bench", "--sizes", "6,9", "--trials", "3", "--seed", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "items,trial,seed,min_size,memo_entries,recursions,wall_ms"
    );
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|l| l.ends_with(',')));

    let timed = stdout(&propdel(&["bench", "--sizes", "6", "--timing"]));
    assert!(!timed.lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn three_agent_and_brute_force_agree_on_small_generated_instances() {
    for seed in 0..12u64 {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.pid");
        let path = path.to_str().unwrap();
        let swaps = (seed % 3).to_string();
        let seed = seed.to_string();
        let gen = propdel(&[
            "gen", "random", "--items", "9", "--seed", &seed, "--swaps", &swaps, "--out", path,
        ]);
        assert_eq!(code(&gen), 0);
        let three = doc(&propdel(&["solve", path, "--method", "three"]));
        let brute = doc(&propdel(&["solve", path, "--method", "brute"]));
        assert_eq!(three["min_size"], brute["min_size"], "seed {seed}");
    }
}
