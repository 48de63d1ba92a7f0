//! End-to-end tests of the `arkit` binary: every subcommand must report
//! exactly what the corresponding library call reports, and the exit codes
//! must follow the documented contract (0 ok, 1 violation, 2 usage, 3
//! limit/budget).

use std::path::Path;
use std::process::{Command, Output};

use arkit_core::graph::{pair_rank, ColoredGraph, Graph};
use arkit_core::matching;
use arkit_core::rainbow::{max_rainbow_matching, Budget};
use arkit_core::{detect, extremal, harness};

fn arkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn arkit_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arkit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr_str(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(o)).expect("stdout is JSON")
}

#[test]
fn formula_g_exact_output() {
    let out = arkit(&["formula", "g", "--n", "40", "--s", "10"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "g1=320 g2=212 g=320\n");

    let t = extremal::threshold_g(21, 8);
    let out = arkit(&["formula", "g", "--n", "21", "--s", "8", "--json"]);
    let v = json(&out);
    assert_eq!(v["g1"], serde_json::json!(t.g1 as i64));
    assert_eq!(v["g2"], serde_json::json!(t.g2 as i64));
    assert_eq!(v["g"], serde_json::json!(t.g as i64));
    assert_eq!(v["regime"], "g2");
}

#[test]
fn oracle_ar_small_case() {
    let out = arkit(&["oracle", "ar", "--n", "4", "--s", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out), "4\n");
    assert_eq!(harness::oracle_anti_ramsey(4, 2).unwrap(), 4);
}

#[test]
fn formula_values_match_library() {
    for (n, k) in [(6, 2), (14, 7), (40, 11), (9, 4)] {
        let out = arkit(&["formula", "ex", "--n", &n.to_string(), "--k", &k.to_string()]);
        assert_eq!(code(&out), 0);
        let got: i128 = stdout_str(&out).trim().parse().unwrap();
        assert_eq!(got, extremal::turan_matching(n, k).unwrap());
    }
    for (n, s) in [(12, 3), (40, 11), (5, 2)] {
        let out = arkit(&["formula", "ar", "--n", &n.to_string(), "--s", &s.to_string()]);
        assert_eq!(code(&out), 0);
        let got: i128 = stdout_str(&out).trim().parse().unwrap();
        assert_eq!(got, extremal::anti_ramsey_matching(n, s).unwrap());
    }
}

#[test]
fn construct_writes_canonical_file_and_rainbow_max_reads_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = arkit_in(dir.path(), &["construct", "h1", "--n", "12", "--s", "3", "-o", "h1.cg"]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("h1.cg")).unwrap();
    assert_eq!(text, extremal::construct_h1(12, 3).unwrap().serialize());

    let out = arkit_in(dir.path(), &["rainbow", "max", "h1.cg"]);
    assert_eq!(code(&out), 0);
    let stdout = stdout_str(&out);
    assert_eq!(stdout.lines().next(), Some("size=4"));
    // one certificate line per edge
    assert_eq!(stdout.lines().count(), 5);

    let out = arkit_in(dir.path(), &["rainbow", "max", "h1.cg", "--json"]);
    let v = json(&out);
    assert_eq!(v["exact"], true);
    assert_eq!(v["size"], 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn rainbow_decide_answers_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    let out = arkit_in(
        dir.path(),
        &["construct", "rainbow-plus-one", "--n", "10", "--s", "3", "-o", "r.cg"],
    );
    assert_eq!(code(&out), 0);

    // library ground truth: the hub-extremal coloring tops out at s + 1
    let h = extremal::rainbow_plus_one(&extremal::construct_turan_graph(10, 3).unwrap());
    let best = max_rainbow_matching(&h, &Budget::UNLIMITED);
    assert!(best.is_exact());
    assert_eq!(best.certificate().size(), 4);

    let out = arkit_in(dir.path(), &["rainbow", "decide", "r.cg", "--k", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out).lines().next(), Some("status=found"));

    let out = arkit_in(dir.path(), &["rainbow", "decide", "r.cg", "--k", "5", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "absent");
    assert_eq!(v["witness"], serde_json::Value::Null);
}

#[test]
fn rainbow_max_budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    arkit_in(dir.path(), &["construct", "h1", "--n", "12", "--s", "3", "-o", "h1.cg"]);
    let out = arkit_in(dir.path(), &["rainbow", "max", "h1.cg", "--budget-nodes", "0"]);
    assert_eq!(code(&out), 3);
    assert!(stdout_str(&out).contains("exact=false"));
}

#[test]
fn decompose_matches_library() {
    let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (5, 6)]);
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.g"), g.serialize()).unwrap();
    let out = arkit_in(dir.path(), &["decompose", "g.g", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out), matching::gallai_edmonds(&g).to_json());
}

/// Hub-anchored coloring with plenty of colors and no rainbow matching of
/// size s + 2: every pair inside 10..40 shares color 0, all other pairs are
/// distinct. The strict verdict must come back "conclusion-holds".
fn hub_coloring() -> ColoredGraph {
    ColoredGraph::from_fn(40, |u, v| {
        if u >= 10 && v >= 10 {
            0
        } else {
            pair_rank(u, v) as u64 + 1
        }
    })
}

#[test]
fn verdict_conclusion_holds_and_json_matches_library() {
    let h = hub_coloring();
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("hub.cg"), h.serialize()).unwrap();

    let out = arkit_in(dir.path(), &["detect", "verdict", "hub.cg", "--s", "10", "--json"]);
    assert_eq!(code(&out), 0);
    let report = detect::theorem_verdict(
        &h,
        10,
        detect::VerdictMode::Strict,
        &Budget::UNLIMITED,
    )
    .unwrap();
    assert_eq!(json(&out), report.to_json());
    assert_eq!(report.verdict, detect::Verdict::ConclusionHolds);
}

#[test]
fn verdict_hypothesis_fails_on_near_extremal_coloring() {
    let dir = tempfile::tempdir().unwrap();
    arkit_in(dir.path(), &["construct", "h1", "--n", "40", "--s", "10", "-o", "h1.cg"]);
    let out = arkit_in(dir.path(), &["detect", "verdict", "h1.cg", "--s", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).contains("verdict=hypothesis-fails"));
}

#[test]
fn verdict_counterexample_exits_1_outside_asserted_range() {
    // all-distinct K_5 with s = 1 is a mechanical counterexample in the
    // permissive range: plenty of colors, no rainbow matching of size 3
    // (there is no matching of size 3 at all), and no mono structure.
    let h = ColoredGraph::from_fn(5, |u, v| pair_rank(u, v) as u64);
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k5.cg"), h.serialize()).unwrap();
    let out = arkit_in(
        dir.path(),
        &["detect", "verdict", "k5.cg", "--s", "1", "--permissive"],
    );
    assert_eq!(code(&out), 1);
    assert!(stdout_str(&out).contains("verdict=counterexample"));

    // without --permissive the same instance is a usage error
    let out = arkit_in(dir.path(), &["detect", "verdict", "k5.cg", "--s", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verdict_budget_zero_exits_3() {
    let h = hub_coloring();
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("hub.cg"), h.serialize()).unwrap();
    let out = arkit_in(
        dir.path(),
        &["detect", "verdict", "hub.cg", "--s", "10", "--budget-nodes", "0"],
    );
    assert_eq!(code(&out), 3);
    assert!(stdout_str(&out).contains("verdict=inconclusive"));
}

#[test]
fn detectors_match_library_on_hub_coloring() {
    let h = hub_coloring();
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("hub.cg"), h.serialize()).unwrap();

    let out = arkit_in(dir.path(), &["detect", "mono-clique", "hub.cg", "--k", "30", "--json"]);
    assert_eq!(code(&out), 0);
    let lib = detect::find_mono_clique(&h, 30).unwrap();
    assert_eq!(json(&out), lib.to_json());

    let out = arkit_in(dir.path(), &["detect", "mono-clique", "hub.cg", "--k", "31", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out), detect::none_json());

    let out = arkit_in(dir.path(), &["detect", "mono-join", "hub.cg", "--s", "10", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out), detect::none_json());
}

#[test]
fn audit_small_grid_passes_and_matches_library() {
    let out = arkit(&["audit", "--s-max", "3", "--n-cap", "45"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).trim_end().ends_with("audit=pass"));

    let out = arkit(&["audit", "--s-max", "3", "--n-cap", "45", "--json"]);
    let report = extremal::audit_proof_inequalities(2, 3, 45).unwrap();
    assert_eq!(json(&out), report.to_json());
}

#[test]
fn probe_boundary_matches_library() {
    let out = arkit(&["probe", "boundary", "h1", "--n", "12", "--s", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let report = harness::recolor_boundary_probe(12, 3, harness::Family::H1, &Budget::UNLIMITED)
        .unwrap();
    assert_eq!(json(&out), report.to_json());
    assert_eq!(report.trials, 42);
    assert_eq!(report.rainbow_found, 42);
}

#[test]
fn probe_random_is_deterministic_and_matches_library() {
    let args = [
        "probe", "random", "--n", "40", "--s", "10", "--samples", "10", "--seed", "3", "--json",
    ];
    let a = arkit(&args);
    let b = arkit(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout_str(&a), stdout_str(&b));

    let report = harness::random_stability_search(40, 10, 10, 3, 2000).unwrap();
    let v = json(&a);
    assert_eq!(v["digest"], serde_json::json!(report.digest()));
    assert_eq!(v["samples"], 10);
}

#[test]
fn usage_errors_exit_2() {
    // missing required flag
    let out = arkit(&["formula", "g", "--s", "10"]);
    assert_eq!(code(&out), 2);
    // unknown subcommand
    let out = arkit(&["frobnicate"]);
    assert_eq!(code(&out), 2);
    // missing input file
    let out = arkit(&["rainbow", "max", "/definitely/not/here.cg"]);
    assert_eq!(code(&out), 2);
    // malformed coloring: incomplete pair list
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cg"), "cg 1\nn 3\ne 0 1 5\n").unwrap();
    let out = arkit_in(dir.path(), &["rainbow", "max", "bad.cg"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_str(&out).contains("incomplete"));
}

#[test]
fn oversized_oracle_calls_exit_3() {
    let out = arkit(&["oracle", "ex", "--n", "9", "--k", "2"]);
    assert_eq!(code(&out), 3);
    assert!(stderr_str(&out).contains("too large"));
    let out = arkit(&["oracle", "ar", "--n", "6", "--s", "2"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn thread_cap_env_does_not_change_results() {
    let base = arkit(&["audit", "--s-max", "4", "--n-cap", "60", "--json"]);
    let capped = Command::new(env!("CARGO_BIN_EXE_arkit"))
        .args(["audit", "--s-max", "4", "--n-cap", "60", "--json"])
        .env("ARKIT_THREADS", "1")
        .output()
        .expect("binary runs");
    assert_eq!(code(&base), 0);
    assert_eq!(code(&capped), 0);
    assert_eq!(stdout_str(&base), stdout_str(&capped));
}
