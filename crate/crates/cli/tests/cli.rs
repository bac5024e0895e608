//! End-to-end tests against the built binary: output formats, exit codes,
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use matchsat_cli::report::{Answer, CorpusReport, SolveReport, SweepReport};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn matchsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchsat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = matchsat(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn encode_emits_dimacs() {
    let p4 = fixture("p4.graph");
    let (code, stdout, _) = run(&["encode", p4.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("p cnf "));
    assert!(stdout.contains("c var 1 = F(1)"));
    assert!(stdout.contains("c family η8 count="));
}

#[test]
fn encode_rejects_k_below_minimum() {
    let p4 = fixture("p4.graph");
    let (code, _, stderr) = run(&["encode", p4.to_str().unwrap(), "--k", "1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("below the minimum"), "{stderr}");
}

#[test]
fn encode_reports_selfloop_line() {
    let bad = fixture("selfloop.graph");
    let (code, _, stderr) = run(&["encode", bad.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 2"), "{stderr}");
    assert!(stderr.contains("self-loop"), "{stderr}");
}

#[test]
fn encode_with_embedding_flag_lists_family() {
    let tri = fixture("tri.graph");
    let (code, stdout, _) = run(&["encode", tri.to_str().unwrap(), "--k", "2", "--embed-bfc"]);
    assert_eq!(code, 0);
    let line = stdout
        .lines()
        .find(|l| l.starts_with("c family η26"))
        .expect("η26 family line");
    let count: u32 = line.rsplit('=').next().unwrap().parse().unwrap();
    assert!(count > 0);
}

#[test]
fn encode_is_byte_deterministic() {
    let k4 = fixture("k4.graph");
    let a = run(&["encode", k4.to_str().unwrap(), "--k", "2"]);
    let b = run(&["encode", k4.to_str().unwrap(), "--k", "2"]);
    assert_eq!(a, b);
}

#[test]
fn solve_p4_sat_exit_10() {
    let p4 = fixture("p4.graph");
    let (code, stdout, _) = run(&["solve", p4.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 10);
    assert!(stdout.starts_with("SAT\n"));
    assert!(stdout.contains("matched: 1 3"));
    assert!(stdout.contains("index: 1 1 2"));
}

#[test]
fn solve_triangle_unsat_exit_20() {
    let tri = fixture("tri.graph");
    let (code, stdout, _) = run(&["solve", tri.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 20);
    assert!(stdout.starts_with("UNSAT"));
}

#[test]
fn solve_p3_unsat_by_propagation() {
    let p3 = fixture("p3.graph");
    let (code, stdout, _) = run(&["solve", p3.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 20);
    assert!(stdout.contains("decisions: 0"), "{stdout}");
}

#[test]
fn solve_json_round_trips() {
    let p4 = fixture("p4.graph");
    let (code, stdout, _) = run(&["solve", p4.to_str().unwrap(), "--k", "2", "--json"]);
    assert_eq!(code, 10);
    let report: SolveReport = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report.answer, Answer::Sat);
    assert_eq!(report.matched, Some(vec![1, 3]));
    assert_eq!(report.index_table, Some(vec![1, 1, 2]));
    assert_eq!(report.stats.wall_ms, None);
    let json = serde_json::to_string(&report).unwrap();
    let back: SolveReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report, back);
}

#[test]
fn solve_budget_exhaustion_exit_40() {
    let k4 = fixture("k4.graph");
    let (code, stdout, _) = run(&["solve", k4.to_str().unwrap(), "--k", "2", "--budget", "1"]);
    assert_eq!(code, 40);
    assert!(stdout.contains("BUDGET EXHAUSTED"));
}

#[test]
fn sweep_p4_reports_max_k() {
    let p4 = fixture("p4.graph");
    let (code, stdout, _) = run(&["sweep", p4.to_str().unwrap(), "--check"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("K=2 SAT"));
    assert!(stdout.contains("K=3 UNSAT"));
    assert!(stdout.contains("max SAT K = 2"));
    assert!(stdout.contains("check: agree"));
}

#[test]
fn sweep_star_has_no_satisfiable_k() {
    let star = fixture("star.graph");
    let (code, stdout, _) = run(&["sweep", star.to_str().unwrap(), "--check", "--json"]);
    assert_eq!(code, 0);
    let report: SweepReport = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report.max_sat_k, None);
    assert_eq!(report.oracle_max_matching, Some(1));
    assert_eq!(report.check_passed, Some(true));
    assert!(report.rows.iter().all(|r| r.answer == Answer::Unsat));
}

#[test]
fn sweep_k4_matches_oracle() {
    let k4 = fixture("k4.graph");
    let (code, stdout, _) = run(&["sweep", k4.to_str().unwrap(), "--check", "--json"]);
    assert_eq!(code, 0);
    let report: SweepReport = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report.max_sat_k, Some(2));
    assert_eq!(report.oracle_max_matching, Some(2));
}

#[test]
fn stats_reports_variable_count() {
    let p3 = fixture("p3.graph");
    let (code, stdout, _) = run(&["stats", p3.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("variables: 5"), "{stdout}");
    assert!(stdout.contains("max clause width: 3"));
    assert!(stdout.contains("families with all-positive clauses: η5"));
}

#[test]
fn stats_golden_comparison() {
    let p3 = fixture("p3.graph");
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("p3_k2.json");

    let (code, stdout, _) = run(&["stats", p3.to_str().unwrap(), "--k", "2", "--json"]);
    assert_eq!(code, 0);
    std::fs::write(&golden, &stdout).unwrap();

    let (code, stdout, _) = run(&[
        "stats",
        p3.to_str().unwrap(),
        "--k",
        "2",
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("golden: match"));

    // A different K no longer matches the stored report: nonzero exit.
    let (code, _, stderr) = run(&[
        "stats",
        p3.to_str().unwrap(),
        "--k",
        "2",
        "--tighten-ranges",
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("differ"));
}

#[test]
fn corpus_small_run_exits_clean() {
    let (code, stdout, _) = run(&["corpus", "--max-n", "4", "--workers", "2"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("agree-SAT:"));
    assert!(stdout.contains("agree-UNSAT:"));
    assert!(stdout.contains("disagree: 0"));
}

#[test]
fn corpus_json_round_trips_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let (code, stdout, _) = run(&[
        "corpus",
        "--max-n",
        "3",
        "--report",
        report_path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code, 0);
    let report: CorpusReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.clean());
    assert_eq!(report.wall_ms, None);
    let from_file: CorpusReport =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report, from_file);
}

#[test]
fn corpus_output_is_deterministic() {
    let a = run(&["corpus", "--max-n", "4", "--workers", "4", "--json"]);
    let b = run(&["corpus", "--max-n", "4", "--workers", "1", "--json"]);
    assert_eq!(a, b, "aggregation must not depend on worker count");
}

#[test]
fn oracle_command() {
    let k4 = fixture("k4.graph");
    let (code, stdout, _) = run(&["oracle", k4.to_str().unwrap(), "--k", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("max matching: 2"));
    assert!(stdout.contains("does not exist"));
}

#[test]
fn usage_error_exits_1() {
    let (code, _, _) = run(&["solve", "missing-file.graph", "--k", "2"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn solve_k_above_m_unsat() {
    let p4 = fixture("p4.graph");
    let (code, stdout, _) = run(&["solve", p4.to_str().unwrap(), "--k", "4"]);
    assert_eq!(code, 20);
    assert!(stdout.starts_with("UNSAT"));
    assert!(stdout.contains("decisions: 0"));
}

#[test]
fn example_certificate_table() {
    // Ten-edge path, threshold 4: the canonical mapping-table example.
    let p11 = fixture("p11.graph");
    let (code, stdout, _) = run(&["solve", p11.to_str().unwrap(), "--k", "4", "--json"]);
    assert_eq!(code, 10);
    let report: SolveReport = serde_json::from_str(&stdout).unwrap();
    let matched = report.matched.unwrap();
    assert!(matched.len() >= 4);
    let table = report.index_table.unwrap();
    assert_eq!(table.len(), 10);
    assert_eq!(*table.last().unwrap() as usize, matched.len());
}
