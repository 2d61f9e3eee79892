use std::path::PathBuf;

use limitgame_cli::{run_command, EXIT_INPUT, EXIT_OK};

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("limitgame").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn solve_g1() {
    let (code, out, _) = run(&["solve", "--arena", &data("g1.arena"), "--dfa", &data("db.dfa")]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).take(2).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows, vec![vec!["v0", "5", "W0"], vec!["v1", "5", "W0"]]);
}

#[test]
fn solve_json() {
    let (code, out, _) = run(&[
        "solve", "--arena", &data("g2.arena"), "--dfa", &data("db.dfa"), "--json", "--strategies",
    ]);
    assert_eq!(code, EXIT_OK);
    for key in ["\"values\"", "\"strategies\"", "\"diagnostics\"", "\"player0\"", "\"memory_states\""] {
        assert!(out.contains(key), "{key} missing in {out}");
    }
    assert!(out.contains("\"vertex\": \"v0\",\n      \"value\": 4,"), "{out}");
}

#[test]
fn solve_single_vertex_and_unknown_vertex() {
    let base = ["solve", "--arena", &data("ginf.arena"), "--dfa", &data("db.dfa")];
    let (code, out, _) = run(&[&base[..], &["--vertex", "v0"]].concat());
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().nth(1).unwrap().contains("inf"));
    assert!(out.contains("W1"));
    let (code, _, err) = run(&[&base[..], &["--vertex", "nope"]].concat());
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("nope"));
}

#[test]
fn solve_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g1.dot");
    let (code, _, _) = run(&[
        "solve", "--arena", &data("g1.arena"), "--dfa", &data("db.dfa"), "--dot", dot.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("peripheries=2").count(), 2);
}

#[test]
fn solve_reach_g1() {
    let (code, out, _) = run(&["solve-reach", "--arena", &data("g1.arena"), "--dfa", &data("db.dfa"), "--json"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"value\": 2"), "{out}");
}

#[test]
fn eval_lassos() {
    let (a, d) = (data("g1.arena"), data("db.dfa"));
    let with = |extra: &[&str]| run(&[&["eval", "--arena", &a, "--dfa", &d][..], extra].concat());
    assert_eq!(with(&["--cycle", "v0,v1"]).1.trim(), "5");
    assert_eq!(with(&["--cycle", "v0,v1", "--reach"]).1.trim(), "2");
    assert_eq!(with(&["--stem", "v1", "--cycle", "v0,v1", "--reach"]).1.trim(), "0");
    let (code, _, err) = with(&["--cycle", "v0"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("lasso"), "{err}");
    let (code, _, err) = with(&["--cycle", "v9"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("v9"), "{err}");
}

#[test]
fn verify_reports_matches() {
    let (code, out, _) = run(&["verify", "--seed", "7", "--trials", "50"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("50/50 oracle matches"));
}

#[test]
fn gen_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let (a, d) = (dir.path().join("r.arena"), dir.path().join("r.dfa"));
    let (a, d) = (a.to_str().unwrap(), d.to_str().unwrap());
    let gen = |seed: &str| run(&["gen", "--seed", seed, "--max-vertices", "5", "--out-arena", a, "--out-dfa", d]);
    assert_eq!(gen("3").0, EXIT_OK);
    let first = (std::fs::read_to_string(a).unwrap(), std::fs::read_to_string(d).unwrap());
    assert_eq!(gen("3").0, EXIT_OK);
    let second = (std::fs::read_to_string(a).unwrap(), std::fs::read_to_string(d).unwrap());
    assert_eq!(first, second);
    assert_eq!(run(&["solve", "--arena", a, "--dfa", d]).0, EXIT_OK);
}

#[test]
fn input_errors() {
    let (code, _, err) = run(&["solve", "--arena", "missing.arena", "--dfa", &data("db.dfa")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("missing.arena"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.arena");
    std::fs::write(&bad, "vertex v0 0 a\nedge v0 vX 1\n").unwrap();
    let (code, _, err) = run(&["solve", "--arena", bad.to_str().unwrap(), "--dfa", &data("db.dfa")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2") && err.contains("vX"), "{err}");

    // Color c is not in the DFA's alphabet.
    std::fs::write(&bad, "vertex v0 0 c\nedge v0 v0 1\n").unwrap();
    let (code, _, err) = run(&["solve", "--arena", bad.to_str().unwrap(), "--dfa", &data("db.dfa")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("unknown color c"), "{err}");
}

#[test]
fn usage_errors() {
    for args in [&["bogus"][..], &["solve", "--frobnicate"], &[]] {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("Usage"), "{err}");
    }
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["solve", "solve-reach", "eval", "verify", "gen"] {
        assert!(out.contains(sub));
    }
}
