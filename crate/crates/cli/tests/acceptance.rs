//! Acceptance suite. Prints one pass/fail line per criterion and fails if
//! any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use limitgame::gen::{gen_sized_instance, GenParams};
use limitgame::report::solve;
use limitgame::verify::{run_suite, Criterion};
use limitgame_cli::run_command;

const SEED: u64 = 20240607;
const INSTANCES: usize = 200;

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_command(std::iter::once("limitgame").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

/// The shipped files give the documented values through the command line.
fn shipped_examples() -> Vec<String> {
    let mut problems = Vec::new();
    let db = data("db.dfa");
    let expect_value = |arena: &str, vertex: &str, value: &str, problems: &mut Vec<String>| {
        let (code, out) = cli(&["solve", "--arena", &data(arena), "--dfa", &db, "--vertex", vertex]);
        let got = out.lines().nth(1).and_then(|l| l.split_whitespace().nth(1)).unwrap_or("").to_string();
        if code != 0 || got != value {
            problems.push(format!("{arena} {vertex}: exit {code}, value {got:?}, expected {value}"));
        }
    };
    expect_value("g1.arena", "v0", "5", &mut problems);
    expect_value("g1.arena", "v1", "5", &mut problems);
    expect_value("g2.arena", "v0", "4", &mut problems);
    expect_value("ginf.arena", "v0", "inf", &mut problems);
    let (code, out) = cli(&["eval", "--arena", &data("g1.arena"), "--dfa", &db, "--cycle", "v0,v1"]);
    if code != 0 || out.trim() != "5" {
        problems.push(format!("eval on the G1 duel lasso: exit {code}, output {out:?}"));
    }
    problems
}

#[test]
fn acceptance() {
    let params = GenParams { seed: SEED, ..GenParams::default() };
    assert_eq!(
        (params.max_vertices, params.max_dfa_states, params.max_out_degree, params.max_weight),
        (6, 4, 3, 5)
    );
    let start = Instant::now();
    let mut summary = run_suite(&params, INSTANCES).expect("suite runs");
    let elapsed = start.elapsed();
    let shipped = shipped_examples();
    if !shipped.is_empty() {
        summary.findings.entry(Criterion::WorkedExamples).or_default().extend(shipped);
    }

    println!("acceptance: {INSTANCES} instances, seed {SEED}, {elapsed:.2?}");
    for c in Criterion::ALL {
        match summary.findings.get(&c) {
            None => println!("PASS {c}"),
            Some(f) => {
                println!("FAIL {c}: {} findings", f.len());
                for d in f.iter().take(5) {
                    println!("       {d}");
                }
            }
        }
    }
    println!("{}/{} instances matched on every check", summary.matched, summary.instances);

    let smoke = GenParams { max_dfa_states: 10, accepting_fraction: 0.3, seed: SEED, ..GenParams::default() };
    let (a, d) = gen_sized_instance(&smoke, 200).unwrap();
    let t = Instant::now();
    solve(&a, &d, true).unwrap();
    let smoke_time = t.elapsed();
    let smoke_ok = smoke_time < Duration::from_secs(10);
    println!(
        "{} smoke benchmark: 200 vertices, 10 DFA states, solved in {smoke_time:.2?}",
        if smoke_ok { "PASS" } else { "FAIL" }
    );

    assert!(summary.all_passed(), "acceptance criteria failed: {:?}", summary.findings.keys().collect::<Vec<_>>());
    assert_eq!(summary.matched, INSTANCES);
    assert!(elapsed < Duration::from_secs(60), "suite took {elapsed:?}");
    assert!(smoke_ok);
}
