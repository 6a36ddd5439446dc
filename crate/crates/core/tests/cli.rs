use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use kgrid::cli::run;
use kgrid::format::{parse_puzzle, parse_solution, parse_solutions};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn kgrid(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kgrid").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(tag: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("kgrid-cli-{}-{tag}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn solve_pair() {
    let (code, out, _) = kgrid(&["solve", &fixture("pair.kgrid")]);
    assert_eq!(code, 0);
    let conns: Vec<&str> = out.lines().filter(|l| l.starts_with("conn")).collect();
    assert_eq!(conns, vec!["conn 0 0 1 0 1"]);
}

#[test]
fn screen_odd_sum() {
    let (code, out, _) = kgrid(&["screen", &fixture("odd-sum.kgrid")]);
    assert_eq!(code, 2);
    assert!(out.contains("C2 at grid"));
    let (code, json, _) = kgrid(&["screen", &fixture("odd-sum.kgrid"), "--json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["violations"][0]["condition"], "C2");
    assert!(v["violations"][0]["node"].is_null());
}

#[test]
fn screen_passes_clean_grid() {
    let (code, out, _) = kgrid(&["screen", &fixture("crossed-pairs.kgrid")]);
    assert_eq!(code, 0);
    assert_eq!(out, "verdict: maybe-solvable\n");
}

#[test]
fn tau_stalls_on_pinwheel_like() {
    let (code, json, _) = kgrid(&["tau", &fixture("pinwheel-like.kgrid"), "--json"]);
    assert_eq!(code, 3);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["status"], "stalled");
    assert!(v["trace"].as_array().unwrap().is_empty());
    assert!(v["connections"].as_array().unwrap().is_empty());
}

#[test]
fn tau_trace_text() {
    let (code, out, _) = kgrid(&["tau", &fixture("square2.kgrid"), "--trace"]);
    assert_eq!(code, 0);
    assert!(out.contains("# trace: 3 steps"));
    assert!(out.contains("R4 omega-star at (0,0) word 12"));
    let sol = parse_solution(&out).unwrap();
    assert_eq!(sol.len(), 4);
}

#[test]
fn tau_reports_unsolvable() {
    let (code, out, _) = kgrid(&["tau", &fixture("crossed-pairs.kgrid")]);
    assert_eq!(code, 2);
    assert!(out.contains("# status: unsolvable"));
}

#[test]
fn solve_methods() {
    let p = fixture("pinwheel-like.kgrid");
    let (code, out, _) = kgrid(&["solve", &p, "--method", "tau"]);
    assert_eq!(code, 3);
    assert!(out.contains("# engine: tau"));
    let (code, out, _) = kgrid(&["solve", &p, "--method", "auto"]);
    assert_eq!(code, 0);
    assert!(out.contains("# engine: brute"));
    let (code, out, _) = kgrid(&[
        "solve",
        &fixture("worked-example.kgrid"),
        "--method",
        "auto",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("# engine: tau"));
    let (code, _, _) = kgrid(&[
        "solve",
        &fixture("crossed-pairs.kgrid"),
        "--method",
        "brute",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn solve_reports_non_unique() {
    let p = temp_file(
        "many.kgrid",
        "k 3\nnode 0 0 3\nnode 1 0 4\nnode 2 0 3\nnode 0 1 3\nnode 1 1 4\nnode 2 1 3\n",
    );
    let (code, out, _) = kgrid(&["solve", &p, "--method", "brute"]);
    assert_eq!(code, 3);
    assert!(out.contains("not unique"));
    let grid = parse_puzzle(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert!(kgrid::format::verify(&grid, &parse_solution(&out).unwrap()).is_ok());
    let (code, out, _) = kgrid(&["solve", &p, "--method", "brute", "--limit", "1"]);
    assert_eq!(code, 3);
    assert!(out.contains("uniqueness unknown"));
    let (code, _, _) = kgrid(&["verify", &p, &temp_file("many.sol", &out)]);
    assert_eq!(code, 0);
}

#[test]
fn enumerate_output_verifies() {
    let p = temp_file(
        "enum.kgrid",
        "k 3\nnode 0 0 3\nnode 1 0 4\nnode 2 0 3\nnode 0 1 3\nnode 1 1 4\nnode 2 1 3\n",
    );
    let (code, out, _) = kgrid(&["enumerate", &p, "--limit", "5"]);
    assert_eq!(code, 0);
    assert_eq!(parse_solutions(&out).unwrap().len(), 5);
    assert!(out.ends_with("# 5 solutions, limit reached\n"));
    let sol = temp_file("enum.sol", &out);
    let (code, report, _) = kgrid(&["verify", &p, &sol]);
    assert_eq!(code, 0);
    assert_eq!(report.lines().filter(|l| l.ends_with(": ok")).count(), 5);
}

#[test]
fn enumerate_zero_solutions() {
    let (code, out, _) = kgrid(&["enumerate", &fixture("crossed-pairs.kgrid"), "--limit", "3"]);
    assert_eq!(code, 2);
    assert_eq!(out, "# 0 solutions, search complete\n");
}

#[test]
fn verify_fixtures_and_rejections() {
    for name in [
        "pair",
        "chain",
        "square2",
        "worked-example",
        "pinwheel-like",
    ] {
        let (code, out, _) = kgrid(&[
            "verify",
            &fixture(&format!("{name}.kgrid")),
            &fixture(&format!("{name}.sol")),
        ]);
        assert_eq!(code, 0, "{name}: {out}");
    }
    let bad = temp_file("bad.sol", "conn 0 0 1 0 2\n");
    let (code, out, _) = kgrid(&["verify", &fixture("chain.kgrid"), &bad]);
    assert_eq!(code, 2);
    assert!(out.contains("rejected"));
    let empty = temp_file("empty.sol", "# nothing\n");
    assert_eq!(kgrid(&["verify", &fixture("pair.kgrid"), &empty]).0, 2);
}

#[test]
fn count_table_outputs() {
    let (code, csv, _) = kgrid(&["count-table", "--neighbors", "4", "--k-max", "10", "--csv"]);
    assert_eq!(code, 0);
    let row10: Vec<&str> = csv.lines().nth(10).unwrap().split(',').collect();
    assert_eq!(row10[0], "10");
    assert_eq!(row10[1 + 20], "891");
    let row2: Vec<&str> = csv.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row2[1 + 7], "4");
    let (code, text, _) = kgrid(&["count-table", "--neighbors", "2", "--k-max", "2"]);
    assert_eq!(code, 0);
    assert!(text.contains("2 | 1 2 3 2 1 | 3 @ 2 | 2"));
    assert_eq!(
        kgrid(&["count-table", "--neighbors", "5", "--k-max", "2"]).0,
        1
    );
}

#[test]
fn min_k() {
    assert_eq!(
        kgrid(&["min-k", &fixture("chain.kgrid"), "--k-max", "3"]),
        (0, "min k: 2\n".into(), String::new())
    );
    let (code, _, _) = kgrid(&["min-k", &fixture("crossed-pairs.kgrid"), "--k-max", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn gen_is_deterministic_and_parses() {
    let args = [
        "gen",
        "--seed",
        "7",
        "--width",
        "4",
        "--height",
        "4",
        "--density",
        "0.6",
        "--k",
        "2",
        "--solvable",
    ];
    let (code, a, _) = kgrid(&args);
    assert_eq!(code, 0);
    assert_eq!(a, kgrid(&args).1);
    let grid = parse_puzzle(&a).unwrap();
    assert_eq!(grid.k(), 2);
    let (code, _, err) = kgrid(&[
        "gen",
        "--seed",
        "1",
        "--width",
        "3",
        "--height",
        "4",
        "--density",
        "0.5",
        "--k",
        "2",
        "--symmetric",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("square"));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(kgrid(&[]).0, 1);
    assert_eq!(kgrid(&["frobnicate"]).0, 1);
    assert_eq!(kgrid(&["enumerate", &fixture("pair.kgrid")]).0, 1);
    let (code, out, _) = kgrid(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("count-table"));
    let (code, _, err) = kgrid(&["screen", "/nonexistent/puzzle.kgrid"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("kgrid: "));
    let dup = temp_file("dup.kgrid", "k 2\nnode 0 0 2\nnode 0 0 3\n");
    let (code, _, err) = kgrid(&["screen", &dup]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3"));
}

#[test]
fn binary_reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kgrid"))
        .args(["solve", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"k 1\nnode 0 0 1\nnode 0 4 1\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("conn 0 0 0 4 1"));
}
