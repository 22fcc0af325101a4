use std::fs;
use std::path::Path;
use std::process::Command;

use qgame::cli::run;
use qgame::formats::{parse_distribution, write_completion};

fn qgame(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qgame").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const PD: &str = "alpha 7\nbeta 9\ndelta 4\nepsilon 1\ntheta 5\nomega 3\n";
const SCALED: &str = "alpha 90\nbeta 100\ndelta 1/5\nepsilon 9/10\ntheta 1\nomega 1\n";

fn example_input(dir: &Path) -> String {
    let (_, input) = qgame::cli::worked_example();
    write(dir, "example.in", &write_completion(&input))
}

#[test]
fn reproduce_example_prints_exact_and_rounded_margins() {
    let (code, out, _) = qgame(&["reproduce-paper"]);
    assert_eq!(code, 0);
    assert!(out.contains("ccc_margins: 10663/100000 9643/100000 43/2500\n"));
    assert!(out.contains("ccc_margins_rounded: 0.106 0.096 0.017\n"));
    assert!(out.contains("factorizable: false\n"));
    assert_eq!(qgame(&["reproduce-paper"]).1, out);
    let (_, dec, _) = qgame(&["reproduce-paper", "--decimal"]);
    assert!(dec.contains("ccc_margins: 0.106630 0.0964300 0.0172000\n"));
}

#[test]
fn validate_game_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = qgame(&["validate-game", &write(dir.path(), "pd.game", PD)]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: valid generalized PD"));
    let (code, out, _) = qgame(&["validate-game", &write(dir.path(), "scaled.game", SCALED)]);
    assert_eq!(code, 1);
    assert!(out.contains("4 of 11 conditions fail"));
    assert!(out.contains("(b) theta > omega: fails"));
}

#[test]
fn classical_ne_lists_the_unique_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "pd.game", PD);
    let (code, out, _) = qgame(&["classical-ne", &game]);
    assert_eq!(code, 0);
    assert!(out.starts_with("pure_equilibria: (S2,S2,S2)\n"));
    let (_, out, _) = qgame(&["classical-ne", &game, "--profile", "0,0,0"]);
    assert!(out.contains("margins: 2 2 2\nnash: true"));
}

#[test]
fn complete_then_factor_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = example_input(dir.path());
    let dist = dir.path().join("example.dist");
    let (code, _, _) = qgame(&["complete", &input, "-o", dist.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = qgame(&["factor-check", dist.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: non-factorizable"));
    assert!(out.contains("first_mismatch: p1\ntable_value: 1/10\nproduct_value: 513/5000"));

    let game = write(dir.path(), "scaled.game", SCALED);
    let (code, out, _) = qgame(&["analyze-dist", &game, dist.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("ccc_margins: 10663/100000 9643/100000 43/2500"));
    assert!(out.contains("ddd_margins: 19/500 27/500 1/20"));
}

#[test]
fn json_distributions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = example_input(dir.path());
    let (_, text, _) = qgame(&["complete", &input]);
    let (code, json, _) = qgame(&["--json", "complete", &input]);
    assert_eq!(code, 0);
    assert_eq!(parse_distribution(&json).unwrap(), parse_distribution(&text).unwrap());
    let json_path = write(dir.path(), "example.json", &json);
    let (_, out, _) = qgame(&["--json", "factor-check", &json_path]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "non-factorizable");

    let game = write(dir.path(), "scaled.game", SCALED);
    let (_, out, _) = qgame(&["--json", "search", &game]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let d = qgame::formats::distribution_from_json(&v["distribution"]).unwrap();
    let reread = parse_distribution(&serde_json::to_string(&v["distribution"]).unwrap()).unwrap();
    assert_eq!(d, reread);
    assert_eq!(v["objective"], "89/200");
}

#[test]
fn malformed_input_exits_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.game", "alpha 7\nbeta x\n");
    let (code, _, err) = qgame(&["validate-game", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2, column 6"), "{err}");
    let (code, _, err) = qgame(&["factor-check", &write(dir.path(), "bad.dist", "1 1\n99 0\n")]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2, column 1"));
    assert_eq!(qgame(&["validate-game", "/nonexistent/file"]).0, 2);
    assert_eq!(qgame(&["simulate"]).0, 2);
    assert_eq!(qgame(&["classical-ne", &write(dir.path(), "pd.game", PD), "--profile", "1/2,3/2,0"]).0, 2);
}

#[test]
fn violated_constraints_exit_with_status_one() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "pd.game", PD);
    let (code, out, _) = qgame(&["analyze-dist", &game, &write(dir.path(), "u.dist", &uniform())]);
    assert_eq!(code, 1);
    assert!(out.contains("embedding: fails"));
    let infeasible = "p1 1\np3 1\np5 1\np6 1\np13 0\np15 0\np18 0\np20 0\np22 0\np27 0\n";
    let (code, _, err) = qgame(&["complete", &write(dir.path(), "x.in", infeasible)]);
    assert_eq!(code, 1);
    assert!(err.contains("p_2"), "{err}");
}

fn uniform() -> String {
    (1..=64).map(|i| format!("{i} 1/8\n")).collect()
}

#[test]
fn simulate_reports_seeded_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let game = write(dir.path(), "pd.game", PD);
    let dist = write(dir.path(), "u.dist", &uniform());
    let args = ["simulate", &game, &dist, "--profile", "1/2,1/2,1/2", "--runs", "20000", "--seed", "4", "--workers", "2"];
    let (code, out, _) = qgame(&args);
    assert_eq!(code, 0);
    assert!(out.contains("analytic: 19/4 19/4 19/4"));
    assert!(out.contains("runs: 20000\nseed: 4\n"));
    assert_eq!(qgame(&args).1, out);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_qgame");
    let ok = Command::new(bin).arg("reproduce-paper").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("43/2500"));
    let bad = Command::new(bin).args(["factor-check", "/nonexistent"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
