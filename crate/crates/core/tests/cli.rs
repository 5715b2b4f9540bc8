use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value as Json;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvr-undo"))
        .args(args)
        .env_remove("MVR_UNDO_SEED")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("mvr-undo-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn bundled_fixtures_pass() {
    for (name, _) in mvr_undo::fixtures::BUNDLED {
        let out = cli(&["run", fixture(name).to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn json_lines_have_header_steps_and_summary() {
    let out = cli(&[
        "run",
        "--json",
        fixture("walkthrough.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let records: Vec<Json> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records[0]["kind"], "header");
    assert_eq!(records[0]["schema_version"], 1);
    assert!(records[1..records.len() - 1]
        .iter()
        .all(|r| r["kind"] == "step"));
    let summary = records.last().unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["failed"], 0);
}

#[test]
fn failed_check_exits_one() {
    let path = scratch(
        "fail.json",
        r#"{"replicas":["A"],"steps":[{"op":"set","replica":"A","value":1},{"op":"check","replica":"A","values":[2]}]}"#,
    );
    let out = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAILED"));
}

#[test]
fn malformed_scenario_exits_two_with_position() {
    let path = scratch(
        "bad.json",
        "{\"replicas\": [\"A\"],\n \"steps\": [{\"op\": \"jump\"}]}",
    );
    let out = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");

    let path = scratch(
        "unknown.json",
        r#"{"replicas":["A"],"steps":[{"op":"undo","replica":"Z"}]}"#,
    );
    assert_eq!(cli(&["run", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        cli(&["run", "/definitely/not/here.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn faulty_delivery_keeps_walkthrough_passing() {
    let path = fixture("walkthrough.json");
    let out = cli(&[
        "run",
        path.to_str().unwrap(),
        "--seed",
        "7",
        "--dup-rate",
        "0.3",
        "--reorder",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = cli(&["run", path.to_str().unwrap(), "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn seed_falls_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mvr-undo"))
        .args([
            "run",
            "--json",
            fixture("undo_revives_hidden_set.json").to_str().unwrap(),
        ])
        .env("MVR_UNDO_SEED", "42")
        .output()
        .unwrap();
    let first = String::from_utf8(out.stdout).unwrap();
    let header: Json = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(header["seed"], 42);
}

#[test]
fn bench_json_reports_steps() {
    let out = cli(&["bench", "--lengths", "5,20", "--runs", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let records: Vec<Json> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records[0]["kind"], "bench_header");
    assert_eq!(records.len(), 1 + 6);
    let uncached = records
        .iter()
        .find(|r| r["mode"] == "redo-head-uncached" && r["n"] == 20)
        .unwrap();
    assert_eq!(uncached["steps"], 21);

    let out = cli(&[
        "bench",
        "--lengths",
        "5",
        "--runs",
        "2",
        "--json",
        "--no-cache",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("redo-head-cached\",\"n\""));
    assert_eq!(cli(&["bench", "--runs", "0"]).status.code(), Some(2));
}
