mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use croissant_tasks::reporting::{parse_report_json, TOP_LEVEL_KEYS};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_croissant-tasks"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s1_mutant(dir: &Path) -> PathBuf {
    let m = mutants().into_iter().find(|m| m.code == "S1").unwrap();
    write(dir, "b.jsonld", &serde_json::to_string_pretty(&m.document()).unwrap())
}

#[test]
fn validate_golden_exits_zero() {
    let o = bin(&["validate", path(&fixture_path(PROBLEM))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("PASS\n"));
}

#[test]
fn truncated_json_fails_with_json_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.jsonld", &fixture(TASK)[..200]);
    let report = dir.path().join("validation_report.json");
    let o = bin(&["validate", path(&broken), "--report", path(&report)]);
    assert_eq!(o.status.code(), Some(1));
    let r = parse_report_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(!r.per_file[0].json_valid);
    assert!(!r.overall_passed);
}

#[test]
fn one_faulty_file_of_two() {
    let dir = tempfile::tempdir().unwrap();
    let b = s1_mutant(dir.path());
    let a = fixture_path(PROBLEM);
    let o = bin(&["validate", path(&a), path(&b)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let (first, second) = out.split_at(out.find("# ").and_then(|i| out[i + 1..].find("# ").map(|j| i + 1 + j)).unwrap());
    assert!(first.ends_with("PASS\n"));
    assert!(second.contains("S1") && second.ends_with("FAIL (1 violation)\n"));
}

#[test]
fn unreadable_input_exits_two() {
    let o = bin(&["validate", "/definitely/not/here.jsonld"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/definitely/not/here.jsonld"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bin(&[]).status.code(), Some(2));
    assert_eq!(bin(&["validate"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["validate", "--format", "xml", "x"]).status.code(), Some(2));
    // expectations belong to match only
    assert_eq!(bin(&["validate", "--expect", "Accuracy=1", path(&fixture_path(TASK))]).status.code(), Some(2));
    assert_eq!(bin(&["match", path(&fixture_path(PROBLEM))]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn match_pair_and_expectations() {
    let (p, s) = (fixture_path(PROBLEM), fixture_path(SOLUTION));
    let o = bin(&["match", path(&p), path(&s)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("fulfilled: true"));

    let o = bin(&["match", path(&p), path(&s), "--expect", "Accuracy=25.9±0.0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = bin(&["match", path(&p), path(&s), "--expect", "Accuracy=30.0±0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("expect Accuracy=30±0.1: observed 25.9, NOT met"));
}

#[test]
fn match_with_records() {
    let (p, s) = (fixture_path(PROBLEM), fixture_path(SOLUTION));
    let good = fixture_path("mmlu_records.jsonl");
    assert_eq!(bin(&["match", path(&p), path(&s), "--records", path(&good)]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.jsonl", "{\"answer\": \"E\"}\n");
    let o = bin(&["match", path(&p), path(&s), "--records", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("D3"));

    let o = bin(&["match", path(&p), path(&s), "--records", "/no/records.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_problem_skips_match() {
    let dir = tempfile::tempdir().unwrap();
    let m = mutants().into_iter().find(|m| m.code == "R1").unwrap();
    let p = write(dir.path(), "problem.jsonld", &m.document().to_string());
    let o = bin(&["match", path(&p), path(&fixture_path(SOLUTION))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("problem invalid"));
}

#[test]
fn inspect_census() {
    let o = bin(&["inspect", path(&fixture_path(TASK))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["  cr:Task: 1", "  cr:EvaluationTask: 1", "  cr:EvaluationResult: 1"] {
        assert!(out.lines().any(|l| l == line), "{line}");
    }
    let o = bin(&["inspect", path(&fixture_path(PROBLEM))]);
    assert!(stdout(&o).lines().any(|l| l == "  cr:TaskProblem: 3"));

    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.jsonld", r#"{"@type": "cr:Task", "@id": "urn:x"}"#);
    let o = bin(&["inspect", "--format", "json", path(&one)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["census"].as_object().unwrap().len(), 1);

    let broken = write(dir.path(), "broken.jsonld", "{");
    assert_eq!(bin(&["inspect", path(&broken)]).status.code(), Some(2));
}

#[test]
fn report_command_is_deterministic_with_fixed_clock() {
    let dir = tempfile::tempdir().unwrap();
    let b = s1_mutant(dir.path());
    let a = fixture_path(TASK);
    let args = ["report", path(&a), path(&b), "--run-date", "2026-03-01T12:00:00Z"];
    let first = bin(&args);
    let second = bin(&args);
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut sorted = TOP_LEVEL_KEYS.to_vec();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(v["results"]["pass"], 1);
    assert_eq!(v["results"]["fail"], 1);
    assert_eq!(v["run_date"], "2026-03-01T12:00:00Z");
}

#[test]
fn json_format_and_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let b = s1_mutant(dir.path());
    let files = [fixture_path(TASK), b.clone(), fixture_path(PROBLEM), fixture_path(SOLUTION)];
    let mut args = vec!["validate", "--format", "json"];
    args.extend(files.iter().map(|p| path(p)));
    let o = bin(&args);
    let v: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v.iter().map(|x| x["source_name"].as_str().unwrap()).collect();
    assert_eq!(names, files.iter().map(|p| path(p)).collect::<Vec<_>>());
    assert_eq!(v[1]["conforms"], false);
}

#[test]
fn custom_ontology_flag() {
    let dir = tempfile::tempdir().unwrap();
    let ttl = write(dir.path(), "o.ttl", croissant_tasks::ontology::BUILTIN_TURTLE);
    let o = bin(&["validate", "--ontology", path(&ttl), path(&fixture_path(TASK))]);
    assert_eq!(o.status.code(), Some(0));
    let bad = write(dir.path(), "bad.ttl", "ex:a a [ ] .");
    let o = bin(&["validate", "--ontology", path(&bad), path(&fixture_path(TASK))]);
    assert_eq!(o.status.code(), Some(2));
}
