//! Check that a solution fulfills a problem.
//!
//!     cargo run --example match_solution -- [PROBLEM SOLUTION [RECORDS.jsonl]]

use croissant_tasks::conformance::{apply_expectations, match_solution_with, parse_records, render_match, MatchOptions};
use croissant_tasks::graph::expand_document;
use croissant_tasks::Ontology;

fn load(path: &str) -> croissant_tasks::NodeGraph {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{path}: {e}"));
    expand_document(&text, path).unwrap_or_else(|e| panic!("{e}"))
}

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (problem, solution, records) = match args.as_slice() {
        [p, s] => (p.clone(), s.clone(), None),
        [p, s, r] => (p.clone(), s.clone(), Some(r.clone())),
        _ => (
            format!("{dir}/mmlu_problem.jsonld"),
            format!("{dir}/mmlu_solution.jsonld"),
            Some(format!("{dir}/mmlu_records.jsonl")),
        ),
    };
    let opts = MatchOptions {
        records: records.map(|r| parse_records(&std::fs::read_to_string(&r).unwrap()).unwrap()),
        ..Default::default()
    };
    let mut report = match_solution_with(&load(&problem), &load(&solution), Ontology::builtin(), &opts);
    apply_expectations(&mut report, &["Accuracy=25.9±0.05".parse().unwrap()], false);
    print!("{}", render_match(&report));
}
