//! Build validation_report.json for a run.

use std::collections::BTreeMap;

use croissant_tasks::reporting::{build_report, render_report_json, render_summary, standard_stages, FixedClock};
use croissant_tasks::shapes::{builtin_shapes, validate_document};
use croissant_tasks::Ontology;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let files = [("problem.jsonld", "mmlu_problem.jsonld"), ("solutions/small_fewshot.jsonld", "mmlu_solution.jsonld")];
    let verdicts: Vec<_> = files
        .iter()
        .map(|(name, fixture)| {
            let text = std::fs::read_to_string(format!("{dir}/{fixture}")).unwrap();
            validate_document(&text, name, Ontology::builtin(), builtin_shapes())
        })
        .collect();

    let params = BTreeMap::from([("mode".to_string(), "example".to_string())]);
    let clock = FixedClock::parse("2026-01-01T00:00:00Z").unwrap();
    let mut report = build_report(&verdicts, params, standard_stages(&verdicts), &clock);
    report.output_files.push("validation_report.json".into());

    print!("{}", render_summary(&verdicts, None));
    print!("{}", render_report_json(&report));
}
