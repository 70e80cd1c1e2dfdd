//! Validate documents and print diagnostics.
//!
//!     cargo run --example validate -- [FILE...]
//!
//! Without arguments, validates the bundled MMLU fixtures.

use croissant_tasks::shapes::{builtin_shapes, render_text, validate_document};
use croissant_tasks::Ontology;

fn main() {
    let mut files: Vec<String> = std::env::args().skip(1).collect();
    if files.is_empty() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
        files = ["mmlu_task.jsonld", "mmlu_problem.jsonld", "mmlu_solution.jsonld"]
            .iter()
            .map(|f| format!("{dir}/{f}"))
            .collect();
    }
    let mut all_passed = true;
    for path in &files {
        let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{path}: {e}"));
        let verdict = validate_document(&text, path, Ontology::builtin(), builtin_shapes());
        println!("# {path}");
        print!("{}", render_text(&verdict));
        all_passed &= verdict.passed();
    }
    std::process::exit(if all_passed { 0 } else { 1 });
}
