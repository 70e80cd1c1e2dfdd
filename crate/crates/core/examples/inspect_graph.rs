//! Expand a document and look at the node graph.

use croissant_tasks::graph::{expand_document, Resolution};
use croissant_tasks::Ontology;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mmlu_solution.jsonld").to_string());
    let graph = expand_document(&std::fs::read_to_string(&path).unwrap(), &path).unwrap();

    println!("root: {}", graph.root());
    for node in graph.nodes() {
        let types = graph.effective_types(Ontology::builtin(), &node.id).unwrap();
        let types: Vec<String> = types.iter().map(|t| graph.compact(t)).collect();
        println!("{}  [{}]", node.id, types.join(", "));
    }
    println!();
    for (from, prop, to) in graph.references() {
        let state = match graph.resolve(to) {
            Resolution::Defined(_) => "defined",
            Resolution::External => "external",
            Resolution::Missing => "MISSING",
        };
        println!("{from} --{}--> {to} ({state})", graph.compact(prop));
    }
    println!();
    print!("{}", graph.canonical_json());
}
