//! Query the embedded vocabulary.

use croissant_tasks::ontology::Ontology;

fn main() {
    let ont = Ontology::builtin();
    println!("{} classes, {} declared properties", ont.classes().count(), ont.properties().filter(|p| p.declared).count());
    for class in ont.classes() {
        let up: Vec<String> = ont
            .superclass_closure(&class.id)
            .iter()
            .filter(|c| **c != class.id)
            .map(|c| ont.prefixes().compact(c))
            .collect();
        println!("  {} < {}", ont.prefixes().compact(&class.id), up.join(", "));
    }
    let evaluation = ont.iri("croissant:evaluation").unwrap();
    let ranges: Vec<String> = ont
        .property_ranges(&evaluation)
        .unwrap()
        .iter()
        .map(|r| ont.prefixes().compact(r))
        .collect();
    println!("croissant:evaluation ranges over {}", ranges.join(" | "));
}
