//! Break a conformant problem in small ways and watch the codes change.

use croissant_tasks::shapes::{builtin_shapes, render_text, validate_document};
use croissant_tasks::Ontology;
use serde_json::{json, Value};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mmlu_problem.jsonld");
    let original: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();

    let edits: Vec<(&str, fn(&mut Value))> = vec![
        ("empty field list", |d| d["cr:output"]["cr:schema"]["cr:field"] = json!([])),
        ("schema is not a RecordSet", |d| d["cr:output"]["cr:schema"]["@type"] = json!("sc:Dataset")),
        ("subtask is a Dataset", |d| d["cr:subTask"][1]["@type"] = json!("sc:Dataset")),
        ("problem with a concrete execution", |d| {
            d["cr:execution"] = json!({"@type": "cr:ExecutionConfig", "@id": "ex:mmlu#run"})
        }),
    ];
    for (label, edit) in edits {
        let mut doc = original.clone();
        edit(&mut doc);
        let verdict = validate_document(&doc.to_string(), label, Ontology::builtin(), builtin_shapes());
        println!("## {label}");
        print!("{}", render_text(&verdict));
    }
}
