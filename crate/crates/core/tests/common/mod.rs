#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;

use croissant_tasks::graph::{expand_document, NodeGraph};
use croissant_tasks::shapes::{builtin_shapes, validate_document, Diagnostic, FileVerdict};
use croissant_tasks::Ontology;
use serde_json::{json, Value as Json};

pub const TASK: &str = "mmlu_task.jsonld";
pub const PROBLEM: &str = "mmlu_problem.jsonld";
pub const SOLUTION: &str = "mmlu_solution.jsonld";
pub const GOLDEN: [&str; 3] = [TASK, PROBLEM, SOLUTION];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture_json(name: &str) -> Json {
    serde_json::from_str(&fixture(name)).unwrap()
}

pub fn graph(name: &str) -> NodeGraph {
    expand_document(&fixture(name), name).unwrap()
}

pub fn validate_text(text: &str, name: &str) -> FileVerdict {
    validate_document(text, name, Ontology::builtin(), builtin_shapes())
}

pub fn validate_json(doc: &Json, name: &str) -> FileVerdict {
    validate_text(&serde_json::to_string_pretty(doc).unwrap(), name)
}

pub fn warnings(v: &FileVerdict) -> Vec<Diagnostic> {
    v.warnings().cloned().collect()
}

fn at<'a>(doc: &'a mut Json, pointer: &str) -> &'a mut Json {
    doc.pointer_mut(pointer).unwrap_or_else(|| panic!("no {pointer}"))
}

fn set(doc: &mut Json, pointer: &str, value: Json) {
    *at(doc, pointer) = value;
}

fn remove(doc: &mut Json, pointer: &str, key: &str) {
    at(doc, pointer)
        .as_object_mut()
        .unwrap()
        .remove(key)
        .unwrap_or_else(|| panic!("no {key} at {pointer}"));
}

fn insert(doc: &mut Json, pointer: &str, key: &str, value: Json) {
    let prev = at(doc, pointer).as_object_mut().unwrap().insert(key.into(), value);
    assert!(prev.is_none(), "{key} already at {pointer}");
}

/// A single-fault edit of one golden fixture.
pub struct Mutant {
    pub code: &'static str,
    pub base: &'static str,
    pub what: &'static str,
    pub edit: fn(&mut Json),
}

impl Mutant {
    pub fn document(&self) -> Json {
        let mut doc = fixture_json(self.base);
        (self.edit)(&mut doc);
        doc
    }
}

/// One mutant per catalog constraint, each expected to yield exactly one
/// violation with that code.
pub fn mutants() -> Vec<Mutant> {
    vec![
        Mutant { code: "T1", base: TASK, what: "input typed SoftwareApplication",
            edit: |d| set(d, "/cr:input/@type", json!("sc:SoftwareApplication")) },
        Mutant { code: "T2", base: TASK, what: "output typed SoftwareApplication",
            edit: |d| set(d, "/cr:output/@type", json!("sc:SoftwareApplication")) },
        Mutant { code: "T3", base: TASK, what: "implementation typed Dataset",
            edit: |d| set(d, "/cr:implementation/@type", json!("sc:Dataset")) },
        Mutant { code: "T4", base: TASK, what: "execution typed Dataset",
            edit: |d| insert(d, "", "cr:execution", json!({"@type": "sc:Dataset", "@id": "ex:mmlu_small_fewshot#execution"})) },
        Mutant { code: "T5", base: TASK, what: "evaluation typed ExecutionConfig",
            edit: |d| set(d, "/cr:evaluation/@type", json!("cr:ExecutionConfig")) },
        Mutant { code: "T6", base: PROBLEM, what: "stem subtask typed Dataset",
            edit: |d| set(d, "/cr:subTask/1/@type", json!("sc:Dataset")) },
        Mutant { code: "P1", base: PROBLEM, what: "stem subtask without input spec and output",
            edit: |d| {
                remove(d, "/cr:subTask/1", "cr:output");
                at(d, "/cr:subTask/1/cr:input").as_array_mut().unwrap().remove(0);
            } },
        Mutant { code: "P2", base: PROBLEM, what: "problem execution is an ExecutionConfig",
            edit: |d| insert(d, "", "cr:execution", json!({"@type": "cr:ExecutionConfig", "@id": "ex:mmlu#execution"})) },
        Mutant { code: "P3", base: PROBLEM, what: "humanities evaluation is an ExecutionSpec",
            edit: |d| set(d, "/cr:subTask/0/cr:evaluation", json!({"@type": "cr:ExecutionSpec"})) },
        Mutant { code: "S1", base: SOLUTION, what: "root isBasedOn removed",
            edit: |d| remove(d, "", "sc:isBasedOn") },
        Mutant { code: "S2", base: SOLUTION, what: "humanities evaluation is an EvaluationSpec",
            edit: |d| set(d, "/cr:subTask/0/cr:evaluation/@type", json!("cr:EvaluationSpec")) },
        Mutant { code: "S3", base: SOLUTION, what: "humanities implementation removed",
            edit: |d| remove(d, "/cr:subTask/0", "cr:implementation") },
        Mutant { code: "O1", base: PROBLEM, what: "output schema typed Dataset",
            edit: |d| set(d, "/cr:output/cr:schema/@type", json!("sc:Dataset")) },
        Mutant { code: "R1", base: PROBLEM, what: "output field list emptied",
            edit: |d| set(d, "/cr:output/cr:schema/cr:field", json!([])) },
        Mutant { code: "F1", base: PROBLEM, what: "answer dataType removed",
            edit: |d| remove(d, "/cr:output/cr:schema/cr:field/0", "cr:dataType") },
        Mutant { code: "E1", base: SOLUTION, what: "humanities result value removed",
            edit: |d| remove(d, "/cr:subTask/0/cr:evaluation/cr:evaluationResults/0", "cr:value") },
        Mutant { code: "E2", base: SOLUTION, what: "humanities evaluatedSolution removed",
            edit: |d| remove(d, "/cr:subTask/0/cr:evaluation", "cr:evaluatedSolution") },
    ]
}

/// Checks one mutant; `Err` explains the mismatch.
pub fn check_mutant(m: &Mutant) -> Result<FileVerdict, String> {
    let golden = validate_text(&fixture(m.base), m.base);
    let v = validate_json(&m.document(), m.base);
    let violations: Vec<&Diagnostic> = v.violations().collect();
    if v.passed() {
        return Err(format!("{} ({}) passed", m.code, m.what));
    }
    if violations.len() != 1 || violations[0].constraint != m.code {
        let got: Vec<String> = violations.iter().map(|d| d.render()).collect();
        return Err(format!("{} ({}): expected exactly one {} violation, got {got:?}", m.code, m.what, m.code));
    }
    if warnings(&v) != warnings(&golden) {
        return Err(format!("{} ({}): warnings changed: {:?}", m.code, m.what, warnings(&v)));
    }
    Ok(v)
}

pub const METRIC_POOL: [&str; 4] = ["Accuracy", "F1-Score", "BLEU", "Exact Match"];

pub fn metric_problem(expected: &[&str]) -> String {
    json!({
        "@context": {"ex": "http://example.org/"},
        "@type": "cr:TaskProblem",
        "@id": "ex:p",
        "cr:output": {"@type": "cr:OutputSpec", "@id": "ex:p#out",
            "cr:schema": {"@type": "cr:RecordSet", "cr:field": [{"sc:name": "y", "cr:dataType": "xsd:string"}]}},
        "cr:evaluation": {"@type": "cr:EvaluationSpec", "@id": "ex:p#eval", "cr:expectedMetric": expected},
    })
    .to_string()
}

pub fn metric_solution(results: &[(&str, f64)]) -> String {
    let results: Vec<Json> = results
        .iter()
        .map(|(m, v)| json!({"cr:metric": m, "cr:value": v}))
        .collect();
    json!({
        "@context": {"ex": "http://example.org/"},
        "@type": "cr:TaskSolution",
        "@id": "ex:s",
        "sc:isBasedOn": {"@id": "ex:p"},
        "cr:implementation": {"@type": "sc:SoftwareApplication", "@id": "ex:s#impl"},
        "cr:evaluation": {"@type": "cr:EvaluationTask", "@id": "ex:s#eval",
            "cr:evaluatedSolution": {"@id": "ex:s"}, "cr:evaluationResults": results},
    })
    .to_string()
}
