//! Check output records against a field schema and test value patterns.

use croissant_tasks::conformance::{check_records, check_value_pattern, parse_records, FieldSpec};
use croissant_tasks::vocab::xsd;

fn main() {
    let spec = vec![
        FieldSpec::new("answer", xsd::STRING).with_pattern("^[A-D]$"),
        FieldSpec::new("score", xsd::FLOAT),
    ];
    let records = parse_records(
        r#"{"answer": "A", "score": 0.9}
{"answer": "E", "score": "0.3"}
{"answer": "AB", "score": "high"}
{"score": 1}
{"answer": "C", "score": 0.1, "rationale": "..."}"#,
    )
    .unwrap();
    for d in check_records(&records, &spec) {
        println!("{}", d.render());
    }

    for (value, pattern) in [("A", "^[A-D]$"), ("a", "^[A-D]$"), ("AB", "[A-D]"), ("x", "[A-D")] {
        match check_value_pattern(value, pattern) {
            Ok(hit) => println!("{value:?} ~ {pattern:?}: {hit}"),
            Err(e) => println!("{pattern:?}: {e}"),
        }
    }
}
