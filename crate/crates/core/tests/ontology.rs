use croissant_tasks::ontology::{builtin_ontology, parse_ontology, OntologyError, BUILTIN_TURTLE};
use croissant_tasks::vocab::{cr, sc};
use croissant_tasks::{Iri, Ontology};

fn iri(s: &str) -> Iri {
    Iri::new(s)
}

/// Counts subjects declared with `a <kind>` by plain text scan.
fn scan(kind: &str) -> usize {
    let re = regex::Regex::new(&format!(r"(?m)^\S+ a {kind}\b")).unwrap();
    re.find_iter(BUILTIN_TURTLE).count()
}

#[test]
fn builtin_counts_match_scan_oracle() {
    let ont = Ontology::builtin();
    assert_eq!(scan("rdf:Class"), 14);
    assert_eq!(scan("rdf:Property"), 17);
    assert_eq!(ont.classes().count(), scan("rdf:Class"));
    assert_eq!(ont.properties().filter(|p| p.declared).count(), scan("rdf:Property"));
}

#[test]
fn builtin_equals_parse_of_embedded_text() {
    assert_eq!(&builtin_ontology(), Ontology::builtin());
    assert_eq!(parse_ontology(BUILTIN_TURTLE).unwrap(), builtin_ontology());
    assert!(Ontology::builtin().class(&iri(cr::EXECUTION_TRACE)).is_some());
}

#[test]
fn prefix_only_text() {
    let text = BUILTIN_TURTLE.lines().take_while(|l| l.starts_with("@prefix")).collect::<Vec<_>>().join("\n");
    let ont = parse_ontology(&text).unwrap();
    assert_eq!((ont.classes().count(), ont.properties().count()), (0, 0));
    assert_eq!(ont.prefixes().len(), text.lines().count());
}

#[test]
fn subclass_closure() {
    let ont = Ontology::builtin();
    let sub = |a: &str, b: &str| ont.is_subclass_of(&iri(a), &iri(b)).unwrap();
    for c in [cr::TASK_PROBLEM, cr::TASK_SOLUTION, cr::EVALUATION_TASK] {
        assert!(sub(c, cr::TASK));
        assert!(sub(c, sc::CREATIVE_WORK));
    }
    assert!(sub(cr::TASK, sc::CREATIVE_WORK));
    assert!(!sub(cr::TASK, cr::TASK_SOLUTION));
    assert!(sub(cr::EXECUTION_CONFIG, cr::EXECUTION_INFO));
    assert!(sub(cr::EXECUTION_TRACE, cr::EXECUTION_INFO));
    for c in ont.classes() {
        assert!(ont.is_subclass_of(&c.id, &c.id).unwrap());
    }
    assert!(matches!(
        ont.is_subclass_of(&iri("http://example.org/Unknown"), &iri(cr::TASK)),
        Err(OntologyError::UnknownClass(_))
    ));
    let problem = ont.class(&iri(cr::TASK_PROBLEM)).unwrap();
    assert_eq!(problem.superclasses, vec![iri(cr::TASK)]);
}

#[test]
fn property_ranges() {
    let ont = Ontology::builtin();
    let names = |p: &str| -> Vec<String> {
        ont.property_ranges(&iri(p)).unwrap().iter().map(|i| i.as_str().to_string()).collect()
    };
    assert_eq!(names(cr::EVALUATION), vec![cr::EVALUATION_SPEC.to_string(), cr::EVALUATION_TASK.to_string()]);
    assert_eq!(names(cr::SUB_TASK), vec![cr::TASK.to_string()]);
    assert_eq!(
        names(cr::VALUE),
        vec!["https://schema.org/Number", "https://schema.org/QuantitativeValue", "https://schema.org/Text"]
    );
    assert!(ont.property_ranges(&iri("http://mlcommons.org/croissant/nope")).is_err());
    let based_on = ont.property(&iri(sc::IS_BASED_ON)).unwrap();
    assert!(!based_on.declared && based_on.ranges.contains(&iri(cr::TASK_PROBLEM)));
}

#[test]
fn schema_classes_are_opaque_leaves() {
    let ont = Ontology::builtin();
    let external = ont.external_classes();
    assert!(external.contains(&iri(sc::CREATIVE_WORK)));
    assert!(ont.superclass_closure(&iri(sc::CREATIVE_WORK)).len() == 1);
}

#[test]
fn turtle_round_trip() {
    let ont = Ontology::builtin();
    assert_eq!(&parse_ontology(&ont.to_turtle()).unwrap(), ont);
}

#[test]
fn unsupported_constructs_are_errors_with_positions() {
    let head = "@prefix ex: <http://example.org/> .\n@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";
    for bad in ["ex:a a rdf:Class ; ex:p [ ex:q ex:r ] .", "ex:a ex:p ( ex:b ) .", "ex:a a rdf:Class", "zz:a a rdf:Class ."] {
        let err = parse_ontology(&format!("{head}{bad}\n")).unwrap_err();
        assert!(err.to_string().contains("3:"), "{bad}: {err}");
    }
    let dup = "@prefix ex: <http://a/> .\n@prefix ex: <http://b/> .\n";
    assert!(parse_ontology(dup).is_err());
    let cycle = format!("{head}@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\nex:a a rdf:Class ; rdfs:subClassOf ex:b .\nex:b a rdf:Class ; rdfs:subClassOf ex:a .\n");
    assert!(matches!(parse_ontology(&cycle), Err(OntologyError::Cycle(_))));
}
