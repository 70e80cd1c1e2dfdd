//! The built-in constraint catalog and its evaluation over a [`NodeGraph`].
//!
//! Codes are stable and append-only:
//!
//! | code | focus | rule |
//! |------|-------|------|
//! | T1–T6 | every `Task` | ranges of input, output, implementation, execution, evaluation, subTask |
//! | P1–P3 | `TaskProblem` | at least one Spec; execution is an ExecutionSpec; evaluation range |
//! | S1–S3 | `TaskSolution` | linked via isBasedOn; no Specs; concrete implementation |
//! | O1 | `InputSpec`/`OutputSpec` | `schema` points to a RecordSet |
//! | R1 | `RecordSet` | at least one field |
//! | F1 | `Field` | has an IRI dataType |
//! | E1 | `EvaluationResult` | metric and value present |
//! | E2 | `EvaluationTask` of a solution | exactly one evaluatedSolution, a TaskSolution |
//!
//! Warnings (`W*`, `S2x`, `G2`) never affect conformance. `J1` and `G1`
//! report documents that could not be parsed or expanded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::graph::{self, effective_types_of, expand_document, ExpandError, Node, NodeGraph, NodeId, Resolution, Value};
use crate::iri::{looks_absolute, Iri};
use crate::ontology::Ontology;
use crate::vocab::{cr, sc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Violation => "VIOLATION",
            Severity::Warning => "WARNING",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    InputRange,
    OutputRange,
    ImplementationRange,
    ExecutionRange,
    EvaluationRange,
    SubTaskRange,
    ProblemHasSpec,
    ProblemExecutionSpec,
    ProblemEvaluationRange,
    SolutionLinked,
    SolutionNoSpecs,
    SolutionConcreteImplementation,
    SpecSchemaRecordSet,
    RecordSetHasField,
    FieldHasDataType,
    ResultMetricValue,
    EvaluatedSolutionExactlyOne,
    /// Emitted by other rules or by the driver, never evaluated on its own.
    Auxiliary,
}

/// One catalog entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub id: &'static str,
    pub target: Iri,
    pub severity: Severity,
    /// Message with a `{focus}` slot.
    pub message: &'static str,
    rule: Rule,
}

impl Constraint {
    pub fn render(&self, focus: &NodeId) -> String {
        self.message.replace("{focus}", focus.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeSet {
    constraints: Vec<Constraint>,
}

impl ShapeSet {
    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    pub fn get(&self, id: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.id == id)
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.constraints.iter().map(|c| c.id).collect()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

fn entry(id: &'static str, target: &str, severity: Severity, rule: Rule, message: &'static str) -> Constraint {
    Constraint {
        id,
        target: Iri::new(target),
        severity,
        message,
        rule,
    }
}

/// The catalog, in evaluation order.
pub fn builtin_shapes() -> &'static ShapeSet {
    static SHAPES: OnceLock<ShapeSet> = OnceLock::new();
    SHAPES.get_or_init(|| {
        use Rule::*;
        use Severity::*;
        let c = vec![
            entry("T1", cr::TASK, Violation, InputRange,
                "croissant:input of {focus} must point to a Dataset, an InputSpec, or a URL"),
            entry("T2", cr::TASK, Violation, OutputRange,
                "croissant:output of {focus} must point to a Dataset, SoftwareSourceCode, or OutputSpec"),
            entry("T3", cr::TASK, Violation, ImplementationRange,
                "croissant:implementation of {focus} must point to a SoftwareApplication, SoftwareSourceCode, or ImplementationSpec"),
            entry("T4", cr::TASK, Violation, ExecutionRange,
                "croissant:execution of {focus} must point to an ExecutionInfo (ExecutionConfig, ExecutionTrace) or an ExecutionSpec"),
            entry("T5", cr::TASK, Violation, EvaluationRange,
                "croissant:evaluation of {focus} must be an EvaluationTask or an EvaluationSpec"),
            entry("T6", cr::TASK, Violation, SubTaskRange,
                "croissant:subTask of {focus} must point to a Task"),
            entry("P1", cr::TASK_PROBLEM, Violation, ProblemHasSpec,
                "A TaskProblem ({focus}) must have at least one property (input, output, implementation) whose value is a spec class"),
            entry("P2", cr::TASK_PROBLEM, Violation, ProblemExecutionSpec,
                "croissant:execution of TaskProblem {focus} must be an ExecutionSpec"),
            entry("P3", cr::TASK_PROBLEM, Violation, ProblemEvaluationRange,
                "croissant:evaluation of TaskProblem {focus} must be an EvaluationTask or an EvaluationSpec"),
            entry("S1", cr::TASK_SOLUTION, Violation, SolutionLinked,
                "A TaskSolution ({focus}) must be formally linked to a TaskProblem via schema:isBasedOn"),
            entry("S2", cr::TASK_SOLUTION, Violation, SolutionNoSpecs,
                "A TaskSolution ({focus}) cannot have an InputSpec/OutputSpec/ImplementationSpec/EvaluationSpec as input, output, implementation, or evaluation"),
            entry("S3", cr::TASK_SOLUTION, Violation, SolutionConcreteImplementation,
                "TaskSolution {focus} must have a concrete implementation, or subTasks that each have one"),
            entry("O1", cr::OUTPUT_SPEC, Violation, SpecSchemaRecordSet,
                "croissant:schema of {focus} must point to a RecordSet"),
            entry("R1", cr::RECORD_SET, Violation, RecordSetHasField,
                "A RecordSet ({focus}) must have at least one field"),
            entry("F1", cr::FIELD, Violation, FieldHasDataType,
                "A Field ({focus}) must have a dataType given as an IRI"),
            entry("E1", cr::EVALUATION_RESULT, Violation, ResultMetricValue,
                "croissant:metric/value is required on EvaluationResult {focus}"),
            entry("E2", cr::EVALUATION_TASK, Violation, EvaluatedSolutionExactlyOne,
                "croissant:evaluatedSolution of {focus} must point to exactly one TaskSolution"),
            entry("S2x", cr::TASK_SOLUTION, Warning, Auxiliary,
                "TaskSolution {focus} uses an ExecutionSpec placeholder as its execution"),
            entry("W1", cr::TASK, Warning, Auxiliary,
                "an untyped node is used where {focus} expects a typed value"),
            entry("W2", cr::TASK, Warning, Auxiliary,
                "{focus} refers to an external IRI whose type cannot be verified"),
            entry("W3", cr::TASK_SOLUTION, Warning, Auxiliary,
                "TaskSolution {focus} only gets a concrete implementation from nested subTasks below the first level"),
            entry("W4", cr::FIELD, Warning, Auxiliary,
                "values of {focus} use a datatype without a lexical check"),
            entry("W5", cr::OUTPUT_SPEC, Warning, Auxiliary,
                "no records were supplied for {focus}; record checks skipped"),
            entry("W6", cr::TASK, Warning, Auxiliary,
                "{focus} refers to a document-local id that nothing defines"),
            entry("G1", cr::TASK, Violation, Auxiliary,
                "{focus} could not be expanded as a Croissant Tasks document"),
            entry("G2", cr::TASK, Warning, Auxiliary,
                "{focus} is declared with conflicting values; the first one is kept"),
            entry("J1", cr::TASK, Violation, Auxiliary,
                "{focus} is not well-formed JSON"),
        ];
        ShapeSet { constraints: c }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Field order gives the sort order: focus, code, property.
    #[serde(with = "focus_serde")]
    pub focus: NodeId,
    pub constraint: String,
    pub property: Option<String>,
    pub severity: Severity,
    pub message: String,
}

mod focus_serde {
    use super::NodeId;
    use crate::iri::Iri;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(id: &NodeId, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(id.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<NodeId, D::Error> {
        let s = String::deserialize(d)?;
        Ok(match s.strip_prefix("_:") {
            Some(label) => NodeId::synthetic(label),
            None => NodeId::named(Iri::new(s)),
        })
    }
}

impl Diagnostic {
    pub fn is_violation(&self) -> bool {
        self.severity == Severity::Violation
    }

    /// `SEVERITY CODE focus property`, a dash, then the message.
    pub fn render(&self) -> String {
        format!(
            "{} {} {} {} \u{2014} {}",
            self.severity,
            self.constraint,
            self.focus,
            self.property.as_deref().unwrap_or("-"),
            self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileVerdict {
    pub source_name: String,
    pub json_valid: bool,
    pub conforms: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl FileVerdict {
    fn new(source_name: &str, json_valid: bool, mut diagnostics: Vec<Diagnostic>) -> Self {
        diagnostics.sort();
        diagnostics.dedup();
        let conforms = !diagnostics.iter().any(Diagnostic::is_violation);
        FileVerdict {
            source_name: source_name.to_string(),
            json_valid,
            conforms,
            diagnostics,
        }
    }

    /// PASS iff the JSON parsed and no violation was found.
    pub fn passed(&self) -> bool {
        self.json_valid && self.conforms
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_violation())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| !d.is_violation())
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    /// Violations per constraint code.
    pub fn violation_counts(&self) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        for d in self.violations() {
            *out.entry(d.constraint.as_str()).or_insert(0) += 1;
        }
        out
    }
}

struct Checker<'a> {
    g: &'a NodeGraph,
    shapes: &'a ShapeSet,
    types: BTreeMap<&'a NodeId, BTreeSet<Iri>>,
    out: Vec<Diagnostic>,
}

#[derive(Clone, Copy)]
struct RangeSpec<'s> {
    code: &'static str,
    allowed: &'s [&'s str],
    accepts_iri: bool,
}

impl<'a> Checker<'a> {
    fn is_a(&self, id: &NodeId, class: &str) -> bool {
        self.types.get(id).is_some_and(|t| t.iter().any(|c| c.as_str() == class))
    }

    fn is_any(&self, id: &NodeId, classes: &[&str]) -> bool {
        classes.iter().any(|c| self.is_a(id, c))
    }

    fn typed(&self, id: &NodeId) -> bool {
        self.types.get(id).is_some_and(|t| !t.is_empty())
    }

    fn emit(&mut self, code: &str, focus: &NodeId, property: Option<&str>, detail: Option<String>) {
        let c = self.shapes.get(code).expect("code in catalog");
        let mut message = c.render(focus);
        if let Some(d) = detail {
            message.push_str(" (");
            message.push_str(&d);
            message.push(')');
        }
        self.out.push(Diagnostic {
            focus: focus.clone(),
            constraint: c.id.to_string(),
            property: property.map(str::to_string),
            severity: c.severity,
            message,
        });
    }

    fn nodes_of(&self, class: &str) -> Vec<&'a Node> {
        self.g.nodes().filter(|n| self.is_a(&n.id, class)).collect()
    }

    /// Defined nodes appearing as values of `prop` anywhere in the graph.
    fn objects_of(&self, prop: &str) -> Vec<&'a Node> {
        let g = self.g;
        let mut ids = BTreeSet::new();
        for n in g.nodes() {
            for v in n.flat_values(prop) {
                if let Some(id) = v.as_ref_id() {
                    ids.insert(id);
                }
            }
        }
        ids.into_iter().filter_map(|id| g.node(id)).collect()
    }

    fn check_range(&mut self, focus: &Node, prop: &str, spec: RangeSpec<'_>) {
        for v in focus.flat_values(prop) {
            match v {
                Value::Ref(target) => {
                    if let Some(node) = self.g.node(target) {
                        if self.typed(target) {
                            if !self.is_any(target, spec.allowed) {
                                let detail = format!("got {}", type_list(self.g, node));
                                self.emit(spec.code, &focus.id, Some(prop), Some(detail));
                            }
                        } else {
                            self.emit("W1", &focus.id, Some(prop), Some(format!("<{target}>")));
                        }
                        continue;
                    }
                    match self.g.resolve(target) {
                        Resolution::Defined(_) => unreachable!("not in graph"),
                        Resolution::External => {
                            if !spec.accepts_iri {
                                self.emit("W2", &focus.id, Some(prop), Some(format!("<{target}>")));
                            }
                        }
                        Resolution::Missing => {
                            self.emit(spec.code, &focus.id, Some(prop), Some(format!("<{target}> is not defined")));
                        }
                    }
                }
                Value::Text(t) if spec.accepts_iri && looks_absolute(t) => {}
                other => {
                    self.emit(spec.code, &focus.id, Some(prop), Some(format!("literal {}", other.display())));
                }
            }
        }
    }

    fn concrete_implementation(&self, node: &Node) -> bool {
        node.flat_values(cr::IMPLEMENTATION).into_iter().any(|v| match v {
            Value::Ref(id) => match self.g.node(id) {
                Some(_) => !self.is_a(id, cr::IMPLEMENTATION_SPEC),
                None => self.g.resolve(id) == Resolution::External,
            },
            Value::Text(t) => looks_absolute(t),
            _ => false,
        })
    }

    fn subtasks(&self, node: &Node) -> Vec<&'a Node> {
        node.flat_values(cr::SUB_TASK)
            .into_iter()
            .filter_map(|v| v.as_ref_id().and_then(|id| self.g.node(id)))
            .collect()
    }

    /// Concrete at this level or through nested subtasks at any depth.
    fn concrete_deep(&self, node: &Node, seen: &mut BTreeSet<NodeId>) -> bool {
        if self.concrete_implementation(node) {
            return true;
        }
        if !seen.insert(node.id.clone()) {
            return false;
        }
        let subs = self.subtasks(node);
        !subs.is_empty() && subs.iter().all(|s| self.concrete_deep(s, seen))
    }

    fn run(&mut self, c: &Constraint) {
        use Rule::*;
        const INPUT: &[&str] = &[cr::DATASET, sc::DATASET, cr::INPUT_SPEC];
        const OUTPUT: &[&str] = &[sc::DATASET, sc::SOFTWARE_SOURCE_CODE, cr::OUTPUT_SPEC];
        const IMPLEMENTATION: &[&str] = &[sc::SOFTWARE_APPLICATION, sc::SOFTWARE_SOURCE_CODE, cr::IMPLEMENTATION_SPEC];
        const EXECUTION: &[&str] = &[cr::EXECUTION_INFO, cr::EXECUTION_SPEC];
        const EVALUATION: &[&str] = &[cr::EVALUATION_TASK, cr::EVALUATION_SPEC];
        const TASK: &[&str] = &[cr::TASK];
        let range = |code, allowed, accepts_iri| RangeSpec {
            code,
            allowed,
            accepts_iri,
        };

        match c.rule {
            InputRange | OutputRange | ImplementationRange | ExecutionRange | EvaluationRange | SubTaskRange => {
                let (prop, spec) = match c.rule {
                    InputRange => (cr::INPUT, range(c.id, INPUT, true)),
                    OutputRange => (cr::OUTPUT, range(c.id, OUTPUT, false)),
                    ImplementationRange => (cr::IMPLEMENTATION, range(c.id, IMPLEMENTATION, false)),
                    ExecutionRange => (cr::EXECUTION, range(c.id, EXECUTION, false)),
                    EvaluationRange => (cr::EVALUATION, range(c.id, EVALUATION, false)),
                    _ => (cr::SUB_TASK, range(c.id, TASK, false)),
                };
                for node in self.nodes_of(c.target.as_str()) {
                    // problems get the stricter P3 instead
                    if c.rule == EvaluationRange && self.is_a(&node.id, cr::TASK_PROBLEM) {
                        continue;
                    }
                    self.check_range(node, prop, spec);
                    if c.rule == ExecutionRange && self.is_a(&node.id, cr::TASK_SOLUTION) {
                        for v in node.flat_values(cr::EXECUTION) {
                            if let Some(id) = v.as_ref_id() {
                                if self.is_a(id, cr::EXECUTION_SPEC) {
                                    self.emit("S2x", &node.id, Some(cr::EXECUTION), Some(format!("<{id}>")));
                                }
                            }
                        }
                    }
                }
            }
            ProblemHasSpec => {
                for node in self.nodes_of(c.target.as_str()) {
                    let has = [
                        (cr::INPUT, cr::INPUT_SPEC),
                        (cr::OUTPUT, cr::OUTPUT_SPEC),
                        (cr::IMPLEMENTATION, cr::IMPLEMENTATION_SPEC),
                    ]
                    .iter()
                    .any(|(prop, spec)| {
                        node.flat_values(prop)
                            .into_iter()
                            .any(|v| v.as_ref_id().is_some_and(|id| self.is_a(id, spec)))
                    });
                    if !has {
                        self.emit(c.id, &node.id, None, None);
                    }
                }
            }
            ProblemExecutionSpec => {
                for node in self.nodes_of(c.target.as_str()) {
                    for v in node.flat_values(cr::EXECUTION) {
                        if let Some(id) = v.as_ref_id() {
                            if self.typed(id) && !self.is_a(id, cr::EXECUTION_SPEC) {
                                let detail = format!("got {}", type_list(self.g, self.g.node(id).unwrap()));
                                self.emit(c.id, &node.id, Some(cr::EXECUTION), Some(detail));
                            }
                        }
                    }
                }
            }
            ProblemEvaluationRange => {
                for node in self.nodes_of(c.target.as_str()) {
                    self.check_range(node, cr::EVALUATION, range(c.id, EVALUATION, false));
                }
            }
            SolutionLinked => {
                for node in self.nodes_of(c.target.as_str()) {
                    let values = node.flat_values(sc::IS_BASED_ON);
                    if values.is_empty() {
                        self.emit(c.id, &node.id, Some(sc::IS_BASED_ON), Some("missing".into()));
                        continue;
                    }
                    self.check_range(node, sc::IS_BASED_ON, range(c.id, &[cr::TASK_PROBLEM], true));
                }
            }
            SolutionNoSpecs => {
                const SPECS: &[&str] = &[cr::INPUT_SPEC, cr::OUTPUT_SPEC, cr::IMPLEMENTATION_SPEC, cr::EVALUATION_SPEC];
                for node in self.nodes_of(c.target.as_str()) {
                    for prop in [cr::INPUT, cr::OUTPUT, cr::IMPLEMENTATION, cr::EVALUATION] {
                        for v in node.flat_values(prop) {
                            if let Some(id) = v.as_ref_id() {
                                if self.is_any(id, SPECS) {
                                    let detail = format!("<{id}> is {}", type_list(self.g, self.g.node(id).unwrap()));
                                    self.emit(c.id, &node.id, Some(prop), Some(detail));
                                }
                            }
                        }
                    }
                }
            }
            SolutionConcreteImplementation => {
                for node in self.nodes_of(c.target.as_str()) {
                    if self.concrete_implementation(node) {
                        continue;
                    }
                    let subs = self.subtasks(node);
                    if !subs.is_empty() && subs.iter().all(|s| self.concrete_implementation(s)) {
                        continue;
                    }
                    let mut seen = BTreeSet::new();
                    if !subs.is_empty() && self.concrete_deep(node, &mut seen) {
                        self.emit("W3", &node.id, Some(cr::SUB_TASK), None);
                    } else {
                        self.emit(c.id, &node.id, Some(cr::IMPLEMENTATION), None);
                    }
                }
            }
            SpecSchemaRecordSet => {
                let mut targets = self.nodes_of(cr::OUTPUT_SPEC);
                targets.extend(self.nodes_of(cr::INPUT_SPEC));
                targets.sort_by(|a, b| a.id.cmp(&b.id));
                targets.dedup_by(|a, b| a.id == b.id);
                for node in targets {
                    let values = node.flat_values(cr::SCHEMA);
                    if values.is_empty() {
                        if self.is_a(&node.id, cr::OUTPUT_SPEC) {
                            self.emit(c.id, &node.id, Some(cr::SCHEMA), Some("missing".into()));
                        }
                        continue;
                    }
                    for v in values {
                        let ok = v.as_ref_id().is_some_and(|id| self.is_a(id, cr::RECORD_SET));
                        if !ok {
                            self.emit(c.id, &node.id, Some(cr::SCHEMA), Some(v.display()));
                        }
                    }
                }
            }
            RecordSetHasField => {
                for node in self.nodes_of(c.target.as_str()) {
                    if node.flat_values(cr::FIELD_PROP).is_empty() {
                        self.emit(c.id, &node.id, Some(cr::FIELD_PROP), None);
                    }
                }
            }
            FieldHasDataType => {
                let mut targets = self.nodes_of(cr::FIELD);
                targets.extend(self.objects_of(cr::FIELD_PROP));
                targets.sort_by(|a, b| a.id.cmp(&b.id));
                targets.dedup_by(|a, b| a.id == b.id);
                for node in targets {
                    let values = node.flat_values(cr::DATA_TYPE);
                    if values.is_empty() {
                        self.emit(c.id, &node.id, Some(cr::DATA_TYPE), Some("missing".into()));
                    }
                    for v in values {
                        if v.as_ref_id().is_none() {
                            self.emit(c.id, &node.id, Some(cr::DATA_TYPE), Some(format!("{} is not an IRI", v.display())));
                        }
                    }
                }
            }
            ResultMetricValue => {
                let mut targets = self.nodes_of(cr::EVALUATION_RESULT);
                targets.extend(self.objects_of(cr::EVALUATION_RESULTS));
                targets.sort_by(|a, b| a.id.cmp(&b.id));
                targets.dedup_by(|a, b| a.id == b.id);
                for node in targets {
                    for prop in [cr::METRIC, cr::VALUE] {
                        if node.flat_values(prop).is_empty() {
                            self.emit(c.id, &node.id, Some(prop), Some("missing".into()));
                        }
                    }
                }
            }
            EvaluatedSolutionExactlyOne => {
                let mut targets: Vec<&Node> = Vec::new();
                for sol in self.nodes_of(cr::TASK_SOLUTION) {
                    for v in sol.flat_values(cr::EVALUATION) {
                        if let Some(id) = v.as_ref_id() {
                            if self.is_a(id, cr::EVALUATION_TASK) {
                                targets.extend(self.g.node(id));
                            }
                        }
                    }
                }
                if self.is_a(self.g.root(), cr::EVALUATION_TASK) {
                    targets.push(self.g.root_node());
                }
                targets.sort_by(|a, b| a.id.cmp(&b.id));
                targets.dedup_by(|a, b| a.id == b.id);
                for node in targets {
                    let values = node.flat_values(cr::EVALUATED_SOLUTION);
                    if values.len() != 1 {
                        self.emit(c.id, &node.id, Some(cr::EVALUATED_SOLUTION), Some(format!("found {}", values.len())));
                        continue;
                    }
                    self.check_range(node, cr::EVALUATED_SOLUTION, range(c.id, &[cr::TASK_SOLUTION], false));
                }
            }
            Auxiliary => {}
        }
    }
}

fn type_list(g: &NodeGraph, node: &Node) -> String {
    if node.types.is_empty() {
        return "untyped".into();
    }
    node.types.iter().map(|t| g.compact(t)).collect::<Vec<_>>().join(", ")
}

/// Runs every constraint of `shapes` against `graph`.
pub fn validate_graph(graph: &NodeGraph, ont: &Ontology, shapes: &ShapeSet) -> FileVerdict {
    let types = graph.nodes().map(|n| (&n.id, effective_types_of(n, ont))).collect();
    let mut checker = Checker {
        g: graph,
        shapes: builtin_shapes(),
        types,
        out: Vec::new(),
    };
    for c in shapes.iter() {
        checker.run(c);
    }
    for note in graph.merge_notes() {
        checker.emit(
            "G2",
            &note.node,
            Some(note.property.as_str()),
            Some(format!("kept {}, dropped {}", note.kept.display(), note.dropped.display())),
        );
    }
    // references from properties no range rule looks at
    for (subject, prop, target) in graph.references() {
        if graph.node(target).is_none() && graph.resolve(target) == Resolution::Missing && !range_checked(prop.as_str()) {
            checker.emit("W6", subject, Some(prop.as_str()), Some(format!("<{target}>")));
        }
    }
    FileVerdict::new(graph.source_name(), true, checker.out)
}

fn range_checked(prop: &str) -> bool {
    [
        cr::INPUT,
        cr::OUTPUT,
        cr::IMPLEMENTATION,
        cr::EXECUTION,
        cr::EVALUATION,
        cr::SUB_TASK,
        sc::IS_BASED_ON,
        cr::EVALUATED_SOLUTION,
        cr::SCHEMA,
        cr::DATA_TYPE,
    ]
    .contains(&prop)
}

/// Parses, expands and validates one document. JSON syntax errors give a
/// FAIL with `json_valid = false`; expansion errors a FAIL with a `G1`.
pub fn validate_document(text: &str, source_name: &str, ont: &Ontology, shapes: &ShapeSet) -> FileVerdict {
    match expand_document(text, source_name) {
        Ok(g) => validate_graph(&g, ont, shapes),
        Err(e) => verdict_for_expand_error(source_name, &e),
    }
}

pub fn verdict_for_expand_error(source_name: &str, err: &ExpandError) -> FileVerdict {
    let focus = NodeId::synthetic("document");
    let code = if err.is_json_syntax() { "J1" } else { "G1" };
    let c = builtin_shapes().get(code).expect("in catalog");
    let d = Diagnostic {
        focus: focus.clone(),
        constraint: code.to_string(),
        property: None,
        severity: Severity::Violation,
        message: format!("{}: {err}", c.render(&focus)),
    };
    FileVerdict::new(source_name, !err.is_json_syntax(), vec![d])
}

/// One line per diagnostic, then `PASS` or `FAIL (<n> violations)`.
pub fn render_text(verdict: &FileVerdict) -> String {
    let mut out = String::new();
    for d in &verdict.diagnostics {
        out.push_str(&d.render());
        out.push('\n');
    }
    if verdict.passed() {
        out.push_str("PASS\n");
    } else {
        let n = verdict.violation_count();
        out.push_str(&format!("FAIL ({n} violation{})\n", if n == 1 { "" } else { "s" }));
    }
    out
}

// Keep graph re-export paths short for callers of this module.
pub use graph::Resolution as ReferenceResolution;
