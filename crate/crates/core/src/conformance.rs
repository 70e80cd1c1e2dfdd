//! Does a `TaskSolution` fulfill a `TaskProblem`?
//!
//! [`match_solution`] pairs the two documents by `isBasedOn`, walks the
//! subtask trees in lockstep, checks that every expected metric has a
//! reported result, and optionally checks concrete output records against
//! the problem's `OutputSpec` schema.
//!
//! Codes produced here: `M1` not linked, `M2` duplicate subtask claim,
//! `M3` unmatched solution subtask, `M4` unmatched problem subtask
//! (warning), `M5` missing metric, `D1`–`D4` record checks, `W4`, `W5`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::graph::{Node, NodeGraph, NodeId, Number, NumericMode, Value};
use crate::iri::Iri;
use crate::ontology::Ontology;
use crate::pattern::Pattern;
pub use crate::pattern::{check_value_pattern, PatternError};
use crate::shapes::{Diagnostic, Severity};
use crate::vocab::{cr, sc, xsd};

/// One column of a RecordSet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub name: String,
    pub data_type: Iri,
    pub value_pattern: Option<String>,
    pub description: Option<String>,
    pub repeated: Option<bool>,
}

impl FieldSpec {
    pub fn new(name: &str, data_type: &str) -> Self {
        FieldSpec {
            name: name.to_string(),
            data_type: Iri::new(data_type),
            value_pattern: None,
            description: None,
            repeated: None,
        }
    }

    pub fn with_pattern(mut self, pattern: &str) -> Self {
        self.value_pattern = Some(pattern.to_string());
        self
    }
}

/// Reads the fields of a RecordSet node. Fields without a text name are skipped.
pub fn field_specs(graph: &NodeGraph, record_set: &Node) -> Vec<FieldSpec> {
    let mut out = Vec::new();
    for v in record_set.flat_values(cr::FIELD_PROP) {
        let Some(field) = v.as_ref_id().and_then(|id| graph.node(id)) else {
            continue;
        };
        let text = |prop: &str| field.flat_values(prop).into_iter().find_map(|v| v.as_text()).map(str::to_string);
        let Some(name) = text(sc::NAME) else { continue };
        let data_type = field
            .flat_values(cr::DATA_TYPE)
            .into_iter()
            .find_map(|v| v.as_ref_id())
            .map(|id| id.iri().clone())
            .unwrap_or_else(|| Iri::new(xsd::STRING));
        let repeated = field.flat_values(cr::REPEATED).into_iter().find_map(|v| match v {
            Value::Bool(b) => Some(*b),
            _ => None,
        });
        out.push(FieldSpec {
            name,
            data_type,
            value_pattern: text(sc::VALUE_PATTERN).or_else(|| text(cr::VALUE_PATTERN)),
            description: text(sc::DESCRIPTION),
            repeated,
        });
    }
    out
}

/// Field specs of the `OutputSpec` that is a direct `cr:output` of the root.
pub fn output_field_specs(problem: &NodeGraph) -> Option<(NodeId, Vec<FieldSpec>)> {
    let root = problem.root_node();
    for v in root.flat_values(cr::OUTPUT) {
        let Some(spec) = v.as_ref_id().and_then(|id| problem.node(id)) else { continue };
        if !spec.has_type(cr::OUTPUT_SPEC) {
            continue;
        }
        for s in spec.flat_values(cr::SCHEMA) {
            if let Some(rs) = s.as_ref_id().and_then(|id| problem.node(id)) {
                return Some((spec.id.clone(), field_specs(problem, rs)));
            }
        }
    }
    None
}

fn is_known_datatype(dt: &str) -> bool {
    [
        xsd::STRING,
        xsd::FLOAT,
        xsd::DOUBLE,
        xsd::DECIMAL,
        xsd::INTEGER,
        xsd::INT,
        xsd::LONG,
        xsd::BOOLEAN,
    ]
    .contains(&dt)
}

fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_float_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (mantissa, None),
    };
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = digits(int) && frac.is_none_or(digits) && (!int.is_empty() || frac.is_some_and(|f| !f.is_empty()));
    mantissa_ok && exponent.is_none_or(is_integer_lexical)
}

/// Lexical check of one value against a field datatype. Unknown datatypes
/// are accepted; see [`is_opaque_datatype`].
pub fn check_datatype(value: &Value, data_type: &Iri) -> bool {
    check_datatype_with(value, data_type, NumericMode::Lenient)
}

/// Same as [`check_datatype`]; `Strict` refuses numerals written as text.
pub fn check_datatype_with(value: &Value, data_type: &Iri, mode: NumericMode) -> bool {
    let text_ok = |f: fn(&str) -> bool, v: &Value| match v {
        Value::Text(t) => mode == NumericMode::Lenient && f(t.trim()),
        _ => false,
    };
    match data_type.as_str() {
        xsd::STRING => matches!(value, Value::Text(_)),
        xsd::INTEGER | xsd::INT | xsd::LONG => match value {
            Value::Number(n) => is_integer_lexical(n.as_str()),
            v => text_ok(is_integer_lexical, v),
        },
        xsd::FLOAT | xsd::DOUBLE | xsd::DECIMAL => match value {
            Value::Number(_) => true,
            v => text_ok(is_float_lexical, v),
        },
        xsd::BOOLEAN => match value {
            Value::Bool(_) => true,
            Value::Text(t) => t == "true" || t == "false",
            _ => false,
        },
        _ => true,
    }
}

pub fn is_opaque_datatype(data_type: &Iri) -> bool {
    !is_known_datatype(data_type.as_str())
}

/// One output record: field name to JSON value.
pub type Record = serde_json::Map<String, Json>;

/// Parses JSON-lines; blank lines are skipped. Errors carry the 1-based line.
pub fn parse_records(text: &str) -> Result<Vec<Record>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Json>(line) {
            Ok(Json::Object(m)) => out.push(m),
            Ok(_) => return Err(format!("line {}: record is not a JSON object", i + 1)),
            Err(e) => return Err(format!("line {}: {e}", i + 1)),
        }
    }
    Ok(out)
}

fn json_to_value(j: &Json) -> Option<Value> {
    Some(match j {
        Json::Null => return None,
        Json::Bool(b) => Value::Bool(*b),
        Json::Number(n) => Value::Number(Number::from(n)),
        Json::String(s) => Value::Text(s.clone()),
        Json::Array(items) => Value::List(items.iter().filter_map(json_to_value).collect()),
        Json::Object(_) => Value::Text(j.to_string()),
    })
}

fn pattern_subject(v: &Value) -> String {
    match v {
        Value::Text(t) => t.clone(),
        Value::Number(n) => n.as_str().to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.display(),
    }
}

fn record_diag(index: usize, field: &str, code: &str, severity: Severity, message: String) -> Diagnostic {
    Diagnostic {
        focus: NodeId::synthetic(&format!("record/{index}")),
        constraint: code.to_string(),
        property: Some(field.to_string()),
        severity,
        message,
    }
}

/// Checks every record against every field spec.
pub fn check_records(records: &[Record], spec: &[FieldSpec]) -> Vec<Diagnostic> {
    check_records_with(records, spec, NumericMode::Lenient)
}

pub fn check_records_with(records: &[Record], spec: &[FieldSpec], mode: NumericMode) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut patterns: Vec<Option<Pattern>> = Vec::new();
    for f in spec {
        patterns.push(match &f.value_pattern {
            None => None,
            Some(p) => match Pattern::compile(p) {
                Ok(p) => Some(p),
                Err(e) => {
                    out.push(Diagnostic {
                        focus: NodeId::synthetic("schema"),
                        constraint: "D3".into(),
                        property: Some(f.name.clone()),
                        severity: Severity::Violation,
                        message: format!("valuePattern {p:?} of field {} does not compile: {e}", f.name),
                    });
                    None
                }
            },
        });
        if is_opaque_datatype(&f.data_type) {
            out.push(Diagnostic {
                focus: NodeId::synthetic("schema"),
                constraint: "W4".into(),
                property: Some(f.name.clone()),
                severity: Severity::Warning,
                message: format!("field {} uses datatype <{}> without a lexical check", f.name, f.data_type),
            });
        }
    }
    let known: BTreeSet<&str> = spec.iter().map(|f| f.name.as_str()).collect();
    for (i, record) in records.iter().enumerate() {
        for (f, pattern) in spec.iter().zip(&patterns) {
            let Some(value) = record.get(&f.name).and_then(json_to_value) else {
                out.push(record_diag(i, &f.name, "D1", Severity::Violation, format!("record {i} is missing field {}", f.name)));
                continue;
            };
            let items: Vec<&Value> = match (&value, f.repeated) {
                (Value::List(items), Some(true)) => items.iter().collect(),
                _ => vec![&value],
            };
            for item in items {
                if !check_datatype_with(item, &f.data_type, mode) {
                    out.push(record_diag(
                        i,
                        &f.name,
                        "D2",
                        Severity::Violation,
                        format!("record {i} field {}: {} is not a valid <{}>", f.name, item.display(), f.data_type),
                    ));
                    continue;
                }
                if let Some(p) = pattern {
                    let subject = pattern_subject(item);
                    if !p.full_match(&subject) {
                        out.push(record_diag(
                            i,
                            &f.name,
                            "D3",
                            Severity::Violation,
                            format!("record {i} field {}: {subject:?} does not match {:?}", f.name, p.as_str()),
                        ));
                    }
                }
            }
        }
        for key in record.keys() {
            if !known.contains(key.as_str()) {
                out.push(record_diag(i, key, "D4", Severity::Warning, format!("record {i} has field {key} that the schema does not declare")));
            }
        }
    }
    out.sort();
    out
}

/// `metric=value±tol`, also written `metric=value+/-tol`; tolerance defaults to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub metric: String,
    pub value: f64,
    pub tolerance: f64,
}

impl std::str::FromStr for Expectation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (metric, rest) = s.rsplit_once('=').ok_or_else(|| format!("expected metric=value±tol, got {s:?}"))?;
        let (value, tol) = match rest.split_once('±').or_else(|| rest.split_once("+/-")) {
            Some((v, t)) => (v, Some(t)),
            None => (rest, None),
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("{t:?} is not a number in {s:?}"));
        let metric = metric.trim();
        if metric.is_empty() {
            return Err(format!("empty metric name in {s:?}"));
        }
        let tolerance = tol.map(num).transpose()?.unwrap_or(0.0);
        if tolerance < 0.0 {
            return Err(format!("negative tolerance in {s:?}"));
        }
        Ok(Expectation {
            metric: metric.to_string(),
            value: num(value)?,
            tolerance,
        })
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}±{}", self.metric, self.value, self.tolerance)
    }
}

/// Absorbs binary rounding when comparing decimal values against a tolerance.
pub const EXPECTATION_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationOutcome {
    pub expectation: Expectation,
    pub observed: Option<f64>,
    pub met: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchOptions {
    /// Output records; `None` skips record checks with `W5`.
    pub records: Option<Vec<Record>>,
    pub lenient_metrics: bool,
    pub numeric: NumericMode,
}

/// Coverage of one expected metric in one problem/solution scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScopeCoverage {
    pub problem: String,
    pub solution: String,
    pub metric: String,
    pub satisfied: bool,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub linked: bool,
    /// (solution subtask, problem subtask), outermost first.
    pub subtask_pairs: Vec<(String, String)>,
    pub unmatched_problem_subtasks: Vec<String>,
    pub unmatched_solution_subtasks: Vec<String>,
    /// Expected metric → satisfied in every paired scope that expects it.
    pub metric_coverage: BTreeMap<String, bool>,
    pub scopes: Vec<ScopeCoverage>,
    pub diagnostics: Vec<Diagnostic>,
    pub record_diagnostics: Vec<Diagnostic>,
    pub expectations: Vec<ExpectationOutcome>,
    pub fulfilled: bool,
}

impl MatchReport {
    /// Value reported for `metric` at the root scope.
    pub fn root_value(&self, metric: &str) -> Option<&str> {
        self.scopes
            .first()
            .map(|s| s.problem.as_str())
            .and_then(|root| self.scope_value(root, metric))
    }

    pub fn scope_value(&self, problem: &str, metric: &str) -> Option<&str> {
        self.scopes
            .iter()
            .find(|s| s.problem == problem && s.metric == metric)
            .and_then(|s| s.value.as_deref())
    }

    /// Re-evaluates `fulfilled` after expectations were attached.
    pub fn all_expectations_met(&self) -> bool {
        self.expectations.iter().all(|e| e.met)
    }
}

fn normalize_metric(s: &str, lenient: bool) -> String {
    let t = s.trim();
    if lenient {
        t.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
    } else {
        t.to_string()
    }
}

fn refs<'g>(g: &'g NodeGraph, node: &Node, prop: &str) -> Vec<&'g Node> {
    node.flat_values(prop)
        .into_iter()
        .filter_map(|v| v.as_ref_id().and_then(|id| g.node(id)))
        .collect()
}

fn based_on(node: &Node) -> Vec<Iri> {
    node.flat_values(sc::IS_BASED_ON)
        .into_iter()
        .filter_map(|v| match v {
            Value::Ref(id) => Some(id.iri().clone()),
            Value::Text(t) => Some(Iri::new(t.clone())),
            _ => None,
        })
        .collect()
}

struct Matcher<'a> {
    problem: &'a NodeGraph,
    solution: &'a NodeGraph,
    lenient: bool,
    report: MatchReport,
}

impl Matcher<'_> {
    fn expected_metrics(&self, node: &Node) -> Option<Vec<String>> {
        let specs = refs(self.problem, node, cr::EVALUATION);
        if specs.is_empty() {
            return None;
        }
        let mut out = Vec::new();
        for spec in specs {
            for v in spec.flat_values(cr::EXPECTED_METRIC) {
                let m = match v {
                    Value::Ref(id) => id.iri().as_str().to_string(),
                    other => match other.as_text() {
                        Some(t) => t.to_string(),
                        None => other.display(),
                    },
                };
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        Some(out)
    }

    fn reported(&self, node: &Node) -> Vec<(String, Option<String>)> {
        let mut out = Vec::new();
        for eval in refs(self.solution, node, cr::EVALUATION) {
            for result in refs(self.solution, eval, cr::EVALUATION_RESULTS) {
                let value = result.flat_values(cr::VALUE).first().map(|v| match v.as_text() {
                    Some(t) => t.to_string(),
                    None => match v {
                        Value::Number(n) => n.as_str().to_string(),
                        other => other.display(),
                    },
                });
                for m in result.flat_values(cr::METRIC) {
                    if let Some(t) = m.as_text() {
                        out.push((t.to_string(), value.clone()));
                    }
                }
            }
        }
        out
    }

    fn scope(&mut self, p: &Node, s: &Node, inherited: &[String]) {
        let expected = self.expected_metrics(p).unwrap_or_else(|| inherited.to_vec());
        let reported = self.reported(s);
        for metric in &expected {
            let key = normalize_metric(metric, self.lenient);
            let hit = reported.iter().find(|(m, _)| normalize_metric(m, self.lenient) == key);
            let satisfied = hit.is_some();
            if !satisfied {
                self.report.diagnostics.push(Diagnostic {
                    focus: s.id.clone(),
                    constraint: "M5".into(),
                    property: Some(cr::EVALUATION.to_string()),
                    severity: Severity::Violation,
                    message: format!("expected metric {metric:?} of {} has no result in {}", p.id, s.id),
                });
            }
            let entry = self.report.metric_coverage.entry(metric.clone()).or_insert(true);
            *entry &= satisfied;
            self.report.scopes.push(ScopeCoverage {
                problem: p.id.to_string(),
                solution: s.id.to_string(),
                metric: metric.clone(),
                satisfied,
                value: hit.and_then(|(_, v)| v.clone()),
            });
        }

        let problem_subs = refs(self.problem, p, cr::SUB_TASK);
        let mut claimed: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        let mut pairs = Vec::new();
        for sub in refs(self.solution, s, cr::SUB_TASK) {
            let targets = based_on(sub);
            let hit = problem_subs.iter().find(|ps| targets.iter().any(|t| t == ps.id.iri()));
            match hit {
                None => {
                    self.report.unmatched_solution_subtasks.push(sub.id.to_string());
                    self.report.diagnostics.push(Diagnostic {
                        focus: sub.id.clone(),
                        constraint: "M3".into(),
                        property: Some(sc::IS_BASED_ON.to_string()),
                        severity: Severity::Violation,
                        message: format!("solution subtask {} is not based on any subtask of {}", sub.id, p.id),
                    });
                }
                Some(ps) => {
                    if let Some(first) = claimed.get(&ps.id) {
                        self.report.diagnostics.push(Diagnostic {
                            focus: sub.id.clone(),
                            constraint: "M2".into(),
                            property: Some(sc::IS_BASED_ON.to_string()),
                            severity: Severity::Violation,
                            message: format!("{} claims problem subtask {} already claimed by {first}", sub.id, ps.id),
                        });
                        continue;
                    }
                    claimed.insert(ps.id.clone(), sub.id.clone());
                    self.report.subtask_pairs.push((sub.id.to_string(), ps.id.to_string()));
                    pairs.push((*ps, sub));
                }
            }
        }
        for ps in &problem_subs {
            if !claimed.contains_key(&ps.id) {
                self.report.unmatched_problem_subtasks.push(ps.id.to_string());
                self.report.diagnostics.push(Diagnostic {
                    focus: ps.id.clone(),
                    constraint: "M4".into(),
                    property: Some(cr::SUB_TASK.to_string()),
                    severity: Severity::Warning,
                    message: format!("problem subtask {} has no solution subtask in {}", ps.id, s.id),
                });
            }
        }
        for (ps, sub) in pairs {
            self.scope(ps, sub, &expected);
        }
    }
}

/// Pairs a solution with a problem and checks fulfillment.
pub fn match_solution(problem: &NodeGraph, solution: &NodeGraph, ont: &Ontology) -> MatchReport {
    match_solution_with(problem, solution, ont, &MatchOptions::default())
}

pub fn match_solution_with(problem: &NodeGraph, solution: &NodeGraph, _ont: &Ontology, opts: &MatchOptions) -> MatchReport {
    let p_root = problem.root_node();
    let s_root = solution.root_node();
    let linked = based_on(s_root).iter().any(|t| t == p_root.id.iri());
    let mut m = Matcher {
        problem,
        solution,
        lenient: opts.lenient_metrics,
        report: MatchReport {
            linked,
            subtask_pairs: Vec::new(),
            unmatched_problem_subtasks: Vec::new(),
            unmatched_solution_subtasks: Vec::new(),
            metric_coverage: BTreeMap::new(),
            scopes: Vec::new(),
            diagnostics: Vec::new(),
            record_diagnostics: Vec::new(),
            expectations: Vec::new(),
            fulfilled: false,
        },
    };
    if !linked {
        m.report.diagnostics.push(Diagnostic {
            focus: s_root.id.clone(),
            constraint: "M1".into(),
            property: Some(sc::IS_BASED_ON.to_string()),
            severity: Severity::Violation,
            message: format!("{} is not based on {}", s_root.id, p_root.id),
        });
    }
    m.scope(p_root, s_root, &[]);

    let mut report = m.report;
    match (&opts.records, output_field_specs(problem)) {
        (Some(records), Some((_, spec))) => {
            report.record_diagnostics = check_records_with(records, &spec, opts.numeric);
        }
        (None, Some((spec_id, _))) => report.record_diagnostics.push(Diagnostic {
            focus: spec_id.clone(),
            constraint: "W5".into(),
            property: None,
            severity: Severity::Warning,
            message: format!("no records were supplied for {spec_id}; record checks skipped"),
        }),
        (_, None) => report.record_diagnostics.push(Diagnostic {
            focus: p_root.id.clone(),
            constraint: "W5".into(),
            property: Some(cr::OUTPUT.to_string()),
            severity: Severity::Warning,
            message: format!("{} has no OutputSpec with a RecordSet; record checks skipped", p_root.id),
        }),
    }
    report.diagnostics.sort();
    report.fulfilled = fulfilled(&report);
    report
}

fn fulfilled(r: &MatchReport) -> bool {
    r.linked
        && r.metric_coverage.values().all(|&ok| ok)
        && r.unmatched_solution_subtasks.is_empty()
        && !r.diagnostics.iter().any(Diagnostic::is_violation)
        && !r.record_diagnostics.iter().any(Diagnostic::is_violation)
        && r.all_expectations_met()
}

/// Compares root-scope values against expectations and updates `fulfilled`.
pub fn apply_expectations(report: &mut MatchReport, expectations: &[Expectation], lenient_metrics: bool) {
    let root = report.scopes.first().map(|s| s.problem.clone());
    for e in expectations {
        let key = normalize_metric(&e.metric, lenient_metrics);
        let observed = report
            .scopes
            .iter()
            .filter(|s| Some(&s.problem) == root.as_ref())
            .find(|s| normalize_metric(&s.metric, lenient_metrics) == key)
            .and_then(|s| s.value.as_deref())
            .and_then(|v| v.trim().parse::<f64>().ok());
        let met = observed.is_some_and(|o| (o - e.value).abs() <= e.tolerance + EXPECTATION_EPSILON);
        report.expectations.push(ExpectationOutcome {
            expectation: e.clone(),
            observed,
            met,
        });
    }
    report.fulfilled = fulfilled(report);
}

/// Human-readable rendering, one fact per line.
pub fn render_match(report: &MatchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("linked: {}\n", report.linked));
    for (s, p) in &report.subtask_pairs {
        out.push_str(&format!("pair: {s} -> {p}\n"));
    }
    for p in &report.unmatched_problem_subtasks {
        out.push_str(&format!("unmatched problem subtask: {p}\n"));
    }
    for s in &report.unmatched_solution_subtasks {
        out.push_str(&format!("unmatched solution subtask: {s}\n"));
    }
    for c in &report.scopes {
        let state = if c.satisfied { "satisfied" } else { "missing" };
        let value = c.value.as_deref().map(|v| format!(" = {v}")).unwrap_or_default();
        out.push_str(&format!("metric {:?} at {}: {state}{value}\n", c.metric, c.problem));
    }
    for e in &report.expectations {
        let observed = e.observed.map(|o| o.to_string()).unwrap_or_else(|| "none".into());
        let state = if e.met { "met" } else { "NOT met" };
        out.push_str(&format!("expect {}: observed {observed}, {state}\n", e.expectation));
    }
    for d in report.diagnostics.iter().chain(&report.record_diagnostics) {
        out.push_str(&d.render());
        out.push('\n');
    }
    out.push_str(&format!("fulfilled: {}\n", report.fulfilled));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(j: &str) -> Record {
        match serde_json::from_str(j).unwrap() {
            Json::Object(m) => m,
            _ => unreachable!(),
        }
    }

    fn answer_spec() -> Vec<FieldSpec> {
        vec![FieldSpec::new("answer", xsd::STRING).with_pattern("^[A-D]$")]
    }

    #[test]
    fn datatype_lexical_forms() {
        let f = Iri::new(xsd::FLOAT);
        let i = Iri::new(xsd::INTEGER);
        let num = |s: &str| Value::Number(Number::from(&serde_json::from_str::<serde_json::Number>(s).unwrap()));
        assert!(check_datatype(&num("0.9"), &f));
        assert!(check_datatype(&Value::Text("25.9".into()), &f));
        assert!(!check_datatype_with(&Value::Text("25.9".into()), &f, NumericMode::Strict));
        assert!(!check_datatype(&Value::Text("25.9".into()), &i));
        assert!(check_datatype(&Value::Text("-12".into()), &i));
        assert!(check_datatype(&num("3"), &f));
        assert!(!check_datatype(&num("3.5"), &i));
        for ok in ["1e5", "1.5E-3", ".5", "5.", "+2.0"] {
            assert!(is_float_lexical(ok), "{ok}");
        }
        for bad in ["", ".", "e5", "1e", "1.2.3", "abc", "--1"] {
            assert!(!is_float_lexical(bad), "{bad}");
        }
        let b = Iri::new(xsd::BOOLEAN);
        assert!(check_datatype(&Value::Bool(false), &b));
        assert!(check_datatype(&Value::Text("true".into()), &b));
        assert!(!check_datatype(&Value::Text("yes".into()), &b));
        let opaque = Iri::new("http://example.org/Color");
        assert!(check_datatype(&Value::Text("red".into()), &opaque) && is_opaque_datatype(&opaque));
    }

    #[test]
    fn records_against_answer_field() {
        let spec = answer_spec();
        assert!(check_records(&[rec(r#"{"answer":"A"}"#)], &spec).is_empty());
        for (r, code) in [(r#"{"answer":"E"}"#, "D3"), (r#"{"answer":"AB"}"#, "D3"), ("{}", "D1"), (r#"{"answer":1}"#, "D2")] {
            let d = check_records(&[rec(r)], &spec);
            assert_eq!(d.len(), 1, "{r}: {d:?}");
            assert_eq!(d[0].constraint, code);
            assert_eq!(d[0].property.as_deref(), Some("answer"));
        }
        let d = check_records(&[rec(r#"{"answer":"B","score":0.9}"#)], &spec);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].constraint.as_str(), d[0].severity), ("D4", Severity::Warning));
    }

    #[test]
    fn broken_pattern_reports_once() {
        let spec = vec![FieldSpec::new("x", xsd::STRING).with_pattern("[A-")];
        let d = check_records(&[rec(r#"{"x":"A"}"#), rec(r#"{"x":"B"}"#)], &spec);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("does not compile"));
    }

    #[test]
    fn expectation_parsing() {
        let e: Expectation = "Accuracy=25.9±0.1".parse().unwrap();
        assert_eq!((e.metric.as_str(), e.value, e.tolerance), ("Accuracy", 25.9, 0.1));
        let e: Expectation = "F1 Score=0.5+/-0.01".parse().unwrap();
        assert_eq!(e.metric, "F1 Score");
        let e: Expectation = "Accuracy=3".parse().unwrap();
        assert_eq!(e.tolerance, 0.0);
        assert!("Accuracy".parse::<Expectation>().is_err());
        assert!("=1".parse::<Expectation>().is_err());
        assert!("A=x".parse::<Expectation>().is_err());
        assert!("A=1±-1".parse::<Expectation>().is_err());
    }

    #[test]
    fn metric_normalization() {
        assert_eq!(normalize_metric("  Accuracy ", false), "Accuracy");
        assert_ne!(normalize_metric("accuracy", false), normalize_metric("Accuracy", false));
        assert_eq!(normalize_metric("F1  score", true), normalize_metric("f1 Score", true));
    }

    #[test]
    fn jsonl_records() {
        let r = parse_records("{\"a\":1}\n\n{\"a\":2}\n").unwrap();
        assert_eq!(r.len(), 2);
        assert!(parse_records("{\"a\":1}\n[1]\n").unwrap_err().starts_with("line 2"));
    }
}
