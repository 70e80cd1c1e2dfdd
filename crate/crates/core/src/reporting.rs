//! `validation_report.json` and plain-text summaries.

use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::conformance::MatchReport;
use crate::shapes::FileVerdict;

/// Source of `run_date`. Reports never read the wall clock directly.
pub trait Clock {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedClock(pub DateTime<Utc>);

impl FixedClock {
    /// Accepts RFC 3339, e.g. `2026-01-01T00:00:00Z`.
    pub fn parse(s: &str) -> Result<Self, chrono::ParseError> {
        Ok(FixedClock(DateTime::parse_from_rfc3339(s)?.with_timezone(&Utc)))
    }
}

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub message: String,
}

impl Stage {
    pub fn new(name: &str, passed: bool, message: impl Into<String>) -> Self {
        Stage {
            name: name.to_string(),
            passed,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerFile {
    pub file: String,
    pub json_valid: bool,
    pub shacl_conforms: bool,
    pub iterations: u32,
}

impl PerFile {
    pub fn passed(&self) -> bool {
        self.json_valid && self.shacl_conforms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
}

/// Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub version: String,
    pub run_date: String,
    pub parameters: BTreeMap<String, String>,
    pub stages: Vec<Stage>,
    pub per_file: Vec<PerFile>,
    pub results: Counts,
    pub overall_passed: bool,
    pub iterations: u32,
    pub output_files: Vec<String>,
}

pub const TOP_LEVEL_KEYS: [&str; 9] = [
    "version",
    "run_date",
    "parameters",
    "stages",
    "per_file",
    "results",
    "overall_passed",
    "iterations",
    "output_files",
];

impl ValidationReport {
    /// Recomputes `results` and `overall_passed` from `per_file` and `stages`.
    pub fn refresh(&mut self) {
        let pass = self.per_file.iter().filter(|f| f.passed()).count();
        self.results = Counts {
            pass,
            fail: self.per_file.len() - pass,
        };
        self.overall_passed = self.stages.iter().all(|s| s.passed) && self.results.fail == 0;
    }

    pub fn set_file_iterations(&mut self, index: usize, iterations: u32) {
        if let Some(f) = self.per_file.get_mut(index) {
            f.iterations = iterations;
        }
        self.iterations = self.iterations.max(iterations);
    }

    pub fn add_stage(&mut self, stage: Stage) {
        self.stages.push(stage);
        self.refresh();
    }
}

/// The json_validity and shacl_conformance stages for a set of verdicts.
pub fn standard_stages(verdicts: &[FileVerdict]) -> Vec<Stage> {
    let bad_json = verdicts.iter().filter(|v| !v.json_valid).count();
    let nonconforming = verdicts.iter().filter(|v| !v.passed()).count();
    vec![
        Stage::new(
            "json_validity",
            bad_json == 0,
            if bad_json == 0 {
                "All files parse as JSON".to_string()
            } else {
                format!("{bad_json} of {} files do not parse as JSON", verdicts.len())
            },
        ),
        Stage::new(
            "shacl_conformance",
            nonconforming == 0,
            if nonconforming == 0 {
                "All files conform to the Croissant Tasks constraints".to_string()
            } else {
                format!("{nonconforming} of {} files have violations", verdicts.len())
            },
        ),
    ]
}

/// `per_file` mirrors `verdicts` one-to-one with iterations 1.
pub fn build_report(
    verdicts: &[FileVerdict],
    parameters: BTreeMap<String, String>,
    mut stages: Vec<Stage>,
    clock: &dyn Clock,
) -> ValidationReport {
    if verdicts.is_empty() && stages.iter().all(|s| s.passed) {
        stages.push(Stage::new("inputs", false, "no files were validated"));
    }
    let per_file = verdicts
        .iter()
        .map(|v| PerFile {
            file: v.source_name.clone(),
            json_valid: v.json_valid,
            shacl_conforms: v.conforms,
            iterations: 1,
        })
        .collect();
    let mut report = ValidationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        run_date: clock.now().to_rfc3339_opts(SecondsFormat::Secs, true),
        parameters,
        stages,
        per_file,
        results: Counts { pass: 0, fail: 0 },
        overall_passed: false,
        iterations: 1,
        output_files: Vec::new(),
    };
    report.refresh();
    report
}

/// Two-space indented JSON with a trailing newline.
pub fn render_report_json(report: &ValidationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_report_json(text: &str) -> Result<ValidationReport, serde_json::Error> {
    serde_json::from_str(text)
}

/// Per-file status with violation counts by code, then match lines if any.
pub fn render_summary(verdicts: &[FileVerdict], matched: Option<&MatchReport>) -> String {
    let width = verdicts.iter().map(|v| v.source_name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for v in verdicts {
        let counts = v.violation_counts();
        let total: usize = counts.values().sum();
        out.push_str(&format!("{:width$}  {}  {total} violation{}", v.source_name, v.status(), if total == 1 { "" } else { "s" }));
        for (code, n) in &counts {
            out.push_str(&format!("  {code}={n}"));
        }
        if !v.json_valid {
            out.push_str("  (invalid JSON)");
        }
        out.push('\n');
    }
    if let Some(m) = matched {
        out.push_str(&format!("linked: {}\n", m.linked));
        out.push_str(&format!(
            "subtasks: {} paired, {} unmatched problem, {} unmatched solution\n",
            m.subtask_pairs.len(),
            m.unmatched_problem_subtasks.len(),
            m.unmatched_solution_subtasks.len()
        ));
        for (metric, ok) in &m.metric_coverage {
            if *ok {
                out.push_str(&format!("metric {metric:?}: covered\n"));
            } else {
                out.push_str(&format!("metric {metric:?}: missing\n"));
            }
        }
        out.push_str(&format!("fulfilled: {}\n", m.fulfilled));
    }
    out
}
