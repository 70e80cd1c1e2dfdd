//! Command-line front end. Exit codes: 0 all PASS/fulfilled, 1 any FAIL,
//! 2 usage or I/O error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::conformance::{self, Expectation, MatchOptions, MatchReport};
use crate::graph::{expand_document, NumericMode};
use crate::ontology::Ontology;
use crate::reporting::{self, Clock, FixedClock, Stage, SystemClock};
use crate::shapes::{self, builtin_shapes, FileVerdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "croissant-tasks", version, about = "Validate Croissant Tasks documents and match solutions to problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Turtle ontology to use instead of the embedded one
    #[arg(long, global = true, value_name = "PATH")]
    pub ontology: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Read numerals written as strings as text, not numbers
    #[arg(long, global = true)]
    pub strict: bool,

    /// Write validation_report.json here
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Fixed RFC 3339 timestamp for the report's run_date
    #[arg(long, global = true, value_name = "TIMESTAMP")]
    pub run_date: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate each document against the constraint catalog
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Check that solutions fulfill a problem
    Match {
        problem: PathBuf,
        #[arg(required = true)]
        solutions: Vec<PathBuf>,
        /// JSON-lines output records checked against the problem's OutputSpec
        #[arg(long, value_name = "PATH")]
        records: Option<PathBuf>,
        /// Compare metric names ignoring case and repeated whitespace
        #[arg(long)]
        lenient_metrics: bool,
        /// metric=value±tol, compared against the root-level result
        #[arg(long = "expect", value_name = "EXPECTATION")]
        expectations: Vec<Expectation>,
    },
    /// Print the canonical graph and a type census
    Inspect { file: PathBuf },
    /// Validate and print validation_report.json
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

struct Env<'a> {
    cli: &'a Cli,
    ontology: Ontology,
    out: &'a mut dyn Write,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let ontology = match &cli.ontology {
        Some(p) => crate::ontology::parse_ontology(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
        None => Ontology::builtin().clone(),
    };
    let clock: Box<dyn Clock> = match &cli.run_date {
        Some(s) => Box::new(FixedClock::parse(s).map_err(|e| Failure(format!("--run-date {s:?}: {e}")))?),
        None => Box::new(SystemClock),
    };
    let mut env = Env { cli, ontology, out };
    match &cli.command {
        Command::Validate { files } => env.validate(files, false, clock.as_ref()),
        Command::Report { files } => env.validate(files, true, clock.as_ref()),
        Command::Match {
            problem,
            solutions,
            records,
            lenient_metrics,
            expectations,
        } => env.run_match(problem, solutions, records.as_deref(), *lenient_metrics, expectations, clock.as_ref()),
        Command::Inspect { file } => env.inspect(file),
    }
}

fn numeric(cli: &Cli) -> NumericMode {
    if cli.strict {
        NumericMode::Strict
    } else {
        NumericMode::Lenient
    }
}

impl Env<'_> {
    fn parameters(&self, inputs: &[&Path]) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        let command = match self.cli.command {
            Command::Validate { .. } => "validate",
            Command::Match { .. } => "match",
            Command::Inspect { .. } => "inspect",
            Command::Report { .. } => "report",
        };
        p.insert("command".into(), command.into());
        let names: Vec<String> = inputs.iter().map(|p| display(p)).collect();
        p.insert("inputs".into(), names.join(" "));
        p.insert(
            "ontology".into(),
            self.cli.ontology.as_deref().map(display).unwrap_or_else(|| "builtin".into()),
        );
        p.insert("strict".into(), self.cli.strict.to_string());
        p
    }

    /// Reads every file up front so unreadable paths fail before any output.
    fn verdicts(&self, files: &[&Path]) -> Result<Vec<FileVerdict>, Failure> {
        let texts = files.iter().map(|p| read(p)).collect::<Result<Vec<_>, _>>()?;
        let ont = &self.ontology;
        Ok(files
            .par_iter()
            .zip(texts.par_iter())
            .map(|(path, text)| shapes::validate_document(text, &display(path), ont, builtin_shapes()))
            .collect())
    }

    fn write_report(&mut self, report: &mut reporting::ValidationReport, to_stdout: bool) -> Result<(), Failure> {
        match &self.cli.report {
            Some(path) => {
                report.output_files.push(display(path));
                std::fs::write(path, reporting::render_report_json(report))
                    .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
            }
            None if to_stdout => write!(self.out, "{}", reporting::render_report_json(report))?,
            None => {}
        }
        Ok(())
    }

    fn validate(&mut self, files: &[PathBuf], report_only: bool, clock: &dyn Clock) -> Result<i32, Failure> {
        let paths: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
        let verdicts = self.verdicts(&paths)?;
        if !report_only {
            match self.cli.format {
                Format::Text => {
                    for v in &verdicts {
                        writeln!(self.out, "# {}", v.source_name)?;
                        write!(self.out, "{}", shapes::render_text(v))?;
                    }
                }
                Format::Json => writeln!(self.out, "{}", serde_json::to_string_pretty(&verdicts)?)?,
            }
        }
        if report_only || self.cli.report.is_some() {
            let mut report = reporting::build_report(
                &verdicts,
                self.parameters(&paths),
                reporting::standard_stages(&verdicts),
                clock,
            );
            self.write_report(&mut report, report_only)?;
        }
        Ok(if verdicts.iter().all(FileVerdict::passed) { EXIT_PASS } else { EXIT_FAIL })
    }

    fn run_match(
        &mut self,
        problem: &Path,
        solutions: &[PathBuf],
        records: Option<&Path>,
        lenient_metrics: bool,
        expectations: &[Expectation],
        clock: &dyn Clock,
    ) -> Result<i32, Failure> {
        let records = match records {
            Some(p) => Some(conformance::parse_records(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display())))?),
            None => None,
        };
        let mut paths = vec![problem];
        paths.extend(solutions.iter().map(PathBuf::as_path));
        let texts = paths.iter().map(|p| read(p)).collect::<Result<Vec<_>, _>>()?;
        let verdicts = self.verdicts(&paths)?;

        let opts = MatchOptions {
            records,
            lenient_metrics,
            numeric: numeric(self.cli),
        };
        let problem_graph = if verdicts[0].passed() {
            expand_document(&texts[0], &display(problem)).ok()
        } else {
            None
        };
        let mut outcomes: Vec<(String, Option<MatchReport>)> = Vec::new();
        if let Some(pg) = &problem_graph {
            let ont = &self.ontology;
            outcomes = (1..paths.len())
                .into_par_iter()
                .map(|i| {
                    let name = display(paths[i]);
                    if !verdicts[i].passed() {
                        return (name, None);
                    }
                    let sg = expand_document(&texts[i], &name).expect("validated document expands");
                    let mut m = conformance::match_solution_with(pg, &sg, ont, &opts);
                    conformance::apply_expectations(&mut m, expectations, lenient_metrics);
                    (name, Some(m))
                })
                .collect();
        }

        match self.cli.format {
            Format::Text => {
                for v in &verdicts {
                    writeln!(self.out, "# {}", v.source_name)?;
                    write!(self.out, "{}", shapes::render_text(v))?;
                }
                if problem_graph.is_none() {
                    writeln!(self.out, "problem invalid: {}; match skipped", display(problem))?;
                }
                for (name, m) in &outcomes {
                    writeln!(self.out, "# match {name}")?;
                    match m {
                        Some(m) => write!(self.out, "{}", conformance::render_match(m))?,
                        None => writeln!(self.out, "solution invalid; match skipped\nfulfilled: false")?,
                    }
                }
            }
            Format::Json => {
                let matches: Vec<_> = outcomes
                    .iter()
                    .map(|(name, m)| json!({"solution": name, "match": m}))
                    .collect();
                let doc = json!({
                    "problem_valid": problem_graph.is_some(),
                    "verdicts": verdicts,
                    "matches": matches,
                });
                writeln!(self.out, "{}", serde_json::to_string_pretty(&doc)?)?;
            }
        }

        let all_fulfilled = problem_graph.is_some() && outcomes.iter().all(|(_, m)| m.as_ref().is_some_and(|m| m.fulfilled));
        if self.cli.report.is_some() {
            let mut stages = reporting::standard_stages(&verdicts);
            let fulfilled = outcomes.iter().filter(|(_, m)| m.as_ref().is_some_and(|m| m.fulfilled)).count();
            stages.push(Stage::new(
                "solution_match",
                all_fulfilled,
                format!("{fulfilled} of {} solutions fulfill the problem", solutions.len()),
            ));
            let mut report = reporting::build_report(&verdicts, self.parameters(&paths), stages, clock);
            self.write_report(&mut report, false)?;
        }
        Ok(if all_fulfilled { EXIT_PASS } else { EXIT_FAIL })
    }

    fn inspect(&mut self, file: &Path) -> Result<i32, Failure> {
        let text = read(file)?;
        let graph = expand_document(&text, &display(file)).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
        let census: BTreeMap<String, usize> = graph
            .type_census()
            .into_iter()
            .map(|(iri, n)| (graph.compact(&iri), n))
            .collect();
        match self.cli.format {
            Format::Text => {
                write!(self.out, "{}", graph.canonical_json())?;
                writeln!(self.out, "census:")?;
                for (class, n) in &census {
                    writeln!(self.out, "  {class}: {n}")?;
                }
            }
            Format::Json => {
                let canonical: serde_json::Value = serde_json::from_str(&graph.canonical_json())?;
                let doc = json!({"graph": canonical, "census": census});
                writeln!(self.out, "{}", serde_json::to_string_pretty(&doc)?)?;
            }
        }
        Ok(EXIT_PASS)
    }
}
