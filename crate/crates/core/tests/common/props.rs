#![allow(dead_code)]

use std::collections::BTreeSet;

use croissant_tasks::conformance::match_solution;
use croissant_tasks::graph::{expand_document, Node};
use croissant_tasks::pattern::Pattern;
use croissant_tasks::Ontology;
use proptest::prelude::*;
use serde_json::{json, Value as Json};

use super::*;

// merge idempotence

#[derive(Debug, Clone)]
pub struct SharedDoc {
    pub sites: usize,
    pub def_site: usize,
    pub name: String,
    pub shots: Option<u32>,
    pub description: Option<String>,
}

pub fn shared_doc() -> impl Strategy<Value = SharedDoc> {
    (1usize..5, any::<prop::sample::Index>(), "[a-zA-Z ]{1,12}", proptest::option::of(0u32..20), proptest::option::of("[a-z]{0,8}"))
        .prop_map(|(sites, idx, name, shots, description)| SharedDoc {
            sites,
            def_site: idx.index(sites),
            name,
            shots,
            description,
        })
}

impl SharedDoc {
    fn body(&self) -> Json {
        let mut b = json!({"@type": "sc:SoftwareApplication", "@id": "ex:r#impl", "sc:name": self.name});
        if let Some(k) = self.shots {
            b["cr:hyperparameter"] = json!({"sc:name": "shots", "cr:value": k});
        }
        if let Some(d) = &self.description {
            b["sc:description"] = json!(d);
        }
        b
    }

    /// Site 0 is the root; the others are subtasks.
    pub fn render(&self, inline_everywhere: bool) -> String {
        let site = |i: usize| {
            if inline_everywhere || i == self.def_site {
                self.body()
            } else {
                json!({"@id": "ex:r#impl"})
            }
        };
        let subs: Vec<Json> = (1..self.sites)
            .map(|i| json!({"@type": "cr:Task", "@id": format!("ex:r#sub{i}"), "cr:implementation": site(i)}))
            .collect();
        json!({
            "@context": {"ex": "http://example.org/"},
            "@type": "cr:Task",
            "@id": "ex:r",
            "cr:implementation": site(0),
            "cr:subTask": subs,
        })
        .to_string()
    }
}

pub fn check_merge_idempotence(d: &SharedDoc) -> Result<(), String> {
    let nodes = |inline| -> Result<Vec<Node>, String> {
        let g = expand_document(&d.render(inline), "d").map_err(|e| e.to_string())?;
        Ok(g.nodes().cloned().collect())
    };
    let once = nodes(false)?;
    let everywhere = nodes(true)?;
    if once != everywhere {
        return Err(format!("reference form and inline form differ for {d:?}"));
    }
    Ok(())
}

// metric coverage monotonicity

pub fn metric_case() -> impl Strategy<Value = (Vec<usize>, Vec<(usize, f64)>, usize)> {
    (
        proptest::sample::subsequence((0..METRIC_POOL.len()).collect::<Vec<_>>(), 0..=METRIC_POOL.len()),
        proptest::collection::vec((0..METRIC_POOL.len(), 0.0f64..100.0), 0..5),
        0..METRIC_POOL.len(),
    )
}

pub fn check_monotone(expected: &[usize], results: &[(usize, f64)], extra: usize) -> Result<(), String> {
    let names: Vec<&str> = expected.iter().map(|&i| METRIC_POOL[i]).collect();
    let p = expand_document(&metric_problem(&names), "p").unwrap();
    let run = |rs: &[(usize, f64)]| {
        let rs: Vec<(&str, f64)> = rs.iter().map(|&(i, v)| (METRIC_POOL[i], v)).collect();
        let s = expand_document(&metric_solution(&rs), "s").unwrap();
        match_solution(&p, &s, Ontology::builtin()).metric_coverage
    };
    let before = run(results);
    let mut more = results.to_vec();
    more.push((extra, 1.0));
    let after = run(&more);
    for (m, ok) in &before {
        if *ok && !after[m] {
            return Err(format!("adding {} flipped {m}", METRIC_POOL[extra]));
        }
    }
    Ok(())
}

// warnings never affect conforms

pub fn warning_edits() -> impl Strategy<Value = (u8, bool, u16)> {
    (0u8..16, any::<bool>(), 0u16..1000)
}

fn task_variant(mask: u8, violation: bool, k: u16) -> Json {
    let mut d = fixture_json(TASK);
    if mask & 1 != 0 {
        d["cr:output"] = json!({"@id": format!("https://elsewhere.org/out/{k}")});
    }
    if mask & 2 != 0 {
        d["cr:implementation"] = json!({"@id": format!("ex:mmlu_small_fewshot#impl{k}"), "sc:name": "x"});
    }
    if mask & 4 != 0 {
        d["sc:about"] = json!({"@id": "ex:mmlu_small_fewshot#missing"});
    }
    if mask & 8 != 0 {
        d["cr:subTask"] = json!({"@type": "cr:Task", "@id": "ex:mmlu_small_fewshot#sub",
            "cr:implementation": {"@type": "sc:SoftwareApplication", "@id": "ex:mmlu_small_fewshot#implementation", "sc:name": format!("other {k}")}});
    }
    if violation {
        d["cr:evaluation"]["@type"] = json!("cr:ExecutionConfig");
    }
    d
}

pub fn check_warnings_inert(mask: u8, violation: bool, k: u16) -> Result<(), String> {
    let key = |v: &croissant_tasks::FileVerdict| -> BTreeSet<(String, String)> {
        v.violations().map(|d| (d.constraint.clone(), d.focus.to_string())).collect()
    };
    let base = validate_json(&task_variant(0, violation, k), "v");
    let noisy = validate_json(&task_variant(mask, violation, k), "v");
    if noisy.conforms != !violation || base.conforms != noisy.conforms {
        return Err(format!("mask {mask:#06b} violation {violation}: conforms {}", noisy.conforms));
    }
    if key(&base) != key(&noisy) {
        return Err(format!("mask {mask:#06b}: violation sets differ"));
    }
    if mask != 0 && noisy.warnings().count() == 0 {
        return Err(format!("mask {mask:#06b} produced no warning"));
    }
    Ok(())
}

// pattern engine vs the regex crate

pub const PATTERN_ALPHABET: [char; 8] = ['A', 'B', 'C', 'D', 'E', 'a', '.', '-'];

/// Every string of length at most 2 over the alphabet.
pub fn small_universe() -> Vec<String> {
    let mut out = vec![String::new()];
    for a in PATTERN_ALPHABET {
        out.push(a.to_string());
        for b in PATTERN_ALPHABET {
            out.push([a, b].iter().collect());
        }
    }
    out
}

pub const ORACLE_PATTERNS: [&str; 22] = [
    "^[A-D]$", "[A-D]", "A|B", "(A|B)*", "A+", "A?B", "[^A-D]", "a{1,2}", "A{2}", ".", ".*", "(AB)?", "^A*$",
    "[A-Da]+", "\\.", "A.|.B", "(A|)B", "E{0}", "[-A]", "[A-C-]?[D.]", "(A|B|C)(D|E)?", "A{0,1}B{1,}",
];

pub fn check_pattern_against_oracle(pattern: &str, universe: &[String]) -> Result<(), String> {
    let ours = Pattern::compile(pattern).map_err(|e| format!("{pattern}: {e}"))?;
    let oracle = regex::Regex::new(&format!("^(?:{pattern})$")).map_err(|e| e.to_string())?;
    for s in universe {
        if ours.full_match(s) != oracle.is_match(s) {
            return Err(format!("{pattern:?} on {s:?}: ours {}, oracle {}", ours.full_match(s), oracle.is_match(s)));
        }
    }
    Ok(())
}

/// Random patterns built from the supported subset.
pub fn pattern_strategy() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        prop::sample::select(vec!["A", "B", "a", "\\.", ".", "[A-C]", "[^B]", "[a-]"]).prop_map(str::to_string),
    ];
    let leaf = (atom, prop::sample::select(vec!["", "*", "+", "?", "{2}", "{0,1}", "{1,2}"]))
        .prop_map(|(a, q)| format!("{a}{q}"));
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(|v| v.concat()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}|{b}")),
            (inner, prop::sample::select(vec!["", "*", "?"])).prop_map(|(a, q)| format!("({a}){q}")),
        ]
    })
}

// self-fulfillment

#[derive(Debug, Clone)]
pub struct ProblemShape {
    pub root_metrics: Vec<usize>,
    /// Per subtask: its own expected metrics, if it has an EvaluationSpec.
    pub subtasks: Vec<Option<Vec<usize>>>,
}

pub fn problem_shape() -> impl Strategy<Value = ProblemShape> {
    let metrics = || proptest::sample::subsequence((0..METRIC_POOL.len()).collect::<Vec<_>>(), 1..=METRIC_POOL.len());
    (metrics(), proptest::collection::vec(proptest::option::of(metrics()), 0..4))
        .prop_map(|(root_metrics, subtasks)| ProblemShape { root_metrics, subtasks })
}

impl ProblemShape {
    pub fn problem(&self) -> String {
        let names = |ms: &[usize]| -> Vec<&str> { ms.iter().map(|&i| METRIC_POOL[i]).collect() };
        let subs: Vec<Json> = self
            .subtasks
            .iter()
            .enumerate()
            .map(|(i, own)| {
                let mut s = json!({"@type": "cr:TaskProblem", "@id": format!("ex:p#sub{i}"), "cr:output": {"@id": "ex:p#out"}});
                if let Some(ms) = own {
                    s["cr:evaluation"] = json!({"@type": "cr:EvaluationSpec", "@id": format!("ex:p#eval{i}"), "cr:expectedMetric": names(ms)});
                }
                s
            })
            .collect();
        json!({
            "@context": {"ex": "http://example.org/"},
            "@type": "cr:TaskProblem",
            "@id": "ex:p",
            "cr:input": {"@type": "sc:Dataset", "@id": "https://data.example.com/d"},
            "cr:output": {"@type": "cr:OutputSpec", "@id": "ex:p#out",
                "cr:schema": {"@type": "cr:RecordSet", "cr:field": [{"sc:name": "y", "cr:dataType": "xsd:string"}]}},
            "cr:implementation": {"@type": "cr:ImplementationSpec", "@id": "ex:p#impl"},
            "cr:evaluation": {"@type": "cr:EvaluationSpec", "@id": "ex:p#eval", "cr:expectedMetric": names(&self.root_metrics)},
            "cr:subTask": subs,
        })
        .to_string()
    }

    /// Copies the structure, swapping each Spec for a concrete node and
    /// reporting every expected metric.
    pub fn solution(&self) -> String {
        let results = |ms: &[usize]| -> Vec<Json> {
            ms.iter().map(|&i| json!({"cr:metric": METRIC_POOL[i], "cr:value": 50.0 + i as f64})).collect()
        };
        let evaluation = |id: &str, ms: &[usize]| {
            json!({"@type": "cr:EvaluationTask", "@id": format!("{id}#eval"),
                "cr:evaluatedSolution": {"@id": id}, "cr:evaluationResults": results(ms)})
        };
        let subs: Vec<Json> = self
            .subtasks
            .iter()
            .enumerate()
            .map(|(i, own)| {
                let id = format!("ex:s_sub{i}");
                let ms = own.as_deref().unwrap_or(&self.root_metrics);
                json!({"@type": "cr:TaskSolution", "@id": id, "sc:isBasedOn": {"@id": format!("ex:p#sub{i}")},
                    "cr:implementation": {"@id": "ex:s#impl"},
                    "cr:output": {"@type": "sc:Dataset", "@id": format!("urn:uuid:out-{i}")},
                    "cr:evaluation": evaluation(&id, ms)})
            })
            .collect();
        json!({
            "@context": {"ex": "http://example.org/"},
            "@type": "cr:TaskSolution",
            "@id": "ex:s",
            "sc:isBasedOn": {"@id": "ex:p"},
            "cr:input": {"@type": "sc:Dataset", "@id": "https://data.example.com/d"},
            "cr:output": {"@type": "sc:Dataset", "@id": "urn:uuid:out"},
            "cr:implementation": {"@type": "sc:SoftwareApplication", "@id": "ex:s#impl"},
            "cr:evaluation": evaluation("ex:s", &self.root_metrics),
            "cr:subTask": subs,
        })
        .to_string()
    }
}

pub fn check_self_fulfillment(shape: &ProblemShape) -> Result<(), String> {
    let (p_text, s_text) = (shape.problem(), shape.solution());
    for (text, name) in [(&p_text, "problem"), (&s_text, "solution")] {
        let v = validate_text(text, name);
        if !v.passed() {
            return Err(format!("{name} invalid: {}", croissant_tasks::shapes::render_text(&v)));
        }
    }
    let p = expand_document(&p_text, "p").unwrap();
    let s = expand_document(&s_text, "s").unwrap();
    let r = match_solution(&p, &s, Ontology::builtin());
    if !r.fulfilled {
        return Err(croissant_tasks::conformance::render_match(&r));
    }
    Ok(())
}

// ontology order insensitivity

/// Header (prefixes) and the blank-line separated statement blocks.
pub fn ontology_blocks() -> (String, Vec<String>) {
    let text = croissant_tasks::ontology::BUILTIN_TURTLE;
    let mut blocks: Vec<String> = text.split("\n\n").map(str::to_string).collect();
    let header = blocks.remove(0);
    (header, blocks)
}
