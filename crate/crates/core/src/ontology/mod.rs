//! The Croissant Tasks vocabulary: classes, subclass edges and property
//! domains/ranges, loaded from a Turtle-subset schema.

mod turtle;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::iri::{Iri, PrefixTable, CROISSANT_NS, RDFS_NS, RDF_NS};

pub use turtle::Pos;

/// The schema shipped with the crate.
pub const BUILTIN_TURTLE: &str = include_str!("croissant-tasks.ttl");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OntologyError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unsupported Turtle construct: {construct}")]
    Unsupported { line: usize, column: usize, construct: String },
    #[error("{line}:{column}: unknown prefix `{prefix}`")]
    UnknownPrefix { line: usize, column: usize, prefix: String },
    #[error("{line}:{column}: prefix `{prefix}` redeclared as <{namespace}>, previously <{previous}>")]
    ConflictingPrefix {
        line: usize,
        column: usize,
        prefix: String,
        namespace: String,
        previous: String,
    },
    #[error("{line}:{column}: unsupported predicate <{predicate}>")]
    UnsupportedPredicate { line: usize, column: usize, predicate: String },
    #[error("{line}:{column}: {message}")]
    Invalid { line: usize, column: usize, message: String },
    #[error("subclass cycle through <{0}>")]
    Cycle(Iri),
    #[error("unknown class <{0}>")]
    UnknownClass(Iri),
    #[error("unknown property <{0}>")]
    UnknownProperty(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntClass {
    pub id: Iri,
    pub label: String,
    pub comment: String,
    /// Sorted, deduplicated.
    pub superclasses: Vec<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntProperty {
    pub id: Iri,
    pub label: String,
    pub comment: String,
    pub domains: BTreeSet<Iri>,
    pub ranges: BTreeSet<Iri>,
    /// False for properties only seen through domain/range statements
    /// (`schema:isBasedOn` in the shipped schema).
    pub declared: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ontology {
    classes: BTreeMap<Iri, OntClass>,
    properties: BTreeMap<Iri, OntProperty>,
    prefixes: PrefixTable,
}

#[derive(Default)]
struct SubjectDecl {
    pos: Option<Pos>,
    is_class: bool,
    is_property: bool,
    label: Option<String>,
    comment: Option<String>,
    supers: BTreeSet<Iri>,
    domains: BTreeSet<Iri>,
    ranges: BTreeSet<Iri>,
}

fn rdf(local: &str) -> Iri {
    Iri::new(format!("{RDF_NS}{local}"))
}

fn rdfs(local: &str) -> Iri {
    Iri::new(format!("{RDFS_NS}{local}"))
}

impl Ontology {
    /// Parses a schema written in the supported Turtle subset.
    pub fn parse(text: &str) -> Result<Self, OntologyError> {
        let tokens = turtle::tokenize(text)?;
        let items = turtle::parse_items(&tokens)?;

        let mut prefixes = PrefixTable::new();
        let mut subjects: BTreeMap<Iri, SubjectDecl> = BTreeMap::new();

        // prefixes may appear anywhere; collect them first so that statement
        // order never matters
        for item in &items {
            if let turtle::Item::Prefix { name, namespace, pos } = item {
                if let Some(prev) = prefixes.get(name) {
                    if prev != namespace {
                        return Err(OntologyError::ConflictingPrefix {
                            line: pos.line,
                            column: pos.column,
                            prefix: name.clone(),
                            namespace: namespace.clone(),
                            previous: prev.to_string(),
                        });
                    }
                }
                prefixes.insert(name.clone(), namespace.clone());
            }
        }

        let resolve = |term: &turtle::Term, pos: Pos| -> Result<Iri, OntologyError> {
            match term {
                turtle::Term::Iri(s) => Ok(Iri::new(s.clone())),
                turtle::Term::PName(p, l) => match prefixes.get(p) {
                    Some(ns) => Ok(Iri::new(format!("{ns}{l}"))),
                    None => Err(OntologyError::UnknownPrefix {
                        line: pos.line,
                        column: pos.column,
                        prefix: p.clone(),
                    }),
                },
                turtle::Term::A => Ok(rdf("type")),
                turtle::Term::Literal(_) => Err(OntologyError::Invalid {
                    line: pos.line,
                    column: pos.column,
                    message: "expected an IRI, found a string literal".into(),
                }),
            }
        };
        let literal = |term: &turtle::Term, pos: Pos| -> Result<String, OntologyError> {
            match term {
                turtle::Term::Literal(s) => Ok(s.clone()),
                _ => Err(OntologyError::Invalid {
                    line: pos.line,
                    column: pos.column,
                    message: "expected a string literal".into(),
                }),
            }
        };

        let (rdf_type, rdf_class, rdf_property) = (rdf("type"), rdf("Class"), rdf("Property"));
        let (label, comment, sub_class_of) = (rdfs("label"), rdfs("comment"), rdfs("subClassOf"));
        let domain = Iri::schema("domainIncludes");
        let range = Iri::schema("rangeIncludes");

        for item in &items {
            let turtle::Item::Statement(st) = item else { continue };
            let (sterm, spos) = &st.subject;
            let subject = resolve(sterm, *spos)?;
            let decl = subjects.entry(subject).or_default();
            decl.pos.get_or_insert(*spos);
            for ((vterm, vpos), objects) in &st.predicates {
                let verb = resolve(vterm, *vpos)?;
                for (oterm, opos) in objects {
                    if verb == rdf_type {
                        let ty = resolve(oterm, *opos)?;
                        if ty == rdf_class {
                            decl.is_class = true;
                        } else if ty == rdf_property {
                            decl.is_property = true;
                        } else {
                            return Err(OntologyError::Invalid {
                                line: opos.line,
                                column: opos.column,
                                message: format!("unsupported type <{ty}>; expected rdf:Class or rdf:Property"),
                            });
                        }
                    } else if verb == label {
                        decl.label.get_or_insert(literal(oterm, *opos)?);
                    } else if verb == comment {
                        decl.comment.get_or_insert(literal(oterm, *opos)?);
                    } else if verb == sub_class_of {
                        decl.supers.insert(resolve(oterm, *opos)?);
                    } else if verb == domain {
                        decl.domains.insert(resolve(oterm, *opos)?);
                    } else if verb == range {
                        decl.ranges.insert(resolve(oterm, *opos)?);
                    } else {
                        return Err(OntologyError::UnsupportedPredicate {
                            line: vpos.line,
                            column: vpos.column,
                            predicate: verb.to_string(),
                        });
                    }
                }
            }
        }

        let mut classes = BTreeMap::new();
        let mut properties = BTreeMap::new();
        for (id, d) in subjects {
            let pos = d.pos.unwrap_or(Pos { line: 0, column: 0 });
            let invalid = |message: String| OntologyError::Invalid {
                line: pos.line,
                column: pos.column,
                message,
            };
            let has_prop_stmts = !d.domains.is_empty() || !d.ranges.is_empty();
            if d.is_class && d.is_property {
                return Err(invalid(format!("<{id}> is typed both rdf:Class and rdf:Property")));
            }
            let as_class = d.is_class || (!d.is_property && !has_prop_stmts && !d.supers.is_empty());
            let as_property = d.is_property || (!d.is_class && has_prop_stmts);
            if as_class {
                if has_prop_stmts {
                    return Err(invalid(format!("class <{id}> carries domain/range statements")));
                }
                classes.insert(
                    id.clone(),
                    OntClass {
                        id,
                        label: d.label.unwrap_or_default(),
                        comment: d.comment.unwrap_or_default(),
                        superclasses: d.supers.into_iter().collect(),
                    },
                );
            } else if as_property {
                if !d.supers.is_empty() {
                    return Err(invalid(format!("property <{id}> carries rdfs:subClassOf")));
                }
                properties.insert(
                    id.clone(),
                    OntProperty {
                        id,
                        label: d.label.unwrap_or_default(),
                        comment: d.comment.unwrap_or_default(),
                        domains: d.domains,
                        ranges: d.ranges,
                        declared: d.is_property,
                    },
                );
            } else {
                return Err(invalid(format!("<{id}> is neither a class nor a property")));
            }
        }

        let ont = Ontology {
            classes,
            properties,
            prefixes,
        };
        ont.check_acyclic()?;
        Ok(ont)
    }

    /// The embedded Croissant Tasks schema, parsed once.
    pub fn builtin() -> &'static Ontology {
        static BUILTIN: OnceLock<Ontology> = OnceLock::new();
        BUILTIN.get_or_init(|| Ontology::parse(BUILTIN_TURTLE).expect("embedded schema parses"))
    }

    fn check_acyclic(&self) -> Result<(), OntologyError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn visit<'a>(
            ont: &'a Ontology,
            c: &'a Iri,
            marks: &mut BTreeMap<&'a Iri, Mark>,
        ) -> Result<(), OntologyError> {
            match marks.get(c) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Active) => return Err(OntologyError::Cycle(c.clone())),
                None => {}
            }
            marks.insert(c, Mark::Active);
            if let Some(class) = ont.classes.get(c) {
                for s in &class.superclasses {
                    visit(ont, s, marks)?;
                }
            }
            marks.insert(c, Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        for c in self.classes.keys() {
            visit(self, c, &mut marks)?;
        }
        Ok(())
    }

    pub fn classes(&self) -> impl Iterator<Item = &OntClass> {
        self.classes.values()
    }

    pub fn properties(&self) -> impl Iterator<Item = &OntProperty> {
        self.properties.values()
    }

    /// Prefixes declared by the schema text.
    pub fn prefixes(&self) -> &PrefixTable {
        &self.prefixes
    }

    pub fn class(&self, id: &Iri) -> Option<&OntClass> {
        self.classes.get(id)
    }

    /// Looks a property up; `croissant:valuePattern` is an alias of
    /// `schema:valuePattern`.
    pub fn property(&self, id: &Iri) -> Option<&OntProperty> {
        self.properties.get(id).or_else(|| {
            let local = id.as_str().strip_prefix(CROISSANT_NS)?;
            if local == "valuePattern" {
                self.properties.get(&Iri::schema(local))
            } else {
                None
            }
        })
    }

    /// Classes referenced as superclasses but never declared (schema.org
    /// classes in the shipped schema). They are leaves with no superclasses.
    pub fn external_classes(&self) -> BTreeSet<&Iri> {
        self.classes
            .values()
            .flat_map(|c| c.superclasses.iter())
            .filter(|s| !self.classes.contains_key(*s))
            .collect()
    }

    pub fn is_known_class(&self, id: &Iri) -> bool {
        self.classes.contains_key(id) || self.classes.values().any(|c| c.superclasses.contains(id))
    }

    /// Expands a compact name through the schema's own prefixes plus the
    /// `cr`/`croissant`/`sc`/`schema`/`xsd` aliases.
    pub fn iri(&self, name: &str) -> Result<Iri, crate::iri::IriError> {
        PrefixTable::builtin().merged_with(&self.prefixes).expand(name)
    }

    /// Reflexive-transitive subclass test.
    pub fn is_subclass_of(&self, sub: &Iri, ancestor: &Iri) -> Result<bool, OntologyError> {
        if !self.is_known_class(sub) {
            return Err(OntologyError::UnknownClass(sub.clone()));
        }
        Ok(self.superclass_closure(sub).contains(ancestor))
    }

    /// `class` plus every class reachable through superclass edges. Unknown
    /// classes are treated as leaves.
    pub fn superclass_closure(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            if let Some(oc) = self.classes.get(&c) {
                stack.extend(oc.superclasses.iter().cloned());
            }
        }
        seen
    }

    pub fn property_ranges(&self, prop: &Iri) -> Result<&BTreeSet<Iri>, OntologyError> {
        self.property(prop)
            .map(|p| &p.ranges)
            .ok_or_else(|| OntologyError::UnknownProperty(prop.clone()))
    }

    /// Writes the ontology back out in the same Turtle subset.
    pub fn to_turtle(&self) -> String {
        let table = &self.prefixes;
        let term = |iri: &Iri| {
            let c = table.compact(iri);
            if c == iri.as_str() {
                format!("<{c}>")
            } else {
                c
            }
        };
        let mut out = String::new();
        for (p, ns) in self.prefixes.iter() {
            out.push_str(&format!("@prefix {p}: <{ns}> .\n"));
        }
        out.push('\n');
        let mut block = |subject: &Iri, lines: Vec<String>| {
            out.push_str(&term(subject));
            let n = lines.len();
            for (i, l) in lines.into_iter().enumerate() {
                out.push_str(if i == 0 { " " } else { "  " });
                out.push_str(&l);
                out.push_str(if i + 1 == n { " .\n" } else { " ;\n" });
            }
            out.push('\n');
        };
        let list = |set: &mut dyn Iterator<Item = &Iri>| set.map(&term).collect::<Vec<_>>().join(", ");
        for c in self.classes.values() {
            let mut lines = vec![format!("a {}", term(&rdf("Class")))];
            if !c.label.is_empty() {
                lines.push(format!("{} {}", term(&rdfs("label")), turtle::quote(&c.label)));
            }
            if !c.comment.is_empty() {
                lines.push(format!("{} {}", term(&rdfs("comment")), turtle::quote(&c.comment)));
            }
            if !c.superclasses.is_empty() {
                lines.push(format!("{} {}", term(&rdfs("subClassOf")), list(&mut c.superclasses.iter())));
            }
            block(&c.id, lines);
        }
        for p in self.properties.values() {
            let mut lines = Vec::new();
            if p.declared {
                lines.push(format!("a {}", term(&rdf("Property"))));
            }
            if !p.label.is_empty() {
                lines.push(format!("{} {}", term(&rdfs("label")), turtle::quote(&p.label)));
            }
            if !p.comment.is_empty() {
                lines.push(format!("{} {}", term(&rdfs("comment")), turtle::quote(&p.comment)));
            }
            if !p.domains.is_empty() {
                lines.push(format!("{} {}", term(&Iri::schema("domainIncludes")), list(&mut p.domains.iter())));
            }
            if !p.ranges.is_empty() {
                lines.push(format!("{} {}", term(&Iri::schema("rangeIncludes")), list(&mut p.ranges.iter())));
            }
            block(&p.id, lines);
        }
        out
    }
}

/// Parses a Turtle-subset schema.
pub fn parse_ontology(text: &str) -> Result<Ontology, OntologyError> {
    Ontology::parse(text)
}

/// A copy of the embedded schema.
pub fn builtin_ontology() -> Ontology {
    Ontology::builtin().clone()
}
