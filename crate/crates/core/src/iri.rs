//! IRIs and prefix tables.
//!
//! Every IRI held by the graph, ontology and shapes is absolute. Compact
//! `prefix:local` forms only exist at the edges (parsing and rendering).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub const CROISSANT_NS: &str = "http://mlcommons.org/croissant/";
pub const SCHEMA_NS: &str = "https://schema.org/";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Iri(String);

impl Iri {
    /// Wraps a string that is already known to be absolute.
    pub fn new(value: impl Into<String>) -> Self {
        Iri(value.into())
    }

    pub fn croissant(local: &str) -> Self {
        Iri(format!("{CROISSANT_NS}{local}"))
    }

    pub fn schema(local: &str) -> Self {
        Iri(format!("{SCHEMA_NS}{local}"))
    }

    pub fn xsd(local: &str) -> Self {
        Iri(format!("{XSD_NS}{local}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part before `#`, or the whole IRI when there is no fragment.
    pub fn document_part(&self) -> &str {
        match self.0.find('#') {
            Some(i) => &self.0[..i],
            None => &self.0,
        }
    }

    pub fn is_web_or_urn(&self) -> bool {
        self.0.starts_with("http://") || self.0.starts_with("https://") || self.0.starts_with("urn:")
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IriError {
    #[error("unknown prefix `{prefix}` in `{value}`")]
    UnknownPrefix { prefix: String, value: String },
    #[error("`{0}` is neither an absolute IRI nor a compact `prefix:local` name")]
    NotAnIri(String),
}

/// True for strings that are absolute IRIs on their own: `scheme://...` or `urn:...`.
pub fn looks_absolute(value: &str) -> bool {
    match value.split_once(':') {
        Some((scheme, rest)) => {
            let scheme_ok = !scheme.is_empty()
                && scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
            scheme_ok && (rest.starts_with("//") || scheme.eq_ignore_ascii_case("urn"))
        }
        None => false,
    }
}

/// Prefix → namespace mapping.
///
/// Declared prefixes win over absolute-IRI detection, so a document that binds
/// `urn` as a prefix gets what it asked for.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixTable {
    map: BTreeMap<String, String>,
}

impl PrefixTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `cr`, `croissant`, `sc`, `schema` and `xsd`.
    pub fn builtin() -> Self {
        let mut t = Self::new();
        t.insert("cr", CROISSANT_NS);
        t.insert("croissant", CROISSANT_NS);
        t.insert("sc", SCHEMA_NS);
        t.insert("schema", SCHEMA_NS);
        t.insert("xsd", XSD_NS);
        t
    }

    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) -> Option<String> {
        self.map.insert(prefix.into(), namespace.into())
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.map.get(prefix).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Entries of `other` override entries of `self`.
    pub fn merged_with(&self, other: &PrefixTable) -> PrefixTable {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.insert(k, v);
        }
        out
    }

    /// Expands `prefix:local` or passes an absolute IRI through unchanged.
    pub fn expand(&self, value: &str) -> Result<Iri, IriError> {
        if let Some((prefix, local)) = value.split_once(':') {
            if let Some(ns) = self.get(prefix) {
                if !local.starts_with("//") {
                    return Ok(Iri(format!("{ns}{local}")));
                }
            }
            if looks_absolute(value) {
                return Ok(Iri(value.to_string()));
            }
            return Err(IriError::UnknownPrefix {
                prefix: prefix.to_string(),
                value: value.to_string(),
            });
        }
        Err(IriError::NotAnIri(value.to_string()))
    }

    /// Shortest compact form whose expansion gives back `iri`.
    ///
    /// Ties go to the lexicographically smallest prefix so the choice is stable.
    pub fn compact(&self, iri: &Iri) -> String {
        let mut best: Option<(&str, &str)> = None;
        for (prefix, ns) in self.iter() {
            if let Some(local) = iri.as_str().strip_prefix(ns) {
                if local.starts_with("//") || looks_absolute(local) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bp, bl)) => (local.len(), prefix) < (bl.len(), bp),
                };
                if better {
                    best = Some((prefix, local));
                }
            }
        }
        match best {
            Some((p, l)) => {
                let candidate = format!("{p}:{l}");
                if self.expand(&candidate).ok().as_ref() == Some(iri) {
                    candidate
                } else {
                    iri.as_str().to_string()
                }
            }
            None => iri.as_str().to_string(),
        }
    }
}
