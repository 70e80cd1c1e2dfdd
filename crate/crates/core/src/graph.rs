//! JSON-LD task documents as identified node graphs.
//!
//! Only the profile used by Croissant Tasks documents is understood: an
//! inline `@context` of prefix (or term) strings, `@type` and `@id`. Nested
//! objects become nodes; objects carrying nothing but `@id` are references.
//! Nodes declared in several places under one `@id` are merged.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value as Json};

use crate::iri::{looks_absolute, Iri, IriError, PrefixTable};
use crate::ontology::Ontology;
use crate::vocab;

/// Identifier of a node. Anonymous nodes get a synthetic `_:` id derived
/// from their position below the nearest identified ancestor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId {
    iri: Iri,
    synthetic: bool,
}

impl NodeId {
    pub fn named(iri: Iri) -> Self {
        NodeId { iri, synthetic: false }
    }

    /// `label` without the leading `_:`.
    pub fn synthetic(label: &str) -> Self {
        NodeId {
            iri: Iri::new(format!("_:{label}")),
            synthetic: true,
        }
    }

    pub fn iri(&self) -> &Iri {
        &self.iri
    }

    pub fn as_str(&self) -> &str {
        self.iri.as_str()
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.iri.as_str())
    }
}

impl From<Iri> for NodeId {
    fn from(iri: Iri) -> Self {
        NodeId::named(iri)
    }
}

/// How text and numeric literals compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumericMode {
    /// `"25.9"` and `25.9` are equal.
    #[default]
    Lenient,
    Strict,
}

/// A JSON number kept in its serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Number(String);

impl Number {
    pub fn as_f64(&self) -> f64 {
        self.0.parse().unwrap_or(f64::NAN)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        !self.0.contains(['.', 'e', 'E'])
    }
}

impl From<&serde_json::Number> for Number {
    fn from(n: &serde_json::Number) -> Self {
        Number(n.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Ref(NodeId),
    Text(String),
    Number(Number),
    Bool(bool),
    List(Vec<Value>),
}

impl Value {
    pub fn as_ref_id(&self) -> Option<&NodeId> {
        match self {
            Value::Ref(id) => Some(id),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(t) => Some(t),
            _ => None,
        }
    }

    /// Numeric reading of the value; text is only read in lenient mode.
    pub fn as_f64(&self, mode: NumericMode) -> Option<f64> {
        match self {
            Value::Number(n) => Some(n.as_f64()),
            Value::Text(t) if mode == NumericMode::Lenient => t.trim().parse().ok(),
            _ => None,
        }
    }

    /// Structural equality, except that a numeric literal and text spelling
    /// the same number are equal in lenient mode.
    pub fn matches(&self, other: &Value, mode: NumericMode) -> bool {
        if self == other {
            return true;
        }
        match (self, other) {
            (Value::Number(_), Value::Text(_)) | (Value::Text(_), Value::Number(_)) => {
                match (self.as_f64(mode), other.as_f64(mode)) {
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                }
            }
            (Value::List(a), Value::List(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.matches(y, mode))
            }
            _ => false,
        }
    }

    /// Short human-readable form.
    pub fn display(&self) -> String {
        match self {
            Value::Ref(id) => format!("<{id}>"),
            Value::Text(t) => format!("{t:?}"),
            Value::Number(n) => n.0.clone(),
            Value::Bool(b) => b.to_string(),
            Value::List(v) => format!("[{}]", v.iter().map(Value::display).collect::<Vec<_>>().join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub types: BTreeSet<Iri>,
    pub properties: BTreeMap<Iri, Vec<Value>>,
}

impl Node {
    fn new(id: NodeId) -> Self {
        Node {
            id,
            types: BTreeSet::new(),
            properties: BTreeMap::new(),
        }
    }

    pub fn has_type(&self, iri: &str) -> bool {
        self.types.iter().any(|t| t.as_str() == iri)
    }

    /// Values of `prop`; empty when absent.
    pub fn values(&self, prop: &str) -> &[Value] {
        self.properties
            .iter()
            .find(|(k, _)| k.as_str() == prop)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn has_property(&self, prop: &str) -> bool {
        self.properties.keys().any(|k| k.as_str() == prop)
    }

    /// Values of `prop` with nested lists flattened.
    pub fn flat_values(&self, prop: &str) -> Vec<&Value> {
        fn walk<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
            match v {
                Value::List(items) => items.iter().for_each(|i| walk(i, out)),
                other => out.push(other),
            }
        }
        let mut out = Vec::new();
        for v in self.values(prop) {
            walk(v, &mut out);
        }
        out
    }
}

/// A non-fatal finding made while building the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeNote {
    pub node: NodeId,
    pub property: Iri,
    pub kept: Value,
    pub dropped: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeGraph {
    source_name: String,
    root: NodeId,
    nodes: BTreeMap<NodeId, Node>,
    /// The document's own `@context` entries.
    declared_context: PrefixTable,
    /// Built-in prefixes merged with `declared_context`.
    context: PrefixTable,
    notes: Vec<MergeNote>,
    local_documents: BTreeSet<String>,
}

/// Where a reference points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution<'a> {
    Defined(&'a Node),
    /// An absolute IRI not described by this document (a dataset URL, a
    /// problem published elsewhere).
    External,
    /// A document-local id that nothing defines.
    Missing,
}

#[derive(Debug, thiserror::Error)]
pub enum ExpandError {
    #[error("{source_name}:{line}:{column}: invalid JSON: {message}")]
    Json {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{source_name}: top level must be a JSON object")]
    NotAnObject { source_name: String },
    #[error("{source_name}: at {path}: {source}")]
    Iri {
        source_name: String,
        path: String,
        #[source]
        source: IriError,
    },
    #[error("{source_name}: at {path}: unsupported JSON-LD feature: {feature}")]
    Unsupported {
        source_name: String,
        path: String,
        feature: String,
    },
    #[error("{source_name}: at {path}: {message}")]
    Invalid {
        source_name: String,
        path: String,
        message: String,
    },
    #[error("{source_name}: conflicting @type for <{id}>: {existing:?} vs {declared:?}")]
    MergeConflict {
        source_name: String,
        id: NodeId,
        existing: Vec<String>,
        declared: Vec<String>,
    },
    #[error("{source_name}: the root object has no @type")]
    RootWithoutType { source_name: String },
    #[error("{source_name}: the root object is a bare @id reference")]
    RootIsReference { source_name: String },
}

impl ExpandError {
    pub fn is_json_syntax(&self) -> bool {
        matches!(self, ExpandError::Json { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("no node <{0}> in the graph")]
    MissingNode(NodeId),
}

struct Expander<'a> {
    source_name: &'a str,
    table: PrefixTable,
    nodes: BTreeMap<NodeId, Node>,
    notes: Vec<MergeNote>,
}

impl Expander<'_> {
    fn iri_err(&self, path: &str, source: IriError) -> ExpandError {
        ExpandError::Iri {
            source_name: self.source_name.to_string(),
            path: path.to_string(),
            source,
        }
    }

    fn unsupported(&self, path: &str, feature: impl Into<String>) -> ExpandError {
        ExpandError::Unsupported {
            source_name: self.source_name.to_string(),
            path: path.to_string(),
            feature: feature.into(),
        }
    }

    fn invalid(&self, path: &str, message: impl Into<String>) -> ExpandError {
        ExpandError::Invalid {
            source_name: self.source_name.to_string(),
            path: path.to_string(),
            message: message.into(),
        }
    }

    fn expand_key(&self, key: &str, path: &str) -> Result<Iri, ExpandError> {
        if !key.contains(':') {
            if let Some(target) = self.table.get(key) {
                return self.table.expand(target).map_err(|e| self.iri_err(path, e));
            }
        }
        self.table.expand(key).map_err(|e| self.iri_err(path, e))
    }

    fn expand_id(&self, raw: &str, path: &str) -> Result<NodeId, ExpandError> {
        if let Some(label) = raw.strip_prefix("_:") {
            if label.is_empty() {
                return Err(self.invalid(path, "empty blank node label"));
            }
            return Ok(NodeId::synthetic(label));
        }
        self.table.expand(raw).map(NodeId::named).map_err(|e| self.iri_err(path, e))
    }

    /// Expands one object into a node (or a reference) and returns its id.
    /// `anchor` is the label prefix used for synthetic ids of anonymous nodes.
    fn object(&mut self, obj: &Map<String, Json>, anchor: &str, path: &str, is_root: bool) -> Result<NodeId, ExpandError> {
        for key in obj.keys() {
            if key.starts_with('@') && !matches!(key.as_str(), "@id" | "@type" | "@context") {
                return Err(self.unsupported(&format!("{path}/{key}"), format!("keyword `{key}`")));
            }
        }
        if obj.contains_key("@context") && !is_root {
            return Err(self.unsupported(&format!("{path}/@context"), "nested @context"));
        }

        let id = match obj.get("@id") {
            Some(Json::String(s)) => Some(self.expand_id(s, &format!("{path}/@id"))?),
            Some(_) => return Err(self.invalid(&format!("{path}/@id"), "@id must be a string")),
            None => None,
        };

        let is_reference = obj.keys().all(|k| k == "@id" || k == "@context");
        if is_reference {
            if is_root {
                return Err(ExpandError::RootIsReference {
                    source_name: self.source_name.to_string(),
                });
            }
            if let Some(id) = id {
                return Ok(id);
            }
            // `{}`: an empty anonymous node
        }

        let id = id.unwrap_or_else(|| NodeId::synthetic(anchor));

        let mut types = BTreeSet::new();
        match obj.get("@type") {
            None => {}
            Some(Json::String(s)) => {
                types.insert(self.table.expand(s).map_err(|e| self.iri_err(&format!("{path}/@type"), e))?);
            }
            Some(Json::Array(items)) => {
                for (i, t) in items.iter().enumerate() {
                    let p = format!("{path}/@type/{i}");
                    let s = t.as_str().ok_or_else(|| self.invalid(&p, "@type entries must be strings"))?;
                    types.insert(self.table.expand(s).map_err(|e| self.iri_err(&p, e))?);
                }
            }
            Some(_) => return Err(self.invalid(&format!("{path}/@type"), "@type must be a string or array")),
        }
        if is_root && types.is_empty() {
            return Err(ExpandError::RootWithoutType {
                source_name: self.source_name.to_string(),
            });
        }

        // register before descending so cycles through @id terminate
        let existing = self.nodes.entry(id.clone()).or_insert_with(|| Node::new(id.clone()));
        if !existing.types.is_empty() && !types.is_empty() && existing.types != types {
            return Err(ExpandError::MergeConflict {
                source_name: self.source_name.to_string(),
                id,
                existing: existing.types.iter().map(|t| t.to_string()).collect(),
                declared: types.iter().map(|t| t.to_string()).collect(),
            });
        }
        existing.types.extend(types);

        let child_anchor = if id.is_synthetic() {
            id.as_str().trim_start_matches("_:").to_string()
        } else {
            self.table.compact(id.iri())
        };

        let mut local: Vec<(Iri, Vec<Value>)> = Vec::new();
        for (key, value) in obj {
            if key.starts_with('@') {
                continue;
            }
            let kpath = format!("{path}/{key}");
            let prop = self.expand_key(key, &kpath)?;
            let prop_label = self.table.compact(&prop);
            let iri_valued = vocab::IRI_VALUED_PROPERTIES.contains(&prop.as_str());
            let values = match value {
                Json::Array(items) => {
                    let mut out = Vec::with_capacity(items.len());
                    for (i, item) in items.iter().enumerate() {
                        let a = format!("{child_anchor}/{prop_label}/{i}");
                        if let Some(v) = self.value(item, &a, &format!("{kpath}/{i}"), iri_valued)? {
                            out.push(v);
                        }
                    }
                    out
                }
                other => {
                    let a = format!("{child_anchor}/{prop_label}/0");
                    self.value(other, &a, &kpath, iri_valued)?.into_iter().collect()
                }
            };
            local.push((prop, values));
        }

        let node = self.nodes.get_mut(&id).expect("registered above");
        for (prop, values) in local {
            let scalar = vocab::SCALAR_PROPERTIES.contains(&prop.as_str());
            let slot = node.properties.entry(prop.clone()).or_default();
            let had_values = !slot.is_empty();
            for v in values {
                if slot.contains(&v) {
                    continue;
                }
                if scalar && had_values {
                    if !slot.iter().any(|k| k.matches(&v, NumericMode::Lenient)) {
                        self.notes.push(MergeNote {
                            node: id.clone(),
                            property: prop.clone(),
                            kept: slot[0].clone(),
                            dropped: v,
                        });
                    }
                    continue;
                }
                slot.push(v);
            }
        }
        Ok(id)
    }

    fn value(&mut self, json: &Json, anchor: &str, path: &str, iri_valued: bool) -> Result<Option<Value>, ExpandError> {
        Ok(Some(match json {
            Json::Null => return Ok(None),
            Json::Bool(b) => Value::Bool(*b),
            Json::Number(n) => Value::Number(n.into()),
            Json::String(s) => {
                if iri_valued && s.contains(':') {
                    match self.table.expand(s) {
                        Ok(iri) => Value::Ref(NodeId::named(iri)),
                        Err(_) => Value::Text(s.clone()),
                    }
                } else {
                    Value::Text(s.clone())
                }
            }
            Json::Array(items) => {
                let mut out = Vec::with_capacity(items.len());
                for (i, item) in items.iter().enumerate() {
                    if let Some(v) = self.value(item, &format!("{anchor}/{i}"), &format!("{path}/{i}"), iri_valued)? {
                        out.push(v);
                    }
                }
                Value::List(out)
            }
            Json::Object(obj) => Value::Ref(self.object(obj, anchor, path, false)?),
        }))
    }
}

fn read_context(source_name: &str, doc: &Map<String, Json>) -> Result<PrefixTable, ExpandError> {
    let mut table = PrefixTable::new();
    match doc.get("@context") {
        None => {}
        Some(Json::Object(ctx)) => {
            for (k, v) in ctx {
                match v {
                    Json::String(ns) => {
                        table.insert(k.clone(), ns.clone());
                    }
                    _ => {
                        return Err(ExpandError::Unsupported {
                            source_name: source_name.to_string(),
                            path: format!("/@context/{k}"),
                            feature: "expanded term definition".into(),
                        })
                    }
                }
            }
        }
        Some(_) => {
            return Err(ExpandError::Unsupported {
                source_name: source_name.to_string(),
                path: "/@context".into(),
                feature: "remote or array @context".into(),
            })
        }
    }
    Ok(table)
}

/// Parses and expands one task document.
pub fn expand_document(text: &str, source_name: &str) -> Result<NodeGraph, ExpandError> {
    let json: Json = serde_json::from_str(text).map_err(|e| ExpandError::Json {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    expand_json(&json, source_name)
}

/// Expands an already-parsed JSON document.
pub fn expand_json(json: &Json, source_name: &str) -> Result<NodeGraph, ExpandError> {
    let Json::Object(doc) = json else {
        return Err(ExpandError::NotAnObject {
            source_name: source_name.to_string(),
        });
    };
    let declared = read_context(source_name, doc)?;
    let table = PrefixTable::builtin().merged_with(&declared);
    let mut ex = Expander {
        source_name,
        table,
        nodes: BTreeMap::new(),
        notes: Vec::new(),
    };
    let root = ex.object(doc, "root", "", true)?;

    let mut local_documents = BTreeSet::new();
    local_documents.insert(root.iri().document_part().to_string());
    for node in ex.nodes.values() {
        if !node.id.is_synthetic() && !node.properties.is_empty() {
            local_documents.insert(node.id.iri().document_part().to_string());
        }
    }

    Ok(NodeGraph {
        source_name: source_name.to_string(),
        root,
        nodes: ex.nodes,
        declared_context: declared,
        context: ex.table,
        notes: ex.notes,
        local_documents,
    })
}

impl NodeGraph {
    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn root(&self) -> &NodeId {
        &self.root
    }

    pub fn root_node(&self) -> &Node {
        &self.nodes[&self.root]
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    /// Lookup by absolute or compact id.
    pub fn node_by_iri(&self, iri: &str) -> Option<&Node> {
        let iri = self.context.expand(iri).ok()?;
        self.nodes.get(&NodeId::named(iri))
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn context(&self) -> &PrefixTable {
        &self.context
    }

    pub fn merge_notes(&self) -> &[MergeNote] {
        &self.notes
    }

    /// Compact display form of an IRI under the document's context.
    pub fn compact(&self, iri: &Iri) -> String {
        self.context.compact(iri)
    }

    /// True when `iri` belongs to a document this file describes, i.e. it
    /// shares the part before `#` with the root or a node defined here.
    pub fn is_document_local(&self, iri: &Iri) -> bool {
        self.local_documents.contains(iri.document_part())
    }

    pub fn resolve(&self, id: &NodeId) -> Resolution<'_> {
        if let Some(node) = self.nodes.get(id) {
            // a typed mention of a foreign IRI is still external
            let external_stub = node.properties.is_empty()
                && id != &self.root
                && !id.is_synthetic()
                && !self.is_document_local(id.iri())
                && id.iri().is_web_or_urn();
            return if external_stub {
                Resolution::External
            } else {
                Resolution::Defined(node)
            };
        }
        if id.is_synthetic() || self.is_document_local(id.iri()) {
            Resolution::Missing
        } else if id.iri().is_web_or_urn() || looks_absolute(id.as_str()) {
            Resolution::External
        } else {
            Resolution::Missing
        }
    }

    /// Declared types plus their superclass closure.
    pub fn effective_types(&self, ont: &Ontology, id: &NodeId) -> Result<BTreeSet<Iri>, GraphError> {
        let node = self.nodes.get(id).ok_or_else(|| GraphError::MissingNode(id.clone()))?;
        Ok(effective_types_of(node, ont))
    }

    /// Count of nodes per declared type.
    pub fn type_census(&self) -> BTreeMap<Iri, usize> {
        let mut census = BTreeMap::new();
        for node in self.nodes.values() {
            for t in &node.types {
                *census.entry(t.clone()).or_insert(0) += 1;
            }
        }
        census
    }

    /// Every reference value in the graph as (subject, property, target).
    pub fn references(&self) -> Vec<(&NodeId, &Iri, &NodeId)> {
        let mut out = Vec::new();
        for node in self.nodes.values() {
            for (prop, values) in &node.properties {
                for v in values {
                    collect_refs(v, &mut |target| out.push((&node.id, prop, target)));
                }
            }
        }
        out
    }

    /// Deterministic JSON serialization: sorted keys, each node defined once
    /// at its first reference in a depth-first walk from the root, later
    /// occurrences written as `{"@id": ...}`.
    pub fn canonical_json(&self) -> String {
        let mut ref_counts: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for (_, _, target) in self.references() {
            *ref_counts.entry(target).or_insert(0) += 1;
        }
        let mut emitted = BTreeSet::new();
        let mut body = self.node_json(&self.root, &mut emitted, &ref_counts);
        if !self.declared_context.is_empty() {
            let ctx: Map<String, Json> = self
                .declared_context
                .iter()
                .map(|(k, v)| (k.to_string(), Json::String(v.to_string())))
                .collect();
            body.insert("@context".into(), Json::Object(ctx));
        }
        let mut text = serde_json::to_string_pretty(&Json::Object(body)).expect("serializable");
        text.push('\n');
        text
    }

    fn node_json<'a>(
        &'a self,
        id: &'a NodeId,
        emitted: &mut BTreeSet<&'a NodeId>,
        ref_counts: &BTreeMap<&NodeId, usize>,
    ) -> Map<String, Json> {
        emitted.insert(id);
        let node = &self.nodes[id];
        let mut obj = Map::new();
        if !id.is_synthetic() || ref_counts.get(id).copied().unwrap_or(0) > 1 {
            obj.insert("@id".into(), Json::String(self.compact(id.iri())));
        }
        match node.types.len() {
            0 => {}
            1 => {
                obj.insert("@type".into(), Json::String(self.compact(node.types.first().unwrap())));
            }
            _ => {
                obj.insert(
                    "@type".into(),
                    Json::Array(node.types.iter().map(|t| Json::String(self.compact(t))).collect()),
                );
            }
        }
        for (prop, values) in &node.properties {
            let iri_valued = vocab::IRI_VALUED_PROPERTIES.contains(&prop.as_str());
            let mut items: Vec<Json> = values
                .iter()
                .map(|v| self.value_json(v, iri_valued, emitted, ref_counts))
                .collect();
            let json = if items.len() == 1 && !matches!(values[0], Value::List(_)) {
                items.pop().unwrap()
            } else {
                Json::Array(items)
            };
            obj.insert(self.compact(prop), json);
        }
        obj
    }

    fn value_json<'a>(
        &'a self,
        v: &'a Value,
        iri_valued: bool,
        emitted: &mut BTreeSet<&'a NodeId>,
        ref_counts: &BTreeMap<&NodeId, usize>,
    ) -> Json {
        match v {
            Value::Ref(target) => {
                if self.nodes.contains_key(target) && !emitted.contains(target) {
                    Json::Object(self.node_json(target, emitted, ref_counts))
                } else if iri_valued && !self.nodes.contains_key(target) {
                    Json::String(self.compact(target.iri()))
                } else {
                    let mut m = Map::new();
                    m.insert("@id".into(), Json::String(self.compact(target.iri())));
                    Json::Object(m)
                }
            }
            Value::Text(t) => Json::String(t.clone()),
            Value::Number(n) => serde_json::from_str(n.as_str()).unwrap_or(Json::String(n.as_str().to_string())),
            Value::Bool(b) => Json::Bool(*b),
            Value::List(items) => Json::Array(
                items
                    .iter()
                    .map(|i| self.value_json(i, iri_valued, emitted, ref_counts))
                    .collect(),
            ),
        }
    }
}

fn collect_refs<'a>(v: &'a Value, f: &mut impl FnMut(&'a NodeId)) {
    match v {
        Value::Ref(id) => f(id),
        Value::List(items) => items.iter().for_each(|i| collect_refs(i, f)),
        _ => {}
    }
}

pub(crate) fn effective_types_of(node: &Node, ont: &Ontology) -> BTreeSet<Iri> {
    node.types.iter().flat_map(|t| ont.superclass_closure(t)).collect()
}
