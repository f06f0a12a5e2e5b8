//! Report assembly and serialization.
//!
//! Machine output is JSON with exact rationals as `"p/q"` strings; the
//! decimal renderings are display-only. All maps are ordered, so a report
//! is a pure function of the command and its inputs: re-running the echoed
//! command reproduces the report byte for byte.

#![allow(clippy::needless_range_loop)]

use serde::Serialize;
use serde_json::{json, Map, Value};

use fairaudit::classifier::Classifier;
use fairaudit::domain::{Document, Domain};
use fairaudit::partition::CellPartition;
use fairaudit::rational::{decimal_string, ratio_string, Rat};

pub const SCHEMA: &str = "fairaudit-report/1";

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    pub results: Value,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub witnesses: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
}

#[derive(Serialize)]
pub struct InputEcho {
    pub source: String,
    pub sha256: String,
}

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report {
            schema: SCHEMA,
            command,
            input: None,
            results: Value::Object(Map::new()),
            witnesses: Map::new(),
            annotations: Vec::new(),
        }
    }

    pub fn with_input(mut self, source: &str, bytes: &str) -> Report {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(bytes.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.input = Some(InputEcho { source: source.to_string(), sha256: hex });
        self
    }

    pub fn with_notes(mut self, doc: &Document) -> Report {
        self.annotations = doc.notes.clone();
        self
    }

    pub fn result(mut self, key: &str, value: Value) -> Report {
        if let Value::Object(map) = &mut self.results {
            map.insert(key.to_string(), value);
        }
        self
    }

    pub fn witness(mut self, key: &str, value: Value) -> Report {
        self.witnesses.insert(key.to_string(), value);
        self
    }

    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization is infallible");
        text.push('\n');
        text
    }

    /// Plain-text rendering: one `key: value` line per result entry, with
    /// witnesses and annotations appended.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(map) = &self.results {
            for (key, value) in map {
                out.push_str(&format!("{key}: {}\n", text_value(value)));
            }
        }
        for (key, value) in &self.witnesses {
            out.push_str(&format!("witness {key}: {}\n", compact(value)));
        }
        for note in &self.annotations {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

fn text_value(value: &Value) -> String {
    if let Value::Object(map) = value {
        if let (Some(Value::String(exact)), Some(Value::String(decimal)), 2) =
            (map.get("exact"), map.get("decimal"), map.len())
        {
            return format!("{exact} ({decimal})");
        }
    }
    match value {
        Value::String(s) => s.clone(),
        other => compact(other),
    }
}

fn compact(value: &Value) -> String {
    serde_json::to_string(value).expect("value serialization")
}

/// An exact rational with its display rendering.
pub fn rational_entry(r: &Rat) -> Value {
    json!({ "exact": ratio_string(r), "decimal": decimal_string(r) })
}

/// Exact rational as a bare string (for weight maps and rate tables).
pub fn rational_str(r: &Rat) -> Value {
    Value::String(ratio_string(r))
}

/// A classifier as a cell-label map keyed by the comma-joined member ids.
pub fn classifier_value(domain: &Domain, cells: &CellPartition, h: &Classifier) -> Value {
    let mut map = Map::new();
    for (ci, cell) in cells.cells().iter().enumerate() {
        let key: Vec<&str> = cell.iter().map(|&i| domain.id(i)).collect();
        map.insert(key.join(","), json!(h.label(ci)));
    }
    Value::Object(map)
}

/// A weight vector as an id-to-rational map.
pub fn weights_value(domain: &Domain, weights: &[Rat]) -> Value {
    let mut map = Map::new();
    for i in 0..domain.len() {
        map.insert(domain.id(i).to_string(), rational_str(&weights[i]));
    }
    Value::Object(map)
}

/// Instance-id lists for witness sets.
pub fn id_set_value(domain: &Domain, set: &[usize]) -> Value {
    Value::Array(set.iter().map(|&i| Value::String(domain.id(i).to_string())).collect())
}
