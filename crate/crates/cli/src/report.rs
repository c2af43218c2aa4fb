//! Report emitted by every subcommand, as JSON or TSV.
//!
//! Field order is fixed so identical runs produce identical bytes. Floats are
//! written in shortest round-trip form, which keeps full double precision.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub summary: Map<String, Value>,
    pub results: Vec<Value>,
    pub pass: bool,
    pub max_deviation: f64,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: Map::new(),
            seed: None,
            summary: Map::new(),
            results: Vec::new(),
            pass: true,
            max_deviation: 0.0,
            warnings: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn push(&mut self, row: Value) {
        self.results.push(row);
    }

    /// Folds one gated check into the overall verdict.
    pub fn gate(&mut self, deviation: f64, pass: bool) {
        self.max_deviation = self.max_deviation.max(deviation);
        self.pass &= pass;
    }

    pub fn warn(&mut self, warnings: impl IntoIterator<Item = String>) {
        self.warnings.extend(warnings);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Tsv => self.to_tsv(),
        }
    }

    fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut meta = |key: &str, value: String| {
            out.push_str(&format!("# {key}\t{value}\n"));
        };
        meta("command", self.command.clone());
        meta("seed", self.seed.map_or("null".into(), |s| s.to_string()));
        for (k, v) in &self.parameters {
            meta(&format!("parameter.{k}"), cell(v));
        }
        for (k, v) in &self.summary {
            meta(&format!("summary.{k}"), cell(v));
        }
        meta("pass", self.pass.to_string());
        meta("max_deviation", Value::from(self.max_deviation).to_string());
        for w in &self.warnings {
            meta("warning", w.clone());
        }
        let columns: Vec<String> = match self.results.first() {
            Some(Value::Object(first)) => first.keys().cloned().collect(),
            _ => Vec::new(),
        };
        if !columns.is_empty() {
            out.push_str(&columns.join("\t"));
            out.push('\n');
            for row in &self.results {
                let cells: Vec<String> = columns.iter().map(|c| row.get(c).map_or(String::new(), cell)).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}
