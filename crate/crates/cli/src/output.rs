//! Result documents and their JSON, CSV and plain-text renderings.

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

/// Version of the JSON layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One pass/fail check with the observed value and the threshold it was
/// held to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub comparison: Comparison,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= threshold,
            value,
            comparison: Comparison::AtMost,
            threshold,
            seed: None,
            detail: String::new(),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value >= threshold,
            value,
            comparison: Comparison::AtLeast,
            threshold,
            seed: None,
            detail: String::new(),
        }
    }

    /// A count that must be zero.
    pub fn none(name: impl Into<String>, count: u64) -> Self {
        Self::at_most(name, count as f64, 0.0)
    }

    /// A condition, reported as 1 (true) or 0 (false).
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Rows for the CSV rendering when a command has a natural table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Build from serializable records with flat fields.
    pub fn from_records<T: Serialize>(records: &[T]) -> Self {
        let maps: Vec<serde_json::Map<String, Value>> = records
            .iter()
            .filter_map(|r| match serde_json::to_value(r).expect("records serialize") {
                Value::Object(map) => Some(map),
                _ => None,
            })
            .collect();
        let mut header: Vec<String> = Vec::new();
        for key in maps.iter().flat_map(|m| m.keys()) {
            if !header.contains(key) {
                header.push(key.clone());
            }
        }
        let rows = maps
            .iter()
            .map(|m| {
                header
                    .iter()
                    .map(|k| m.get(k).map(scalar_text).unwrap_or_default())
                    .collect()
            })
            .collect();
        Table { header, rows }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Document {
    pub fn new(command: impl Into<String>, seed: u64, checks: Vec<Check>, data: Value) -> Self {
        Self {
            schema: SCHEMA,
            command: command.into(),
            seed,
            passed: checks.iter().all(|c| c.passed),
            checks,
            data,
            elapsed_seconds: None,
            table: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Pretty => self.render_pretty(),
        }
    }

    fn render_csv(&self) -> String {
        let table = self.table.clone().unwrap_or_else(|| Table::from_records(&self.checks));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    fn render_pretty(&self) -> String {
        let mut out = format!(
            "{} (seed {}): {}\n",
            self.command,
            self.seed,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            let cmp = match c.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            out += &format!(
                "  [{}] {}: {:e} {} {:e}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.value,
                cmp,
                c.threshold
            );
            if let Some(seed) = c.seed {
                out += &format!(" (seed {seed})");
            }
            if !c.detail.is_empty() {
                out += &format!(" - {}", c.detail);
            }
            out.push('\n');
        }
        pretty_value(&mut out, &self.data, "", 1);
        if let Some(t) = self.elapsed_seconds {
            out += &format!("  elapsed: {t:.3} s\n");
        }
        out
    }
}

/// Indented `key: value` lines; long arrays are cut after eight entries.
fn pretty_value(out: &mut String, v: &Value, key: &str, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            if !key.is_empty() {
                *out += &format!("{pad}{key}:\n");
            }
            let d = if key.is_empty() { depth } else { depth + 1 };
            for (k, v) in map {
                pretty_value(out, v, k, d);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let shown: Vec<String> = items.iter().take(8).map(scalar_text).collect();
            let more = if items.len() > 8 { format!(", ... ({} total)", items.len()) } else { String::new() };
            *out += &format!("{pad}{key}: [{}{more}]\n", shown.join(", "));
        }
        Value::Array(items) => {
            *out += &format!("{pad}{key}: {} entries\n", items.len());
            for (i, x) in items.iter().take(8).enumerate() {
                pretty_value(out, x, &format!("[{i}]"), depth + 1);
            }
        }
        other => *out += &format!("{pad}{key}: {}\n", scalar_text(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_compare() {
        assert!(Check::at_most("a", 1.0, 1.0).passed);
        assert!(!Check::at_least("b", -1e-9, -1e-10).passed);
        assert!(Check::none("c", 0).passed && !Check::none("c", 2).passed);
        assert!(!Check::at_most("nan", f64::NAN, 1.0).passed);
    }

    #[test]
    fn renders() {
        let doc = Document::new(
            "demo",
            7,
            vec![Check::at_most("x", 0.5, 1.0).with_seed(Some(3))],
            serde_json::json!({"a": 1, "list": [1, 2, 3]}),
        );
        let json: Value = serde_json::from_str(&doc.render(Format::Json)).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["checks"][0]["comparison"], "<=");
        let csv = doc.render(Format::Csv);
        assert!(csv.starts_with("name,passed,value,comparison,threshold,seed"));
        assert!(doc.render(Format::Pretty).contains("[ok] x"));
    }
}
