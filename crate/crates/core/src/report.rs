//! Deterministic report rendering. Numbers are rounded to 12 significant
//! digits before serialization and -0 is normalized to 0, so identical
//! inputs always serialize to identical bytes.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

/// Round to 12 significant digits, mapping -0 to 0.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("round-trip");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Fixed-width decimal rendering of a 12-significant-digit value.
pub fn fmt12(x: f64) -> String {
    let r = round_sig12(x);
    if r == 0.0 {
        return "0".to_string();
    }
    format!("{r}")
}

/// JSON value for a rounded number.
pub fn num12(x: f64) -> Value {
    json!(round_sig12(x))
}

/// A report with a fixed key order: command, inputs, results, version,
/// status.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Vec<Value>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            results: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn push(&mut self, record: Value) -> &mut Self {
        self.results.push(record);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), json!(self.command));
        map.insert("inputs".into(), Value::Object(self.inputs.clone()));
        map.insert("results".into(), Value::Array(self.results.clone()));
        map.insert("version".into(), json!(TOOL_VERSION));
        map.insert("status".into(), json!(self.status.as_str()));
        Value::Object(map)
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    /// CSV with one row per result record; columns are the union of keys in
    /// first-appearance order. Scalars only.
    pub fn render_csv(&self) -> String {
        let mut columns: Vec<String> = Vec::new();
        for rec in &self.results {
            if let Value::Object(map) = rec {
                for key in map.keys() {
                    if !columns.iter().any(|c| c == key) {
                        columns.push(key.clone());
                    }
                }
            }
        }
        let mut out = columns.join(",");
        out.push('\n');
        for rec in &self.results {
            let row: Vec<String> = columns
                .iter()
                .map(|c| match rec.get(c.as_str()) {
                    Some(Value::Number(n)) => n
                        .as_f64()
                        .map(fmt12)
                        .unwrap_or_else(|| n.to_string()),
                    Some(Value::String(s)) => s.clone(),
                    Some(Value::Bool(b)) => b.to_string(),
                    Some(Value::Null) | None => String::new(),
                    Some(other) => other.to_string(),
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.render_json(),
            OutputFormat::Csv => self.render_csv(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Domain(format!(
                "unknown format '{other}' (expected json or csv)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_negative_zero() {
        assert_eq!(round_sig12(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(round_sig12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(round_sig12(123456789012345.0), 123456789012000.0);
    }

    #[test]
    fn key_order_is_fixed() {
        let mut r = Report::new("demo");
        r.input("m", json!(2));
        r.input("rho", num12(1.0));
        r.push(json!({"label": "x", "value": num12(0.5)}));
        let s = r.render_json();
        let ci = s.find("\"command\"").unwrap();
        let ii = s.find("\"inputs\"").unwrap();
        let ri = s.find("\"results\"").unwrap();
        let vi = s.find("\"version\"").unwrap();
        let si = s.find("\"status\"").unwrap();
        assert!(ci < ii && ii < ri && ri < vi && vi < si);
    }

    #[test]
    fn csv_columns_in_first_appearance_order() {
        let mut r = Report::new("demo");
        r.push(json!({"a": 1.0, "b": "x"}));
        r.push(json!({"a": 2.0, "c": true}));
        let csv = r.render_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "a,b,c");
        assert_eq!(lines.next().unwrap(), "1,x,");
        assert_eq!(lines.next().unwrap(), "2,,true");
    }

    #[test]
    fn deterministic_rendering() {
        let build = || {
            let mut r = Report::new("demo");
            r.input("seed", json!(7));
            r.push(json!({"label": "v", "value": num12(1.0 / 3.0)}));
            r.render_json()
        };
        assert_eq!(build(), build());
    }
}
