//! Deterministic report documents shared by every command.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use casurf::rational::{format_sig12, round_sig12};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = concat!("casurf ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational value, never fails.
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub name: String,
    pub status: Status,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Vec<ResultEntry>,
    pub versions: String,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            versions: VERSION.to_string(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), normalize(value.into()));
        self
    }

    pub fn value(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.push(name, Status::Value, value)
    }

    pub fn check(&mut self, name: &str, passed: bool, value: impl Into<Value>) -> &mut Self {
        self.push(name, if passed { Status::Pass } else { Status::Fail }, value)
    }

    fn push(&mut self, name: &str, status: Status, value: impl Into<Value>) -> &mut Self {
        self.results.push(ResultEntry {
            name: name.to_string(),
            status,
            value: normalize(value.into()),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status != Status::Fail)
    }

    /// Pretty JSON; object keys come out sorted because `serde_json::Map` is
    /// ordered.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("value is serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({})", self.command, self.versions);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {}", render(v));
        }
        for r in &self.results {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Value => "    ",
            };
            let _ = writeln!(out, "{tag} {}: {}", r.name, render(&r.value));
        }
        out
    }
}

/// Rounds every float in `value` to twelve significant digits.
pub fn normalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig12(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

fn render(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format_sig12(n.as_f64().expect("f64 number")),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(render).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", render(v))).collect();
            parts.join(" ")
        }
        other => other.to_string(),
    }
}
