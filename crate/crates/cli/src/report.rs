//! Command reports in human-readable and machine-readable form.
//!
//! Both renderings come from the same [`Report`] value, and reals are
//! printed with Rust's shortest round-trip formatting in both, so the two
//! outputs always carry the same numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use irm_core::linalg::CVector;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Value,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Value => 0,
            Verdict::Fail => 1,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Value => "value",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Human,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Vec<f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, Vec<[f64; 2]>>,
    pub details: Vec<String>,
}

impl Report {
    pub fn new(command: &str, verdict: Verdict) -> Self {
        Report {
            command: command.to_string(),
            verdict,
            residuals: BTreeMap::new(),
            probabilities: None,
            values: BTreeMap::new(),
            tables: BTreeMap::new(),
            states: BTreeMap::new(),
            details: Vec::new(),
        }
    }

    pub fn residual(mut self, name: &str, value: f64) -> Self {
        self.residuals.insert(name.to_string(), value);
        self
    }

    pub fn probabilities(mut self, p: Vec<f64>) -> Self {
        self.probabilities = Some(p);
        self
    }

    pub fn value(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.values.insert(name.to_string(), value.into());
        self
    }

    pub fn table(mut self, name: &str, column: Vec<f64>) -> Self {
        self.tables.insert(name.to_string(), column);
        self
    }

    pub fn state(mut self, name: &str, v: &CVector) -> Self {
        self.states
            .insert(name.to_string(), v.as_slice().iter().map(|z| [z.re, z.im]).collect());
        self
    }

    pub fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    pub fn fail(mut self) -> Self {
        self.verdict = Verdict::Fail;
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Human => self.render_human(),
        }
    }

    fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.verdict.as_str().to_uppercase());
        if !self.values.is_empty() {
            for (k, v) in &self.values {
                let _ = writeln!(out, "  {k}: {}", human_value(v));
            }
        }
        if !self.residuals.is_empty() {
            let _ = writeln!(out, "residuals:");
            for (k, v) in &self.residuals {
                let _ = writeln!(out, "  {k}: {v:?}");
            }
        }
        if let Some(p) = &self.probabilities {
            let _ = writeln!(out, "probabilities:");
            for (m, v) in p.iter().enumerate() {
                let _ = writeln!(out, "  p({m}) = {v:?}");
            }
        }
        if !self.tables.is_empty() {
            let names: Vec<&String> = self.tables.keys().collect();
            let rows = self.tables.values().map(Vec::len).max().unwrap_or(0);
            let _ = writeln!(out, "table:");
            let _ = writeln!(
                out,
                "  {:>3}  {}",
                "m",
                names.iter().map(|n| format!("{n:>24}")).collect::<String>()
            );
            for m in 0..rows {
                let cells: String = self
                    .tables
                    .values()
                    .map(|col| {
                        col.get(m)
                            .map_or_else(|| format!("{:>24}", "-"), |v| format!("{:>24}", format!("{v:?}")))
                    })
                    .collect();
                let _ = writeln!(out, "  {m:>3}  {cells}");
            }
        }
        for (name, amps) in &self.states {
            let _ = writeln!(out, "{name}:");
            for (k, [re, im]) in amps.iter().enumerate() {
                let _ = writeln!(out, "  [{k}] {re:?} {im:?}i");
            }
        }
        for line in &self.details {
            let _ = writeln!(out, "note: {line}");
        }
        out
    }
}

fn human_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:?}"),
            _ => n.to_string(),
        },
        Value::Array(items) => format!("[{}]", items.iter().map(human_value).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}
