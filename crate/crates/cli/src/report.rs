use std::fmt::Write as _;

use abbvloc::{PiScalar, Rational};
use serde::Serialize;

const DIGITS: usize = 12;

#[derive(Debug, Clone, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub exact: String,
    pub decimal: String,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: &PiScalar) -> Self {
        NamedValue {
            name: name.into(),
            exact: value.to_string(),
            decimal: value.to_decimal(DIGITS),
        }
    }

    pub fn rational(name: impl Into<String>, value: &Rational) -> Self {
        Self::new(name, &PiScalar::rational(value.clone()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<NamedValue>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            seed,
            exact: None,
            decimal: None,
            values: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn result(mut self, value: &PiScalar) -> Self {
        self.exact = Some(value.to_string());
        self.decimal = Some(value.to_decimal(DIGITS));
        self
    }

    pub fn value(&mut self, value: NamedValue) {
        self.values.push(value);
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Compares two exact values and records the outcome.
    pub fn compare(&mut self, name: &str, got: &PiScalar, expected: &PiScalar) {
        let pass = got == expected;
        let detail = if pass {
            format!("{got}")
        } else {
            format!("{got} != {expected}")
        };
        self.check(name, pass, detail);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "seed: {}", self.seed);
        if let Some(exact) = &self.exact {
            let _ = writeln!(out, "exact: {exact}");
        }
        if let Some(decimal) = &self.decimal {
            let _ = writeln!(out, "decimal (advisory): {decimal}");
        }
        if !self.values.is_empty() {
            let width = self.values.iter().map(|v| v.name.len()).max().unwrap_or(0);
            let _ = writeln!(out, "values:");
            for v in &self.values {
                let _ = writeln!(out, "  {:<width$}  {}  ~ {}", v.name, v.exact, v.decimal);
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let status = if c.pass { "pass" } else { "FAIL" };
                let _ = writeln!(out, "  [{status}] {}: {}", c.name, c.detail);
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
