//! JSON report schema and the text rendering of the same data.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use nct_spin_core::axioms::CheckRecord;

use crate::config::{float, RunConfig};

/// A float printed with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(float(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub residual: Num,
    pub tolerance: Num,
    pub pass: bool,
    pub mask_depth: usize,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64, mask_depth: usize) -> Self {
        Self {
            name: name.into(),
            residual: Num(residual),
            tolerance: Num(tolerance),
            pass: residual <= tolerance,
            mask_depth,
        }
    }

    pub fn from_record(prefix: &str, r: &CheckRecord) -> Self {
        Self {
            name: format!("{prefix}{}", r.name),
            residual: Num(r.residual),
            tolerance: Num(r.tolerance),
            pass: r.pass,
            mask_depth: r.mask_depth,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize, V: Serialize> {
    pub tool_version: &'static str,
    pub config_echo: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<V>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl<T: Serialize, V: Serialize> Report<T, V> {
    pub fn new(cfg: &RunConfig) -> Self {
        let config_echo = cfg
            .echo()
            .into_iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
            .collect();
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            config_echo,
            checks: Vec::new(),
            tables: None,
            verdicts: None,
            warnings: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Checks, then `summary` lines, then warnings and notes.
    pub fn to_text(&self, summary: &[String]) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<40} {:>24} <= {:<24} depth {} {}\n",
                c.name,
                float(c.residual.0),
                float(c.tolerance.0),
                c.mask_depth,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        for line in summary {
            out.push_str(line);
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }

    /// `name,residual,tolerance,pass,mask_depth` rows.
    pub fn checks_csv(&self) -> String {
        let mut out = String::from("name,residual,tolerance,pass,mask_depth\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.name,
                float(c.residual.0),
                float(c.tolerance.0),
                c.pass,
                c.mask_depth
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    #[test]
    fn numbers_are_fixed_width() {
        let mut r: Report<(), ()> = Report::new(&RunConfig::new(Command::Verify));
        r.checks.push(CheckEntry::new("a", 1.5e-17, 1e-12, 2));
        r.checks.push(CheckEntry::new("b", f64::NAN, 1e-12, 0));
        let json = r.to_json();
        assert!(json.contains("\"residual\": 1.5000000000000000e-17"));
        assert!(json.contains("\"residual\": null"));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["checks"][0]["pass"], true);
        assert_eq!(v["checks"][1]["pass"], false);
        assert!(v.get("tables").is_none());
    }
}
