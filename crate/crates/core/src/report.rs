//! Machine-readable check reports.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), non-finite
//! values as `null`. Nothing time- or host-dependent enters a report, so a
//! fixed configuration and toolkit version always serialize to the same bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::{Number, Value};

use crate::VERSION;

/// JSON number with 17 significant digits, or `null` if non-finite.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Number::from_str(&format!("{x:.16e}")).map(Value::Number).unwrap_or(Value::Null)
    } else {
        Value::Null
    }
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    json_f64(*x).serialize(s)
}

fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub equation: String,
    pub convention: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(serialize_with = "ser_opt_f64", skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64", skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub expected_nonzero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials_in_band: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials_required: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub passed: bool,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, equation: impl Into<String>, convention: impl Into<String>) -> Self {
        CheckRecord {
            check: check.into(),
            equation: equation.into(),
            convention: convention.into(),
            seed: None,
            max_residual: None,
            threshold: None,
            expected_nonzero: false,
            trials_in_band: None,
            trials_required: None,
            term_count: None,
            normal_form: None,
            detail: None,
            passed: false,
        }
    }

    /// Passes when `residual ≤ threshold`.
    pub fn residual(mut self, residual: f64, threshold: f64) -> Self {
        self.max_residual = Some(residual);
        self.threshold = Some(threshold);
        self.passed = residual <= threshold;
        self
    }

    /// Passes when at least `required` trials landed in the accepted band.
    pub fn counted(mut self, in_band: usize, required: usize) -> Self {
        self.trials_in_band = Some(in_band);
        self.trials_required = Some(required);
        self.passed = in_band >= required;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub passed: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value, records: Vec<CheckRecord>) -> Self {
        let passed_count = records.iter().filter(|r| r.passed).count();
        Report {
            tool: "gaugecheck",
            version: VERSION,
            command: command.into(),
            config,
            summary: Summary { total: records.len(), passed: passed_count, failed: records.len() - passed_count },
            passed: passed_count == records.len(),
            records,
        }
    }

    pub fn record(&self, check: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == check)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "gaugecheck {} {}", self.version, self.command);
        for r in &self.records {
            let status = if r.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status} {} [{}] ({})", r.check, r.equation, r.convention);
            if let (Some(res), Some(th)) = (r.max_residual, r.threshold) {
                let _ = write!(out, " residual={res:.3e} threshold={th:.1e}");
            }
            if let (Some(k), Some(n)) = (r.trials_in_band, r.trials_required) {
                let _ = write!(out, " in-band={k} required={n}");
            }
            if let Some(t) = r.term_count {
                let _ = write!(out, " terms={t}");
            }
            if let Some(d) = &r.detail {
                let _ = write!(out, " {d}");
            }
            if !r.passed {
                if let Some(nf) = &r.normal_form {
                    let _ = write!(out, "\n    normal form: {nf}");
                }
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed: {}",
            self.summary.passed,
            self.summary.total,
            if self.passed { "OK" } else { "FAILED" }
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_digits() {
        assert_eq!(json_f64(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(json_f64(-2.5e-12).to_string(), "-2.4999999999999998e-12");
        assert_eq!(json_f64(f64::NAN), Value::Null);
    }

    #[test]
    fn overall_pass_requires_every_record() {
        let ok = CheckRecord::new("a", "eq", "ym").residual(1e-12, 1e-9);
        let bad = CheckRecord::new("b", "eq", "ym").residual(1e-3, 1e-9);
        assert!(Report::new("x", Value::Null, vec![ok.clone()]).passed);
        let r = Report::new("x", Value::Null, vec![ok, bad]);
        assert!(!r.passed);
        assert_eq!(r.summary.failed, 1);
        assert!(r.to_text().contains("FAIL b"));
        assert!(r.to_json().contains("\"max_residual\": 1.0000000000000000e-3"));
    }
}
