//! Structured run report: per-suite residual rows with tolerances, named
//! values, and a provenance block. Numbers are serialized as strings with
//! 17 significant digits so reruns are byte-comparable; the timing field is
//! the one part excluded from comparison.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// 17-significant-digit rendering, enough to reconstruct the double
/// exactly.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRow {
    pub name: String,
    /// What identity or bound the residual tests.
    pub identity: String,
    pub residual: String,
    pub tolerance: String,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(name: &str, identity: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            identity: identity.to_string(),
            residual: sig17(residual),
            tolerance: sig17(tolerance),
            pass: residual.abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SuiteReport {
    /// `pass`, `fail` or `skipped`.
    pub status: String,
    pub checks: Vec<CheckRow>,
    /// Named values computed by the suite (term values, masses, charges).
    pub values: BTreeMap<String, String>,
    /// Non-fatal notes (for example a non-flat vacuum warning).
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn skipped() -> Self {
        Self {
            status: "skipped".into(),
            checks: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn from_checks(checks: Vec<CheckRow>, values: BTreeMap<String, String>) -> Self {
        let status = if checks.iter().all(|c| c.pass) {
            "pass"
        } else {
            "fail"
        };
        Self {
            status: status.into(),
            checks,
            values,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != "fail"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub version: String,
    pub grid: [usize; 4],
    pub spacing: [f64; 4],
    pub seed: u64,
    pub config: RunConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ActionReport {
    pub status: String,
    pub provenance: Provenance,
    pub suites: BTreeMap<String, SuiteReport>,
    /// Wall-clock runtime; excluded from byte-for-byte comparisons.
    pub timing_ms: u64,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.suites.values().all(|s| s.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report body with the timing field removed, for reproducibility
    /// comparisons.
    pub fn comparison_body(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("timing_ms");
        }
        serde_json::to_string_pretty(&value).expect("body serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_row_compares_against_tolerance() {
        let ok = CheckRow::new("a", "id", 1e-13, 1e-12);
        assert!(ok.pass);
        let bad = CheckRow::new("b", "id", 1e-2, 1e-12);
        assert!(!bad.pass);
    }

    #[test]
    fn sig17_round_trips_doubles() {
        for &x in &[
            std::f64::consts::PI,
            1.0 / 3.0,
            6.626_070_15e-34,
            -0.0,
            1234567890.123456,
        ] {
            let s = sig17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(x.to_bits(), back.to_bits(), "{s}");
        }
    }

    #[test]
    fn comparison_body_drops_timing() {
        let report = ActionReport {
            status: "pass".into(),
            provenance: Provenance {
                version: "0".into(),
                grid: [9; 4],
                spacing: [0.1; 4],
                seed: 1,
                config: RunConfig::default(),
            },
            suites: BTreeMap::new(),
            timing_ms: 1234,
        };
        let mut other = report.clone();
        other.timing_ms = 9999;
        assert_ne!(report.to_json(), other.to_json());
        assert_eq!(report.comparison_body(), other.comparison_body());
    }
}
