//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

/// Result of a single named check: worst violation observed over all samples,
/// the parameters it ran with, and a pass flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub parameters: serde_json::Value,
    pub worst_violation: f64,
    pub samples_run: u64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        name: impl Into<String>,
        parameters: serde_json::Value,
        worst_violation: f64,
        samples_run: u64,
        tol: f64,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            parameters,
            worst_violation,
            samples_run,
            pass: worst_violation <= tol,
        }
    }
}

/// Aggregate report for a verification run. `all_pass` holds iff every record
/// passes. `wall_time_s` is the only field allowed to differ between two runs
/// with identical configuration and seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
    pub all_pass: bool,
    pub wall_time_s: f64,
    pub seed: u64,
    pub artifact_version: String,
}

impl VerificationReport {
    pub fn from_records(records: Vec<CheckRecord>, seed: u64, wall_time_s: f64) -> Self {
        let all_pass = records.iter().all(|r| r.pass);
        VerificationReport {
            records,
            all_pass,
            wall_time_s,
            seed,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn worst_violation(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.worst_violation)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass_tracks_records() {
        let ok = CheckRecord::new("a", serde_json::json!({}), 0.0, 1, 1e-12);
        let bad = CheckRecord::new("b", serde_json::json!({}), 1.0, 1, 1e-12);
        assert!(VerificationReport::from_records(vec![ok.clone()], 0, 0.0).all_pass);
        assert!(!VerificationReport::from_records(vec![ok, bad], 0, 0.0).all_pass);
    }
}
