//! JSON verification report.

use focus_addition::verify::CheckReport;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Vec<CheckEntry>,
    pub pass: bool,
}

/// One check. Non-finite errors serialize as `null`.
#[derive(Debug, Serialize)]
pub struct CheckEntry {
    pub check: String,
    pub samples: usize,
    pub max_error: f64,
    pub threshold: f64,
    pub pass: bool,
    pub worst_input: Vec<f64>,
}

impl SuiteReport {
    pub fn new(reports: &[CheckReport]) -> Self {
        Self {
            suite: reports
                .iter()
                .map(|r| CheckEntry {
                    check: r.check.to_string(),
                    samples: r.samples,
                    max_error: r.max_error,
                    threshold: r.threshold,
                    pass: r.pass,
                    worst_input: r.worst_input.clone(),
                })
                .collect(),
            pass: reports.iter().all(|r| r.pass),
        }
    }

    pub fn to_json(&self) -> String {
        // plain data, serialization cannot fail
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One human-readable line per check.
pub fn summary_line(r: &CheckReport) -> String {
    format!(
        "{:<26} {}  {:.3e} (threshold {:.1e}, {} samples)",
        r.check.name(),
        if r.pass { "pass" } else { "FAIL" },
        r.max_error,
        r.threshold,
        r.samples
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use focus_addition::model::ModelParams;
    use focus_addition::verify::{run_check, CheckId, ToleranceConfig};

    #[test]
    fn schema_fields() {
        let tol = ToleranceConfig {
            samples: 5,
            ..ToleranceConfig::default()
        };
        let r = run_check(CheckId::FlowField, &ModelParams::standard(), &tol);
        let v: serde_json::Value = serde_json::from_str(&SuiteReport::new(&[r]).to_json()).unwrap();
        let entry = &v["suite"][0];
        for key in [
            "check",
            "samples",
            "max_error",
            "threshold",
            "pass",
            "worst_input",
        ] {
            assert!(entry.get(key).is_some(), "{key}");
        }
        assert_eq!(entry["check"], "flow_field");
        assert_eq!(v["pass"], true);
    }
}
