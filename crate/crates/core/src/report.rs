//! Shared machine-readable check/report types.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Indeterminate,
}

/// One verification record: what was checked, the verdict, and the numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Human-readable statement of the verified claim.
    pub anchor: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty", default)]
    pub measured: serde_json::Map<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, pass: bool) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            measured: serde_json::Map::new(),
            tolerance: None,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn with_measured(mut self, key: &str, value: serde_json::Value) -> Self {
        self.measured.insert(key.to_string(), value);
        self
    }

    pub fn indeterminate(mut self) -> Self {
        self.status = CheckStatus::Indeterminate;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
}

/// Aggregated run report; the CLI serializes this to JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(seed: u64, config: serde_json::Value, checks: Vec<Check>) -> Self {
        let summary = Summary {
            pass: checks.iter().filter(|c| c.status == CheckStatus::Pass).count(),
            fail: checks.iter().filter(|c| c.status == CheckStatus::Fail).count(),
            indeterminate: checks
                .iter()
                .filter(|c| c.status == CheckStatus::Indeterminate)
                .count(),
        };
        Self {
            schema: 1,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            checks,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }
}
