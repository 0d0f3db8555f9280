//! Machine-readable run reports: named checks with values, Monte Carlo σ
//! where applicable, and pass flags, serialized with stable key order so an
//! identical run reproduces the report byte for byte.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Result;

/// One verification line. `sigma` carries the Monte Carlo standard error for
/// stochastic checks and is null for exact ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn exact(name: impl Into<String>, value: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            sigma: None,
            pass,
        }
    }

    pub fn stochastic(name: impl Into<String>, value: f64, sigma: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            sigma: Some(sigma),
            pass,
        }
    }
}

/// Full report for one CLI run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, params: Value) -> Self {
        Self {
            command: command.into(),
            params,
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn add_artifact(&mut self, path: impl Into<String>) {
        self.artifacts.push(path.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
