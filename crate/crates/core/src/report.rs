//! JSON verification reports.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// `{"check": name, "params": {...}, "max_residual": x, "pass": bool}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub params: Map<String, Value>,
    pub max_residual: f64,
    pub pass: bool,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            params: Map::new(),
            max_residual: 0.0,
            pass: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    /// Folds a residual into the report and re-evaluates `pass` against
    /// `tolerance`. NaN residuals always fail.
    pub fn record(&mut self, residual: f64, tolerance: f64) {
        if residual.is_nan() || !(residual <= tolerance) {
            self.pass = false;
        }
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
