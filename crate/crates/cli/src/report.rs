use std::collections::BTreeMap;
use std::path::Path;

use codebounds::rational::{self, Rational};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Lp,
    Sdp,
    ClosedForm,
}

/// One bound and how it was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct ReportedBound {
    pub method: Provenance,
    /// Algorithm that produced `value`.
    pub solver: String,
    /// Exact rational when `exact`, otherwise a shortest round-trip decimal.
    pub value: String,
    pub exact: bool,
    pub approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floored: Option<String>,
    /// Solver tolerance; 0 for exact arithmetic.
    pub tolerance: f64,
}

impl ReportedBound {
    pub fn exact(method: Provenance, solver: &str, value: &Rational) -> Self {
        ReportedBound {
            method,
            solver: solver.to_string(),
            value: rational::format(value),
            exact: true,
            approx: rational::to_f64(value),
            floored: Some(value.floor().to_integer().to_string()),
            tolerance: 0.0,
        }
    }

    pub fn float(method: Provenance, solver: &str, value: f64, tolerance: f64) -> Self {
        ReportedBound {
            method,
            solver: solver.to_string(),
            value: value.to_string(),
            exact: false,
            approx: value,
            floored: None,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub parameters: BTreeMap<String, Value>,
    pub bounds: Vec<ReportedBound>,
    pub timing: Timing,
    pub diagnostics: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            parameters: BTreeMap::new(),
            bounds: Vec::new(),
            timing: Timing { elapsed_seconds: 0.0 },
            diagnostics: BTreeMap::new(),
            certificate: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn diag(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Invalid(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
    }
}

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
