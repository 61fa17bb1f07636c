use std::time::Duration;

use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(unitforge::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<unitforge::Error> for CliError {
    fn from(e: unitforge::Error) -> Self {
        use unitforge::Error as E;
        match e {
            E::Parse(_)
            | E::InvalidField(_)
            | E::BadResidue(_)
            | E::BadPrime(_)
            | E::NotSquareFree { .. }
            | E::DimensionMismatch { .. }
            | E::NotSymmetric => CliError::Usage(e.to_string()),
            other => CliError::Lib(other),
        }
    }
}

pub type CliResult = Result<Scenario, CliError>;

/// Inputs, outputs and named checks of one run.
#[derive(Debug, Default)]
pub struct Scenario {
    inputs: Map<String, Value>,
    outputs: Map<String, Value>,
    checks: Vec<(String, bool)>,
}

impl Scenario {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn failed(error: &str) -> Self {
        let mut s = Self::new();
        s.output("error", error);
        s.check("completed", false);
        s
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.into(), v.into());
        self
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) -> &mut Self {
        self.checks.push((name.into(), ok));
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn finish(&self, name: &str, seed: u64, elapsed: Duration) -> Value {
        let checks: Map<String, Value> = self
            .checks
            .iter()
            .map(|(k, v)| (k.clone(), Value::Bool(*v)))
            .collect();
        json!({
            "scenario": name,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "checks": checks,
            "all_checks_passed": self.passed(),
            "seed": seed,
            "elapsed": elapsed.as_secs_f64(),
        })
    }
}

/// One line per run on standard error, listing any failed checks.
pub fn summarize(result: &Value) {
    let name = result["scenario"].as_str().unwrap_or("?");
    let checks = result["checks"].as_object().cloned().unwrap_or_default();
    let failed: Vec<&String> = checks
        .iter()
        .filter(|(_, v)| !v.as_bool().unwrap_or(false))
        .map(|(k, _)| k)
        .collect();
    let secs = result["elapsed"].as_f64().unwrap_or(0.0);
    if failed.is_empty() {
        eprintln!("{name}: PASS ({} checks, {secs:.3} s)", checks.len());
    } else {
        let names: Vec<&str> = failed.iter().map(|s| s.as_str()).collect();
        eprintln!("{name}: FAIL ({}) ({secs:.3} s)", names.join(", "));
        if let Some(e) = result["outputs"]["error"].as_str() {
            eprintln!("  {e}");
        }
    }
}
