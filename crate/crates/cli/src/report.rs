//! Reports and their canonical JSON form.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use reslie_core::{Check, FieldSpec};

use crate::error::{CliError, Result};
use crate::scenario::{Overrides, Scenario};
use crate::tasks::execute;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    /// The scenario as run, with every default filled in.
    pub scenario: Scenario,
    pub field: FieldSpec,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    /// Pretty JSON with sorted keys and a trailing newline. Timing is not
    /// part of it, so equal scenarios give equal bytes.
    pub fn canonical(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str, origin: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| CliError::json(origin, e))
    }

    pub fn render(&self, elapsed: Duration) -> String {
        let s = &self.scenario;
        let a = &s.algebra;
        let mut out = String::new();
        let family = match a.family {
            crate::scenario::FamilySpec::Sl => format!("sl_{}", a.n.unwrap_or(0)),
            crate::scenario::FamilySpec::Gl => format!("gl_{}", a.n.unwrap_or(0)),
            crate::scenario::FamilySpec::Custom => a
                .description
                .as_ref()
                .map_or("custom".to_string(), |d| d.name.clone()),
        };
        let _ = writeln!(out, "task: {}", s.task.name());
        let _ = writeln!(out, "algebra: {family} over GF({}^{})", a.p, s.k);
        let _ = writeln!(out, "modulus: {:?}", self.field.modulus);
        if let Some(l) = &s.lambda {
            let _ = writeln!(out, "lambda: {l:?}");
        }
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                if k == "sample" || k == "description" {
                    continue;
                }
                let _ = writeln!(out, "{k}: {}", compact(v));
            }
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            match &c.witness {
                Some(w) if !c.passed => {
                    let _ = writeln!(out, "[{tag}] {} ({w})", c.name);
                }
                _ => {
                    let _ = writeln!(out, "[{tag}] {}", c.name);
                }
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(
            out,
            "{} checks, {failed} failed, {:.3} s",
            self.checks.len(),
            elapsed.as_secs_f64()
        );
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Runs a parsed scenario.
pub fn run_scenario(mut scenario: Scenario, overrides: Overrides) -> Result<(Report, Duration)> {
    scenario.apply(overrides);
    let start = Instant::now();
    let outcome = execute(&mut scenario)?;
    let elapsed = start.elapsed();
    let passed = outcome.checks.all_passed();
    Ok((
        Report {
            scenario,
            field: outcome.field,
            results: outcome.results,
            checks: outcome.checks.checks,
            passed,
        },
        elapsed,
    ))
}

pub fn run_file(path: &Path, overrides: Overrides) -> Result<(Report, Duration)> {
    run_scenario(Scenario::load(path)?, overrides)
}
