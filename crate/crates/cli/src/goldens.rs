//! Golden files: `<name>.scenario.json` next to `<name>.expected.json`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::report::run_file;
use crate::scenario::Overrides;

pub const SCENARIO_SUFFIX: &str = ".scenario.json";
pub const EXPECTED_SUFFIX: &str = ".expected.json";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Difference {
    pub path: String,
    pub expected: Option<Value>,
    pub actual: Option<Value>,
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Value>| v.as_ref().map_or("(absent)".to_string(), |v| v.to_string());
        write!(
            f,
            "{}: expected {}, found {}",
            self.path,
            show(&self.expected),
            show(&self.actual)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Mismatch(Vec<Difference>),
    Failed(String),
    Updated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub name: String,
    pub status: Status,
}

/// Every place where two JSON values disagree, as dotted paths.
pub fn diff(expected: &Value, actual: &Value) -> Vec<Difference> {
    let mut out = Vec::new();
    walk("$", Some(expected), Some(actual), &mut out);
    out
}

fn walk(path: &str, e: Option<&Value>, a: Option<&Value>, out: &mut Vec<Difference>) {
    match (e, a) {
        (Some(Value::Object(x)), Some(Value::Object(y))) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                walk(&format!("{path}.{k}"), x.get(k), y.get(k), out);
            }
        }
        (Some(Value::Array(x)), Some(Value::Array(y))) => {
            for i in 0..x.len().max(y.len()) {
                walk(&format!("{path}[{i}]"), x.get(i), y.get(i), out);
            }
        }
        (e, a) if e != a => out.push(Difference {
            path: path.to_string(),
            expected: e.cloned(),
            actual: a.cloned(),
        }),
        _ => {}
    }
}

fn scenario_files(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        let name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
        if let Some(stem) = name.strip_suffix(SCENARIO_SUFFIX) {
            out.push((stem.to_string(), path.clone()));
        }
    }
    out.sort();
    Ok(out)
}

fn check_case(dir: &Path, name: &str, scenario: &Path, update: bool) -> Status {
    let expected_path = dir.join(format!("{name}{EXPECTED_SUFFIX}"));
    let report = match run_file(scenario, Overrides::default()) {
        Ok((r, _)) => r,
        Err(e) => return Status::Failed(format!("exit {}: {e}", e.exit_code())),
    };
    let actual = report.canonical();
    if update {
        return match std::fs::write(&expected_path, &actual) {
            Ok(()) => Status::Updated,
            Err(e) => Status::Failed(format!("{}: {e}", expected_path.display())),
        };
    }
    let expected = match std::fs::read_to_string(&expected_path) {
        Ok(s) => s,
        Err(e) => return Status::Failed(format!("{}: {e}", expected_path.display())),
    };
    if expected == actual {
        return Status::Pass;
    }
    let parsed: Value = match serde_json::from_str(&expected) {
        Ok(v) => v,
        Err(e) => return Status::Failed(CliError::json(&expected_path.display().to_string(), e).to_string()),
    };
    let now: Value = serde_json::from_str(&actual).expect("canonical output parses");
    let d = diff(&parsed, &now);
    if d.is_empty() {
        Status::Failed("expected file is not in canonical form".into())
    } else {
        Status::Mismatch(d)
    }
}

/// Runs every scenario in `dir` and compares it with its expected report.
/// With `update`, expected files are rewritten instead. Scenarios run
/// concurrently, one per worker thread.
pub fn run_goldens(dir: &Path, update: bool) -> Result<Vec<Case>> {
    let files = scenario_files(dir)?;
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(files.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Status>>> = files.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((name, path)) = files.get(i) else { break };
                let status = check_case(dir, name, path, update);
                *slots[i].lock().unwrap() = Some(status);
            });
        }
    });
    Ok(files
        .into_iter()
        .zip(slots)
        .map(|((name, _), slot)| Case {
            name,
            status: slot.into_inner().unwrap().expect("every case ran"),
        })
        .collect())
}
