//! Scenario-driven front end for `reslie-core`.

pub mod error;
pub mod goldens;
pub mod report;
pub mod scenario;
pub mod tasks;

use std::path::Path;

use reslie_core::{Field, FieldSpec};

pub use error::{CliError, Result};
pub use report::{run_file, run_scenario, Report};
pub use scenario::{Overrides, Scenario};

/// Environment variable naming a JSON modulus table.
pub const MODULUS_TABLE_VAR: &str = "RESLIE_MODULUS_TABLE";

/// Reads a list of `{p, k, modulus}` entries and fixes those moduli for the
/// rest of the process.
pub fn load_modulus_table(path: &Path) -> Result<Vec<FieldSpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let specs: Vec<FieldSpec> =
        serde_json::from_str(&text).map_err(|e| CliError::json(&path.display().to_string(), e))?;
    for s in &specs {
        Field::register(s).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    }
    Ok(specs)
}
