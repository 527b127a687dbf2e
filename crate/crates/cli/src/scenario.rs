//! Scenario files: what to compute, on which algebra and character.

use std::path::Path;

use serde::{Deserialize, Serialize};

use reslie_core::liealg::AlgebraDescription;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    VerifyAlgebra,
    Extension,
    Splittings,
    Blocks,
    Verma,
    Induce,
    NiceCheck,
    KwAudit,
    Deformation,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::VerifyAlgebra => "verify-algebra",
            Task::Extension => "extension",
            Task::Splittings => "splittings",
            Task::Blocks => "blocks",
            Task::Verma => "verma",
            Task::Induce => "induce",
            Task::NiceCheck => "nice-check",
            Task::KwAudit => "kw-audit",
            Task::Deformation => "deformation",
        }
    }

    /// Tasks that need a matrix realization (sl_n or gl_n).
    pub fn needs_classical(self) -> bool {
        matches!(
            self,
            Task::Verma | Task::Induce | Task::NiceCheck | Task::KwAudit | Task::Deformation
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilySpec {
    Sl,
    Gl,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub family: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<AlgebraDescription>,
}

/// The p-character, given over GF(p).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChiSpec {
    #[default]
    Zero,
    /// x -> tr(e x) for an n x n integer matrix e.
    TraceDual { matrix: Vec<Vec<i64>> },
    /// x -> tr(e x) for the nilpotent Jordan matrix with these block sizes.
    Jordan { blocks: Vec<usize> },
    /// Values on the basis.
    Covector { coeffs: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_guard_dim")]
    pub guard_dim: usize,
    #[serde(default = "default_levi_root")]
    pub levi_root: usize,
}

fn default_k_max() -> u32 {
    3
}
fn default_samples() -> usize {
    20
}
fn default_guard_dim() -> usize {
    4096
}
fn default_levi_root() -> usize {
    1
}
fn default_k() -> u32 {
    1
}

impl Default for Options {
    fn default() -> Self {
        Options {
            k_max: default_k_max(),
            samples: default_samples(),
            seed: 0,
            guard_dim: default_guard_dim(),
            levi_root: default_levi_root(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub task: Task,
    pub algebra: AlgebraSpec,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default)]
    pub chi: ChiSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    #[serde(default)]
    pub options: Options,
}

/// Command-line settings that take precedence over the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub guard_dim: Option<usize>,
}

impl Scenario {
    pub fn parse(text: &str, origin: &str) -> Result<Scenario> {
        serde_json::from_str(text).map_err(|e| CliError::json(origin, e))
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Scenario::parse(&text, &path.display().to_string())
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(s) = o.seed {
            self.options.seed = s;
        }
        if let Some(g) = o.guard_dim {
            self.options.guard_dim = g;
        }
    }

    /// Shape checks that do not need the algebra built.
    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        if self.k == 0 {
            return Err(CliError::Schema("k must be at least 1".into()));
        }
        match a.family {
            FamilySpec::Sl | FamilySpec::Gl => {
                let n = a
                    .n
                    .ok_or_else(|| CliError::Schema("algebra.n is required for sl and gl".into()))?;
                let min = if a.family == FamilySpec::Sl { 2 } else { 1 };
                if n < min || n > 8 {
                    return Err(CliError::Schema(format!("algebra.n = {n} is outside {min}..=8")));
                }
                if a.description.is_some() {
                    return Err(CliError::Schema("algebra.description is only allowed for custom".into()));
                }
            }
            FamilySpec::Custom => {
                let d = a
                    .description
                    .as_ref()
                    .ok_or_else(|| CliError::Schema("algebra.description is required for custom".into()))?;
                if d.p != a.p {
                    return Err(CliError::Schema(format!(
                        "algebra.p = {} but the description has p = {}",
                        a.p, d.p
                    )));
                }
                if a.n.is_some() {
                    return Err(CliError::Schema("algebra.n is not used for custom".into()));
                }
                if self.task.needs_classical() {
                    return Err(CliError::Schema(format!(
                        "task {} needs family sl or gl",
                        self.task.name()
                    )));
                }
                if matches!(self.chi, ChiSpec::TraceDual { .. } | ChiSpec::Jordan { .. }) {
                    return Err(CliError::Schema("custom algebras take chi as a covector".into()));
                }
            }
        }
        if let (Some(n), ChiSpec::TraceDual { matrix }) = (a.n, &self.chi) {
            if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                return Err(CliError::Schema(format!("chi.matrix must be {n} x {n}")));
            }
        }
        if let (Some(n), ChiSpec::Jordan { blocks }) = (a.n, &self.chi) {
            if blocks.iter().sum::<usize>() != n || blocks.contains(&0) {
                return Err(CliError::Schema(format!("chi.blocks must be a partition of {n}")));
            }
        }
        if self.options.k_max == 0 {
            return Err(CliError::Schema("options.k_max must be at least 1".into()));
        }
        Ok(())
    }
}
