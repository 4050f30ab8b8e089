//! Run configuration in flat dotted-key form:
//!
//! ```text
//! mode = "mountain_pass"
//! grid_n = 256
//! params.alpha = 0.8
//! params.p = 2.0
//! nonlinearity.weight.kind = "constant"
//! nonlinearity.weight.value = 1.0
//! solver.tol_grad = 1e-6
//! ```
//!
//! Dotted keys are plain TOML, so any TOML parser reads these files; the
//! writer emits one `key = value` line per leaf.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fracmp::solver::SolverOptions;
use fracmp::{FracParams, Nonlinearity, Problem};
use serde::{Deserialize, Serialize};
use toml::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    MountainPass,
    Convex,
    Verify,
    ConvergenceStudy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: f64,
    pub p: f64,
    #[serde(default = "unit_length")]
    pub length: f64,
}

fn unit_length() -> f64 {
    1.0
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub grid_n: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub params: ParamsSection,
    #[serde(default)]
    pub nonlinearity: Nonlinearity,
    #[serde(default)]
    pub solver: SolverOptions,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Flat `key = value` lines, sorted by section then key.
    pub fn to_flat_string(&self) -> Result<String, CliError> {
        let value = Value::try_from(self).map_err(|e| CliError::Config(e.to_string()))?;
        let mut out = String::new();
        flatten("", &value, &mut out);
        Ok(out)
    }

    pub fn frac_params(&self) -> Result<FracParams, CliError> {
        Ok(FracParams::new(self.params.alpha, self.params.p, self.params.length)?)
    }

    /// Checks every component invariant plus the mode requirements, and
    /// builds the discrete problem.
    pub fn problem(&self) -> Result<Problem, CliError> {
        let params = self.frac_params()?;
        params.require_window()?;
        self.solver.validate()?;
        let forced = self.nonlinearity.is_forcing_mode();
        match self.mode {
            Mode::Convex if !(forced && self.nonlinearity.is_linear_load()) => {
                return Err(CliError::Config(
                    "convex mode needs a forcing term and a zero weight".into(),
                ))
            }
            Mode::MountainPass if forced => {
                return Err(CliError::Config(
                    "mountain-pass mode needs a pure power nonlinearity".into(),
                ))
            }
            _ => {}
        }
        Ok(Problem::uniform(params, self.nonlinearity.clone(), self.grid_n)?)
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Table(table) => {
            // leaves first so each section reads top-down
            let (leaves, tables): (Vec<_>, Vec<_>) =
                table.iter().partition(|(_, v)| !matches!(v, Value::Table(_)));
            for (key, v) in leaves.into_iter().chain(tables) {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(&path, v, out);
            }
        }
        leaf => {
            let _ = writeln!(out, "{prefix} = {leaf}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
mode = "mountain_pass"
grid_n = 128
params.alpha = 0.8
params.p = 2.0
nonlinearity.q = 4.0
nonlinearity.mu = 3.5
nonlinearity.r = 1.0
nonlinearity.c_growth = 1.0
nonlinearity.weight.kind = "constant"
nonlinearity.weight.value = 1.0
solver.tol_grad = 1e-6
"#;

    #[test]
    fn parses_dotted_keys() {
        let c = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.mode, Mode::MountainPass);
        assert_eq!(c.params.length, 1.0);
        assert_eq!(c.solver.path_points, 16);
        c.problem().unwrap();
    }

    #[test]
    fn flat_output_round_trips() {
        let c = RunConfig::parse(SAMPLE).unwrap();
        let text = c.to_flat_string().unwrap();
        assert!(text.lines().all(|l| l.contains(" = ") && !l.starts_with('[')));
        assert!(text.contains("params.alpha = 0.8"));
        assert_eq!(RunConfig::parse(&text).unwrap(), c);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{SAMPLE}params.beta = 1.0\n");
        assert!(RunConfig::parse(&text).is_err());
    }

    #[test]
    fn mode_requirements() {
        let text = SAMPLE.replace("mountain_pass", "convex");
        assert!(RunConfig::parse(&text).unwrap().problem().is_err());
        let text = SAMPLE.replace("params.alpha = 0.8", "params.alpha = 0.4");
        assert!(RunConfig::parse(&text).unwrap().problem().is_err());
    }
}
