use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Numerical settings shared by every subcommand.
///
/// Loaded from an optional JSON file, then overridden field by field from the
/// command line. Environment variables are never consulted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quadrature_tol: f64,
    pub ode_rel_tol: f64,
    pub shooting_tol: f64,
    pub grid_size: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            quadrature_tol: 1e-10,
            ode_rel_tol: 1e-9,
            shooting_tol: 1e-6,
            grid_size: 1024,
            output_dir: PathBuf::from("."),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub quadrature_tol: Option<f64>,
    pub ode_rel_tol: Option<f64>,
    pub shooting_tol: Option<f64>,
    pub grid_size: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                Self::from_json(&text)?
            }
            None => Self::default(),
        };
        if let Some(v) = overrides.quadrature_tol {
            cfg.quadrature_tol = v;
        }
        if let Some(v) = overrides.ode_rel_tol {
            cfg.ode_rel_tol = v;
        }
        if let Some(v) = overrides.shooting_tol {
            cfg.shooting_tol = v;
        }
        if let Some(v) = overrides.grid_size {
            cfg.grid_size = v;
        }
        if let Some(v) = &overrides.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("quadrature_tol", self.quadrature_tol),
            ("ode_rel_tol", self.ode_rel_tol),
            ("shooting_tol", self.shooting_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        if self.grid_size < 64 {
            return Err(CliError::Usage(format!("grid_size must be at least 64, got {}", self.grid_size)));
        }
        Ok(())
    }
}
