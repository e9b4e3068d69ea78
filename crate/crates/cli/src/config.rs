//! Flags shared by every subcommand, and the optional JSON config file whose
//! keys mirror the flag names. Flags given on the command line win.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use ldp_core::table::Axis;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ClosedForms,
    Domains,
    Convergence,
    Montecarlo,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Common {
    /// AR(1) coefficients, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// MA(1) coefficients, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Option<Vec<f64>>,
    /// Axis as min:max:count; repeat for a second axis.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<Vec<String>>,
    /// Path length or matrix size.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Path lengths for rate estimation, comma separated.
    #[arg(long = "n-grid", global = true, value_delimiter = ',')]
    pub n_grid: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub replicates: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for `figures`.
    #[arg(long = "out-dir", global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub suite: Option<Suite>,
    /// Largest matrix the dense eigenvalue route will build.
    #[arg(long = "dense-cap", global = true)]
    pub dense_cap: Option<usize>,
    /// Use the pivot recursion for finite-n CGFs.
    #[arg(long, global = true)]
    pub pivot: bool,
    /// JSON file with defaults for any of the flags above.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Common {
    /// Fill every unset flag from the config file named by `--config`.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let file = load(&path)?;
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = file.$f; } )* };
        }
        fill!(theta, phi, grid, n, n_grid, replicates, seed, format, out, out_dir, suite, dense_cap);
        self.pivot |= file.pivot;
        Ok(self)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn replicates(&self, default: u64) -> Result<u64, CliError> {
        match self.replicates {
            Some(0) => Err(CliError::Usage("--replicates must be at least 1".into())),
            Some(r) => Ok(r),
            None => Ok(default),
        }
    }

    pub fn thetas(&self) -> Result<Vec<f64>, CliError> {
        self.theta.clone().filter(|v| !v.is_empty()).ok_or_else(|| CliError::Usage("--theta is required".into()))
    }

    pub fn phis(&self) -> Result<Vec<f64>, CliError> {
        self.phi.clone().filter(|v| !v.is_empty()).ok_or_else(|| CliError::Usage("--phi is required".into()))
    }

    pub fn n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Usage("--n is required".into()))
    }

    /// The `--grid` axes; exactly `count` of them are required.
    pub fn axes(&self, count: usize) -> Result<Vec<Vec<f64>>, CliError> {
        let specs = self.grid.as_deref().unwrap_or_default();
        if specs.len() != count {
            return Err(CliError::Usage(format!("expected {count} --grid axis(es), got {}", specs.len())));
        }
        specs.iter().map(|s| parse_axis(s)).collect()
    }
}

fn load(path: &Path) -> Result<Common, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// `min:max:count`, both ends included.
pub fn parse_axis(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("grid axis must be min:max:count, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, count] = parts.as_slice() else { return Err(bad()) };
    let min: f64 = min.trim().parse().map_err(|_| bad())?;
    let max: f64 = max.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    Ok(Axis::closed(min, max, count).map_err(|e| CliError::Usage(e.to_string()))?.points())
}
