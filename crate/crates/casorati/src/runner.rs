//! Batch driver: run configurations, check execution, report emission.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ambient::{SpaceKind, SpaceSpec};
use crate::checks::{run_check, CheckName, SuiteParams, ALL_CHECKS};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::verifier::{auto_r_grid_lower, auto_r_grid_upper, random_sweep, SweepReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RGrid {
    /// 8 log-spaced points per admissible regime, endpoints excluded by a
    /// relative margin of 1e-3.
    Auto,
    #[serde(untagged)]
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

fn default_m() -> usize {
    3
}
fn default_samples() -> usize {
    1000
}
fn default_entry_scale() -> f64 {
    1.0
}
fn default_checks() -> Vec<CheckName> {
    ALL_CHECKS.to_vec()
}
fn default_format() -> OutputFormat {
    OutputFormat::Json
}
fn default_r() -> RGrid {
    RGrid::Auto
}

/// A saved, reproducible run configuration. Command-line flags override any
/// field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceKind,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_r")]
    pub r_values: RGrid,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_entry_scale")]
    pub entry_scale: f64,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::Config("samples must be >= 1".into()));
        }
        if self.m < 1 {
            return Err(Error::Config("m must be >= 1".into()));
        }
        if !(self.entry_scale > 0.0) {
            return Err(Error::Config("entry_scale must be > 0".into()));
        }
        let n = (4 * self.m - 1) as f64;
        if let RGrid::List(rs) = &self.r_values {
            for &r in rs {
                if r <= 0.0 || (r - n * (n - 1.0)).abs() < 1e-12 {
                    return Err(Error::Config(format!(
                        "r = {r} is not in either admissible regime for n = {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space_spec(&self) -> Result<SpaceSpec> {
        SpaceSpec::new(self.space, self.m)
    }

    /// Resolves the r grid: the explicit list, or auto lower + upper grids.
    pub fn resolved_r(&self) -> Vec<f64> {
        let n = 4 * self.m - 1;
        match &self.r_values {
            RGrid::Auto => auto_r_grid_lower(n)
                .into_iter()
                .chain(auto_r_grid_upper(n))
                .collect(),
            RGrid::List(rs) => rs.clone(),
        }
    }

    pub fn suite_params(&self) -> Result<SuiteParams> {
        Ok(SuiteParams {
            spec: self.space_spec()?,
            r_values: self.resolved_r(),
            samples: self.samples,
            seed: self.seed,
            entry_scale: self.entry_scale,
        })
    }
}

/// Executes the selected checks in the fixed ALL_CHECKS order and aggregates
/// a report. Identical configs produce byte-identical reports apart from
/// wall_time_s.
pub fn run(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let params = config.suite_params()?;
    let start = Instant::now();
    let mut records = Vec::new();
    for name in ALL_CHECKS {
        if config.checks.contains(&name) {
            records.extend(run_check(name, &params)?);
        }
    }
    Ok(VerificationReport::from_records(
        records,
        config.seed,
        start.elapsed().as_secs_f64(),
    ))
}

/// Runs the inequality sweep and renders one CSV row per r value:
/// r, min_gap, mean_gap, equality_hits. Floats carry 17 significant digits.
pub fn sweep_table(config: &RunConfig) -> Result<(SweepReport, String)> {
    config.validate()?;
    let spec = config.space_spec()?;
    let grid = config.resolved_r();
    let report = random_sweep(&spec, &grid, config.samples, config.seed, config.entry_scale)?;
    let mut out = String::from("r,min_gap,mean_gap,equality_hits\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt17(row.r),
            fmt17(row.min_gap),
            fmt17(row.mean_gap),
            row.equality_hits
        ));
    }
    Ok((report, out))
}

/// 17 significant digits, enough to round-trip an f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}
