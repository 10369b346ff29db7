//! Pinned regression fixtures: `{ "config": .., "report_hash": .. }` files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::commands::{run, CliError};
use crate::config::ExperimentConfig;
use crate::report::Report;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub config: ExperimentConfig,
    pub report_hash: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub failed_trials: bool,
}

impl FixtureCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.actual && !self.failed_trials
    }
}

pub fn fixture_paths(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    Ok(v)
}

pub fn load(path: &Path) -> Result<Fixture, CliError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn check(path: &Path) -> Result<FixtureCheck, CliError> {
    let fx = load(path)?;
    let out = run(&fx.config)?;
    let report = Report::new(fx.config, &out);
    Ok(FixtureCheck {
        name: path.file_stem().unwrap_or_default().to_string_lossy().into_owned(),
        expected: fx.report_hash,
        actual: report.hash,
        failed_trials: report.body.failed,
    })
}

/// Re-pin a fixture to the hash of a fresh run.
pub fn update(path: &Path) -> Result<FixtureCheck, CliError> {
    let mut c = check(path)?;
    let fx = Fixture {
        config: load(path)?.config,
        report_hash: c.actual.clone(),
    };
    let mut s = serde_json::to_string_pretty(&fx)?;
    s.push('\n');
    fs::write(path, s)?;
    c.expected = c.actual.clone();
    Ok(c)
}

/// Shipped fixture directory of this crate.
pub fn shipped_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
