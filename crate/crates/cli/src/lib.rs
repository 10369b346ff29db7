//! Experiment harness for the product-code library: configs in, hashed JSON
//! reports out.

pub mod commands;
pub mod config;
pub mod fixtures;
pub mod oneshot;
pub mod report;

pub use commands::{run, CliError};
pub use config::ExperimentConfig;
pub use report::{Outcome, Report};

/// Run a config and wrap the outcome in a report.
pub fn execute(cfg: &ExperimentConfig) -> Result<(Report, Outcome), CliError> {
    let out = run(cfg)?;
    Ok((Report::new(cfg.clone(), &out), out))
}
