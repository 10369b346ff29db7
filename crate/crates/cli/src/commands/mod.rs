mod build;
pub mod decode;
mod misc;
mod single_shot;

use std::time::Instant;

use thiserror::Error;

use crate::config::{Command, ExperimentConfig};
use crate::report::Outcome;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Core(#[from] prodcode::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use prodcode::Error as E;
        match self {
            CliError::Inconsistent(_) | CliError::Json(_) => 3,
            CliError::Core(E::Inconsistent(_) | E::Serde(_) | E::Dimension(_) | E::NotOrthogonal(_) | E::FieldMismatch) => 3,
            _ => 1,
        }
    }
}

pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let x = f();
    (x, t.elapsed().as_secs_f64() * 1e3)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let seed = cfg.seed;
    match &cfg.command {
        Command::BuildCode(c) => build::run(seed, c),
        Command::DecodeTrials(c) => decode::run(seed, c),
        Command::PeExact(c) => misc::pe(c),
        Command::GateVerify(c) => misc::gate_verify(seed, c),
        Command::SingleShotTrials(c) => single_shot::run(seed, c),
        Command::Distance(c) => misc::distance(c),
        Command::BoundSweep(c) => misc::bound_sweep(seed, c),
    }
}
