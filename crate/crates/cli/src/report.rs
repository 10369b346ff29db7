use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Per-trial stream: ChaCha8 keyed by SHA-256(seed ‖ trial).
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(trial.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// Trials partitioned by the decoder's promise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromiseBuckets {
    pub in_promise_success: usize,
    /// Regressions: the decoder broke a guarantee it owes.
    pub in_promise_failure: usize,
    pub out_of_promise: usize,
}

impl PromiseBuckets {
    pub fn add(&mut self, in_promise: bool, success: bool) {
        match (in_promise, success) {
            (true, true) => self.in_promise_success += 1,
            (true, false) => self.in_promise_failure += 1,
            (false, _) => self.out_of_promise += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub trials: usize,
    pub success_rate: f64,
    pub mean_residual: f64,
}

impl Aggregates {
    pub fn new(success: &[bool], residual: &[usize]) -> Self {
        let t = success.len().max(1) as f64;
        Aggregates {
            trials: success.len(),
            success_rate: success.iter().filter(|&&s| s).count() as f64 / t,
            mean_residual: residual.iter().sum::<usize>() as f64 / t,
        }
    }
}

/// Everything a command produces besides the config echo.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub result: Value,
    pub trials: Vec<Value>,
    pub aggregates: Option<Aggregates>,
    pub promise: Option<PromiseBuckets>,
    /// A check failed or an in-promise trial failed.
    pub failed: bool,
    /// CSV trial table with header row.
    pub csv: Option<String>,
    /// Wall-clock milliseconds per trial; kept out of the report.
    pub millis: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub version: String,
    pub config: ExperimentConfig,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aggregates: Option<Aggregates>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub promise: Option<PromiseBuckets>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trials: Vec<Value>,
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(flatten)]
    pub body: ReportBody,
    /// SHA-256 of the compact JSON of `body`.
    pub hash: String,
}

impl Report {
    pub fn new(config: ExperimentConfig, out: &Outcome) -> Self {
        let body = ReportBody {
            version: ARTIFACT_VERSION.into(),
            config,
            result: out.result.clone(),
            aggregates: out.aggregates.clone(),
            promise: out.promise,
            trials: out.trials.clone(),
            failed: out.failed,
        };
        let hash = body_hash(&body);
        Report { body, hash }
    }

    pub fn verify_hash(&self) -> bool {
        body_hash(&self.body) == self.hash
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn body_hash(body: &ReportBody) -> String {
    let bytes = serde_json::to_vec(body).expect("report serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// Header row plus one row per trial.
pub fn csv_table<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat trial rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

/// 95th percentile by nearest rank.
pub fn p95(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let idx = ((0.95 * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    v[idx]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn trial_streams_differ_and_repeat() {
        let a: u64 = trial_rng(1, 0).gen();
        let b: u64 = trial_rng(1, 1).gen();
        let c: u64 = trial_rng(2, 0).gen();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, trial_rng(1, 0).gen::<u64>());
    }

    #[test]
    fn buckets() {
        let mut b = PromiseBuckets::default();
        b.add(true, true);
        b.add(true, false);
        b.add(false, false);
        b.add(false, true);
        assert_eq!((b.in_promise_success, b.in_promise_failure, b.out_of_promise), (1, 1, 2));
    }

    #[test]
    fn percentile() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(p95(&v), 95.0);
        assert_eq!(p95(&[3.0]), 3.0);
    }
}
