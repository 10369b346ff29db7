//! Experiment configurations. A config is fully resolved: instance files are
//! loaded into it before the run, so a report's config echo is self-contained.

use prodcode::codes::CodeDoc;
use prodcode::decoder::ConstantsMode;
use prodcode::subsystem::CssDoc;
use prodcode::transversal::GateDoc;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    BuildCode(BuildCode),
    DecodeTrials(DecodeTrials),
    PeExact(PeExact),
    GateVerify(GateVerify),
    SingleShotTrials(SingleShotTrials),
    Distance(DistanceTask),
    BoundSweep(BoundSweep),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BuildCode(_) => "build-code",
            Command::DecodeTrials(_) => "decode-trials",
            Command::PeExact(_) => "pe-exact",
            Command::GateVerify(_) => "gate-verify",
            Command::SingleShotTrials(_) => "single-shot-trials",
            Command::Distance(_) => "distance",
            Command::BoundSweep(_) => "bound-sweep",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    Rs,
    Qrs,
    SubsystemProduct,
    TripleProduct,
    PuncturedTensorRs,
}

/// `k` is read per kind: rs [k]; qrs [k_X, k_Z]; subsystem-product
/// [k¹_X, k¹_Z, k²_X, k²_Z, ...]; punctured-tensor-rs [k].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildCode {
    pub kind: CodeKind,
    pub q: u64,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub u: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum NoiseModel {
    /// Uniform support of the given size, uniform nonzero values.
    Weight { weight: usize },
    /// Each coordinate corrupted independently, uniform nonzero values.
    Rate { rate: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecodeInstance {
    /// RS(n,k1) ⊞ RS(n,k2) on the first n points of GF(q).
    DualTensor {
        q: u64,
        n: usize,
        k1: usize,
        k2: usize,
        eps: f64,
        rho: f64,
        mode: ConstantsMode,
    },
    /// Two-factor quantum RS subsystem product on all of GF(q), n = q.
    SubsystemRs {
        q: u64,
        n: usize,
        kx: [usize; 2],
        kz: [usize; 2],
        rho: f64,
        mode: ConstantsMode,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeTrials {
    pub instance: DecodeInstance,
    pub noise: NoiseModel,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeSpec {
    /// RS(n, k) on the first n points of GF(q).
    Rs { q: u64, n: usize, k: usize },
    Doc { doc: CodeDoc },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeExact {
    pub codes: Vec<CodeSpec>,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GateSource {
    Params { r: usize, q: usize },
    Doc { doc: Box<GateDoc> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateVerify {
    pub source: GateSource,
    pub trials: usize,
}

/// Amplified-check subsystem product of quantum RS factors on all of GF(q).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleShotTrials {
    pub q: u64,
    /// (k_X, k_Z) per factor.
    pub factors: Vec<[usize; 2]>,
    pub amplified_seed: u64,
    /// Largest data error weight; defaults to the promise bound.
    #[serde(default)]
    pub data_weight: Option<usize>,
    /// Largest syndrome noise weight; defaults to the promise bound.
    #[serde(default)]
    pub syndrome_noise: Option<usize>,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistanceTarget {
    Code { doc: CodeDoc },
    Css { doc: CssDoc },
    /// Quantum RS factors (n = q) combined by the subsystem product.
    SubsystemProduct { q: u64, factors: Vec<[usize; 2]> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceTask {
    pub target: DistanceTarget,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSweep {
    pub max_n: usize,
    pub random_per_field: usize,
    pub pe_budget: u64,
    pub dist_budget: u64,
    pub filling_trials: usize,
}
