use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use prodcode::codes::CodeDoc;
use prodcode::decoder::InstanceDoc;
use prodcode::subsystem::CssDoc;
use prodcode_cli::config::*;
use prodcode_cli::report::p95;
use prodcode_cli::{execute, fixtures, oneshot, CliError};
use serde::de::DeserializeOwned;
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "prodcode", version, about = "Product-code experiments with hashed JSON reports")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Output {
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV trial table path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print p95 per-trial runtime to stderr.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a full experiment config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    BuildCode {
        #[arg(long, value_enum)]
        kind: CodeKind,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    DecodeTrials {
        /// JSON decode instance (`kind`: dual-tensor or subsystem-rs).
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, conflicts_with = "noise_rate", required_unless_present = "noise_rate")]
        noise_weight: Option<usize>,
        #[arg(long)]
        noise_rate: Option<f64>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    PeExact {
        /// JSON array of code specs or code documents.
        #[arg(long)]
        codes: PathBuf,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[command(flatten)]
        output: Output,
    },
    GateVerify {
        /// Serialized gate instance.
        #[arg(long, conflicts_with = "params", required_unless_present = "params")]
        instance: Option<PathBuf>,
        /// r,q for the transversal RS construction.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        params: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    SingleShotTrials {
        /// JSON {q, factors, amplified_seed}.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        syndrome_noise: Option<usize>,
        #[arg(long)]
        data_weight: Option<usize>,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    Distance {
        /// Code document, CSS document, or tagged distance target.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[command(flatten)]
        output: Output,
    },
    BoundSweep {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 12)]
        random_per_field: usize,
        #[arg(long, default_value_t = 1 << 22)]
        pe_budget: u64,
        #[arg(long, default_value_t = 1 << 24)]
        dist_budget: u64,
        #[arg(long, default_value_t = 30)]
        filling_trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Decode one row-major word against a dual tensor instance.
    Decode {
        #[arg(long)]
        instance: PathBuf,
        /// JSON array of field elements.
        #[arg(long)]
        word: PathBuf,
    },
    /// Decode one syndrome pair for a subsystem-rs instance.
    QuantumDecode {
        #[arg(long)]
        instance: PathBuf,
        /// JSON {s_x, s_z}.
        #[arg(long)]
        syndromes: PathBuf,
    },
    /// Re-run pinned fixtures and compare report hashes.
    Fixtures {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        update: bool,
    },
}

#[derive(Deserialize)]
struct SingleShotInstance {
    q: u64,
    factors: Vec<[usize; 2]>,
    amplified_seed: u64,
}

#[derive(Deserialize)]
struct Syndromes {
    s_x: Vec<u32>,
    s_z: Vec<u32>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let s = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&s)?)
}

fn distance_target(path: &Path) -> Result<DistanceTarget, CliError> {
    let v: serde_json::Value = read_json(path)?;
    if let Ok(t) = serde_json::from_value::<DistanceTarget>(v.clone()) {
        return Ok(t);
    }
    if let Ok(doc) = serde_json::from_value::<CssDoc>(v.clone()) {
        return Ok(DistanceTarget::Css { doc });
    }
    Ok(DistanceTarget::Code {
        doc: serde_json::from_value::<CodeDoc>(v)?,
    })
}

fn code_specs(path: &Path) -> Result<Vec<CodeSpec>, CliError> {
    let v: serde_json::Value = read_json(path)?;
    if let Ok(s) = serde_json::from_value::<Vec<CodeSpec>>(v.clone()) {
        return Ok(s);
    }
    let docs: Vec<CodeDoc> = serde_json::from_value(v)?;
    Ok(docs.into_iter().map(|doc| CodeSpec::Doc { doc }).collect())
}

fn emit(cfg: ExperimentConfig, output: &Output) -> Result<u8, CliError> {
    let (report, out) = execute(&cfg)?;
    let json = report.to_json();
    match &output.out {
        Some(p) => fs::write(p, json)?,
        None => print!("{json}"),
    }
    if let (Some(p), Some(csv)) = (&output.csv, &out.csv) {
        fs::write(p, csv)?;
    }
    if output.timing && !out.millis.is_empty() {
        eprintln!("p95 {:.3} ms over {} trials", p95(&out.millis), out.millis.len());
    }
    Ok(if report.body.failed { 2 } else { 0 })
}

fn dispatch(cmd: Cmd) -> Result<u8, CliError> {
    let (command, seed, output) = match cmd {
        Cmd::Run { config, output } => {
            let s = fs::read_to_string(&config)?;
            let cfg: ExperimentConfig =
                serde_json::from_str(&s).map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
            return emit(cfg, &output);
        }
        Cmd::BuildCode { kind, q, n, k, m, u, seed, output } => {
            (Command::BuildCode(BuildCode { kind, q, n, k, m, u }), seed, output)
        }
        Cmd::DecodeTrials { instance, noise_weight, noise_rate, trials, seed, output } => {
            let noise = match (noise_weight, noise_rate) {
                (Some(weight), _) => NoiseModel::Weight { weight },
                (None, Some(rate)) => NoiseModel::Rate { rate },
                (None, None) => return Err(CliError::Usage("a noise model is required".into())),
            };
            let instance = read_json(&instance)?;
            (Command::DecodeTrials(DecodeTrials { instance, noise, trials }), seed, output)
        }
        Cmd::PeExact { codes, budget, output } => {
            let codes = code_specs(&codes)?;
            (Command::PeExact(PeExact { codes, budget }), 0, output)
        }
        Cmd::GateVerify { instance, params, trials, seed, output } => {
            let source = match (instance, params) {
                (Some(p), _) => GateSource::Doc { doc: Box::new(read_json(&p)?) },
                (None, Some(v)) => GateSource::Params { r: v[0], q: v[1] },
                (None, None) => return Err(CliError::Usage("--instance or --params is required".into())),
            };
            (Command::GateVerify(GateVerify { source, trials }), seed, output)
        }
        Cmd::SingleShotTrials { instance, syndrome_noise, data_weight, trials, seed, output } => {
            let i: SingleShotInstance = read_json(&instance)?;
            let c = SingleShotTrials {
                q: i.q,
                factors: i.factors,
                amplified_seed: i.amplified_seed,
                data_weight,
                syndrome_noise,
                trials,
            };
            (Command::SingleShotTrials(c), seed, output)
        }
        Cmd::Distance { instance, budget, output } => {
            let target = distance_target(&instance)?;
            (Command::Distance(DistanceTask { target, budget }), 0, output)
        }
        Cmd::BoundSweep { max_n, random_per_field, pe_budget, dist_budget, filling_trials, seed, output } => {
            let c = BoundSweep { max_n, random_per_field, pe_budget, dist_budget, filling_trials };
            (Command::BoundSweep(c), seed, output)
        }
        Cmd::Decode { instance, word } => {
            let doc: InstanceDoc = read_json(&instance)?;
            let word: Vec<u32> = read_json(&word)?;
            println!("{:#}", oneshot::decode_word(&doc, &word)?);
            return Ok(0);
        }
        Cmd::QuantumDecode { instance, syndromes } => {
            let inst: DecodeInstance = read_json(&instance)?;
            let s: Syndromes = read_json(&syndromes)?;
            println!("{:#}", oneshot::decode_syndromes(&inst, &s.s_x, &s.s_z)?);
            return Ok(0);
        }
        Cmd::Fixtures { dir, update } => {
            let dir = dir.unwrap_or_else(fixtures::shipped_dir);
            let mut bad = 0;
            for p in fixtures::fixture_paths(&dir)? {
                let c = if update { fixtures::update(&p)? } else { fixtures::check(&p)? };
                println!("{} {} {}", if c.ok() { "ok  " } else { "FAIL" }, c.name, c.actual);
                bad += usize::from(!c.ok());
            }
            return Ok(if bad > 0 { 2 } else { 0 });
        }
    };
    emit(ExperimentConfig { seed, command }, &output)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
