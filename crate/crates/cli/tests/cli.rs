use std::fs;
use std::path::PathBuf;
use std::process::Command as Proc;

use prodcode::algebra::Field;
use prodcode::decoder::{ConstantsMode, DualTensorInstance};
use prodcode::transversal::{transrs_gate, transrs_params};
use prodcode_cli::config::*;
use prodcode_cli::{execute, fixtures, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_prodcode"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("prodcode-cli-{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn dual_tensor32() -> DecodeInstance {
    DecodeInstance::DualTensor {
        q: 32,
        n: 32,
        k1: 4,
        k2: 8,
        eps: 0.5,
        rho: 0.125,
        mode: ConstantsMode::default(),
    }
}

#[test]
fn shipped_fixtures_reproduce() {
    let paths = fixtures::fixture_paths(&fixtures::shipped_dir()).unwrap();
    assert!(paths.len() >= 9);
    for p in paths {
        let c = fixtures::check(&p).unwrap();
        assert_eq!(c.actual, c.expected, "{}", c.name);
        assert!(!c.failed_trials, "{}", c.name);
    }
}

#[test]
fn pe_fixture_is_one_half() {
    let fx = fixtures::load(&fixtures::shipped_dir().join("pe_exact_rs4.json")).unwrap();
    let (r, _) = execute(&fx.config).unwrap();
    assert_eq!(r.body.result["rho"], "1/2");
}

#[test]
fn zero_noise_decode() {
    let cfg = ExperimentConfig {
        seed: 9,
        command: Command::DecodeTrials(DecodeTrials {
            instance: dual_tensor32(),
            noise: NoiseModel::Rate { rate: 0.0 },
            trials: 10,
        }),
    };
    let (r, out) = execute(&cfg).unwrap();
    let a = r.body.aggregates.unwrap();
    assert_eq!(a.success_rate, 1.0);
    assert_eq!(a.mean_residual, 0.0);
    assert_eq!(r.body.promise.unwrap().in_promise_failure, 0);
    let csv = out.csv.unwrap();
    assert!(csv.starts_with("trial,error_weight,in_promise,success"));
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn reports_round_trip_and_repeat() {
    let cfg = ExperimentConfig {
        seed: 3,
        command: Command::DecodeTrials(DecodeTrials {
            instance: dual_tensor32(),
            noise: NoiseModel::Weight { weight: 3 },
            trials: 8,
        }),
    };
    let (a, _) = execute(&cfg).unwrap();
    let (b, _) = execute(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let back: Report = serde_json::from_str(&a.to_json()).unwrap();
    assert!(back.verify_hash());
    assert_eq!(back.body.config, cfg);
    let mut tampered = back.clone();
    tampered.body.failed = true;
    assert!(!tampered.verify_hash());
    let other = ExperimentConfig { seed: 4, ..cfg };
    assert_ne!(execute(&other).unwrap().0.hash, a.hash);
}

#[test]
fn out_of_promise_trials_are_not_regressions() {
    let cfg = ExperimentConfig {
        seed: 1,
        command: Command::DecodeTrials(DecodeTrials {
            instance: dual_tensor32(),
            noise: NoiseModel::Weight { weight: 40 },
            trials: 6,
        }),
    };
    let (r, _) = execute(&cfg).unwrap();
    let p = r.body.promise.unwrap();
    assert_eq!(p.out_of_promise, 6);
    assert!(!r.body.failed);
}

#[test]
fn gate_verify_r3_q37() {
    let cfg = ExperimentConfig {
        seed: 11,
        command: Command::GateVerify(GateVerify {
            source: GateSource::Params { r: 3, q: 37 },
            trials: 1000,
        }),
    };
    let (r, _) = execute(&cfg).unwrap();
    assert!(!r.body.failed);
    assert_eq!(r.body.result["holds"], true);
    assert_eq!(r.body.result["phase"]["passed"], 1000);
    let ranks = &r.body.result["certificate"]["ranks"];
    assert_eq!(ranks["dim_sum"], ranks["dim_lr"].as_u64().unwrap() + ranks["dim_w"].as_u64().unwrap());
}

#[test]
fn config_json_round_trip() {
    let cfgs = [
        Command::BuildCode(BuildCode { kind: CodeKind::SubsystemProduct, q: 4, n: None, k: vec![3, 3, 3, 3], m: None, u: None }),
        Command::SingleShotTrials(SingleShotTrials {
            q: 8,
            factors: vec![[5, 5], [5, 5]],
            amplified_seed: 7,
            data_weight: None,
            syndrome_noise: Some(2),
            trials: 3,
        }),
        Command::BoundSweep(BoundSweep { max_n: 3, random_per_field: 1, pe_budget: 10, dist_budget: 10, filling_trials: 1 }),
    ];
    for command in cfgs {
        let c = ExperimentConfig { seed: 5, command };
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains(&format!("\"command\":\"{}\"", c.command.name())));
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&s).unwrap(), c);
    }
}

#[test]
fn build_code_flags() {
    let out = scratch("rs.json");
    let st = bin()
        .args(["build-code", "--kind", "rs", "--q", "8", "--n", "7", "--k", "3", "--seed", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let r: Report = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(r.verify_hash());
    assert_eq!(r.body.result["dim"], 3);
    let st = bin()
        .args(["build-code", "--kind", "subsystem-product", "--q", "4", "--k", "3,3,3,3", "--out"])
        .arg(scratch("prod.json"))
        .status()
        .unwrap();
    assert!(st.success());
}

#[test]
fn decode_trials_flags_and_csv() {
    let inst = scratch("inst.json");
    fs::write(&inst, serde_json::to_string(&dual_tensor32()).unwrap()).unwrap();
    let csv = scratch("trials.csv");
    let st = bin()
        .args(["decode-trials", "--noise-weight", "1", "--trials", "4", "--seed", "2", "--instance"])
        .arg(&inst)
        .arg("--out")
        .arg(scratch("dt.json"))
        .arg("--csv")
        .arg(&csv)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 5);
}

#[test]
fn exit_codes() {
    // usage
    let st = bin().args(["decode-trials", "--trials", "3"]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
    let st = bin().args(["build-code", "--kind", "rs", "--q", "6", "--k", "2"]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
    let bad_rate = scratch("inst2.json");
    fs::write(&bad_rate, serde_json::to_string(&dual_tensor32()).unwrap()).unwrap();
    let st = bin()
        .args(["decode-trials", "--noise-rate", "1.5", "--trials", "1", "--seed", "0", "--instance"])
        .arg(&bad_rate)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));

    // inconsistent input
    let junk = scratch("junk.json");
    fs::write(&junk, "{\"kind\": \"dual-tensor\", \"q\": 32}").unwrap();
    let st = bin()
        .args(["decode-trials", "--noise-weight", "0", "--trials", "1", "--seed", "0", "--instance"])
        .arg(&junk)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));

    let f = Field::of_order(32).unwrap();
    let inst = DualTensorInstance::new(&f, 32, 4, 8, None, None, 0.5, 0.125, ConstantsMode::default()).unwrap();
    let doc = scratch("doc.json");
    fs::write(&doc, serde_json::to_string(&inst.to_doc()).unwrap()).unwrap();
    let word = scratch("word.json");
    fs::write(&word, "[1, 2, 3]").unwrap();
    let st = bin().arg("decode").arg("--instance").arg(&doc).arg("--word").arg(&word).output().unwrap();
    assert_eq!(st.status.code(), Some(3));

    let c = inst.random_codeword(&mut ChaCha8Rng::seed_from_u64(1));
    let raw: Vec<u32> = c.iter().map(|x| x.0).collect();
    fs::write(&word, serde_json::to_string(&raw).unwrap()).unwrap();
    let out = bin().arg("decode").arg("--instance").arg(&doc).arg("--word").arg(&word).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["output"], serde_json::to_value(&raw).unwrap());
    assert_eq!(v["fallback"], false);

    // failed verification
    let g = transrs_gate(&transrs_params(2, 16).unwrap()).unwrap();
    let mut gdoc = g.to_doc();
    let x = &mut gdoc.coefficients[0][0];
    *x ^= 1;
    let gpath = scratch("gate.json");
    fs::write(&gpath, serde_json::to_string(&gdoc).unwrap()).unwrap();
    let st = bin()
        .args(["gate-verify", "--trials", "50", "--instance"])
        .arg(&gpath)
        .arg("--out")
        .arg(scratch("gv.json"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
    fs::write(&gpath, serde_json::to_string(&g.to_doc()).unwrap()).unwrap();
    let st = bin()
        .args(["gate-verify", "--trials", "50", "--instance"])
        .arg(&gpath)
        .arg("--out")
        .arg(scratch("gv.json"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
}

#[test]
fn quantum_decode_rejects_bad_syndrome() {
    let inst = DecodeInstance::SubsystemRs {
        q: 16,
        n: 16,
        kx: [12, 9],
        kz: [12, 9],
        rho: 0.125,
        mode: ConstantsMode::default(),
    };
    let ip = scratch("q.json");
    fs::write(&ip, serde_json::to_string(&inst).unwrap()).unwrap();
    let sp = scratch("s.json");
    fs::write(&sp, "{\"s_x\": [0], \"s_z\": [0]}").unwrap();
    let st = bin().arg("quantum-decode").arg("--instance").arg(&ip).arg("--syndromes").arg(&sp).output().unwrap();
    assert_eq!(st.status.code(), Some(3));
}
