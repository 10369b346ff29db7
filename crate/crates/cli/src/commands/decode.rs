use prodcode::algebra::{weight, Field, Gf};
use prodcode::decoder::{alpha_decode, hamming, DecodePath, DualTensorInstance};
use prodcode::quantum::{
    subsystem_decode, subsystem_decode_syndromes, SubsystemRsDecoder, SyndromeInput, SyndromeSolver,
};
use prodcode::subsystem::{check_matrices, CheckStyle};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{timed, CliError};
use crate::config::{DecodeInstance, DecodeTrials, NoiseModel};
use crate::report::{csv_table, trial_rng, Aggregates, Outcome, PromiseBuckets};

pub fn noise(f: &Field, len: usize, model: NoiseModel, rng: &mut ChaCha8Rng) -> Vec<Gf> {
    let mut e = vec![Gf::ZERO; len];
    match model {
        NoiseModel::Weight { weight } => {
            for i in sample(rng, len, weight.min(len)) {
                e[i] = f.random_nonzero(rng);
            }
        }
        NoiseModel::Rate { rate } => {
            for x in e.iter_mut() {
                if rng.gen_bool(rate) {
                    *x = f.random_nonzero(rng);
                }
            }
        }
    }
    e
}

fn check_model(m: NoiseModel) -> Result<(), CliError> {
    match m {
        NoiseModel::Rate { rate } if !(0.0..=1.0).contains(&rate) => {
            Err(CliError::Usage(format!("noise rate {rate} is outside [0, 1]")))
        }
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct DualTensorRow {
    trial: usize,
    error_weight: usize,
    in_promise: bool,
    success: bool,
    residual: usize,
    path: DecodePath,
    codeword: bool,
    stage1_residual: Option<usize>,
    stage3_weight: Option<usize>,
    iterations: Option<usize>,
    stage_bounds_ok: bool,
}

#[derive(Serialize)]
struct SubsystemRow {
    trial: usize,
    weight_x: usize,
    weight_z: usize,
    in_promise: bool,
    success: bool,
    /// Sides (X, Z) whose correction left the planted gauge coset.
    wrong_sides: usize,
    paths_agree: bool,
}

pub fn run(seed: u64, cfg: &DecodeTrials) -> Result<Outcome, CliError> {
    check_model(cfg.noise)?;
    match &cfg.instance {
        DecodeInstance::DualTensor { q, n, k1, k2, eps, rho, mode } => {
            let f = Field::of_order(*q)?;
            let inst = DualTensorInstance::new(&f, *n, *k1, *k2, None, None, *eps, *rho, *mode)?;
            dual_tensor(seed, cfg, &inst)
        }
        DecodeInstance::SubsystemRs { q, n, kx, kz, rho, mode } => {
            let f = Field::of_order(*q)?;
            let dec = SubsystemRsDecoder::new(&f, *n, *kx, *kz, *rho, *mode)?;
            subsystem(seed, cfg, &dec)
        }
    }
}

/// Weight the scaled decoder is expected to handle: d₀, extended to
/// (s+1)² − 1 when d₀ is below one cell.
fn promise_weight(inst: &DualTensorInstance) -> usize {
    let s = inst.s();
    (inst.d0().floor() as usize).max((s + 1) * (s + 1) - 1)
}

fn dual_tensor(seed: u64, cfg: &DecodeTrials, inst: &DualTensorInstance) -> Result<Outcome, CliError> {
    let f = inst.field().clone();
    let n = inst.n();
    let radius = promise_weight(inst);
    let rows: Vec<(DualTensorRow, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let a = inst.random_codeword(&mut rng);
            let e = noise(&f, n * n, cfg.noise, &mut rng);
            let c = f.add_vec(&a, &e);
            let b = weight(&e);
            let (rep, ms) = timed(|| alpha_decode(inst, &c));
            let rep = rep?;
            let s1 = rep.stage1_residual(&c);
            let s3 = rep.finish.as_ref().map(|x| weight(&x.output));
            let iters = rep.finish.as_ref().map(|x| x.iterations);
            let codeword = inst.contains(&rep.output);
            let stage_bounds_ok = rep.path != DecodePath::Stages
                || (s1.is_some_and(|x| x as f64 <= inst.stage1_bound())
                    && s3.is_some_and(|x| x as f64 <= inst.stage3_bound(b))
                    && iters.is_some_and(|x| x <= n * n)
                    && rep.residual as f64 <= inst.alpha() * b as f64);
            let row = DualTensorRow {
                trial: t,
                error_weight: b,
                in_promise: b <= radius,
                success: rep.output == a && codeword && stage_bounds_ok,
                residual: hamming(&rep.output, &a),
                path: rep.path,
                codeword,
                stage1_residual: s1,
                stage3_weight: s3,
                iterations: iters,
                stage_bounds_ok,
            };
            Ok((row, ms))
        })
        .collect::<Result<_, CliError>>()?;
    let mut buckets = PromiseBuckets::default();
    for (r, _) in &rows {
        buckets.add(r.in_promise, r.success);
    }
    let success: Vec<bool> = rows.iter().map(|(r, _)| r.success).collect();
    let residual: Vec<usize> = rows.iter().map(|(r, _)| r.residual).collect();
    let fallbacks = rows.iter().filter(|(r, _)| r.path == DecodePath::Fallback).count();
    let table: Vec<&DualTensorRow> = rows.iter().map(|(r, _)| r).collect();
    Ok(Outcome {
        result: json!({
            "decoder": "dual-tensor",
            "n": n,
            "s": inst.s(),
            "d0": inst.d0(),
            "alpha": inst.alpha(),
            "promise_weight": radius,
            "promise_extended": (inst.d0().floor() as usize) < radius,
            "stage1_bound": inst.stage1_bound(),
            "fallbacks": fallbacks,
            "stage_bound_violations": rows.iter().filter(|(r, _)| !r.stage_bounds_ok).count(),
        }),
        trials: table.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect(),
        aggregates: Some(Aggregates::new(&success, &residual)),
        failed: buckets.in_promise_failure > 0,
        promise: Some(buckets),
        csv: Some(csv_table(&table)),
        millis: rows.iter().map(|(_, ms)| *ms).collect(),
    })
}

fn subsystem(seed: u64, cfg: &DecodeTrials, dec: &SubsystemRsDecoder) -> Result<Outcome, CliError> {
    let f = dec.code.pair.field().clone();
    let len = dec.code.pair.len();
    let checks = check_matrices(&dec.code, CheckStyle::Tensor)?;
    let solver = SyndromeSolver::new(&checks)?;
    let radius = promise_weight(dec.z_decoder().instance()).min(promise_weight(dec.x_decoder().instance()));
    let rows: Vec<(SubsystemRow, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let tz = dec.z_decoder().target().random_codeword(&mut rng);
            let tx = dec.x_decoder().target().random_codeword(&mut rng);
            let ez = noise(&f, len, cfg.noise, &mut rng);
            let ex = noise(&f, len, cfg.noise, &mut rng);
            let cz = f.add_vec(&tz, &ez);
            let cx = f.add_vec(&tx, &ex);
            let ((word, syn), ms) = timed(|| {
                let word = subsystem_decode(dec, &cx, &cz);
                let s = SyndromeInput {
                    s_x: checks.hx.mul_vec(&cx),
                    s_z: checks.hz.mul_vec(&cz),
                };
                (word, subsystem_decode_syndromes(dec, &solver, &s))
            });
            let (wrong_sides, agree) = match (word, syn) {
                (Ok(w), Ok(s)) => {
                    let rz = &w.z.coset.representative;
                    let rx = &w.x.coset.representative;
                    let wrong = usize::from(!dec.in_x_gauge(&f.sub_vec(rz, &tz)))
                        + usize::from(!dec.in_z_gauge(&f.sub_vec(rx, &tx)));
                    let bz = f.sub_vec(&cz, rz);
                    let bx = f.sub_vec(&cx, rx);
                    let agree = dec.in_x_gauge(&f.sub_vec(&s.z.coset.representative, &bz))
                        && dec.in_z_gauge(&f.sub_vec(&s.x.coset.representative, &bx));
                    (wrong, agree)
                }
                _ => (2, false),
            };
            let (wx, wz) = (weight(&ex), weight(&ez));
            let row = SubsystemRow {
                trial: t,
                weight_x: wx,
                weight_z: wz,
                in_promise: wx.max(wz) <= radius,
                success: wrong_sides == 0 && agree,
                wrong_sides,
                paths_agree: agree,
            };
            Ok((row, ms))
        })
        .collect::<Result<_, CliError>>()?;
    let mut buckets = PromiseBuckets::default();
    for (r, _) in &rows {
        buckets.add(r.in_promise, r.success);
    }
    let success: Vec<bool> = rows.iter().map(|(r, _)| r.success).collect();
    let residual: Vec<usize> = rows.iter().map(|(r, _)| r.wrong_sides).collect();
    let table: Vec<&SubsystemRow> = rows.iter().map(|(r, _)| r).collect();
    let pair = &dec.code.pair;
    Ok(Outcome {
        result: json!({
            "decoder": "subsystem-rs",
            "length": len,
            "dimension": pair.dim(),
            "promise_weight": radius,
            "paths_disagree": rows.iter().filter(|(r, _)| !r.paths_agree).count(),
        }),
        trials: table.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect(),
        aggregates: Some(Aggregates::new(&success, &residual)),
        failed: buckets.in_promise_failure > 0,
        promise: Some(buckets),
        csv: Some(csv_table(&table)),
        millis: rows.iter().map(|(_, ms)| *ms).collect(),
    })
}
