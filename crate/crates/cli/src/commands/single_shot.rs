use prodcode::algebra::{weight, Field, Gf};
use prodcode::codes::ltc_soundness_estimate;
use prodcode::quantum::{single_shot_decode, SingleShotDecoder};
use prodcode::subsystem::{subsystem_distance, subsystem_product};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::build::qrs_factors;
use super::decode::noise;
use super::{timed, CliError};
use crate::config::{NoiseModel, SingleShotTrials};
use crate::report::{csv_table, trial_rng, Aggregates, Outcome, PromiseBuckets};

const DISTANCE_BUDGET: u64 = 1 << 20;
const SOUNDNESS_SAMPLES: usize = 2000;

#[derive(Serialize)]
struct Row {
    trial: usize,
    data_weight: usize,
    syndrome_noise: usize,
    second_noise: usize,
    in_promise: bool,
    success: bool,
    /// Weight of the leftover beyond the gauge after round one.
    residual: usize,
    residual_bound: usize,
    syndrome_correction: usize,
    exact_projection: bool,
    second_round_ok: bool,
}

fn largest_below(x: f64) -> usize {
    (x.ceil() as usize).saturating_sub(1)
}

pub fn run(seed: u64, c: &SingleShotTrials) -> Result<Outcome, CliError> {
    let f = Field::of_order(c.q)?;
    let p = subsystem_product(&qrs_factors(&f, c.q as usize, &c.factors)?)?;
    let dist = subsystem_distance(&p.pair, DISTANCE_BUDGET);
    let d = dist
        .value()
        .ok_or_else(|| CliError::Usage("code has no logical operators".into()))?;
    let dec = SingleShotDecoder::new(&p, c.amplified_seed, d)?;
    let (m, n) = (dec.checks.hz.rows(), dec.checks.hz.cols());
    let rho = ltc_soundness_estimate(&dec.checks.hz, SOUNDNESS_SAMPLES, n / 2, seed).rho;
    let e_max = largest_below(d as f64 / 4.0);
    let v_max = largest_below(rho * d as f64 * m as f64 / (4.0 * n as f64));
    let e_cap = c.data_weight.unwrap_or(e_max).min(n);
    let v_cap = c.syndrome_noise.unwrap_or(v_max).min(m);
    let bound = |v: usize| (v as f64 * n as f64 / (rho * m as f64)).floor() as usize;
    let gauge = p.pair.qx.dual();
    let rows: Vec<(Row, f64)> = (0..c.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let we = rng.gen_range(0..=e_cap);
            let e = noise(&f, n, NoiseModel::Weight { weight: we }, &mut rng);
            let g = gauge.random_codeword(&mut rng);
            let wv = rng.gen_range(0..=v_cap);
            let v = noise(&f, m, NoiseModel::Weight { weight: wv }, &mut rng);
            let g2 = gauge.random_codeword(&mut rng);
            let wv2 = rng.gen_range(0..=v_cap);
            let v2 = noise(&f, m, NoiseModel::Weight { weight: wv2 }, &mut rng);
            let (row, ms) = timed(|| {
                let data = f.add_vec(&e, &g);
                let syn = f.add_vec(&dec.syndrome(&data), &v);
                let mut row = Row {
                    trial: t,
                    data_weight: we,
                    syndrome_noise: wv,
                    second_noise: wv2,
                    in_promise: we <= e_max && wv <= v_max && wv2 <= v_max,
                    success: false,
                    residual: weight(&e),
                    residual_bound: bound(wv),
                    syndrome_correction: 0,
                    exact_projection: false,
                    second_round_ok: false,
                };
                let Ok(out) = single_shot_decode(&dec, &syn) else {
                    return row;
                };
                row.syndrome_correction = out.syndrome_correction;
                row.exact_projection = out.exact_projection;
                let r: Vec<Gf> = f.sub_vec(&data, &out.coset.representative);
                let Some((fw, trivial)) = dec.residual_class(&r, bound(wv)) else {
                    return row;
                };
                row.residual = fw;
                let syn2 = f.add_vec(&dec.syndrome(&f.add_vec(&r, &g2)), &v2);
                row.second_round_ok = single_shot_decode(&dec, &syn2).is_ok_and(|o| {
                    let r2 = f.sub_vec(&f.add_vec(&r, &g2), &o.coset.representative);
                    dec.residual_class(&r2, bound(wv) + bound(wv2)).is_some_and(|x| x.1)
                });
                row.success = trivial && fw <= bound(wv) && row.second_round_ok;
                row
            });
            (row, ms)
        })
        .collect();
    let mut buckets = PromiseBuckets::default();
    for (r, _) in &rows {
        buckets.add(r.in_promise, r.success);
    }
    let success: Vec<bool> = rows.iter().map(|(r, _)| r.success).collect();
    let residual: Vec<usize> = rows.iter().map(|(r, _)| r.residual).collect();
    let table: Vec<&Row> = rows.iter().map(|(r, _)| r).collect();
    Ok(Outcome {
        result: json!({
            "length": n,
            "syndrome_length": m,
            "distance": d,
            "distance_exact": dist.exact(),
            "soundness": rho,
            "e_max": e_max,
            "v_max": v_max,
            "locality": dec.checks.locality,
        }),
        trials: table.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect(),
        aggregates: Some(Aggregates::new(&success, &residual)),
        failed: buckets.in_promise_failure > 0,
        promise: Some(buckets),
        csv: Some(csv_table(&table)),
        millis: rows.iter().map(|(_, ms)| *ms).collect(),
    })
}
