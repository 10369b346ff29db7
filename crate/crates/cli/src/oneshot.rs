//! Single-word decode calls: instance JSON plus a word or syndrome arrays.

use prodcode::algebra::{Field, Gf};
use prodcode::decoder::{alpha_decode, hamming, DualTensorInstance, InstanceDoc};
use prodcode::quantum::{subsystem_decode_syndromes, SubsystemRsDecoder, SyndromeInput, SyndromeSolver};
use prodcode::subsystem::{check_matrices, CheckStyle};
use serde_json::{json, Value};

use crate::commands::CliError;
use crate::config::DecodeInstance;

fn elements(f: &Field, raw: &[u32], len: usize, what: &str) -> Result<Vec<Gf>, CliError> {
    if raw.len() != len {
        return Err(CliError::Inconsistent(format!("{what} has length {}, expected {len}", raw.len())));
    }
    let v: Vec<Gf> = raw.iter().map(|&x| Gf(x)).collect();
    if let Some(x) = v.iter().find(|x| !f.contains(**x)) {
        return Err(CliError::Inconsistent(format!("{what} entry {} is not in GF({})", x.0, f.q())));
    }
    Ok(v)
}

/// Decode a row-major n×n word against a dual tensor instance.
pub fn decode_word(doc: &InstanceDoc, word: &[u32]) -> Result<Value, CliError> {
    let inst = DualTensorInstance::from_doc(doc)?;
    let n = inst.n();
    let c = elements(inst.field(), word, n * n, "word")?;
    let (rep, millis) = crate::commands::timed(|| alpha_decode(&inst, &c));
    let rep = rep?;
    let b = hamming(&rep.output, &c);
    let s1 = rep.stage1_residual(&c);
    let s3 = rep.finish.as_ref().map(|x| prodcode::algebra::weight(&x.output));
    Ok(json!({
        "output": rep.output,
        "path": rep.path,
        "fallback": rep.fallback,
        "residual": rep.residual,
        "distance_to_input": b,
        "stage_bounds": {
            "stage1_residual": s1,
            "stage1_bound": inst.stage1_bound(),
            "stage3_weight": s3,
            "stage3_bound": inst.stage3_bound(b),
            "iterations": rep.finish.as_ref().map(|x| x.iterations),
            "iteration_bound": n * n,
        },
        "failure": rep.failure,
        "millis": millis,
    }))
}

/// Corrections from an (s_X, s_Z) pair under the tensor-style checks.
pub fn decode_syndromes(inst: &DecodeInstance, s_x: &[u32], s_z: &[u32]) -> Result<Value, CliError> {
    let DecodeInstance::SubsystemRs { q, n, kx, kz, rho, mode } = inst else {
        return Err(CliError::Usage("syndrome decoding needs a subsystem-rs instance".into()));
    };
    let f = Field::of_order(*q)?;
    let dec = SubsystemRsDecoder::new(&f, *n, *kx, *kz, *rho, *mode)?;
    let checks = check_matrices(&dec.code, CheckStyle::Tensor)?;
    let solver = SyndromeSolver::new(&checks)?;
    let s = SyndromeInput {
        s_x: elements(&f, s_x, checks.hx.rows(), "s_x")?,
        s_z: elements(&f, s_z, checks.hz.rows(), "s_z")?,
    };
    let (out, millis) = crate::commands::timed(|| subsystem_decode_syndromes(&dec, &solver, &s));
    let out = out?;
    Ok(json!({
        "x_correction": out.x.coset.representative,
        "z_correction": out.z.coset.representative,
        "x_residual": out.x.decode.residual,
        "z_residual": out.z.decode.residual,
        "millis": millis,
    }))
}
