use prodcode::algebra::Field;
use prodcode::codes::{punctured_tensor_rs, rs_code};
use prodcode::subsystem::{quantum_rs, subsystem_product, CssPair};
use prodcode::transversal::{smallest_window_m, triple_product_build};
use serde_json::json;

use super::CliError;
use crate::config::{BuildCode, CodeKind};
use crate::report::Outcome;

fn ks<const N: usize>(c: &BuildCode) -> Result<[usize; N], CliError> {
    c.k.as_slice()
        .try_into()
        .map_err(|_| CliError::Usage(format!("{:?} needs {N} values of k, got {}", c.kind, c.k.len())))
}

pub(crate) fn qrs_factors(f: &Field, n: usize, k: &[[usize; 2]]) -> Result<Vec<CssPair>, CliError> {
    if k.is_empty() {
        return Err(CliError::Usage("at least one factor is required".into()));
    }
    Ok(k.iter()
        .map(|[kx, kz]| quantum_rs(f, n, *kx, *kz))
        .collect::<Result<_, _>>()?)
}

pub fn run(seed: u64, c: &BuildCode) -> Result<Outcome, CliError> {
    let f = Field::of_order(c.q)?;
    let n = c.n.unwrap_or(c.q as usize);
    let result = match c.kind {
        CodeKind::Rs => {
            let [k] = ks(c)?;
            let code = rs_code(&f, n, k, None)?;
            json!({ "kind": "rs", "dim": code.dim(), "code": code.to_doc() })
        }
        CodeKind::Qrs => {
            let [kx, kz] = ks(c)?;
            let pair = quantum_rs(&f, n, kx, kz)?;
            json!({ "kind": "qrs", "dim": pair.dim(), "pair": pair.to_doc() })
        }
        CodeKind::SubsystemProduct => {
            if c.k.len() % 2 != 0 {
                return Err(CliError::Usage("subsystem-product takes k as k_X,k_Z pairs".into()));
            }
            let k: Vec<[usize; 2]> = c.k.chunks(2).map(|p| [p[0], p[1]]).collect();
            let p = subsystem_product(&qrs_factors(&f, n, &k)?)?;
            json!({
                "kind": "subsystem-product",
                "length": p.pair.len(),
                "dim": p.pair.dim(),
                "locality": p.locality,
                "pair": p.pair.to_doc(),
            })
        }
        CodeKind::TripleProduct => {
            let m = c.m.unwrap_or_else(smallest_window_m);
            let t = triple_product_build(&f, m, c.u.unwrap_or(1), seed)?;
            let gate = t.gate.as_ref();
            json!({
                "kind": "triple-product",
                "params": t.params,
                "gamma_valid": t.gamma_valid,
                "gamma_attempts": t.gamma_attempts,
                "verdict": t.verdict,
                "gate_qudits": gate.map(|g| g.gate_qudits()),
                "enc_rank": gate.map(|g| g.enc_rank),
            })
        }
        CodeKind::PuncturedTensorRs => {
            let [k] = ks(c)?;
            let m = c.m.ok_or_else(|| CliError::Usage("punctured-tensor-rs needs m".into()))?;
            let e = punctured_tensor_rs(&f, m, c.u.unwrap_or(2), k, None, seed)?;
            json!({
                "kind": "punctured-tensor-rs",
                "dim": e.code.dim(),
                "nominal_dim": e.nominal_dim(),
                "points": e.points,
                "code": e.code.to_doc(),
            })
        }
    };
    Ok(Outcome {
        result,
        ..Outcome::default()
    })
}
