use prodcode::algebra::Field;
use prodcode::bounds::{homological_sweep, subsystem_sweep, SweepConfig, SweepReport};
use prodcode::codes::{min_distance, rs_code, LinearCode};
use prodcode::expansion::pe_exact;
use prodcode::subsystem::{subsystem_distance, subsystem_product};
use prodcode::transversal::{
    exponent_set_check, phase_identity_test, transrs_gate, transrs_params, verify_gate_doc,
};
use prodcode::Error;
use serde_json::{json, Value};

use super::build::qrs_factors;
use super::CliError;
use crate::config::{BoundSweep, CodeSpec, DistanceTarget, DistanceTask, GateSource, GateVerify, PeExact};
use crate::report::Outcome;

fn done(result: Value, failed: bool) -> Outcome {
    Outcome {
        result,
        failed,
        ..Outcome::default()
    }
}

fn code_of(spec: &CodeSpec) -> Result<LinearCode, CliError> {
    Ok(match spec {
        CodeSpec::Rs { q, n, k } => rs_code(&Field::of_order(*q)?, *n, *k, None)?,
        CodeSpec::Doc { doc } => doc.to_code()?,
    })
}

pub fn pe(c: &PeExact) -> Result<Outcome, CliError> {
    if c.codes.is_empty() {
        return Err(CliError::Usage("pe-exact needs at least one code".into()));
    }
    let codes = c.codes.iter().map(code_of).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&LinearCode> = codes.iter().collect();
    let r = pe_exact(&refs, c.budget)?;
    Ok(done(
        json!({
            "rho": format!("{}/{}", r.rho.numer(), r.rho.denom()),
            "rho_f64": *r.rho.numer() as f64 / *r.rho.denom() as f64,
            "lengths": codes.iter().map(LinearCode::len).collect::<Vec<_>>(),
            "dims": codes.iter().map(LinearCode::dim).collect::<Vec<_>>(),
            "witness": r.witness,
        }),
        false,
    ))
}

pub fn gate_verify(seed: u64, c: &GateVerify) -> Result<Outcome, CliError> {
    match &c.source {
        GateSource::Params { r, q } => {
            let p = transrs_params(*r, *q)?;
            let exps = exponent_set_check(&p);
            let g = match transrs_gate(&p) {
                Ok(g) => g,
                Err(Error::MultiplicationProperty { lr, w, sum }) => {
                    return Ok(done(
                        json!({ "params": p, "holds": false, "dims": { "lr": lr, "w": w, "sum": sum } }),
                        true,
                    ))
                }
                Err(e) => return Err(e.into()),
            };
            let phase = phase_identity_test(&g, c.trials, seed);
            Ok(done(
                json!({
                    "params": p,
                    "holds": true,
                    "exponent_set_empty": exps.empty,
                    "certificate": g.certificate,
                    "enc_rank": g.enc_rank,
                    "gate_qudits": g.gate_qudits(),
                    "phase": phase,
                }),
                !phase.all_passed(),
            ))
        }
        GateSource::Doc { doc } => {
            let v = verify_gate_doc(doc, c.trials, seed)?;
            let failed = !v.passed();
            Ok(done(json!({ "verification": v, "passed": !failed }), failed))
        }
    }
}

pub fn distance(c: &DistanceTask) -> Result<Outcome, CliError> {
    let result = match &c.target {
        DistanceTarget::Code { doc } => {
            let code = doc.to_code()?;
            let d = min_distance(&code, c.budget);
            json!({ "length": code.len(), "dim": code.dim(), "distance": d })
        }
        DistanceTarget::Css { doc } => {
            let pair = doc.to_pair()?;
            let d = subsystem_distance(&pair, c.budget);
            json!({ "length": pair.len(), "dim": pair.dim(), "value": d.value(), "exact": d.exact(), "distance": d })
        }
        DistanceTarget::SubsystemProduct { q, factors } => {
            let f = Field::of_order(*q)?;
            let p = subsystem_product(&qrs_factors(&f, *q as usize, factors)?)?;
            let d = subsystem_distance(&p.pair, c.budget);
            json!({
                "length": p.pair.len(),
                "dim": p.pair.dim(),
                "value": d.value(),
                "exact": d.exact(),
                "distance": d,
            })
        }
    };
    Ok(done(result, false))
}

fn sweep_summary(r: &SweepReport) -> Value {
    json!({
        "compared": r.compared(),
        "inexact": r.inexact(),
        "skipped_pe": r.skipped_pe,
        "violations": r.violations(),
        "records": r.records,
    })
}

pub fn bound_sweep(seed: u64, c: &BoundSweep) -> Result<Outcome, CliError> {
    let cfg = SweepConfig {
        max_n: c.max_n,
        random_per_field: c.random_per_field,
        pe_budget: c.pe_budget,
        dist_budget: c.dist_budget,
        filling_trials: c.filling_trials,
        seed,
    };
    let sub = subsystem_sweep(&cfg)?;
    let hom = homological_sweep(&cfg)?;
    let failed = !sub.violations().is_empty() || !hom.violations().is_empty();
    Ok(done(
        json!({ "subsystem": sweep_summary(&sub), "homological": sweep_summary(&hom) }),
        failed,
    ))
}
