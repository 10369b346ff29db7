use std::sync::OnceLock;

use prodcode::algebra::Gf;
use prodcode::codes::{tensor, LinearCode};
use prodcode::subsystem::subsystem_product;
use prodcode::transversal::{
    exponent_set_check, factored_property, gate_from_json, multiplication_property,
    phase_identity_test, phase_identity_zero, sabotage_run, synthesize_gate,
    synthesize_gate_factored, transrs_codes, transrs_gate, transrs_params, verify_gate_doc,
    Certificate, Coefficients, GateInstance, Sabotage, TransRsParams, DEFAULT_STAR_CAP,
};

fn gate(r: usize, q: usize) -> &'static GateInstance {
    static G16: OnceLock<GateInstance> = OnceLock::new();
    static G37: OnceLock<GateInstance> = OnceLock::new();
    let cell = match (r, q) {
        (2, 16) => &G16,
        (3, 37) => &G37,
        _ => unreachable!(),
    };
    cell.get_or_init(|| transrs_gate(&transrs_params(r, q).unwrap()).unwrap())
}

fn in_box(p: [usize; 2], x: (usize, usize), y: (usize, usize)) -> bool {
    x.0 <= p[0] && p[0] < x.1 && y.0 <= p[1] && p[1] < y.1
}

fn reduce(e: usize, q: usize) -> usize {
    if e < q {
        e
    } else {
        (e - 1) % (q - 1) + 1
    }
}

#[test]
fn params_match_formulas() {
    let p = transrs_params(3, 37).unwrap();
    assert_eq!(p.eps_den, 12);
    assert_eq!((p.kx, p.kz), ([34, 31], [34, 12]));
    assert_eq!((p.l_lo, p.l_hi, p.gate_qudits), (11, 12, 1));
    assert_eq!(p.dimension, 31 * 6);
    let p = transrs_params(2, 16).unwrap();
    assert_eq!(p.eps_den, 8);
    assert_eq!((p.kx, p.kz), ([14, 12], [14, 8]));
    assert_eq!((p.l_lo, p.l_hi, p.gate_qudits), (6, 8, 4));
    assert!(transrs_params(2, 15).is_err());
    assert!(transrs_params(3, 35).is_err());
}

#[test]
fn exponent_sets_are_empty_on_gate_parameters() {
    for (r, q) in [(2, 16), (3, 37)] {
        let c = exponent_set_check(&transrs_params(r, q).unwrap());
        assert!(c.empty, "r={r} q={q}: {:?}", c.witness);
        assert!(c.boxes > 0);
    }
}

fn check_witness(p: &TransRsParams) {
    let c = exponent_set_check(p);
    let w = c.witness.expect("witness expected");
    let q = p.q;
    let sum = |v: &[[usize; 2]]| {
        let s = v.iter().fold([0, 0], |a, x| [a[0] + x[0], a[1] + x[1]]);
        [reduce(s[0], q), reduce(s[1], q)]
    };
    assert_eq!(w.from_m.len(), p.r);
    assert!(w.from_m.iter().all(|&x| in_box(x, (p.l_lo, p.l_hi), (p.l_lo, p.l_hi))));
    assert_eq!(sum(&w.from_m), w.point);
    let t = |x: [usize; 2]| {
        in_box(x, (0, p.kz[0]), (0, p.kz[1].min(q - p.kx[1])))
            || in_box(x, (0, p.kz[0].min(q - p.kx[0])), (0, p.kz[1]))
    };
    assert!(t(w.from_t[0]));
    assert!(w.from_t[1..]
        .iter()
        .all(|&x| t(x) || in_box(x, (p.l_lo, p.l_hi), (p.l_lo, p.l_hi))));
    assert_eq!(sum(&w.from_t), w.point);
}

#[test]
fn lowered_window_yields_witness() {
    let p = transrs_params(3, 37).unwrap();
    assert!(exponent_set_check(&p.with_window(10, 12)).empty);
    check_witness(&p.with_window(9, 12));
    let p = transrs_params(2, 16).unwrap();
    let lo = (0..p.l_lo)
        .rev()
        .find(|&lo| !exponent_set_check(&p.with_window(lo, p.l_hi)).empty)
        .unwrap();
    check_witness(&p.with_window(lo, p.l_hi));
}

/// Symbolic emptiness agrees with ranks over the actual codes.
#[test]
fn exponent_check_agrees_with_ranks() {
    let cases: Vec<(TransRsParams, Vec<(usize, usize)>)> = vec![
        (
            transrs_params(2, 16).unwrap(),
            (0..8).map(|lo| (lo, 8)).chain([(3, 6), (5, 9), (7, 10)]).collect(),
        ),
        (transrs_params(2, 17).unwrap(), vec![(6, 8), (4, 8), (2, 8), (6, 10)]),
        (transrs_params(3, 37).unwrap(), vec![(9, 12)]),
    ];
    for (base, windows) in cases {
        let (_, factors, _) = transrs_codes(&base).unwrap();
        let s = subsystem_product(&factors).unwrap().pair.stabilizers();
        for (lo, hi) in windows {
            let p = base.with_window(lo, hi);
            let (_, _, logical) = transrs_codes(&p).unwrap();
            let l = tensor(&[&logical[0], &logical[1]]).unwrap();
            let check = multiplication_property(&l, &s, p.r, DEFAULT_STAR_CAP).unwrap();
            let sym = exponent_set_check(&p);
            assert_eq!(sym.empty, check.holds(), "q={} r={} window [{lo},{hi})", p.q, p.r);
        }
    }
}

fn assert_gate(g: &GateInstance, lr: usize) {
    let Certificate::Ranks(c) = g.certificate else { panic!("dense certificate expected") };
    assert_eq!(c.intersection_dim(), 0);
    assert_eq!(c.dim_lr, lr);
    assert_eq!(g.enc_rank, g.gate_qudits());
    let rep = phase_identity_test(g, 1000, 2024);
    assert_eq!(rep.passed, 1000, "{:?}", rep.witness);
}

#[test]
fn gate_r2_q16() {
    let g = gate(2, 16);
    assert_eq!(g.gate_qudits(), 4);
    // L^{*2} has exponents [12,14]², nine monomials
    assert_gate(g, 9);
}

#[test]
fn gate_r3_q37() {
    let g = gate(3, 37);
    assert_eq!(g.gate_qudits(), 1);
    assert_gate(g, 1);
}

#[test]
fn zero_messages_give_zero_sides() {
    for (r, q) in [(2, 16), (3, 37)] {
        assert_eq!(phase_identity_zero(gate(r, q), 3), (Gf::ZERO, Gf::ZERO));
    }
}

#[test]
fn synthesis_is_reproducible() {
    let again = transrs_gate(&transrs_params(2, 16).unwrap()).unwrap();
    assert_eq!(again.coefficients, gate(2, 16).coefficients);
    assert_eq!(again.info_sets, gate(2, 16).info_sets);
}

#[test]
fn zero_logical_gives_zero_coefficients() {
    let p = transrs_params(2, 16).unwrap();
    let (f, factors, _) = transrs_codes(&p).unwrap();
    let zero = LinearCode::zero(&f, 16);
    let g = synthesize_gate(&factors, &[zero.clone(), zero], 2).unwrap();
    let Coefficients::Dense(a) = &g.coefficients else { panic!() };
    assert!(a.iter().all(|x| x.is_zero()));
    assert!(phase_identity_test(&g, 20, 1).all_passed());
}

#[test]
fn logical_must_avoid_x_perp() {
    let p = transrs_params(2, 16).unwrap();
    let (_, factors, bad) = transrs_codes(&p.with_window(0, 2)).unwrap();
    assert!(synthesize_gate(&factors, &bad, 2).is_err());
}

#[test]
fn sabotage_is_always_caught() {
    let mut caught = 0;
    for run in 0..20u64 {
        let kind = if run % 2 == 0 {
            Sabotage::PerturbedCoefficients
        } else {
            Sabotage::EnlargedStabilizers
        };
        let g = if run % 4 < 2 { gate(2, 16) } else { gate(3, 37) };
        let out = sabotage_run(g, kind, 100 + run, 1000).unwrap();
        assert!(out.caught, "run {run}: {}", out.detail);
        caught += 1;
    }
    assert_eq!(caught, 20);
}

#[test]
fn factored_certificate_on_rs_pair() {
    let p = transrs_params(2, 16).unwrap();
    let (_, factors, logical) = transrs_codes(&p).unwrap();
    let check = factored_property(&factors, &logical, 2, DEFAULT_STAR_CAP).unwrap();
    assert!(check.holds());
    let g = synthesize_gate_factored(&factors, &logical, 2).unwrap();
    assert_eq!(g.enc_rank, 4);
    assert!(phase_identity_test(&g, 300, 8).all_passed());
}

#[test]
fn json_round_trip_reverifies() {
    let g = gate(2, 16);
    let doc = gate_from_json(&g.to_json()).unwrap();
    let v = verify_gate_doc(&doc, 200, 5).unwrap();
    assert!(v.passed(), "{v:?}");
    let mut bad = doc.clone();
    bad.coefficients[0][3] ^= 1;
    let v = verify_gate_doc(&bad, 500, 5).unwrap();
    assert!(!v.coefficients_match);
    assert!(!v.passed());
}
