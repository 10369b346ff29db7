use prodcode::algebra::Field;
use prodcode::transversal::{
    gamma_satisfies, phase_identity_test, smallest_window_m, triple_product_build, Certificate,
    Verdict,
};

#[test]
fn desk_scale_triple_product() {
    let f = Field::of_order(1 << 17).unwrap();
    let m = smallest_window_m();
    let t = triple_product_build(&f, m, 1, 2024).unwrap();
    assert!(!t.params.degraded && !t.params.empty_window);
    assert_eq!(t.params.window_dim, 1);
    assert!(t.gamma_valid);
    for i in 0..3 {
        assert!(t.gammas[i].iter().all(|x| !x.is_zero()));
        assert!(gamma_satisfies(&f, &t.points[i], &t.params, &t.gammas[i]));
    }
    assert_eq!(t.verdict, Verdict::Holds);
    let g = t.gate.as_ref().unwrap();
    assert_eq!(g.enc_rank, 1);
    let Certificate::Factored(c) = &g.certificate else { panic!() };
    assert!(c.ranks.iter().all(|r| r[0] + r[1] == r[2]));
    let rep = phase_identity_test(g, 1000, 7);
    assert!(rep.all_passed(), "{:?}", rep.witness);
}

#[test]
fn degraded_regime_is_flagged() {
    let f = Field::of_order(1 << 17).unwrap();
    let t = triple_product_build(&f, 40, 1, 3).unwrap();
    assert!(t.params.degraded && t.params.empty_window);
    assert!(t.gamma_valid);
    let g = t.gate.unwrap();
    assert_eq!(g.gate_qudits(), 0);
    assert!(phase_identity_test(&g, 50, 1).all_passed());
}
