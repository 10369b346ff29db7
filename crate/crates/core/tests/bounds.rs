use num_rational::Ratio;
use prodcode::algebra::Field;
use prodcode::bounds::{
    homological_bound, homological_sweep, subsystem_bound, subsystem_sweep, BoundStatus, SweepConfig,
    DISTANCE_BUDGET,
};
use prodcode::chain::SingleSectorComplex;
use prodcode::codes::min_distance;
use prodcode::subsystem::quantum_rs;

fn cfg() -> SweepConfig {
    SweepConfig {
        pe_budget: 1 << 22,
        dist_budget: 1 << 20,
        ..SweepConfig::default()
    }
}

#[test]
fn rs_pair_bound_is_below_distance() {
    let f = Field::of_order(4).unwrap();
    let a = quantum_rs(&f, 4, 3, 3).unwrap();
    let b = quantum_rs(&f, 3, 2, 2).unwrap();
    let c = subsystem_bound(&[a.clone(), b], 1 << 22, DISTANCE_BUDGET).unwrap().unwrap();
    // single-code product-expansion is the relative distance
    let d = min_distance(&a.qx, 1 << 20).value.unwrap();
    assert_eq!(c.rho_x[0], Ratio::new(d as u64, 4));
    assert!(c.exact);
    assert_eq!(c.status, BoundStatus::Holds);
    assert!(Ratio::from_integer(c.distance.unwrap() as u64) >= c.bound);
}

#[test]
fn subsystem_sweep_has_no_violations() {
    let r = subsystem_sweep(&cfg()).unwrap();
    assert!(r.violations().is_empty(), "{:?}", r.violations());
    assert!(r.compared() >= 30, "only {} compared", r.compared());
    assert!(r.records.iter().any(|x| x.family == "rs x rs"));
    assert!(r.records.iter().any(|x| x.q == 2));
}

#[test]
fn homological_sweep_has_no_violations() {
    let r = homological_sweep(&cfg()).unwrap();
    assert!(r.violations().is_empty(), "{:?}", r.violations());
    assert!(r.compared() >= 100, "only {} compared", r.compared());
    assert!(r.records.iter().any(|x| x.filling.is_some()));
}

#[test]
fn homological_rs_product() {
    let f = Field::of_order(4).unwrap();
    let p = quantum_rs(&f, 4, 3, 3).unwrap();
    let c1 = SingleSectorComplex::from_css(&p.qx, &p.qz).unwrap();
    let p = quantum_rs(&f, 3, 2, 2).unwrap();
    let c2 = SingleSectorComplex::from_css(&p.qx, &p.qz).unwrap();
    let h = homological_bound(&c1, &c2, 1 << 22, DISTANCE_BUDGET, 40, 3).unwrap().unwrap();
    assert_eq!(h.distance, Some(4));
    assert_eq!(h.status, BoundStatus::Holds);
    assert!(h.bound > Ratio::from_integer(1));
    let fill = h.filling.unwrap();
    assert!(fill.exact);
    assert!(fill.estimate <= fill.bound);
}

#[test]
fn odd_characteristic_has_no_complex() {
    let f = Field::of_order(5).unwrap();
    let p = quantum_rs(&f, 5, 3, 3).unwrap();
    assert!(SingleSectorComplex::from_css(&p.qx, &p.qz).is_err());
}
