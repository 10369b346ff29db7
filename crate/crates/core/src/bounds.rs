//! Product-expansion lower bounds on the distance of product codes,
//! compared with exhaustive distances on small instances.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Matrix};
use crate::chain::{hom_product, SingleSectorComplex};
use crate::codes::{min_distance, LinearCode};
use crate::error::{Error, Result};
use crate::expansion::{pe_exact, pe_exact_cost};
use crate::subsystem::{quantum_rs, subsystem_distance, subsystem_product, CssPair};

/// Exhaustive distance budget (vectors visited) used by the sweeps.
pub const DISTANCE_BUDGET: u64 = 1 << 24;

/// Outcome of comparing an exact distance with a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Violated,
    /// The distance search did not finish exhaustively.
    Inexact,
}

fn compare(distance: Option<usize>, exact: bool, bound: Ratio<u64>) -> BoundStatus {
    match distance {
        _ if !exact => BoundStatus::Inexact,
        None => BoundStatus::Holds,
        Some(d) if Ratio::from_integer(d as u64) >= bound => BoundStatus::Holds,
        Some(_) => BoundStatus::Violated,
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// pe of a tuple, or None when exhaustive enumeration exceeds `budget`.
fn pe_within(codes: &[&LinearCode], budget: u64) -> Result<Option<Ratio<u64>>> {
    if pe_exact_cost(codes)? > budget {
        return Ok(None);
    }
    match pe_exact(codes, budget) {
        Ok(r) => Ok(Some(r.rho)),
        Err(Error::Budget(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug)]
pub struct SubsystemBoundCheck {
    pub lengths: Vec<usize>,
    /// pe(Q¹_Z^⊥, …, Q^{i−1}_Z^⊥, Q^i_X) per i.
    pub rho_x: Vec<Ratio<u64>>,
    /// pe(Q¹_X^⊥, …, Q^{i−1}_X^⊥, Q^i_Z) per i.
    pub rho_z: Vec<Ratio<u64>>,
    /// min{Π ρ^i_X n_i, Π ρ^i_Z n_i}
    pub bound: Ratio<u64>,
    pub distance: Option<usize>,
    pub exact: bool,
    pub status: BoundStatus,
}

impl SubsystemBoundCheck {
    pub fn bound_f64(&self) -> f64 {
        ratio_f64(self.bound)
    }
}

fn check_css(factors: &[CssPair]) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::Contract("no factors".into()));
    }
    if let Some(p) = factors.iter().find(|p| p.subsystem) {
        return Err(Error::Contract(format!(
            "bound needs CSS factors, {} / {} is a subsystem pair",
            p.qx.label(),
            p.qz.label()
        )));
    }
    Ok(())
}

/// (ρ^i_X, ρ^i_Z) for factor i, or None when a pe_exact is over budget.
fn pe_step(factors: &[CssPair], i: usize, budget: u64) -> Result<Option<(Ratio<u64>, Ratio<u64>)>> {
    let zperp: Vec<LinearCode> = factors[..i].iter().map(|p| p.qz.dual()).collect();
    let xperp: Vec<LinearCode> = factors[..i].iter().map(|p| p.qx.dual()).collect();
    let mut tx: Vec<&LinearCode> = zperp.iter().collect();
    tx.push(&factors[i].qx);
    let mut tz: Vec<&LinearCode> = xperp.iter().collect();
    tz.push(&factors[i].qz);
    let Some(a) = pe_within(&tx, budget)? else {
        return Ok(None);
    };
    Ok(pe_within(&tz, budget)?.map(|b| (a, b)))
}

fn bound_check(factors: &[CssPair], rho_x: Vec<Ratio<u64>>, rho_z: Vec<Ratio<u64>>, dist_budget: u64) -> Result<SubsystemBoundCheck> {
    let lengths: Vec<usize> = factors.iter().map(|p| p.len()).collect();
    let prod = |rho: &[Ratio<u64>]| {
        rho.iter()
            .zip(&lengths)
            .fold(Ratio::from_integer(1), |acc, (r, &n)| acc * r * Ratio::from_integer(n as u64))
    };
    let bound = prod(&rho_x).min(prod(&rho_z));
    let code = subsystem_product(factors)?;
    let d = subsystem_distance(&code.pair, dist_budget);
    Ok(SubsystemBoundCheck {
        lengths,
        rho_x,
        rho_z,
        bound,
        distance: d.value(),
        exact: d.exact(),
        status: compare(d.value(), d.exact(), bound),
    })
}

/// Product-expansion bound on the subsystem product of CSS `factors`,
/// next to its distance. `Ok(None)` when some pe_exact is over budget.
pub fn subsystem_bound(factors: &[CssPair], pe_budget: u64, dist_budget: u64) -> Result<Option<SubsystemBoundCheck>> {
    check_css(factors)?;
    let mut rho_x = Vec::with_capacity(factors.len());
    let mut rho_z = Vec::with_capacity(factors.len());
    for i in 0..factors.len() {
        let Some((a, b)) = pe_step(factors, i, pe_budget)? else {
            return Ok(None);
        };
        rho_x.push(a);
        rho_z.push(b);
    }
    bound_check(factors, rho_x, rho_z, dist_budget).map(Some)
}

#[derive(Clone, Debug)]
pub struct HomologicalBoundCheck {
    pub lengths: [usize; 2],
    /// pe(Z_*(C₁)) = d(Z_*(C₁)) / n₁.
    pub rho1: Ratio<u64>,
    /// pe(B_*(C₁), Z_*(C₂)).
    pub rho2: Ratio<u64>,
    /// ρ₁n₁ρ₂n₂
    pub bound: Ratio<u64>,
    pub distance: Option<usize>,
    pub exact: bool,
    pub status: BoundStatus,
    pub filling: Option<FillingCheck>,
}

impl HomologicalBoundCheck {
    pub fn bound_f64(&self) -> f64 {
        ratio_f64(self.bound)
    }
}

/// Sampled filling constant against 1/(ρ'·min{ρ', Δ₁, Δ₂}).
#[derive(Clone, Debug)]
pub struct FillingCheck {
    /// pe(B_*(C₁), B_*(C₂)).
    pub rho_prime: Ratio<u64>,
    /// Relative distances of Z_*(C_i).
    pub delta: [Ratio<u64>; 2],
    pub bound: Ratio<u64>,
    /// Lower estimate of μ_* as preimage/boundary weights.
    pub estimate: Ratio<u64>,
    pub exact: bool,
    pub status: BoundStatus,
}

fn relative_distance(c: &LinearCode, budget: u64) -> Option<Ratio<u64>> {
    let d = min_distance(c, budget);
    match (d.exact, d.value) {
        (true, Some(v)) => Some(Ratio::new(v as u64, c.len() as u64)),
        _ => None,
    }
}

/// Systolic-distance bound on C₁ ⊗ C₂. `Ok(None)` when some pe_exact is
/// over budget or a factor has no nonzero cycles.
pub fn homological_bound(
    c1: &SingleSectorComplex,
    c2: &SingleSectorComplex,
    pe_budget: u64,
    dist_budget: u64,
    filling_trials: usize,
    seed: u64,
) -> Result<Option<HomologicalBoundCheck>> {
    let (z1, z2) = (c1.cycles(), c2.cycles());
    let (b1, b2) = (c1.boundaries(), c2.boundaries());
    if z1.dim() == 0 || z2.dim() == 0 {
        return Ok(None);
    }
    let (Some(rho1), Some(rho2)) = (pe_within(&[&z1], pe_budget)?, pe_within(&[&b1, &z2], pe_budget)?) else {
        return Ok(None);
    };
    let n = [c1.dim(), c2.dim()];
    let bound = rho1 * Ratio::from_integer(n[0] as u64) * rho2 * Ratio::from_integer(n[1] as u64);
    let prod = hom_product(c1, c2)?;
    let d = prod.systolic_distance(dist_budget);
    let filling = if filling_trials > 0 && b1.dim() > 0 && b2.dim() > 0 {
        filling_check(&prod, [&z1, &z2], [&b1, &b2], pe_budget, dist_budget, filling_trials, seed)?
    } else {
        None
    };
    Ok(Some(HomologicalBoundCheck {
        lengths: n,
        rho1,
        rho2,
        bound,
        distance: d.value,
        exact: d.exact,
        status: compare(d.value, d.exact, bound),
        filling,
    }))
}

fn filling_check(
    prod: &SingleSectorComplex,
    z: [&LinearCode; 2],
    b: [&LinearCode; 2],
    pe_budget: u64,
    dist_budget: u64,
    trials: usize,
    seed: u64,
) -> Result<Option<FillingCheck>> {
    let Some(rho_prime) = pe_within(&b, pe_budget)? else {
        return Ok(None);
    };
    let (Some(d1), Some(d2)) = (relative_distance(z[0], dist_budget), relative_distance(z[1], dist_budget)) else {
        return Ok(None);
    };
    let bound = (rho_prime * rho_prime.min(d1).min(d2)).recip();
    let est = prod.filling_constant_estimate(trials, dist_budget, seed);
    let estimate = Ratio::new(est.preimage_weight as u64, est.boundary_weight as u64);
    let status = if !est.exact {
        BoundStatus::Inexact
    } else if estimate <= bound {
        BoundStatus::Holds
    } else {
        BoundStatus::Violated
    };
    Ok(Some(FillingCheck {
        rho_prime,
        delta: [d1, d2],
        bound,
        estimate,
        exact: est.exact,
        status,
    }))
}

/// Random CSS pair with dim Q_X^⊥ = a and dim Q_Z = a + b.
pub fn random_css<R: Rng + ?Sized>(field: &Field, n: usize, a: usize, b: usize, rng: &mut R) -> Result<CssPair> {
    if a + b > n {
        return Err(Error::Dimension(format!("a + b = {} > n = {n}", a + b)));
    }
    for _ in 0..64 {
        let g = Matrix::random(field, a + b, n, rng);
        if g.rank() != a + b {
            continue;
        }
        let xperp = LinearCode::new(g.select_rows(&(0..a).collect::<Vec<_>>()), "A");
        let qz = LinearCode::new(g, "");
        let label = format!("random[{n},{a},{b}]");
        return CssPair::new(xperp.dual().with_label(format!("{label}.X")), qz.with_label(format!("{label}.Z")));
    }
    Err(Error::NotFound("no full-rank random generator".into()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: String,
    pub q: u64,
    pub factors: Vec<String>,
    pub lengths: Vec<usize>,
    pub bound: f64,
    pub distance: Option<usize>,
    pub status: BoundStatus,
    /// Filling estimate and bound, for homological products.
    pub filling: Option<(f64, f64, BoundStatus)>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    /// Instances with some pe_exact over budget.
    pub skipped_pe: usize,
}

impl SweepReport {
    /// Instances whose distance search did not finish exhaustively.
    pub fn inexact(&self) -> usize {
        self.records.iter().filter(|r| r.status == BoundStatus::Inexact).count()
    }

    pub fn compared(&self) -> usize {
        self.records.iter().filter(|r| r.status != BoundStatus::Inexact).count()
    }

    pub fn violations(&self) -> Vec<&SweepRecord> {
        self.records
            .iter()
            .filter(|r| {
                r.status == BoundStatus::Violated
                    || matches!(r.filling, Some((_, _, BoundStatus::Violated)))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_n: usize,
    pub random_per_field: usize,
    pub pe_budget: u64,
    pub dist_budget: u64,
    pub filling_trials: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_n: 8,
            random_per_field: 12,
            pe_budget: 1 << 22,
            dist_budget: DISTANCE_BUDGET,
            filling_trials: 30,
            seed: 7,
        }
    }
}

/// Quantum RS pairs (n, k_X, k_Z) with n ≤ min(q, max_n), 1 ≤ k < n and
/// positive dimension.
fn rs_factors(field: &Field, max_n: usize) -> Result<Vec<CssPair>> {
    let mut out = Vec::new();
    for n in 3..=max_n.min(field.q() as usize) {
        for kx in 1..n {
            for kz in (n + 1 - kx).max(1)..n {
                // RS duals off the full field are generalized RS codes
                match quantum_rs(field, n, kx, kz) {
                    Ok(p) => out.push(p),
                    Err(Error::NotOrthogonal(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

fn random_factors(field: &Field, cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CssPair>> {
    let mut out = Vec::new();
    while out.len() < cfg.random_per_field {
        let n = rng.gen_range(3..=cfg.max_n);
        let a = rng.gen_range(1..n - 1);
        let b = rng.gen_range(1..n - a);
        out.push(random_css(field, n, a, b, rng)?);
    }
    Ok(out)
}

/// Every 2-factor subsystem product of small RS and random CSS factors.
pub fn subsystem_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = SweepReport::default();
    for q in [2u64, 3, 4, 5, 7, 8] {
        let f = Field::of_order(q)?;
        let mut factors = rs_factors(&f, cfg.max_n)?;
        let family_rs = factors.len();
        factors.extend(random_factors(&f, cfg, &mut rng)?);
        let first = factors
            .iter()
            .map(|a| pe_step(std::slice::from_ref(a), 0, cfg.pe_budget))
            .collect::<Result<Vec<_>>>()?;
        for (i, a) in factors.iter().enumerate() {
            for (j, b) in factors.iter().enumerate() {
                let pair = [a.clone(), b.clone()];
                let (Some(r1), Some(r2)) = (first[i], pe_step(&pair, 1, cfg.pe_budget)?) else {
                    report.skipped_pe += 1;
                    continue;
                };
                let c = bound_check(&pair, vec![r1.0, r2.0], vec![r1.1, r2.1], cfg.dist_budget)?;
                let family = match (i < family_rs, j < family_rs) {
                    (true, true) => "rs x rs",
                    (false, false) => "random x random",
                    _ => "rs x random",
                };
                report.records.push(SweepRecord {
                    family: family.into(),
                    q,
                    factors: pair.iter().map(|p| format!("{}|{}", p.qx.label(), p.qz.label())).collect(),
                    lengths: c.lengths.clone(),
                    bound: c.bound_f64(),
                    distance: c.distance,
                    status: c.status,
                    filling: None,
                });
            }
        }
    }
    Ok(report)
}

/// Single-sector complexes from CSS pairs with dim Q_X = dim Q_Z.
fn complexes(field: &Field, cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> Result<Vec<(String, SingleSectorComplex)>> {
    let mut out = Vec::new();
    for n in 3..=cfg.max_n.min(field.q() as usize) {
        for k in n / 2 + 1..n {
            match quantum_rs(field, n, k, k) {
                Ok(p) => out.push((format!("RS({n},{k})"), SingleSectorComplex::from_css(&p.qx, &p.qz)?)),
                Err(Error::NotOrthogonal(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let mut tries = 0;
    while out.len() < cfg.random_per_field + 4 && tries < 10 * cfg.random_per_field {
        tries += 1;
        let n = rng.gen_range(3..=cfg.max_n);
        // dim Q_X = n − a = a + b
        let a = rng.gen_range(1..=(n - 1) / 2);
        let b = n - 2 * a;
        if b == 0 {
            continue;
        }
        let p = random_css(field, n, a, b, rng)?;
        out.push((format!("random[{n},{a},{b}]"), SingleSectorComplex::from_css(&p.qx, &p.qz)?));
    }
    Ok(out)
}

/// Every ordered pair of small characteristic-2 complexes.
pub fn homological_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut report = SweepReport::default();
    for q in [2u64, 4, 8] {
        let f = Field::of_order(q)?;
        let cs = complexes(&f, cfg, &mut rng)?;
        let labels: Vec<String> = cs.iter().map(|(l, _)| l.clone()).collect();
        for (i, (_, a)) in cs.iter().enumerate() {
            for (j, (_, b)) in cs.iter().enumerate() {
                let seed = cfg.seed.wrapping_add(i as u64);
                let Some(c) = homological_bound(a, b, cfg.pe_budget, cfg.dist_budget, cfg.filling_trials, seed)? else {
                    report.skipped_pe += 1;
                    continue;
                };
                report.records.push(SweepRecord {
                    family: "complex x complex".into(),
                    q,
                    factors: vec![labels[i].clone(), labels[j].clone()],
                    lengths: c.lengths.to_vec(),
                    bound: c.bound_f64(),
                    distance: c.distance,
                    status: c.status,
                    filling: c.filling.as_ref().map(|fc| (ratio_f64(fc.estimate), ratio_f64(fc.bound), fc.status)),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_treats_infinity_and_inexact() {
        let b = Ratio::new(7, 2);
        assert_eq!(compare(None, true, b), BoundStatus::Holds);
        assert_eq!(compare(Some(3), true, b), BoundStatus::Violated);
        assert_eq!(compare(Some(4), true, b), BoundStatus::Holds);
        assert_eq!(compare(Some(1), false, b), BoundStatus::Inexact);
    }

    #[test]
    fn random_css_dimensions() {
        let f = Field::of_order(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_css(&f, 7, 2, 3, &mut rng).unwrap();
        assert_eq!((p.qx.dim(), p.qz.dim(), p.dim()), (5, 5, 3));
    }
}
