//! Triple product of punctured tensor RS quantum codes with a transversal CCZ.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{synthesize_gate_factored, GateInstance};
use crate::algebra::{Field, Gf};
use crate::codes::{exponent_box, sample_points, EvalCode, LinearCode};
use crate::error::{Error, Result};
use crate::subsystem::CssPair;

/// Random dual-space shifts tried per γ_i before giving up.
pub const GAMMA_RETRIES: usize = 64;

/// Below this m the construction runs outside the analysed regime.
const NOMINAL_MIN_M: usize = 100;

/// k-parameters and L window with k₀ = ⌊m/4⌋ and ε = 1/100.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleParams {
    pub m: usize,
    pub u: usize,
    pub n: usize,
    pub k0: usize,
    pub kx: [usize; 3],
    pub kz: [usize; 3],
    pub l_lo: usize,
    pub l_hi: usize,
    /// (ℓ̄ − ℓ̲)^u.
    pub window_dim: usize,
    pub degraded: bool,
    pub empty_window: bool,
}

pub fn triple_params(m: usize, u: usize) -> Result<TripleParams> {
    if m < 8 || u == 0 {
        return Err(Error::Contract(format!("need m >= 8 and u >= 1, got m={m} u={u}")));
    }
    let n = m
        .checked_pow(u as u32)
        .ok_or_else(|| Error::Budget(format!("m^u overflows for m={m} u={u}")))?;
    let k0 = m / 4;
    let kx = k0 / 100;
    let l_lo = (97 * k0).div_ceil(300);
    let l_hi = k0 / 3;
    let width = l_hi.saturating_sub(l_lo);
    Ok(TripleParams {
        m,
        u,
        n,
        k0,
        kx: [kx; 3],
        kz: [2 * k0 / 3, 2 * k0 / 3, k0 / 3],
        l_lo,
        l_hi,
        window_dim: width.pow(u as u32),
        degraded: m < NOMINAL_MIN_M,
        empty_window: width == 0,
    })
}

/// Smallest m ≥ 8 whose window [ℓ̲, ℓ̄) is nonempty (independent of u).
pub fn smallest_window_m() -> usize {
    (8..)
        .find(|&m| triple_params(m, 1).is_ok_and(|p| !p.empty_window))
        .expect("the window eventually opens")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// A factor-wise certificate was found.
    Holds,
    /// No certificate within the search budget; the property may still hold.
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct TripleProduct {
    pub params: TripleParams,
    pub points: Vec<Vec<Vec<Gf>>>,
    pub gammas: Vec<Vec<Gf>>,
    /// Random shifts used per γ_i.
    pub gamma_attempts: Vec<usize>,
    pub gamma_valid: bool,
    pub factors: Vec<CssPair>,
    pub logical: Vec<LinearCode>,
    pub verdict: Verdict,
    pub gate: Option<GateInstance>,
}

/// Index of (k₀,…,k₀) in the lexicographic box [0, 2k₀]^u.
fn center_index(u: usize, k0: usize) -> usize {
    (0..u).fold(0, |acc, _| acc * (2 * k0 + 1) + k0)
}

fn window(u: usize, lo: usize, hi: usize) -> Vec<Vec<u32>> {
    exponent_box(u, hi.saturating_sub(lo))
        .into_iter()
        .map(|e| e.into_iter().map(|a| a + lo as u32).collect())
        .collect()
}

/// γ·ev(X^ℓ) = [ℓ = (k₀,…,k₀)] over ℓ ∈ [0, 2k₀]^u, with every entry nonzero.
fn solve_gamma(
    field: &Field,
    points: &[Vec<Gf>],
    p: &TripleParams,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Gf>, usize)> {
    let ev = EvalCode::new(field, points.to_vec(), exponent_box(p.u, 2 * p.k0 + 1));
    let g = ev.code.generator();
    if g.rows() != ev.nominal_dim() {
        return Err(Error::Inconsistent("monomial evaluations are dependent".into()));
    }
    // EvalCode keeps the rows in exponent order when they are independent
    let mut rhs = vec![Gf::ZERO; g.rows()];
    rhs[center_index(p.u, p.k0)] = Gf::ONE;
    let g0 = g
        .solve(&rhs)
        .ok_or_else(|| Error::Inconsistent("no solution for γ".into()))?;
    let dual = g.kernel();
    for attempt in 1..=GAMMA_RETRIES {
        let coeffs = field.random_vec(dual.rows(), rng);
        let gamma = field.add_vec(&g0, &dual.vec_mul(&coeffs));
        if gamma.iter().all(|x| !x.is_zero()) {
            return Ok((gamma, attempt));
        }
    }
    Err(Error::NotFound(format!(
        "no all-nonzero γ in {GAMMA_RETRIES} attempts"
    )))
}

/// Checks the γ equations exactly and that no entry vanishes.
pub fn gamma_satisfies(field: &Field, points: &[Vec<Gf>], p: &TripleParams, gamma: &[Gf]) -> bool {
    let ev = EvalCode::new(field, points.to_vec(), exponent_box(p.u, 2 * p.k0 + 1));
    let center = center_index(p.u, p.k0);
    gamma.iter().all(|x| !x.is_zero())
        && ev.exponents.iter().enumerate().all(|(k, e)| {
            let row: Vec<Gf> = points
                .iter()
                .map(|x| {
                    e.iter()
                        .zip(x)
                        .fold(Gf::ONE, |acc, (&a, &v)| field.mul(acc, field.pow(v, a as u64)))
                })
                .collect();
            field.dot(&row, gamma) == if k == center { Gf::ONE } else { Gf::ZERO }
        })
}

/// Builds Q¹, Q², Q³ and L_i, then tries to certify and synthesize the gate.
pub fn triple_product_build(field: &Field, m: usize, u: usize, seed: u64) -> Result<TripleProduct> {
    let params = triple_params(m, u)?;
    if m > field.q() as usize {
        return Err(Error::Contract(format!("m = {m} exceeds q = {}", field.q())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(3);
    let mut gammas = Vec::with_capacity(3);
    let mut attempts = Vec::with_capacity(3);
    for _ in 0..3 {
        let e = sample_points(field, u, params.n, &mut rng)?;
        let (g, a) = solve_gamma(field, &e, &params, &mut rng)?;
        points.push(e);
        gammas.push(g);
        attempts.push(a);
    }
    let gamma_valid = (0..3).all(|i| gamma_satisfies(field, &points[i], &params, &gammas[i]));
    let mut factors = Vec::with_capacity(3);
    let mut logical = Vec::with_capacity(3);
    for i in 0..3 {
        let e = &points[i];
        let ev = |k: usize| EvalCode::new(field, e.clone(), exponent_box(u, k)).code;
        let qx = ev(params.kx[i]).dual().with_label(format!("Q{}_X", i + 1));
        let qz = if i < 2 {
            ev(params.kz[i]).scaled(&gammas[i])?.dual()
        } else {
            ev(params.kz[i])
        }
        .with_label(format!("Q{}_Z", i + 1));
        factors.push(CssPair::new(qx, qz)?);
        logical.push(
            EvalCode::new(field, e.clone(), window(u, params.l_lo, params.l_hi))
                .code
                .with_label(format!("L{}", i + 1)),
        );
    }
    let (verdict, gate) = match synthesize_gate_factored(&factors, &logical, 3) {
        Ok(g) => (Verdict::Holds, Some(g)),
        Err(Error::NotFound(_)) => (Verdict::Undetermined, None),
        Err(e) => return Err(e),
    };
    Ok(TripleProduct {
        params,
        points,
        gammas,
        gamma_attempts: attempts,
        gamma_valid,
        factors,
        logical,
        verdict,
        gate,
    })
}
