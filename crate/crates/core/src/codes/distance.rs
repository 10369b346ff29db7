use itertools::Itertools;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LinearCode;
use crate::algebra::{weight, EchelonBasis, Field, Gf, Matrix};

/// Default number of vectors an exhaustive search may visit.
pub const DEFAULT_DISTANCE_BUDGET: u64 = 2_000_000;

const ISD_ROUNDS: usize = 400;

/// Minimum weight; `value = None` stands for +∞ (no candidate vector).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: Option<usize>,
    /// False when the value is an information-set estimate (an upper bound).
    pub exact: bool,
    pub witness: Option<Vec<Gf>>,
}

impl DistanceResult {
    pub fn infinite() -> Self {
        DistanceResult {
            value: None,
            exact: true,
            witness: None,
        }
    }
}

/// Minimum distance of `c`.
pub fn min_distance(c: &LinearCode, budget: u64) -> DistanceResult {
    coset_min_distance(c, &LinearCode::zero(c.field(), c.len()), budget)
}

fn saturating_pow(q: u64, k: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(q);
    }
    acc
}

/// Number of vectors visited by an exhaustive search over `(V+U) \ U`.
pub fn coset_search_size(q: u64, logical: usize, gauge: usize) -> u64 {
    if logical == 0 {
        return 0;
    }
    let proj = (saturating_pow(q, logical) - 1) / (q - 1);
    proj.saturating_mul(saturating_pow(q, gauge))
}

/// Minimum weight of a vector in `(V+U) \ U`.
pub fn coset_min_distance(v: &LinearCode, u: &LinearCode, budget: u64) -> DistanceResult {
    let f = v.field();
    let n = v.len();
    let gauge: Vec<Vec<Gf>> = u.generator().row_vecs();
    let mut b = EchelonBasis::from_matrix(u.generator());
    let mut logical = Vec::new();
    for i in 0..v.dim() {
        if b.insert(v.generator().row(i)) {
            logical.push(v.generator().row(i).to_vec());
        }
    }
    if logical.is_empty() {
        return DistanceResult::infinite();
    }
    let q = f.q() as u64;
    if coset_search_size(q, logical.len(), gauge.len()) <= budget {
        let (w, vec) = exhaustive(f, n, &logical, &gauge);
        return DistanceResult {
            value: Some(w),
            exact: true,
            witness: Some(vec),
        };
    }
    if let Ok(vv) = v.sum(u) {
        if let Some((w, vec)) = support_search(&vv, u, budget) {
            return DistanceResult {
                value: Some(w),
                exact: true,
                witness: Some(vec),
            };
        }
    }
    let (w, vec) = isd_estimate(f, &logical, &gauge, u);
    DistanceResult {
        value: Some(w),
        exact: false,
        witness: Some(vec),
    }
}

/// Smallest support S with (V ∩ F^S) ⊄ U, found by increasing |S|.
/// Such an S exists iff rank H_V[:,S] < rank H_U[:,S]. Exact; gives up
/// (None) once the number of supports to try would exceed `budget`.
fn support_search(v: &LinearCode, u: &LinearCode, budget: u64) -> Option<(usize, Vec<Gf>)> {
    let n = v.len();
    let hv = v.parity_check();
    let hu = u.parity_check();
    let cols_v: Vec<Vec<Gf>> = (0..n).map(|j| hv.column(j)).collect();
    let cols_u: Vec<Vec<Gf>> = (0..n).map(|j| hu.column(j)).collect();
    let f = v.field();
    let mut spent = 0u64;
    for w in 1..=n {
        spent = spent.saturating_add(binomial(n, w));
        if spent > budget {
            return None;
        }
        let hit = (0..n).into_par_iter().find_map_any(|first| {
            let mut bv = EchelonBasis::new(f, hv.rows());
            let mut bu = EchelonBasis::new(f, hu.rows());
            bv.insert(&cols_v[first]);
            bu.insert(&cols_u[first]);
            let mut support = vec![first];
            find_support(&cols_v, &cols_u, w, &mut support, &bv, &bu)
        });
        if let Some(s) = hit {
            let sub = hv.select_cols(&s);
            let ker = sub.kernel();
            for i in 0..ker.rows() {
                let mut x = vec![Gf::ZERO; n];
                for (k, &j) in s.iter().enumerate() {
                    x[j] = ker.get(i, k);
                }
                if !u.contains(&x) {
                    return Some((weight(&x), x));
                }
            }
            unreachable!("rank gap guarantees a vector outside U");
        }
    }
    None
}

fn find_support(
    cols_v: &[Vec<Gf>],
    cols_u: &[Vec<Gf>],
    w: usize,
    support: &mut Vec<usize>,
    bv: &EchelonBasis,
    bu: &EchelonBasis,
) -> Option<Vec<usize>> {
    if support.len() == w {
        return (bv.len() < bu.len()).then(|| support.clone());
    }
    let last = *support.last().expect("support starts nonempty");
    let need = w - support.len();
    for j in last + 1..=cols_v.len() - need {
        let mut nv = bv.clone();
        let mut nu = bu.clone();
        nv.insert(&cols_v[j]);
        nu.insert(&cols_u[j]);
        support.push(j);
        let found = find_support(cols_v, cols_u, w, support, &nv, &nu);
        support.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

struct Task {
    offset: Vec<Gf>,
    basis_start: usize,
}

fn exhaustive(f: &Field, n: usize, logical: &[Vec<Gf>], gauge: &[Vec<Gf>]) -> (usize, Vec<Gf>) {
    let q = f.q() as usize;
    let mut tasks = Vec::new();
    // Projective enumeration: the first nonzero logical coordinate is 1.
    for i in 0..logical.len() {
        let mut basis: Vec<&Vec<Gf>> = logical[i + 1..].iter().collect();
        basis.extend(gauge.iter());
        let mut partial = vec![(logical[i].clone(), 0usize)];
        // split leading digits until there is enough parallel work
        while partial.len() < 256 && partial[0].1 < basis.len() {
            let mut next = Vec::with_capacity(partial.len() * q);
            for (off, depth) in partial {
                for d in 0..q {
                    let mut o = off.clone();
                    f.axpy(&mut o, Gf(d as u32), basis[depth]);
                    next.push((o, depth + 1));
                }
            }
            partial = next;
        }
        for (offset, depth) in partial {
            tasks.push((i, Task { offset, basis_start: depth }));
        }
    }
    let results: Vec<(usize, Vec<Gf>)> = tasks
        .par_iter()
        .map(|(i, t)| {
            let mut basis: Vec<&[Gf]> = logical[i + 1..].iter().map(|v| v.as_slice()).collect();
            basis.extend(gauge.iter().map(|v| v.as_slice()));
            min_weight_affine(f, &t.offset, &basis[t.basis_start..], 1)
        })
        .collect();
    let mut best = (n + 1, vec![]);
    for r in results {
        if r.0 < best.0 {
            best = r;
        }
    }
    best
}

/// Minimum weight over `offset + span(basis)` by odometer enumeration.
/// Stops early once a weight `<= floor` is seen.
pub(crate) fn min_weight_affine(
    f: &Field,
    offset: &[Gf],
    basis: &[&[Gf]],
    floor: usize,
) -> (usize, Vec<Gf>) {
    let q = f.q();
    let mut cur = offset.to_vec();
    let mut best_w = weight(&cur);
    let mut best = cur.clone();
    if basis.is_empty() || best_w <= floor {
        return (best_w, best);
    }
    let mut digits = vec![0u32; basis.len()];
    loop {
        let mut j = 0;
        loop {
            if j == digits.len() {
                return (best_w, best);
            }
            let old = Gf(digits[j]);
            digits[j] = (digits[j] + 1) % q;
            let delta = f.sub(Gf(digits[j]), old);
            f.axpy(&mut cur, delta, basis[j]);
            if digits[j] != 0 {
                break;
            }
            j += 1;
        }
        let w = weight(&cur);
        if w < best_w {
            best_w = w;
            best.copy_from_slice(&cur);
            if best_w <= floor {
                return (best_w, best);
            }
        }
    }
}

fn isd_estimate(
    f: &Field,
    logical: &[Vec<Gf>],
    gauge: &[Vec<Gf>],
    u: &LinearCode,
) -> (usize, Vec<Gf>) {
    let n = logical[0].len();
    let mut rows: Vec<Vec<Gf>> = logical.to_vec();
    rows.extend(gauge.iter().cloned());
    let g = Matrix::from_rows(f, n, &rows);
    let mut rng = ChaCha8Rng::seed_from_u64(0x15d);
    let mut best = (n + 1, vec![Gf::ZERO; n]);
    let consider = |v: &[Gf], best: &mut (usize, Vec<Gf>)| {
        let w = weight(v);
        if w > 0 && w < best.0 && !u.contains(v) {
            *best = (w, v.to_vec());
        }
    };
    for _ in 0..ISD_ROUNDS {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let e = g.select_cols(&perm).rref();
        let mut unperm = vec![0; n];
        for (j, &p) in perm.iter().enumerate() {
            unperm[p] = j;
        }
        let sys: Vec<Vec<Gf>> = (0..e.basis.rows())
            .map(|r| (0..n).map(|c| e.basis.get(r, unperm[c])).collect())
            .collect();
        for r in &sys {
            consider(r, &mut best);
        }
        for [a, b] in sys.iter().array_combinations() {
            let s = f.random_nonzero(&mut rng);
            let mut v = a.clone();
            f.axpy(&mut v, s, b);
            consider(&v, &mut best);
        }
    }
    best
}

/// MDS test on the smaller of the code and its dual.
pub fn is_mds(c: &LinearCode) -> bool {
    let (n, k) = (c.len(), c.dim());
    if k == 0 || k == n {
        return true;
    }
    let small = if k <= n - k { c.clone() } else { c.dual() };
    let kk = small.dim();
    if binomial(n, kk) <= 1_000_000 {
        let g = small.generator();
        return (0..n)
            .combinations(kk)
            .par_bridge()
            .all(|cols| g.select_cols(&cols).rank() == kk);
    }
    min_distance(c, DEFAULT_DISTANCE_BUDGET).value == Some(n - k + 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Empirical local-testability ratio of a check matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoundnessEstimate {
    /// Minimum of (|He|/m) / (|e|/n) over sampled errors with He ≠ 0.
    pub rho: f64,
    pub samples: usize,
    pub excluded: usize,
    pub worst_error: Vec<Gf>,
    pub note: String,
}

/// Monte-Carlo soundness ratio of `h` with errors of weight 1..=max_weight.
/// The injected weight stands in for the coset-minimal weight, so the result
/// upper-bounds the true soundness only when injected errors are
/// coset-minimal.
pub fn ltc_soundness_estimate(
    h: &Matrix,
    trials: usize,
    max_weight: usize,
    seed: u64,
) -> SoundnessEstimate {
    let f = h.field();
    let (m, n) = (h.rows(), h.cols());
    let max_weight = max_weight.clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rho = f64::INFINITY;
    let mut worst = vec![Gf::ZERO; n];
    let mut excluded = 0;
    for _ in 0..trials {
        let w = rng.gen_range(1..=max_weight);
        let mut e = vec![Gf::ZERO; n];
        for i in sample(&mut rng, n, w) {
            e[i] = f.random_nonzero(&mut rng);
        }
        let s = h.mul_vec(&e);
        let sw = weight(&s);
        if sw == 0 {
            excluded += 1;
            continue;
        }
        let ratio = (sw as f64 / m as f64) / (w as f64 / n as f64);
        if ratio < rho {
            rho = ratio;
            worst = e;
        }
    }
    SoundnessEstimate {
        rho,
        samples: trials,
        excluded,
        worst_error: worst,
        note: "injected weight used as coset weight; upper estimate".into(),
    }
}
