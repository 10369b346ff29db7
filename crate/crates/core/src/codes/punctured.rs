use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LinearCode;
use crate::algebra::{Field, Gf, Matrix};
use crate::error::{Error, Result};

/// Largest `q^u` for which sampling enumerates the whole space.
const ENUMERATION_LIMIT: u64 = 1 << 22;

/// Evaluation code ev_S(F[X_1..X_t]^A).
#[derive(Clone, Debug)]
pub struct EvalCode {
    pub code: LinearCode,
    pub points: Vec<Vec<Gf>>,
    pub exponents: Vec<Vec<u32>>,
}

impl EvalCode {
    /// Rows ev_S(X^a) for a in `exponents`; dependent rows are dropped.
    pub fn new(field: &Field, points: Vec<Vec<Gf>>, exponents: Vec<Vec<u32>>) -> Self {
        let n = points.len();
        let g = Matrix::from_fn(field, exponents.len(), n, |r, j| {
            exponents[r]
                .iter()
                .zip(&points[j])
                .fold(Gf::ONE, |acc, (&a, &x)| field.mul(acc, field.pow(x, a as u64)))
        });
        let code = LinearCode::new(g, format!("ev(|A|={},n={n})", exponents.len()));
        EvalCode {
            code,
            points,
            exponents,
        }
    }

    /// Dimension expected when no evaluation dependency occurs.
    pub fn nominal_dim(&self) -> usize {
        self.exponents.len()
    }
}

/// `n` distinct points of F_q^u, uniformly without replacement.
pub fn sample_points<R: Rng + ?Sized>(
    field: &Field,
    u: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Vec<Gf>>> {
    let q = field.q() as u64;
    let total = q.checked_pow(u as u32);
    if total.is_some_and(|t| (n as u64) > t) {
        return Err(Error::Contract(format!("{n} points requested from a space of size {}", total.unwrap())));
    }
    let decode = |mut idx: u64| -> Vec<Gf> {
        (0..u)
            .map(|_| {
                let d = idx % q;
                idx /= q;
                field.point(d as usize)
            })
            .collect()
    };
    match total {
        Some(t) if t <= ENUMERATION_LIMIT => {
            let mut all: Vec<u64> = (0..t).collect();
            for i in 0..n {
                let j = rng.gen_range(i..all.len());
                all.swap(i, j);
            }
            Ok(all[..n].iter().map(|&i| decode(i)).collect())
        }
        _ => {
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let p: Vec<Gf> = (0..u).map(|_| field.random(rng)).collect();
                if seen.insert(p.clone()) {
                    out.push(p);
                }
            }
            Ok(out)
        }
    }
}

/// Exponent box [0, k)^u in lexicographic order.
pub fn exponent_box(u: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..u {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..k as u32).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Evaluation of the exponent box [0,k)^u on n = m^u points of F_q^u.
pub fn punctured_tensor_rs(
    field: &Field,
    m: usize,
    u: usize,
    k: usize,
    points: Option<Vec<Vec<Gf>>>,
    seed: u64,
) -> Result<EvalCode> {
    if k == 0 || k > m || m > field.q() as usize {
        return Err(Error::Contract(format!(
            "need 1 <= k <= m <= q, got k={k} m={m} q={}",
            field.q()
        )));
    }
    let n = m.pow(u as u32);
    let points = match points {
        Some(p) => {
            if p.len() != n || p.iter().any(|x| x.len() != u) {
                return Err(Error::Contract(format!("expected {n} points of arity {u}")));
            }
            p
        }
        None => sample_points(field, u, n, &mut ChaCha8Rng::seed_from_u64(seed))?,
    };
    let mut e = EvalCode::new(field, points, exponent_box(u, k));
    e.code = e.code.with_label(format!("ptRS(m={m},u={u},k={k})"));
    Ok(e)
}
