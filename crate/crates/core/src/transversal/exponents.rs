//! Two-factor Reed-Solomon instances and their exponent-set check.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{synthesize_gate, GateInstance};
use crate::algebra::{Field, Gf};
use crate::codes::{EvalCode, LinearCode};
use crate::error::{Error, Result};
use crate::subsystem::{quantum_rs, CssPair};

/// Parameters of the RS-pair gate: ε = 1/(4r), q ≥ 4r².
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransRsParams {
    pub r: usize,
    pub q: usize,
    /// ε = 1 / eps_den.
    pub eps_den: usize,
    pub kx: [usize; 2],
    pub kz: [usize; 2],
    pub l_lo: usize,
    pub l_hi: usize,
    /// (k¹_X + k¹_Z − q)(k²_X + k²_Z − q).
    pub dimension: usize,
    /// (ℓ̄ − ℓ̲)².
    pub gate_qudits: usize,
    pub locality: usize,
}

impl TransRsParams {
    pub fn eps(&self) -> f64 {
        1.0 / self.eps_den as f64
    }

    /// Same codes with a different L window.
    pub fn with_window(&self, lo: usize, hi: usize) -> Self {
        let mut p = self.clone();
        p.l_lo = lo;
        p.l_hi = hi;
        p.gate_qudits = hi.saturating_sub(lo).pow(2);
        p
    }
}

pub fn transrs_params(r: usize, q: usize) -> Result<TransRsParams> {
    if r < 2 {
        return Err(Error::Contract(format!("gate arity {r} < 2")));
    }
    if q < 4 * r * r {
        return Err(Error::Contract(format!("q = {q} < 4r² = {}", 4 * r * r)));
    }
    let eps_den = 4 * r;
    let eq = q / eps_den;
    let kx = [q - eq, q - 2 * eq];
    let kz = [q - eq, q / r];
    // ⌈q/r − q/(2r²)⌉ = ⌈(2r−1)q / 2r²⌉
    let l_lo = ((2 * r - 1) * q).div_ceil(2 * r * r);
    let l_hi = q / r;
    Ok(TransRsParams {
        r,
        q,
        eps_den,
        kx,
        kz,
        l_lo,
        l_hi,
        dimension: (kx[0] + kz[0] - q) * (kx[1] + kz[1] - q),
        gate_qudits: l_hi.saturating_sub(l_lo).pow(2),
        locality: 2 * q,
    })
}

/// Factors (RS(q,k^i_X), RS(q,k^i_Z)) over all of F_q and L_1 = L_2 = ev(X^ℓ : ℓ̲ ≤ ℓ < ℓ̄).
pub fn transrs_codes(p: &TransRsParams) -> Result<(Field, Vec<CssPair>, Vec<LinearCode>)> {
    let f = Field::of_order(p.q as u64)?;
    let factors = (0..2)
        .map(|i| quantum_rs(&f, p.q, p.kx[i], p.kz[i]))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<Vec<Gf>> = f.points(p.q).into_iter().map(|x| vec![x]).collect();
    let exps: Vec<Vec<u32>> = (p.l_lo..p.l_hi.max(p.l_lo)).map(|e| vec![e as u32]).collect();
    let l = EvalCode::new(&f, points, exps).code.with_label(format!("L[{},{})", p.l_lo, p.l_hi));
    Ok((f, factors, vec![l.clone(), l]))
}

pub fn transrs_gate(p: &TransRsParams) -> Result<GateInstance> {
    let (_, factors, logical) = transrs_codes(p)?;
    synthesize_gate(&factors, &logical, p.r)
}

/// A point of rM that also lies in T + (M∪T)^{+(r-1)}, after reducing
/// exponents modulo x^q = x.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentWitness {
    pub point: [usize; 2],
    /// r points of M summing to `point` (before reduction).
    pub from_m: Vec<[usize; 2]>,
    /// One point of T then r−1 points of M∪T summing to `point`.
    pub from_t: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub empty: bool,
    pub witness: Option<ExponentWitness>,
    /// Number of sum boxes examined.
    pub boxes: usize,
}

type Range = (usize, usize); // inclusive
type Rect = [Range; 2];

/// x^e as a function on F_q equals x^{red(e)} with red(e) ∈ [0, q−1].
fn reduce(e: usize, q: usize) -> usize {
    if e < q {
        e
    } else {
        (e - 1) % (q - 1) + 1
    }
}

fn reduced_set(r: Range, q: usize) -> Vec<bool> {
    let mut out = vec![false; q];
    for e in r.0..=r.1 {
        out[reduce(e, q)] = true;
        if e >= r.0 + q {
            break;
        }
    }
    out
}

fn sum_range(parts: &[Range]) -> Range {
    parts.iter().fold((0, 0), |acc, p| (acc.0 + p.0, acc.1 + p.1))
}

/// Raw values in each part summing to some e with red(e) = target.
fn split(parts: &[Range], target: usize, q: usize) -> Option<Vec<usize>> {
    let total = sum_range(parts);
    let e = (total.0..=total.1).find(|&e| reduce(e, q) == target)?;
    let mut rest = e - total.0;
    Some(
        parts
            .iter()
            .map(|p| {
                let add = rest.min(p.1 - p.0);
                rest -= add;
                p.0 + add
            })
            .collect(),
    )
}

fn points(rects: &[Rect], point: [usize; 2], q: usize) -> Option<Vec<[usize; 2]>> {
    let xs: Vec<Range> = rects.iter().map(|r| r[0]).collect();
    let ys: Vec<Range> = rects.iter().map(|r| r[1]).collect();
    let a = split(&xs, point[0], q)?;
    let b = split(&ys, point[1], q)?;
    Some(a.into_iter().zip(b).map(|(x, y)| [x, y]).collect())
}

/// Decides rM ∩ (T + (M∪T)^{+(r−1)}) = ∅ by box arithmetic, where
/// M = [ℓ̲,ℓ̄)² and T is the exponent set of S = Q_Z ∩ Q_X^⊥.
pub fn exponent_set_check(p: &TransRsParams) -> ExponentCheck {
    let q = p.q;
    let r = p.r;
    let mut check = ExponentCheck {
        empty: true,
        witness: None,
        boxes: 0,
    };
    if p.l_lo >= p.l_hi {
        return check;
    }
    let m: Rect = [(p.l_lo, p.l_hi - 1), (p.l_lo, p.l_hi - 1)];
    let perp = [q - p.kx[0], q - p.kx[1]];
    let t: Vec<Rect> = [
        (p.kz[0], p.kz[1].min(perp[1])),
        (p.kz[0].min(perp[0]), p.kz[1]),
    ]
    .into_iter()
    .filter(|&(a, b)| a > 0 && b > 0)
    .map(|(a, b)| [(0, a - 1), (0, b - 1)])
    .collect();
    let rm = [
        reduced_set((r * m[0].0, r * m[0].1), q),
        reduced_set((r * m[1].0, r * m[1].1), q),
    ];
    let mut pool = vec![m];
    pool.extend(t.iter().copied());
    for first in &t {
        for rest in pool.iter().combinations_with_replacement(r - 1) {
            check.boxes += 1;
            let mut rects = vec![*first];
            rects.extend(rest.into_iter().copied());
            let hit: Vec<Option<usize>> = (0..2)
                .map(|c| {
                    let parts: Vec<Range> = rects.iter().map(|x| x[c]).collect();
                    let set = reduced_set(sum_range(&parts), q);
                    (0..q).find(|&e| set[e] && rm[c][e])
                })
                .collect();
            if let [Some(x), Some(y)] = hit[..] {
                let point = [x, y];
                check.empty = false;
                check.witness = Some(ExponentWitness {
                    point,
                    from_m: points(&vec![m; r], point, q).expect("point lies in rM"),
                    from_t: points(&rects, point, q).expect("point lies in the sum box"),
                });
                return check;
            }
        }
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_wraps_to_nonzero_exponents() {
        assert_eq!(reduce(0, 5), 0);
        assert_eq!(reduce(4, 5), 4);
        assert_eq!(reduce(5, 5), 1);
        assert_eq!(reduce(8, 5), 4);
        assert_eq!(reduce(9, 5), 1);
    }

    #[test]
    fn split_hits_target() {
        let parts = [(0, 3), (5, 6)];
        let v = split(&parts, 8, 11).unwrap();
        assert_eq!(v.iter().sum::<usize>(), 8);
        assert!(split(&parts, 2, 11).is_none());
    }
}
