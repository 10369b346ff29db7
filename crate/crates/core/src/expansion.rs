//! Product-expansion of code tuples, ε-closures and inner-generated sets.

use std::ops::ControlFlow;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{weight, Field, Gf, Matrix};
use crate::codes::{min_distance, LinearCode, TensorIndex, DEFAULT_DISTANCE_BUDGET};
use crate::error::{Error, Result};

/// Default number of (codeword, decomposition) pairs visited by [`pe_exact`].
pub const PE_EXACT_BUDGET: u64 = 20_000_000;

/// Kernel sizes up to this are minimized exhaustively by [`pe_monte_carlo`].
const INNER_EXACT_LIMIT: u64 = 1 << 14;

/// c = c_1 + ... + c_t with c_i ∈ C^{(i)}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<Vec<Gf>>,
    /// |c_i|_i, the number of nonzero direction-i columns of c_i.
    pub column_weights: Vec<usize>,
}

impl Decomposition {
    /// Σ n_i |c_i|_i
    pub fn norm(&self, dims: &[usize]) -> usize {
        self.column_weights.iter().zip(dims).map(|(w, n)| w * n).sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeWitness {
    pub codeword: Vec<Gf>,
    pub decomposition: Decomposition,
}

#[derive(Clone, Debug)]
pub struct PeResult {
    pub rho: Ratio<u64>,
    pub witness: PeWitness,
}

#[derive(Clone, Debug)]
pub struct PeEstimate {
    /// Upper estimate of ρ when every decomposition was minimized exactly.
    pub rho: Ratio<u64>,
    pub witness: PeWitness,
    pub candidates: usize,
    /// Every codeword of the dual tensor code was examined.
    pub all_codewords: bool,
    /// Every decomposition minimum was exhaustive.
    pub exact_decompositions: bool,
}

/// Concatenated decomposition space C^{(1)} × ... × C^{(t)} split as W ⊕ K,
/// with K the kernel of the sum map.
struct TupleSpace {
    field: Field,
    dims: Vec<usize>,
    size: usize,
    /// Direction-i column id of every cell.
    column_ids: Vec<Vec<usize>>,
    column_counts: Vec<usize>,
    gens: Vec<Matrix>,
    w: Vec<Vec<Gf>>,
    k: Vec<Vec<Gf>>,
}

/// Generator of C^{(i)} = F ⊗ .. ⊗ C_i ⊗ .. ⊗ F.
fn axis_generator(f: &Field, dims: &[usize], axis: usize, g: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::identity(f, 1);
    for (j, &n) in dims.iter().enumerate() {
        out = if j == axis {
            out.kron(g)?
        } else {
            out.kron(&Matrix::identity(f, n))?
        };
    }
    Ok(out)
}

fn check_tuple(codes: &[&LinearCode]) -> Result<Field> {
    let first = codes
        .first()
        .ok_or_else(|| Error::Contract("empty code tuple".into()))?;
    if codes.iter().any(|c| c.field() != first.field()) {
        return Err(Error::FieldMismatch);
    }
    Ok(first.field().clone())
}

impl TupleSpace {
    fn new(codes: &[&LinearCode]) -> Result<Self> {
        let field = check_tuple(codes)?;
        let dims: Vec<usize> = codes.iter().map(|c| c.len()).collect();
        let idx = TensorIndex::new(&dims);
        let size = idx.size();
        let t = dims.len();
        let gens = (0..t)
            .map(|i| axis_generator(&field, &dims, i, codes[i].generator()))
            .collect::<Result<Vec<_>>>()?;
        let column_ids = (0..t)
            .map(|i| (0..size).map(|x| idx.column_of(i, x)).collect())
            .collect();
        let column_counts = (0..t).map(|i| idx.column_count(i)).collect();
        let mut stacked = Matrix::zeros(&field, 0, size);
        for g in &gens {
            stacked = stacked.vstack(g)?;
        }
        let kernel = stacked.left_kernel();
        let ech = kernel.rref();
        let mut space = TupleSpace {
            field,
            dims,
            size,
            column_ids,
            column_counts,
            gens,
            w: Vec::new(),
            k: Vec::new(),
        };
        let d = stacked.rows();
        let mut is_pivot = vec![false; d];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        space.w = (0..d)
            .filter(|&r| !is_pivot[r])
            .map(|r| {
                let mut a = vec![Gf::ZERO; d];
                a[r] = Gf::ONE;
                space.tuple_of(&a)
            })
            .collect();
        space.k = ech.basis.row_vecs().iter().map(|a| space.tuple_of(a)).collect();
        Ok(space)
    }

    fn arity(&self) -> usize {
        self.dims.len()
    }

    /// Tuple vector (length t·N) of a coefficient vector over the stacked generators.
    fn tuple_of(&self, coeffs: &[Gf]) -> Vec<Gf> {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.arity() * self.size);
        let mut off = 0;
        for g in &self.gens {
            let part = g.vec_mul(&coeffs[off..off + g.rows()]);
            off += g.rows();
            out.extend(part);
        }
        debug_assert!(out.iter().all(|&x| f.contains(x)));
        out
    }

    fn sum(&self, tuple: &[Gf]) -> Vec<Gf> {
        let mut c = vec![Gf::ZERO; self.size];
        for part in tuple.chunks(self.size) {
            self.field.axpy(&mut c, Gf::ONE, part);
        }
        c
    }

    fn column_weights(&self, tuple: &[Gf], stamp: &mut [u32], epoch: &mut u32) -> Vec<usize> {
        tuple
            .chunks(self.size)
            .enumerate()
            .map(|(i, part)| {
                *epoch += 1;
                let mut w = 0;
                for (x, v) in part.iter().enumerate() {
                    if *v != Gf::ZERO {
                        let c = self.column_ids[i][x];
                        if stamp[c] != *epoch {
                            stamp[c] = *epoch;
                            w += 1;
                        }
                    }
                }
                w
            })
            .collect()
    }

    fn norm(&self, tuple: &[Gf], stamp: &mut [u32], epoch: &mut u32) -> usize {
        let w = self.column_weights(tuple, stamp, epoch);
        w.iter().zip(&self.dims).map(|(a, b)| a * b).sum()
    }

    fn stamp_buffer(&self) -> Vec<u32> {
        vec![0; self.column_counts.iter().copied().max().unwrap_or(0)]
    }

    fn decomposition(&self, tuple: &[Gf]) -> Decomposition {
        let mut stamp = self.stamp_buffer();
        let mut epoch = 0;
        Decomposition {
            parts: tuple.chunks(self.size).map(|p| p.to_vec()).collect(),
            column_weights: self.column_weights(tuple, &mut stamp, &mut epoch),
        }
    }

    /// Minimum-norm tuple in `tuple + K`, abandoning once the norm drops to
    /// `stop` or below.
    fn min_decomposition(&self, tuple: &[Gf], stop: usize) -> (usize, Vec<Gf>) {
        let mut stamp = self.stamp_buffer();
        let mut epoch = 0;
        let mut best = usize::MAX;
        let mut arg = tuple.to_vec();
        let basis: Vec<&[Gf]> = self.k.iter().map(|v| v.as_slice()).collect();
        for_each_affine(&self.field, tuple, &basis, |v| {
            let n = self.norm(v, &mut stamp, &mut epoch);
            if n < best {
                best = n;
                arg.copy_from_slice(v);
                if best <= stop {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        (best, arg)
    }

    fn local_search(&self, tuple: &[Gf], rng: &mut ChaCha8Rng) -> (usize, Vec<Gf>) {
        let f = &self.field;
        let mut stamp = self.stamp_buffer();
        let mut epoch = 0;
        let mut best = tuple.to_vec();
        let mut best_n = self.norm(tuple, &mut stamp, &mut epoch);
        for restart in 0..8 {
            let mut cur = tuple.to_vec();
            if restart > 0 {
                for b in &self.k {
                    f.axpy(&mut cur, f.random(rng), b);
                }
            }
            let mut cur_n = self.norm(&cur, &mut stamp, &mut epoch);
            loop {
                let mut improved = false;
                'scan: for b in &self.k {
                    for a in 1..f.q() {
                        let mut cand = cur.clone();
                        f.axpy(&mut cand, Gf(a), b);
                        let n = self.norm(&cand, &mut stamp, &mut epoch);
                        if n < cur_n {
                            cur = cand;
                            cur_n = n;
                            improved = true;
                            break 'scan;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            if cur_n < best_n {
                best_n = cur_n;
                best = cur;
            }
        }
        (best_n, best)
    }
}

/// Visit every vector of `offset + span(basis)` in odometer order.
pub(crate) fn for_each_affine(
    f: &Field,
    offset: &[Gf],
    basis: &[&[Gf]],
    mut visit: impl FnMut(&[Gf]) -> ControlFlow<()>,
) {
    let q = f.q();
    let mut cur = offset.to_vec();
    if visit(&cur).is_break() {
        return;
    }
    let mut digits = vec![0u32; basis.len()];
    loop {
        let mut j = 0;
        loop {
            if j == digits.len() {
                return;
            }
            let old = Gf(digits[j]);
            digits[j] = (digits[j] + 1) % q;
            f.axpy(&mut cur, f.sub(Gf(digits[j]), old), basis[j]);
            if digits[j] != 0 {
                break;
            }
            j += 1;
        }
        if visit(&cur).is_break() {
            return;
        }
    }
}

fn saturating_pow(q: u64, e: usize) -> u64 {
    let mut r: u64 = 1;
    for _ in 0..e {
        r = r.saturating_mul(q);
    }
    r
}

/// Number of (codeword, decomposition) pairs [`pe_exact`] visits.
pub fn pe_exact_cost(codes: &[&LinearCode]) -> Result<u64> {
    let s = TupleSpace::new(codes)?;
    let q = s.field.q() as u64;
    let proj = (saturating_pow(q, s.w.len()).saturating_sub(1)) / (q - 1);
    Ok(proj.saturating_mul(saturating_pow(q, s.k.len())))
}

struct Best {
    num: usize,
    den: usize,
    tuple: Vec<Gf>,
    codeword: Vec<Gf>,
}

impl Best {
    fn beats(&self, num: usize, den: usize) -> bool {
        num * self.den < self.num * den
    }
}

/// Exact product-expansion by enumerating every codeword of the dual tensor
/// code up to scaling and every decomposition of it.
pub fn pe_exact(codes: &[&LinearCode], budget: u64) -> Result<PeResult> {
    let s = TupleSpace::new(codes)?;
    if s.w.is_empty() {
        return Err(Error::Contract("dual tensor code is zero".into()));
    }
    let cost = pe_exact_cost(codes)?;
    if cost > budget {
        return Err(Error::Budget(format!(
            "pe_exact needs {cost} evaluations, budget is {budget}"
        )));
    }
    let q = s.field.q();
    let dw = s.w.len();
    let mut tasks: Vec<(usize, Vec<u32>)> = Vec::new();
    for lead in 0..dw {
        let rest = dw - lead - 1;
        let mut split = 0;
        while split < rest && saturating_pow(q as u64, split + 1) <= 64 {
            split += 1;
        }
        for p in 0..saturating_pow(q as u64, split) {
            let mut digits = Vec::with_capacity(split);
            let mut v = p;
            for _ in 0..split {
                digits.push((v % q as u64) as u32);
                v /= q as u64;
            }
            tasks.push((lead, digits));
        }
    }
    let results: Vec<Option<Best>> = tasks
        .par_iter()
        .map(|(lead, digits)| {
            let f = &s.field;
            let mut offset = s.w[*lead].clone();
            for (j, &d) in digits.iter().enumerate() {
                f.axpy(&mut offset, Gf(d), &s.w[lead + 1 + j]);
            }
            let free: Vec<&[Gf]> = s.w[lead + 1 + digits.len()..]
                .iter()
                .map(|v| v.as_slice())
                .collect();
            let mut best: Option<Best> = None;
            for_each_affine(f, &offset, &free, |tuple| {
                let c = s.sum(tuple);
                let wc = weight(&c);
                // Norms at or below `stop` cannot beat the current best.
                let stop = best.as_ref().map_or(0, |b| wc * b.den / b.num);
                let (norm, arg) = s.min_decomposition(tuple, stop);
                if norm > stop {
                    best = Some(Best {
                        num: wc,
                        den: norm,
                        tuple: arg,
                        codeword: c,
                    });
                }
                ControlFlow::Continue(())
            });
            best
        })
        .collect();
    let best = results
        .into_iter()
        .flatten()
        .reduce(|a, b| if a.beats(b.num, b.den) { b } else { a })
        .expect("nonzero dual tensor code has a codeword");
    Ok(PeResult {
        rho: Ratio::new(best.num as u64, best.den as u64),
        witness: PeWitness {
            codeword: best.codeword,
            decomposition: s.decomposition(&best.tuple),
        },
    })
}

/// Sampled upper estimate of product-expansion.
pub fn pe_monte_carlo(codes: &[&LinearCode], trials: usize, seed: u64) -> Result<PeEstimate> {
    let s = TupleSpace::new(codes)?;
    if s.w.is_empty() {
        return Err(Error::Contract("dual tensor code is zero".into()));
    }
    let f = s.field.clone();
    let q = f.q() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<Vec<Gf>> = Vec::new();
    let projective = (saturating_pow(q, s.w.len()) - 1) / (q - 1);
    let all_codewords = projective <= trials as u64;
    if all_codewords {
        let zero = vec![Gf::ZERO; s.arity() * s.size];
        for lead in 0..s.w.len() {
            let mut offset = zero.clone();
            f.axpy(&mut offset, Gf::ONE, &s.w[lead]);
            let free: Vec<&[Gf]> = s.w[lead + 1..].iter().map(|v| v.as_slice()).collect();
            for_each_affine(&f, &offset, &free, |v| {
                candidates.push(v.to_vec());
                ControlFlow::Continue(())
            });
        }
    } else {
        let t = s.arity();
        let mut min_words = Vec::new();
        for (i, code) in codes.iter().enumerate() {
            let Some(a) = min_distance(code, DEFAULT_DISTANCE_BUDGET).witness else {
                min_words.push(None);
                continue;
            };
            // a in the first direction-i column
            let idx = TensorIndex::new(&s.dims);
            let mut tuple = vec![Gf::ZERO; t * s.size];
            for (x, cell) in idx.column(i, 0).into_iter().enumerate() {
                tuple[i * s.size + cell] = a[x];
            }
            candidates.push(tuple);
            min_words.push(Some(a));
        }
        if min_words.iter().all(|m| m.is_some()) {
            let mut prod = vec![Gf::ONE];
            for a in min_words.iter().flatten() {
                prod = prod
                    .iter()
                    .flat_map(|&x| a.iter().map(move |&y| (x, y)))
                    .map(|(x, y)| f.mul(x, y))
                    .collect();
            }
            let mut tuple = vec![Gf::ZERO; t * s.size];
            tuple[..s.size].copy_from_slice(&prod);
            candidates.push(tuple);
        }
        for _ in 0..trials {
            let mut v = vec![Gf::ZERO; t * s.size];
            for b in &s.w {
                f.axpy(&mut v, f.random(&mut rng), b);
            }
            if weight(&s.sum(&v)) > 0 {
                candidates.push(v);
            }
        }
    }
    let inner_exact = saturating_pow(q, s.k.len()) <= INNER_EXACT_LIMIT;
    let seeds: Vec<u64> = (0..candidates.len()).map(|_| rng.gen()).collect();
    let scored: Vec<(usize, usize, Vec<Gf>)> = candidates
        .par_iter()
        .zip(seeds)
        .map(|(tuple, sd)| {
            let wc = weight(&s.sum(tuple));
            let (norm, arg) = if inner_exact {
                s.min_decomposition(tuple, 0)
            } else {
                s.local_search(tuple, &mut ChaCha8Rng::seed_from_u64(sd))
            };
            (wc, norm, arg)
        })
        .collect();
    let n_candidates = scored.len();
    let (num, den, tuple) = scored
        .into_iter()
        .filter(|(wc, norm, _)| *wc > 0 && *norm > 0)
        .reduce(|a, b| if b.0 * a.1 < a.0 * b.1 { b } else { a })
        .ok_or_else(|| Error::NotFound("no nonzero candidate".into()))?;
    Ok(PeEstimate {
        rho: Ratio::new(num as u64, den as u64),
        witness: PeWitness {
            codeword: s.sum(&tuple),
            decomposition: s.decomposition(&tuple),
        },
        candidates: n_candidates,
        all_codewords,
        exact_decompositions: inner_exact,
    })
}

/// [A]_ε by repeated column sweeps.
pub fn epsilon_closure(idx: &TensorIndex, set: &[bool], eps: f64) -> Vec<bool> {
    assert!(eps > 0.0 && eps <= 1.0, "ε must lie in (0, 1]");
    assert_eq!(set.len(), idx.size());
    let mut a = set.to_vec();
    loop {
        let mut changed = false;
        for axis in 0..idx.arity() {
            let n = idx.dims()[axis];
            for col in 0..idx.column_count(axis) {
                let cells = idx.column(axis, col);
                let hit = cells.iter().filter(|&&x| a[x]).count();
                if hit < n && hit as f64 >= eps * n as f64 - 1e-12 {
                    for x in cells {
                        a[x] = true;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let t = idx.arity() as i32;
    let bound = ((2f64.powi(t) + 1.0) / eps).powi(t) * set.iter().filter(|&&b| b).count() as f64;
    assert!(
        a.iter().filter(|&&b| b).count() as f64 <= bound,
        "closure exceeds its size bound"
    );
    a
}

/// Canonical generator of C_1 ⊞ ... ⊞ C_t with each row's (axis, column).
pub fn canonical_generator(codes: &[&LinearCode]) -> Result<(Matrix, Vec<(usize, usize)>)> {
    let field = check_tuple(codes)?;
    let dims: Vec<usize> = codes.iter().map(|c| c.len()).collect();
    let idx = TensorIndex::new(&dims);
    let mut g = Matrix::zeros(&field, 0, idx.size());
    let mut labels = Vec::new();
    for (i, code) in codes.iter().enumerate() {
        let gi = axis_generator(&field, &dims, i, code.generator())?;
        for r in 0..gi.rows() {
            let first = gi
                .row(r)
                .iter()
                .position(|&x| x != Gf::ZERO)
                .expect("generator rows are nonzero");
            labels.push((i, idx.column_of(i, first)));
        }
        g = g.vstack(&gi)?;
    }
    Ok((g, labels))
}

/// Rank criterion for `set` being inner-generated.
pub fn inner_generated_test(codes: &[&LinearCode], set: &[bool]) -> Result<bool> {
    let dims: Vec<usize> = codes.iter().map(|c| c.len()).collect();
    let idx = TensorIndex::new(&dims);
    if set.len() != idx.size() {
        return Err(Error::Dimension(format!("cell set has {} entries, expected {}", set.len(), idx.size())));
    }
    let (g, labels) = canonical_generator(codes)?;
    let inside: Vec<usize> = (0..idx.size()).filter(|&x| set[x]).collect();
    let outside: Vec<usize> = (0..idx.size()).filter(|&x| !set[x]).collect();
    let rows: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|(_, &(axis, col))| idx.column(axis, col).iter().all(|&x| set[x]))
        .map(|(r, _)| r)
        .collect();
    let lhs = g.select_rows(&rows).select_cols(&inside).rank();
    let rhs = g.rank() - g.select_cols(&outside).rank();
    debug_assert!(lhs <= rhs);
    Ok(lhs == rhs)
}

/// Solve for c_{i,j} ∈ C^{(i,j)}, i < j, with
/// a_i − b_i = Σ_{j<i} c_{j,i} − Σ_{j>i} c_{i,j} for two decompositions a, b.
pub fn decomposition_difference(
    codes: &[&LinearCode],
    a: &[Vec<Gf>],
    b: &[Vec<Gf>],
) -> Result<Vec<((usize, usize), Vec<Gf>)>> {
    let field = check_tuple(codes)?;
    let t = codes.len();
    if a.len() != t || b.len() != t {
        return Err(Error::Dimension("decompositions must have t parts".into()));
    }
    let dims: Vec<usize> = codes.iter().map(|c| c.len()).collect();
    let size: usize = dims.iter().product();
    let mut pair_gens = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            let mut g = Matrix::identity(&field, 1);
            for (l, &n) in dims.iter().enumerate() {
                g = if l == i {
                    g.kron(codes[i].generator())?
                } else if l == j {
                    g.kron(codes[j].generator())?
                } else {
                    g.kron(&Matrix::identity(&field, n))?
                };
            }
            pair_gens.push(((i, j), g));
        }
    }
    // Each coefficient of c_{i,j} contributes −row to part i and +row to part j.
    let unknowns: usize = pair_gens.iter().map(|(_, g)| g.rows()).sum();
    let mut sys = Matrix::zeros(&field, t * size, unknowns);
    let mut col = 0;
    for ((i, j), g) in &pair_gens {
        for r in 0..g.rows() {
            for x in 0..size {
                let v = g.get(r, x);
                if v != Gf::ZERO {
                    sys.set(i * size + x, col, field.neg(v));
                    sys.set(j * size + x, col, v);
                }
            }
            col += 1;
        }
    }
    let mut rhs = Vec::with_capacity(t * size);
    for i in 0..t {
        rhs.extend(field.sub_vec(&a[i], &b[i]));
    }
    let sol = sys
        .solve(&rhs)
        .ok_or_else(|| Error::Inconsistent("decompositions do not sum to the same word".into()))?;
    let mut off = 0;
    Ok(pair_gens
        .into_iter()
        .map(|(ij, g)| {
            let v = g.vec_mul(&sol[off..off + g.rows()]);
            off += g.rows();
            (ij, v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::rs_code;

    #[test]
    fn single_code_is_relative_distance() {
        let f = Field::of_order(5).unwrap();
        let c = rs_code(&f, 5, 2, None).unwrap();
        let r = pe_exact(&[&c], PE_EXACT_BUDGET).unwrap();
        assert_eq!(r.rho, Ratio::new(4, 5));
    }

    #[test]
    fn full_factor_gives_one_over_n() {
        let f = Field::of_order(3).unwrap();
        let full = LinearCode::full(&f, 3);
        let c = rs_code(&f, 3, 1, None).unwrap();
        let r = pe_exact(&[&full, &c], PE_EXACT_BUDGET).unwrap();
        assert_eq!(r.rho, Ratio::new(1, 3));
        assert_eq!(weight(&r.witness.codeword), 1);
    }

    #[test]
    fn refuses_over_budget() {
        let f = Field::of_order(4).unwrap();
        let c = rs_code(&f, 4, 2, None).unwrap();
        assert!(matches!(pe_exact(&[&c, &c], 10), Err(Error::Budget(_))));
    }

    #[test]
    fn closure_basics() {
        let idx = TensorIndex::new(&[4, 4]);
        let empty = vec![false; 16];
        assert_eq!(epsilon_closure(&idx, &empty, 0.5), empty);
        let mut col = vec![false; 16];
        for c in idx.column(0, 1) {
            col[c] = true;
        }
        assert_eq!(epsilon_closure(&idx, &col, 0.5), col);
        let mut corner = vec![false; 16];
        for x in [0, 1, 4, 5] {
            corner[x] = true;
        }
        let cl = epsilon_closure(&idx, &corner, 0.5);
        assert_eq!(epsilon_closure(&idx, &cl, 0.5), cl);
    }

    #[test]
    fn canonical_generator_rank() {
        let f = Field::of_order(5).unwrap();
        let a = rs_code(&f, 5, 2, None).unwrap();
        let b = rs_code(&f, 5, 3, None).unwrap();
        let (g, labels) = canonical_generator(&[&a, &b]).unwrap();
        assert_eq!(g.rows(), 25);
        assert_eq!(labels.len(), 25);
        assert_eq!(g.rank(), 19);
    }
}
