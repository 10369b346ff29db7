use std::collections::HashSet;

use super::LinearCode;
use crate::algebra::{weight, Field, Gf, Matrix, UniPoly};
use crate::error::{Error, Result};

/// Reed–Solomon code: evaluations of polynomials of degree < k on an ordered
/// set of distinct points.
#[derive(Clone, Debug)]
pub struct ReedSolomon {
    field: Field,
    points: Vec<Gf>,
    k: usize,
}

impl ReedSolomon {
    /// `points` defaults to the first `n` field elements in canonical order.
    pub fn new(field: &Field, n: usize, k: usize, points: Option<&[Gf]>) -> Result<Self> {
        if n > field.q() as usize {
            return Err(Error::Contract(format!("n = {n} exceeds q = {}", field.q())));
        }
        if k > n {
            return Err(Error::Contract(format!("k = {k} exceeds n = {n}")));
        }
        let points = match points {
            Some(p) => {
                if p.len() != n {
                    return Err(Error::Contract(format!("{} points for n = {n}", p.len())));
                }
                let distinct: HashSet<_> = p.iter().collect();
                if distinct.len() != n {
                    return Err(Error::Contract("repeated evaluation point".into()));
                }
                if p.iter().any(|x| !field.contains(*x)) {
                    return Err(Error::Contract("point outside the field".into()));
                }
                p.to_vec()
            }
            None => field.points(n),
        };
        Ok(ReedSolomon {
            field: field.clone(),
            points,
            k,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.points.len()
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn points(&self) -> &[Gf] {
        &self.points
    }

    /// Same points, different dimension.
    pub fn with_dim(&self, k: usize) -> Result<Self> {
        Self::new(&self.field, self.n(), k, Some(&self.points))
    }

    /// Generator with rows ev(X^j), j < k.
    pub fn generator(&self) -> Matrix {
        let f = &self.field;
        Matrix::from_fn(f, self.k, self.n(), |j, i| f.pow(self.points[i], j as u64))
    }

    pub fn code(&self) -> LinearCode {
        LinearCode::new(
            self.generator(),
            format!("RS(n={},k={})", self.n(), self.k),
        )
    }

    pub fn eval(&self, p: &UniPoly) -> Vec<Gf> {
        p.eval_many(&self.field, &self.points)
    }

    /// Unique polynomial of degree < n agreeing with `word`.
    pub fn interpolate(&self, word: &[Gf]) -> UniPoly {
        UniPoly::interpolate(&self.field, &self.points, word)
    }

    /// Berlekamp–Welch with error budget `max_errors`.
    pub fn decode(&self, word: &[Gf], max_errors: usize) -> Option<Vec<Gf>> {
        berlekamp_welch(&self.field, &self.points, self.k, word, max_errors).map(|(c, _)| c)
    }
}

/// Berlekamp–Welch decoding of `word` against RS with dimension `k` on
/// `points`. Returns the codeword and its message polynomial when a codeword
/// within `max_errors` is found.
pub fn berlekamp_welch(
    field: &Field,
    points: &[Gf],
    k: usize,
    word: &[Gf],
    max_errors: usize,
) -> Option<(Vec<Gf>, UniPoly)> {
    let n = points.len();
    assert_eq!(word.len(), n, "word length mismatch");
    if k == 0 {
        return (weight(word) <= max_errors).then(|| (vec![Gf::ZERO; n], UniPoly::zero()));
    }
    let t = max_errors.min(n - k);
    // Unknowns: Q_0..Q_{k+t-1}, E_0..E_{t-1}; E monic of degree t.
    let cols = k + t + t;
    let a = Matrix::from_fn(field, n, cols, |i, j| {
        let x = points[i];
        if j < k + t {
            field.pow(x, j as u64)
        } else {
            field.neg(field.mul(word[i], field.pow(x, (j - k - t) as u64)))
        }
    });
    let b: Vec<Gf> = (0..n)
        .map(|i| field.mul(word[i], field.pow(points[i], t as u64)))
        .collect();
    let sol = a.solve(&b)?;
    let q = UniPoly::new(sol[..k + t].to_vec());
    let mut e_coeffs = sol[k + t..].to_vec();
    e_coeffs.push(Gf::ONE);
    let e = UniPoly::new(e_coeffs);
    let (msg, r) = q.div_rem(field, &e);
    if !r.is_zero() || msg.degree().is_some_and(|d| d >= k) {
        return None;
    }
    let cw = msg.eval_many(field, points);
    let dist = cw.iter().zip(word).filter(|(x, y)| x != y).count();
    (dist <= max_errors).then_some((cw, msg))
}

/// Convenience constructor for the code itself.
pub fn rs_code(field: &Field, n: usize, k: usize, points: Option<&[Gf]>) -> Result<LinearCode> {
    Ok(ReedSolomon::new(field, n, k, points)?.code())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::min_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dual_is_rs() {
        let f = Field::of_order(8).unwrap();
        let c = rs_code(&f, 8, 3, None).unwrap();
        let d = rs_code(&f, 8, 5, None).unwrap();
        assert_eq!(c.dual(), d);
    }

    #[test]
    fn trivial_dimensions() {
        let f = Field::prime(7).unwrap();
        assert!(rs_code(&f, 7, 0, None).unwrap().is_zero_code());
        assert!(rs_code(&f, 7, 7, None).unwrap().is_full());
        assert!(rs_code(&f, 7, 8, None).is_err());
        assert!(rs_code(&f, 2, 1, Some(&[Gf(1), Gf(1)])).is_err());
    }

    #[test]
    fn rs_7_3_distance() {
        let f = Field::prime(7).unwrap();
        let c = rs_code(&f, 7, 3, None).unwrap();
        let d = min_distance(&c, 1 << 20);
        assert_eq!(d.value, Some(5));
        assert!(d.exact);
    }

    fn nearest(f: &Field, code: &LinearCode, word: &[Gf]) -> Vec<Gf> {
        let k = code.dim();
        let q = f.q() as u64;
        let mut best: Option<(usize, Vec<Gf>)> = None;
        for idx in 0..q.pow(k as u32) {
            let mut m = Vec::with_capacity(k);
            let mut r = idx;
            for _ in 0..k {
                m.push(f.point((r % q) as usize));
                r /= q;
            }
            let c = code.encode(&m);
            let d = c.iter().zip(word).filter(|(a, b)| a != b).count();
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, c));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn bw_matches_nearest_codeword() {
        let f = Field::prime(7).unwrap();
        let rs = ReedSolomon::new(&f, 7, 3, None).unwrap();
        let code = rs.code();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let c = code.random_codeword(&mut rng);
            assert_eq!(rs.decode(&c, 2).unwrap(), c);
            let mut w = c.clone();
            let pos = rand::Rng::gen_range(&mut rng, 0..7);
            w[pos] = f.add(w[pos], f.random_nonzero(&mut rng));
            let got = rs.decode(&w, 1).unwrap();
            assert_eq!(got, c);
            assert_eq!(got, nearest(&f, &code, &w));
        }
    }
}
