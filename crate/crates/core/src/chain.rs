//! Single-sector chain complexes over characteristic-2 fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{weight, EchelonBasis, Field, Gf, Matrix};
use crate::codes::{coset_min_distance, DistanceResult, LinearCode};
use crate::error::{Error, Result};

/// Default budget (vectors visited) for exact minimum-weight preimages.
pub const FILLING_EXACT_BUDGET: u64 = 1 << 16;

/// One space with a square boundary map, ∂² = 0.
#[derive(Clone, Debug)]
pub struct SingleSectorComplex {
    boundary: Matrix,
}

impl SingleSectorComplex {
    pub fn new(boundary: Matrix) -> Result<Self> {
        let f = boundary.field();
        if f.p() != 2 {
            return Err(Error::Characteristic(f.p()));
        }
        if boundary.rows() != boundary.cols() {
            return Err(Error::Dimension("boundary map must be square".into()));
        }
        if !boundary.mul(&boundary)?.is_zero() {
            return Err(Error::Contract("boundary map does not square to zero".into()));
        }
        Ok(SingleSectorComplex { boundary })
    }

    /// Complex with ∂ = H_X^T H_Z for a CSS pair with dim Q_X = dim Q_Z.
    pub fn from_css(qx: &LinearCode, qz: &LinearCode) -> Result<Self> {
        if qx.field() != qz.field() {
            return Err(Error::FieldMismatch);
        }
        if qx.field().p() != 2 {
            return Err(Error::Characteristic(qx.field().p()));
        }
        if qx.len() != qz.len() || qx.dim() != qz.dim() {
            return Err(Error::Contract("need equal lengths and dim Q_X = dim Q_Z".into()));
        }
        let hx = qx.parity_check();
        let hz = qz.parity_check();
        if !hz.mul(&hx.transpose())?.is_zero() {
            return Err(Error::NotOrthogonal("H_Z H_X^T != 0".into()));
        }
        Self::new(hx.transpose().mul(hz)?)
    }

    pub fn field(&self) -> &Field {
        self.boundary.field()
    }

    pub fn dim(&self) -> usize {
        self.boundary.rows()
    }

    pub fn boundary(&self) -> &Matrix {
        &self.boundary
    }

    pub fn coboundary(&self) -> Matrix {
        self.boundary.transpose()
    }

    /// Maximum support of a row or column of ∂.
    pub fn locality(&self) -> usize {
        let d = &self.boundary;
        let rows = (0..d.rows()).map(|i| weight(d.row(i))).max().unwrap_or(0);
        let cols = (0..d.cols()).map(|j| weight(&d.column(j))).max().unwrap_or(0);
        rows.max(cols)
    }

    /// Z_* = ker ∂
    pub fn cycles(&self) -> LinearCode {
        LinearCode::from_parity_check(&self.boundary, "Z_*")
    }

    /// B_* = im ∂
    pub fn boundaries(&self) -> LinearCode {
        LinearCode::new(self.boundary.transpose(), "B_*")
    }

    /// Z^* = ker δ
    pub fn cocycles(&self) -> LinearCode {
        LinearCode::from_parity_check(&self.boundary.transpose(), "Z^*")
    }

    /// B^* = im δ
    pub fn coboundaries(&self) -> LinearCode {
        LinearCode::new(self.boundary.clone(), "B^*")
    }

    pub fn homology_dim(&self) -> usize {
        let r = self.boundary.rank();
        self.dim() - 2 * r
    }

    pub fn cohomology_dim(&self) -> usize {
        self.cocycles().dim() - self.coboundaries().dim()
    }

    /// The associated quantum code (Q_X, Q_Z) = (ker δ, ker ∂).
    pub fn quantum_code(&self) -> (LinearCode, LinearCode) {
        (self.cocycles(), self.cycles())
    }

    /// Cocycle and cycle representatives with c^j · c_l = [j = l].
    pub fn dual_bases(&self) -> Result<(Matrix, Matrix)> {
        let z = self.cycles();
        let zc = self.cocycles();
        let cyc = z.complement_of(&self.boundaries())?;
        let cocyc = zc.complement_of(&self.coboundaries())?;
        if cyc.rows() == 0 {
            return Ok((cocyc, cyc));
        }
        let gram = cocyc.mul(&cyc.transpose())?;
        let inv = gram
            .inverse()
            .ok_or_else(|| Error::Inconsistent("homology pairing is degenerate".into()))?;
        Ok((inv.mul(&cocyc)?, cyc))
    }

    pub fn systolic_distance(&self, budget: u64) -> DistanceResult {
        coset_min_distance(&self.cycles(), &self.boundaries(), budget)
    }

    pub fn cosystolic_distance(&self, budget: u64) -> DistanceResult {
        coset_min_distance(&self.cocycles(), &self.coboundaries(), budget)
    }

    /// Minimum-weight preimage of `b` under ∂; exact when the kernel is small
    /// enough to enumerate within `budget`, otherwise found by local search.
    pub fn min_preimage(&self, b: &[Gf], budget: u64, seed: u64) -> Option<(Vec<Gf>, bool)> {
        let c0 = self.boundary.solve(b)?;
        let kernel = self.cycles();
        Some(min_weight_in_coset(&c0, &kernel, budget, seed))
    }

    /// Lower estimate of μ_* from sampled boundaries.
    pub fn filling_constant_estimate(&self, trials: usize, budget: u64, seed: u64) -> FillingEstimate {
        let f = self.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = FillingEstimate {
            preimage_weight: 0,
            boundary_weight: 1,
            exact: true,
            samples: 0,
        };
        for t in 0..trials {
            let w = rng.gen_range(1..=self.dim().min(3));
            let mut c = vec![Gf::ZERO; self.dim()];
            for _ in 0..w {
                let i = rng.gen_range(0..self.dim());
                c[i] = f.random_nonzero(&mut rng);
            }
            let b = self.boundary.mul_vec(&c);
            let bw = weight(&b);
            if bw == 0 {
                continue;
            }
            best.samples += 1;
            let (pre, exact) = self
                .min_preimage(&b, budget, seed ^ t as u64)
                .expect("b lies in the image by construction");
            best.exact &= exact;
            let pw = weight(&pre);
            if pw * best.boundary_weight > best.preimage_weight * bw {
                best.preimage_weight = pw;
                best.boundary_weight = bw;
            }
        }
        best
    }
}

/// max over sampled b of |min preimage| / |b|, as a fraction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FillingEstimate {
    pub preimage_weight: usize,
    pub boundary_weight: usize,
    /// True when every preimage minimization was exhaustive.
    pub exact: bool,
    pub samples: usize,
}

impl FillingEstimate {
    pub fn value(&self) -> f64 {
        self.preimage_weight as f64 / self.boundary_weight as f64
    }
}

/// Minimum weight over `offset + code`.
pub fn min_weight_in_coset(
    offset: &[Gf],
    code: &LinearCode,
    budget: u64,
    seed: u64,
) -> (Vec<Gf>, bool) {
    let f = code.field();
    let q = f.q() as u64;
    let k = code.dim();
    let rows = code.generator().row_vecs();
    let basis: Vec<&[Gf]> = rows.iter().map(|r| r.as_slice()).collect();
    if (k as u32) < 64 && q.checked_pow(k as u32).is_some_and(|t| t <= budget) {
        let (_, v) = crate::codes::min_weight_affine(f, offset, &basis, 0);
        return (v, true);
    }
    (local_search(f, offset, &basis, seed), false)
}

fn local_search(f: &Field, offset: &[Gf], basis: &[&[Gf]], seed: u64) -> Vec<Gf> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = offset.to_vec();
    for restart in 0..16 {
        let mut cur = offset.to_vec();
        if restart > 0 {
            for b in basis {
                f.axpy(&mut cur, f.random(&mut rng), b);
            }
        }
        loop {
            let w = weight(&cur);
            let mut improved = false;
            for b in basis {
                for a in 1..f.q() {
                    let mut cand = cur.clone();
                    f.axpy(&mut cand, Gf(a), b);
                    if weight(&cand) < w {
                        cur = cand;
                        improved = true;
                        break;
                    }
                }
                if improved {
                    break;
                }
            }
            if !improved {
                break;
            }
        }
        if weight(&cur) < weight(&best) {
            best = cur;
        }
    }
    best
}

/// ∂_A ⊗ I + I ⊗ ∂_B.
pub fn hom_product(a: &SingleSectorComplex, b: &SingleSectorComplex) -> Result<SingleSectorComplex> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let f = a.field();
    let left = a.boundary.kron(&Matrix::identity(f, b.dim()))?;
    let right = Matrix::identity(f, a.dim()).kron(&b.boundary)?;
    let data: Vec<Gf> = left
        .data()
        .iter()
        .zip(right.data())
        .map(|(&x, &y)| f.add(x, y))
        .collect();
    let n = a.dim() * b.dim();
    SingleSectorComplex::new(Matrix::from_vec(f, n, n, data)?)
}

/// Coefficients of `v` (a cycle) in the homology basis `cyc`, modulo boundaries.
pub fn homology_class(cplx: &SingleSectorComplex, cocyc: &Matrix, v: &[Gf]) -> Vec<Gf> {
    (0..cocyc.rows())
        .map(|j| cplx.field().dot(cocyc.row(j), v))
        .collect()
}

/// True when `v` is a boundary.
pub fn is_boundary(cplx: &SingleSectorComplex, v: &[Gf]) -> bool {
    EchelonBasis::from_matrix(&cplx.boundary.transpose()).contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::rs_code;

    fn rs_complex(f: &Field, n: usize, k: usize) -> SingleSectorComplex {
        let c = rs_code(f, n, k, None).unwrap();
        SingleSectorComplex::from_css(&c, &c).unwrap()
    }

    #[test]
    fn rejects_odd_characteristic() {
        let f = Field::prime(3).unwrap();
        assert!(matches!(
            SingleSectorComplex::new(Matrix::zeros(&f, 2, 2)),
            Err(Error::Characteristic(3))
        ));
    }

    #[test]
    fn zero_boundary() {
        let f = Field::of_order(4).unwrap();
        let c = SingleSectorComplex::new(Matrix::zeros(&f, 3, 3)).unwrap();
        assert_eq!(c.homology_dim(), 3);
        assert_eq!(c.systolic_distance(1000).value, Some(1));
    }

    #[test]
    fn css_round_trip() {
        let f = Field::of_order(8).unwrap();
        let cx = rs_code(&f, 8, 5, None).unwrap();
        let c = SingleSectorComplex::from_css(&cx, &cx).unwrap();
        let (qx, qz) = c.quantum_code();
        assert_eq!(qx, cx);
        assert_eq!(qz, cx);
        assert_eq!(c.homology_dim(), 2);
        assert_eq!(c.cohomology_dim(), 2);
    }

    #[test]
    fn dual_bases_biorthogonal() {
        let f = Field::of_order(8).unwrap();
        let c = rs_complex(&f, 8, 6);
        let (co, cy) = c.dual_bases().unwrap();
        assert_eq!(co.mul(&cy.transpose()).unwrap(), Matrix::identity(&f, 4));
    }

    #[test]
    fn kunneth() {
        let f = Field::of_order(4).unwrap();
        let a = rs_complex(&f, 4, 3);
        let b = rs_complex(&f, 4, 2);
        let p = hom_product(&a, &b).unwrap();
        assert_eq!(p.homology_dim(), a.homology_dim() * b.homology_dim());
        assert!(p.locality() <= a.locality() + b.locality());
    }

    #[test]
    fn filling_of_unit_boundary() {
        let f = Field::of_order(4).unwrap();
        let c = rs_complex(&f, 4, 3);
        let e = c.filling_constant_estimate(20, 1 << 16, 1);
        assert!(e.exact);
        assert!(e.samples > 0);
    }
}
