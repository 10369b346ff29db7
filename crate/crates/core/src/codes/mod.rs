//! Classical linear codes and the constructions applied to them.

mod distance;
mod json;
mod punctured;
mod rs;
mod star;
mod tensor;

use std::sync::OnceLock;

use rand::Rng;

use crate::algebra::{EchelonBasis, Field, Gf, Matrix};
use crate::error::{Error, Result};

pub use distance::{
    coset_min_distance, is_mds, ltc_soundness_estimate, min_distance, DistanceResult,
    SoundnessEstimate, DEFAULT_DISTANCE_BUDGET,
};
pub(crate) use distance::min_weight_affine;
pub use distance::coset_search_size;
pub use json::CodeDoc;
pub use punctured::{exponent_box, punctured_tensor_rs, sample_points, EvalCode};
pub use rs::{berlekamp_welch, rs_code, ReedSolomon};
pub use star::{star_power, star_power_capped, star_product, star_product_capped};
pub use tensor::{dual_tensor, dual_tensor_contains, tensor, TensorIndex};

/// A linear subspace of `F^n` carried by a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    n: usize,
    gen: Matrix,
    label: String,
    parity: OnceLock<Matrix>,
}

impl PartialEq for LinearCode {
    /// Subspace equality.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.gen.same_row_space(&other.gen)
    }
}

impl LinearCode {
    /// Code spanned by the rows of `gen`. Dependent rows are replaced by the
    /// RREF basis of their span.
    pub fn new(gen: Matrix, label: impl Into<String>) -> Self {
        let n = gen.cols();
        let field = gen.field().clone();
        let gen = if gen.rank() == gen.rows() {
            gen
        } else {
            gen.row_space()
        };
        LinearCode {
            field,
            n,
            gen,
            label: label.into(),
            parity: OnceLock::new(),
        }
    }

    pub fn from_rows(field: &Field, n: usize, rows: &[Vec<Gf>], label: impl Into<String>) -> Self {
        Self::new(Matrix::from_rows(field, n, rows), label)
    }

    /// Kernel of `h`.
    pub fn from_parity_check(h: &Matrix, label: impl Into<String>) -> Self {
        let code = Self::new(h.kernel(), label);
        let checks = if h.rank() == h.rows() { h.clone() } else { h.row_space() };
        let _ = code.parity.set(checks);
        code
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        Self::new(Matrix::zeros(field, 0, n), "zero")
    }

    pub fn full(field: &Field, n: usize) -> Self {
        Self::new(Matrix::identity(field, n), "full")
    }

    /// Span of the all-ones vector.
    pub fn repetition(field: &Field, n: usize) -> Self {
        Self::from_rows(field, n, &[vec![Gf::ONE; n]], "repetition")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Full-rank parity-check matrix, computed on first use.
    pub fn parity_check(&self) -> &Matrix {
        self.parity.get_or_init(|| self.gen.kernel())
    }

    pub fn dual(&self) -> LinearCode {
        let d = LinearCode::new(self.parity_check().clone(), format!("dual({})", self.label));
        let _ = d.parity.set(self.gen.clone());
        d
    }

    pub fn contains(&self, v: &[Gf]) -> bool {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        self.parity_check()
            .mul_vec(v)
            .iter()
            .all(|x| x.is_zero())
    }

    /// Syndrome H v.
    pub fn syndrome(&self, v: &[Gf]) -> Vec<Gf> {
        self.parity_check().mul_vec(v)
    }

    /// msg^T G.
    pub fn encode(&self, msg: &[Gf]) -> Vec<Gf> {
        self.gen.vec_mul(msg)
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Gf> {
        let msg = self.field.random_vec(self.dim(), rng);
        self.encode(&msg)
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.n == other.n && (0..self.dim()).all(|i| other.contains(self.gen.row(i)))
    }

    pub fn is_zero_code(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::Contract(format!(
                "code lengths differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        let mut b = EchelonBasis::from_matrix(&self.gen);
        for i in 0..other.dim() {
            b.insert(other.gen.row(i));
        }
        Ok(LinearCode::new(
            b.to_rref(),
            format!("{}+{}", self.label, other.label),
        ))
    }

    pub fn intersection(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(LinearCode::new(
            self.gen.row_space_intersection(&other.gen)?,
            format!("{}∩{}", self.label, other.label),
        ))
    }

    /// Coordinatewise scaling γ * C.
    pub fn scaled(&self, gamma: &[Gf]) -> Result<LinearCode> {
        if gamma.len() != self.n {
            return Err(Error::Dimension("scaling vector length".into()));
        }
        let g = Matrix::from_fn(&self.field, self.dim(), self.n, |i, j| {
            self.field.mul(self.gen.get(i, j), gamma[j])
        });
        Ok(LinearCode::new(g, format!("scaled({})", self.label)))
    }

    /// Restriction to the coordinates in `idx`, in that order.
    pub fn punctured(&self, idx: &[usize]) -> LinearCode {
        LinearCode::new(
            self.gen.select_cols(idx),
            format!("punct({})", self.label),
        )
    }

    /// Complement basis: rows extending a basis of `sub` (a subcode) to a
    /// basis of `self`, in pivot order of the generator.
    pub fn complement_of(&self, sub: &LinearCode) -> Result<Matrix> {
        self.check_compatible(sub)?;
        let mut b = EchelonBasis::from_matrix(sub.generator());
        let mut rows = Vec::new();
        for i in 0..self.dim() {
            if b.insert(self.gen.row(i)) {
                rows.push(self.gen.row(i).to_vec());
            }
        }
        if b.len() != self.dim() {
            return Err(Error::Contract("not a subcode".into()));
        }
        Ok(Matrix::from_rows(&self.field, self.n, &rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dual_involution() {
        let f = Field::of_order(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..100 {
            let k = seed % 7;
            let g = Matrix::random(&f, k, 7, &mut rng);
            let c = LinearCode::new(g, "random");
            let d = c.dual();
            assert_eq!(c.dim() + d.dim(), 7);
            assert_eq!(d.dual(), c);
            for i in 0..c.dim() {
                for j in 0..d.dim() {
                    assert!(f.dot(c.generator().row(i), d.generator().row(j)).is_zero());
                }
            }
        }
    }

    #[test]
    fn trivial_duals() {
        let f = Field::prime(5).unwrap();
        assert!(LinearCode::full(&f, 4).dual().is_zero_code());
        assert!(LinearCode::zero(&f, 4).dual().is_full());
    }

    #[test]
    fn parity_check_constructor() {
        let f = Field::prime(3).unwrap();
        let h = Matrix::from_rows(&f, 3, &[vec![Gf(1), Gf(1), Gf(1)], vec![Gf(2), Gf(2), Gf(2)]]);
        let c = LinearCode::from_parity_check(&h, "sum-zero");
        assert_eq!(c.dim(), 2);
        assert_eq!(c.parity_check().rows(), 1);
    }
}
