use super::LinearCode;
use crate::algebra::{EchelonBasis, Field, Gf, Matrix};
use crate::error::{Error, Result};

/// Row-major indexing of `[n_1] x ... x [n_t]`; the last axis varies fastest,
/// matching the Kronecker product of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorIndex {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl TensorIndex {
    pub fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        TensorIndex {
            dims: dims.to_vec(),
            strides,
        }
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn flat(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn tuple(&self, mut flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let a = flat / s;
                flat %= s;
                a
            })
            .collect()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Number of direction-`axis` columns.
    pub fn column_count(&self, axis: usize) -> usize {
        self.size() / self.dims[axis]
    }

    /// Flat base index of the `c`-th direction-`axis` column (its cell with
    /// coordinate 0 along `axis`).
    pub fn column_base(&self, axis: usize, c: usize) -> usize {
        let s = self.strides[axis];
        let hi = c / s;
        let lo = c % s;
        hi * s * self.dims[axis] + lo
    }

    /// Cells of the `c`-th direction-`axis` column, ordered along the axis.
    pub fn column(&self, axis: usize, c: usize) -> Vec<usize> {
        let base = self.column_base(axis, c);
        let s = self.strides[axis];
        (0..self.dims[axis]).map(|x| base + x * s).collect()
    }

    /// Index of the direction-`axis` column through `flat`.
    pub fn column_of(&self, axis: usize, flat: usize) -> usize {
        let s = self.strides[axis];
        let hi = flat / (s * self.dims[axis]);
        hi * s + flat % s
    }
}

fn check_same_field(codes: &[&LinearCode]) -> Result<Field> {
    let first = codes
        .first()
        .ok_or_else(|| Error::Contract("empty code tuple".into()))?;
    if codes.iter().any(|c| c.field() != first.field()) {
        return Err(Error::FieldMismatch);
    }
    Ok(first.field().clone())
}

/// Tensor product C_1 ⊗ ... ⊗ C_t.
pub fn tensor(codes: &[&LinearCode]) -> Result<LinearCode> {
    check_same_field(codes)?;
    let mut g = codes[0].generator().clone();
    for c in &codes[1..] {
        g = g.kron(c.generator())?;
    }
    let label = codes.iter().map(|c| c.label()).collect::<Vec<_>>().join("⊗");
    Ok(LinearCode::new(g, label))
}

/// Dual tensor product C_1 ⊞ ... ⊞ C_t = Σ_i F ⊗ .. ⊗ C_i ⊗ .. ⊗ F.
pub fn dual_tensor(codes: &[&LinearCode]) -> Result<LinearCode> {
    let field = check_same_field(codes)?;
    let dims: Vec<usize> = codes.iter().map(|c| c.len()).collect();
    let idx = TensorIndex::new(&dims);
    let size = idx.size();
    let expected = size - codes.iter().map(|c| c.len() - c.dim()).product::<usize>();
    let mut basis = EchelonBasis::new(&field, size);
    'outer: for (axis, code) in codes.iter().enumerate() {
        let g = code.generator();
        for col in 0..idx.column_count(axis) {
            let cells = idx.column(axis, col);
            for r in 0..g.rows() {
                let mut v = vec![Gf::ZERO; size];
                for (x, &cell) in cells.iter().enumerate() {
                    v[cell] = g.get(r, x);
                }
                basis.insert(&v);
                if basis.len() == expected {
                    break 'outer;
                }
            }
        }
    }
    let label = codes.iter().map(|c| c.label()).collect::<Vec<_>>().join("⊞");
    Ok(LinearCode::new(basis.to_matrix(), label))
}

/// Membership in C_1 ⊞ C_2 via H_1 c H_2^T = 0 for an `n1 x n2` row-major `c`.
pub fn dual_tensor_contains(h1: &Matrix, h2: &Matrix, c: &[Gf]) -> bool {
    let f = h1.field();
    let (n1, n2) = (h1.cols(), h2.cols());
    assert_eq!(c.len(), n1 * n2, "tensor size mismatch");
    // t = H_1 c  (m1 x n2)
    let mut t = vec![Gf::ZERO; h1.rows() * n2];
    for a in 0..h1.rows() {
        for x in 0..n1 {
            let h = h1.get(a, x);
            if !h.is_zero() {
                f.axpy(&mut t[a * n2..(a + 1) * n2], h, &c[x * n2..(x + 1) * n2]);
            }
        }
    }
    (0..h1.rows()).all(|a| (0..h2.rows()).all(|b| f.dot(&t[a * n2..(a + 1) * n2], h2.row(b)).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::rs_code;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn index_round_trip() {
        let idx = TensorIndex::new(&[3, 4, 5]);
        for flat in 0..60 {
            assert_eq!(idx.flat(&idx.tuple(flat)), flat);
        }
        for axis in 0..3 {
            let mut seen = vec![0; 60];
            for c in 0..idx.column_count(axis) {
                for cell in idx.column(axis, c) {
                    seen[cell] += 1;
                    assert_eq!(idx.column_of(axis, cell), c);
                }
            }
            assert!(seen.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn dual_tensor_dimension() {
        let f = Field::prime(5).unwrap();
        let c1 = rs_code(&f, 5, 2, None).unwrap();
        let c2 = rs_code(&f, 5, 3, None).unwrap();
        assert_eq!(dual_tensor(&[&c1, &c2]).unwrap().dim(), 19);
    }

    #[test]
    fn trivial_products() {
        let f = Field::prime(3).unwrap();
        let c = rs_code(&f, 3, 2, None).unwrap();
        let z = LinearCode::zero(&f, 3);
        let full = LinearCode::full(&f, 3);
        assert!(tensor(&[&c, &z]).unwrap().is_zero_code());
        assert!(dual_tensor(&[&c, &full]).unwrap().is_full());
    }

    #[test]
    fn membership_forms_agree() {
        let f = Field::of_order(4).unwrap();
        let c1 = rs_code(&f, 4, 1, None).unwrap();
        let c2 = rs_code(&f, 4, 2, None).unwrap();
        let dt = dual_tensor(&[&c1, &c2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut members = 0;
        for i in 0..100 {
            let c = if i % 2 == 0 {
                dt.random_codeword(&mut rng)
            } else {
                f.random_vec(16, &mut rng)
            };
            let a = dual_tensor_contains(c1.parity_check(), c2.parity_check(), &c);
            assert_eq!(a, dt.contains(&c));
            members += a as usize;
        }
        assert!(members >= 50);
    }
}
