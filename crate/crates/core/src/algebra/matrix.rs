//! Dense matrices over a finite field with deterministic Gaussian
//! elimination (pivot = first nonzero entry scanning columns left to right,
//! rows top to bottom).

use std::fmt;

use rand::Rng;

use super::field::{Field, Gf};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
    field: Field,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let r: Vec<u32> = self.row(i).iter().map(|x| x.0).collect();
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows of the RREF (rank × cols).
    pub basis: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Gf::ZERO; rows * cols],
            field: field.clone(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Gf::ONE);
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Gf>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            data,
            field: field.clone(),
        })
    }

    /// Build from row vectors; `cols` is used when there are no rows.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Gf>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
            field: field.clone(),
        }
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Gf,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            data,
            field: field.clone(),
        }
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn data(&self) -> &[Gf] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gf {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Gf] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Gf] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Gf>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Gf> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Matrix product.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let (src, dst) = (other.row(k), &mut out.data[i * other.cols..(i + 1) * other.cols]);
                self.field.axpy(dst, a, src);
            }
        }
        Ok(out)
    }

    /// A x
    pub fn mul_vec(&self, x: &[Gf]) -> Vec<Gf> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.field.dot(self.row(i), x))
            .collect()
    }

    /// x^T A
    pub fn vec_mul(&self, x: &[Gf]) -> Vec<Gf> {
        assert_eq!(x.len(), self.rows, "vector length mismatch");
        let mut out = vec![Gf::ZERO; self.cols];
        for (i, &a) in x.iter().enumerate() {
            self.field.axpy(&mut out, a, self.row(i));
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        let (r2, c2) = (other.rows, other.cols);
        let mut out = Matrix::zeros(&self.field, self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    let dst_row = i * r2 + k;
                    let start = dst_row * out.cols + j * c2;
                    self.field
                        .axpy(&mut out.data[start..start + c2], a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            field: self.field.clone(),
        })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack row mismatch".into()));
        }
        Ok(Self::from_fn(
            &self.field,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j)
                } else {
                    other.get(i, j - self.cols)
                }
            },
        ))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows: Vec<Vec<Gf>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(&self.field, self.cols, &rows)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Self::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    /// In-place reduction to RREF; returns pivot columns. Rows below the rank
    /// end up zero.
    fn reduce_in_place(&mut self, col_limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..col_limit {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if piv != r {
                for j in c..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            f.scale(&mut self.data[r * cols + c..(r + 1) * cols], inv);
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let prow = &prow[c..];
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let row = if i < r {
                    &mut before[i * cols..(i + 1) * cols]
                } else {
                    let k = i - r - 1;
                    &mut after[k * cols..(k + 1) * cols]
                };
                let a = row[c];
                if !a.is_zero() {
                    f.axpy(&mut row[c..], f.neg(a), prow);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form (nonzero rows only) with pivots.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        m.data.truncate(pivots.len() * self.cols);
        m.rows = pivots.len();
        Echelon { basis: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            return self.transpose().rank();
        }
        let mut m = self.clone();
        m.reduce_in_place(self.cols).len()
    }

    /// Basis of the right kernel {x : A x = 0}, one vector per row, ordered by
    /// free column.
    pub fn kernel(&self) -> Matrix {
        let e = self.rref();
        kernel_from_rref(&e, self.cols)
    }

    /// Basis of the left kernel {y : y^T A = 0}.
    pub fn left_kernel(&self) -> Matrix {
        self.transpose().kernel()
    }

    /// Some solution of A x = b (free variables zero), or None.
    pub fn solve(&self, b: &[Gf]) -> Option<Vec<Gf>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.reduce_in_place(self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Gf::ZERO; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix, or None when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(&self.field, n)).ok()?;
        let pivots = aug.reduce_in_place(n);
        if pivots.len() < n {
            return None;
        }
        Some(Self::from_fn(&self.field, n, n, |i, j| aug.get(i, n + j)))
    }

    /// RREF basis of the row space.
    pub fn row_space(&self) -> Matrix {
        self.rref().basis
    }

    pub fn row_space_contains(&self, v: &[Gf]) -> bool {
        let mut b = EchelonBasis::new(&self.field, self.cols);
        for i in 0..self.rows {
            b.insert(self.row(i));
        }
        b.contains(v)
    }

    /// Basis of the intersection of the two row spaces.
    pub fn row_space_intersection(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension("intersection column mismatch".into()));
        }
        let a = self.row_space();
        let b = other.row_space();
        let stacked = a.vstack(&b)?;
        let k = stacked.left_kernel();
        let mut basis = EchelonBasis::new(&self.field, self.cols);
        for i in 0..k.rows() {
            let x = &k.row(i)[..a.rows()];
            basis.insert(&a.vec_mul(x));
        }
        Ok(basis.to_rref())
    }

    /// True when the row space of `self` lies inside that of `other`.
    pub fn row_space_within(&self, other: &Matrix) -> bool {
        let mut b = EchelonBasis::new(&self.field, self.cols);
        for i in 0..other.rows {
            b.insert(other.row(i));
        }
        (0..self.rows).all(|i| b.contains(self.row(i)))
    }

    pub fn same_row_space(&self, other: &Matrix) -> bool {
        self.cols == other.cols && self.row_space_within(other) && other.row_space_within(self)
    }
}

pub(crate) fn kernel_from_rref(e: &Echelon, cols: usize) -> Matrix {
    let field = e.basis.field();
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = Matrix::zeros(field, free.len(), cols);
    for (k, &fc) in free.iter().enumerate() {
        out.set(k, fc, Gf::ONE);
        for (r, &pc) in e.pivots.iter().enumerate() {
            let v = e.basis.get(r, fc);
            if !v.is_zero() {
                out.set(k, pc, field.neg(v));
            }
        }
    }
    out
}

/// Incrementally built row-echelon basis. Each stored row has a pivot where
/// every other stored row is zero among earlier rows, which is enough for
/// reducing new vectors in insertion order.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    n: usize,
    rows: Vec<Vec<Gf>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, n: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let mut b = Self::new(m.field(), m.cols());
        for i in 0..m.rows() {
            b.insert(m.row(i));
        }
        b
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Gf>] {
        &self.rows
    }

    /// Residual of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[Gf]) -> Vec<Gf> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    fn reduce_in_place(&self, w: &mut [Gf]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let a = w[p];
            if !a.is_zero() {
                self.field.axpy(w, self.field.neg(a), row);
            }
        }
    }

    /// Coordinates of `v` in the stored rows, if `v` is in the span.
    pub fn coordinates(&self, v: &[Gf]) -> Option<Vec<Gf>> {
        let mut w = v.to_vec();
        let mut coords = vec![Gf::ZERO; self.rows.len()];
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let a = w[p];
            if !a.is_zero() {
                coords[k] = a;
                self.field.axpy(&mut w, self.field.neg(a), row);
            }
        }
        w.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[Gf]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Insert `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &[Gf]) -> bool {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        if self.is_full() {
            return false;
        }
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(w[p]);
        self.field.scale(&mut w, inv);
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    /// Stored rows as a matrix (insertion order).
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.field, self.n, &self.rows)
    }

    /// Canonical RREF basis of the span.
    pub fn to_rref(&self) -> Matrix {
        self.to_matrix().row_space()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_zero() {
        let f = Field::prime(7).unwrap();
        let i = Matrix::identity(&f, 5);
        assert_eq!(i.rank(), 5);
        assert_eq!(i.kernel().rows(), 0);
        let z = Matrix::zeros(&f, 3, 4);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel().rows(), 4);
    }

    #[test]
    fn solve_and_kernel() {
        let f = Field::of_order(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = Matrix::random(&f, 4, 6, &mut rng);
            let k = a.kernel();
            assert_eq!(a.rank() + k.rows(), 6);
            for r in 0..k.rows() {
                assert!(a.mul_vec(k.row(r)).iter().all(|x| x.is_zero()));
            }
            let x0 = f.random_vec(6, &mut rng);
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).unwrap();
            assert_eq!(a.mul_vec(&x), b);
        }
        let a = Matrix::from_rows(&f, 2, &[vec![Gf(1), Gf(0)], vec![Gf(1), Gf(0)]]);
        assert!(a.solve(&[Gf(1), Gf(2)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::of_order(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Matrix::random(&f, 6, 6, &mut rng);
        if let Some(inv) = a.inverse() {
            assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&f, 6));
        }
    }

    #[test]
    fn intersection_dimension() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = Matrix::random(&f, 3, 6, &mut rng);
            let b = Matrix::random(&f, 4, 6, &mut rng);
            let i = a.row_space_intersection(&b).unwrap();
            let sum = a.vstack(&b).unwrap().rank();
            assert_eq!(i.rows(), a.rank() + b.rank() - sum);
            assert!(i.row_space_within(&a) && i.row_space_within(&b));
        }
    }
}
