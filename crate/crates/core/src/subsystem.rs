//! CSS and subsystem CSS codes and their products.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{weight, Field, Gf, Matrix};
use crate::codes::{coset_min_distance, rs_code, tensor, CodeDoc, DistanceResult, LinearCode, ReedSolomon};
use crate::error::{Error, Result};

/// Ordered pair (Q_X, Q_Z) of codes of equal length.
#[derive(Clone, Debug)]
pub struct CssPair {
    pub qx: LinearCode,
    pub qz: LinearCode,
    pub subsystem: bool,
}

impl CssPair {
    /// Non-subsystem pair; requires Q_X^⊥ ⊆ Q_Z.
    pub fn new(qx: LinearCode, qz: LinearCode) -> Result<Self> {
        Self::check_lengths(&qx, &qz)?;
        if !qx.dual().is_subcode_of(&qz) {
            return Err(Error::NotOrthogonal("Q_X^⊥ is not contained in Q_Z".into()));
        }
        Ok(CssPair {
            qx,
            qz,
            subsystem: false,
        })
    }

    pub fn new_subsystem(qx: LinearCode, qz: LinearCode) -> Result<Self> {
        Self::check_lengths(&qx, &qz)?;
        Ok(CssPair {
            qx,
            qz,
            subsystem: true,
        })
    }

    fn check_lengths(qx: &LinearCode, qz: &LinearCode) -> Result<()> {
        if qx.field() != qz.field() {
            return Err(Error::FieldMismatch);
        }
        if qx.len() != qz.len() {
            return Err(Error::Contract("Q_X and Q_Z lengths differ".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        self.qx.field()
    }

    pub fn len(&self) -> usize {
        self.qx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// dim Q_Z − dim(Q_Z ∩ Q_X^⊥).
    pub fn dim(&self) -> usize {
        let s = self.stabilizers();
        self.qz.dim() - s.dim()
    }

    /// S = Q_Z ∩ Q_X^⊥.
    pub fn stabilizers(&self) -> LinearCode {
        self.qz
            .intersection(&self.qx.dual())
            .expect("lengths checked at construction")
    }

    /// Q_X^⊥ + Q_Z^⊥.
    pub fn gauge(&self) -> LinearCode {
        self.qx
            .dual()
            .sum(&self.qz.dual())
            .expect("lengths checked at construction")
    }

    /// Q_Z + Q_X^⊥, the space of dressed Z-type logicals.
    pub fn z_logical_space(&self) -> LinearCode {
        self.qz.sum(&self.qx.dual()).expect("lengths checked")
    }

    /// Q_X + Q_Z^⊥.
    pub fn x_logical_space(&self) -> LinearCode {
        self.qx.sum(&self.qz.dual()).expect("lengths checked")
    }

    pub fn swapped(&self) -> CssPair {
        CssPair {
            qx: self.qz.clone(),
            qz: self.qx.clone(),
            subsystem: self.subsystem,
        }
    }

    pub fn to_doc(&self) -> CssDoc {
        CssDoc {
            qx: self.qx.to_doc(),
            qz: self.qz.to_doc(),
            subsystem: self.subsystem,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssDoc {
    pub qx: CodeDoc,
    pub qz: CodeDoc,
    pub subsystem: bool,
}

impl CssDoc {
    pub fn to_pair(&self) -> Result<CssPair> {
        let qx = self.qx.to_code()?;
        let qz = self.qz.to_code_in(qx.field())?;
        if self.subsystem {
            CssPair::new_subsystem(qx, qz)
        } else {
            CssPair::new(qx, qz)
        }
    }
}

/// (RS(n, k_x), RS(n, k_z)) on the first n field elements.
pub fn quantum_rs(field: &Field, n: usize, kx: usize, kz: usize) -> Result<CssPair> {
    if kx + kz < n {
        return Err(Error::NotOrthogonal(format!(
            "k_x + k_z = {} < n = {n}",
            kx + kz
        )));
    }
    let qx = rs_code(field, n, kx, None)?.with_label(format!("RS({n},{kx})"));
    let qz = rs_code(field, n, kz, None)?.with_label(format!("RS({n},{kz})"));
    CssPair::new(qx, qz)
}

/// Subsystem product together with its factors.
#[derive(Clone, Debug)]
pub struct ProductCode {
    pub pair: CssPair,
    pub factors: Vec<CssPair>,
    /// Σ of factor localities.
    pub locality: usize,
}

impl ProductCode {
    /// Wrap a code that is not a product; amplified checks are refused.
    pub fn single(pair: CssPair) -> Self {
        let locality = pair_locality(&pair);
        ProductCode {
            pair,
            factors: Vec::new(),
            locality,
        }
    }
}

fn matrix_locality(h: &Matrix) -> usize {
    let rows = (0..h.rows()).map(|i| weight(h.row(i))).max().unwrap_or(0);
    let cols = (0..h.cols()).map(|j| weight(&h.column(j))).max().unwrap_or(0);
    rows.max(cols)
}

fn pair_locality(p: &CssPair) -> usize {
    matrix_locality(p.qx.parity_check()).max(matrix_locality(p.qz.parity_check()))
}

/// Component-wise tensor product of non-subsystem factors.
pub fn subsystem_product(factors: &[CssPair]) -> Result<ProductCode> {
    if factors.is_empty() {
        return Err(Error::Contract("no factors".into()));
    }
    if factors.iter().any(|f| f.subsystem) {
        return Err(Error::Contract("subsystem factors are not allowed".into()));
    }
    if factors.len() == 1 {
        let mut p = ProductCode::single(factors[0].clone());
        p.factors = factors.to_vec();
        return Ok(p);
    }
    let xs: Vec<&LinearCode> = factors.iter().map(|f| &f.qx).collect();
    let zs: Vec<&LinearCode> = factors.iter().map(|f| &f.qz).collect();
    let pair = CssPair::new_subsystem(tensor(&xs)?, tensor(&zs)?)?;
    Ok(ProductCode {
        pair,
        factors: factors.to_vec(),
        locality: factors.iter().map(pair_locality).sum(),
    })
}

/// Distances of both dressed-logical classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsystemDistance {
    /// min over (Q_X + Q_Z^⊥) \ Q_Z^⊥
    pub x: DistanceResult,
    /// min over (Q_Z + Q_X^⊥) \ Q_X^⊥
    pub z: DistanceResult,
}

impl SubsystemDistance {
    pub fn value(&self) -> Option<usize> {
        match (self.x.value, self.z.value) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn exact(&self) -> bool {
        self.x.exact && self.z.exact
    }
}

pub fn subsystem_distance(q: &CssPair, budget: u64) -> SubsystemDistance {
    SubsystemDistance {
        x: coset_min_distance(&q.qx, &q.qz.dual(), budget),
        z: coset_min_distance(&q.qz, &q.qx.dual(), budget),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStyle {
    /// Blocks I ⊗ .. ⊗ H^i ⊗ .. ⊗ I.
    Tensor,
    /// Blocks built from G^i H^i with seeded Reed–Solomon outer generators.
    Amplified { seed: u64 },
}

/// Per-factor outer code used by amplified checks.
#[derive(Clone, Debug)]
pub struct OuterCode {
    pub rs: ReedSolomon,
    /// G^i, shape (length x k).
    pub gen: Matrix,
}

#[derive(Clone, Debug)]
pub struct CheckMatrices {
    pub hx: Matrix,
    pub hz: Matrix,
    pub locality: usize,
    /// Row ranges of each factor block in `hx` / `hz`.
    pub x_blocks: Vec<std::ops::Range<usize>>,
    pub z_blocks: Vec<std::ops::Range<usize>>,
    /// Outer codes for amplified style, per factor.
    pub x_outer: Vec<OuterCode>,
    pub z_outer: Vec<OuterCode>,
}

fn outer_code(field: &Field, m: usize, rng: &mut ChaCha8Rng) -> Result<OuterCode> {
    let q = field.q() as usize;
    let len = (2 * m).min(q).max(m);
    let points: Vec<Gf> = sample(rng, q, len)
        .into_iter()
        .map(|i| field.point(i))
        .collect();
    let rs = ReedSolomon::new(field, len, m, Some(&points))?;
    let gen = rs.generator().transpose();
    Ok(OuterCode { rs, gen })
}

fn stacked(
    f: &Field,
    dims: &[usize],
    blocks: &[Matrix],
) -> Result<(Matrix, Vec<std::ops::Range<usize>>)> {
    let mut out: Option<Matrix> = None;
    let mut ranges = Vec::new();
    let mut start = 0;
    for (i, h) in blocks.iter().enumerate() {
        let mut b = Matrix::identity(f, 1);
        for (j, &n) in dims.iter().enumerate() {
            b = if i == j { b.kron(h)? } else { b.kron(&Matrix::identity(f, n))? };
        }
        ranges.push(start..start + b.rows());
        start += b.rows();
        out = Some(match out {
            None => b,
            Some(m) => m.vstack(&b)?,
        });
    }
    Ok((out.expect("at least one factor"), ranges))
}

pub fn check_matrices(code: &ProductCode, style: CheckStyle) -> Result<CheckMatrices> {
    let f = code.pair.field().clone();
    if code.factors.is_empty() {
        if let CheckStyle::Amplified { .. } = style {
            return Err(Error::Contract("amplified checks need a product code".into()));
        }
        let hx = code.pair.qx.parity_check().clone();
        let hz = code.pair.qz.parity_check().clone();
        let locality = matrix_locality(&hx).max(matrix_locality(&hz));
        return Ok(CheckMatrices {
            x_blocks: vec![0..hx.rows()],
            z_blocks: vec![0..hz.rows()],
            hx,
            hz,
            locality,
            x_outer: vec![],
            z_outer: vec![],
        });
    }
    let dims: Vec<usize> = code.factors.iter().map(|p| p.len()).collect();
    let mut hx_blocks = Vec::new();
    let mut hz_blocks = Vec::new();
    let mut x_outer = Vec::new();
    let mut z_outer = Vec::new();
    let mut rng = match style {
        CheckStyle::Amplified { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        CheckStyle::Tensor => None,
    };
    for p in &code.factors {
        let hx = p.qx.parity_check().clone();
        let hz = p.qz.parity_check().clone();
        match rng.as_mut() {
            Some(r) => {
                let ox = outer_code(&f, hx.rows(), r)?;
                let oz = outer_code(&f, hz.rows(), r)?;
                hx_blocks.push(ox.gen.mul(&hx)?);
                hz_blocks.push(oz.gen.mul(&hz)?);
                x_outer.push(ox);
                z_outer.push(oz);
            }
            None => {
                hx_blocks.push(hx);
                hz_blocks.push(hz);
            }
        }
    }
    let (hx, x_blocks) = stacked(&f, &dims, &hx_blocks)?;
    let (hz, z_blocks) = stacked(&f, &dims, &hz_blocks)?;
    let locality = matrix_locality(&hx).max(matrix_locality(&hz));
    Ok(CheckMatrices {
        hx,
        hz,
        locality,
        x_blocks,
        z_blocks,
        x_outer,
        z_outer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_qrs() {
        let f = Field::of_order(8).unwrap();
        assert_eq!(quantum_rs(&f, 8, 8, 8).unwrap().dim(), 8);
        assert!(quantum_rs(&f, 8, 3, 4).is_err());
        let q = quantum_rs(&f, 8, 5, 6).unwrap();
        assert_eq!(q.qx.dual(), rs_code(&f, 8, 3, None).unwrap());
    }

    #[test]
    fn transrs_factor_dimension() {
        let f = Field::prime(37).unwrap();
        assert_eq!(quantum_rs(&f, 37, 31, 12).unwrap().dim(), 6);
    }

    #[test]
    fn product_dimension_and_locality() {
        let f = Field::of_order(8).unwrap();
        let a = quantum_rs(&f, 8, 5, 5).unwrap();
        let b = quantum_rs(&f, 8, 6, 5).unwrap();
        assert_eq!((a.dim(), b.dim()), (2, 3));
        let p = subsystem_product(&[a.clone(), b]).unwrap();
        assert_eq!(p.pair.dim(), 6);
        let zl = p.pair.z_logical_space().dim() - p.pair.qx.dual().dim();
        assert_eq!(zl, 6);
        assert_eq!(p.locality, pair_locality(&p.factors[0]) + pair_locality(&p.factors[1]));
        assert!(p.locality <= 16);
        let one = subsystem_product(&[a.clone()]).unwrap();
        assert_eq!(one.pair.dim(), a.dim());
    }

    #[test]
    fn tensor_checks_have_right_kernels() {
        let f = Field::of_order(4).unwrap();
        let a = quantum_rs(&f, 4, 3, 2).unwrap();
        let b = quantum_rs(&f, 4, 2, 3).unwrap();
        let p = subsystem_product(&[a, b]).unwrap();
        for style in [CheckStyle::Tensor, CheckStyle::Amplified { seed: 3 }] {
            let h = check_matrices(&p, style).unwrap();
            assert_eq!(LinearCode::from_parity_check(&h.hx, "x"), p.pair.qx);
            assert_eq!(LinearCode::from_parity_check(&h.hz, "z"), p.pair.qz);
            assert!(h.locality <= 2 * 4 + 4);
        }
        assert!(check_matrices(&ProductCode::single(p.pair.clone()), CheckStyle::Amplified { seed: 0 }).is_err());
    }

    #[test]
    fn swap_exchanges_classes() {
        let f = Field::of_order(4).unwrap();
        let p = subsystem_product(&[quantum_rs(&f, 4, 3, 2).unwrap(), quantum_rs(&f, 4, 3, 3).unwrap()]).unwrap();
        let d = subsystem_distance(&p.pair, 1 << 22);
        let s = subsystem_distance(&p.pair.swapped(), 1 << 22);
        assert_eq!(d.x.value, s.z.value);
        assert_eq!(d.z.value, s.x.value);
    }
}
