//! Approximate decoder for dual tensor products of two Reed–Solomon codes.
//!
//! The decoder runs three stages: a relaxed decode into the degree-enlarged
//! codes (`dec_init`), a degree correction back into C_1 ⊞ C_2
//! (`dec_close`), and a greedy peeling of single-line codewords
//! (`dec_finish`).

use serde::{Deserialize, Serialize};

use crate::algebra::{poly_gcd_many, weight, Field, FieldSpec, Gf, Matrix, UniPoly};
use crate::codes::{berlekamp_welch, rs_code};
use crate::error::{Error, Result};

/// How the constant 1000 in s, d₀ and α is treated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConstantsMode {
    Literal,
    /// Replace 1000 by `gamma`; every derived quantity is rescaled with it.
    Scaled { gamma: f64 },
}

impl ConstantsMode {
    pub fn gamma(&self) -> f64 {
        match self {
            ConstantsMode::Literal => 1000.0,
            ConstantsMode::Scaled { gamma } => *gamma,
        }
    }
}

impl Default for ConstantsMode {
    fn default() -> Self {
        ConstantsMode::Scaled { gamma: 20.0 }
    }
}

#[derive(Clone, Debug)]
pub struct DualTensorInstance {
    field: Field,
    n: usize,
    k1: usize,
    k2: usize,
    e1: Vec<Gf>,
    e2: Vec<Gf>,
    eps: f64,
    rho: f64,
    mode: ConstantsMode,
    h1: Matrix,
    h2: Matrix,
    h1s: Matrix,
    h2s: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub field: FieldSpec,
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub e1: Vec<u32>,
    pub e2: Vec<u32>,
    pub eps: f64,
    pub rho: f64,
    pub mode: ConstantsMode,
}

impl DualTensorInstance {
    /// Evaluation sets default to the first `n` field elements.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: &Field,
        n: usize,
        k1: usize,
        k2: usize,
        e1: Option<Vec<Gf>>,
        e2: Option<Vec<Gf>>,
        eps: f64,
        rho: f64,
        mode: ConstantsMode,
    ) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) || !(rho > 0.0) {
            return Err(Error::Contract("need 0 < ε <= 1 and ρ > 0".into()));
        }
        if (k1 + k2) as f64 > (1.0 - eps) * n as f64 + 1e-9 {
            return Err(Error::Contract(format!(
                "k1 + k2 = {} exceeds (1-ε)n",
                k1 + k2
            )));
        }
        let e1 = e1.unwrap_or_else(|| field.points(n));
        let e2 = e2.unwrap_or_else(|| field.points(n));
        let mut inst = DualTensorInstance {
            field: field.clone(),
            n,
            k1,
            k2,
            e1,
            e2,
            eps,
            rho,
            mode,
            h1: Matrix::zeros(field, 0, 0),
            h2: Matrix::zeros(field, 0, 0),
            h1s: Matrix::zeros(field, 0, 0),
            h2s: Matrix::zeros(field, 0, 0),
        };
        let s = inst.s();
        if k1 + s > n || k2 + s > n {
            return Err(Error::Contract(format!("k_i + s exceeds n (s = {s})")));
        }
        inst.h1 = rs_code(field, n, k1, Some(&inst.e1))?.parity_check().clone();
        inst.h2 = rs_code(field, n, k2, Some(&inst.e2))?.parity_check().clone();
        inst.h1s = rs_code(field, n, k1 + s, Some(&inst.e1))?.parity_check().clone();
        inst.h2s = rs_code(field, n, k2 + s, Some(&inst.e2))?.parity_check().clone();
        Ok(inst)
    }

    pub fn from_doc(doc: &InstanceDoc) -> Result<Self> {
        let f = Field::from_spec(&doc.field)?;
        let pts = |v: &[u32]| -> Result<Vec<Gf>> {
            v.iter()
                .map(|&x| {
                    let g = Gf(x);
                    if f.contains(g) {
                        Ok(g)
                    } else {
                        Err(Error::Serde(format!("{x} is not a field element")))
                    }
                })
                .collect()
        };
        Self::new(
            &f,
            doc.n,
            doc.k1,
            doc.k2,
            Some(pts(&doc.e1)?),
            Some(pts(&doc.e2)?),
            doc.eps,
            doc.rho,
            doc.mode,
        )
    }

    pub fn to_doc(&self) -> InstanceDoc {
        InstanceDoc {
            field: self.field.spec(),
            n: self.n,
            k1: self.k1,
            k2: self.k2,
            e1: self.e1.iter().map(|x| x.0).collect(),
            e2: self.e2.iter().map(|x| x.0).collect(),
            eps: self.eps,
            rho: self.rho,
            mode: self.mode,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.k1, self.k2)
    }

    pub fn points(&self) -> (&[Gf], &[Gf]) {
        (&self.e1, &self.e2)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mode(&self) -> ConstantsMode {
        self.mode
    }

    fn scale(&self) -> f64 {
        self.rho * self.eps * self.n as f64 / self.mode.gamma()
    }

    /// ⌈ρεn/γ⌉
    pub fn s(&self) -> usize {
        (self.scale() - 1e-12).ceil().max(1.0) as usize
    }

    /// (ρεn/γ)²
    pub fn d0(&self) -> f64 {
        self.scale().powi(2)
    }

    /// (γ/ρε)²
    pub fn alpha(&self) -> f64 {
        (self.mode.gamma() / (self.rho * self.eps)).powi(2)
    }

    /// Bound on |c' − c| after the first stage.
    pub fn stage1_bound(&self) -> f64 {
        match self.mode {
            ConstantsMode::Literal => self.rho * self.eps * (self.n * self.n) as f64 / 50.0,
            ConstantsMode::Scaled { .. } => (9 * self.s() * self.n) as f64,
        }
    }

    /// Decoding radius of the stripe decoders in the second stage.
    pub fn stage2_radius(&self, k: usize) -> usize {
        let r = (40.0 * self.eps * self.n as f64 / self.mode.gamma()).floor() as usize;
        r.min((self.n - k - self.s()) / 2)
    }

    /// 8|b|/ε
    pub fn stage3_bound(&self, b: usize) -> f64 {
        8.0 * b as f64 / self.eps
    }

    /// Lines within distance < εn/2 of a nonzero codeword are peeled.
    pub fn finish_threshold(&self) -> f64 {
        self.eps * self.n as f64 / 2.0
    }

    /// H_1 c H_2^T = 0
    pub fn contains(&self, c: &[Gf]) -> bool {
        is_zero_sandwich(&self.field, &self.h1, &self.h2, c, self.n)
    }

    fn contains_enlarged(&self, c: &[Gf]) -> bool {
        is_zero_sandwich(&self.field, &self.h1s, &self.h2s, c, self.n)
    }

    pub fn parity_checks(&self) -> (&Matrix, &Matrix) {
        (&self.h1, &self.h2)
    }

    /// a(x) + b(x) with deg_1 a < k1 or deg_2 a < k2, from random coefficients.
    pub fn random_codeword<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<Gf> {
        let f = &self.field;
        let n = self.n;
        let mut coeffs = Matrix::zeros(f, n, n);
        for j1 in 0..n {
            for j2 in 0..n {
                if j1 < self.k1 || j2 < self.k2 {
                    coeffs.set(j1, j2, f.random(rng));
                }
            }
        }
        let v1 = vandermonde(f, &self.e1);
        let v2 = vandermonde(f, &self.e2);
        let c = v1
            .mul(&coeffs)
            .and_then(|m| m.mul(&v2.transpose()))
            .expect("square shapes");
        c.data().to_vec()
    }
}

fn vandermonde(f: &Field, pts: &[Gf]) -> Matrix {
    Matrix::from_fn(f, pts.len(), pts.len(), |i, j| f.pow(pts[i], j as u64))
}

fn as_matrix(f: &Field, c: &[Gf], n: usize) -> Matrix {
    Matrix::from_vec(f, n, n, c.to_vec()).expect("word has n² entries")
}

fn is_zero_sandwich(f: &Field, h1: &Matrix, h2: &Matrix, c: &[Gf], n: usize) -> bool {
    let m = as_matrix(f, c, n);
    h1.mul(&m)
        .and_then(|x| x.mul(&h2.transpose()))
        .map(|x| x.is_zero())
        .unwrap_or(false)
}

/// Output of [`dec_init`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InitTrace {
    pub output: Vec<Gf>,
    /// Coefficients of e₀, indexed j1·(s+1) + j2.
    pub e0: Vec<Gf>,
    /// Sizes of E'_1, E'_2 after lines 2, 5 and 8.
    pub e1_sizes: [usize; 3],
    pub e2_sizes: [usize; 3],
    /// |supp(e₀) ∩ E'|
    pub trusted_cells: usize,
}

/// Output of [`dec_close`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CloseTrace {
    pub output: Vec<Gf>,
    pub row_corrections: Vec<usize>,
    pub column_corrections: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinishTrace {
    pub output: Vec<Gf>,
    pub iterations: usize,
    pub peels: usize,
}

struct Stage1 {
    s: usize,
    /// (n·n) x (s+1)² evaluations x^j of each monomial.
    monomials: Vec<Vec<Gf>>,
}

impl Stage1 {
    fn new(inst: &DualTensorInstance) -> Self {
        let f = &inst.field;
        let s = inst.s();
        let n = inst.n;
        let mut monomials = Vec::with_capacity((s + 1) * (s + 1));
        for j1 in 0..=s {
            for j2 in 0..=s {
                let mut v = Vec::with_capacity(n * n);
                for &x1 in &inst.e1 {
                    let a = f.pow(x1, j1 as u64);
                    for &x2 in &inst.e2 {
                        v.push(f.mul(a, f.pow(x2, j2 as u64)));
                    }
                }
                monomials.push(v);
            }
        }
        Stage1 { s, monomials }
    }

    fn eval_e(&self, f: &Field, e: &[Gf], cell: usize) -> Gf {
        e.iter()
            .zip(&self.monomials)
            .fold(Gf::ZERO, |acc, (&a, m)| f.add(acc, f.mul(a, m[cell])))
    }

    /// e(x1, X2) as a polynomial in X2.
    fn restrict_row(&self, f: &Field, e: &[Gf], x1: Gf) -> UniPoly {
        let s = self.s;
        UniPoly::new(
            (0..=s)
                .map(|j2| {
                    (0..=s).fold(Gf::ZERO, |acc, j1| {
                        f.add(acc, f.mul(e[j1 * (s + 1) + j2], f.pow(x1, j1 as u64)))
                    })
                })
                .collect(),
        )
    }

    /// e(X1, x2) as a polynomial in X1.
    fn restrict_column(&self, f: &Field, e: &[Gf], x2: Gf) -> UniPoly {
        let s = self.s;
        UniPoly::new(
            (0..=s)
                .map(|j1| {
                    (0..=s).fold(Gf::ZERO, |acc, j2| {
                        f.add(acc, f.mul(e[j1 * (s + 1) + j2], f.pow(x2, j2 as u64)))
                    })
                })
                .collect(),
        )
    }
}

/// Columns of the map w ↦ H'_1 w H'_2^T, one per cell in `cells`, as rows.
fn cell_images(inst: &DualTensorInstance, cells: &[usize]) -> Vec<Vec<Gf>> {
    let f = &inst.field;
    let n = inst.n;
    let (m1, m2) = (inst.h1s.rows(), inst.h2s.rows());
    cells
        .iter()
        .map(|&x| {
            let (x1, x2) = (x / n, x % n);
            let mut v = Vec::with_capacity(m1 * m2);
            for r1 in 0..m1 {
                let a = inst.h1s.get(r1, x1);
                for r2 in 0..m2 {
                    v.push(f.mul(a, inst.h2s.get(r2, x2)));
                }
            }
            v
        })
        .collect()
}

fn sandwich_enlarged(inst: &DualTensorInstance, w: &[Gf]) -> Vec<Gf> {
    let m = as_matrix(&inst.field, w, inst.n);
    inst.h1s
        .mul(&m)
        .and_then(|x| x.mul(&inst.h2s.transpose()))
        .expect("shapes agree")
        .data()
        .to_vec()
}

/// Basis of all e with (e·c)|_T ∈ (C'_1 ⊞ C'_2)|_T.
fn restricted_basis(inst: &DualTensorInstance, st: &Stage1, c: &[Gf], trusted: &[bool]) -> Vec<Vec<Gf>> {
    let f = &inst.field;
    let nn = inst.n * inst.n;
    let ne = st.monomials.len();
    let free: Vec<usize> = (0..nn).filter(|&x| !trusted[x]).collect();
    let mut columns: Vec<Vec<Gf>> = st
        .monomials
        .iter()
        .map(|m| {
            let w: Vec<Gf> = (0..nn)
                .map(|x| if trusted[x] { f.mul(m[x], c[x]) } else { Gf::ZERO })
                .collect();
            sandwich_enlarged(inst, &w)
        })
        .collect();
    columns.extend(cell_images(inst, &free));
    let rows = columns[0].len();
    let sys = Matrix::from_fn(f, rows, columns.len(), |i, j| columns[j][i]);
    let kernel = sys.kernel();
    let proj: Vec<Vec<Gf>> = kernel.row_vecs().into_iter().map(|v| v[..ne].to_vec()).collect();
    if proj.is_empty() {
        return proj;
    }
    Matrix::from_rows(f, ne, &proj).row_space().row_vecs()
}

fn gcds(inst: &DualTensorInstance, st: &Stage1, basis: &[Vec<Gf>], axis: usize, keep: &[bool]) -> Vec<Option<UniPoly>> {
    let f = &inst.field;
    let pts = if axis == 0 { &inst.e1 } else { &inst.e2 };
    pts.iter()
        .enumerate()
        .map(|(i, &x)| {
            if !keep[i] {
                return None;
            }
            let polys: Vec<UniPoly> = basis
                .iter()
                .map(|e| {
                    if axis == 0 {
                        st.restrict_row(f, e, x)
                    } else {
                        st.restrict_column(f, e, x)
                    }
                })
                .collect();
            // An all-zero family has gcd 0.
            Some(poly_gcd_many(f, &polys).unwrap_or_else(UniPoly::zero))
        })
        .collect()
}

fn trusted_cells(inst: &DualTensorInstance, st: &Stage1, e0: &[Gf], k1: &[bool], k2: &[bool]) -> Vec<bool> {
    let n = inst.n;
    (0..n * n)
        .map(|x| k1[x / n] && k2[x % n] && st.eval_e(&inst.field, e0, x) != Gf::ZERO)
        .collect()
}

/// Relaxed decode of `c` into C'_1 ⊞ C'_2.
pub fn dec_init(inst: &DualTensorInstance, c: &[Gf]) -> Result<InitTrace> {
    let f = &inst.field;
    let n = inst.n;
    if c.len() != n * n {
        return Err(Error::Dimension(format!("word has {} entries, expected {}", c.len(), n * n)));
    }
    let st = Stage1::new(inst);
    let s = st.s;

    let e0 = {
        let cols: Vec<Vec<Gf>> = st
            .monomials
            .iter()
            .map(|m| sandwich_enlarged(inst, &f.mul_vec(m, c)))
            .collect();
        let sys = Matrix::from_fn(f, cols[0].len(), cols.len(), |i, j| cols[j][i]);
        let k = sys.kernel();
        if k.rows() == 0 {
            return Err(Error::DecodeFailure("no admissible e0".into()));
        }
        k.row(0).to_vec()
    };

    let mut keep1: Vec<bool> = inst.e1.iter().map(|&x| !st.restrict_row(f, &e0, x).is_zero()).collect();
    let mut keep2: Vec<bool> = inst.e2.iter().map(|&x| !st.restrict_column(f, &e0, x).is_zero()).collect();
    let count = |v: &[bool]| v.iter().filter(|&&b| b).count();
    let mut e1_sizes = [count(&keep1), 0, 0];
    let mut e2_sizes = [count(&keep2), 0, 0];

    let trusted = trusted_cells(inst, &st, &e0, &keep1, &keep2);
    let basis = restricted_basis(inst, &st, c, &trusted);
    let g1 = gcds(inst, &st, &basis, 0, &keep1);
    let g2 = gcds(inst, &st, &basis, 1, &keep2);
    loop {
        let mut hit = None;
        'scan: for i1 in 0..n {
            if !keep1[i1] {
                continue;
            }
            for i2 in 0..n {
                if !keep2[i2] {
                    continue;
                }
                let a = g1[i1].as_ref().expect("kept").eval(f, inst.e2[i2]);
                let b = g2[i2].as_ref().expect("kept").eval(f, inst.e1[i1]);
                if a == Gf::ZERO || b == Gf::ZERO {
                    hit = Some((i1, i2));
                    break 'scan;
                }
            }
        }
        match hit {
            Some((i1, i2)) => {
                keep1[i1] = false;
                keep2[i2] = false;
            }
            None => break,
        }
    }
    e1_sizes[1] = count(&keep1);
    e2_sizes[1] = count(&keep2);

    let trusted = trusted_cells(inst, &st, &e0, &keep1, &keep2);
    let basis = restricted_basis(inst, &st, c, &trusted);
    let g1 = gcds(inst, &st, &basis, 0, &keep1);
    let g2 = gcds(inst, &st, &basis, 1, &keep2);
    for (k, g) in keep1.iter_mut().zip(&g1) {
        if g.as_ref().is_some_and(|g| !g.is_one()) {
            *k = false;
        }
    }
    for (k, g) in keep2.iter_mut().zip(&g2) {
        if g.as_ref().is_some_and(|g| !g.is_one()) {
            *k = false;
        }
    }
    e1_sizes[2] = count(&keep1);
    e2_sizes[2] = count(&keep2);

    let trusted = trusted_cells(inst, &st, &e0, &keep1, &keep2);
    let free: Vec<usize> = (0..n * n).filter(|&x| !trusted[x]).collect();
    let fixed: Vec<Gf> = (0..n * n).map(|x| if trusted[x] { c[x] } else { Gf::ZERO }).collect();
    let rhs: Vec<Gf> = sandwich_enlarged(inst, &fixed).into_iter().map(|v| f.neg(v)).collect();
    let mut out = fixed;
    if !free.is_empty() {
        let cols = cell_images(inst, &free);
        let sys = Matrix::from_fn(f, rhs.len(), cols.len(), |i, j| cols[j][i]);
        let w = sys
            .solve(&rhs)
            .ok_or_else(|| Error::DecodeFailure("no enlarged codeword agrees on the trusted cells".into()))?;
        for (&x, v) in free.iter().zip(w) {
            out[x] = v;
        }
    } else if rhs.iter().any(|&v| v != Gf::ZERO) {
        return Err(Error::DecodeFailure("trusted cells are inconsistent".into()));
    }
    debug_assert!(inst.contains_enlarged(&out));
    debug_assert_eq!(e0.len(), (s + 1) * (s + 1));
    Ok(InitTrace {
        output: out,
        e0,
        e1_sizes,
        e2_sizes,
        trusted_cells: trusted.iter().filter(|&&b| b).count(),
    })
}

/// Degree correction of c' ∈ C'_1 ⊞ C'_2 into C_1 ⊞ C_2.
pub fn dec_close(inst: &DualTensorInstance, cp: &[Gf]) -> Result<CloseTrace> {
    let f = &inst.field;
    let n = inst.n;
    let s = inst.s();
    let m = as_matrix(f, cp, n);
    let v1 = vandermonde(f, &inst.e1);
    let v2 = vandermonde(f, &inst.e2);
    let v1i = v1
        .inverse()
        .ok_or_else(|| Error::Inconsistent("repeated evaluation points".into()))?;
    let v2i = v2
        .inverse()
        .ok_or_else(|| Error::Inconsistent("repeated evaluation points".into()))?;
    // Row j1 of V1^{-1} c' is ev_{E2} of the X1^{j1} coefficient polynomial.
    let rows = v1i.mul(&m)?;
    let cols = m.mul(&v2i.transpose())?;
    let mut out = cp.to_vec();
    let mut row_corrections = Vec::with_capacity(s);
    let mut column_corrections = Vec::with_capacity(s);
    let r2 = inst.stage2_radius(inst.k2);
    for j1 in inst.k1..inst.k1 + s {
        let word = rows.row(j1);
        let (cw, _) = berlekamp_welch(f, &inst.e2, inst.k2 + s, word, r2)
            .ok_or_else(|| Error::DecodeFailure(format!("coefficient row {j1} is not decodable")))?;
        let r = f.sub_vec(word, &cw);
        row_corrections.push(weight(&r));
        for (i1, &x1) in inst.e1.iter().enumerate() {
            let a = f.pow(x1, j1 as u64);
            for i2 in 0..n {
                let v = &mut out[i1 * n + i2];
                *v = f.sub(*v, f.mul(a, r[i2]));
            }
        }
    }
    let r1 = inst.stage2_radius(inst.k1);
    for j2 in inst.k2..inst.k2 + s {
        let word = cols.column(j2);
        let (cw, _) = berlekamp_welch(f, &inst.e1, inst.k1 + s, &word, r1)
            .ok_or_else(|| Error::DecodeFailure(format!("coefficient column {j2} is not decodable")))?;
        let r = f.sub_vec(&word, &cw);
        column_corrections.push(weight(&r));
        for (i2, &x2) in inst.e2.iter().enumerate() {
            let a = f.pow(x2, j2 as u64);
            for i1 in 0..n {
                let v = &mut out[i1 * n + i2];
                *v = f.sub(*v, f.mul(r[i1], a));
            }
        }
    }
    if !inst.contains(&out) {
        return Err(Error::DecodeFailure("degree correction left the code".into()));
    }
    Ok(CloseTrace {
        output: out,
        row_corrections,
        column_corrections,
    })
}

/// Greedy line peeling; returns y' ∈ y + C_1 ⊞ C_2.
pub fn dec_finish(inst: &DualTensorInstance, y: &[Gf]) -> Result<FinishTrace> {
    let f = &inst.field;
    let n = inst.n;
    let thr = inst.finish_threshold();
    // largest integer strictly below εn/2
    let radius = (thr.ceil() as usize).saturating_sub(1);
    let mut y = y.to_vec();
    let mut iterations = 0;
    let mut peels = 0;
    let d1 = n - inst.k1 + 1;
    let d2 = n - inst.k2 + 1;
    let peel_column = |y: &mut Vec<Gf>| -> bool {
        for i2 in 0..n {
            let col: Vec<Gf> = (0..n).map(|i1| y[i1 * n + i2]).collect();
            if weight(&col) + radius < d1 {
                continue;
            }
            if let Some((cw, _)) = berlekamp_welch(f, &inst.e1, inst.k1, &col, radius) {
                if weight(&cw) > 0 && (weight(&f.sub_vec(&cw, &col)) as f64) < thr {
                    for i1 in 0..n {
                        y[i1 * n + i2] = f.sub(y[i1 * n + i2], cw[i1]);
                    }
                    return true;
                }
            }
        }
        false
    };
    let peel_row = |y: &mut Vec<Gf>| -> bool {
        for i1 in 0..n {
            let row = &y[i1 * n..(i1 + 1) * n];
            if weight(row) + radius < d2 {
                continue;
            }
            if let Some((cw, _)) = berlekamp_welch(f, &inst.e2, inst.k2, row, radius) {
                if weight(&cw) > 0 && (weight(&f.sub_vec(&cw, row)) as f64) < thr {
                    for i2 in 0..n {
                        y[i1 * n + i2] = f.sub(y[i1 * n + i2], cw[i2]);
                    }
                    return true;
                }
            }
        }
        false
    };
    loop {
        if iterations >= n * n {
            return Err(Error::DecodeFailure(format!("peeling exceeded {} iterations", n * n)));
        }
        iterations += 1;
        let a = peel_column(&mut y);
        let b = peel_row(&mut y);
        peels += a as usize + b as usize;
        if !a && !b {
            break;
        }
    }
    Ok(FinishTrace {
        output: y,
        iterations,
        peels,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodePath {
    /// Input was already a codeword.
    Member,
    /// All three stages succeeded.
    Stages,
    /// A stage failed; some codeword was returned instead.
    Fallback,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecodeReport {
    pub output: Vec<Gf>,
    pub path: DecodePath,
    pub fallback: bool,
    /// |ĉ − c|
    pub residual: usize,
    pub init: Option<InitTrace>,
    pub close: Option<CloseTrace>,
    pub finish: Option<FinishTrace>,
    pub failure: Option<String>,
}

impl DecodeReport {
    /// |c' − c| after the first stage.
    pub fn stage1_residual(&self, c: &[Gf]) -> Option<usize> {
        self.init.as_ref().map(|t| hamming(&t.output, c))
    }
}

pub fn hamming(a: &[Gf], b: &[Gf]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn run_stages(inst: &DualTensorInstance, c: &[Gf], rep: &mut DecodeReport) -> Result<Vec<Gf>> {
    let f = &inst.field;
    let init = dec_init(inst, c)?;
    rep.init = Some(init.clone());
    let close = dec_close(inst, &init.output)?;
    rep.close = Some(close.clone());
    let y = f.sub_vec(&close.output, c);
    let fin = dec_finish(inst, &y)?;
    let out = f.add_vec(c, &fin.output);
    rep.finish = Some(fin);
    if !inst.contains(&out) {
        return Err(Error::DecodeFailure("final word is not a codeword".into()));
    }
    Ok(out)
}

/// α-decoder: always returns an element of C_1 ⊞ C_2.
pub fn alpha_decode(inst: &DualTensorInstance, c: &[Gf]) -> Result<DecodeReport> {
    let n = inst.n;
    if c.len() != n * n {
        return Err(Error::Dimension(format!("word has {} entries, expected {}", c.len(), n * n)));
    }
    let mut rep = DecodeReport {
        output: c.to_vec(),
        path: DecodePath::Member,
        fallback: false,
        residual: 0,
        init: None,
        close: None,
        finish: None,
        failure: None,
    };
    if inst.contains(c) {
        return Ok(rep);
    }
    match run_stages(inst, c, &mut rep) {
        Ok(out) => {
            rep.residual = hamming(&out, c);
            rep.output = out;
            rep.path = DecodePath::Stages;
        }
        Err(e) => {
            let out = match &rep.close {
                Some(t) if inst.contains(&t.output) => t.output.clone(),
                _ => vec![Gf::ZERO; n * n],
            };
            rep.residual = hamming(&out, c);
            rep.output = out;
            rep.path = DecodePath::Fallback;
            rep.fallback = true;
            rep.failure = Some(e.to_string());
        }
    }
    Ok(rep)
}
