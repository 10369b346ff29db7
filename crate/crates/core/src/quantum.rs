//! Decoders for products of quantum Reed–Solomon codes: the reduction of
//! Z-side decoding to the dual tensor decoder, coset decoders for the CSS
//! homological product and the subsystem product, the syndrome formulation,
//! and single-shot decoding from a noisy syndrome.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{weight, EchelonBasis, Field, Gf, Matrix};
use crate::chain::{hom_product, SingleSectorComplex};
use crate::codes::{dual_tensor_contains, rs_code, tensor, LinearCode, ReedSolomon, TensorIndex};
use crate::decoder::{alpha_decode, hamming, ConstantsMode, DecodePath, DualTensorInstance};
use crate::error::{Error, Result};
use crate::subsystem::{
    check_matrices, quantum_rs, subsystem_product, CheckMatrices, CheckStyle, ProductCode,
};

/// Syndromes of at most this length are projected onto im H exactly.
pub const EXACT_SYNDROME_LIMIT: usize = 24;

/// Largest syndrome-noise weight the fallback projection searches.
pub const PROJECTION_FALLBACK_WEIGHT: usize = 4;

/// The gauge space a correction coset is taken modulo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeSpace {
    XPerp,
    ZPerp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionCoset {
    pub representative: Vec<Gf>,
    pub modulus: GaugeSpace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyndromeInput {
    pub s_x: Vec<Gf>,
    pub s_z: Vec<Gf>,
}

/// Linear map v = Σ y_j rows_j ↦ Σ y_j images_j, defined on the row space.
#[derive(Clone, Debug)]
struct Section {
    pivots: Vec<usize>,
    reduced: Matrix,
    images: Matrix,
}

impl Section {
    fn new(rows: &Matrix, images: &Matrix) -> Result<Self> {
        let f = rows.field();
        let cols = rows.cols();
        let e = rows.hstack(images)?.rref();
        let keep: Vec<usize> = (0..e.pivots.len()).filter(|&i| e.pivots[i] < cols).collect();
        Ok(Section {
            pivots: keep.iter().map(|&i| e.pivots[i]).collect(),
            reduced: Matrix::from_fn(f, keep.len(), cols, |i, j| e.basis.get(keep[i], j)),
            images: Matrix::from_fn(f, keep.len(), images.cols(), |i, j| {
                e.basis.get(keep[i], cols + j)
            }),
        })
    }

    fn apply(&self, v: &[Gf]) -> Option<Vec<Gf>> {
        let f = self.reduced.field();
        let mut rest = v.to_vec();
        let mut out = vec![Gf::ZERO; self.images.cols()];
        for (i, &p) in self.pivots.iter().enumerate() {
            let a = rest[p];
            if !a.is_zero() {
                f.axpy(&mut rest, f.neg(a), self.reduced.row(i));
                f.axpy(&mut out, a, self.images.row(i));
            }
        }
        rest.iter().all(|x| x.is_zero()).then_some(out)
    }
}

fn transpose_square(v: &[Gf], n: usize) -> Vec<Gf> {
    (0..n * n).map(|x| v[(x % n) * n + x / n]).collect()
}

fn for_each_of_weight(
    f: &Field,
    cols: &[Vec<Gf>],
    w: usize,
    visit: &mut dyn FnMut(&[(usize, Gf)], &[Gf]),
) {
    fn rec(
        f: &Field,
        cols: &[Vec<Gf>],
        start: usize,
        left: usize,
        sparse: &mut Vec<(usize, Gf)>,
        stack: &mut Vec<Vec<Gf>>,
        visit: &mut dyn FnMut(&[(usize, Gf)], &[Gf]),
    ) {
        if left == 0 {
            visit(sparse, stack.last().expect("stack is never empty"));
            return;
        }
        if cols.len() < left {
            return;
        }
        for j in start..=cols.len() - left {
            for a in 1..f.q() {
                let mut s = stack.last().expect("stack is never empty").clone();
                f.axpy(&mut s, Gf(a), &cols[j]);
                stack.push(s);
                sparse.push((j, Gf(a)));
                rec(f, cols, j + 1, left - 1, sparse, stack, visit);
                sparse.pop();
                stack.pop();
            }
        }
    }
    let r = cols.first().map_or(0, |c| c.len());
    let mut stack = vec![vec![Gf::ZERO; r]];
    rec(f, cols, 0, w, &mut Vec::new(), &mut stack, visit);
}

/// Syndromes of every vector of weight <= `half`, for meet-in-the-middle
/// coset-leader search.
#[derive(Clone, Debug)]
pub struct CosetTable {
    field: Field,
    cols: Vec<Vec<Gf>>,
    half: usize,
    table: HashMap<Vec<Gf>, Vec<(usize, Gf)>>,
}

impl CosetTable {
    pub fn new(h: &Matrix, half: usize) -> Self {
        let f = h.field().clone();
        let cols: Vec<Vec<Gf>> = (0..h.cols()).map(|j| h.column(j)).collect();
        let mut table = HashMap::new();
        for w in 0..=half {
            for_each_of_weight(&f, &cols, w, &mut |sp, syn| {
                table.entry(syn.to_vec()).or_insert_with(|| sp.to_vec());
            });
        }
        CosetTable {
            field: f,
            cols,
            half,
            table,
        }
    }

    /// Minimum-weight e with h e = target among weights <= `max_w`.
    pub fn leader(&self, target: &[Gf], max_w: usize) -> Option<Vec<Gf>> {
        let f = &self.field;
        let n = self.cols.len();
        let mut best: Option<Vec<Gf>> = None;
        let mut need = target.to_vec();
        for w in 0..=max_w.saturating_sub(self.half) {
            for_each_of_weight(f, &self.cols, w, &mut |sp, syn| {
                for (x, (t, s)) in need.iter_mut().zip(target.iter().zip(syn)) {
                    *x = f.sub(*t, *s);
                }
                if let Some(other) = self.table.get(&need) {
                    let mut v = vec![Gf::ZERO; n];
                    for &(j, a) in sp.iter().chain(other) {
                        v[j] = f.add(v[j], a);
                    }
                    if best.as_ref().is_none_or(|b| weight(&v) < weight(b)) {
                        best = Some(v);
                    }
                }
            });
            if best.as_ref().is_some_and(|b| weight(b) <= w + self.half) {
                break;
            }
        }
        best.filter(|b| weight(b) <= max_w)
    }
}

/// Minimum-weight e with h e = target among weights <= `max_w`.
pub fn coset_leader(h: &Matrix, target: &[Gf], max_w: usize) -> Option<Vec<Gf>> {
    if target.iter().all(|x| x.is_zero()) {
        return Some(vec![Gf::ZERO; h.cols()]);
    }
    CosetTable::new(h, max_w.div_ceil(2)).leader(target, max_w)
}

/// One line-3 stripe correction of the coefficient extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripeCorrection {
    pub degree: usize,
    pub weight: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumTrace {
    pub output: Vec<Gf>,
    pub stripes: Vec<StripeCorrection>,
}

/// Constant chain of the quantum decoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumConstants {
    pub eps: f64,
    pub rho: f64,
    pub alpha: f64,
    pub delta_prime: f64,
    /// ρεδ'/(50α)
    pub delta: f64,
    pub stripe_radius: usize,
    /// (dim C_1, dim C_2) of the dual tensor code handed to the α-decoder.
    pub dual_tensor_dims: (usize, usize),
    pub transposed: bool,
}

/// Decoder into Q'_Z = (Q¹_Z ⊗ Q²_Z) + (Q¹_X ⊗ Q²_X)^⊥ for two quantum
/// Reed–Solomon factors evaluated on all of F_q.
#[derive(Clone, Debug)]
pub struct QrsPairDecoder {
    n: usize,
    kx: [usize; 2],
    kz: [usize; 2],
    transposed: bool,
    eps: f64,
    inst: DualTensorInstance,
    stripe: ReedSolomon,
    radius: usize,
    vinv: Matrix,
    target: LinearCode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairDecode {
    pub output: Vec<Gf>,
    pub alpha_path: DecodePath,
    pub alpha_residual: usize,
    pub stripes: Vec<StripeCorrection>,
    /// |c − c'|
    pub residual: usize,
}

impl QrsPairDecoder {
    /// Factor i is (RS(n, kx[i]), RS(n, kz[i])) with n = q. The factor order
    /// is swapped internally when only the transposed rates are admissible.
    pub fn new(
        field: &Field,
        n: usize,
        kx: [usize; 2],
        kz: [usize; 2],
        rho: f64,
        mode: ConstantsMode,
    ) -> Result<Self> {
        if field.q() as usize != n {
            return Err(Error::Contract(format!("need n = q, got n = {n}, q = {}", field.q())));
        }
        for i in 0..2 {
            if kx[i] > n || kz[i] > n {
                return Err(Error::Contract("dimension exceeds n".into()));
            }
            if kx[i] + kz[i] < n {
                return Err(Error::NotOrthogonal(format!("factor {i}: k_x + k_z < n")));
            }
        }
        let used = |t: bool| {
            let (a, b) = if t { (1, 0) } else { (0, 1) };
            kz[a].max(n - kx[a] + kz[b])
        };
        let transposed = used(true) < used(false);
        let (a, b) = if transposed { (1, 0) } else { (0, 1) };
        let u = used(transposed);
        if u >= n {
            return Err(Error::Contract("rates leave no room for ε > 0".into()));
        }
        let eps = 1.0 - u as f64 / n as f64;
        let inst = DualTensorInstance::new(field, n, n - kx[a], kz[b], None, None, eps, rho, mode)?;
        let stripe = ReedSolomon::new(field, n, kz[a], None)?;
        let radius = ((40.0 * eps * n as f64 / mode.gamma()).floor() as usize).min((n - kz[a]) / 2);
        let pts = field.points(n);
        let vinv = Matrix::from_fn(field, n, n, |i, j| field.pow(pts[i], j as u64))
            .inverse()
            .ok_or_else(|| Error::Inconsistent("evaluation points are not distinct".into()))?;
        let rs = |k: usize| rs_code(field, n, k, None);
        let qz = tensor(&[&rs(kz[0])?, &rs(kz[1])?])?;
        let qx = tensor(&[&rs(kx[0])?, &rs(kx[1])?])?;
        let target = qz.sum(&qx.dual())?.with_label("Q'_Z");
        Ok(QrsPairDecoder {
            n,
            kx,
            kz,
            transposed,
            eps,
            inst,
            stripe,
            radius,
            vinv,
            target,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn instance(&self) -> &DualTensorInstance {
        &self.inst
    }

    /// Q'_Z as a linear code on the n² cells.
    pub fn target(&self) -> &LinearCode {
        &self.target
    }

    pub fn constants(&self) -> QuantumConstants {
        let rho = self.inst.rho();
        let alpha = self.inst.alpha();
        let delta_prime = self.eps * rho / 4.0;
        QuantumConstants {
            eps: self.eps,
            rho,
            alpha,
            delta_prime,
            delta: rho * self.eps * delta_prime / (50.0 * alpha),
            stripe_radius: self.radius,
            dual_tensor_dims: self.inst.dims(),
            transposed: self.transposed,
        }
    }

    fn frame(&self, c: &[Gf]) -> Vec<Gf> {
        if self.transposed {
            transpose_square(c, self.n)
        } else {
            c.to_vec()
        }
    }

    fn framed_dec_quantum(&self, c0: &[Gf]) -> Result<QuantumTrace> {
        let n = self.n;
        let f = self.inst.field();
        let (a, b) = if self.transposed { (1, 0) } else { (0, 1) };
        let pts = self.stripe.points().to_vec();
        let coeffs: Vec<Vec<Gf>> = (0..n).map(|x1| self.vinv.mul_vec(&c0[x1 * n..(x1 + 1) * n])).collect();
        let mut out = c0.to_vec();
        let mut stripes = Vec::new();
        for j2 in (n - self.kx[b])..self.kz[b] {
            let v: Vec<Gf> = coeffs.iter().map(|c| c[j2]).collect();
            let w = self.stripe.decode(&v, self.radius).ok_or_else(|| {
                Error::DecodeFailure(format!(
                    "degree-{j2} stripe has no RS(n, {}) codeword within {}",
                    self.kz[a], self.radius
                ))
            })?;
            let r = f.sub_vec(&v, &w);
            let wt = weight(&r);
            if wt > 0 {
                let ev: Vec<Gf> = pts.iter().map(|&x| f.pow(x, j2 as u64)).collect();
                for x1 in 0..n {
                    if !r[x1].is_zero() {
                        f.axpy(&mut out[x1 * n..(x1 + 1) * n], f.neg(r[x1]), &ev);
                    }
                }
                stripes.push(StripeCorrection { degree: j2, weight: wt });
            }
        }
        Ok(QuantumTrace { output: out, stripes })
    }

    /// Coefficient extraction followed by per-degree stripe decoding.
    /// `c0` must lie in Q¹_X^⊥ ⊞ Q²_Z.
    pub fn dec_quantum(&self, c0: &[Gf]) -> Result<QuantumTrace> {
        let c = self.frame(c0);
        if c.len() != self.n * self.n || !self.inst.contains(&c) {
            return Err(Error::Contract("input is not in the dual tensor code".into()));
        }
        let mut t = self.framed_dec_quantum(&c)?;
        t.output = self.frame(&t.output);
        Ok(t)
    }

    /// α-decoder followed by `dec_quantum`; the output lies in Q'_Z.
    pub fn decode(&self, c: &[Gf]) -> Result<PairDecode> {
        if c.len() != self.n * self.n {
            return Err(Error::Dimension(format!("word has {} entries", c.len())));
        }
        let framed = self.frame(c);
        let rep = alpha_decode(&self.inst, &framed)?;
        if rep.path == DecodePath::Fallback {
            return Err(Error::DecodeFailure(format!(
                "dual tensor stage: {}",
                rep.failure.unwrap_or_default()
            )));
        }
        let t = self.framed_dec_quantum(&rep.output)?;
        let output = self.frame(&t.output);
        if !self.target.contains(&output) {
            return Err(Error::DecodeFailure("output is not in Q'_Z".into()));
        }
        Ok(PairDecode {
            residual: hamming(&output, c),
            output,
            alpha_path: rep.path,
            alpha_residual: rep.residual,
            stripes: t.stripes,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SideReport {
    pub coset: CorrectionCoset,
    pub decode: PairDecode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumOutcome {
    pub x: SideReport,
    pub z: SideReport,
}

/// Decoder for the subsystem product of two quantum Reed–Solomon codes.
#[derive(Clone, Debug)]
pub struct SubsystemRsDecoder {
    pub code: ProductCode,
    z: QrsPairDecoder,
    x: QrsPairDecoder,
    gx: (Matrix, Matrix),
    gz: (Matrix, Matrix),
}

impl SubsystemRsDecoder {
    pub fn new(
        field: &Field,
        n: usize,
        kx: [usize; 2],
        kz: [usize; 2],
        rho: f64,
        mode: ConstantsMode,
    ) -> Result<Self> {
        let factors = [quantum_rs(field, n, kx[0], kz[0])?, quantum_rs(field, n, kx[1], kz[1])?];
        let code = subsystem_product(&factors)?;
        let z = QrsPairDecoder::new(field, n, kx, kz, rho, mode)?;
        let x = QrsPairDecoder::new(field, n, kz, kx, rho, mode)?;
        let gen = |i: usize, xside: bool| {
            let c = if xside { &factors[i].qx } else { &factors[i].qz };
            c.generator().clone()
        };
        Ok(SubsystemRsDecoder {
            gx: (gen(0, true), gen(1, true)),
            gz: (gen(0, false), gen(1, false)),
            code,
            z,
            x,
        })
    }

    pub fn z_decoder(&self) -> &QrsPairDecoder {
        &self.z
    }

    pub fn x_decoder(&self) -> &QrsPairDecoder {
        &self.x
    }

    /// v ∈ Q_X^⊥ = Q¹_X^⊥ ⊞ Q²_X^⊥
    pub fn in_x_gauge(&self, v: &[Gf]) -> bool {
        dual_tensor_contains(&self.gx.0, &self.gx.1, v)
    }

    /// v ∈ Q_Z^⊥
    pub fn in_z_gauge(&self, v: &[Gf]) -> bool {
        dual_tensor_contains(&self.gz.0, &self.gz.1, v)
    }
}

/// Coset decoder for the subsystem product: the Q'_Z element returned by the
/// pair decoder is itself a representative of c̃_Z + Q_X^⊥.
pub fn subsystem_decode(dec: &SubsystemRsDecoder, cx: &[Gf], cz: &[Gf]) -> Result<QuantumOutcome> {
    let z = dec.z.decode(cz)?;
    let x = dec.x.decode(cx)?;
    Ok(QuantumOutcome {
        x: SideReport {
            coset: CorrectionCoset {
                representative: x.output.clone(),
                modulus: GaugeSpace::ZPerp,
            },
            decode: x,
        },
        z: SideReport {
            coset: CorrectionCoset {
                representative: z.output.clone(),
                modulus: GaugeSpace::XPerp,
            },
            decode: z,
        },
    })
}

/// Particular preimages under H_X and H_Z, precomputed once per check pair.
#[derive(Clone, Debug)]
pub struct SyndromeSolver {
    x: Section,
    z: Section,
    mx: usize,
    mz: usize,
}

impl SyndromeSolver {
    pub fn new(checks: &CheckMatrices) -> Result<Self> {
        let f = checks.hx.field();
        let n = checks.hx.cols();
        let id = Matrix::identity(f, n);
        Ok(SyndromeSolver {
            x: Section::new(&checks.hx.transpose(), &id)?,
            z: Section::new(&checks.hz.transpose(), &id)?,
            mx: checks.hx.rows(),
            mz: checks.hz.rows(),
        })
    }
}

/// Any (c_X, c_Z) with H_X c_X = s_X and H_Z c_Z = s_Z.
pub fn syndrome_to_word(solver: &SyndromeSolver, s: &SyndromeInput) -> Result<(Vec<Gf>, Vec<Gf>)> {
    if s.s_x.len() != solver.mx || s.s_z.len() != solver.mz {
        return Err(Error::Dimension("syndrome length does not match the checks".into()));
    }
    let cx = solver
        .x
        .apply(&s.s_x)
        .ok_or_else(|| Error::Inconsistent("s_X is not in im H_X".into()))?;
    let cz = solver
        .z
        .apply(&s.s_z)
        .ok_or_else(|| Error::Inconsistent("s_Z is not in im H_Z".into()))?;
    Ok((cx, cz))
}

/// Syndrome formulation: the returned representatives are corrections b with
/// c − b in Q'_X and Q'_Z.
pub fn subsystem_decode_syndromes(
    dec: &SubsystemRsDecoder,
    solver: &SyndromeSolver,
    s: &SyndromeInput,
) -> Result<QuantumOutcome> {
    let f = dec.code.pair.field().clone();
    let (cx, cz) = syndrome_to_word(solver, s)?;
    let mut out = subsystem_decode(dec, &cx, &cz)?;
    out.x.coset.representative = f.sub_vec(&cx, &out.x.coset.representative);
    out.z.coset.representative = f.sub_vec(&cz, &out.z.coset.representative);
    Ok(out)
}

/// Decoder for the homological product of the single-sector complexes of
/// (RS(n, k_1), RS(n, k_1)) and (RS(n, k_2), RS(n, k_2)).
#[derive(Clone, Debug)]
pub struct CssRsDecoder {
    pub complex: SingleSectorComplex,
    pub qx: LinearCode,
    pub qz: LinearCode,
    inner: QrsPairDecoder,
    to_qz: Section,
    to_qx: Section,
    gauge: EchelonBasis,
}

impl CssRsDecoder {
    pub fn new(field: &Field, n: usize, k: [usize; 2], rho: f64, mode: ConstantsMode) -> Result<Self> {
        let c = [rs_code(field, n, k[0], None)?, rs_code(field, n, k[1], None)?];
        let complex = hom_product(
            &SingleSectorComplex::from_css(&c[0], &c[0])?,
            &SingleSectorComplex::from_css(&c[1], &c[1])?,
        )?;
        let (qx, qz) = complex.quantum_code();
        let inner = QrsPairDecoder::new(field, n, k, k, rho, mode)?;
        let outer_perp = tensor(&[&c[0], &c[1]])?.dual();
        let section = |q: &LinearCode| {
            let g = q.generator();
            let zeros = Matrix::zeros(field, outer_perp.dim(), g.cols());
            Section::new(&g.vstack(outer_perp.generator())?, &g.vstack(&zeros)?)
        };
        Ok(CssRsDecoder {
            to_qz: section(&qz)?,
            to_qx: section(&qx)?,
            gauge: EchelonBasis::from_matrix(complex.boundaries().generator()),
            complex,
            qx,
            qz,
            inner,
        })
    }

    pub fn inner(&self) -> &QrsPairDecoder {
        &self.inner
    }

    /// v ∈ Q_X^⊥ (= Q_Z^⊥ here: the boundary map is symmetric).
    pub fn in_gauge(&self, v: &[Gf]) -> bool {
        self.gauge.contains(v)
    }
}

/// Coset decoder for the homological product: decode into Q'_Z, then pick the
/// unique Q_Z / Q_X^⊥ class inside c' + (Q¹ ⊗ Q²)^⊥.
pub fn css_decode(dec: &CssRsDecoder, cx: &[Gf], cz: &[Gf]) -> Result<QuantumOutcome> {
    let side = |c: &[Gf], section: &Section, modulus| -> Result<SideReport> {
        let d = dec.inner.decode(c)?;
        let rep = section.apply(&d.output).ok_or_else(|| {
            Error::DecodeFailure("no code class inside c' + (Q¹ ⊗ Q²)^⊥".into())
        })?;
        Ok(SideReport {
            coset: CorrectionCoset {
                representative: rep,
                modulus,
            },
            decode: d,
        })
    };
    Ok(QuantumOutcome {
        z: side(cz, &dec.to_qz, GaugeSpace::XPerp)?,
        x: side(cx, &dec.to_qx, GaugeSpace::ZPerp)?,
    })
}

/// X-decoder from a noisy Z-syndrome for a product code with amplified checks.
#[derive(Clone, Debug)]
pub struct SingleShotDecoder {
    pub code: ProductCode,
    pub checks: CheckMatrices,
    distance: usize,
    image_check: Matrix,
    gauge_check: Matrix,
    gauge_table: CosetTable,
    image_table: OnceLock<CosetTable>,
    x_gauge: EchelonBasis,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingleShotOutcome {
    pub coset: CorrectionCoset,
    /// Projected syndrome s' ∈ im H_Z.
    pub denoised: Vec<Gf>,
    /// |s − s'|
    pub syndrome_correction: usize,
    pub exact_projection: bool,
    /// Outer-code fibers that could not be decoded and were erased.
    pub erased_fibers: usize,
}

impl SingleShotDecoder {
    /// `distance` is the code distance d used for the search radius ⌈d/2⌉ − 1.
    pub fn new(code: &ProductCode, seed: u64, distance: usize) -> Result<Self> {
        let checks = check_matrices(code, CheckStyle::Amplified { seed })?;
        let pair = &code.pair;
        let gauge = pair.qz.sum(&pair.qx.dual())?;
        let gauge_check = gauge.parity_check().clone();
        let radius = distance.div_ceil(2).saturating_sub(1);
        Ok(SingleShotDecoder {
            image_check: checks.hz.left_kernel(),
            gauge_table: CosetTable::new(&gauge_check, radius.div_ceil(2)),
            image_table: OnceLock::new(),
            gauge_check,
            x_gauge: EchelonBasis::from_matrix(pair.qx.dual().generator()),
            code: code.clone(),
            checks,
            distance,
        })
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    /// Largest weight strictly below d/2.
    pub fn radius(&self) -> usize {
        self.distance.div_ceil(2).saturating_sub(1)
    }

    pub fn syndrome(&self, e: &[Gf]) -> Vec<Gf> {
        self.checks.hz.mul_vec(e)
    }

    pub fn in_image(&self, s: &[Gf]) -> bool {
        weight(&self.image_check.mul_vec(s)) == 0
    }

    pub fn in_x_gauge(&self, v: &[Gf]) -> bool {
        self.x_gauge.contains(v)
    }

    /// For a residual error r: the smallest f (weight <= `max_f`) with
    /// r − f ∈ Q_Z + Q_X^⊥, and whether r − f is a pure gauge operator.
    pub fn residual_class(&self, r: &[Gf], max_f: usize) -> Option<(usize, bool)> {
        let f = self.code.pair.field();
        let t = self.gauge_check.mul_vec(r);
        let fix = self.gauge_table.leader(&t, max_f)?;
        Some((weight(&fix), self.in_x_gauge(&f.sub_vec(r, &fix))))
    }

    fn project_blocks(&self, s: &[Gf]) -> Result<(Vec<Gf>, usize)> {
        let dims: Vec<usize> = self.code.factors.iter().map(|p| p.len()).collect();
        let mut est = s.to_vec();
        let mut trusted = vec![true; s.len()];
        let mut erased = 0;
        for (i, (range, outer)) in self.checks.z_blocks.iter().zip(&self.checks.z_outer).enumerate() {
            let mut d = dims.clone();
            d[i] = outer.rs.n();
            let idx = TensorIndex::new(&d);
            let radius = (outer.rs.n() - outer.rs.k()) / 2;
            for c in 0..idx.column_count(i) {
                let cells: Vec<usize> = idx.column(i, c).into_iter().map(|x| range.start + x).collect();
                let word: Vec<Gf> = cells.iter().map(|&x| s[x]).collect();
                match outer.rs.decode(&word, radius) {
                    Some(w) => {
                        for (&x, v) in cells.iter().zip(w) {
                            est[x] = v;
                        }
                    }
                    None => {
                        erased += 1;
                        for &x in &cells {
                            trusted[x] = false;
                        }
                    }
                }
            }
        }
        let rows: Vec<usize> = (0..s.len()).filter(|&x| trusted[x]).collect();
        let rhs: Vec<Gf> = rows.iter().map(|&x| est[x]).collect();
        match self.checks.hz.select_rows(&rows).solve(&rhs) {
            Some(x) => Ok((x, erased)),
            None => {
                let table = self
                    .image_table
                    .get_or_init(|| CosetTable::new(&self.image_check, PROJECTION_FALLBACK_WEIGHT / 2));
                let v = table
                    .leader(&self.image_check.mul_vec(s), PROJECTION_FALLBACK_WEIGHT)
                    .ok_or_else(|| Error::DecodeFailure("decoded fibers are inconsistent".into()))?;
                let f = self.checks.hz.field();
                let x = self.checks.hz.solve(&f.sub_vec(s, &v)).expect("projected syndrome lies in the image");
                Ok((x, erased))
            }
        }
    }
}

/// Nearest-syndrome projection onto im H_Z, then any correction of weight
/// below d/2 consistent with it modulo Q_Z + Q_X^⊥.
pub fn single_shot_decode(dec: &SingleShotDecoder, s_z: &[Gf]) -> Result<SingleShotOutcome> {
    let hz = &dec.checks.hz;
    if s_z.len() != hz.rows() {
        return Err(Error::Dimension("syndrome length does not match H_Z".into()));
    }
    let exact = hz.rows() <= EXACT_SYNDROME_LIMIT;
    let (x0, erased) = if exact {
        let t = dec.image_check.mul_vec(s_z);
        let v = (0..=hz.rows())
            .find_map(|w| coset_leader(&dec.image_check, &t, w))
            .expect("the full weight range always has a solution");
        let f = hz.field();
        let x = hz
            .solve(&f.sub_vec(s_z, &v))
            .expect("projected syndrome lies in the image");
        (x, 0)
    } else {
        dec.project_blocks(s_z)?
    };
    let denoised = hz.mul_vec(&x0);
    let t = dec.gauge_check.mul_vec(&x0);
    let e = dec.gauge_table.leader(&t, dec.radius()).ok_or_else(|| {
        Error::DecodeFailure(format!("no correction of weight <= {}", dec.radius()))
    })?;
    Ok(SingleShotOutcome {
        coset: CorrectionCoset {
            representative: e,
            modulus: GaugeSpace::XPerp,
        },
        syndrome_correction: hamming(&denoised, s_z),
        denoised,
        exact_projection: exact,
        erased_fibers: erased,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_leader_finds_minimum() {
        let f = Field::of_order(4).unwrap();
        let h = rs_code(&f, 4, 2, None).unwrap().parity_check().clone();
        let mut e = vec![Gf::ZERO; 4];
        e[2] = Gf(3);
        let t = h.mul_vec(&e);
        assert_eq!(coset_leader(&h, &t, 1), Some(e.clone()));
        assert_eq!(coset_leader(&h, &t, 0), None);
        assert_eq!(coset_leader(&h, &[Gf::ZERO; 2], 3), Some(vec![Gf::ZERO; 4]));
    }

    #[test]
    fn section_inverts_on_row_space() {
        let f = Field::prime(5).unwrap();
        let h = Matrix::from_fn(&f, 2, 4, |i, j| f.from_int((i * 3 + j * j) as i64));
        let s = Section::new(&h.transpose(), &Matrix::identity(&f, 4)).unwrap();
        let b = vec![Gf(1), Gf(4)];
        let x = s.apply(&b).unwrap();
        assert_eq!(h.mul_vec(&x), b);
    }

    #[test]
    fn transpose_is_involution() {
        let v: Vec<Gf> = (0..9).map(Gf).collect();
        assert_eq!(transpose_square(&transpose_square(&v, 3), 3), v);
        assert_eq!(transpose_square(&v, 3)[1], Gf(3));
    }
}
