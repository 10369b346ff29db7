//! Transversal C^{r-1}Z gates on subsystem products.
//!
//! A gate instance fixes logical subspaces L_i ⊆ Q^i_Z, checks the
//! multiplication property L^{*r} ∩ S*(L+S)^{*(r-1)} = {0} and derives the
//! coefficient vector a. The gate is certified by the classical identity
//! Σ_{j∈A} z¹_j⋯z^r_j = Σ_j a_j z¹'_j⋯z^r'_j on encoded representatives.

mod exponents;
mod factored;
mod triple;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Gf, Matrix};
use crate::codes::{star_power_capped, star_product_capped, tensor, CodeDoc, LinearCode};
use crate::error::{Error, Result};
use crate::subsystem::{subsystem_product, CssDoc, CssPair};

pub use exponents::{
    exponent_set_check, transrs_codes, transrs_gate, transrs_params, ExponentCheck,
    ExponentWitness, TransRsParams,
};
pub use factored::{factored_property, synthesize_gate_factored, FactoredCertificate, FactoredCheck, Part};
pub use triple::{
    gamma_satisfies, smallest_window_m, triple_params, triple_product_build, TripleParams,
    TripleProduct, Verdict, GAMMA_RETRIES,
};

/// Default refusal threshold for star-product dimensions.
pub const DEFAULT_STAR_CAP: usize = 4096;

/// Rank-one S samples added per stabilizer term in factored phase tests.
const STAB_SAMPLES: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub dim_lr: usize,
    pub dim_w: usize,
    pub dim_sum: usize,
}

impl RankCertificate {
    pub fn intersection_dim(&self) -> usize {
        self.dim_lr + self.dim_w - self.dim_sum
    }

    pub fn holds(&self) -> bool {
        self.intersection_dim() == 0
    }
}

/// L^{*r} and W = S*(L+S)^{*(r-1)} with their rank certificate.
#[derive(Clone, Debug)]
pub struct MultiplicationCheck {
    pub certificate: RankCertificate,
    pub lr: LinearCode,
    pub w: LinearCode,
}

impl MultiplicationCheck {
    pub fn holds(&self) -> bool {
        self.certificate.holds()
    }

    /// Nonzero vector of L^{*r} ∩ W, when there is one.
    pub fn witness(&self) -> Option<Vec<Gf>> {
        if self.holds() {
            return None;
        }
        let both = self.lr.intersection(&self.w).ok()?;
        (both.dim() > 0).then(|| both.generator().row(0).to_vec())
    }
}

pub fn multiplication_property(
    l: &LinearCode,
    s: &LinearCode,
    r: usize,
    cap: usize,
) -> Result<MultiplicationCheck> {
    if r < 2 {
        return Err(Error::Contract(format!("gate arity {r} < 2")));
    }
    if l.field() != s.field() {
        return Err(Error::FieldMismatch);
    }
    if l.len() != s.len() {
        return Err(Error::Dimension("L and S lengths differ".into()));
    }
    let lr = star_power_capped(l, r, cap)?;
    let ls = l.sum(s)?;
    let w = star_product_capped(s, &star_power_capped(&ls, r - 1, cap)?, cap)?;
    let dim_sum = lr.sum(&w)?.dim();
    Ok(MultiplicationCheck {
        certificate: RankCertificate {
            dim_lr: lr.dim(),
            dim_w: w.dim(),
            dim_sum,
        },
        lr,
        w,
    })
}

#[derive(Clone, Debug)]
pub enum Stabilizers {
    Dense(LinearCode),
    /// Σ_t ⊗_i C_{t,i}, one inner list per term.
    Terms(Vec<Vec<LinearCode>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    Dense(Vec<Gf>),
    /// a = a_1 ⊗ ... ⊗ a_t.
    Product(Vec<Vec<Gf>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Ranks(RankCertificate),
    Factored(FactoredCertificate),
}

/// A synthesized transversal gate.
#[derive(Clone, Debug)]
pub struct GateInstance {
    pub r: usize,
    pub factors: Vec<CssPair>,
    pub logical: Vec<LinearCode>,
    /// A_i, pivot columns of the RREF generator of L_i.
    pub info_sets: Vec<Vec<usize>>,
    /// Enc_i: row k is the element of L_i equal to e_k on A_i.
    pub encoders: Vec<Matrix>,
    pub stabilizers: Stabilizers,
    pub coefficients: Coefficients,
    pub certificate: Certificate,
    pub enc_rank: usize,
}

impl GateInstance {
    pub fn field(&self) -> &Field {
        self.factors[0].field()
    }

    pub fn len(&self) -> usize {
        self.factors.iter().map(|p| p.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of logical qudits acted on, dim L.
    pub fn gate_qudits(&self) -> usize {
        self.logical.iter().map(|l| l.dim()).product()
    }

    pub fn is_factored(&self) -> bool {
        matches!(self.coefficients, Coefficients::Product(_))
    }

    /// Enc(z) as rank-one terms, z in the kron order of the encoders.
    pub fn encode_terms(&self, z: &[Gf]) -> Vec<Vec<Vec<Gf>>> {
        let t = self.encoders.len();
        let dims: Vec<usize> = self.encoders.iter().map(|e| e.rows()).collect();
        let last = dims[t - 1];
        let mut out = Vec::new();
        if last == 0 {
            return out;
        }
        let prefixes = dims[..t - 1].iter().map(|&d| 0..d).multi_cartesian_product();
        let prefixes: Vec<Vec<usize>> = if t == 1 { vec![vec![]] } else { prefixes.collect() };
        for (block, prefix) in prefixes.into_iter().enumerate() {
            let slice = &z[block * last..(block + 1) * last];
            if slice.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut term: Vec<Vec<Gf>> = prefix
                .iter()
                .enumerate()
                .map(|(i, &k)| self.encoders[i].row(k).to_vec())
                .collect();
            term.push(self.encoders[t - 1].vec_mul(slice));
            out.push(term);
        }
        out
    }

    /// Enc(z) as a dense vector of length N.
    pub fn encode(&self, z: &[Gf]) -> Vec<Gf> {
        let f = self.field();
        let mut out = vec![Gf::ZERO; self.len()];
        for term in self.encode_terms(z) {
            let v = kron_vec(f, &term);
            f.axpy(&mut out, Gf::ONE, &v);
        }
        out
    }

    pub fn to_doc(&self) -> GateDoc {
        let coefficients = match &self.coefficients {
            Coefficients::Dense(a) => vec![a.iter().map(|x| x.0).collect()],
            Coefficients::Product(parts) => {
                parts.iter().map(|a| a.iter().map(|x| x.0).collect()).collect()
            }
        };
        GateDoc {
            r: self.r,
            factored: self.is_factored(),
            factors: self.factors.iter().map(|p| p.to_doc()).collect(),
            logical: self.logical.iter().map(|l| l.to_doc()).collect(),
            info_sets: self.info_sets.clone(),
            coefficients,
            certificate: self.certificate.clone(),
            enc_rank: self.enc_rank,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("gate documents always serialize")
    }
}

/// Serialized gate: factor codes, L_i, A_i, a and the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateDoc {
    pub r: usize,
    pub factored: bool,
    pub factors: Vec<CssDoc>,
    pub logical: Vec<CodeDoc>,
    pub info_sets: Vec<Vec<usize>>,
    pub coefficients: Vec<Vec<u32>>,
    pub certificate: Certificate,
    pub enc_rank: usize,
}

pub(crate) fn kron_vec(f: &Field, parts: &[Vec<Gf>]) -> Vec<Gf> {
    let mut out = vec![Gf::ONE];
    for p in parts {
        let mut next = Vec::with_capacity(out.len() * p.len());
        for &a in &out {
            next.extend(p.iter().map(|&b| f.mul(a, b)));
        }
        out = next;
    }
    out
}

/// Flat kron-order indices of A_1 × ... × A_t.
pub(crate) fn product_indices(dims: &[usize], sets: &[Vec<usize>]) -> Vec<usize> {
    let mut out = vec![0usize];
    for (d, set) in dims.iter().zip(sets) {
        out = out
            .into_iter()
            .flat_map(|base| set.iter().map(move |&j| base * d + j))
            .collect();
    }
    out
}

pub(crate) fn check_logical(factors: &[CssPair], logical: &[LinearCode]) -> Result<()> {
    if factors.is_empty() || factors.len() != logical.len() {
        return Err(Error::Contract("need one logical subspace per factor".into()));
    }
    for (i, (p, l)) in factors.iter().zip(logical).enumerate() {
        if l.field() != p.field() {
            return Err(Error::FieldMismatch);
        }
        if l.len() != p.len() {
            return Err(Error::Dimension(format!("L_{i} has the wrong length")));
        }
        if !l.is_subcode_of(&p.qz) {
            return Err(Error::Contract(format!("L_{i} is not inside Q_Z")));
        }
        if l.intersection(&p.qx.dual())?.dim() > 0 {
            return Err(Error::Contract(format!("L_{i} meets Q_X^⊥")));
        }
    }
    Ok(())
}

/// Pivot information set of `l` and the matching encoder rows.
pub(crate) fn information_set(l: &LinearCode) -> (Vec<usize>, Matrix) {
    let e = l.generator().rref();
    (e.pivots, e.basis)
}

/// Vector a with a·x = 1_A·η(x), where η projects onto `lr` along `w` and
/// vanishes on the unit vectors outside the pivots of [lr; w].
pub(crate) fn coefficient_vector(lr: &LinearCode, w: &LinearCode, a_set: &[usize]) -> Result<Vec<Gf>> {
    let f = lr.field();
    let n = lr.len();
    if lr.dim() == 0 {
        return Ok(vec![Gf::ZERO; n]);
    }
    let stacked = lr.generator().vstack(w.generator())?;
    let pivots = stacked.rref().pivots;
    if pivots.len() != stacked.rows() {
        return Err(Error::Inconsistent("L^{*r} and W overlap".into()));
    }
    let g = lr.generator();
    let mut rhs = vec![Gf::ZERO; stacked.rows()];
    for (k, x) in rhs.iter_mut().enumerate().take(lr.dim()) {
        *x = a_set.iter().fold(Gf::ZERO, |acc, &j| f.add(acc, g.get(k, j)));
    }
    let sol = stacked
        .select_cols(&pivots)
        .solve(&rhs)
        .ok_or_else(|| Error::Inconsistent("projection system is singular".into()))?;
    let mut a = vec![Gf::ZERO; n];
    for (x, &p) in sol.into_iter().zip(&pivots) {
        a[p] = x;
    }
    Ok(a)
}

pub fn synthesize_gate(factors: &[CssPair], logical: &[LinearCode], r: usize) -> Result<GateInstance> {
    synthesize_gate_capped(factors, logical, r, DEFAULT_STAR_CAP)
}

/// Dense synthesis on the full product space.
pub fn synthesize_gate_capped(
    factors: &[CssPair],
    logical: &[LinearCode],
    r: usize,
    cap: usize,
) -> Result<GateInstance> {
    check_logical(factors, logical)?;
    let product = subsystem_product(factors)?;
    let s = product.pair.stabilizers();
    let refs: Vec<&LinearCode> = logical.iter().collect();
    let l = tensor(&refs)?;
    let check = multiplication_property(&l, &s, r, cap)?;
    let c = check.certificate;
    if !c.holds() {
        return Err(Error::MultiplicationProperty {
            lr: c.dim_lr,
            w: c.dim_w,
            sum: c.dim_sum,
        });
    }
    let (info_sets, encoders): (Vec<_>, Vec<_>) = logical.iter().map(information_set).unzip();
    let dims: Vec<usize> = factors.iter().map(|p| p.len()).collect();
    let a_set = product_indices(&dims, &info_sets);
    let a = coefficient_vector(&check.lr, &check.w, &a_set)?;
    let enc = encoders
        .iter()
        .skip(1)
        .try_fold(encoders[0].clone(), |acc, e| acc.kron(e))?;
    Ok(GateInstance {
        r,
        factors: factors.to_vec(),
        logical: logical.to_vec(),
        info_sets,
        enc_rank: enc.rank(),
        encoders,
        stabilizers: Stabilizers::Dense(s),
        coefficients: Coefficients::Dense(a),
        certificate: Certificate::Ranks(c),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseWitness {
    pub trial: usize,
    pub lhs: Gf,
    pub rhs: Gf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub trials: usize,
    pub passed: usize,
    /// First failing trial.
    pub witness: Option<PhaseWitness>,
}

impl PhaseReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

/// Rank-one samples whose sum is an element of S.
fn stabilizer_terms<R: Rng + ?Sized>(g: &GateInstance, rng: &mut R) -> Vec<Vec<Vec<Gf>>> {
    match &g.stabilizers {
        Stabilizers::Dense(_) => Vec::new(),
        Stabilizers::Terms(terms) => terms
            .iter()
            .flat_map(|t| {
                (0..STAB_SAMPLES)
                    .map(|_| t.iter().map(|c| c.random_codeword(rng)).collect())
                    .collect::<Vec<Vec<Vec<Gf>>>>()
            })
            .collect(),
    }
}

/// Samples messages z^h and representatives z^h' = Enc(z^h) + s^h with s^h
/// in S, and checks the phase identity exactly for each r-tuple.
pub fn phase_identity_test(g: &GateInstance, trials: usize, seed: u64) -> PhaseReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PhaseReport {
        trials,
        passed: 0,
        witness: None,
    };
    for trial in 0..trials {
        let (lhs, rhs) = phase_sides(g, &mut rng, false);
        if lhs == rhs {
            report.passed += 1;
        } else if report.witness.is_none() {
            report.witness = Some(PhaseWitness { trial, lhs, rhs });
        }
    }
    report
}

/// As [`phase_identity_test`] with all messages zero.
pub fn phase_identity_zero(g: &GateInstance, seed: u64) -> (Gf, Gf) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    phase_sides(g, &mut rng, true)
}

fn phase_sides<R: Rng + ?Sized>(g: &GateInstance, rng: &mut R, zero: bool) -> (Gf, Gf) {
    let f = g.field();
    let k = g.gate_qudits();
    let msgs: Vec<Vec<Gf>> = (0..g.r)
        .map(|_| if zero { vec![Gf::ZERO; k] } else { f.random_vec(k, rng) })
        .collect();
    let lhs = (0..k).fold(Gf::ZERO, |acc, j| {
        f.add(acc, msgs.iter().fold(Gf::ONE, |p, z| f.mul(p, z[j])))
    });
    let rhs = match (&g.coefficients, &g.stabilizers) {
        (Coefficients::Dense(a), Stabilizers::Dense(s)) => {
            let words: Vec<Vec<Gf>> = msgs
                .iter()
                .map(|z| f.add_vec(&g.encode(z), &s.random_codeword(rng)))
                .collect();
            (0..a.len()).fold(Gf::ZERO, |acc, j| {
                let p = words.iter().fold(a[j], |p, w| f.mul(p, w[j]));
                f.add(acc, p)
            })
        }
        (Coefficients::Product(parts), _) => {
            let words: Vec<Vec<Vec<Vec<Gf>>>> = msgs
                .iter()
                .map(|z| {
                    let mut terms = g.encode_terms(z);
                    terms.extend(stabilizer_terms(g, rng));
                    terms
                })
                .collect();
            product_pairing(f, parts, &words)
        }
        (Coefficients::Dense(a), Stabilizers::Terms(_)) => {
            let words: Vec<Vec<Gf>> = msgs
                .iter()
                .map(|z| {
                    let mut w = g.encode(z);
                    for t in stabilizer_terms(g, rng) {
                        f.axpy(&mut w, Gf::ONE, &kron_vec(f, &t));
                    }
                    w
                })
                .collect();
            (0..a.len()).fold(Gf::ZERO, |acc, j| {
                f.add(acc, words.iter().fold(a[j], |p, w| f.mul(p, w[j])))
            })
        }
    };
    (lhs, rhs)
}

/// Σ_j a_j Π_h w^h_j for a = ⊗ a_i and each w^h a sum of rank-one terms.
fn product_pairing(f: &Field, parts: &[Vec<Gf>], words: &[Vec<Vec<Vec<Gf>>>]) -> Gf {
    let mut total = Gf::ZERO;
    for choice in words.iter().map(|w| 0..w.len()).multi_cartesian_product() {
        let mut prod = Gf::ONE;
        for (i, a) in parts.iter().enumerate() {
            let s = (0..a.len()).fold(Gf::ZERO, |acc, j| {
                let p = choice
                    .iter()
                    .zip(words)
                    .fold(a[j], |p, (&k, w)| f.mul(p, w[k][i][j]));
                f.add(acc, p)
            });
            prod = f.mul(prod, s);
            if prod.is_zero() {
                break;
            }
        }
        total = f.add(total, prod);
    }
    total
}

/// Copy of `g` with one coefficient shifted by a random nonzero value.
/// Returns the perturbed (factor, coordinate).
pub fn perturb_coefficients(g: &GateInstance, seed: u64) -> (GateInstance, (usize, usize)) {
    let f = g.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = g.clone();
    let spot = match &mut out.coefficients {
        Coefficients::Dense(a) => {
            let j = rng.gen_range(0..a.len());
            a[j] = f.add(a[j], f.random_nonzero(&mut rng));
            (0, j)
        }
        Coefficients::Product(parts) => {
            let i = rng.gen_range(0..parts.len());
            let j = rng.gen_range(0..parts[i].len());
            parts[i][j] = f.add(parts[i][j], f.random_nonzero(&mut rng));
            (i, j)
        }
    };
    (out, spot)
}

/// S + span(x + y) for random nonzero x ∈ L and y ∈ S, so that L ∩ S' ≠ {0}.
pub fn enlarge_stabilizers(l: &LinearCode, s: &LinearCode, seed: u64) -> Result<LinearCode> {
    if l.dim() == 0 {
        return Err(Error::Contract("L is zero; nothing to enlarge with".into()));
    }
    let f = l.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = loop {
        let x = l.random_codeword(&mut rng);
        if x.iter().any(|v| !v.is_zero()) {
            break x;
        }
    };
    let v = f.add_vec(&x, &s.random_codeword(&mut rng));
    let extra = LinearCode::from_rows(f, l.len(), &[v], "sabotage");
    Ok(s.sum(&extra)?.with_label("S+sabotage"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sabotage {
    PerturbedCoefficients,
    EnlargedStabilizers,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SabotageOutcome {
    pub kind: Sabotage,
    pub seed: u64,
    pub caught: bool,
    pub detail: String,
}

/// One mutation run; `caught` means a concrete failing witness was found
/// and re-verified.
pub fn sabotage_run(g: &GateInstance, kind: Sabotage, seed: u64, trials: usize) -> Result<SabotageOutcome> {
    match kind {
        Sabotage::PerturbedCoefficients => {
            let (bad, spot) = perturb_coefficients(g, seed);
            let rep = phase_identity_test(&bad, trials, seed);
            let detail = match rep.witness {
                Some(w) => format!(
                    "a{:?} perturbed; trial {} gives lhs {} rhs {}",
                    spot, w.trial, w.lhs.0, w.rhs.0
                ),
                None => format!("a{spot:?} perturbed; no failing tuple in {trials} trials"),
            };
            Ok(SabotageOutcome {
                kind,
                seed,
                caught: rep.witness.is_some(),
                detail,
            })
        }
        Sabotage::EnlargedStabilizers => {
            let Stabilizers::Dense(s) = &g.stabilizers else {
                return Err(Error::Contract("stabilizer sabotage needs a dense instance".into()));
            };
            let refs: Vec<&LinearCode> = g.logical.iter().collect();
            let l = tensor(&refs)?;
            let bigger = enlarge_stabilizers(&l, s, seed)?;
            let check = multiplication_property(&l, &bigger, g.r, DEFAULT_STAR_CAP)?;
            let witness = check
                .witness()
                .filter(|v| check.lr.contains(v) && check.w.contains(v));
            Ok(SabotageOutcome {
                kind,
                seed,
                caught: witness.is_some(),
                detail: format!(
                    "dim S' = {}, intersection dim {}",
                    bigger.dim(),
                    check.certificate.intersection_dim()
                ),
            })
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateVerification {
    pub holds: bool,
    pub certificate: Option<Certificate>,
    pub coefficients_match: bool,
    pub enc_rank_match: bool,
    pub phase: Option<PhaseReport>,
}

impl GateVerification {
    pub fn passed(&self) -> bool {
        self.holds
            && self.coefficients_match
            && self.enc_rank_match
            && self.phase.as_ref().is_some_and(|p| p.all_passed())
    }
}

/// Rebuild a serialized gate from its factor codes and logical subspaces,
/// re-derive the certificate and coefficients, and run the phase identity on
/// the stored coefficients.
pub fn verify_gate_doc(doc: &GateDoc, trials: usize, seed: u64) -> Result<GateVerification> {
    let factors = doc
        .factors
        .iter()
        .map(|d| d.to_pair())
        .collect::<Result<Vec<_>>>()?;
    let field = factors
        .first()
        .ok_or_else(|| Error::Serde("no factors".into()))?
        .field()
        .clone();
    let logical = doc
        .logical
        .iter()
        .map(|d| d.to_code_in(&field))
        .collect::<Result<Vec<_>>>()?;
    let rebuilt = if doc.factored {
        synthesize_gate_factored(&factors, &logical, doc.r)
    } else {
        synthesize_gate(&factors, &logical, doc.r)
    };
    let mut gate = match rebuilt {
        Ok(g) => g,
        Err(Error::MultiplicationProperty { .. }) | Err(Error::NotFound(_)) => {
            return Ok(GateVerification {
                holds: false,
                certificate: None,
                coefficients_match: false,
                enc_rank_match: false,
                phase: None,
            })
        }
        Err(e) => return Err(e),
    };
    let stored: Vec<Vec<Gf>> = doc
        .coefficients
        .iter()
        .map(|v| v.iter().map(|&x| Gf(x)).collect())
        .collect();
    if stored.iter().flatten().any(|x| !field.contains(*x)) {
        return Err(Error::Serde("coefficient outside the field".into()));
    }
    let stored = if doc.factored {
        Coefficients::Product(stored)
    } else {
        Coefficients::Dense(stored.into_iter().next().unwrap_or_default())
    };
    let coefficients_match = stored == gate.coefficients && doc.info_sets == gate.info_sets;
    let shape_ok = match (&stored, &gate.coefficients) {
        (Coefficients::Dense(a), Coefficients::Dense(b)) => a.len() == b.len(),
        (Coefficients::Product(a), Coefficients::Product(b)) => {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.len() == y.len())
        }
        _ => false,
    };
    if !shape_ok {
        return Err(Error::Serde("coefficient shape does not match the factors".into()));
    }
    let enc_rank_match = doc.enc_rank == gate.enc_rank && gate.enc_rank == gate.gate_qudits();
    gate.coefficients = stored;
    Ok(GateVerification {
        holds: true,
        certificate: Some(gate.certificate.clone()),
        coefficients_match,
        enc_rank_match,
        phase: Some(phase_identity_test(&gate, trials, seed)),
    })
}

pub fn gate_from_json(s: &str) -> Result<GateDoc> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::rs_code;

    #[test]
    fn product_indices_follow_kron_order() {
        assert_eq!(product_indices(&[3, 4], &[vec![0, 2], vec![1, 3]]), vec![1, 3, 9, 11]);
    }

    #[test]
    fn zero_stabilizer_always_holds() {
        let f = Field::prime(7).unwrap();
        let l = rs_code(&f, 7, 3, None).unwrap();
        let check = multiplication_property(&l, &LinearCode::zero(&f, 7), 2, 64).unwrap();
        assert!(check.holds());
        assert_eq!(check.certificate.dim_w, 0);
    }

    #[test]
    fn cap_refuses_large_powers() {
        let f = Field::prime(11).unwrap();
        let l = rs_code(&f, 11, 4, None).unwrap();
        let s = rs_code(&f, 11, 2, None).unwrap();
        assert!(matches!(multiplication_property(&l, &s, 3, 5), Err(Error::Budget(_))));
    }
}
