//! Factor-wise certificates for the multiplication property.
//!
//! W = S*(L+S)^{*(r-1)} is spanned by tensor products of factor star
//! products. If each spanning term is assigned a factor i whose component
//! lies in K_i, and L_i^{*r} ∩ K_i = {0} for every i, then ⊗ P_i (P_i the
//! projection onto L_i^{*r} along K_i) kills W and fixes L^{*r}. This never
//! needs vectors of the full product length.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{check_logical, coefficient_vector, information_set, Certificate, Coefficients, GateInstance, Stabilizers, DEFAULT_STAR_CAP};
use crate::algebra::EchelonBasis;
use crate::codes::{star_power_capped, star_product_capped, LinearCode};
use crate::error::{Error, Result};
use crate::subsystem::CssPair;

/// Assignment search budget (visited nodes).
const SEARCH_LIMIT: usize = 200_000;

/// One slot of a spanning term: L or the stabilizer summand S_a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Logical,
    Stab(usize),
}

/// Factor-level code kinds; star products only depend on their counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Kind {
    L,
    XPerp,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredCertificate {
    /// Spanning terms of W as multisets of parts, each with at least one S_a.
    pub terms: Vec<Vec<Part>>,
    /// Factor whose component kills each term.
    pub assignment: Vec<usize>,
    /// (dim L_i^{*r}, dim K_i, dim(L_i^{*r} + K_i)) per factor.
    pub ranks: Vec<[usize; 3]>,
}

#[derive(Clone, Debug)]
pub struct FactoredCheck {
    pub certificate: Option<FactoredCertificate>,
    /// L_i^{*r}.
    pub powers: Vec<LinearCode>,
    /// K_i for the certificate found (zero codes otherwise).
    pub kernels: Vec<LinearCode>,
    pub nodes: usize,
}

impl FactoredCheck {
    pub fn holds(&self) -> bool {
        self.certificate.is_some()
    }
}

struct Spaces<'a> {
    factors: &'a [CssPair],
    logical: &'a [LinearCode],
    xperp: Vec<LinearCode>,
    cache: HashMap<(usize, Vec<Kind>), LinearCode>,
    cap: usize,
}

impl Spaces<'_> {
    fn base(&self, i: usize, k: Kind) -> LinearCode {
        match k {
            Kind::L => self.logical[i].clone(),
            Kind::XPerp => self.xperp[i].clone(),
            Kind::Z => self.factors[i].qz.clone(),
        }
    }

    fn kind(i: usize, p: Part) -> Kind {
        match p {
            Part::Logical => Kind::L,
            Part::Stab(a) if a == i => Kind::XPerp,
            Part::Stab(_) => Kind::Z,
        }
    }

    /// Star product of the factor-`i` components of `term`.
    fn component(&mut self, i: usize, term: &[Part]) -> Result<LinearCode> {
        let mut kinds: Vec<Kind> = term.iter().map(|&p| Self::kind(i, p)).collect();
        kinds.sort();
        self.product(i, &kinds)
    }

    fn product(&mut self, i: usize, kinds: &[Kind]) -> Result<LinearCode> {
        if let Some(c) = self.cache.get(&(i, kinds.to_vec())) {
            return Ok(c.clone());
        }
        let c = if kinds.len() == 1 {
            self.base(i, kinds[0])
        } else {
            let head = self.product(i, &kinds[..kinds.len() - 1])?;
            let last = self.base(i, kinds[kinds.len() - 1]);
            if head.is_full() && last.dim() > 0 && has_unit_support(&last) {
                head
            } else {
                star_product_capped(&head, &last, self.cap)?
            }
        };
        self.cache.insert((i, kinds.to_vec()), c.clone());
        Ok(c)
    }
}

/// True when no coordinate vanishes on the whole code, so F^n * C = F^n.
fn has_unit_support(c: &LinearCode) -> bool {
    let g = c.generator();
    (0..c.len()).all(|j| (0..g.rows()).any(|i| !g.get(i, j).is_zero()))
}

fn terms(t: usize, r: usize) -> Vec<Vec<Part>> {
    let parts: Vec<Part> = std::iter::once(Part::Logical)
        .chain((0..t).map(Part::Stab))
        .collect();
    parts
        .into_iter()
        .combinations_with_replacement(r)
        .filter(|m| m.iter().any(|p| matches!(p, Part::Stab(_))))
        .collect()
}

fn meets(v: &LinearCode, k: &EchelonBasis) -> bool {
    let mut b = k.clone();
    let g = v.generator();
    (0..g.rows()).any(|i| !b.insert(g.row(i)))
}

/// Searches for a factor assignment certifying the multiplication property
/// on a product of CSS factors with S = Σ_a S_a,
/// S_a = Q^1_Z ⊗ .. ⊗ (Q^a_X^⊥ ∩ Q^a_Z) ⊗ .. ⊗ Q^t_Z.
/// A missing certificate means undetermined, not false.
pub fn factored_property(factors: &[CssPair], logical: &[LinearCode], r: usize, cap: usize) -> Result<FactoredCheck> {
    if r < 2 {
        return Err(Error::Contract(format!("gate arity {r} < 2")));
    }
    check_logical(factors, logical)?;
    let t = factors.len();
    let xperp = factors
        .iter()
        .map(|p| p.qx.dual().intersection(&p.qz))
        .collect::<Result<Vec<_>>>()?;
    let mut spaces = Spaces {
        factors,
        logical,
        xperp,
        cache: HashMap::new(),
        cap,
    };
    let powers = logical
        .iter()
        .map(|l| star_power_capped(l, r, cap))
        .collect::<Result<Vec<_>>>()?;
    let all_terms = terms(t, r);
    let mut comps: Vec<Vec<LinearCode>> = Vec::with_capacity(all_terms.len());
    let mut options: Vec<Vec<usize>> = Vec::with_capacity(all_terms.len());
    for term in &all_terms {
        let row = (0..t).map(|i| spaces.component(i, term)).collect::<Result<Vec<_>>>()?;
        let opts = (0..t)
            .filter(|&i| !meets(&powers[i], &EchelonBasis::from_matrix(row[i].generator())))
            .collect();
        comps.push(row);
        options.push(opts);
    }
    let mut order: Vec<usize> = (0..all_terms.len()).collect();
    order.sort_by_key(|&k| options[k].len());
    let mut kernels: Vec<EchelonBasis> = factors
        .iter()
        .map(|p| EchelonBasis::new(p.field(), p.len()))
        .collect();
    let mut assignment = vec![usize::MAX; all_terms.len()];
    let mut nodes = 0;
    let found = search(&order, 0, &options, &comps, &powers, &mut kernels, &mut assignment, &mut nodes);
    let field = factors[0].field();
    let to_code = |k: &EchelonBasis| LinearCode::new(k.to_matrix(), "K");
    let certificate = found.then(|| FactoredCertificate {
        terms: all_terms.clone(),
        assignment: assignment.clone(),
        ranks: (0..t)
            .map(|i| {
                let mut b = kernels[i].clone();
                let g = powers[i].generator();
                for j in 0..g.rows() {
                    b.insert(g.row(j));
                }
                [powers[i].dim(), kernels[i].len(), b.len()]
            })
            .collect(),
    });
    let kernels = if found {
        kernels.iter().map(to_code).collect()
    } else {
        factors.iter().map(|p| LinearCode::zero(field, p.len())).collect()
    };
    Ok(FactoredCheck {
        certificate,
        powers,
        kernels,
        nodes,
    })
}

#[allow(clippy::too_many_arguments)]
fn search(
    order: &[usize],
    depth: usize,
    options: &[Vec<usize>],
    comps: &[Vec<LinearCode>],
    powers: &[LinearCode],
    kernels: &mut [EchelonBasis],
    assignment: &mut [usize],
    nodes: &mut usize,
) -> bool {
    if depth == order.len() {
        return true;
    }
    *nodes += 1;
    if *nodes > SEARCH_LIMIT {
        return false;
    }
    let k = order[depth];
    for &i in &options[k] {
        let saved = kernels[i].clone();
        let g = comps[k][i].generator();
        for j in 0..g.rows() {
            kernels[i].insert(g.row(j));
        }
        if !meets(&powers[i], &kernels[i]) {
            assignment[k] = i;
            if search(order, depth + 1, options, comps, powers, kernels, assignment, nodes) {
                return true;
            }
        }
        kernels[i] = saved;
    }
    false
}

/// Synthesis through a factor-wise certificate; a = ⊗ a_i with a_i the
/// functional x ↦ 1_{A_i}·P_i(x).
pub fn synthesize_gate_factored(factors: &[CssPair], logical: &[LinearCode], r: usize) -> Result<GateInstance> {
    let check = factored_property(factors, logical, r, DEFAULT_STAR_CAP)?;
    let Some(cert) = check.certificate else {
        return Err(Error::NotFound(format!(
            "no factor-wise certificate after {} search nodes",
            check.nodes
        )));
    };
    let (info_sets, encoders): (Vec<_>, Vec<_>) = logical.iter().map(information_set).unzip();
    let parts = (0..factors.len())
        .map(|i| coefficient_vector(&check.powers[i], &check.kernels[i], &info_sets[i]))
        .collect::<Result<Vec<_>>>()?;
    let stabs = (0..factors.len())
        .map(|a| {
            factors
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    if i == a {
                        p.qx.dual().intersection(&p.qz)
                    } else {
                        Ok(p.qz.clone())
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GateInstance {
        r,
        factors: factors.to_vec(),
        logical: logical.to_vec(),
        info_sets,
        enc_rank: encoders.iter().map(|e| e.rank()).product(),
        encoders,
        stabilizers: Stabilizers::Terms(stabs),
        coefficients: Coefficients::Product(parts),
        certificate: Certificate::Factored(cert),
    })
}
