//! Univariate dense and multivariate sparse polynomials over a [`Field`].

use std::collections::BTreeMap;

use super::field::{Field, Gf};
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients from low to high degree.
/// The coefficient vector never ends in a zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Gf>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly { coeffs: vec![Gf::ONE] }
    }

    pub fn constant(c: Gf) -> Self {
        Self::new(vec![c])
    }

    /// X - a
    pub fn linear_root(field: &Field, a: Gf) -> Self {
        Self::new(vec![field.neg(a), Gf::ONE])
    }

    /// c * X^k
    pub fn monomial(c: Gf, k: usize) -> Self {
        let mut v = vec![Gf::ZERO; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn new(mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    /// Coefficient of X^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Gf {
        self.coeffs.get(k).copied().unwrap_or(Gf::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(Gf::ZERO)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Gf::ONE
    }

    pub fn eval(&self, field: &Field, x: Gf) -> Gf {
        self.coeffs
            .iter()
            .rev()
            .fold(Gf::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn eval_many(&self, field: &Field, xs: &[Gf]) -> Vec<Gf> {
        xs.iter().map(|&x| self.eval(field, x)).collect()
    }

    pub fn add(&self, field: &Field, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| field.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, field: &Field, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| field.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, field: &Field, c: Gf) -> Self {
        Self::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, field: &Field, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                field.axpy(&mut out[i..i + other.coeffs.len()], a, &other.coeffs);
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder. Panics when dividing by zero.
    pub fn div_rem(&self, field: &Field, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead_inv = field.inv(divisor.lead());
        let mut quot = vec![Gf::ZERO; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = field.mul(r[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            let nc = field.neg(c);
            field.axpy(&mut r[top - dd..=top], nc, &divisor.coeffs);
        }
        r.truncate(dd);
        (Self::new(quot), Self::new(r))
    }

    pub fn rem(&self, field: &Field, divisor: &Self) -> Self {
        self.div_rem(field, divisor).1
    }

    pub fn monic(&self, field: &Field) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(field, field.inv(self.lead()))
    }

    pub fn derivative(&self, field: &Field) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| field.mul(field.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Product of (X - r) over the given roots.
    pub fn from_roots(field: &Field, roots: &[Gf]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| {
            acc.mul(field, &Self::linear_root(field, r))
        })
    }

    /// Lagrange interpolation through (xs[i], ys[i]); xs must be distinct.
    pub fn interpolate(field: &Field, xs: &[Gf], ys: &[Gf]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut acc = Self::zero();
        for i in 0..xs.len() {
            if ys[i].is_zero() {
                continue;
            }
            let others: Vec<Gf> = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            let basis = Self::from_roots(field, &others);
            let denom = basis.eval(field, xs[i]);
            acc = acc.add(field, &basis.scale(field, field.div(ys[i], denom)));
        }
        acc
    }
}

/// Monic gcd via Euclid. gcd(f, 0) = monic(f); both zero is an error.
pub fn poly_gcd(field: &Field, f: &UniPoly, g: &UniPoly) -> Result<UniPoly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(field, &b);
        a = b;
        b = r;
    }
    Ok(a.monic(field))
}

/// Extended Euclid: returns (g, s, t) with s*f + t*g_in = g monic.
pub fn poly_ext_gcd(
    field: &Field,
    f: &UniPoly,
    g: &UniPoly,
) -> Result<(UniPoly, UniPoly, UniPoly)> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
    let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(field, &r1);
        let s = s0.sub(field, &q.mul(field, &s1));
        let t = t0.sub(field, &q.mul(field, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = field.inv(r0.lead());
    Ok((
        r0.scale(field, inv),
        s0.scale(field, inv),
        t0.scale(field, inv),
    ))
}

/// Gcd of a family of polynomials; None when every member is zero.
pub fn poly_gcd_many(field: &Field, polys: &[UniPoly]) -> Option<UniPoly> {
    let mut acc: Option<UniPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(field),
            Some(a) => poly_gcd(field, &a, p).expect("nonzero operand"),
        });
        if acc.as_ref().is_some_and(|a| a.is_one()) {
            break;
        }
    }
    acc
}

/// Sparse multivariate polynomial keyed by exponent tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Gf>,
}

impl Poly {
    pub fn zero(vars: usize) -> Self {
        assert!(vars >= 1, "polynomials need at least one variable");
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(vars: usize, exps: Vec<u32>, c: Gf) -> Self {
        let mut p = Self::zero(vars);
        p.set(exps, c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Gf> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Set a coefficient; zero removes the term.
    pub fn set(&mut self, exps: Vec<u32>, c: Gf) {
        assert_eq!(exps.len(), self.vars, "exponent arity mismatch");
        if c.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
    }

    pub fn add_term(&mut self, field: &Field, exps: Vec<u32>, c: Gf) {
        let cur = self.terms.get(&exps).copied().unwrap_or(Gf::ZERO);
        self.set(exps, field.add(cur, c));
    }

    pub fn coeff(&self, exps: &[u32]) -> Gf {
        self.terms.get(exps).copied().unwrap_or(Gf::ZERO)
    }

    pub fn add(&self, field: &Field, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(field, e.clone(), c);
        }
        out
    }

    pub fn mul(&self, field: &Field, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(field, e, field.mul(c1, c2));
            }
        }
        out
    }

    /// Evaluate at a point; the point arity must equal the number of variables.
    pub fn eval(&self, field: &Field, point: &[Gf]) -> Result<Gf> {
        if point.len() != self.vars {
            return Err(Error::Contract(format!(
                "point arity {} does not match {} variables",
                point.len(),
                self.vars
            )));
        }
        let mut acc = Gf::ZERO;
        for (e, &c) in &self.terms {
            let mut term = c;
            for (&x, &k) in point.iter().zip(e) {
                term = field.mul(term, field.pow(x, k as u64));
            }
            acc = field.add(acc, term);
        }
        Ok(acc)
    }

    /// View a one-variable polynomial as dense.
    pub fn to_univariate(&self) -> Result<UniPoly> {
        if self.vars != 1 {
            return Err(Error::Contract("polynomial is not univariate".into()));
        }
        let deg = self.terms.keys().map(|e| e[0] as usize).max();
        let mut v = vec![Gf::ZERO; deg.map_or(0, |d| d + 1)];
        for (e, &c) in &self.terms {
            v[e[0] as usize] = c;
        }
        Ok(UniPoly::new(v))
    }

    pub fn from_univariate(p: &UniPoly) -> Self {
        let mut out = Self::zero(1);
        for (i, &c) in p.coeffs().iter().enumerate() {
            out.set(vec![i as u32], c);
        }
        out
    }
}
