//! Finite fields GF(p^e) backed by log/antilog tables.
//!
//! Elements are stored as the integer `Σ c_i p^i` where `c_i` are the
//! coefficients in the polynomial basis of the modulus. Canonical point
//! order is `0, 1, g, g^2, ...` for the table generator `g`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::primepoly;
use crate::error::{Error, Result};

/// A field element, encoded as its base-p coefficient integer.
#[derive(
    Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Gf(pub u32);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Largest field order supported.
pub const MAX_ORDER: u64 = 1 << 20;

enum AddRule {
    Prime,
    Binary,
    Table(Vec<u32>),
    Digits,
}

struct FieldData {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: AddRule,
}

/// Serializable description of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

/// Shared handle to a finite field. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.e)
        }
    }
}

fn digits(mut x: u64, p: u64, e: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Field {
    /// GF(p^e) with the table modulus: the first primitive polynomial in
    /// encoding order (for e = 1, `X - g` with `g` the least primitive root).
    pub fn new(p: u32, e: u32) -> Result<Field> {
        Self::check_order(p, e)?;
        let pm = p as u64;
        let modulus: Vec<u64> = if e == 1 {
            let g = primepoly::least_primitive_root(pm);
            vec![(pm - g) % pm, 1]
        } else {
            primepoly::first_primitive(pm, e)
        };
        Self::build(p, e, modulus)
    }

    /// Prime field GF(p).
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1)
    }

    /// Field of the given order q = p^e.
    pub fn of_order(q: u64) -> Result<Field> {
        if q < 2 || q > MAX_ORDER {
            return Err(Error::InvalidField(format!("order {q} out of range")));
        }
        let p = primepoly::prime_factors(q)[0];
        let mut e = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Self::new(p as u32, e)
    }

    /// Field with a user-supplied modulus (coefficients low to high, monic,
    /// degree e). The modulus must be irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        Self::check_order(p, e)?;
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        let m: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !primepoly::is_irreducible(&m, p as u64) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Self::build(p, e, m)
    }

    /// Rebuild from a serialized spec.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        let f = Self::with_modulus(spec.p, &spec.modulus)?;
        if f.e() != spec.e {
            return Err(Error::InvalidField("degree does not match modulus".into()));
        }
        Ok(f)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            e: self.0.e,
            modulus: self.0.modulus.clone(),
        }
    }

    fn check_order(p: u32, e: u32) -> Result<()> {
        if !primepoly::is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(Error::InvalidField(format!("order {p}^{e} exceeds 2^20")));
        }
        Ok(())
    }

    fn build(p: u32, e: u32, modulus: Vec<u64>) -> Result<Field> {
        let pm = p as u64;
        let q = pm.pow(e);
        let qu = q as usize;
        let x_is_generator = e == 1 || primepoly::is_primitive(&modulus, pm);
        let mulraw = |a: u64, b: u64| -> u64 {
            if e == 1 {
                return a * b % pm;
            }
            let da = digits(a, pm, e);
            let db = digits(b, pm, e);
            undigits(&primepoly::mul_mod(&da, &db, &modulus, pm), pm)
        };
        let order_is_full = |g: u64| -> bool {
            let mut x = 1u64;
            for i in 1..q {
                x = mulraw(x, g);
                if x == 1 {
                    return i == q - 1;
                }
            }
            false
        };
        let generator: u64 = if e == 1 {
            (pm - modulus[0]) % pm
        } else if x_is_generator {
            pm
        } else {
            (2..q)
                .find(|&g| order_is_full(g))
                .ok_or_else(|| Error::InvalidField("no generator found".into()))?
        };
        let n1 = qu - 1;
        let mut exp = vec![0u32; 2 * n1.max(1)];
        let mut log = vec![0u32; qu];
        let mut x = 1u64;
        for i in 0..n1 {
            exp[i] = x as u32;
            log[x as usize] = i as u32;
            x = if e > 1 && x_is_generator {
                // multiply by X: shift digits and reduce by the monic modulus
                let top = x / pm.pow(e - 1);
                let shifted = (x % pm.pow(e - 1)) * pm;
                if top == 0 {
                    shifted
                } else {
                    let mut d = digits(shifted, pm, e);
                    for (j, dj) in d.iter_mut().enumerate() {
                        *dj = (*dj + pm - top * modulus[j] % pm) % pm;
                    }
                    undigits(&d, pm)
                }
            } else {
                mulraw(x, generator)
            };
        }
        if n1 > 0 && x != 1 {
            return Err(Error::InvalidField("generator order mismatch".into()));
        }
        for i in 0..n1 {
            exp[n1 + i] = exp[i];
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u64> = digits(a, pm, e).iter().map(|&c| (pm - c) % pm).collect();
                undigits(&d, pm) as u32
            })
            .collect();
        let add = if e == 1 {
            AddRule::Prime
        } else if p == 2 {
            AddRule::Binary
        } else if q <= 256 {
            let mut t = vec![0u32; qu * qu];
            for a in 0..q {
                let da = digits(a, pm, e);
                for b in 0..q {
                    let db = digits(b, pm, e);
                    let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % pm).collect();
                    t[(a * q + b) as usize] = undigits(&s, pm) as u32;
                }
            }
            AddRule::Table(t)
        } else {
            AddRule::Digits
        };
        Ok(Field(Arc::new(FieldData {
            p,
            e,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: generator as u32,
            exp,
            log,
            neg,
            add,
        })))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn generator(&self) -> Gf {
        Gf(self.0.generator)
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        let d = &*self.0;
        match &d.add {
            AddRule::Prime => {
                let s = a.0 + b.0;
                Gf(if s >= d.p { s - d.p } else { s })
            }
            AddRule::Binary => Gf(a.0 ^ b.0),
            AddRule::Table(t) => Gf(t[(a.0 * d.q + b.0) as usize]),
            AddRule::Digits => Gf(self.add_digits(a.0, b.0)),
        }
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.0.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.e {
            let s = (a % p + b % p) % p;
            out += s * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        Gf(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf(0);
        }
        let d = &*self.0;
        Gf(d.exp[(d.log[a.0 as usize] + d.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Gf) -> Gf {
        assert!(!a.is_zero(), "inverse of zero");
        let d = &*self.0;
        let l = d.log[a.0 as usize];
        if l == 0 {
            Gf(1)
        } else {
            Gf(d.exp[(d.q - 1 - l) as usize])
        }
    }

    pub fn try_inv(&self, a: Gf) -> Option<Gf> {
        (!a.is_zero()).then(|| self.inv(a))
    }

    #[inline]
    pub fn div(&self, a: Gf, b: Gf) -> Gf {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Gf, k: u64) -> Gf {
        if k == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let d = &*self.0;
        let order = (d.q - 1) as u64;
        let l = (d.log[a.0 as usize] as u64 * (k % order)) % order;
        Gf(d.exp[l as usize])
    }

    /// Discrete log to the table generator. None for zero.
    pub fn log(&self, a: Gf) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    /// `g^k` for the table generator.
    pub fn exp(&self, k: u64) -> Gf {
        let order = (self.0.q - 1) as u64;
        Gf(self.0.exp[(k % order) as usize])
    }

    /// Frobenius map x -> x^p.
    pub fn frobenius(&self, a: Gf) -> Gf {
        self.pow(a, self.0.p as u64)
    }

    /// Absolute trace Σ_{i<e} x^{p^i}; the result lies in the prime subfield.
    pub fn trace(&self, a: Gf) -> Gf {
        let mut acc = Gf::ZERO;
        let mut x = a;
        for _ in 0..self.0.e {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    /// The i-th element in canonical order `0, 1, g, g^2, ...`.
    #[inline]
    pub fn point(&self, i: usize) -> Gf {
        assert!(i < self.0.q as usize, "point index out of range");
        if i == 0 {
            Gf::ZERO
        } else {
            Gf(self.0.exp[i - 1])
        }
    }

    /// First `n` elements in canonical order.
    pub fn points(&self, n: usize) -> Vec<Gf> {
        (0..n).map(|i| self.point(i)).collect()
    }

    /// Position of `a` in canonical order.
    pub fn point_index(&self, a: Gf) -> usize {
        if a.is_zero() {
            0
        } else {
            self.0.log[a.0 as usize] as usize + 1
        }
    }

    /// Embedding of an integer into the prime subfield.
    pub fn from_int(&self, k: i64) -> Gf {
        let p = self.0.p as i64;
        Gf(k.rem_euclid(p) as u32)
    }

    /// Element from modulus-basis coefficients.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Gf> {
        if coeffs.len() != self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Contract("coefficient vector out of range".into()));
        }
        let v: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
        Ok(Gf(undigits(&v, self.0.p as u64) as u32))
    }

    pub fn coeffs(&self, a: Gf) -> Vec<u32> {
        digits(a.0 as u64, self.0.p as u64, self.0.e)
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    pub fn contains(&self, a: Gf) -> bool {
        a.0 < self.0.q
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.gen_range(1..self.0.q))
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.0.q).map(Gf)
    }

    /// y += a * x
    pub fn axpy(&self, y: &mut [Gf], a: Gf, x: &[Gf]) {
        debug_assert_eq!(y.len(), x.len());
        if a.is_zero() {
            return;
        }
        let d = &*self.0;
        let la = d.log[a.0 as usize] as usize;
        match &d.add {
            AddRule::Binary => {
                for (yi, xi) in y.iter_mut().zip(x) {
                    if xi.0 != 0 {
                        yi.0 ^= d.exp[la + d.log[xi.0 as usize] as usize];
                    }
                }
            }
            AddRule::Prime => {
                let p = d.p as u64;
                let av = a.0 as u64;
                for (yi, xi) in y.iter_mut().zip(x) {
                    if xi.0 != 0 {
                        yi.0 = ((yi.0 as u64 + av * xi.0 as u64) % p) as u32;
                    }
                }
            }
            _ => {
                for (yi, xi) in y.iter_mut().zip(x) {
                    if xi.0 != 0 {
                        let t = Gf(d.exp[la + d.log[xi.0 as usize] as usize]);
                        *yi = self.add(*yi, t);
                    }
                }
            }
        }
    }

    pub fn scale(&self, v: &mut [Gf], a: Gf) {
        if a == Gf::ONE {
            return;
        }
        for x in v.iter_mut() {
            *x = self.mul(*x, a);
        }
    }

    pub fn dot(&self, x: &[Gf], y: &[Gf]) -> Gf {
        debug_assert_eq!(x.len(), y.len());
        let d = &*self.0;
        match &d.add {
            AddRule::Prime => {
                let p = d.p as u64;
                let mut acc: u64 = 0;
                for (a, b) in x.iter().zip(y) {
                    acc += a.0 as u64 * b.0 as u64;
                    if acc >= 1 << 62 {
                        acc %= p;
                    }
                }
                Gf((acc % p) as u32)
            }
            AddRule::Binary => {
                let mut acc = 0u32;
                for (a, b) in x.iter().zip(y) {
                    if a.0 != 0 && b.0 != 0 {
                        acc ^= d.exp[(d.log[a.0 as usize] + d.log[b.0 as usize]) as usize];
                    }
                }
                Gf(acc)
            }
            _ => {
                let mut acc = Gf::ZERO;
                for (a, b) in x.iter().zip(y) {
                    acc = self.add(acc, self.mul(*a, *b));
                }
                acc
            }
        }
    }

    /// Component-wise sum of two vectors.
    pub fn add_vec(&self, x: &[Gf], y: &[Gf]) -> Vec<Gf> {
        x.iter().zip(y).map(|(a, b)| self.add(*a, *b)).collect()
    }

    pub fn sub_vec(&self, x: &[Gf], y: &[Gf]) -> Vec<Gf> {
        x.iter().zip(y).map(|(a, b)| self.sub(*a, *b)).collect()
    }

    /// Component-wise (star) product of two vectors.
    pub fn mul_vec(&self, x: &[Gf], y: &[Gf]) -> Vec<Gf> {
        x.iter().zip(y).map(|(a, b)| self.mul(*a, *b)).collect()
    }

    pub fn random_vec<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Gf> {
        (0..n).map(|_| self.random(rng)).collect()
    }
}

/// Hamming weight of a vector.
pub fn weight(v: &[Gf]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_trace_values() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.trace(Gf(0)), Gf(0));
        assert_eq!(f.trace(Gf(1)), Gf(0));
        let w = f.generator();
        assert_eq!(f.trace(w), f.add(w, f.mul(w, w)));
        assert_eq!(f.trace(w), Gf(1));
    }

    #[test]
    fn field_axioms_small() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25, 27, 49] {
            let f = Field::of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Gf::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Gf::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn points_enumerate_field() {
        let f = Field::of_order(27).unwrap();
        let mut pts = f.points(27);
        pts.sort();
        assert_eq!(pts, f.elements().collect::<Vec<_>>());
        for i in 0..27 {
            assert_eq!(f.point_index(f.point(i)), i);
        }
    }

    #[test]
    fn user_modulus() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but not primitive over GF(2)
        let f = Field::with_modulus(2, &[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(f.q(), 16);
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        for k in 0..15 {
            seen.insert(f.pow(g, k));
        }
        assert_eq!(seen.len(), 15);
        assert!(Field::with_modulus(2, &[1, 0, 1]).is_err());
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 21).is_err());
    }

    #[test]
    fn coeff_round_trip() {
        let f = Field::new(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
    }

    #[test]
    fn large_binary_field() {
        let f = Field::new(2, 17).unwrap();
        assert_eq!(f.modulus()[17], 1);
        let a = Gf(12345);
        assert_eq!(f.mul(a, f.inv(a)), Gf::ONE);
        assert_eq!(f.pow(a, (f.q() - 1) as u64), Gf::ONE);
    }
}
