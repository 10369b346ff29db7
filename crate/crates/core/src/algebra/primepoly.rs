//! Small polynomial helpers over a prime field, used only to build and
//! validate extension-field moduli.

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        k >>= 1;
    }
    r
}

/// Remainder of `a` modulo `m` (m monic or not), coefficients low to high.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for i in 0..=dm {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - c * m[i] % p) % p;
            }
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, m, p)
}

pub(crate) fn pow_x_mod(k: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = rem(&[0, 1], m, p);
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = mul_mod(&result, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        k >>= 1;
    }
    result
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test for a polynomial of degree ≥ 1.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let deg = f.len() - 1;
    let mut xp = vec![0u64, 1];
    for _ in 1..=deg / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut k = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = mul_mod(&acc, &base, &f, p);
            }
            base = mul_mod(&base, &base, &f, p);
            k >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(&f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// True when X generates the multiplicative group of GF(p)[X]/(f).
pub(crate) fn is_primitive(f: &[u64], p: u64) -> bool {
    let e = (f.len() - 1) as u32;
    if f[0] == 0 {
        return false;
    }
    let order = p.pow(e) - 1;
    if pow_x_mod(order, f, p) != vec![1] {
        return false;
    }
    for r in prime_factors(order) {
        if pow_x_mod(order / r, f, p) == vec![1] {
            return false;
        }
    }
    true
}

/// Smallest primitive root modulo a prime.
pub(crate) fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

/// First primitive monic polynomial of degree `e` in increasing order of the
/// base-p encoding of its lower coefficients.
pub(crate) fn first_primitive(p: u64, e: u32) -> Vec<u64> {
    let total = p.pow(e);
    for code in 1..total {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut c = code;
        for _ in 0..e {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if f[0] != 0 && is_primitive(&f, p) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_binary_moduli() {
        assert_eq!(first_primitive(2, 2), vec![1, 1, 1]);
        assert_eq!(first_primitive(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(first_primitive(2, 4), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[0, 1, 1], 5));
    }

    #[test]
    fn roots() {
        assert_eq!(least_primitive_root(7), 3);
        assert_eq!(least_primitive_root(37), 2);
        assert_eq!(least_primitive_root(5), 2);
    }
}
