use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LinearCode;
use crate::algebra::EchelonBasis;
use crate::error::{Error, Result};

/// Consecutive non-growing random products before the randomized span is
/// accepted as complete.
const MISS_LIMIT: usize = 64;

/// Component-wise product A * B.
pub fn star_product(a: &LinearCode, b: &LinearCode) -> Result<LinearCode> {
    star_product_capped(a, b, usize::MAX)
}

/// As [`star_product`], refusing once the dimension would exceed `cap`.
pub fn star_product_capped(a: &LinearCode, b: &LinearCode, cap: usize) -> Result<LinearCode> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.len() != b.len() {
        return Err(Error::Contract(format!(
            "star product of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let f = a.field();
    let n = a.len();
    let label = format!("{}*{}", a.label(), b.label());
    let mut basis = EchelonBasis::new(f, n);
    let check_cap = |basis: &EchelonBasis| {
        if basis.len() > cap {
            Err(Error::Budget(format!("star product dimension exceeds {cap}")))
        } else {
            Ok(())
        }
    };
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(LinearCode::zero(f, n).with_label(label));
    }
    let ga = a.generator();
    let gb = b.generator();
    if f.q() >= 16 && a.dim() * b.dim() > n {
        let seed = (a.dim() as u64) << 40 ^ (b.dim() as u64) << 20 ^ n as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut misses = 0;
        while misses < MISS_LIMIT && !basis.is_full() {
            let x = a.random_codeword(&mut rng);
            let y = b.random_codeword(&mut rng);
            if basis.insert(&f.mul_vec(&x, &y)) {
                misses = 0;
                check_cap(&basis)?;
            } else {
                misses += 1;
            }
        }
    } else {
        'outer: for i in 0..ga.rows() {
            for j in 0..gb.rows() {
                if basis.insert(&f.mul_vec(ga.row(i), gb.row(j))) {
                    check_cap(&basis)?;
                }
                if basis.is_full() {
                    break 'outer;
                }
            }
        }
    }
    Ok(LinearCode::new(basis.to_matrix(), label))
}

/// C^{*r}.
pub fn star_power(c: &LinearCode, r: usize) -> Result<LinearCode> {
    star_power_capped(c, r, usize::MAX)
}

pub fn star_power_capped(c: &LinearCode, r: usize, cap: usize) -> Result<LinearCode> {
    if r == 0 {
        return Ok(LinearCode::repetition(c.field(), c.len()));
    }
    let mut acc = c.clone();
    for _ in 1..r {
        acc = star_product_capped(&acc, c, cap)?;
    }
    Ok(acc.with_label(format!("{}^*{r}", c.label())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::codes::rs_code;

    #[test]
    fn ones_is_identity() {
        let f = Field::prime(7).unwrap();
        let a = rs_code(&f, 7, 3, None).unwrap();
        let ones = LinearCode::repetition(&f, 7);
        assert_eq!(star_product(&a, &ones).unwrap(), a);
        assert!(star_product(&LinearCode::zero(&f, 7), &a).unwrap().is_zero_code());
    }

    #[test]
    fn rs_degrees_add() {
        for q in [7u64, 8, 16, 17] {
            let f = Field::of_order(q).unwrap();
            let n = q as usize;
            for k1 in 1..5 {
                for k2 in 1..5 {
                    let p = star_product(
                        &rs_code(&f, n, k1, None).unwrap(),
                        &rs_code(&f, n, k2, None).unwrap(),
                    )
                    .unwrap();
                    let expect = rs_code(&f, n, n.min(k1 + k2 - 1), None).unwrap();
                    assert_eq!(p, expect);
                }
            }
        }
    }
}
