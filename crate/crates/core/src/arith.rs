//! Checked integer helpers shared by the bound, solver and witness layers.

use std::cmp::Ordering;

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};

/// Largest `n` accepted by the threshold and interval layers (2^48).
pub const N_CAP: i64 = 1 << 48;

#[inline]
pub(crate) fn overflow(what: &'static str) -> Error {
    Error::Overflow(what)
}

#[inline]
pub(crate) fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(|| overflow("multiplication"))
}

#[inline]
pub(crate) fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or_else(|| overflow("addition"))
}

#[inline]
pub(crate) fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or_else(|| overflow("subtraction"))
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative value {n}");
    n.sqrt()
}

/// Returns `Some(r)` when `n = r^2` for some `r >= 0`.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Sign of `lin + coef * sqrt(rad)` for `rad >= 0`, decided exactly.
pub fn sign_one_radical(lin: i128, coef: i128, rad: i128) -> Result<Ordering> {
    debug_assert!(rad >= 0);
    if coef == 0 || rad == 0 {
        return Ok(lin.cmp(&0));
    }
    let rad_sign = coef.cmp(&0);
    if lin == 0 {
        return Ok(rad_sign);
    }
    if lin.cmp(&0) == rad_sign {
        return Ok(rad_sign);
    }
    // Opposite signs: compare lin^2 with coef^2 * rad.
    let l2 = mul(lin, lin)?;
    let r2 = mul(mul(coef, coef)?, rad)?;
    Ok(match l2.cmp(&r2) {
        Ordering::Greater => lin.cmp(&0),
        Ordering::Less => rad_sign,
        Ordering::Equal => Ordering::Equal,
    })
}

/// Sign of `lin + c1 * sqrt(r1) + c2 * sqrt(r2)` for `r1, r2 >= 0`, decided exactly.
pub fn sign_two_radicals(lin: i128, c1: i128, r1: i128, c2: i128, r2: i128) -> Result<Ordering> {
    if c1 == 0 || r1 == 0 {
        return sign_one_radical(lin, c2, r2);
    }
    if c2 == 0 || r2 == 0 {
        return sign_one_radical(lin, c1, r1);
    }
    // Sign of the radical part s = c1 sqrt(r1) + c2 sqrt(r2).
    let s_sign = sign_one_radical(0, c1, r1).and_then(|s1| {
        if s1 == c2.cmp(&0) {
            Ok(s1)
        } else {
            let a = mul(mul(c1, c1)?, r1)?;
            let b = mul(mul(c2, c2)?, r2)?;
            Ok(match a.cmp(&b) {
                Ordering::Greater => s1,
                Ordering::Less => c2.cmp(&0),
                Ordering::Equal => Ordering::Equal,
            })
        }
    })?;
    if s_sign == Ordering::Equal {
        return Ok(lin.cmp(&0));
    }
    if lin == 0 || lin.cmp(&0) == s_sign {
        return Ok(s_sign);
    }
    // lin and s have opposite signs: compare lin^2 with s^2 = c1^2 r1 + c2^2 r2 + 2 c1 c2 sqrt(r1 r2).
    let base = sub(
        mul(lin, lin)?,
        add(mul(mul(c1, c1)?, r1)?, mul(mul(c2, c2)?, r2)?)?,
    )?;
    let cross = mul(-2, mul(c1, c2)?)?;
    let diff = sign_one_radical(base, cross, mul(r1, r2)?)?;
    Ok(match diff {
        Ordering::Greater => lin.cmp(&0),
        Ordering::Less => s_sign,
        Ordering::Equal => Ordering::Equal,
    })
}

/// Solves `coef * x = rhs (mod modulus)`, returning the least nonnegative
/// solution and the period of the solution set, or `None` if unsolvable.
pub fn solve_linear_congruence(coef: i64, rhs: i64, modulus: i64) -> Option<(i64, i64)> {
    assert!(modulus > 0);
    let coef = coef.rem_euclid(modulus);
    let rhs = rhs.rem_euclid(modulus);
    let eg = coef.extended_gcd(&modulus);
    let g = eg.gcd;
    if rhs % g != 0 {
        return None;
    }
    let period = modulus / g;
    let x = (eg.x as i128 * (rhs / g) as i128).rem_euclid(period as i128) as i64;
    Some((x, period))
}

/// 5-adic valuation and cofactor of `n >= 1`.
pub fn five_adic(n: i64) -> (u32, i64) {
    assert!(n >= 1);
    let mut v = 0;
    let mut m = n;
    while m % 5 == 0 {
        m /= 5;
        v += 1;
    }
    (v, m)
}

/// `floor(num / den)` for `den > 0`.
pub(crate) fn floor_div(num: i128, den: i128) -> i128 {
    num.div_euclid(den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn float_sign(v: f64) -> Ordering {
        v.partial_cmp(&0.0).unwrap()
    }

    #[test]
    fn isqrt_boundaries() {
        for r in [0i128, 1, 2, 1000, 3_037_000_499] {
            assert_eq!(isqrt(r * r), r);
            if r > 0 {
                assert_eq!(isqrt(r * r - 1), r - 1);
            }
        }
        assert_eq!(exact_sqrt(49), Some(7));
        assert_eq!(exact_sqrt(50), None);
        assert_eq!(exact_sqrt(-4), None);
    }

    #[test]
    fn one_radical_signs() {
        assert_eq!(sign_one_radical(-3, 1, 9).unwrap(), Ordering::Equal);
        assert_eq!(sign_one_radical(-3, 1, 10).unwrap(), Ordering::Greater);
        assert_eq!(sign_one_radical(-3, 1, 8).unwrap(), Ordering::Less);
        assert_eq!(sign_one_radical(3, -1, 8).unwrap(), Ordering::Greater);
        assert_eq!(sign_one_radical(0, -2, 5).unwrap(), Ordering::Less);
    }

    #[test]
    fn two_radical_signs_match_floats() {
        let mut checked = 0;
        for lin in -12..=12i128 {
            for c1 in -3..=3i128 {
                for c2 in -3..=3i128 {
                    for (r1, r2) in [(2, 3), (5, 7), (6, 6), (0, 11), (8, 18)] {
                        let v = lin as f64
                            + c1 as f64 * (r1 as f64).sqrt()
                            + c2 as f64 * (r2 as f64).sqrt();
                        if v.abs() < 1e-9 {
                            continue;
                        }
                        assert_eq!(
                            sign_two_radicals(lin, c1, r1, c2, r2).unwrap(),
                            float_sign(v),
                            "{lin} + {c1}√{r1} + {c2}√{r2}"
                        );
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 4000);
        // sqrt(8) - 2 sqrt(2) == 0 exactly
        assert_eq!(sign_two_radicals(0, 1, 8, -2, 2).unwrap(), Ordering::Equal);
        // 5 - sqrt(8) - sqrt(2) = 5 - 3 sqrt(2)
        assert_eq!(
            sign_two_radicals(5, -1, 8, -1, 2).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn linear_congruences() {
        assert_eq!(solve_linear_congruence(3, 1, 10), Some((7, 10)));
        assert_eq!(solve_linear_congruence(2, 4, 10), Some((2, 5)));
        assert_eq!(solve_linear_congruence(2, 3, 10), None);
        assert_eq!(solve_linear_congruence(-1, 5737, 10).map(|s| s.0), Some(3));
    }

    #[test]
    fn five_adic_parts() {
        assert_eq!(five_adic(10), (1, 2));
        assert_eq!(five_adic(50), (2, 2));
        assert_eq!(five_adic(7), (0, 7));
    }
}
