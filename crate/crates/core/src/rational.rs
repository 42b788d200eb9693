//! Small helpers around `BigRational`: parsing, integer checks and prime factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/2"` or `" 7 / 4 "`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(
            t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?,
        ),
    };
    Ok(parsed)
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Q>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

const SMALL_LIMIT: u64 = 1 << 20;

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // Deterministic Miller-Rabin for 64-bit integers.
    let mul = |a: u64, b: u64, m: u64| ((a as u128 * b as u128) % m as u128) as u64;
    let pow = |mut a: u64, mut e: u64, m: u64| {
        let mut r = 1u64;
        a %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a, m);
            }
            a = mul(a, a, m);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factors a positive integer into primes. Cofactors above 64 bits that survive
/// trial division are rejected.
pub fn factor_biguint(n: &BigUint) -> Result<BTreeMap<u64, u64>> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut m = n.clone();
    let mut p = 2u64;
    while p < SMALL_LIMIT {
        if m.is_one() {
            return Ok(out);
        }
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            *out.entry(p).or_insert(0) += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let v = m.to_u64().ok_or_else(|| {
            Error::Unsupported(format!("integer {n} has a prime factor beyond 64 bits"))
        })?;
        if is_prime_u64(v) {
            *out.entry(v).or_insert(0) += 1;
        } else {
            // v < 2^64 with no factor below 2^20: at most two prime factors.
            let mut f = 0u64;
            let mut d = SMALL_LIMIT | 1;
            while (d as u128) * (d as u128) <= v as u128 {
                if v % d == 0 {
                    f = d;
                    break;
                }
                d += 2;
            }
            if f == 0 {
                return Err(Error::Unsupported(format!("could not factor {v}")));
            }
            *out.entry(f).or_insert(0) += 1;
            *out.entry(v / f).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// Prime-exponent vector of a positive rational.
pub fn factor_positive_rational(x: &Q) -> Result<BTreeMap<u64, i64>> {
    if !x.is_positive() {
        return Err(Error::InvalidInput(format!("{x} is not a positive rational")));
    }
    let mut out: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, e) in factor_biguint(x.numer().magnitude())? {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factor_biguint(x.denom().magnitude())? {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    out.retain(|_, e| *e != 0);
    Ok(out)
}

/// p-adic valuation of a nonzero rational.
pub fn padic_valuation(x: &Q, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let bp = BigInt::from(p);
    let mut v = 0i64;
    let mut n = x.numer().clone();
    while (&n % &bp).is_zero() {
        n /= &bp;
        v += 1;
    }
    let mut d = x.denom().clone();
    while (&d % &bp).is_zero() {
        d /= &bp;
        v -= 1;
    }
    v
}

/// Reduction of a p-integral rational modulo p, as an integer in `0..p`.
pub fn reduce_mod_p(x: &Q, p: u64) -> Option<u64> {
    let bp = BigInt::from(p);
    let d = x.denom().mod_floor(&bp);
    if d.is_zero() {
        return None;
    }
    let n = x.numer().mod_floor(&bp).to_u64()?;
    let d = d.to_u64()?;
    Some(mul_mod(n, inv_mod(d, p), p))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    is_prime_u64(n)
}

/// Exact rational square root, if there is one.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().magnitude().sqrt();
    let d = x.denom().magnitude().sqrt();
    if &(&n * &n) == x.numer().magnitude() && &(&d * &d) == x.denom().magnitude() {
        Some(BigRational::new(BigInt::from(n), BigInt::from(d)))
    } else {
        None
    }
}

/// Serde adapter writing a rational as a string such as `"-1/2"`.
pub mod serde_q {
    use super::{parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_factors() {
        assert_eq!(parse_q("-1/2").unwrap(), qf(-1, 2));
        assert_eq!(parse_q(" 7 ").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        let f = factor_positive_rational(&qf(12, 25)).unwrap();
        assert_eq!(f.get(&2), Some(&2));
        assert_eq!(f.get(&3), Some(&1));
        assert_eq!(f.get(&5), Some(&-2));
        assert!(factor_positive_rational(&q(-3)).is_err());
    }

    #[test]
    fn large_prime_cofactor() {
        let p = 1_000_000_007u64;
        let f = factor_biguint(&BigUint::from(p * 4)).unwrap();
        assert_eq!(f.get(&p), Some(&1));
        assert_eq!(f.get(&2), Some(&2));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(padic_valuation(&qf(50, 3), 5), 2);
        assert_eq!(padic_valuation(&qf(3, 25), 5), -2);
        assert_eq!(reduce_mod_p(&qf(1, 2), 5), Some(3));
        assert_eq!(reduce_mod_p(&qf(1, 5), 5), None);
        assert_eq!(rational_sqrt(&qf(9, 4)), Some(qf(3, 2)));
        assert_eq!(rational_sqrt(&q(2)), None);
    }
}
