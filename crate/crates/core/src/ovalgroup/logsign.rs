//! Sign of `sum q_p * ln p` for distinct primes `p`.
//!
//! The logarithms are enclosed in fixed-point intervals whose width halves with each
//! extra bit of precision. Precision starts at [`initial_precision`] and doubles until the
//! enclosure excludes zero. Logarithms of distinct primes are linearly independent over
//! the rationals, so a nonzero exponent vector always terminates; an exact integer
//! comparison backs the loop beyond [`MAX_PRECISION`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Mutex, OnceLock};

pub const DEFAULT_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 1 << 14;

static INITIAL_PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION);

/// Sets the starting precision (in bits) of the interval refinement.
pub fn set_initial_precision(bits: u32) {
    INITIAL_PRECISION.store(bits.clamp(8, MAX_PRECISION), AtomicOrdering::Relaxed);
}

pub fn initial_precision() -> u32 {
    INITIAL_PRECISION.load(AtomicOrdering::Relaxed)
}

type Interval = (BigInt, BigInt);

fn cache() -> &'static Mutex<HashMap<(u64, u32), Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fixed-point enclosure of `atanh(num/den)` scaled by `2^w`, for `0 <= num/den <= 1/3`.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u32) -> Interval {
    let num2 = num * num;
    let den2 = den * den;
    let mut power: BigInt = (num << w as usize).div_floor(den);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power = (&power * &num2).div_floor(&den2);
        k += 1;
    }
    // Every truncated term undershoots by at most two units; the tail after the loop is
    // bounded by a geometric series whose first term is at most k + 1 units.
    let err = BigInt::from(4 * k + 8);
    let hi = &sum + err;
    (sum, hi)
}

/// Enclosure `[lo, hi]` of `ln p * 2^w` with `w = prec + 16`.
fn ln_interval(p: u64, prec: u32) -> Interval {
    if let Some(iv) = cache().lock().unwrap().get(&(p, prec)) {
        return iv.clone();
    }
    let w = prec + 16;
    let k = 63 - p.leading_zeros();
    let pow2 = BigInt::one() << k as usize;
    let bp = BigInt::from(p);
    // p = 2^k * m with m in [1, 2); ln m = 2 atanh((p - 2^k) / (p + 2^k)).
    let (m_lo, m_hi) = atanh_fixed(&(&bp - &pow2), &(&bp + &pow2), w);
    let (l2_lo, l2_hi) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let kk = BigInt::from(k);
    let lo = (m_lo + &kk * l2_lo) * 2;
    let hi = (m_hi + &kk * l2_hi) * 2;
    let iv = (lo, hi);
    cache().lock().unwrap().insert((p, prec), iv.clone());
    iv
}

fn sign_at_precision(terms: &[(u64, &BigRational)], prec: u32) -> Option<Ordering> {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (p, coef) in terms {
        let (l, h) = ln_interval(*p, prec);
        let l = BigRational::from_integer(l);
        let h = BigRational::from_integer(h);
        if coef.is_positive() {
            lo += &l * *coef;
            hi += &h * *coef;
        } else {
            lo += &h * *coef;
            hi += &l * *coef;
        }
    }
    if lo.is_positive() {
        Some(Ordering::Greater)
    } else if hi.is_negative() {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Exact comparison of `prod p^(q_p)` with 1 through integer powers.
fn sign_exact(terms: &[(u64, &BigRational)]) -> Ordering {
    let d = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (p, c) in terms {
        let e = (c.numer() * (&d / c.denom())).abs().to_u32().expect("exponent too large");
        let f = num_traits::pow(BigUint::from(*p), e as usize);
        if c.is_positive() {
            num *= f;
        } else {
            den *= f;
        }
    }
    num.cmp(&den)
}

fn sign_f64(terms: &[(u64, &BigRational)]) -> Option<Ordering> {
    let mut sum = 0.0f64;
    let mut mag = 0.0f64;
    for (p, c) in terms {
        let cf = c.to_f64()?;
        if !cf.is_finite() {
            return None;
        }
        let t = cf * (*p as f64).ln();
        sum += t;
        mag += t.abs();
    }
    let slack = mag * 1e-12 + 1e-290;
    if sum > slack {
        Some(Ordering::Greater)
    } else if sum < -slack {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Sign of `sum q_p ln p`; `Equal` only when every coefficient is zero.
pub fn log_sign(terms: &[(u64, &BigRational)]) -> Ordering {
    let terms: Vec<(u64, &BigRational)> =
        terms.iter().filter(|(_, c)| !c.is_zero()).copied().collect();
    match terms.len() {
        0 => return Ordering::Equal,
        1 => return terms[0].1.cmp(&BigRational::zero()),
        _ => {}
    }
    if terms.iter().all(|(_, c)| c.is_positive()) {
        return Ordering::Greater;
    }
    if terms.iter().all(|(_, c)| c.is_negative()) {
        return Ordering::Less;
    }
    if let Some(s) = sign_f64(&terms) {
        return s;
    }
    let mut prec = initial_precision();
    while prec <= MAX_PRECISION {
        if let Some(s) = sign_at_precision(&terms, prec) {
            return s;
        }
        prec *= 2;
    }
    sign_exact(&terms)
}

/// Same as [`log_sign`] but skipping the floating-point prefilter.
#[cfg(test)]
pub fn log_sign_intervals_only(terms: &[(u64, &BigRational)]) -> Ordering {
    let terms: Vec<(u64, &BigRational)> =
        terms.iter().filter(|(_, c)| !c.is_zero()).copied().collect();
    if terms.is_empty() {
        return Ordering::Equal;
    }
    let mut prec = initial_precision();
    while prec <= MAX_PRECISION {
        if let Some(s) = sign_at_precision(&terms, prec) {
            return s;
        }
        prec *= 2;
    }
    sign_exact(&terms)
}
