//! Residue fields: prime fields (ℚ or 𝔽_p), rational function fields over them, and
//! univariate polynomial arithmetic with factorization for small degrees.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;

use crate::rational::{factor_biguint, inv_mod, pow_mod, q, rational_sqrt, reduce_mod_p, Q};

/// Field operations on elements of type `E`, with the field as context.
pub trait FieldOps: Clone + Debug {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn characteristic(&self) -> u64;
    fn of_int(&self, n: i64) -> Self::E;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.mul(a, &self.inv(b))
    }
}

/// ℚ when `p == 0`, otherwise 𝔽_p with elements stored as integers `0..p` in a `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn rationals() -> Self {
        Self { p: 0 }
    }

    pub fn fp(p: u64) -> Self {
        Self { p }
    }

    /// Canonical representative of a rational with denominator prime to `p`.
    pub fn reduce(&self, x: &Q) -> Q {
        if self.p == 0 {
            x.clone()
        } else {
            q(reduce_mod_p(x, self.p).expect("denominator divisible by p") as i64)
        }
    }

    fn small(&self, x: &Q) -> u64 {
        x.to_integer().to_u64().unwrap_or(0)
    }

    /// A square root in the field, if there is one.
    pub fn sqrt(&self, x: &Q) -> Option<Q> {
        if self.p == 0 {
            return rational_sqrt(x);
        }
        let a = self.small(x);
        if a == 0 || self.p == 2 {
            return Some(x.clone());
        }
        if pow_mod(a, (self.p - 1) / 2, self.p) != 1 {
            return None;
        }
        (1..self.p).find(|&y| y * y % self.p == a).map(|y| q(y as i64))
    }

    /// Elements of 𝔽_p in order; empty for ℚ.
    pub fn elements(&self) -> Vec<Q> {
        (0..self.p).map(|i| q(i as i64)).collect()
    }
}

impl FieldOps for PrimeField {
    type E = Q;

    fn zero(&self) -> Q {
        Q::zero()
    }

    fn one(&self) -> Q {
        Q::one()
    }

    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Q, b: &Q) -> Q {
        self.reduce(&(a + b))
    }

    fn neg(&self, a: &Q) -> Q {
        self.reduce(&-a)
    }

    fn mul(&self, a: &Q, b: &Q) -> Q {
        self.reduce(&(a * b))
    }

    fn inv(&self, a: &Q) -> Q {
        if self.p == 0 {
            a.recip()
        } else {
            q(inv_mod(self.small(a), self.p) as i64)
        }
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn of_int(&self, n: i64) -> Q {
        self.reduce(&q(n))
    }
}

/// Univariate polynomial, coefficients from low to high degree, no trailing zeros.
pub type UPoly<E> = Vec<E>;

pub fn trim<F: FieldOps>(f: &F, mut a: UPoly<F::E>) -> UPoly<F::E> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<E>(a: &UPoly<E>) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn padd<F: FieldOps>(f: &F, a: &UPoly<F::E>, b: &UPoly<F::E>) -> UPoly<F::E> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(f, out)
}

pub fn pneg<F: FieldOps>(f: &F, a: &UPoly<F::E>) -> UPoly<F::E> {
    a.iter().map(|x| f.neg(x)).collect()
}

pub fn psub<F: FieldOps>(f: &F, a: &UPoly<F::E>, b: &UPoly<F::E>) -> UPoly<F::E> {
    padd(f, a, &pneg(f, b))
}

pub fn pmul<F: FieldOps>(f: &F, a: &UPoly<F::E>, b: &UPoly<F::E>) -> UPoly<F::E> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn pscale<F: FieldOps>(f: &F, a: &UPoly<F::E>, c: &F::E) -> UPoly<F::E> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn ppow<F: FieldOps>(f: &F, a: &UPoly<F::E>, k: usize) -> UPoly<F::E> {
    let mut out = vec![f.one()];
    for _ in 0..k {
        out = pmul(f, &out, a);
    }
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn pdivrem<F: FieldOps>(f: &F, a: &UPoly<F::E>, b: &UPoly<F::E>) -> (UPoly<F::E>, UPoly<F::E>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let lead_inv = f.inv(&b[db]);
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], r);
    }
    let mut quo = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = f.mul(r.last().unwrap(), &lead_inv);
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = f.sub(&r[k + i], &f.mul(&c, bi));
        }
        quo[k] = c;
        r.pop();
        r = trim(f, r);
    }
    (trim(f, quo), r)
}

pub fn monic<F: FieldOps>(f: &F, a: &UPoly<F::E>) -> UPoly<F::E> {
    match a.last() {
        Some(l) => pscale(f, a, &f.inv(l)),
        None => vec![],
    }
}

/// Monic greatest common divisor.
pub fn pgcd<F: FieldOps>(f: &F, a: &UPoly<F::E>, b: &UPoly<F::E>) -> UPoly<F::E> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = pdivrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn pderiv<F: FieldOps>(f: &F, a: &UPoly<F::E>) -> UPoly<F::E> {
    let out = a.iter().enumerate().skip(1).map(|(i, c)| f.mul(&f.of_int(i as i64), c)).collect();
    trim(f, out)
}

pub fn peval<F: FieldOps>(f: &F, a: &UPoly<F::E>, x: &F::E) -> F::E {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn is_constant<E>(a: &UPoly<E>) -> bool {
    a.len() <= 1
}

/// Squarefree decomposition `a = lc * prod g_i^i` (Yun). `None` when the characteristic
/// interferes (a factor whose derivative vanishes).
pub fn squarefree_decomposition<F: FieldOps>(f: &F, a: &UPoly<F::E>) -> Option<Vec<(UPoly<F::E>, usize)>> {
    let a = monic(f, a);
    if a.len() <= 1 {
        return Some(vec![]);
    }
    let p = f.characteristic();
    if p != 0 && a.len() > p as usize {
        // Yun's algorithm is only valid below the characteristic.
        return None;
    }
    let da = pderiv(f, &a);
    let mut out = Vec::new();
    let b = pgcd(f, &a, &da);
    let (mut c, _) = pdivrem(f, &a, &b);
    let (d0, _) = pdivrem(f, &da, &b);
    let mut d = psub(f, &d0, &pderiv(f, &c));
    let mut i = 1;
    while c.len() > 1 {
        let g = pgcd(f, &c, &d);
        let (c2, _) = pdivrem(f, &c, &g);
        let (d2, _) = pdivrem(f, &d, &g);
        if g.len() > 1 {
            out.push((g.clone(), i));
        }
        d = psub(f, &d2, &pderiv(f, &c2));
        c = c2;
        i += 1;
    }
    Some(out)
}

/// Monic irreducible factors of a squarefree polynomial over a prime field, or `None`
/// when the search exceeds the search budget.
pub fn irreducible_factors(f: &PrimeField, a: &UPoly<Q>) -> Option<Vec<UPoly<Q>>> {
    let a = monic(f, a);
    if a.len() <= 2 {
        return Some(if a.len() == 2 { vec![a] } else { vec![] });
    }
    let found = if f.p == 0 { smallest_factor_q(&a)? } else { smallest_factor_fp(f, &a)? };
    match found {
        None => Some(vec![a]),
        Some(g) => {
            let (rest, _) = pdivrem(f, &a, &g);
            let mut out = vec![monic(f, &g)];
            out.extend(irreducible_factors(f, &rest)?);
            Some(out)
        }
    }
}

/// Full factorization `(irreducible, multiplicity)` over a prime field.
pub fn factor_prime_field(f: &PrimeField, a: &UPoly<Q>) -> Option<Vec<(UPoly<Q>, usize)>> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f, a)? {
        for h in irreducible_factors(f, &g)? {
            out.push((h, m));
        }
    }
    Some(out)
}

const FP_BUDGET: u64 = 2_000_000;

/// A monic factor of least degree `1 <= k <= deg/2`, by enumeration over 𝔽_p.
fn smallest_factor_fp(f: &PrimeField, a: &UPoly<Q>) -> Option<Option<UPoly<Q>>> {
    let d = a.len() - 1;
    let p = f.p;
    for k in 1..=d / 2 {
        let count = p.checked_pow(k as u32).filter(|&c| c <= FP_BUDGET)?;
        for idx in 0..count {
            let mut g: UPoly<Q> = Vec::with_capacity(k + 1);
            let mut t = idx;
            for _ in 0..k {
                g.push(q((t % p) as i64));
                t /= p;
            }
            g.push(Q::one());
            if pdivrem(f, a, &g).1.is_empty() {
                return Some(Some(g));
            }
        }
    }
    Some(None)
}

const KRONECKER_BUDGET: usize = 400_000;

/// Integer coefficients, content removed, from a rational polynomial.
fn primitive_integer(a: &UPoly<Q>) -> Vec<BigInt> {
    let l = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(a: &[BigInt], x: i64) -> BigInt {
    let bx = BigInt::from(x);
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * &bx + c)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m: BigUint = n.magnitude().clone();
    let fac = factor_biguint(&m).ok()?;
    let mut out = vec![BigInt::one()];
    for (p, e) in fac {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
        if out.len() > KRONECKER_BUDGET {
            return None;
        }
    }
    Some(out)
}

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(xs: &[i64], ys: &[BigInt]) -> UPoly<Q> {
    let f = PrimeField::rationals();
    let mut out: UPoly<Q> = vec![];
    for (i, (&xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis: UPoly<Q> = vec![Q::one()];
        let mut denom = Q::one();
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                basis = pmul(&f, &basis, &vec![q(-xj), Q::one()]);
                denom *= q(xi - xj);
            }
        }
        out = padd(&f, &out, &pscale(&f, &basis, &(Q::from_integer(yi.clone()) / denom)));
    }
    out
}

/// A factor of least degree over ℚ (Kronecker's method), `None` if over budget.
fn smallest_factor_q(a: &UPoly<Q>) -> Option<Option<UPoly<Q>>> {
    let f = PrimeField::rationals();
    let ints = primitive_integer(a);
    let d = ints.len() - 1;
    // Candidate evaluation points, smallest nonzero values first.
    let mut pts: Vec<(BigInt, i64)> = (-12i64..=12)
        .map(|x| (eval_int(&ints, x), x))
        .collect();
    if let Some(&(_, x)) = pts.iter().find(|(v, _)| v.is_zero()) {
        return Some(Some(vec![q(-x), Q::one()]));
    }
    pts.sort_by(|a, b| a.0.magnitude().cmp(b.0.magnitude()).then(a.1.abs().cmp(&b.1.abs())));
    for k in 1..=d / 2 {
        let chosen = &pts[..k + 1];
        let xs: Vec<i64> = chosen.iter().map(|(_, x)| *x).collect();
        let mut divs = Vec::with_capacity(k + 1);
        let mut total: usize = 1;
        // The search enumerates one divisor of each value; `total` bounds its size.
        for (idx, (v, _)) in chosen.iter().enumerate() {
            let mut ds = divisors(v)?;
            if idx > 0 {
                let neg: Vec<BigInt> = ds.iter().map(|x| -x).collect();
                ds.extend(neg);
            }
            total = total.checked_mul(ds.len()).filter(|&t| t <= KRONECKER_BUDGET)?;
            divs.push(ds);
        }
        let mut idx = vec![0usize; k + 1];
        'outer: loop {
            let ys: Vec<BigInt> = idx.iter().zip(&divs).map(|(&i, ds)| ds[i].clone()).collect();
            let g = interpolate(&xs, &ys);
            if g.len() == k + 1 && pdivrem(&f, a, &g).1.is_empty() {
                return Some(Some(g));
            }
            for pos in 0..=k {
                idx[pos] += 1;
                if idx[pos] < divs[pos].len() {
                    continue 'outer;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    Some(None)
}

/// Square root of a polynomial over a prime field (characteristic ≠ 2), if it is a square.
pub fn poly_sqrt(f: &PrimeField, a: &UPoly<Q>) -> Option<UPoly<Q>> {
    if a.is_empty() {
        return Some(vec![]);
    }
    let d = a.len() - 1;
    if d % 2 == 1 || f.p == 2 {
        return None;
    }
    let m = d / 2;
    let mut g = vec![Q::zero(); m + 1];
    g[m] = f.sqrt(&a[d])?;
    let two_lead = f.mul(&f.of_int(2), &g[m]);
    for j in (0..m).rev() {
        // Coefficient of x^(m+j) in g^2 determines g_j.
        let mut s = a[m + j].clone();
        for i in j + 1..=m {
            let k = m + j - i;
            if k > j && k <= m && k != m {
                s = f.sub(&s, &f.mul(&g[i], &g[k]));
            }
        }
        g[j] = f.div(&s, &two_lead);
    }
    if pmul(f, &g, &g) == trim(f, a.clone()) {
        Some(g)
    } else {
        None
    }
}

/// Rational functions in one variable over a prime field, as `(num, den)` with
/// `den` monic and coprime to `num`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatFuncField {
    pub base: PrimeField,
}

pub type RatFunc = (UPoly<Q>, UPoly<Q>);

impl RatFuncField {
    pub fn new(base: PrimeField) -> Self {
        Self { base }
    }

    pub fn normalize(&self, num: UPoly<Q>, den: UPoly<Q>) -> RatFunc {
        let f = &self.base;
        let num = trim(f, num);
        if num.is_empty() {
            return (vec![], vec![Q::one()]);
        }
        let g = pgcd(f, &num, &den);
        let (n, _) = pdivrem(f, &num, &g);
        let (d, _) = pdivrem(f, &den, &g);
        let l = f.inv(d.last().unwrap());
        (pscale(f, &n, &l), pscale(f, &d, &l))
    }

    pub fn constant(&self, c: &Q) -> RatFunc {
        self.normalize(vec![self.base.reduce(c)], vec![Q::one()])
    }

    /// The monomial `c * S^k` (k may be negative).
    pub fn monomial(&self, c: &Q, k: i64) -> RatFunc {
        let mut xk = vec![Q::zero(); k.unsigned_abs() as usize];
        xk.push(Q::one());
        if k >= 0 {
            self.normalize(pscale(&self.base, &xk, c), vec![Q::one()])
        } else {
            self.normalize(vec![self.base.reduce(c)], xk)
        }
    }

    pub fn as_constant(&self, a: &RatFunc) -> Option<Q> {
        if a.1.len() == 1 && a.0.len() <= 1 {
            Some(a.0.first().cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    /// Square root in the rational function field, if there is one.
    pub fn sqrt(&self, a: &RatFunc) -> Option<RatFunc> {
        let f = &self.base;
        let nd = pmul(f, &a.0, &a.1);
        let r = poly_sqrt(f, &nd)?;
        Some(self.normalize(r, a.1.clone()))
    }
}

impl FieldOps for RatFuncField {
    type E = RatFunc;

    fn zero(&self) -> RatFunc {
        (vec![], vec![Q::one()])
    }

    fn one(&self) -> RatFunc {
        (vec![Q::one()], vec![Q::one()])
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.0.is_empty()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.base;
        let num = padd(f, &pmul(f, &a.0, &b.1), &pmul(f, &b.0, &a.1));
        self.normalize(num, pmul(f, &a.1, &b.1))
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        (pneg(&self.base, &a.0), a.1.clone())
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.base;
        self.normalize(pmul(f, &a.0, &b.0), pmul(f, &a.1, &b.1))
    }

    fn inv(&self, a: &RatFunc) -> RatFunc {
        self.normalize(a.1.clone(), a.0.clone())
    }

    fn characteristic(&self) -> u64 {
        self.base.p
    }

    fn of_int(&self, n: i64) -> RatFunc {
        self.constant(&q(n))
    }
}

/// Factorization over `κ(S)` restricted to the cases handled here: polynomials with
/// constant coefficients (factored over `κ`, which is algebraically closed in `κ(S)`),
/// and degree at most 2 otherwise.
pub fn factor_ratfunc(k: &RatFuncField, a: &UPoly<RatFunc>) -> Option<Vec<(UPoly<RatFunc>, usize)>> {
    let a = trim(k, a.clone());
    if a.len() <= 1 {
        return Some(vec![]);
    }
    if let Some(consts) = a.iter().map(|c| k.as_constant(c)).collect::<Option<Vec<Q>>>() {
        let fac = factor_prime_field(&k.base, &consts)?;
        return Some(
            fac.into_iter()
                .map(|(g, m)| (g.iter().map(|c| k.constant(c)).collect(), m))
                .collect(),
        );
    }
    let a = monic(k, &a);
    match a.len() - 1 {
        1 => Some(vec![(a, 1)]),
        2 => {
            if k.characteristic() == 2 {
                return None;
            }
            // a = W^2 + b W + c.
            let (b, c) = (&a[1], &a[0]);
            let four = k.of_int(4);
            let disc = k.sub(&k.mul(b, b), &k.mul(&four, c));
            let half = k.inv(&k.of_int(2));
            if k.is_zero(&disc) {
                let root = k.neg(&k.mul(b, &half));
                return Some(vec![(vec![k.neg(&root), k.one()], 2)]);
            }
            match k.sqrt(&disc) {
                None => Some(vec![(a, 1)]),
                Some(s) => {
                    let r1 = k.mul(&k.sub(&s, b), &half);
                    let r2 = k.mul(&k.sub(&k.neg(&s), b), &half);
                    Some(vec![(vec![k.neg(&r1), k.one()], 1), (vec![k.neg(&r2), k.one()], 1)])
                }
            }
        }
        _ => None,
    }
}

/// Whether `u` is a square in `κ(S)(√δ_1, …)`: some product of a subset of the `deltas`
/// times `u` is a square in `κ(S)`.
pub fn is_square_up_to(k: &RatFuncField, u: &RatFunc, deltas: &[Q]) -> Option<bool> {
    if k.characteristic() == 2 {
        return None;
    }
    for mask in 0u32..(1 << deltas.len()) {
        let mut c = Q::one();
        for (i, d) in deltas.iter().enumerate() {
            if mask >> i & 1 == 1 {
                c *= d;
            }
        }
        if k.sqrt(&k.mul(u, &k.constant(&c))).is_some() {
            return Some(true);
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> UPoly<Q> {
        c.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn factors_over_rationals() {
        let f = PrimeField::rationals();
        // (x^2 + 1)(x - 2)(x^2 - 2)
        let a = pmul(&f, &pmul(&f, &qp(&[1, 0, 1]), &qp(&[-2, 1])), &qp(&[-2, 0, 1]));
        let fac = factor_prime_field(&f, &a).unwrap();
        assert_eq!(fac.len(), 3);
        assert!(fac.iter().all(|(_, m)| *m == 1));
        let sq = pmul(&f, &qp(&[1, 1]), &qp(&[1, 1]));
        assert_eq!(factor_prime_field(&f, &sq).unwrap(), vec![(qp(&[1, 1]), 2)]);
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        assert_eq!(irreducible_factors(&f, &qp(&[4, 0, 0, 0, 1])).unwrap().len(), 2);
        assert_eq!(irreducible_factors(&f, &qp(&[-2, 0, 0, 1])).unwrap().len(), 1);
    }

    #[test]
    fn factors_over_fp() {
        let f = PrimeField::fp(5);
        // x^2 - 1 splits, x^2 - 2 does not (2 is a non-residue mod 5).
        assert_eq!(irreducible_factors(&f, &f_reduce(&f, &[-1, 0, 1])).unwrap().len(), 2);
        assert_eq!(irreducible_factors(&f, &f_reduce(&f, &[-2, 0, 1])).unwrap().len(), 1);
        let r = f.sqrt(&q(4)).unwrap();
        assert_eq!(f.mul(&r, &r), q(4));
        assert!(f.sqrt(&q(2)).is_none());
    }

    fn f_reduce(f: &PrimeField, c: &[i64]) -> UPoly<Q> {
        c.iter().map(|&x| f.of_int(x)).collect()
    }

    #[test]
    fn squares_and_rational_functions() {
        let f = PrimeField::rationals();
        let sq = pmul(&f, &qp(&[3, -2, 1]), &qp(&[3, -2, 1]));
        assert_eq!(poly_sqrt(&f, &sq).map(|g| pmul(&f, &g, &g)), Some(sq));
        assert!(poly_sqrt(&f, &qp(&[0, -1, 1])).is_none());
        let k = RatFuncField::new(f);
        // W^2 - S(S-1) is irreducible over ℚ(S); W^2 - S^2 splits.
        let w2 = |c: RatFunc| vec![c, k.zero(), k.one()];
        let s_s1 = k.normalize(qp(&[0, -1, 1]), qp(&[1]));
        assert_eq!(factor_ratfunc(&k, &w2(k.neg(&s_s1))).unwrap().len(), 1);
        let s2 = k.monomial(&q(1), 2);
        assert_eq!(factor_ratfunc(&k, &w2(k.neg(&s2))).unwrap().len(), 2);
        assert_eq!(is_square_up_to(&k, &k.constant(&q(2)), &[q(2)]), Some(true));
        assert_eq!(is_square_up_to(&k, &k.constant(&q(3)), &[q(2)]), Some(false));
    }
}
