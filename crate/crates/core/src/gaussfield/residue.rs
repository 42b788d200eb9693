//! Gauss valuations of polynomials, their graded residues, and algebraic independence of
//! residues.

use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

use super::poly::ValuedPolynomial;
use super::resfield::{FieldOps, PrimeField};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::ovalgroup::GroupElement;
use crate::rational::{q, Q};

/// `|a_I| * r^I` for every monomial.
fn term_values(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<Vec<(Vec<i64>, GroupElement)>> {
    if r.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), got: r.len() });
    }
    Ok(p.coefficient_values()
        .into_iter()
        .map(|(e, a)| {
            let v = e.iter().zip(r).fold(a, |acc, (&k, ri)| acc.mul(&ri.pow_int(k)));
            (e, v)
        })
        .collect())
}

/// `max_I |a_I| r^I`, or `None` for the zero polynomial.
pub fn gauss_eval(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<Option<GroupElement>> {
    Ok(term_values(p, r)?.into_iter().map(|(_, v)| v).max())
}

/// Exponents of the monomials attaining the Gauss value.
pub fn dominant_monomials(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<(Option<GroupElement>, Vec<Vec<i64>>)> {
    let vals = term_values(p, r)?;
    let Some(m) = vals.iter().map(|(_, v)| v.clone()).max() else {
        return Ok((None, vec![]));
    };
    let dom = vals.into_iter().filter(|(_, v)| *v == m).map(|(e, _)| e).collect();
    Ok((Some(m), dom))
}

/// Laurent polynomial in `S_1..S_n` over the residue prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResiduePolynomial {
    pub field: PrimeField,
    pub n: usize,
    pub terms: BTreeMap<Vec<i64>, Q>,
}

impl ResiduePolynomial {
    pub fn new(field: PrimeField, n: usize, terms: impl IntoIterator<Item = (Vec<i64>, Q)>) -> Self {
        let mut out = Self { field, n, terms: BTreeMap::new() };
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<i64>, c: &Q) {
        let s = self.field.add(self.terms.get(&e).unwrap_or(&Q::zero()), &self.field.reduce(c));
        if s.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, s);
        }
    }

    /// The variable `S_i`.
    pub fn var(field: PrimeField, n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::new(field, n, [(e, q(1))])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new(self.field, self.n, []);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn eval(&self, s: &[Q]) -> Q {
        let f = &self.field;
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (si, &k) in s.iter().zip(e) {
                let base = if k >= 0 { si.clone() } else { f.inv(si) };
                for _ in 0..k.unsigned_abs() {
                    m = f.mul(&m, &base);
                }
            }
            acc = f.add(&acc, &m);
        }
        acc
    }

    /// Partial derivative in `S_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::new(self.field, self.n, []);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term(d, &self.field.mul(c, &self.field.of_int(e[i])));
            }
        }
        out
    }

    fn degree_span(&self, i: usize) -> (i64, i64) {
        let lo = self.terms.keys().map(|e| e[i]).min().unwrap_or(0);
        let hi = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        (lo, hi)
    }
}

impl fmt::Display for ResiduePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k != 0)
                    .map(|(i, k)| if *k == 1 { format!("S{}", i + 1) } else { format!("S{}^{k}", i + 1) })
                    .collect();
                match (mono.is_empty(), c == &q(1)) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A homogeneous element of the graded residue ring: `Σ ã_J S^J` in degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedResidue {
    pub degree: GroupElement,
    pub representative: ResiduePolynomial,
}

impl GradedResidue {
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            degree: self.degree.mul(&other.degree),
            representative: self.representative.mul(&other.representative),
        }
    }
}

/// Residue of `P` at `η_r`: the sum of dominant monomials with unit-residue coefficients.
pub fn gauss_residue(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<GradedResidue> {
    let (deg, dom) = dominant_monomials(p, r)?;
    let degree = deg.ok_or(Error::ZeroPolynomial)?;
    let field = p.field.residue_field();
    let terms = dom.into_iter().map(|e| {
        let c = p.field.unit_residue(&p.terms[&e]).unwrap();
        (e, c)
    });
    Ok(GradedResidue { degree, representative: ResiduePolynomial::new(field, p.n(), terms) })
}

const GRID_BUDGET: u64 = 200_000;

/// Whether the residues are algebraically independent over the residue prime field.
///
/// Monomial families are decided by the rank of their exponents. Otherwise the Jacobian
/// criterion is used: in characteristic 0 the generic rank is found exactly by scanning a
/// grid large enough that a nonzero minor cannot vanish on all of it; in characteristic p
/// a full-rank Jacobian certifies independence and anything else is unsupported.
pub fn residues_alg_independent(elems: &[ResiduePolynomial]) -> Result<bool> {
    let Some(first) = elems.first() else { return Ok(true) };
    let n = first.n;
    let field = first.field;
    if elems.iter().any(|e| e.n != n || e.field != field) {
        return Err(Error::InvalidInput("residues over different rings".into()));
    }
    let k = elems.len();
    if k > n || elems.iter().any(ResiduePolynomial::is_constant) {
        return Ok(false);
    }
    if k == 1 {
        // A nonconstant element is transcendental.
        return Ok(true);
    }
    if elems.iter().all(|e| e.terms.len() == 1) {
        let m: Vec<Vec<Q>> = elems
            .iter()
            .map(|e| e.terms.keys().next().unwrap().iter().map(|&x| q(x)).collect())
            .collect();
        return Ok(rank(&m) == k);
    }
    let jac: Vec<Vec<ResiduePolynomial>> =
        elems.iter().map(|e| (0..n).map(|j| e.derivative(j)).collect()).collect();
    // Grid sizes per variable.
    let sizes: Vec<u64> = (0..n)
        .map(|l| {
            let d: i64 = elems
                .iter()
                .map(|e| {
                    let (lo, hi) = e.degree_span(l);
                    hi - lo.min(0) + 1
                })
                .sum();
            (d + k as i64 + 1) as u64
        })
        .collect();
    let p = field.p;
    let sizes: Vec<u64> = if p == 0 { sizes } else { vec![(p - 1).min(GRID_BUDGET); n] };
    let total = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s)).unwrap_or(u64::MAX);
    if p == 0 && total > GRID_BUDGET {
        return Err(Error::Unsupported("Jacobian grid too large".into()));
    }
    let mut idx = vec![0u64; n];
    let mut visited = 0u64;
    loop {
        let point: Vec<Q> = idx.iter().map(|&i| field.of_int(i as i64 + 1)).collect();
        let m: Vec<Vec<Q>> = jac.iter().map(|row| row.iter().map(|d| d.eval(&point)).collect()).collect();
        if rank_in(&field, &m) == k {
            return Ok(true);
        }
        visited += 1;
        if visited >= GRID_BUDGET {
            break;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                if p == 0 {
                    return Ok(false);
                }
                return Err(Error::Unsupported(
                    "Jacobian degenerate in positive characteristic (possibly inseparable)".into(),
                ));
            }
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
    Err(Error::Unsupported("Jacobian search budget exhausted".into()))
}

/// Rank of a matrix over a prime field.
pub fn rank_in(f: &PrimeField, m: &[Vec<Q>]) -> usize {
    if f.p == 0 {
        return rank(m);
    }
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, piv);
        let inv = f.inv(&a[r][c]);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = f.mul(&a[i][c], &inv);
                for j in 0..cols {
                    let t = f.mul(&factor, &a[r][j]);
                    a[i][j] = f.sub(&a[i][j], &t);
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussfield::field::ValuedFieldDesc;

    fn poly(s: &str, k: &ValuedFieldDesc) -> ValuedPolynomial {
        ValuedPolynomial::parse(s, k).unwrap()
    }

    fn g(s: &str) -> GroupElement {
        GroupElement::parse(s).unwrap()
    }

    #[test]
    fn gauss_eval_examples() {
        let t = ValuedFieldDesc::trivial();
        assert_eq!(gauss_eval(&poly("1+T", &t), &[g("2")]).unwrap(), Some(g("2")));
        assert_eq!(gauss_eval(&poly("1-T^2", &t), &[g("1/2")]).unwrap(), Some(g("1")));
        let a = poly("1+T", &t);
        let b = poly("1-T", &t);
        let r = [g("1/2")];
        let ab = gauss_eval(&a.mul(&b), &r).unwrap().unwrap();
        assert_eq!(ab, gauss_eval(&a, &r).unwrap().unwrap().mul(&gauss_eval(&b, &r).unwrap().unwrap()));
        assert_eq!(gauss_eval(&a.sub(&a), &r).unwrap(), None);
    }

    #[test]
    fn residue_examples() {
        let t = ValuedFieldDesc::trivial();
        let res = gauss_residue(&poly("1+T", &t), &[g("2")]).unwrap();
        assert_eq!(res.degree, g("2"));
        assert_eq!(res.representative.to_string(), "S1");
        let two = ValuedFieldDesc::padic_with(2, crate::rational::qf(1, 2)).unwrap();
        let res = gauss_residue(&poly("2+T", &two), &[g("1")]).unwrap();
        assert_eq!(res.degree, g("1"));
        assert_eq!(res.representative.to_string(), "S1");
        let res = gauss_residue(&poly("1+T+T^2", &t), &[g("1")]).unwrap();
        assert_eq!(res.representative.terms.len(), 3);
        assert!(matches!(gauss_residue(&poly("T-T", &t), &[g("1")]), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn independence_examples() {
        let f = PrimeField::rationals();
        let s1 = ResiduePolynomial::var(f, 2, 0);
        let s2 = ResiduePolynomial::var(f, 2, 1);
        assert!(residues_alg_independent(&[s1.clone(), s2.clone()]).unwrap());
        assert!(!residues_alg_independent(&[s1.clone(), s1.mul(&s1)]).unwrap());
        let fam = [s1.mul(&s2), s1.add(&s2), s1.mul(&s1).add(&s2.mul(&s2))];
        assert!(!residues_alg_independent(&fam).unwrap());
        // S1 + S2 and S1 - S2 are independent; S1 + S2 and (S1 + S2)^2 are not.
        let minus = ResiduePolynomial::new(f, 2, [(vec![1, 0], q(1)), (vec![0, 1], q(-1))]);
        assert!(residues_alg_independent(&[s1.add(&s2), minus]).unwrap());
        let sum = s1.add(&s2);
        assert!(!residues_alg_independent(&[sum.clone(), sum.mul(&sum)]).unwrap());
        // In characteristic p, S^p is the inseparable case.
        let f5 = PrimeField::fp(5);
        let (a, b) = (ResiduePolynomial::var(f5, 2, 0), ResiduePolynomial::var(f5, 2, 1));
        let pow5 = |x: &ResiduePolynomial| (0..4).fold(x.clone(), |acc, _| acc.mul(x));
        assert!(residues_alg_independent(&[a.add(&b), a.mul(&b)]).unwrap());
        let frob = pow5(&a).add(&pow5(&b));
        assert!(matches!(residues_alg_independent(&[frob, a.add(&b)]), Err(Error::Unsupported(_))));
    }
}
