//! Exact linear algebra over the rationals and the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::ovalgroup::{Generator, GroupElement};
use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut w = m.to_vec();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -w[i][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![Q::zero(); cols]);
    }
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][cols].clone();
    }
    Some(x)
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut w = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !w[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            w.swap(p, c);
            d = -d;
        }
        d *= &w[c][c];
        for i in c + 1..n {
            let f = &w[i][c] / &w[c][c];
            for j in c..n {
                let v = &w[c][j] * &f;
                w[i][j] -= v;
            }
        }
    }
    d
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Q>], cols: usize) -> Matrix {
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Coordinates of group elements over the union of their generators.
pub fn element_matrix(elems: &[GroupElement]) -> (Vec<Generator>, Matrix) {
    let gens: BTreeSet<Generator> =
        elems.iter().flat_map(|e| e.exponents().map(|(g, _)| *g)).collect();
    let gens: Vec<Generator> = gens.into_iter().collect();
    let m = elems.iter().map(|e| gens.iter().map(|g| e.exponent(*g)).collect()).collect();
    (gens, m)
}

/// Dimension of the rational span of the elements.
pub fn rank_of_elements(elems: &[GroupElement]) -> usize {
    let (_, m) = element_matrix(elems);
    rank(&m)
}

pub fn in_rational_span(basis: &[GroupElement], x: &GroupElement) -> bool {
    coordinates_in_span(basis, x).is_some()
}

/// Rational coefficients `c` with `x = prod basis_i^(c_i)`, if `x` is in the span.
pub fn coordinates_in_span(basis: &[GroupElement], x: &GroupElement) -> Option<Vec<Q>> {
    let mut all = basis.to_vec();
    all.push(x.clone());
    let (_, m) = element_matrix(&all);
    let k = basis.len();
    let gens = if m.is_empty() { 0 } else { m[0].len() };
    // Columns are basis elements; rows are generators.
    let a: Matrix = (0..gens).map(|g| (0..k).map(|i| m[i][g].clone()).collect()).collect();
    let b: Vec<Q> = (0..gens).map(|g| m[k][g].clone()).collect();
    solve(&a, &b, k)
}

/// A Z-basis of the lattice `{x in Z^cols : a x = 0}`.
pub fn integer_kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    // Row-reduce [a^T | I] with unimodular integer operations.
    let m = a.len();
    let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..cols)
        .map(|j| {
            let left: Vec<BigInt> = (0..m).map(|i| a[i][j].clone()).collect();
            let right: Vec<BigInt> =
                (0..cols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }).collect();
            (left, right)
        })
        .collect();
    let mut top = 0;
    for c in 0..m {
        loop {
            let nonzero: Vec<usize> = (top..cols).filter(|&r| !rows[r].0[c].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&r) = nonzero.first() {
                    rows.swap(top, r);
                    top += 1;
                }
                break;
            }
            let piv = *nonzero.iter().min_by_key(|&&r| rows[r].0[c].abs()).unwrap();
            rows.swap(top, piv);
            for r in top + 1..cols {
                if rows[r].0[c].is_zero() {
                    continue;
                }
                let q = rows[r].0[c].div_floor(&rows[top].0[c]);
                let (pl, pr) = rows[top].clone();
                for (x, y) in rows[r].0.iter_mut().zip(&pl) {
                    *x -= &q * y;
                }
                for (x, y) in rows[r].1.iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
    }
    rows.into_iter().filter(|(l, _)| l.iter().all(|x| x.is_zero())).map(|(_, r)| r).collect()
}

/// Rational vector scaled to a primitive integer vector (same direction).
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
