//! Reference computations built from definitions, sharing no algorithm with the library.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use tropcore::gaussfield::{FieldElem, FieldKind, ValuedFieldDesc, ValuedPolynomial};
use tropcore::linarith::{AffForm, Atom, DefinableSet, Rel};
use tropcore::rational::{q, Q};
use tropcore::GroupElement;

/// `c * prod x_i^{a_i}` evaluated factor by factor.
pub fn eval_form(f: &AffForm, x: &[GroupElement]) -> GroupElement {
    let mut acc = f.constant.clone();
    for (a, xi) in f.coeffs.iter().zip(x) {
        if !a.is_zero() {
            acc = acc.mul(&xi.pow(a));
        }
    }
    acc
}

fn holds(rel: Rel, v: &GroupElement) -> bool {
    match (rel, v.cmp(&GroupElement::one())) {
        (Rel::Le, Ordering::Greater) => false,
        (Rel::Lt, Ordering::Less) => true,
        (Rel::Lt, _) => false,
        (Rel::Le, _) => true,
    }
}

pub fn atom_holds(a: &Atom, x: &[GroupElement]) -> bool {
    holds(a.rel, &eval_form(&a.form, x))
}

pub fn member(d: &DefinableSet, x: &[GroupElement]) -> bool {
    d.disjuncts.iter().any(|c| c.iter().all(|a| atom_holds(a, x)))
}

/// Whether some `t` puts `(x_1, …, t, …, x_n)` (with `t` at position `i`) into `d`.
/// `rest` lists the other coordinates in order.
pub fn exists_witness(d: &DefinableSet, rest: &[GroupElement], i: usize) -> bool {
    let mut x: Vec<GroupElement> = rest.to_vec();
    x.insert(i, GroupElement::one());
    'disjunct: for c in &d.disjuncts {
        // Bounds on t as (value, strict).
        let mut lo: Option<(GroupElement, bool)> = None;
        let mut hi: Option<(GroupElement, bool)> = None;
        for a in c {
            let v = eval_form(&a.form, &x);
            let e = &a.form.coeffs[i];
            let strict = a.rel == Rel::Lt;
            if e.is_zero() {
                if !holds(a.rel, &v) {
                    continue 'disjunct;
                }
                continue;
            }
            // v * t^e rel 1  <=>  t rel' v^(-1/e).
            let b = v.inv().pow(&(Q::one() / e));
            let slot = if e.is_positive() { &mut hi } else { &mut lo };
            let tighter = match slot {
                None => true,
                Some((old, old_strict)) => {
                    let ord = b.cmp(old);
                    let want = if e.is_positive() { Ordering::Less } else { Ordering::Greater };
                    ord == want || (ord == Ordering::Equal && strict && !*old_strict)
                }
            };
            if tighter {
                *slot = Some((b, strict));
            }
        }
        match (&lo, &hi) {
            (Some((l, ls)), Some((h, hs))) => match l.cmp(h) {
                Ordering::Less => return true,
                Ordering::Equal if !ls && !hs => return true,
                _ => {}
            },
            _ => return true,
        }
    }
    false
}

/// Whether `{d : a_j · d < 0 (strict), a_j · d <= 0}` is nonempty, by eliminating the
/// coordinates of `d` one at a time.
pub fn cone_feasible(rows: &[(Vec<Q>, bool)]) -> bool {
    let mut rows: Vec<(Vec<Q>, bool)> = rows.to_vec();
    let n = rows.first().map_or(0, |r| r.0.len());
    for k in 0..n {
        let (zero, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r.0[k].is_zero());
        let (pos, neg): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r.0[k].is_positive());
        let mut next = zero;
        for (p, ps) in &pos {
            for (m, ms) in &neg {
                let row: Vec<Q> = p.iter().zip(m).map(|(a, b)| a * -&m[k] + b * &p[k]).collect();
                next.push((row, *ps || *ms));
            }
        }
        rows = next;
    }
    rows.iter().all(|(_, strict)| !strict)
}

/// `x ∈ D` or `x * d^w ∈ D` for some direction `d` and infinitesimal `w > 1`.
pub fn in_infinitesimal_limit(d: &DefinableSet, x: &[GroupElement]) -> bool {
    if member(d, x) {
        return true;
    }
    'disjunct: for c in &d.disjuncts {
        let mut rows = Vec::new();
        for a in c {
            match eval_form(&a.form, x).cmp(&GroupElement::one()) {
                Ordering::Less => {}
                Ordering::Greater => continue 'disjunct,
                Ordering::Equal => rows.push((a.form.coeffs.clone(), a.rel == Rel::Lt)),
            }
        }
        if cone_feasible(&rows) {
            return true;
        }
    }
    false
}

fn padic_val(c: &Q, p: u64) -> i64 {
    let count = |mut n: BigInt| {
        let p = BigInt::from(p);
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        k
    };
    count(c.numer().abs()) - count(c.denom().abs())
}

/// `|c|` from the definition of each field.
pub fn abs_of(field: &ValuedFieldDesc, c: &FieldElem) -> Option<GroupElement> {
    let (lowest, lead) = c.0.iter().find(|(_, v)| !v.is_zero())?;
    Some(match &field.kind {
        FieldKind::Trivial => GroupElement::one(),
        FieldKind::Padic { p, abs_p } => {
            GroupElement::from_rational(abs_p).unwrap().pow(&q(padic_val(lead, *p)))
        }
        FieldKind::Series { abs_x } => GroupElement::from_rational(abs_x).unwrap().pow(lowest),
    })
}

/// `max_J |a_J| r^J`.
pub fn gauss_value(p: &ValuedPolynomial, r: &[GroupElement]) -> Option<GroupElement> {
    p.terms
        .iter()
        .filter_map(|(j, c)| {
            let mut v = abs_of(&p.field, c)?;
            for (e, ri) in j.iter().zip(r) {
                v = v.mul(&ri.pow_int(*e));
            }
            Some(v)
        })
        .max()
}

/// Whether the largest of the values is attained at least twice.
pub fn max_attained_twice(values: &[GroupElement]) -> bool {
    let Some(top) = values.iter().max() else { return false };
    values.iter().filter(|v| *v == top).count() >= 2
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let (f, g) = (a[rank][c], a[i][c]);
                for j in 0..cols {
                    a[i][j] = a[i][j] * f - a[rank][j] * g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Laurent polynomials in X with rational coefficients.
pub type Laurent = std::collections::BTreeMap<i64, Q>;

pub fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_insert_with(Q::zero) += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn laurent_add(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (j, y) in b {
        *out.entry(*j).or_insert_with(Q::zero) += y;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Extension count of `Y^2 - X(X-1)` over trivially valued `Q` at `|X| = r`, from the
/// Puiseux expansions of its roots.
///
/// For `r > 1` the roots `±(X - 1/2 - 1/(8X) - …)` converge at `η_r`; a truncation `y`
/// with `|P(y)| < |P'(y)|^2` lifts to a root in the completion by Newton's lemma, so `P`
/// splits there. For `r < 1` the roots `±(-X)^{1/2}(1 - X)^{1/2}` have absolute value
/// `r^{1/2}`, outside `r^Z`, so the extension is ramified and unique. At `r = 1` the
/// reduction `W^2 - S(S - 1)` is irreducible over `Q(S)`.
pub fn puiseux_count(r: &GroupElement) -> usize {
    let gauss = |f: &Laurent| -> GroupElement {
        f.keys().map(|&k| r.pow_int(k)).max().unwrap_or_else(|| GroupElement::infinitesimal(1).inv())
    };
    match r.cmp(&GroupElement::one()) {
        Ordering::Greater => {
            let y: Laurent = [(1, q(1)), (0, q(-1) / q(2)), (-1, q(-1) / q(8))].into_iter().collect();
            let p_of_y = laurent_add(&laurent_mul(&y, &y), &[(2, q(-1)), (1, q(1))].into_iter().collect());
            let dp = laurent_mul(&y, &[(0, q(2))].into_iter().collect());
            let (a, b) = (gauss(&p_of_y), gauss(&dp));
            if a < b.mul(&b) {
                2
            } else {
                0
            }
        }
        Ordering::Less => {
            // Roots have absolute value |X(X-1)|^{1/2}; unramified only if that is r^k.
            let a0: Laurent = [(2, q(1)), (1, q(-1))].into_iter().collect();
            let slope = gauss(&a0).root(2);
            if (-4..=4).any(|k| r.pow_int(k) == slope) {
                2
            } else {
                1
            }
        }
        Ordering::Equal => {
            // The reduction of X(X-1) is S^2 - S; a squarefree quadratic is not a square.
            let (a, b, c) = (q(1), q(-1), q(0));
            let disc = &b * &b - q(4) * a * c;
            if disc.is_zero() {
                2
            } else {
                1
            }
        }
    }
}
