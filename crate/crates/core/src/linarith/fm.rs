//! Fourier–Motzkin elimination, emptiness and sample points.

use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{canonical_conjunct, AffForm, Atom, DefinableSet, Rel};
use crate::error::{Error, Result};
use crate::linalg::primitive_integer_vector;
use crate::ovalgroup::GroupElement;
use crate::rational::Q;

/// Keeps only the tightest atom among atoms with the same exponent direction.
fn tighten(atoms: Vec<Atom>) -> Vec<Atom> {
    let mut best: BTreeMap<Vec<String>, Atom> = BTreeMap::new();
    for a in atoms {
        let key: Vec<String> =
            primitive_integer_vector(&a.form.coeffs).iter().map(|x| x.to_string()).collect();
        match best.get(&key) {
            None => {
                best.insert(key, a);
            }
            Some(b) => {
                // Both are normalized to the same primitive direction: g t^v <| 1.
                let tighter = match a.form.constant.cmp(&b.form.constant) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => a.rel == Rel::Lt,
                };
                if tighter {
                    best.insert(key, a);
                }
            }
        }
    }
    best.into_values().collect()
}

/// Projection of one canonical conjunct along coordinate `i`; `None` if empty.
pub(crate) fn eliminate_conjunct(atoms: &[Atom], i: usize) -> Option<Vec<Atom>> {
    let mut rest = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for a in atoms {
        let c = &a.form.coeffs[i];
        if c.is_zero() {
            rest.push(a.form.drop_coordinate_unchecked(i, a.rel));
            continue;
        }
        // Scale so that t_i appears with exponent +1 or -1.
        let scaled = Atom::new(a.form.pow(&c.abs().recip()), a.rel);
        if c.is_positive() {
            upper.push(scaled);
        } else {
            lower.push(scaled);
        }
    }
    // An equality t_i = s lets us substitute instead of pairing every bound.
    for u in upper.iter().filter(|u| u.rel == Rel::Le) {
        if lower.iter().any(|l| l.rel == Rel::Le && u.form.mul(&l.form).is_identity()) {
            // u: t_i * s^-1 <= 1 and t_i^-1 * s <= 1, so t_i = s.
            let mut s = u.form.clone();
            s.coeffs[i] = Q::zero();
            let s = s.inv();
            let mut out = rest;
            for a in upper.iter().chain(lower.iter()) {
                let f = a.form.substitute(i, &s);
                out.push(f.drop_coordinate_unchecked(i, a.rel));
            }
            return canonical_conjunct(out).map(tighten);
        }
    }
    let mut out = rest;
    for u in &upper {
        for l in &lower {
            let f = u.form.mul(&l.form);
            debug_assert!(f.coeffs[i].is_zero());
            out.push(f.drop_coordinate_unchecked(i, u.rel.combine(l.rel)));
        }
    }
    canonical_conjunct(out).map(tighten)
}

impl AffForm {
    fn drop_coordinate_unchecked(&self, i: usize, rel: Rel) -> Atom {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(i);
        Atom::new(AffForm { coeffs, constant: self.constant.clone() }, rel)
    }

    fn is_identity(&self) -> bool {
        self.is_constant() && self.constant.is_one()
    }
}

/// Existential projection `exists t_i D`, as a set in `n - 1` variables.
pub fn eliminate(d: &DefinableSet, i: usize) -> Result<DefinableSet> {
    if i >= d.n {
        return Err(Error::InvalidInput(format!("coordinate index {} out of range", i + 1)));
    }
    let mut out = DefinableSet { n: d.n - 1, disjuncts: vec![], params: d.params.clone() };
    for c in &d.disjuncts {
        if let Some(p) = eliminate_conjunct(c, i) {
            if !out.disjuncts.contains(&p) {
                out.disjuncts.push(p);
            }
        }
    }
    Ok(out)
}

/// Eliminates several coordinates (indices refer to the original set).
pub fn eliminate_many(d: &DefinableSet, coords: &[usize]) -> Result<DefinableSet> {
    let mut idx: Vec<usize> = coords.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let mut out = d.clone();
    for &i in idx.iter().rev() {
        out = eliminate(&out, i)?;
    }
    Ok(out)
}

fn elimination_cost(atoms: &[Atom], i: usize) -> usize {
    let (mut up, mut lo) = (0usize, 0usize);
    for a in atoms {
        match a.form.coeffs[i].cmp(&Q::zero()) {
            Ordering::Greater => up += 1,
            Ordering::Less => lo += 1,
            Ordering::Equal => {}
        }
    }
    (up * lo).saturating_sub(up + lo)
}

/// Whether a conjunction of atoms in `n` variables has no solutions.
pub fn conjunct_is_empty(n: usize, atoms: &[Atom]) -> bool {
    let Some(mut cur) = canonical_conjunct(atoms.to_vec()) else {
        return true;
    };
    let mut n = n;
    cur = tighten(cur);
    while n > 0 {
        if cur.is_empty() {
            return false;
        }
        let i = (0..n).min_by_key(|&i| elimination_cost(&cur, i)).unwrap();
        match eliminate_conjunct(&cur, i) {
            Some(next) => cur = next,
            None => return true,
        }
        n -= 1;
    }
    false
}

/// Emptiness over every divisible ordered extension of the parameter group.
pub fn is_empty(d: &DefinableSet) -> bool {
    d.disjuncts.iter().all(|c| conjunct_is_empty(d.n, c))
}

/// Fixes coordinate `i` to the value `x` and drops it.
pub(crate) fn fix_coordinate(atoms: &[Atom], i: usize, x: &GroupElement) -> Vec<Atom> {
    atoms
        .iter()
        .map(|a| {
            let mut f = a.form.clone();
            let c = std::mem::replace(&mut f.coeffs[i], Q::zero());
            if !c.is_zero() {
                f.constant = f.constant.mul(&x.pow(&c));
            }
            f.drop_coordinate_unchecked(i, a.rel)
        })
        .collect()
}

/// A bound `(value, relation)` on a single variable.
pub type Bound = (GroupElement, Rel);

/// Tightest lower and upper bound of a one-variable conjunct, or `None` when a constant
/// atom is false. Emptiness of the interval itself is not checked.
pub fn one_variable_bounds(atoms: &[Atom]) -> Option<(Option<Bound>, Option<Bound>)> {
    let mut lo: Option<Bound> = None;
    let mut hi: Option<Bound> = None;
    for a in atoms {
        let c = &a.form.coeffs[0];
        if c.is_zero() {
            if a.constant_truth() == Some(false) {
                return None;
            }
            continue;
        }
        // g t^c <| 1  <=>  t <| g^(-1/c) for c > 0, t |> g^(-1/c) for c < 0.
        let b = a.form.constant.pow(&(-c.recip()));
        if c.is_positive() {
            let tighter = match &hi {
                None => true,
                Some((h, r)) => b < *h || (b == *h && a.rel == Rel::Lt && *r == Rel::Le),
            };
            if tighter {
                hi = Some((b, a.rel));
            }
        } else {
            let tighter = match &lo {
                None => true,
                Some((l, r)) => b > *l || (b == *l && a.rel == Rel::Lt && *r == Rel::Le),
            };
            if tighter {
                lo = Some((b, a.rel));
            }
        }
    }
    Some((lo, hi))
}

/// Picks a value of a single variable satisfying the atoms, preferring the interior of
/// the feasible interval.
fn pick_one(atoms: &[Atom]) -> Option<GroupElement> {
    let (lo, hi) = one_variable_bounds(atoms)?;
    let two = GroupElement::from_int(2);
    match (lo, hi) {
        (None, None) => Some(GroupElement::one()),
        (Some((l, _)), None) => Some(l.mul(&two)),
        (None, Some((h, _))) => Some(h.div(&two)),
        (Some((l, lr)), Some((h, hr))) => match l.cmp(&h) {
            Ordering::Less => Some(l.mul(&h).root(2)),
            Ordering::Equal if lr == Rel::Le && hr == Rel::Le => Some(l),
            _ => None,
        },
    }
}

/// A point of the conjunct, chosen in its relative interior, or `None` if it is empty.
pub fn relative_interior_point(n: usize, atoms: &[Atom]) -> Option<Vec<GroupElement>> {
    let mut stages: Vec<Vec<Atom>> = Vec::with_capacity(n + 1);
    let mut cur = tighten(canonical_conjunct(atoms.to_vec())?);
    stages.push(cur.clone());
    for k in (1..=n).rev() {
        cur = eliminate_conjunct(&cur, k - 1)?;
        stages.push(cur.clone());
    }
    // stages[n - k] lives in variables t_1..t_k.
    let mut point: Vec<GroupElement> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut cons = stages[n - k].clone();
        for x in &point {
            cons = fix_coordinate(&cons, 0, x);
        }
        let x = pick_one(&cons)?;
        point.push(x);
    }
    debug_assert!(atoms.iter().all(|a| a.holds_at(&point)));
    Some(point)
}

/// A point of the set, if it is nonempty.
pub fn sample_point(d: &DefinableSet) -> Option<Vec<GroupElement>> {
    d.disjuncts.iter().find_map(|c| relative_interior_point(d.n, c))
}
