//! Local cones of definable sets.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linarith::{AffForm, Atom, DefinableSet};
use crate::ovalgroup::GroupElement;
use crate::rational::Q;

/// The cone of directions `d` such that `xi * d^e` stays in `d` for infinitesimal `e`.
///
/// Each disjunct contributes the cone cut out by its atoms that are tight at `xi`, provided
/// none of its other atoms fails at `xi`.
pub fn star(d: &DefinableSet, xi: &[GroupElement]) -> Result<DefinableSet> {
    if !d.membership(xi)? {
        return Err(Error::NotInSet);
    }
    let n = d.n;
    let mut out = DefinableSet::empty(n).with_params(d.params.clone());
    'disjunct: for c in &d.disjuncts {
        let mut cone = Vec::new();
        for a in c {
            match a.form.eval(xi).cmp_one() {
                Ordering::Less => {}
                Ordering::Greater => continue 'disjunct,
                Ordering::Equal => {
                    cone.push(Atom::new(AffForm::new(a.form.coeffs.clone(), GroupElement::one()), a.rel))
                }
            }
        }
        out.push_disjunct(cone);
    }
    Ok(out.prune_empty())
}

/// Whether `xi` moved by the infinitesimal `w^v` (coordinatewise `xi_i * w^(v_i)`, with `w`
/// finer than all parameters) lies in the set.
pub fn star_probe(d: &DefinableSet, xi: &[GroupElement], v: &[Q]) -> bool {
    let level = d
        .atoms()
        .map(|a| a.form.constant.max_level())
        .chain(xi.iter().map(|x| x.max_level()))
        .max()
        .unwrap_or(0)
        + 1;
    let w = GroupElement::infinitesimal(level);
    let moved: Vec<GroupElement> = xi.iter().zip(v).map(|(x, vi)| x.mul(&w.pow(vi))).collect();
    d.contains(&moved)
}
