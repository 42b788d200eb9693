//! Dimension through affine hulls, cross-checked by infinitesimal perturbation.

use super::fm::{conjunct_is_empty, relative_interior_point};
use super::{AffForm, Atom, DefinableSet, Rel};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank};
use crate::ovalgroup::GroupElement;
use crate::rational::Q;

/// A point together with a direction frame; perturbing the point by independent
/// infinitesimals along the frame stays inside the set.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionWitness {
    pub point: Vec<GroupElement>,
    pub frame: Vec<Vec<Q>>,
}

/// The non-strict atoms of a nonempty conjunct that hold with equality everywhere on it.
pub(crate) fn implicit_equalities(n: usize, atoms: &[Atom]) -> Vec<Atom> {
    atoms
        .iter()
        .filter(|a| a.rel == Rel::Le)
        .filter(|a| {
            let mut probe = atoms.to_vec();
            probe.push(a.strict());
            conjunct_is_empty(n, &probe)
        })
        .cloned()
        .collect()
}

/// Dimension of one conjunct, or `None` if it is empty.
pub(crate) fn conjunct_dimension(n: usize, atoms: &[Atom]) -> Option<usize> {
    if conjunct_is_empty(n, atoms) {
        return None;
    }
    let eqs = implicit_equalities(n, atoms);
    let rows: Vec<Vec<Q>> = eqs.iter().map(|a| a.form.coeffs.clone()).collect();
    Some(n - rank(&rows))
}

/// Dimension of the set; `None` stands for the empty set.
pub fn dimension(d: &DefinableSet) -> Option<usize> {
    d.disjuncts.iter().filter_map(|c| conjunct_dimension(d.n, c)).max()
}

fn max_level(d: &DefinableSet, extra: &[GroupElement]) -> u32 {
    d.atoms()
        .map(|a| a.form.constant.max_level())
        .chain(extra.iter().map(|x| x.max_level()))
        .max()
        .unwrap_or(0)
        .max(d.params.infinitesimal_count())
}

/// `x` perturbed by `w_(base + j)^(frame_j)`.
fn perturb(x: &[GroupElement], frame: &[Vec<Q>], base: u32) -> Vec<GroupElement> {
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            frame.iter().enumerate().fold(xi.clone(), |acc, (j, v)| {
                acc.mul(&GroupElement::infinitesimal(base + 1 + j as u32).pow(&v[i]))
            })
        })
        .collect()
}

/// Whether the point, perturbed along the frame by infinitesimals finer than every
/// parameter of the set, still lies in the set.
pub fn probe_dimension(d: &DefinableSet, x: &[GroupElement], frame: &[Vec<Q>]) -> bool {
    let base = max_level(d, x);
    d.contains(&perturb(x, frame, base))
}

/// A witness of the dimension of a nonempty set.
pub fn dimension_witness(d: &DefinableSet) -> Option<DimensionWitness> {
    let mut best: Option<(usize, DimensionWitness)> = None;
    for c in &d.disjuncts {
        let Some(point) = relative_interior_point(d.n, c) else {
            continue;
        };
        let eqs = implicit_equalities(d.n, c);
        let rows: Vec<Vec<Q>> = eqs.iter().map(|a| a.form.coeffs.clone()).collect();
        let frame = nullspace(&rows, d.n);
        let k = frame.len();
        if best.as_ref().is_none_or(|(b, _)| k > *b) {
            best = Some((k, DimensionWitness { point, frame }));
        }
    }
    best.map(|(_, w)| w)
}

/// Local dimension at a point of the set: the dimension of its intersection with a box of
/// infinitesimal radius around the point.
pub fn dimension_at(d: &DefinableSet, x: &[GroupElement]) -> Result<usize> {
    if !d.membership(x)? {
        return Err(Error::NotInSet);
    }
    let level = max_level(d, x) + 1;
    let eps = GroupElement::infinitesimal(level);
    let n = d.n;
    let mut atoms = Vec::with_capacity(2 * n);
    for (i, xi) in x.iter().enumerate() {
        let t = AffForm::coordinate(n, i);
        atoms.push(Atom::le_between(&AffForm::constant(n, xi.div(&eps)), &t));
        atoms.push(Atom::le_between(&t, &AffForm::constant(n, xi.mul(&eps))));
    }
    let local = d.intersect_atoms(&atoms);
    Ok(dimension(&local).expect("the point itself lies in the local piece"))
}
