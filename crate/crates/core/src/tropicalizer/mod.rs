//! Tropicalization of hypersurfaces: corner loci of Gauss-valued polynomials, their
//! restrictions to boxes, and local cones.

use serde_json::{json, Value};

use crate::error::{Direction, Error, Result};
use crate::gaussfield::ValuedPolynomial;
use crate::linarith::{dimension_at, AffForm, Atom, DefinableSet};
use crate::mpolytope::{decompose_set, image_monomial_set, make_polytope, star, CPolytope, CellComplex};
use crate::ovalgroup::{GroupElement, ValueGroupDesc};
use crate::rational::Q;

/// The set of `r` at which the maximum of the monomial values of a polynomial is attained
/// at least twice.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalHypersurface {
    pub carrier: DefinableSet,
    pub complex: CellComplex,
    pub source: ValuedPolynomial,
}

impl TropicalHypersurface {
    pub fn n(&self) -> usize {
        self.carrier.n
    }

    pub fn dimension(&self) -> Option<usize> {
        self.complex.dimension()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "polynomial": self.source.to_string(),
            "vars": self.source.vars,
            "carrier": self.carrier.to_json(),
            "cells": self.complex.to_json()["cells"].clone(),
            "dimension": self.dimension(),
        })
    }
}

/// `r -> |c| r^J` for every monomial of `P`.
pub fn monomial_forms(p: &ValuedPolynomial) -> Vec<AffForm> {
    p.coefficient_values().into_iter().map(|(j, c)| AffForm::monomial(&j, c)).collect()
}

/// Corner locus as a union of one conjunct per pair of monomials.
pub fn corner_locus_set(p: &ValuedPolynomial) -> DefinableSet {
    let n = p.n();
    let forms = monomial_forms(p);
    let mut out = DefinableSet::empty(n).with_params(ValueGroupDesc::rationals());
    for a in 0..forms.len() {
        for b in a + 1..forms.len() {
            let mut atoms: Vec<Atom> = Atom::eq_between(&forms[a], &forms[b]).into();
            for (c, f) in forms.iter().enumerate() {
                if c != a && c != b {
                    atoms.push(Atom::le_between(f, &forms[a]));
                }
            }
            out.push_disjunct(atoms);
        }
    }
    out.prune_empty()
}

pub fn corner_locus(p: &ValuedPolynomial) -> TropicalHypersurface {
    let carrier = corner_locus_set(p);
    let complex = decompose_set(&carrier);
    TropicalHypersurface { carrier, complex, source: p.clone() }
}

/// Smallest divisible group holding the constants of a set.
fn group_of(d: &DefinableSet) -> ValueGroupDesc {
    ValueGroupDesc::trivial().extended_with(&d.constants())
}

/// The corner locus cut by monomial constraints, certified as a compact polytope.
pub fn tropicalize_domain(p: &ValuedPolynomial, domain: &DefinableSet) -> Result<CPolytope> {
    if domain.n != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), got: domain.n });
    }
    let set = corner_locus_set(p).intersect(domain).prune_empty();
    let lambda = group_of(&set).extended_with(&domain.constants());
    make_polytope(&set, &lambda)
}

/// The corner locus inside `lo_i <= t_i <= hi_i`; a missing bound is an error.
pub fn tropicalize_box(p: &ValuedPolynomial, bounds: &[(Option<GroupElement>, Option<GroupElement>)]) -> Result<CPolytope> {
    let n = p.n();
    if bounds.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: bounds.len() });
    }
    let mut atoms = Vec::with_capacity(2 * n);
    for (i, (lo, hi)) in bounds.iter().enumerate() {
        let t = AffForm::coordinate(n, i);
        let lo = lo.as_ref().ok_or(Error::Unbounded { coordinate: i, direction: Direction::Down })?;
        let hi = hi.as_ref().ok_or(Error::Unbounded { coordinate: i, direction: Direction::Up })?;
        atoms.push(Atom::le_between(&AffForm::constant(n, lo.clone()), &t));
        atoms.push(Atom::le_between(&t, &AffForm::constant(n, hi.clone())));
    }
    tropicalize_domain(p, &DefinableSet::conjunction(n, atoms))
}

/// The cone of the corner locus at one of its points.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGerm {
    pub cone: DefinableSet,
    /// Local dimension of the locus at the point.
    pub dimension: usize,
    /// Every maximal cell of the cone has the local dimension.
    pub pure: bool,
}

impl LocalGerm {
    pub fn to_json(&self) -> Value {
        json!({
            "cone": self.cone.to_json(),
            "dimension": self.dimension,
            "pure": self.pure,
        })
    }
}

pub fn local_germ(p: &ValuedPolynomial, xi: &[GroupElement]) -> Result<LocalGerm> {
    let locus = corner_locus_set(p);
    if xi.len() != locus.n {
        return Err(Error::DimensionMismatch { expected: locus.n, got: xi.len() });
    }
    let cone = star(&locus, xi)?;
    let dimension = dimension_at(&locus, xi)?;
    let pure = decompose_set(&cone).cells.iter().all(|c| c.dim == dimension);
    Ok(LocalGerm { cone, dimension, pure })
}

/// Whether `t -> t^M` maps the whole torus `(R_{>0})^n` onto `(R_{>0})^m`.
pub fn full_image_check(m: &[Vec<Q>]) -> Result<bool> {
    let n = m.first().map_or(0, Vec::len);
    let ones = vec![GroupElement::one(); m.len()];
    let img = image_monomial_set(&DefinableSet::universe(n), m, &ones)?;
    Ok(img.set_eq(&DefinableSet::universe(m.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussfield::ValuedFieldDesc;
    use crate::rational::q;

    fn g(s: &str) -> GroupElement {
        GroupElement::parse(s).unwrap()
    }

    fn pt(xs: &[&str]) -> Vec<GroupElement> {
        xs.iter().map(|x| g(x)).collect()
    }

    fn poly(s: &str, field: &str) -> ValuedPolynomial {
        ValuedPolynomial::parse(s, &ValuedFieldDesc::parse(field).unwrap()).unwrap()
    }

    #[test]
    fn tropical_line() {
        let t = corner_locus(&poly("1 + T1 + T2", "Q-trivial"));
        assert_eq!(t.dimension(), Some(1));
        assert_eq!(t.complex.count_cells_of_dim(1), 3);
        assert_eq!(t.complex.count_junctions_of_dim(0), 1);
        for (x, inside) in [(["1", "1"], true), (["3", "3"], true), (["1", "1/7"], true), (["1/2", "1"], true), (["2", "1"], false)] {
            assert_eq!(t.carrier.contains(&pt(&x)), inside, "{x:?}");
        }
        assert!(t.carrier.closure().set_eq(&t.carrier));
    }

    #[test]
    fn monomials_and_padic_ties() {
        assert!(corner_locus(&poly("T1", "Q-trivial")).carrier.is_empty());
        let t = corner_locus(&poly("1 + 5*T", "Q-padic:5"));
        assert_eq!(t.dimension(), Some(0));
        assert!(t.carrier.contains(&pt(&["5"])));
        assert!(!t.carrier.contains(&pt(&["1"])));
    }

    #[test]
    fn boxes() {
        let p = poly("1 + T1 + T2", "Q-trivial");
        let b = tropicalize_box(&p, &[(Some(g("1/2")), Some(g("4"))), (Some(g("1/2")), Some(g("4")))]).unwrap();
        let c = crate::mpolytope::decompose(&b);
        assert_eq!((c.count_cells_of_dim(1), c.count_junctions_of_dim(0)), (3, 1));
        assert!(c.is_tree());
        let p = poly("1 + T", "Q-trivial");
        assert!(tropicalize_box(&p, &[(Some(g("4")), Some(g("8")))]).unwrap().is_empty());
        assert_eq!(
            tropicalize_box(&p, &[(Some(g("4")), None)]),
            Err(Error::Unbounded { coordinate: 0, direction: Direction::Up })
        );
    }

    #[test]
    fn germs() {
        let p = poly("1 + T1 + T2", "Q-trivial");
        let v = local_germ(&p, &pt(&["1", "1"])).unwrap();
        assert_eq!(v.dimension, 1);
        assert!(v.pure);
        let cone = crate::mpolytope::decompose_set(&v.cone);
        assert_eq!(cone.count_cells_of_dim(1), 3);
        let e = local_germ(&p, &pt(&["1", "1/3"])).unwrap();
        assert!(e.cone.contains(&pt(&["1", "5"])) && e.cone.contains(&pt(&["1", "1/5"])));
        assert!(!e.cone.contains(&pt(&["2", "1"])));
        assert_eq!(local_germ(&p, &pt(&["2", "1"])), Err(Error::NotInSet));
    }

    #[test]
    fn full_images() {
        assert!(full_image_check(&[vec![q(1), q(0)], vec![q(0), q(1)]]).unwrap());
        assert!(full_image_check(&[vec![q(1), q(1)], vec![q(1), q(-1)]]).unwrap());
        assert!(!full_image_check(&[vec![q(1), q(0)], vec![q(1), q(0)]]).unwrap());
    }
}
