//! Compact polytopes in multiplicative coordinates, their cell structures,
//! piecewise monomial maps, local cones and chart compatibility.

mod atlas;
mod complex;
mod plmap;
mod star;

pub use atlas::{atlas_compatible, chart_transition, union_charts, PolytopalChart, Transition};
pub use complex::{decompose, decompose_set, Cell, CellComplex};
pub use plmap::{is_piecewise_immersion, PLMap};
pub use star::{star, star_probe};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Direction, Error, Result};
use crate::linarith::{eliminate_many, one_variable_bounds, AffForm, Atom, DefinableSet};
use crate::ovalgroup::{GroupElement, ValueGroupDesc};
use crate::rational::Q;

/// A compact definable set whose atoms are all non-strict, with parameters in the
/// divisible group `lambda`, together with certified coordinate bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CPolytope {
    pub carrier: DefinableSet,
    pub lambda: ValueGroupDesc,
    /// Per-coordinate `(min, max)`; `None` for the empty polytope.
    pub bounds: Option<Vec<(GroupElement, GroupElement)>>,
}

/// Closes `d`, checks its constants against `lambda` and certifies boundedness.
pub fn make_polytope(d: &DefinableSet, lambda: &ValueGroupDesc) -> Result<CPolytope> {
    // Constants are checked first: a foreign constant is reported even when the set is
    // also unbounded.
    for c in d.constants() {
        if !lambda.contains(&c) {
            return Err(Error::ConstantOutsideParameterGroup(c.to_string()));
        }
    }
    let carrier = d.closure().with_params(lambda.clone());
    let bounds = coordinate_bounds(&carrier)?;
    Ok(CPolytope { carrier, lambda: lambda.clone(), bounds })
}

/// Bounds of every coordinate over a closed set, or the offending direction.
fn coordinate_bounds(d: &DefinableSet) -> Result<Option<Vec<(GroupElement, GroupElement)>>> {
    if d.is_empty() {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(d.n);
    for i in 0..d.n {
        let others: Vec<usize> = (0..d.n).filter(|&j| j != i).collect();
        let proj = eliminate_many(d, &others)?;
        let mut lo: Option<GroupElement> = None;
        let mut hi: Option<GroupElement> = None;
        for c in &proj.disjuncts {
            let Some((l, h)) = one_variable_bounds(c) else { continue };
            let Some((l, _)) = l else {
                return Err(Error::Unbounded { coordinate: i, direction: Direction::Down });
            };
            let Some((h, _)) = h else {
                return Err(Error::Unbounded { coordinate: i, direction: Direction::Up });
            };
            lo = Some(match lo {
                Some(x) if x <= l => x,
                _ => l,
            });
            hi = Some(match hi {
                Some(x) if x >= h => x,
                _ => h,
            });
        }
        match (lo, hi) {
            (Some(l), Some(h)) => out.push((l, h)),
            _ => return Ok(None),
        }
    }
    Ok(Some(out))
}

impl CPolytope {
    pub fn n(&self) -> usize {
        self.carrier.n
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn contains(&self, x: &[GroupElement]) -> bool {
        self.carrier.contains(x)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.carrier.dimension()
    }

    /// The box `prod [lo_i, hi_i]`.
    pub fn closed_box(lo: &[GroupElement], hi: &[GroupElement], lambda: &ValueGroupDesc) -> Result<Self> {
        make_polytope(&DefinableSet::closed_box(lo, hi), lambda)
    }

    /// The cube `[1/r, r]^n`.
    pub fn cube(n: usize, r: &GroupElement, lambda: &ValueGroupDesc) -> Result<Self> {
        Self::closed_box(&vec![r.inv(); n], &vec![r.clone(); n], lambda)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        make_polytope(&self.carrier.intersect(&other.carrier), &self.lambda)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        make_polytope(&self.carrier.union(&other.carrier), &self.lambda)
    }

    pub fn to_json(&self) -> Value {
        let bounds = self.bounds.as_ref().map(|b| {
            b.iter().map(|(l, h)| json!([l.to_json(), h.to_json()])).collect::<Vec<_>>()
        });
        json!({
            "carrier": self.carrier.to_json(),
            "lambda": serde_json::to_value(&self.lambda).unwrap(),
            "bounds": bounds,
        })
    }
}

/// Image of a set under `t -> cst * t^M` (`M` has one row per output coordinate),
/// obtained by adjoining the outputs as variables and eliminating the inputs.
pub fn image_monomial_set(d: &DefinableSet, m: &[Vec<Q>], cst: &[GroupElement]) -> Result<DefinableSet> {
    let n = d.n;
    let k = m.len();
    if cst.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: cst.len() });
    }
    for row in m {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
    }
    // Variables: (t_1..t_n, s_1..s_k).
    let total = n + k;
    let map: Vec<usize> = (0..n).collect();
    let mut graph = DefinableSet { n: total, disjuncts: vec![], params: d.params.clone() };
    let mut defining = Vec::with_capacity(2 * k);
    for (j, row) in m.iter().enumerate() {
        let mut coeffs = row.clone();
        coeffs.extend(vec![Q::zero(); k]);
        let f = AffForm::new(coeffs, cst[j].clone());
        let s = AffForm::coordinate(total, n + j);
        defining.extend(Atom::eq_between(&s, &f));
    }
    for c in &d.disjuncts {
        let mut atoms: Vec<Atom> =
            c.iter().map(|a| Atom::new(a.form.reindex(total, &map), a.rel)).collect();
        atoms.extend(defining.iter().cloned());
        graph.push_disjunct(atoms);
    }
    eliminate_many(&graph, &map)
}

/// Image of a polytope under a monomial map, re-certified as a polytope.
pub fn image_monomial(p: &CPolytope, m: &[Vec<Q>], cst: &[GroupElement]) -> Result<CPolytope> {
    let img = image_monomial_set(&p.carrier, m, cst)?;
    make_polytope(&img, &p.lambda.extended_with(cst))
}

#[cfg(test)]
mod tests;
