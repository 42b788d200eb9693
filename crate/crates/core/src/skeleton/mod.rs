//! The standard skeleton `S_n` of the torus, its preimages under monomial maps and under
//! projections of plane curves, and quadratic base-change checks.

mod curve;
mod stabilize;

pub use curve::{search_separators, skeleton_preimage_curve, CurveEdge, CurveSkeletonPreimage, ValueFormula};
pub use stabilize::{base_change_stabilization_demo, StabilizationReport};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaussfield::{gauss_residue, residues_alg_independent, FieldElem, ValuedFieldDesc, ValuedPolynomial};
use crate::linalg::{det, mat_mul, rank_of_elements};
use crate::linarith::AffForm;
use crate::mpolytope::{
    decompose, is_piecewise_immersion, union_charts, CPolytope, CellComplex, PLMap, PolytopalChart,
};
use crate::ovalgroup::GroupElement;
use crate::rational::{q, Q};

/// `T -> (c_i T^{M_i})_i` on the torus over a valued field.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMap {
    pub field: ValuedFieldDesc,
    /// One row of exponents per output coordinate.
    pub exponents: Vec<Vec<i64>>,
    pub constants: Vec<FieldElem>,
}

impl MonomialMap {
    pub fn new(field: ValuedFieldDesc, exponents: Vec<Vec<i64>>, constants: Vec<FieldElem>) -> Result<Self> {
        if exponents.len() != constants.len() {
            return Err(Error::DimensionMismatch { expected: exponents.len(), got: constants.len() });
        }
        let n = exponents.first().map_or(0, Vec::len);
        if let Some(row) = exponents.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        if constants.iter().any(FieldElem::is_zero) {
            return Err(Error::InvalidInput("monomial constants must be nonzero".into()));
        }
        Ok(Self { field, exponents, constants })
    }

    /// The map with constants 1.
    pub fn pure(field: ValuedFieldDesc, exponents: Vec<Vec<i64>>) -> Result<Self> {
        let k = exponents.len();
        Self::new(field, exponents, vec![FieldElem::one(); k])
    }

    pub fn source_dim(&self) -> usize {
        self.exponents.first().map_or(0, Vec::len)
    }

    pub fn matrix(&self) -> Vec<Vec<Q>> {
        self.exponents.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    pub fn abs_constants(&self) -> Vec<GroupElement> {
        self.constants.iter().map(|c| self.field.abs(c).expect("nonzero")).collect()
    }

    /// Action on Gauss points: `r -> |c| r^M`.
    pub fn apply(&self, r: &[GroupElement]) -> Vec<GroupElement> {
        self.forms().iter().map(|f| f.eval(r)).collect()
    }

    pub fn forms(&self) -> Vec<AffForm> {
        self.matrix().into_iter().zip(self.abs_constants()).map(|(row, c)| AffForm::new(row, c)).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonomialMap) -> Result<MonomialMap> {
        if self.source_dim() != inner.exponents.len() {
            return Err(Error::DimensionMismatch { expected: self.source_dim(), got: inner.exponents.len() });
        }
        let prod = mat_mul(&self.matrix(), &inner.matrix());
        let exponents = prod.iter().map(|r| r.iter().map(|x| crate::rational::to_i64(x).unwrap()).collect()).collect();
        let mut constants = Vec::with_capacity(self.exponents.len());
        for (row, c) in self.exponents.iter().zip(&self.constants) {
            let mut acc = c.clone();
            for (&e, ci) in row.iter().zip(&inner.constants) {
                acc = acc.mul(&pow_elem(ci, e)?);
            }
            constants.push(acc);
        }
        MonomialMap::new(self.field.clone(), exponents, constants)
    }

    fn monomials(&self) -> Vec<ValuedPolynomial> {
        let n = self.source_dim();
        let vars: Vec<String> = (1..=n).map(|i| format!("T{i}")).collect();
        self.exponents
            .iter()
            .zip(&self.constants)
            .map(|(e, c)| ValuedPolynomial::monomial(&self.field, &vars, c.clone(), e.clone()))
            .collect()
    }
}

fn pow_elem(c: &FieldElem, e: i64) -> Result<FieldElem> {
    let base = if e < 0 { c.inv()? } else { c.clone() };
    let mut acc = FieldElem::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base);
    }
    Ok(acc)
}

/// Whether `η_r` lies over `S_n` under `f`: the residues of the `f_i` at `η_r` are
/// algebraically independent. Requires `r` independent over the value group of `K`.
pub fn skeleton_membership_monomial(f: &MonomialMap, r: &[GroupElement]) -> Result<bool> {
    let n = f.source_dim();
    if r.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: r.len() });
    }
    let mut elems: Vec<GroupElement> = f.field.uniformizer_abs().into_iter().collect();
    elems.extend(r.iter().cloned());
    if rank_of_elements(&elems) != elems.len() {
        return Err(Error::DependentCoordinates(
            r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
        ));
    }
    if f.exponents.len() != n {
        return Ok(false);
    }
    let residues = f
        .monomials()
        .iter()
        .map(|m| gauss_residue(m, r).map(|g| g.representative))
        .collect::<Result<Vec<_>>>()?;
    residues_alg_independent(&residues)
}

/// `φ^{-1}(S_n) ∩ S_n` inside a box, with the induced map to `S_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPreimage {
    pub polytope: CPolytope,
    pub map: Option<PLMap>,
    pub immersion: bool,
    pub diagnostic: Option<String>,
}

impl MonomialPreimage {
    pub fn to_json(&self) -> Value {
        json!({
            "polytope": self.polytope.to_json(),
            "map": self.map.as_ref().map(|m| m.pieces[0].iter().map(|f| f.to_string()).collect::<Vec<_>>()),
            "immersion": self.immersion,
            "diagnostic": self.diagnostic,
        })
    }
}

pub fn preimage_skeleton_monomial(phi: &MonomialMap, boxed: &CPolytope) -> Result<MonomialPreimage> {
    let n = phi.source_dim();
    if phi.exponents.len() != n {
        return Err(Error::InvalidInput("monomial map must be square".into()));
    }
    if boxed.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: boxed.n() });
    }
    if det(&phi.matrix()).is_zero() {
        let empty = CPolytope {
            carrier: crate::linarith::DefinableSet::empty(n),
            lambda: boxed.lambda.clone(),
            bounds: None,
        };
        return Ok(MonomialPreimage {
            polytope: empty,
            map: None,
            immersion: false,
            diagnostic: Some(
                "singular exponent matrix: residues of the components are dependent at every point".into(),
            ),
        });
    }
    let complex = decompose(boxed);
    let map = PLMap::monomial(complex, &phi.matrix(), &phi.abs_constants())?;
    let immersion = is_piecewise_immersion(&map);
    Ok(MonomialPreimage { polytope: boxed.clone(), map: Some(map), immersion, diagnostic: None })
}

/// Union of skeleton pieces after pairwise chart compatibility checks.
pub fn union_skeleton_preimages(parts: &[PolytopalChart]) -> Result<CellComplex> {
    union_charts(parts)
}

#[cfg(test)]
mod tests;
