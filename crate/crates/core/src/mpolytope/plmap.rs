//! Piecewise monomial maps on cell complexes.

use super::complex::{Cell, CellComplex};
use crate::error::{Error, Result};
use crate::linalg::{mat_mul, nullspace, rank, transpose};
use crate::linarith::{AffForm, Atom, DefinableSet};
use crate::ovalgroup::{GroupElement, ValueGroupDesc};
use crate::rational::Q;

/// A map given on each cell by a tuple of forms into `G^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PLMap {
    pub source: CellComplex,
    pub m: usize,
    pub pieces: Vec<Vec<AffForm>>,
}

/// Directions spanning the affine hull of a cell.
pub(crate) fn cell_frame(n: usize, cell: &Cell) -> Vec<Vec<Q>> {
    let rows: Vec<Vec<Q>> = cell
        .atoms
        .iter()
        .filter(|a| {
            // Implicit equalities of a closed cell are the atoms tight at an interior point.
            a.form.eval(&cell.sample).is_one()
        })
        .map(|a| a.form.coeffs.clone())
        .collect();
    nullspace(&rows, n)
}

impl PLMap {
    pub fn new(source: CellComplex, pieces: Vec<Vec<AffForm>>) -> Result<Self> {
        if pieces.len() != source.cells.len() {
            return Err(Error::DimensionMismatch { expected: source.cells.len(), got: pieces.len() });
        }
        let m = pieces.first().map(Vec::len).unwrap_or(0);
        for p in &pieces {
            if p.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: p.len() });
            }
            for f in p {
                if f.dim() != source.n {
                    return Err(Error::DimensionMismatch { expected: source.n, got: f.dim() });
                }
            }
        }
        Ok(Self { source, m, pieces })
    }

    /// The same tuple of forms on every cell.
    pub fn uniform(source: CellComplex, forms: Vec<AffForm>) -> Result<Self> {
        let pieces = vec![forms; source.cells.len()];
        Self::new(source, pieces)
    }

    /// The monomial map `t -> cst * t^M` on every cell.
    pub fn monomial(source: CellComplex, m: &[Vec<Q>], cst: &[GroupElement]) -> Result<Self> {
        let forms = m.iter().zip(cst).map(|(row, c)| AffForm::new(row.clone(), c.clone())).collect();
        Self::uniform(source, forms)
    }

    pub fn eval(&self, x: &[GroupElement]) -> Result<Vec<GroupElement>> {
        let i = self.source.cell_containing(x).ok_or(Error::NotInSet)?;
        Ok(self.pieces[i].iter().map(|f| f.eval(x)).collect())
    }

    /// Whether the formulas of adjacent cells agree on their common part.
    pub fn is_consistent(&self) -> bool {
        let n = self.source.n;
        for &(i, j) in &self.source.adjacency {
            let mut common = self.source.cells[i].atoms.clone();
            common.extend(self.source.cells[j].atoms.iter().cloned());
            for (f, g) in self.pieces[i].iter().zip(&self.pieces[j]) {
                let q = f.div(g);
                // Disagreement set: q < 1 or q > 1 on the common part.
                let mut lt = common.clone();
                lt.push(Atom::lt(q.clone()));
                let mut gt = common.clone();
                gt.push(Atom::lt(q.inv()));
                let dis = DefinableSet::new(n, vec![lt, gt], ValueGroupDesc::rationals());
                if !dis.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Rank of the linear part restricted to the affine hull of cell `i`.
    pub fn cell_rank(&self, i: usize) -> usize {
        let n = self.source.n;
        let frame = cell_frame(n, &self.source.cells[i]);
        if frame.is_empty() {
            return 0;
        }
        let l: Vec<Vec<Q>> = self.pieces[i].iter().map(|f| f.coeffs.clone()).collect();
        if l.is_empty() {
            return 0;
        }
        let b = transpose(&frame, n);
        rank(&mat_mul(&l, &b))
    }

    /// Image of the source under the map, cell by cell.
    pub fn image(&self) -> Result<DefinableSet> {
        let n = self.source.n;
        let mut out = DefinableSet::empty(self.m);
        for (cell, forms) in self.source.cells.iter().zip(&self.pieces) {
            let m: Vec<Vec<Q>> = forms.iter().map(|f| f.coeffs.clone()).collect();
            let cst: Vec<GroupElement> = forms.iter().map(|f| f.constant.clone()).collect();
            let piece = super::image_monomial_set(&cell.as_set(n), &m, &cst)?;
            out = out.union(&piece);
        }
        Ok(out)
    }

    /// Size of the fiber over `y`, counted as the number of cells whose piece reaches `y`
    /// (fibers of an immersion meet each cell at most once).
    pub fn fiber_size(&self, y: &[GroupElement]) -> Result<usize> {
        let n = self.source.n;
        let mut points: Vec<Vec<GroupElement>> = Vec::new();
        for (cell, forms) in self.source.cells.iter().zip(&self.pieces) {
            let mut atoms = cell.atoms.clone();
            for (f, yk) in forms.iter().zip(y) {
                let target = AffForm::constant(n, yk.clone());
                atoms.extend(Atom::eq_between(f, &target));
            }
            if let Some(p) = crate::linarith::relative_interior_point(n, &atoms) {
                // Points on shared faces are counted once.
                if !self.shared_with_earlier(&points, &atoms) {
                    points.push(p);
                }
            }
        }
        Ok(points.len())
    }

    fn shared_with_earlier(&self, earlier: &[Vec<GroupElement>], atoms: &[Atom]) -> bool {
        earlier.iter().any(|p| atoms.iter().all(|a| a.holds_at(p)))
    }
}

/// True iff on every cell the linear part is injective on the cell's affine hull.
pub fn is_piecewise_immersion(f: &PLMap) -> bool {
    (0..f.source.cells.len()).all(|i| f.cell_rank(i) == f.source.cells[i].dim)
}
