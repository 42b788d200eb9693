//! Convex-cell decompositions by hyperplane arrangements.

use num_traits::Signed;
use serde_json::{json, Value};

use super::CPolytope;
use crate::linarith::{conjunct_is_empty, relative_interior_point, AffForm, Atom, DefinableSet};
use crate::ovalgroup::GroupElement;

/// A closed convex cell: a conjunction of non-strict atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub atoms: Vec<Atom>,
    pub dim: usize,
    /// A point of the relative interior.
    pub sample: Vec<GroupElement>,
}

impl Cell {
    pub fn contains(&self, x: &[GroupElement]) -> bool {
        self.atoms.iter().all(|a| a.holds_at(x))
    }

    pub fn as_set(&self, n: usize) -> DefinableSet {
        DefinableSet::conjunction(n, self.atoms.clone())
    }

    fn to_json(&self, n: usize) -> Value {
        json!({
            "dim": self.dim,
            "set": self.as_set(n).to_json(),
            "sample": self.sample.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Maximal closed cells covering a polytope, together with the faces shared by two or
/// more of them.
#[derive(Debug, Clone, PartialEq)]
pub struct CellComplex {
    pub n: usize,
    pub cells: Vec<Cell>,
    /// Closures of all faces of the arrangement inside the carrier.
    pub faces: Vec<Cell>,
    /// Faces lying in at least two maximal cells.
    pub junctions: Vec<Cell>,
    /// Pairs of maximal cells whose closures meet.
    pub adjacency: Vec<(usize, usize)>,
}

/// Canonical hyperplane `f = 1` for the form of an atom: primitive integer exponents
/// whose first nonzero entry is positive.
fn hyperplane(a: &Atom) -> Option<AffForm> {
    if a.form.is_constant() {
        return None;
    }
    let f = Atom::le(a.form.clone()).normalized().form;
    let first = f.coeffs.iter().find(|c| !num_traits::Zero::is_zero(*c)).unwrap();
    Some(if first.is_negative() { f.inv() } else { f })
}

/// All distinct hyperplanes of the atoms, in order of first appearance.
pub(crate) fn arrangement<'a>(atoms: impl Iterator<Item = &'a Atom>) -> Vec<AffForm> {
    let mut out: Vec<AffForm> = Vec::new();
    for a in atoms {
        if let Some(h) = hyperplane(a) {
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out
}

fn sign_atoms(h: &AffForm, s: i8) -> Vec<Atom> {
    match s {
        -1 => vec![Atom::lt(h.clone())],
        0 => vec![Atom::le(h.clone()), Atom::le(h.inv())],
        _ => vec![Atom::lt(h.inv())],
    }
}

/// Open faces of the arrangement inside the conjunct, as sign vectors.
fn faces_in(n: usize, base: &[Atom], hyperplanes: &[AffForm]) -> Vec<Vec<i8>> {
    let mut partial: Vec<(Vec<i8>, Vec<Atom>)> = vec![(vec![], base.to_vec())];
    for h in hyperplanes {
        let mut next = Vec::new();
        for (signs, atoms) in &partial {
            for s in [-1i8, 0, 1] {
                let mut a = atoms.clone();
                a.extend(sign_atoms(h, s));
                if !conjunct_is_empty(n, &a) {
                    let mut sg = signs.clone();
                    sg.push(s);
                    next.push((sg, a));
                }
            }
        }
        partial = next;
    }
    partial.into_iter().map(|(s, _)| s).collect()
}

fn open_atoms(hyperplanes: &[AffForm], signs: &[i8]) -> Vec<Atom> {
    hyperplanes.iter().zip(signs).flat_map(|(h, &s)| sign_atoms(h, s)).collect()
}

fn make_cell(n: usize, hyperplanes: &[AffForm], signs: &[i8]) -> Cell {
    let open = open_atoms(hyperplanes, signs);
    let sample = relative_interior_point(n, &open).expect("face is nonempty");
    let rows: Vec<Vec<crate::rational::Q>> = hyperplanes
        .iter()
        .zip(signs)
        .filter(|(_, &s)| s == 0)
        .map(|(h, _)| h.coeffs.clone())
        .collect();
    let dim = n - crate::linalg::rank(&rows);
    let closed: Vec<Atom> = open.iter().map(Atom::relaxed).collect();
    let mut set = DefinableSet::conjunction(n, closed);
    Cell { atoms: set.disjuncts.pop().unwrap_or_default(), dim, sample }
}

/// Decomposes a polytope into the faces of the arrangement of all its hyperplanes and
/// reports the maximal ones as cells.
pub fn decompose(p: &CPolytope) -> CellComplex {
    decompose_set(&p.carrier)
}

/// Same as [`decompose`] for any closed set.
pub fn decompose_set(d: &DefinableSet) -> CellComplex {
    let n = d.n;
    let hyperplanes = arrangement(d.atoms());
    let mut signs: Vec<Vec<i8>> = Vec::new();
    for c in &d.disjuncts {
        for s in faces_in(n, c, &hyperplanes) {
            if !signs.contains(&s) {
                signs.push(s);
            }
        }
    }
    let faces: Vec<Cell> = signs.iter().map(|s| make_cell(n, &hyperplanes, s)).collect();
    // A face is maximal unless its interior point lies in the closure of another face.
    let maximal: Vec<usize> = (0..faces.len())
        .filter(|&i| {
            !(0..faces.len()).any(|j| j != i && faces[j].dim > faces[i].dim && faces[j].contains(&faces[i].sample))
        })
        .collect();
    let cells: Vec<Cell> = maximal.iter().map(|&i| faces[i].clone()).collect();
    let junctions: Vec<Cell> = (0..faces.len())
        .filter(|i| !maximal.contains(i))
        .filter(|&i| cells.iter().filter(|c| c.contains(&faces[i].sample)).count() >= 2)
        .map(|i| faces[i].clone())
        .collect();
    let mut adjacency = Vec::new();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let mut a = cells[i].atoms.clone();
            a.extend(cells[j].atoms.iter().cloned());
            if !conjunct_is_empty(n, &a) {
                adjacency.push((i, j));
            }
        }
    }
    CellComplex { n, cells, faces, junctions, adjacency }
}

impl CellComplex {
    /// The union of the cells.
    pub fn carrier(&self) -> DefinableSet {
        let mut d = DefinableSet::empty(self.n);
        for c in &self.cells {
            d.push_disjunct(c.atoms.clone());
        }
        d
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn cell_containing(&self, x: &[GroupElement]) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(x))
    }

    pub fn count_cells_of_dim(&self, d: usize) -> usize {
        self.cells.iter().filter(|c| c.dim == d).count()
    }

    pub fn count_junctions_of_dim(&self, d: usize) -> usize {
        self.junctions.iter().filter(|c| c.dim == d).count()
    }

    pub fn is_connected(&self) -> bool {
        let k = self.cells.len();
        if k <= 1 {
            return true;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &(a, b) in &self.adjacency {
                let other = if a == i { b } else if b == i { a } else { continue };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether the complex is a one-dimensional tree: connected with Euler
    /// characteristic one.
    pub fn is_tree(&self) -> bool {
        if self.dimension().is_some_and(|d| d > 1) || !self.is_connected() {
            return false;
        }
        let v = self.faces.iter().filter(|f| f.dim == 0).count() as i64;
        let e = self.faces.iter().filter(|f| f.dim == 1).count() as i64;
        v - e == 1
    }

    /// Checks that two closed cells meet in a union of common faces: every face whose
    /// interior point lies in the intersection is contained in it.
    pub fn faces_compatible(&self) -> bool {
        for &(i, j) in &self.adjacency {
            let inter = self.cells[i].as_set(self.n).intersect(&self.cells[j].as_set(self.n));
            for f in self.faces.iter().filter(|f| inter.contains(&f.sample)) {
                if !f.as_set(self.n).is_subset(&inter) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "cells": self.cells.iter().map(|c| c.to_json(self.n)).collect::<Vec<_>>(),
            "junctions": self.junctions.iter().map(|c| c.to_json(self.n)).collect::<Vec<_>>(),
            "adjacency": self.adjacency.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        })
    }
}
