//! Definable subsets of `G^n` for a divisible ordered abelian group `G`.
//!
//! Sets are finite unions of conjunctions of atoms `g * prod t_i^(a_i) <| 1` with rational
//! exponents `a_i`, a constant `g` in `G`, and `<|` one of `<` or `<=`. In logarithmic
//! coordinates these are finite unions of polyhedra, and existential projection is
//! Fourier–Motzkin elimination.

mod connect;
mod dimension;
mod fm;
mod json;
mod parse;

pub use connect::is_connected;
#[allow(unused_imports)]
pub(crate) use json::element_from_json;
pub use dimension::{dimension, dimension_at, dimension_witness, probe_dimension, DimensionWitness};
pub use parse::{parse_form, parse_point, parse_set};
pub use fm::{conjunct_is_empty, one_variable_bounds, Bound, eliminate, eliminate_many, is_empty, relative_interior_point, sample_point};

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::primitive_integer_vector;
use crate::ovalgroup::{GroupElement, ValueGroupDesc};
use crate::rational::Q;

/// The map `t -> g * prod t_i^(a_i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffForm {
    pub coeffs: Vec<Q>,
    pub constant: GroupElement,
}

impl AffForm {
    pub fn new(coeffs: Vec<Q>, constant: GroupElement) -> Self {
        Self { coeffs, constant }
    }

    pub fn constant(n: usize, g: GroupElement) -> Self {
        Self { coeffs: vec![Q::zero(); n], constant: g }
    }

    /// The coordinate function `t_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut coeffs = vec![Q::zero(); n];
        coeffs[i] = Q::one();
        Self { coeffs, constant: GroupElement::one() }
    }

    /// `g * t^a` for integer exponents.
    pub fn monomial(exponents: &[i64], g: GroupElement) -> Self {
        Self { coeffs: exponents.iter().map(|&e| Q::from_integer(e.into())).collect(), constant: g }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, t: &[GroupElement]) -> GroupElement {
        debug_assert_eq!(t.len(), self.coeffs.len());
        let mut v = self.constant.clone();
        for (a, x) in self.coeffs.iter().zip(t) {
            if !a.is_zero() {
                v = v.mul(&x.pow(a));
            }
        }
        v
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            constant: self.constant.mul(&other.constant),
        }
    }

    pub fn inv(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| -a).collect(), constant: self.constant.inv() }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, q: &Q) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * q).collect(), constant: self.constant.pow(q) }
    }

    /// Drops coordinate `i`, whose coefficient must be zero.
    pub fn drop_coordinate(&self, i: usize) -> Self {
        debug_assert!(self.coeffs[i].is_zero());
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(i);
        Self { coeffs, constant: self.constant.clone() }
    }

    /// Substitutes `t_i := s` (a form in the same coordinates, not involving `t_i`).
    pub fn substitute(&self, i: usize, s: &AffForm) -> Self {
        let a = self.coeffs[i].clone();
        if a.is_zero() {
            return self.clone();
        }
        let mut base = self.clone();
        base.coeffs[i] = Q::zero();
        base.mul(&s.pow(&a))
    }

    /// Composition with the monomial map `t = c * u^M` (`M` is `n x m`, forms in `u`).
    pub fn compose(&self, inner: &[AffForm]) -> Self {
        let m = inner.first().map(|f| f.dim()).unwrap_or(0);
        let mut out = AffForm::constant(m, self.constant.clone());
        for (a, f) in self.coeffs.iter().zip(inner) {
            if !a.is_zero() {
                out = out.mul(&f.pow(a));
            }
        }
        out
    }

    /// Re-embeds the form in a larger ambient space, placing old coordinate `j` at `map[j]`.
    pub fn reindex(&self, n: usize, map: &[usize]) -> Self {
        let mut coeffs = vec![Q::zero(); n];
        for (j, a) in self.coeffs.iter().enumerate() {
            coeffs[map[j]] = a.clone();
        }
        Self { coeffs, constant: self.constant.clone() }
    }
}

impl fmt::Display for AffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if a.is_one() {
                write!(f, "*t{}", i + 1)?;
            } else {
                write!(f, "*t{}^({a})", i + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
}

impl Rel {
    pub fn holds(self, o: Ordering) -> bool {
        match self {
            Rel::Lt => o == Ordering::Less,
            Rel::Le => o != Ordering::Greater,
        }
    }

    /// Relation of a combination of two bounds.
    pub fn combine(self, other: Rel) -> Rel {
        if self == Rel::Lt || other == Rel::Lt {
            Rel::Lt
        } else {
            Rel::Le
        }
    }
}

/// `form <| 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub form: AffForm,
    pub rel: Rel,
}

impl Atom {
    pub fn new(form: AffForm, rel: Rel) -> Self {
        Self { form, rel }
    }

    pub fn le(form: AffForm) -> Self {
        Self { form, rel: Rel::Le }
    }

    pub fn lt(form: AffForm) -> Self {
        Self { form, rel: Rel::Lt }
    }

    /// `lhs <= rhs` as an atom.
    pub fn le_between(lhs: &AffForm, rhs: &AffForm) -> Self {
        Self::le(lhs.div(rhs))
    }

    pub fn lt_between(lhs: &AffForm, rhs: &AffForm) -> Self {
        Self::lt(lhs.div(rhs))
    }

    /// The pair of atoms encoding `lhs = rhs`.
    pub fn eq_between(lhs: &AffForm, rhs: &AffForm) -> [Self; 2] {
        [Self::le_between(lhs, rhs), Self::le_between(rhs, lhs)]
    }

    pub fn holds_at(&self, t: &[GroupElement]) -> bool {
        self.rel.holds(self.form.eval(t).cmp_one())
    }

    /// Negation: `not (f <= 1)` is `f^-1 < 1`, `not (f < 1)` is `f^-1 <= 1`.
    pub fn negate(&self) -> Self {
        Self {
            form: self.form.inv(),
            rel: match self.rel {
                Rel::Le => Rel::Lt,
                Rel::Lt => Rel::Le,
            },
        }
    }

    pub fn relaxed(&self) -> Self {
        Self { form: self.form.clone(), rel: Rel::Le }
    }

    pub fn strict(&self) -> Self {
        Self { form: self.form.clone(), rel: Rel::Lt }
    }

    /// Truth value of a constant atom.
    pub fn constant_truth(&self) -> Option<bool> {
        if self.form.is_constant() {
            Some(self.rel.holds(self.form.constant.cmp_one()))
        } else {
            None
        }
    }

    /// Rescales the exponent vector to a primitive integer vector.
    pub fn normalized(&self) -> Self {
        if self.form.is_constant() {
            return self.clone();
        }
        let ints = primitive_integer_vector(&self.form.coeffs);
        let first = self.form.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let factor = Q::from_integer(ints[first].clone()) / &self.form.coeffs[first];
        debug_assert!(factor.is_positive());
        Self { form: self.form.pow(&factor), rel: self.rel }
    }

    /// Deterministic ordering key (the compact serialized form).
    pub fn sort_key(&self) -> String {
        let coeffs: Vec<String> = self.form.coeffs.iter().map(|c| c.to_string()).collect();
        format!(
            "{}|{}|{}",
            coeffs.join(","),
            self.form.constant,
            if self.rel == Rel::Lt { "lt" } else { "le" }
        )
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 1", self.form, if self.rel == Rel::Lt { "<" } else { "<=" })
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonicalizes a conjunction: normalizes and sorts atoms, drops true constants and
/// duplicates. Returns `None` when a constant atom is false.
pub fn canonical_conjunct(atoms: Vec<Atom>) -> Option<Vec<Atom>> {
    let mut out: Vec<(String, Atom)> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match a.constant_truth() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        let a = a.normalized();
        out.push((a.sort_key(), a));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out.dedup_by(|x, y| x.0 == y.0);
    Some(out.into_iter().map(|(_, a)| a).collect())
}

/// A finite union of conjunctions of atoms in `n` variables.
#[derive(Clone, PartialEq)]
pub struct DefinableSet {
    pub n: usize,
    pub disjuncts: Vec<Vec<Atom>>,
    pub params: ValueGroupDesc,
}

impl fmt::Debug for DefinableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.disjuncts.is_empty() {
            return write!(f, "DefinableSet(n={}, empty)", self.n);
        }
        write!(f, "DefinableSet(n={}: ", self.n)?;
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " OR ")?;
            }
            write!(f, "[")?;
            for (j, a) in d.iter().enumerate() {
                if j > 0 {
                    write!(f, " AND ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "]")?;
        }
        write!(f, ")")
    }
}

impl DefinableSet {
    pub fn new(n: usize, disjuncts: Vec<Vec<Atom>>, params: ValueGroupDesc) -> Self {
        let mut s = Self { n, disjuncts: vec![], params };
        for d in disjuncts {
            s.push_disjunct(d);
        }
        s
    }

    pub fn empty(n: usize) -> Self {
        Self { n, disjuncts: vec![], params: ValueGroupDesc::rationals() }
    }

    /// All of `G^n`.
    pub fn universe(n: usize) -> Self {
        Self { n, disjuncts: vec![vec![]], params: ValueGroupDesc::rationals() }
    }

    pub fn conjunction(n: usize, atoms: Vec<Atom>) -> Self {
        Self::new(n, vec![atoms], ValueGroupDesc::rationals())
    }

    pub fn with_params(mut self, params: ValueGroupDesc) -> Self {
        self.params = params;
        self
    }

    /// Adds a disjunct after canonicalization, skipping syntactic duplicates.
    pub fn push_disjunct(&mut self, atoms: Vec<Atom>) {
        for a in &atoms {
            assert_eq!(a.form.dim(), self.n, "atom dimension mismatch");
        }
        if let Some(c) = canonical_conjunct(atoms) {
            if !self.disjuncts.contains(&c) {
                self.disjuncts.push(c);
            }
        }
    }

    /// Every atom of every disjunct.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.disjuncts.iter().flatten()
    }

    pub fn membership(&self, x: &[GroupElement]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        Ok(self.contains(x))
    }

    /// Membership without the dimension check.
    pub fn contains(&self, x: &[GroupElement]) -> bool {
        self.disjuncts.iter().any(|d| d.iter().all(|a| a.holds_at(x)))
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for d in &other.disjuncts {
            out.push_disjunct(d.clone());
        }
        out
    }

    /// Intersection; empty products are pruned.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self { n: self.n, disjuncts: vec![], params: self.params.clone() };
        for a in &self.disjuncts {
            for b in &other.disjuncts {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                if let Some(c) = canonical_conjunct(c) {
                    if !conjunct_is_empty(self.n, &c) && !out.disjuncts.contains(&c) {
                        out.disjuncts.push(c);
                    }
                }
            }
        }
        out
    }

    pub fn intersect_atoms(&self, atoms: &[Atom]) -> Self {
        self.intersect(&Self::conjunction(self.n, atoms.to_vec()))
    }

    /// Complement in `G^n`, via atom negation and distribution.
    pub fn complement(&self) -> Self {
        let mut acc: Vec<Vec<Atom>> = vec![vec![]];
        for d in &self.disjuncts {
            let mut next = Vec::new();
            for partial in &acc {
                for a in d {
                    let mut c = partial.clone();
                    c.push(a.negate());
                    if let Some(c) = canonical_conjunct(c) {
                        if !conjunct_is_empty(self.n, &c) && !next.contains(&c) {
                            next.push(c);
                        }
                    }
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        Self { n: self.n, disjuncts: acc, params: self.params.clone() }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    pub fn is_empty(&self) -> bool {
        fm::is_empty(self)
    }

    /// Drops disjuncts that describe the empty set.
    pub fn prune_empty(&self) -> Self {
        Self {
            n: self.n,
            disjuncts: self
                .disjuncts
                .iter()
                .filter(|d| !conjunct_is_empty(self.n, d))
                .cloned()
                .collect(),
            params: self.params.clone(),
        }
    }

    /// Topological closure: empty disjuncts are removed first, then every strict atom is
    /// relaxed. Relaxing an empty disjunct could create points, so the order matters.
    pub fn closure(&self) -> Self {
        let pruned = self.prune_empty();
        let mut out = Self { n: self.n, disjuncts: vec![], params: self.params.clone() };
        for d in pruned.disjuncts {
            out.push_disjunct(d.iter().map(Atom::relaxed).collect());
        }
        out
    }

    pub fn is_closed_syntactically(&self) -> bool {
        self.atoms().all(|a| a.rel == Rel::Le)
    }

    pub fn eliminate(&self, i: usize) -> Result<Self> {
        eliminate(self, i)
    }

    pub fn dimension(&self) -> Option<usize> {
        dimension(self)
    }

    /// Pulls back along the monomial map `t = inner(u)` (one form per coordinate of `t`).
    pub fn pullback(&self, inner: &[AffForm]) -> Self {
        assert_eq!(inner.len(), self.n);
        let m = inner.first().map(|f| f.dim()).unwrap_or(0);
        let mut out = Self { n: m, disjuncts: vec![], params: self.params.clone() };
        for d in &self.disjuncts {
            out.push_disjunct(
                d.iter().map(|a| Atom::new(a.form.compose(inner), a.rel)).collect(),
            );
        }
        out
    }

    /// Box `lo_i <= t_i <= hi_i`.
    pub fn closed_box(lo: &[GroupElement], hi: &[GroupElement]) -> Self {
        let n = lo.len();
        let mut atoms = Vec::new();
        for i in 0..n {
            let t = AffForm::coordinate(n, i);
            atoms.push(Atom::le_between(&AffForm::constant(n, lo[i].clone()), &t));
            atoms.push(Atom::le_between(&t, &AffForm::constant(n, hi[i].clone())));
        }
        Self::conjunction(n, atoms)
    }

    /// Every constant appearing in the description.
    pub fn constants(&self) -> Vec<GroupElement> {
        self.atoms().map(|a| a.form.constant.clone()).collect()
    }

    /// The disjunct `i` as a set on its own.
    pub fn disjunct_set(&self, i: usize) -> Self {
        Self { n: self.n, disjuncts: vec![self.disjuncts[i].clone()], params: self.params.clone() }
    }

    /// Each disjunct as a set on its own.
    pub fn disjunct_sets(&self) -> Vec<Self> {
        (0..self.disjuncts.len()).map(|i| self.disjunct_set(i)).collect()
    }

    /// See [`parse_set`] for the syntax.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        parse_set(s, n)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::set_to_json(self)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        json::set_from_json(v)
    }
}

#[cfg(test)]
mod tests;
