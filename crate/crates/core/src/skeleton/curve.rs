//! Preimage of `S_1` in a plane curve: the graph of `r -> (|e_1|, …, |e_k|)` along every
//! extension of `η_r`, as a one-dimensional complex projecting to `|X|`.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaussfield::extensions::{fine_breakpoints, fresh_infinitesimal, generic_point, Setup};
use crate::gaussfield::{check_squarefree, extension_count_profile, verify_separating_set, ExtensionProfile, ValuedPolynomial};
use crate::linarith::{AffForm, Atom, DefinableSet};
use crate::mpolytope::{decompose_set, is_piecewise_immersion, CellComplex, PLMap};
use crate::ovalgroup::{Generator, GroupElement};
use crate::rational::{q, Q};

/// `r -> c * r^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFormula {
    pub c: GroupElement,
    pub q: Q,
}

impl ValueFormula {
    pub fn eval(&self, r: &GroupElement) -> GroupElement {
        self.c.mul(&r.pow(&self.q))
    }

    /// Where two formulas agree, if they differ in slope.
    fn meet(&self, other: &Self) -> Option<GroupElement> {
        let dq = &self.q - &other.q;
        if dq.is_zero() {
            return None;
        }
        Some(other.c.div(&self.c).pow(&(Q::from_integer(1.into()) / dq)))
    }
}

/// An edge of the complex: one extension over `[from, to]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveEdge {
    pub from: GroupElement,
    pub to: GroupElement,
    pub values: Vec<ValueFormula>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSkeletonPreimage {
    /// Names of the coordinates: `|X|` and then the separators.
    pub coordinates: Vec<String>,
    pub edges: Vec<CurveEdge>,
    pub complex: CellComplex,
    pub projection: PLMap,
    pub profile: ExtensionProfile,
    /// `(r, fiber size, extension count)` at the checked samples.
    pub fiber_checks: Vec<(GroupElement, usize, usize)>,
}

impl CurveSkeletonPreimage {
    pub fn is_piecewise_immersion(&self) -> bool {
        is_piecewise_immersion(&self.projection)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coordinates": self.coordinates,
            "edges": self.edges.iter().map(|e| json!({
                "from": e.from.pretty(),
                "to": e.to.pretty(),
                "values": e.values.iter().map(|f| json!({"c": f.c.pretty(), "q": f.q.to_string()})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "edge_count": self.complex.count_cells_of_dim(1),
            "vertex_count": self.complex.count_junctions_of_dim(0),
            "is_tree": self.complex.is_tree(),
            "immersion": self.is_piecewise_immersion(),
            "profile": self.profile.to_json(),
            "fiber_checks": self.fiber_checks.iter().map(|(r, f, c)| json!({"r": r.pretty(), "fiber": f, "count": c})).collect::<Vec<_>>(),
        })
    }
}

const SPLIT_DEPTH: usize = 12;

struct CurveData<'a> {
    p: &'a ValuedPolynomial,
    seps: &'a [ValuedPolynomial],
}

impl CurveData<'_> {
    /// Value formulas of the separators on every extension, read off at `x * w^sign` for a
    /// fresh infinitesimal `w`.
    fn germ(&self, x: &GroupElement, sign: i64) -> Result<Vec<Vec<ValueFormula>>> {
        let w = fresh_infinitesimal([x]);
        let level = w.max_level();
        let r = x.mul(&w.pow_int(sign));
        let (setup, coeffs) = Setup::new(self.p, std::slice::from_ref(&r))?;
        let seps = self.seps.iter().map(|e| setup.transform(e)).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for b in setup.branches(&coeffs)? {
            let mut row = Vec::with_capacity(seps.len());
            for (e, name) in seps.iter().zip(self.seps) {
                let v = setup
                    .value_on_branch(&b, e)?
                    .ok_or_else(|| Error::InvalidInput(format!("separator {name} vanishes on an extension")))?;
                let qe = v.exponent(Generator::Infinitesimal(level)) / q(sign);
                let c = v.div(&w.pow(&(&qe * q(sign)))).div(&x.pow(&qe));
                row.push(ValueFormula { c, q: qe });
            }
            out.push(row);
        }
        Ok(out)
    }

    fn edges_over(&self, a: &GroupElement, b: &GroupElement, depth: usize, out: &mut Vec<CurveEdge>) -> Result<()> {
        let left = self.germ(a, 1)?;
        let right = self.germ(b, -1)?;
        let mid_point = a.mul(b).root(2);
        let mid = self.germ(&mid_point, 1)?;
        if left.len() != right.len() || left.len() != mid.len() {
            return Err(Error::Unsupported("extension count changes inside a piece".into()));
        }
        if left == right && left == mid {
            for values in left {
                out.push(CurveEdge { from: a.clone(), to: b.clone(), values });
            }
            return Ok(());
        }
        if depth >= SPLIT_DEPTH {
            return Err(Error::Unsupported("separator values do not settle into monomial pieces".into()));
        }
        let mut cuts: Vec<GroupElement> = Vec::new();
        for (j, row) in left.iter().enumerate() {
            for k in 0..row.len() {
                let fs = [&left[j][k], &mid[j][k], &right[j][k]];
                for x in 0..3 {
                    for y in x + 1..3 {
                        if let Some(m) = fs[x].meet(fs[y]) {
                            if &m > a && &m < b {
                                cuts.push(m);
                            }
                        }
                    }
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        if cuts.is_empty() {
            cuts.push(mid_point);
        }
        let mut ends = vec![a.clone()];
        ends.extend(cuts);
        ends.push(b.clone());
        for w in ends.windows(2) {
            self.edges_over(&w[0], &w[1], depth + 1, out)?;
        }
        Ok(())
    }
}

/// Joins consecutive edges carrying the same formulas.
fn merge_edges(mut edges: Vec<CurveEdge>) -> Vec<CurveEdge> {
    loop {
        let mut joined = None;
        'outer: for i in 0..edges.len() {
            for j in 0..edges.len() {
                if i != j && edges[i].to == edges[j].from && edges[i].values == edges[j].values {
                    joined = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = joined else { return edges };
        edges[i].to = edges[j].to.clone();
        edges.remove(j);
    }
}

fn edge_atoms(n: usize, e: &CurveEdge) -> Vec<Atom> {
    let t0 = AffForm::coordinate(n, 0);
    let mut atoms = vec![
        Atom::le_between(&AffForm::constant(n, e.from.clone()), &t0),
        Atom::le_between(&t0, &AffForm::constant(n, e.to.clone())),
    ];
    for (k, f) in e.values.iter().enumerate() {
        let mut coeffs = vec![Q::zero(); n];
        coeffs[0] = f.q.clone();
        atoms.extend(Atom::eq_between(&AffForm::coordinate(n, k + 1), &AffForm::new(coeffs, f.c.clone())));
    }
    atoms
}

/// The closed one-dimensional complex in coordinates `(|X|, |e_1|, …)` traced by the
/// extensions of `η_r` for `r ∈ [s, t]`, with its projection to `|X|`.
pub fn skeleton_preimage_curve(
    p: &ValuedPolynomial,
    separators: &[ValuedPolynomial],
    s: &GroupElement,
    t: &GroupElement,
) -> Result<CurveSkeletonPreimage> {
    if p.n() != 2 {
        return Err(Error::InvalidInput("expected a polynomial in X and Y".into()));
    }
    if s >= t {
        return Err(Error::InvalidInput(format!("range [{s}, {t}] has no interior")));
    }
    if !s.is_archimedean() || !t.is_archimedean() {
        return Err(Error::InvalidInput("range ends must be real".into()));
    }
    for e in separators {
        if e.vars != p.vars {
            return Err(Error::InvalidInput(format!("separator {e} is not over the variables {:?}", p.vars)));
        }
    }
    check_squarefree(p)?;
    let profile = extension_count_profile(p, s, t)?;
    let fine = fine_breakpoints(p, s, t)?;
    let mut ends = vec![s.clone()];
    ends.extend(fine.iter().cloned());
    ends.push(t.clone());

    let mut samples: Vec<GroupElement> = ends.windows(2).map(|w| generic_point(&w[0], &w[1])).collect();
    samples.extend(ends.iter().cloned());
    for r in &samples {
        if !verify_separating_set(p, separators, &[vec![r.clone()]])? {
            return Err(Error::NotSeparating(r.pretty()));
        }
    }

    let data = CurveData { p, seps: separators };
    let mut edges = Vec::new();
    for w in ends.windows(2) {
        data.edges_over(&w[0], &w[1], 0, &mut edges)?;
    }
    let edges = merge_edges(edges);

    let n = 1 + separators.len();
    let mut carrier = DefinableSet::empty(n);
    for e in &edges {
        carrier.push_disjunct(edge_atoms(n, e));
    }
    let complex = decompose_set(&carrier);
    let mut row = vec![Q::zero(); n];
    row[0] = q(1);
    let projection = PLMap::monomial(complex.clone(), &[row], &[GroupElement::one()])?;

    let mut checks: Vec<GroupElement> = ends.windows(2).map(|w| w[0].mul(&w[1]).root(2)).collect();
    checks.extend(ends.iter().cloned());
    checks.sort();
    checks.dedup();
    let mut fiber_checks = Vec::with_capacity(checks.len());
    for r in checks {
        let fiber = projection.fiber_size(std::slice::from_ref(&r))?;
        let count = profile.count_at(&r).expect("sample inside the range");
        if fiber != count {
            return Err(Error::Unsupported(format!(
                "fiber of size {fiber} over r = {} but {count} extensions",
                r.pretty()
            )));
        }
        fiber_checks.push((r, fiber, count));
    }

    let mut coordinates = vec![format!("|{}|", p.vars[0])];
    coordinates.extend(separators.iter().map(|e| format!("|{e}|")));
    Ok(CurveSkeletonPreimage { coordinates, edges, complex, projection, profile, fiber_checks })
}

/// Tries `Y`, `Y ± cX` and `Y ± c` for small `c`, alone and then in pairs, at the generic
/// points and ends of the fine pieces of `[s, t]`.
pub fn search_separators(p: &ValuedPolynomial, s: &GroupElement, t: &GroupElement) -> Result<Option<Vec<ValuedPolynomial>>> {
    let y = crate::gaussfield::newton::main_variable(p)?;
    let x = 1 - y;
    let (yn, xn) = (&p.vars[y], &p.vars[x]);
    let mut texts = vec![yn.clone()];
    for c in 1..=3 {
        for sign in ["-", "+"] {
            texts.push(format!("{yn} {sign} {c}*{xn}"));
        }
    }
    for c in 1..=3 {
        for sign in ["-", "+"] {
            texts.push(format!("{yn} {sign} {c}"));
        }
    }
    let cands = texts
        .iter()
        .map(|s| ValuedPolynomial::parse_with_vars(s, &p.field, &p.vars))
        .collect::<Result<Vec<_>>>()?;
    let fine = fine_breakpoints(p, s, t)?;
    let mut ends = vec![s.clone()];
    ends.extend(fine);
    ends.push(t.clone());
    let mut samples: Vec<Vec<GroupElement>> = ends.windows(2).map(|w| vec![generic_point(&w[0], &w[1])]).collect();
    samples.extend(ends.iter().map(|e| vec![e.clone()]));
    let works = |set: &[ValuedPolynomial]| -> bool { matches!(verify_separating_set(p, set, &samples), Ok(true)) };
    for c in &cands {
        if works(std::slice::from_ref(c)) {
            return Ok(Some(vec![c.clone()]));
        }
    }
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let pair = [cands[i].clone(), cands[j].clone()];
            if works(&pair) {
                return Ok(Some(pair.to_vec()));
            }
        }
    }
    Ok(None)
}
