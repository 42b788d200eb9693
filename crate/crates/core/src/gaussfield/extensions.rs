//! Extensions of a Gauss valuation `η_r` of `K(T)` to `K(T)[Y]/(P)`.
//!
//! Roots of `P` are grouped by the Newton polygon at `η_r`; each segment contributes the
//! irreducible factors of its residual polynomial over the residue field `κ`. A repeated
//! linear residual factor is resolved by one shift `Y -> c + Y`; anything deeper is
//! reported rather than approximated.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::field::{FieldElem, ValuedFieldDesc};
use super::newton::{main_variable, NewtonPolygon, NewtonSegment};
use super::poly::ValuedPolynomial;
use super::resfield::{
    factor_ratfunc, is_square_up_to, monic, pdivrem, trim, FieldOps, RatFunc, RatFuncField, UPoly,
};
use super::residue::{dominant_monomials, gauss_eval};
use crate::error::{Error, Result};
use crate::linalg::{coordinates_in_span, det, rank_of_elements};
use crate::ovalgroup::GroupElement;
use crate::rational::{lcm_of_denominators, q, Q};

/// Where the roots of a branch sit relative to its shift `c`.
#[derive(Debug, Clone, PartialEq)]
pub enum Root {
    /// `y = c` exactly.
    Exact,
    /// `|y - c| = rho` and the residue of `(y - c)^e / m(rho^e)` is a root of `phi`.
    Cluster { rho: GroupElement, phi: UPoly<RatFunc> },
}

/// One extension of `η_r`, described by root data of `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub shift: ValuedPolynomial,
    /// Coefficients of `P(shift + Y)`.
    pub coeffs: Vec<ValuedPolynomial>,
    pub root: Root,
    pub ramification: usize,
    pub residue_degree: usize,
}

impl Branch {
    /// `|y - shift|`, or `None` for an exact root.
    pub fn rho(&self) -> Option<&GroupElement> {
        match &self.root {
            Root::Exact => None,
            Root::Cluster { rho, .. } => Some(rho),
        }
    }
}

const EVAL_DEPTH: usize = 8;

/// The valuation `η_r` on `K(T)`, possibly after rescaling `T -> π^k T` so that `r = 1`.
#[derive(Debug, Clone)]
pub struct Setup {
    pub field: ValuedFieldDesc,
    pub vars: Vec<String>,
    pub y: usize,
    tvars: Vec<String>,
    r: Vec<GroupElement>,
    /// `r` lies in the value group of `K` and was rescaled to 1.
    relation: bool,
    subst: Vec<FieldElem>,
    basis: Vec<GroupElement>,
    has_u: bool,
    kappa: RatFuncField,
}

impl Setup {
    pub fn new(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<(Self, Vec<ValuedPolynomial>)> {
        let y = main_variable(p)?;
        let tvars: Vec<String> = p.vars.iter().enumerate().filter(|(i, _)| *i != y).map(|(_, v)| v.clone()).collect();
        if r.len() != tvars.len() {
            return Err(Error::DimensionMismatch { expected: tvars.len(), got: r.len() });
        }
        let field = p.field.clone();
        let u = field.uniformizer_abs();
        let has_u = u.is_some();
        let mut elems: Vec<GroupElement> = u.iter().cloned().collect();
        elems.extend(r.iter().cloned());
        let kappa = RatFuncField::new(field.residue_field());
        let mut setup = if rank_of_elements(&elems) == elems.len() {
            Setup {
                field: field.clone(),
                vars: p.vars.clone(),
                y,
                tvars,
                r: r.to_vec(),
                relation: false,
                subst: vec![],
                basis: elems,
                has_u,
                kappa,
            }
        } else {
            let orders = r.iter().map(|ri| field.order_of_value(ri)).collect::<Option<Vec<Q>>>().ok_or_else(|| {
                Error::Unsupported(format!(
                    "r = ({}) is partly dependent on the value group of the base field",
                    r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                ))
            })?;
            let subst = orders.iter().map(|k| field.lift(&Q::one(), k)).collect::<Result<Vec<_>>>()?;
            Setup {
                field: field.clone(),
                vars: p.vars.clone(),
                y,
                tvars,
                r: vec![GroupElement::one(); r.len()],
                relation: true,
                subst,
                basis: u.into_iter().collect(),
                has_u,
                kappa,
            }
        };
        setup.kappa = kappa;
        let coeffs = setup.transform(p)?;
        Ok((setup, coeffs))
    }

    /// Coefficients in `Y` of a polynomial over the same variables, rescaled if needed.
    pub fn transform(&self, e: &ValuedPolynomial) -> Result<Vec<ValuedPolynomial>> {
        if e.vars != self.vars {
            return Err(Error::InvalidInput(format!(
                "function over variables {:?}, expected {:?}",
                e.vars, self.vars
            )));
        }
        let coeffs = e.coefficients_in(self.y)?;
        if !self.relation {
            return Ok(coeffs);
        }
        coeffs.iter().map(|c| c.rescale(&self.subst)).collect()
    }

    fn abs(&self, a: &ValuedPolynomial) -> Option<GroupElement> {
        gauss_eval(a, &self.r).expect("arity checked")
    }

    /// Normalized residue of a nonzero coefficient.
    fn residue(&self, a: &ValuedPolynomial) -> Result<RatFunc> {
        let (_, dom) = dominant_monomials(a, &self.r)?;
        let k = &self.kappa;
        let mut acc = k.zero();
        for j in &dom {
            let u = self.field.unit_residue(&a.terms[j]).unwrap();
            let term = match (self.relation, j.len()) {
                (_, 0) => k.constant(&u),
                (false, _) => {
                    if dom.len() != 1 {
                        return Err(Error::Unsupported("tie between monomials at an independent point".into()));
                    }
                    k.constant(&u)
                }
                (true, 1) => k.monomial(&u, j[0]),
                (true, _) => {
                    if j.iter().any(|&x| x != 0) {
                        return Err(Error::Unsupported(
                            "residue field with several transcendental generators".into(),
                        ));
                    }
                    k.constant(&u)
                }
            };
            acc = k.add(&acc, &term);
        }
        Ok(acc)
    }

    fn zero_poly(&self) -> ValuedPolynomial {
        ValuedPolynomial::zero(&self.field, &self.tvars)
    }

    /// A monomial `π^k T^J` of value `g`.
    fn section(&self, g: &GroupElement) -> Result<ValuedPolynomial> {
        let outside = || Error::Unsupported(format!("value {g} is outside the value group"));
        if self.relation {
            let k = self.field.order_of_value(g).ok_or_else(outside)?;
            return Ok(ValuedPolynomial::constant(&self.field, &self.tvars, self.field.lift(&Q::one(), &k)?));
        }
        let coords = if self.basis.is_empty() {
            if !g.is_one() {
                return Err(outside());
            }
            vec![]
        } else {
            coordinates_in_span(&self.basis, g).ok_or_else(outside)?
        };
        let off = usize::from(self.has_u);
        let k = if self.has_u { coords[0].clone() } else { Q::zero() };
        let mut exp = Vec::with_capacity(self.tvars.len());
        for c in &coords[off..] {
            if !c.is_integer() {
                return Err(outside());
            }
            exp.push(c.to_integer().try_into().map_err(|_| outside())?);
        }
        let c = self.field.lift(&Q::one(), &k)?;
        Ok(ValuedPolynomial::monomial(&self.field, &self.tvars, c, exp))
    }

    /// Least `e` with `rho^e` in the value group of `η_r`.
    fn ramification(&self, rho: &GroupElement) -> Result<usize> {
        if self.basis.is_empty() {
            return if rho.is_one() {
                Ok(1)
            } else {
                Err(Error::Unsupported(format!("slope {rho} outside the rational span of the values")))
            };
        }
        let coords = coordinates_in_span(&self.basis, rho)
            .ok_or_else(|| Error::Unsupported(format!("slope {rho} outside the rational span of the values")))?;
        let skip_u = self.has_u && self.field.divisible_values();
        let relevant: Vec<&Q> = coords.iter().enumerate().filter(|(i, _)| !(skip_u && *i == 0)).map(|(_, c)| c).collect();
        let l = lcm_of_denominators(relevant);
        l.try_into().map_err(|_| Error::Unsupported("ramification index too large".into()))
    }

    fn check_tame(&self, k: usize) -> Result<()> {
        let p = self.kappa.characteristic() as usize;
        if p != 0 && k.is_multiple_of(p) {
            return Err(Error::WildOrDeepRamification(format!("residue characteristic {p} divides {k}")));
        }
        Ok(())
    }

    /// Residual polynomial of a segment, in `W = Y^e / m(rho^e)`, normalized at its left end.
    fn residual(&self, coeffs: &[ValuedPolynomial], seg: &NewtonSegment, e: usize) -> Result<UPoly<RatFunc>> {
        let k = &self.kappa;
        let i0 = seg.start;
        let level = self.abs(&coeffs[i0]).unwrap().mul(&seg.slope.pow_int(i0 as i64));
        let u0 = self.residue(&coeffs[i0])?;
        let deg = (seg.end - i0) / e;
        let mut out = vec![k.zero(); deg + 1];
        for (j, slot) in out.iter_mut().enumerate() {
            let i = i0 + j * e;
            if let Some(v) = self.abs(&coeffs[i]) {
                if v.mul(&seg.slope.pow_int(i as i64)) == level {
                    *slot = k.div(&self.residue(&coeffs[i])?, &u0);
                }
            }
        }
        Ok(trim(k, out))
    }

    fn factor(&self, r: &UPoly<RatFunc>) -> Result<Vec<(UPoly<RatFunc>, usize)>> {
        factor_ratfunc(&self.kappa, r).ok_or_else(|| {
            if self.kappa.characteristic() == 2 {
                Error::WildOrDeepRamification("residual polynomial in characteristic 2".into())
            } else {
                Error::Unsupported("residual polynomial factorization beyond the supported cases".into())
            }
        })
    }

    /// A lift `c` of the unique root of a linear residual factor, with `|c| = rho`.
    fn lift_root(&self, rho: &GroupElement, e: usize, phi: &UPoly<RatFunc>) -> Result<ValuedPolynomial> {
        let deep = |what: &str| Error::WildOrDeepRamification(format!("cannot lift a {what} residual root"));
        if e != 1 {
            return Err(deep("ramified"));
        }
        if phi.len() != 2 {
            return Err(deep("non-rational"));
        }
        let phi = monic(&self.kappa, phi);
        let w = self.kappa.as_constant(&self.kappa.neg(&phi[0])).ok_or_else(|| deep("non-constant"))?;
        Ok(self.section(rho)?.scale(&FieldElem::constant(w)))
    }

    /// All extensions (roots with `|y - shift| < bound` when a bound is given).
    fn branches_of(
        &self,
        shift: &ValuedPolynomial,
        coeffs: &[ValuedPolynomial],
        bound: Option<&GroupElement>,
        depth: usize,
    ) -> Result<Vec<Branch>> {
        let vals: Vec<Option<GroupElement>> = coeffs.iter().map(|a| self.abs(a)).collect();
        let np = NewtonPolygon::from_values(&vals)?;
        if np.ord >= 2 {
            return Err(Error::NotSquarefree);
        }
        let mut out = Vec::new();
        if np.ord == 1 {
            out.push(Branch {
                shift: shift.clone(),
                coeffs: coeffs.to_vec(),
                root: Root::Exact,
                ramification: 1,
                residue_degree: 1,
            });
        }
        for seg in &np.segments {
            if bound.is_some_and(|b| seg.slope >= *b) {
                continue;
            }
            let e = self.ramification(&seg.slope)?;
            self.check_tame(e)?;
            let r = self.residual(coeffs, seg, e)?;
            for (phi, m) in self.factor(&r)? {
                let f = phi.len() - 1;
                if m == 1 {
                    out.push(Branch {
                        shift: shift.clone(),
                        coeffs: coeffs.to_vec(),
                        root: Root::Cluster { rho: seg.slope.clone(), phi },
                        ramification: e,
                        residue_degree: f,
                    });
                    continue;
                }
                self.check_tame(m)?;
                if depth >= 1 {
                    return Err(Error::WildOrDeepRamification(
                        "repeated residual factor after a lifting step".into(),
                    ));
                }
                let c = self.lift_root(&seg.slope, e, &phi)?;
                let new_shift = shift.add(&c);
                let new_coeffs = taylor_shift(coeffs, &c);
                let sub = self.branches_of(&new_shift, &new_coeffs, Some(&seg.slope), depth + 1)?;
                let total: usize = sub.iter().map(|b| b.ramification * b.residue_degree).sum();
                if total != m * e * f {
                    return Err(Error::Unsupported("root count mismatch after lifting".into()));
                }
                out.extend(sub);
            }
        }
        Ok(out)
    }

    pub fn branches(&self, coeffs: &[ValuedPolynomial]) -> Result<Vec<Branch>> {
        let out = self.branches_of(&self.zero_poly(), coeffs, None, 0)?;
        let total: usize = out.iter().map(|b| b.ramification * b.residue_degree).sum();
        if total != coeffs.len() - 1 {
            return Err(Error::Unsupported(format!(
                "sum of e*f over extensions is {total}, expected {}",
                coeffs.len() - 1
            )));
        }
        Ok(out)
    }

    /// `|e(y)|` along a branch, for `e` given by its (transformed) coefficients in `Y`;
    /// `None` when `e` vanishes there.
    pub fn value_on_branch(&self, branch: &Branch, e: &[ValuedPolynomial]) -> Result<Option<GroupElement>> {
        self.value_at_depth(branch, e, 0)
    }

    fn value_at_depth(&self, branch: &Branch, e: &[ValuedPolynomial], depth: usize) -> Result<Option<GroupElement>> {
        if e.is_empty() {
            return Ok(None);
        }
        let b = taylor_shift(e, &branch.shift);
        let (rho, phi) = match &branch.root {
            Root::Exact => return Ok(self.abs(&b[0])),
            Root::Cluster { rho, phi } => (rho, phi),
        };
        let terms: Vec<(usize, GroupElement)> = b
            .iter()
            .enumerate()
            .filter_map(|(k, c)| self.abs(c).map(|v| (k, v.mul(&rho.pow_int(k as i64)))))
            .collect();
        let Some(top) = terms.iter().map(|(_, v)| v.clone()).max() else { return Ok(None) };
        let dom: Vec<usize> = terms.iter().filter(|(_, v)| *v == top).map(|(k, _)| *k).collect();
        let kap = &self.kappa;
        let k0 = dom[0];
        let u0 = self.residue(&b[k0])?;
        let e_idx = branch.ramification;
        let mut poly = vec![kap.zero(); (dom.last().unwrap() - k0) / e_idx + 1];
        for &k in &dom {
            if !(k - k0).is_multiple_of(e_idx) {
                return Err(Error::Unsupported("dominant terms incompatible with the ramification".into()));
            }
            poly[(k - k0) / e_idx] = kap.div(&self.residue(&b[k])?, &u0);
        }
        let (_, rem) = pdivrem(kap, &trim(kap, poly), phi);
        if !rem.is_empty() {
            return Ok(Some(top));
        }
        if depth >= EVAL_DEPTH {
            return Err(Error::Unsupported("cancellation persists after repeated refinement".into()));
        }
        let c = self.lift_root(rho, branch.ramification, phi)?;
        let new_shift = branch.shift.add(&c);
        let new_coeffs = taylor_shift(&branch.coeffs, &c);
        let sub = self.branches_of(&new_shift, &new_coeffs, Some(rho), 0)?;
        if sub.len() != 1 {
            return Err(Error::Unsupported("refined cluster does not isolate one root".into()));
        }
        self.value_at_depth(&sub[0], e, depth + 1)
    }

    /// Number of extensions after adjoining square roots of the constants `twist`
    /// (units of `K`), by square-class tests on residual discriminants.
    fn count_twisted(&self, coeffs: &[ValuedPolynomial], twist: &[Q]) -> Result<usize> {
        let mut deltas = Vec::with_capacity(twist.len());
        for d in twist {
            let el = FieldElem::constant(d.clone());
            if self.field.order(&el) != Some(Q::zero()) {
                return Err(Error::Unsupported(format!("adjoining the square root of {d} ramifies")));
            }
            deltas.push(self.field.unit_residue(&el).unwrap());
        }
        let vals: Vec<Option<GroupElement>> = coeffs.iter().map(|a| self.abs(a)).collect();
        let np = NewtonPolygon::from_values(&vals)?;
        let mut count = usize::from(np.ord == 1);
        let k = &self.kappa;
        for seg in &np.segments {
            let e = self.ramification(&seg.slope)?;
            self.check_tame(e)?;
            let r = monic(k, &self.residual(coeffs, seg, e)?);
            count += match r.len() - 1 {
                1 => 1,
                2 => {
                    let disc = k.sub(&k.mul(&r[1], &r[1]), &k.mul(&k.of_int(4), &r[0]));
                    if k.is_zero(&disc) {
                        return Err(Error::WildOrDeepRamification("repeated residual root".into()));
                    }
                    let split = is_square_up_to(k, &disc, &deltas).ok_or_else(|| {
                        Error::WildOrDeepRamification("quadratic twist in characteristic 2".into())
                    })?;
                    if split {
                        2
                    } else {
                        1
                    }
                }
                _ => return Err(Error::Unsupported("twisted count beyond quadratic residuals".into())),
            };
        }
        Ok(count)
    }
}

/// Coefficients of `Σ a_i (c + Y)^i`.
pub fn taylor_shift(a: &[ValuedPolynomial], c: &ValuedPolynomial) -> Vec<ValuedPolynomial> {
    if c.is_zero() || a.is_empty() {
        return a.to_vec();
    }
    let n = a.len();
    let mut powers = vec![ValuedPolynomial::constant(&c.field, &c.vars, FieldElem::one())];
    for i in 1..n {
        powers.push(powers[i - 1].mul(c));
    }
    let mut out = vec![ValuedPolynomial::zero(&c.field, &c.vars); n];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let mut binom = Q::one();
        for j in 0..=i {
            // binom = C(i, j)
            let term = ai.mul(&powers[i - j]).scale(&FieldElem::constant(binom.clone()));
            out[j] = out[j].add(&term);
            binom = binom * q((i - j) as i64) / q(j as i64 + 1);
        }
    }
    out
}

const SQUAREFREE_BUDGET: u64 = 100_000;

/// Checks that `P` is squarefree in its main variable, through the resultant of `P` and
/// `∂P/∂Y` evaluated on a grid large enough to certify that it vanishes identically.
pub fn check_squarefree(p: &ValuedPolynomial) -> Result<()> {
    let y = main_variable(p)?;
    let coeffs = p.coefficients_in(y)?;
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::InvalidInput(format!("polynomial does not involve {}", p.vars[y])));
    }
    if d == 1 {
        return Ok(());
    }
    let nt = p.n() - 1;
    let exps: Vec<&Q> = p.terms.values().flat_map(|c| c.0.keys()).collect();
    let l: i64 = lcm_of_denominators(exps.iter().copied()).try_into().unwrap_or(1);
    let mut sizes: Vec<u64> = Vec::with_capacity(nt + 1);
    for i in 0..p.n() {
        if i == y {
            continue;
        }
        let lo = p.terms.keys().map(|e| e[i]).min().unwrap_or(0);
        let hi = p.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        sizes.push(((2 * d - 1) as i64 * (hi - lo) + 1) as u64);
    }
    let zs: Vec<i64> = exps.iter().map(|e| (*e * q(l)).to_integer().try_into().unwrap_or(0)).collect();
    let zspan = zs.iter().max().unwrap_or(&0) - zs.iter().min().unwrap_or(&0);
    sizes.push(((2 * d - 1) as i64 * zspan + 1) as u64);
    let total = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s)).unwrap_or(u64::MAX);
    let deriv: Vec<ValuedPolynomial> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&FieldElem::from_int(i as i64)))
        .collect();
    let mut idx = vec![0u64; sizes.len()];
    for _ in 0..total.min(SQUAREFREE_BUDGET) {
        let pt: Vec<Q> = idx[..nt].iter().map(|&i| q(i as i64 + 1)).collect();
        let z = q(idx[nt] as i64 + 1);
        let a: Vec<Q> = coeffs.iter().map(|c| c.eval_point(&pt, &z, l)).collect();
        let b: Vec<Q> = deriv.iter().map(|c| c.eval_point(&pt, &z, l)).collect();
        if !det(&sylvester(&a, &b)).is_zero() {
            return Ok(());
        }
        for pos in 0..idx.len() {
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
    if total > SQUAREFREE_BUDGET {
        return Err(Error::Unsupported("squarefree certificate grid too large".into()));
    }
    Err(Error::NotSquarefree)
}

/// Sylvester matrix of two polynomials given by coefficients from low to high degree.
fn sylvester(a: &[Q], b: &[Q]) -> Vec<Vec<Q>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Q::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Q::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Summary of one extension for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionInfo {
    pub rho: Option<GroupElement>,
    pub ramification: usize,
    pub residue_degree: usize,
}

/// The extensions of `η_r` to `K(T)[Y]/(P)`.
pub fn extension_branches(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<Vec<ExtensionInfo>> {
    check_squarefree(p)?;
    let (setup, coeffs) = Setup::new(p, r)?;
    Ok(setup
        .branches(&coeffs)?
        .into_iter()
        .map(|b| ExtensionInfo {
            rho: b.rho().cloned(),
            ramification: b.ramification,
            residue_degree: b.residue_degree,
        })
        .collect())
}

/// Number of extensions of `η_r` to `K(T)[Y]/(P)`.
pub fn count_gauss_extensions(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<usize> {
    Ok(extension_branches(p, r)?.len())
}

/// Number of extensions over `K(√δ_1, …)(T)` for units `δ_i` of `K`.
pub fn count_gauss_extensions_twisted(p: &ValuedPolynomial, r: &[GroupElement], twist: &[Q]) -> Result<usize> {
    check_squarefree(p)?;
    let (setup, coeffs) = Setup::new(p, r)?;
    setup.count_twisted(&coeffs, twist)
}

/// Values `(|e|)_{e ∈ E}` along each extension, one row per extension.
pub fn branch_values(
    p: &ValuedPolynomial,
    separators: &[ValuedPolynomial],
    r: &[GroupElement],
) -> Result<Vec<Vec<Option<GroupElement>>>> {
    let (setup, coeffs) = Setup::new(p, r)?;
    let branches = setup.branches(&coeffs)?;
    let seps = separators.iter().map(|e| setup.transform(e)).collect::<Result<Vec<_>>>()?;
    branches
        .iter()
        .map(|b| seps.iter().map(|e| setup.value_on_branch(b, e)).collect())
        .collect()
}

/// Whether the value tuples of `E` differ between any two extensions at every sample.
pub fn verify_separating_set(
    p: &ValuedPolynomial,
    separators: &[ValuedPolynomial],
    samples: &[Vec<GroupElement>],
) -> Result<bool> {
    check_squarefree(p)?;
    for r in samples {
        let rows = branch_values(p, separators, r)?;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if rows[i] == rows[j] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Values of `r` (one variable) where two monomials of a coefficient tie, or where three
/// coefficients become aligned on the Newton polygon.
pub fn tie_candidates(field: &ValuedFieldDesc, coeffs: &[ValuedPolynomial]) -> Vec<GroupElement> {
    let mono: Vec<Vec<(i64, GroupElement)>> = coeffs
        .iter()
        .map(|c| c.terms.iter().map(|(e, a)| (e[0], field.abs(a).unwrap())).collect())
        .collect();
    let mut out = Vec::new();
    // Solves `C * r^E = 1`.
    let mut solve = |c: GroupElement, e: i64| {
        if e != 0 {
            out.push(c.inv().pow(&Q::new(1.into(), e.into())));
        }
    };
    for ms in &mono {
        for (a, (ja, ca)) in ms.iter().enumerate() {
            for (jb, cb) in &ms[a + 1..] {
                solve(ca.div(cb), ja - jb);
            }
        }
    }
    let nz: Vec<usize> = (0..mono.len()).filter(|&i| !mono[i].is_empty()).collect();
    for (x, &i) in nz.iter().enumerate() {
        for (y, &j) in nz.iter().enumerate().skip(x + 1) {
            for &k in &nz[y + 1..] {
                let (ki, kj, kk) = ((k - j) as i64, (k - i) as i64, (j - i) as i64);
                for (ji, ci) in &mono[i] {
                    for (jj, cj) in &mono[j] {
                        for (jk, ck) in &mono[k] {
                            // |a_j|^(k-i) = |a_i|^(k-j) |a_k|^(j-i)
                            let c = cj.pow_int(kj).div(&ci.pow_int(ki)).div(&ck.pow_int(kk));
                            solve(c, jj * kj - ji * ki - jk * kk);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Piecewise-constant number of extensions over an interval of one parameter `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionProfile {
    pub range: (GroupElement, GroupElement),
    /// Points where the count changes.
    pub breakpoints: Vec<GroupElement>,
    /// Counts on the open pieces between consecutive breakpoints (and the range ends).
    pub piece_counts: Vec<usize>,
    pub breakpoint_counts: Vec<usize>,
    pub endpoint_counts: (usize, usize),
    /// All points where the Newton-polygon combinatorics may change, before merging.
    pub fine_breakpoints: Vec<GroupElement>,
}

impl ExtensionProfile {
    pub fn count_at(&self, r: &GroupElement) -> Option<usize> {
        let (s, t) = &self.range;
        if r < s || r > t {
            return None;
        }
        if r == s {
            return Some(self.endpoint_counts.0);
        }
        if r == t {
            return Some(self.endpoint_counts.1);
        }
        if let Some(i) = self.breakpoints.iter().position(|b| b == r) {
            return Some(self.breakpoint_counts[i]);
        }
        let i = self.breakpoints.iter().filter(|b| *b < r).count();
        Some(self.piece_counts[i])
    }

    pub fn to_json(&self) -> Value {
        let (s, t) = &self.range;
        let mut pieces = Vec::new();
        let k = self.breakpoints.len();
        if self.endpoint_counts.0 != self.piece_counts[0] {
            pieces.push(json!({"at": s.pretty(), "count": self.endpoint_counts.0}));
        }
        if k == 0 {
            pieces.push(json!({"interval": [s.pretty(), t.pretty()], "count": self.piece_counts[0]}));
        } else {
            pieces.push(json!({"lt": self.breakpoints[0].pretty(), "count": self.piece_counts[0]}));
            for i in 0..k {
                pieces.push(json!({"at": self.breakpoints[i].pretty(), "count": self.breakpoint_counts[i]}));
                if i + 1 < k {
                    pieces.push(json!({
                        "interval": [self.breakpoints[i].pretty(), self.breakpoints[i + 1].pretty()],
                        "count": self.piece_counts[i + 1],
                    }));
                }
            }
            pieces.push(json!({"gt": self.breakpoints[k - 1].pretty(), "count": self.piece_counts[k]}));
        }
        if self.endpoint_counts.1 != *self.piece_counts.last().unwrap() {
            pieces.push(json!({"at": t.pretty(), "count": self.endpoint_counts.1}));
        }
        json!({ "pieces": pieces })
    }
}

/// An infinitesimal finer than everything in `xs`.
pub(crate) fn fresh_infinitesimal<'a>(xs: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
    GroupElement::infinitesimal(xs.into_iter().map(GroupElement::max_level).max().unwrap_or(0) + 1)
}

/// A point of the open interval `(a, b)` avoiding every special value: the geometric
/// midpoint moved by an infinitesimal.
pub(crate) fn generic_point(a: &GroupElement, b: &GroupElement) -> GroupElement {
    a.mul(b).root(2).mul(&fresh_infinitesimal([a, b]))
}

fn in_open(x: &GroupElement, s: &GroupElement, t: &GroupElement) -> bool {
    x > s && x < t
}

/// Fine breakpoints of `P` over `(s, t)`: tie points of `P` and of every shifted
/// polynomial used by the lifting step on some piece.
pub(crate) fn fine_breakpoints(p: &ValuedPolynomial, s: &GroupElement, t: &GroupElement) -> Result<Vec<GroupElement>> {
    let y = main_variable(p)?;
    let coeffs = p.coefficients_in(y)?;
    let mut cands: Vec<GroupElement> = tie_candidates(&p.field, &coeffs);
    if p.field.is_trivially_valued() {
        cands.push(GroupElement::one());
    }
    cands.retain(|x| in_open(x, s, t));
    cands.sort();
    cands.dedup();
    for _ in 0..6 {
        let mut fresh = Vec::new();
        let mut ends = vec![s.clone()];
        ends.extend(cands.iter().cloned());
        ends.push(t.clone());
        for w in ends.windows(2) {
            let m = generic_point(&w[0], &w[1]);
            let (setup, cs) = Setup::new(p, std::slice::from_ref(&m))?;
            for b in setup.branches(&cs)? {
                if !b.shift.is_zero() {
                    fresh.extend(tie_candidates(&p.field, &b.coeffs).into_iter().filter(|x| in_open(x, &w[0], &w[1])));
                }
            }
        }
        fresh.retain(|x| !cands.contains(x));
        if fresh.is_empty() {
            return Ok(cands);
        }
        cands.extend(fresh);
        cands.sort();
        cands.dedup();
    }
    Err(Error::Unsupported("breakpoint refinement does not stabilize".into()))
}

/// Number of extensions as a function of `r ∈ [s, t]` for `P ∈ K[X, Y]`.
pub fn extension_count_profile(p: &ValuedPolynomial, s: &GroupElement, t: &GroupElement) -> Result<ExtensionProfile> {
    if p.n() != 2 {
        return Err(Error::InvalidInput("profiles need exactly one parameter besides Y".into()));
    }
    if s > t {
        return Err(Error::InvalidInput(format!("empty range [{s}, {t}]")));
    }
    check_squarefree(p)?;
    let count = |r: &GroupElement| -> Result<usize> {
        let (setup, cs) = Setup::new(p, std::slice::from_ref(r))?;
        Ok(setup.branches(&cs)?.len())
    };
    profile_with(p, s, t, count)
}

/// The profile over `K(√δ_1, …)` for units `δ_i` of `K`.
pub fn extension_count_profile_twisted(
    p: &ValuedPolynomial,
    s: &GroupElement,
    t: &GroupElement,
    twist: &[Q],
) -> Result<ExtensionProfile> {
    if p.n() != 2 {
        return Err(Error::InvalidInput("profiles need exactly one parameter besides Y".into()));
    }
    if s > t {
        return Err(Error::InvalidInput(format!("empty range [{s}, {t}]")));
    }
    check_squarefree(p)?;
    let count = |r: &GroupElement| -> Result<usize> {
        let (setup, cs) = Setup::new(p, std::slice::from_ref(r))?;
        setup.count_twisted(&cs, twist)
    };
    profile_with(p, s, t, count)
}

fn profile_with(
    p: &ValuedPolynomial,
    s: &GroupElement,
    t: &GroupElement,
    count: impl Fn(&GroupElement) -> Result<usize>,
) -> Result<ExtensionProfile> {
    let fine = fine_breakpoints(p, s, t)?;
    let mut ends = vec![s.clone()];
    ends.extend(fine.iter().cloned());
    ends.push(t.clone());
    let open: Vec<usize> = ends.windows(2).map(|w| count(&generic_point(&w[0], &w[1]))).collect::<Result<_>>()?;
    let at: Vec<usize> = fine.iter().map(&count).collect::<Result<_>>()?;
    let endpoint_counts = (count(s)?, count(t)?);
    // Merge breakpoints across which nothing changes.
    let mut breakpoints = Vec::new();
    let mut piece_counts = vec![open[0]];
    let mut breakpoint_counts = Vec::new();
    for (i, b) in fine.iter().enumerate() {
        let left = *piece_counts.last().unwrap();
        if left == at[i] && at[i] == open[i + 1] {
            continue;
        }
        breakpoints.push(b.clone());
        breakpoint_counts.push(at[i]);
        piece_counts.push(open[i + 1]);
    }
    Ok(ExtensionProfile {
        range: (s.clone(), t.clone()),
        breakpoints,
        piece_counts,
        breakpoint_counts,
        endpoint_counts,
        fine_breakpoints: fine,
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupElement {
        GroupElement::parse(s).unwrap()
    }

    fn poly(s: &str, field: &str) -> ValuedPolynomial {
        ValuedPolynomial::parse(s, &ValuedFieldDesc::parse(field).unwrap()).unwrap()
    }

    fn count(s: &str, field: &str, r: &[&str]) -> Result<usize> {
        let r: Vec<GroupElement> = r.iter().map(|x| g(x)).collect();
        count_gauss_extensions(&poly(s, field), &r)
    }

    #[test]
    fn counts_over_trivial_base() {
        for r in ["1/4", "1/2", "2", "4", "3/7"] {
            assert_eq!(count("Y^2 - X", "Q-trivial", &[r]).unwrap(), 1, "r = {r}");
            assert_eq!(count("Y^2 - 1 + 0*X", "Q-trivial", &[r]).unwrap(), 2, "r = {r}");
        }
        assert_eq!(count("Y^2 - X", "Q-trivial", &["1"]).unwrap(), 1);
        for (r, n) in [("1/4", 1), ("1/2", 1), ("1", 1), ("2", 2), ("4", 2), ("100", 2)] {
            assert_eq!(count("Y^2 - X*(X-1)", "Q-trivial", &[r]).unwrap(), n, "r = {r}");
        }
        assert_eq!(count("Y^2 - 1", "Q-trivial", &[]).unwrap(), 2);
        // The residual polynomial splits only over κ(S) at r = 1.
        assert_eq!(count("Y^2 - X^2 - 2*X - 1", "Q-trivial", &["1"]).unwrap(), 2);
        assert_eq!(count("Y^3 - X", "Q-trivial", &["2"]).unwrap(), 1);
    }

    #[test]
    fn counts_over_padic_base() {
        assert_eq!(count("Y^2 - 5", "Q-padic:5", &[]).unwrap(), 1);
        assert_eq!(count("Y^2 - 6", "Q-padic:5", &[]).unwrap(), 2);
        assert_eq!(count("Y^2 - 2", "Q-padic:5", &[]).unwrap(), 1);
        assert_eq!(count("Y^2 - X", "Q-padic:5", &["1/5"]).unwrap(), 1);
        assert_eq!(count("Y^2 - X", "Q-padic:5", &["1/25"]).unwrap(), 1);
        assert_eq!(count("Y^2 - 6*X^2", "Q-padic:5", &["1/25"]).unwrap(), 2);
        assert!(matches!(count("Y^2 - 2", "Q-padic:2", &[]), Err(Error::WildOrDeepRamification(_))));
        assert!(matches!(count("Y^2 - X", "Q-padic:5", &["5^(-1/2)"]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn counts_over_series_base() {
        // Exponents are rational, so x has a square root in the base.
        assert_eq!(count("Y^2 - x", "Q-series", &[]).unwrap(), 2);
        assert_eq!(count("Y^2 - 2*x", "Q-series", &[]).unwrap(), 1);
        assert_eq!(count("Y^2 - x^2 - x^3", "Q-series", &[]).unwrap(), 2);
        // |X| = |x|^2 is a relation point; the residual W^2 - S is irreducible.
        assert_eq!(count("Y^2 - X", "Q-series", &["1/4"]).unwrap(), 1);
        assert_eq!(count("Y^2 - X^2", "Q-series", &["1/4"]).unwrap(), 2);
    }

    #[test]
    fn lifting_resolves_repeated_residual_roots() {
        assert_eq!(count("(Y - 1)*(Y - 6)", "Q-padic:5", &[]).unwrap(), 2);
        assert_eq!(count("(Y - X)*(Y - X - 1)", "Q-trivial", &["4"]).unwrap(), 2);
        assert_eq!(count("(Y - 1)*(Y - 1 - 5*X)", "Q-padic:5", &["1"]).unwrap(), 2);
    }

    #[test]
    fn rejects_non_squarefree() {
        assert_eq!(count("(Y - X)^2", "Q-trivial", &["2"]), Err(Error::NotSquarefree));
        assert_eq!(count("Y^3 - Y^2*X", "Q-trivial", &["2"]), Err(Error::NotSquarefree));
        assert!(check_squarefree(&poly("Y^2 - X*(X-1)", "Q-trivial")).is_ok());
        assert!(check_squarefree(&poly("(Y - x)^2", "Q-series")).is_err());
    }

    #[test]
    fn separating_sets() {
        let p = poly("Y^2 - X*(X-1)", "Q-trivial");
        let e = |s: &str| ValuedPolynomial::parse_with_vars(s, &p.field, &p.vars).unwrap();
        assert!(!verify_separating_set(&p, &[e("Y")], &[vec![g("4")]]).unwrap());
        assert!(verify_separating_set(&p, &[e("Y - X")], &[vec![g("4")]]).unwrap());
        let rows = branch_values(&p, &[e("Y - X"), e("Y - X + 1/2")], &[g("4")]).unwrap();
        let mut first: Vec<Option<GroupElement>> = rows.iter().map(|r| r[0].clone()).collect();
        first.sort();
        assert_eq!(first, vec![Some(g("1")), Some(g("4"))]);
        // Y = X - 1/2 - 1/(8X) + ... on one branch.
        assert!(rows.iter().any(|r| r[1] == Some(g("1/4"))));
    }

    #[test]
    fn values_after_padic_lifting() {
        let p = poly("Y^2 - 1", "Q-padic:5");
        let e = ValuedPolynomial::parse_with_vars("Y + 4", &p.field, &p.vars).unwrap();
        let mut vals: Vec<_> = branch_values(&p, &[e], &[]).unwrap().into_iter().map(|r| r[0].clone()).collect();
        vals.sort();
        assert_eq!(vals, vec![Some(g("1/5")), Some(g("1"))]);
    }

    #[test]
    fn twisted_counts() {
        let p = poly("Y^2 - 2", "Q-padic:5");
        assert_eq!(count_gauss_extensions_twisted(&p, &[], &[q(2)]).unwrap(), 2);
        assert_eq!(count_gauss_extensions_twisted(&p, &[], &[q(3)]).unwrap(), 2);
        assert_eq!(count_gauss_extensions_twisted(&p, &[], &[q(4)]).unwrap(), 1);
        let p = poly("Y^2 - X*(X-1)", "Q-trivial");
        assert_eq!(count_gauss_extensions_twisted(&p, &[g("1")], &[q(-1)]).unwrap(), 1);
        assert_eq!(count_gauss_extensions_twisted(&p, &[g("1/2")], &[q(-1)]).unwrap(), 1);
    }

    #[test]
    fn profiles() {
        let p = poly("Y^2 - X*(X-1)", "Q-trivial");
        let prof = extension_count_profile(&p, &g("1/4"), &g("4")).unwrap();
        assert_eq!(prof.breakpoints, vec![g("1")]);
        assert_eq!((prof.piece_counts.clone(), prof.breakpoint_counts.clone()), (vec![1, 2], vec![1]));
        assert_eq!(
            prof.to_json(),
            json!({"pieces": [{"lt": "1", "count": 1}, {"at": "1", "count": 1}, {"gt": "1", "count": 2}]})
        );
        assert_eq!(prof.count_at(&g("1/2")), Some(1));
        assert_eq!(prof.count_at(&g("3")), Some(2));
        let p = poly("Y^2 - 1 + 0*X", "Q-trivial");
        let prof = extension_count_profile(&p, &g("1/4"), &g("4")).unwrap();
        assert!(prof.breakpoints.is_empty());
        assert_eq!(prof.piece_counts, vec![2]);
        let p = poly("Y^2 - X", "Q-trivial");
        let prof = extension_count_profile(&p, &g("1/4"), &g("4")).unwrap();
        assert!(prof.breakpoints.is_empty());
        assert_eq!(prof.to_json(), json!({"pieces": [{"interval": ["1/4", "4"], "count": 1}]}));
    }

    #[test]
    fn taylor_shift_matches_substitution() {
        let p = poly("Y^3 - 2*X*Y + X^2", "Q-trivial");
        let y = main_variable(&p).unwrap();
        let c = ValuedPolynomial::parse_with_vars("X + 3", &p.field, &["X".to_string()]).unwrap();
        let shifted = taylor_shift(&p.coefficients_in(y).unwrap(), &c);
        let direct = poly("(Y + X + 3)^3 - 2*X*(Y + X + 3) + X^2", "Q-trivial");
        assert_eq!(shifted, direct.coefficients_in(y).unwrap());
    }
}
