//! Profiles of `Y^2 - a` before and after adjoining square roots of constants.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaussfield::extensions::generic_point;
use crate::gaussfield::{
    extension_branches, extension_count_profile, extension_count_profile_twisted, ExtensionProfile, FieldKind,
    ValuedPolynomial,
};
use crate::ovalgroup::GroupElement;
use crate::rational::{padic_valuation, q, rational_sqrt, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationReport {
    /// The constant whose square root is adjoined.
    pub delta: Q,
    /// A second constant adjoined on top to test stability.
    pub further: Q,
    pub before: ExtensionProfile,
    pub after: ExtensionProfile,
    pub after_further: ExtensionProfile,
    pub stable: bool,
    pub notes: Vec<String>,
}

impl StabilizationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "delta": self.delta.to_string(),
            "further": self.further.to_string(),
            "before": self.before.to_json(),
            "after": self.after.to_json(),
            "after_further": self.after_further.to_json(),
            "stable": self.stable,
            "notes": self.notes,
        })
    }
}

fn is_rational_square(x: &Q) -> bool {
    !x.is_negative() && rational_sqrt(x).is_some()
}

/// Unit part of a constant; odd valuations would ramify.
fn unit_part(kind: &FieldKind, c: &Q) -> Result<Q> {
    match kind {
        FieldKind::Padic { p, .. } => {
            let v = padic_valuation(c, *p);
            if v % 2 != 0 {
                return Err(Error::Unsupported(format!("adjoining the square root of {c} ramifies")));
            }
            let pk = num_traits::pow(q(*p as i64), (v.unsigned_abs() / 2) as usize);
            Ok(if v >= 0 { c / (&pk * &pk) } else { c * &pk * &pk })
        }
        _ => Ok(c.clone()),
    }
}

/// First small constant giving a quadratic extension different from `K(√δ)` when there
/// is one.
fn further_constant(kind: &FieldKind, delta: &Q) -> Q {
    let cands = [-1i64, 2, 3, 5, 6, 7, 10, 11, 13];
    match kind {
        FieldKind::Padic { p, .. } => {
            let f = crate::gaussfield::resfield::PrimeField::fp(*p);
            let pick = cands.iter().map(|&c| q(c)).find(|c| {
                let r = f.reduce(c);
                !r.is_zero() && f.sqrt(&r).is_none()
            });
            pick.unwrap_or_else(|| q(-1))
        }
        _ => cands
            .iter()
            .map(|&c| q(c))
            .find(|c| !is_rational_square(c) && !is_rational_square(&(c * delta)))
            .expect("some candidate is a new square class"),
    }
}

fn piece_label(prof: &ExtensionProfile, i: usize) -> String {
    let (s, t) = &prof.range;
    let b = &prof.breakpoints;
    let lo = if i == 0 { None } else { Some(&b[i - 1]) };
    let hi = b.get(i);
    match (lo, hi) {
        (None, None) => format!("{} <= r <= {}", s.pretty(), t.pretty()),
        (None, Some(h)) => format!("r < {}", h.pretty()),
        (Some(l), None) => format!("r > {}", l.pretty()),
        (Some(l), Some(h)) => format!("{} < r < {}", l.pretty(), h.pretty()),
    }
}

/// Profiles of `Y^2 - a` over `K`, over `K(√δ)` and over `K(√δ, √δ')`.
///
/// `δ` is `a` itself for constant `a`, otherwise the leading coefficient of `a`.
pub fn base_change_stabilization_demo(p: &ValuedPolynomial, s: &GroupElement, t: &GroupElement) -> Result<StabilizationReport> {
    if p.n() != 2 {
        return Err(Error::InvalidInput("expected Y^2 - a with a in K[X]".into()));
    }
    let y = crate::gaussfield::newton::main_variable(p)?;
    let coeffs = p.coefficients_in(y)?;
    if coeffs.len() != 3 || !coeffs[1].is_zero() || coeffs[2] != ValuedPolynomial::constant(&p.field, &coeffs[2].vars, crate::gaussfield::FieldElem::one()) {
        return Err(Error::InvalidInput("expected Y^2 - a with a in K[X]".into()));
    }
    if p.field.residue_field().p == 2 {
        return Err(Error::WildOrDeepRamification("residue characteristic 2".into()));
    }
    let a = coeffs[0].neg();
    let lead = a.terms.iter().next_back().map(|(_, c)| c.clone()).ok_or(Error::ZeroPolynomial)?;
    let lead = lead
        .as_rational()
        .ok_or_else(|| Error::Unsupported("leading coefficient is not a rational constant".into()))?;
    let delta = unit_part(&p.field.kind, &lead)?;
    let further = further_constant(&p.field.kind, &delta);

    let before = extension_count_profile(p, s, t)?;
    let after = extension_count_profile_twisted(p, s, t, std::slice::from_ref(&delta))?;
    let after_further = extension_count_profile_twisted(p, s, t, &[delta.clone(), further.clone()])?;
    let stable = after.to_json() == after_further.to_json();

    let mut notes = Vec::new();
    let mut ends = vec![s.clone()];
    ends.extend(before.breakpoints.iter().cloned());
    ends.push(t.clone());
    for (i, w) in ends.windows(2).enumerate() {
        let r = generic_point(&w[0], &w[1]);
        notes.push(format!("{}: {}", piece_label(&before, i), describe(p, &r, &before, &after)?));
    }
    for b in &before.breakpoints {
        notes.push(format!("r = {}: {}", b.pretty(), describe(p, b, &before, &after)?));
    }
    if delta.is_one() || is_rational_square(&delta) {
        notes.push(format!("δ = {delta} is a square; the constant extension is trivial"));
    }
    Ok(StabilizationReport { delta, further, before, after, after_further, stable, notes })
}

fn describe(p: &ValuedPolynomial, r: &GroupElement, before: &ExtensionProfile, after: &ExtensionProfile) -> Result<&'static str> {
    let cb = before.count_at(r).unwrap_or(0);
    let ca = after.count_at(r).unwrap_or(0);
    if cb == 2 {
        return Ok("split over the base field");
    }
    if ca == 2 {
        return Ok("split after the constant extension");
    }
    let branches = extension_branches(p, std::slice::from_ref(r))?;
    if branches.iter().any(|b| b.ramification == 2) {
        return Ok("ramified: splitting needs a value-group extension, not a separable constant extension");
    }
    Ok("residually transcendental: the residual quadratic over κ(S) stays irreducible under constant extensions")
}
