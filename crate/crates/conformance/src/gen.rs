//! Seeded random inputs.

use rand::Rng;
use tropcore::gaussfield::{FieldElem, ValuedFieldDesc, ValuedPolynomial};
use tropcore::linarith::{AffForm, Atom, DefinableSet, Rel};
use tropcore::rational::{q, Q};
use tropcore::{GroupElement, ValueGroupDesc};

pub fn vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("T{i}")).collect()
}

fn nonzero(rng: &mut impl Rng, m: i64) -> i64 {
    loop {
        let c = rng.gen_range(-m..=m);
        if c != 0 {
            return c;
        }
    }
}

/// The three field kinds with their default absolute values.
pub fn fields() -> Vec<ValuedFieldDesc> {
    vec![
        ValuedFieldDesc::trivial(),
        ValuedFieldDesc::padic(5).unwrap(),
        ValuedFieldDesc::series(Q::new(1.into(), 2.into())).unwrap(),
    ]
}

pub fn coefficient(rng: &mut impl Rng, field: &ValuedFieldDesc) -> FieldElem {
    use tropcore::gaussfield::FieldKind;
    let c = q(nonzero(rng, 9));
    match field.kind {
        FieldKind::Trivial => FieldElem::constant(c),
        FieldKind::Padic { .. } => {
            let k = rng.gen_range(-2..=2);
            FieldElem::constant(c * pow5(k))
        }
        FieldKind::Series { .. } => {
            let e = Q::new(rng.gen_range(-2..=4).into(), 2.into());
            let lead = FieldElem::monomial(c, e.clone());
            if rng.gen_bool(0.5) {
                lead.add(&FieldElem::monomial(q(nonzero(rng, 5)), e + q(1)))
            } else {
                lead
            }
        }
    }
}

fn pow5(k: i64) -> Q {
    if k >= 0 {
        num_traits::pow(q(5), k as usize)
    } else {
        num_traits::pow(Q::new(1.into(), 5.into()), (-k) as usize)
    }
}

pub fn polynomial(rng: &mut impl Rng, field: &ValuedFieldDesc, n: usize, max_terms: usize, max_deg: i64) -> ValuedPolynomial {
    let vs = vars(n);
    let available = (max_deg as usize + 1).pow(n as u32);
    let terms = rng.gen_range(1..=max_terms.min(available));
    let mut p = ValuedPolynomial::zero(field, &vs);
    while p.terms.len() < terms {
        let exp: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
        if p.terms.contains_key(&exp) {
            continue;
        }
        p = p.add(&ValuedPolynomial::monomial(field, &vs, coefficient(rng, field), exp));
    }
    p
}

/// `2^a 3^b` with half-integer exponents.
pub fn radius(rng: &mut impl Rng) -> GroupElement {
    let a = Q::new(rng.gen_range(-4..=4).into(), 2.into());
    let b = Q::new(rng.gen_range(-4..=4).into(), 2.into());
    GroupElement::from_int(2).pow(&a).mul(&GroupElement::from_int(3).pow(&b))
}

fn two_power(k: i64) -> GroupElement {
    GroupElement::from_int(2).pow(&Q::new(k.into(), 2.into()))
}

/// A set in `n` variables with at most `max_atoms` atoms over one or two disjuncts.
pub fn definable_set(rng: &mut impl Rng, n: usize, max_atoms: usize) -> DefinableSet {
    let total = rng.gen_range(1..=max_atoms);
    let k = if total >= 2 && rng.gen_bool(0.4) { 2 } else { 1 };
    let mut disjuncts = vec![Vec::new(); k];
    for i in 0..total {
        let coeffs: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-2..=2))).collect();
        let form = AffForm::new(coeffs, two_power(rng.gen_range(-4..=4)));
        let rel = if rng.gen_bool(0.5) { Rel::Le } else { Rel::Lt };
        disjuncts[i % k].push(Atom::new(form, rel));
    }
    DefinableSet::new(n, disjuncts, ValueGroupDesc::rationals())
}

/// Points on the grid `2^{k/2}`, where most boundaries of [`definable_set`] lie.
pub fn grid_point(rng: &mut impl Rng, n: usize) -> Vec<GroupElement> {
    (0..n).map(|_| two_power(rng.gen_range(-6..=6))).collect()
}
