use proptest::prelude::*;
use tropcore::gaussfield::newton::same_slope_data;
use tropcore::gaussfield::{
    extension_branches, gauss_eval, gauss_residue, newton_polygon, residues_alg_independent, FieldElem, ValuedFieldDesc,
    ValuedPolynomial,
};
use tropcore::linarith::dimension;
use tropcore::mpolytope::{atlas_compatible, image_monomial, make_polytope, star, CPolytope, PolytopalChart};
use tropcore::rational::{q, Q};
use tropcore::skeleton::{preimage_skeleton_monomial, MonomialMap};
use tropcore::tropicalizer::corner_locus_set;
use tropcore::{GroupElement, ValueGroupDesc};

fn vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("T{i}")).collect()
}

fn field(k: usize) -> ValuedFieldDesc {
    match k {
        0 => ValuedFieldDesc::trivial(),
        _ => ValuedFieldDesc::padic(5).unwrap(),
    }
}

fn radius(a: i64, b: i64) -> GroupElement {
    let h = |k: i64| Q::new(k.into(), 2.into());
    GroupElement::from_int(2).pow(&h(a)).mul(&GroupElement::from_int(3).pow(&h(b)))
}

/// Polynomial from `(exponents, numerator, power of 5)` triples.
fn build(f: &ValuedFieldDesc, n: usize, terms: &[(Vec<i64>, i64, i64)]) -> ValuedPolynomial {
    let vs = vars(n);
    let mut p = ValuedPolynomial::zero(f, &vs);
    for (e, c, k) in terms {
        let scale = if *k >= 0 { q(5i64.pow(*k as u32)) } else { Q::new(1.into(), 5i64.pow((-k) as u32).into()) };
        p = p.add(&ValuedPolynomial::monomial(f, &vs, FieldElem::constant(q(*c) * scale), e.clone()));
    }
    p
}

fn arb_terms(n: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64, i64)>> {
    let coeff = (-6i64..=6).prop_filter("nonzero", |c| *c != 0);
    prop::collection::vec((prop::collection::vec(0i64..=3, n), coeff, -1i64..=1), 1..=5)
}

fn arb_poly(n: usize) -> impl Strategy<Value = ValuedPolynomial> {
    (0usize..2, arb_terms(n)).prop_map(move |(k, t)| build(&field(k), n, &t)).prop_filter("nonzero", |p| !p.is_zero())
}

fn arb_radius(n: usize) -> impl Strategy<Value = Vec<GroupElement>> {
    prop::collection::vec((-4i64..=4, -4i64..=4).prop_map(|(a, b)| radius(a, b)), n)
}

fn same_field(a: &ValuedPolynomial, b: &ValuedPolynomial) -> ValuedPolynomial {
    ValuedPolynomial::parse_with_vars(&b.to_string(), &a.field, &a.vars).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_valuation_is_multiplicative(p in arb_poly(2), q0 in arb_poly(2), r in arb_radius(2)) {
        let q1 = same_field(&p, &q0);
        let vp = gauss_eval(&p, &r).unwrap().unwrap();
        let vq = gauss_eval(&q1, &r).unwrap().unwrap();
        prop_assert_eq!(gauss_eval(&p.mul(&q1), &r).unwrap(), Some(vp.mul(&vq)));
        prop_assert!(gauss_eval(&p.add(&q1), &r).unwrap() <= Some(vp.max(vq)));
    }

    #[test]
    fn residue_is_multiplicative(p in arb_poly(2), q0 in arb_poly(2), r in arb_radius(2)) {
        let q1 = same_field(&p, &q0);
        let lhs = gauss_residue(&p.mul(&q1), &r).unwrap();
        let rhs = gauss_residue(&p, &r).unwrap().mul(&gauss_residue(&q1, &r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_residues_independent_iff_full_rank(m in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2), c in prop::collection::vec(1i64..=4, 2)) {
        let f = ValuedFieldDesc::padic(5).unwrap();
        let r = [radius(2, 0), radius(0, 2)];
        let residues: Vec<_> = m
            .iter()
            .zip(&c)
            .map(|(row, c)| gauss_residue(&build(&f, 2, &[(row.clone(), *c, 0)]), &r).unwrap().representative)
            .collect();
        let full = m[0][0] * m[1][1] != m[0][1] * m[1][0];
        prop_assert_eq!(residues_alg_independent(&residues).unwrap(), full);
    }

    #[test]
    fn newton_polygon_ignores_unit_rescaling(p in arb_poly(2), u in prop::sample::select(vec![1i64, -1, 2, 3, -4, 7]), r in arb_radius(1)) {
        prop_assume!(p.terms.keys().any(|e| e[1] > 0));
        let unit = FieldElem::constant(q(u));
        let scaled = p.rescale(&[FieldElem::one(), unit]).unwrap();
        let a = newton_polygon(&p, &r).unwrap();
        let b = newton_polygon(&scaled, &r).unwrap();
        prop_assert!(same_slope_data(&a, &b));
    }

    #[test]
    fn fundamental_equality_in_tame_cases(a in -3i64..=3, b in -3i64..=3, i in 0i64..=2, j in 0i64..=3, r in arb_radius(1)) {
        let f = ValuedFieldDesc::trivial();
        let p = ValuedPolynomial::parse(&format!("Y^3 + ({a})*X^{i}*Y + X^{j} + ({b})"), &f).unwrap();
        if let Ok(exts) = extension_branches(&p, &r) {
            let total: usize = exts.iter().map(|e| e.ramification * e.residue_degree).sum();
            prop_assert_eq!(total, 3);
        }
    }

    #[test]
    fn monomial_images_do_not_raise_dimension(lo in -3i64..=0, hi in 0i64..=3, m in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2)) {
        let lam = ValueGroupDesc::rationals();
        let bx = CPolytope::closed_box(&[radius(lo, 0), radius(0, 0)], &[radius(hi, 0), radius(0, hi)], &lam).unwrap();
        let mq: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
        let img = image_monomial(&bx, &mq, &[GroupElement::one(), GroupElement::one()]).unwrap();
        prop_assert!(img.dimension() <= bx.dimension());
    }

    #[test]
    fn stars_are_closed_cones(p in arb_poly(2), k in 1i64..=3) {
        let locus = corner_locus_set(&p);
        prop_assume!(!locus.is_empty());
        let xi = tropcore::linarith::sample_point(&locus).unwrap();
        let cone = star(&locus, &xi).unwrap();
        prop_assert!(cone.closure().set_eq(&cone));
        for v in [[radius(2, 0), radius(0, -2)], [radius(-1, 1), radius(3, 0)], [xi[0].clone(), xi[1].clone()]] {
            if cone.contains(&v) {
                let scaled: Vec<GroupElement> = v.iter().map(|x| x.pow(&Q::new(k.into(), 2.into()))).collect();
                prop_assert!(cone.contains(&scaled));
            }
        }
    }

    #[test]
    fn skeleton_preimages_compose(m1 in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2), m2 in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2), a in -2i64..=2, b in -2i64..=2) {
        let det = |m: &Vec<Vec<i64>>| m[0][0] * m[1][1] - m[0][1] * m[1][0];
        prop_assume!(det(&m1) != 0 && det(&m2) != 0);
        let f = ValuedFieldDesc::trivial();
        let phi = MonomialMap::pure(f.clone(), m1).unwrap();
        let psi = MonomialMap::pure(f, m2).unwrap();
        let lam = ValueGroupDesc::rationals();
        let small = CPolytope::cube(2, &GroupElement::from_int(2), &lam).unwrap();
        let large = CPolytope::cube(2, &GroupElement::from_int(256), &lam).unwrap();
        let comp = preimage_skeleton_monomial(&phi.compose(&psi).unwrap(), &small).unwrap();
        let inner = preimage_skeleton_monomial(&psi, &small).unwrap();
        let outer = preimage_skeleton_monomial(&phi, &large).unwrap();
        prop_assert!(comp.immersion && inner.immersion && outer.immersion);
        let x = [radius(a, 0), radius(b, 0)];
        let via = outer.map.as_ref().unwrap().eval(&inner.map.as_ref().unwrap().eval(&x).unwrap()).unwrap();
        prop_assert_eq!(comp.map.as_ref().unwrap().eval(&x).unwrap(), via);
    }
}

proptest! {
    // Set equality of two corner loci is the expensive part, so fewer cases.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn corner_locus_ignores_monomial_units(p in arb_poly(2), e in prop::collection::vec(0i64..=2, 2), c in 1i64..=10) {
        let unit = ValuedPolynomial::monomial(&p.field, &p.vars, FieldElem::constant(q(c)), e);
        let a = corner_locus_set(&p);
        let b = corner_locus_set(&p.mul(&unit));
        prop_assert!(a.set_eq(&b));
        prop_assert!(a.closure().set_eq(&a));
    }
}

#[test]
fn box_ladder_charts_are_compatible() {
    let lam = ValueGroupDesc::rationals();
    for n in 1..=3 {
        let charts: Vec<PolytopalChart> = [2, 3, 4, 8, 16]
            .iter()
            .map(|&r| PolytopalChart::identity(CPolytope::cube(n, &GroupElement::from_int(r), &lam).unwrap()))
            .collect();
        for (i, a) in charts.iter().enumerate() {
            for b in &charts[i + 1..] {
                assert!(atlas_compatible(a, b), "n = {n}");
            }
        }
    }
}

#[test]
fn unbounded_sets_are_not_polytopes() {
    let d = tropcore::linarith::parse_set("t1 <= 1", 1).unwrap();
    let err = make_polytope(&d, &ValueGroupDesc::rationals()).unwrap_err();
    assert!(matches!(err, tropcore::Error::Unbounded { .. }));
    assert_eq!(dimension(&d), Some(1));
}

#[test]
fn curve_fibers_match_counts_and_degree() {
    use tropcore::gaussfield::count_gauss_extensions;
    use tropcore::skeleton::{search_separators, skeleton_preimage_curve};
    let f = ValuedFieldDesc::trivial();
    let (s, t) = (GroupElement::ratio(1, 4), GroupElement::from_int(4));
    for text in ["Y^2 - X*(X-1)", "Y^2 - X", "Y - X + 1/2"] {
        let p = ValuedPolynomial::parse(text, &f).unwrap();
        let seps = search_separators(&p, &s, &t).unwrap().expect(text);
        let c = skeleton_preimage_curve(&p, &seps, &s, &t).unwrap();
        assert!(c.is_piecewise_immersion(), "{text}");
        for r in ["1/3", "1/2", "2", "3"] {
            let r = GroupElement::parse(r).unwrap();
            let fiber = c.projection.fiber_size(std::slice::from_ref(&r)).unwrap();
            assert_eq!(fiber, count_gauss_extensions(&p, std::slice::from_ref(&r)).unwrap(), "{text} at {r}");
            assert!(fiber <= 2);
        }
    }
}
