use super::*;
use crate::mpolytope::CPolytope;
use crate::ovalgroup::ValueGroupDesc;

fn g(s: &str) -> GroupElement {
    GroupElement::parse(s).unwrap()
}

fn trivial() -> ValuedFieldDesc {
    ValuedFieldDesc::trivial()
}

fn poly(s: &str, field: &str) -> ValuedPolynomial {
    ValuedPolynomial::parse(s, &ValuedFieldDesc::parse(field).unwrap()).unwrap()
}

fn seps(p: &ValuedPolynomial, es: &[&str]) -> Vec<ValuedPolynomial> {
    es.iter().map(|e| ValuedPolynomial::parse_with_vars(e, &p.field, &p.vars).unwrap()).collect()
}

#[test]
fn membership_examples() {
    let r = [g("2"), g("3")];
    let id = MonomialMap::pure(trivial(), vec![vec![1, 0], vec![0, 1]]).unwrap();
    assert!(skeleton_membership_monomial(&id, &r).unwrap());
    let sq = MonomialMap::pure(trivial(), vec![vec![1, 0], vec![2, 0]]).unwrap();
    assert!(!skeleton_membership_monomial(&sq, &r).unwrap());
    let hyp = MonomialMap::pure(trivial(), vec![vec![1, 1], vec![1, -1]]).unwrap();
    assert!(skeleton_membership_monomial(&hyp, &r).unwrap());
    assert!(matches!(skeleton_membership_monomial(&id, &[g("2"), g("4")]), Err(Error::DependentCoordinates(_))));
    let padic = MonomialMap::pure(ValuedFieldDesc::padic(5).unwrap(), vec![vec![1, 0], vec![0, 1]]).unwrap();
    assert!(matches!(skeleton_membership_monomial(&padic, &[g("2"), g("1/5")]), Err(Error::DependentCoordinates(_))));
}

#[test]
fn monomial_preimages() {
    let lam = ValueGroupDesc::rationals();
    let bx = CPolytope::cube(2, &g("2"), &lam).unwrap();
    let id = MonomialMap::pure(trivial(), vec![vec![1, 0], vec![0, 1]]).unwrap();
    let pre = preimage_skeleton_monomial(&id, &bx).unwrap();
    assert!(pre.immersion && pre.polytope == bx);
    let hyp = MonomialMap::pure(trivial(), vec![vec![1, 1], vec![1, -1]]).unwrap();
    let pre = preimage_skeleton_monomial(&hyp, &bx).unwrap();
    assert!(pre.immersion);
    assert_eq!(pre.map.unwrap().eval(&[g("2"), g("1/2")]).unwrap(), vec![g("1"), g("4")]);
    let sing = MonomialMap::pure(trivial(), vec![vec![1, 0], vec![1, 0]]).unwrap();
    let pre = preimage_skeleton_monomial(&sing, &bx).unwrap();
    assert!(pre.polytope.is_empty() && pre.diagnostic.is_some());
}

#[test]
fn composition_acts_by_matrix_product() {
    let f = ValuedFieldDesc::padic(5).unwrap();
    let five = FieldElem::constant(q(5));
    let phi = MonomialMap::new(f.clone(), vec![vec![1, 1], vec![0, 1]], vec![five.clone(), FieldElem::one()]).unwrap();
    let psi = MonomialMap::new(f, vec![vec![2, 0], vec![1, -1]], vec![FieldElem::one(), five]).unwrap();
    let comp = phi.compose(&psi).unwrap();
    let r = [g("2"), g("3")];
    assert_eq!(comp.apply(&r), phi.apply(&psi.apply(&r)));
}

#[test]
fn curve_preimage_of_y2_x_x1() {
    let p = poly("Y^2 - X*(X-1)", "Q-trivial");
    let e = seps(&p, &["Y", "Y - X"]);
    let c = skeleton_preimage_curve(&p, &e, &g("1/4"), &g("4")).unwrap();
    assert_eq!(c.complex.count_cells_of_dim(1), 3);
    assert_eq!(c.complex.count_junctions_of_dim(0), 1);
    assert!(c.complex.is_tree());
    assert!(c.is_piecewise_immersion());
    let half = Q::new(1.into(), 2.into());
    let mut shapes: Vec<(String, String, Vec<(GroupElement, Q)>)> = c
        .edges
        .iter()
        .map(|e| (e.from.pretty(), e.to.pretty(), e.values.iter().map(|f| (f.c.clone(), f.q.clone())).collect()))
        .collect();
    shapes.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    let one = GroupElement::one();
    let mut expected = vec![
        ("1/4".to_string(), "1".to_string(), vec![(one.clone(), half.clone()), (one.clone(), half)]),
        ("1".to_string(), "4".to_string(), vec![(one.clone(), q(1)), (one.clone(), q(0))]),
        ("1".to_string(), "4".to_string(), vec![(one.clone(), q(1)), (one, q(1))]),
    ];
    expected.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    assert_eq!(shapes, expected);
    for (r, fiber, count) in &c.fiber_checks {
        assert_eq!(fiber, count, "r = {r}");
    }
}

#[test]
fn curve_preimage_simple_cases() {
    let p = poly("Y - X", "Q-trivial");
    let c = skeleton_preimage_curve(&p, &seps(&p, &["Y"]), &g("1/4"), &g("4")).unwrap();
    assert_eq!(c.complex.count_cells_of_dim(1), 1);
    let p = poly("Y^2 - 1 + 0*X", "Q-padic:5");
    let c = skeleton_preimage_curve(&p, &seps(&p, &["Y + 4"]), &g("1/4"), &g("4")).unwrap();
    assert_eq!(c.complex.count_cells_of_dim(1), 2);
    assert!(!c.complex.is_connected());
}

#[test]
fn non_separating_sets_are_reported() {
    let p = poly("Y^2 - X*(X-1)", "Q-trivial");
    let r = skeleton_preimage_curve(&p, &seps(&p, &["Y"]), &g("1/4"), &g("4"));
    assert!(matches!(r, Err(Error::NotSeparating(_))));
}

#[test]
fn separator_search_finds_y_minus_x() {
    let p = poly("Y^2 - X*(X-1)", "Q-trivial");
    let found = search_separators(&p, &g("1/4"), &g("4")).unwrap().unwrap();
    assert_eq!(found.len(), 1);
    assert!(verify_at(&p, &found, "3"));
}

fn verify_at(p: &ValuedPolynomial, e: &[ValuedPolynomial], r: &str) -> bool {
    crate::gaussfield::verify_separating_set(p, e, &[vec![g(r)]]).unwrap()
}

#[test]
fn stabilization_examples() {
    let p = poly("Y^2 - X", "Q-trivial");
    let rep = base_change_stabilization_demo(&p, &g("1/4"), &g("4")).unwrap();
    assert!(rep.stable);
    assert_eq!(rep.before.piece_counts, vec![1]);
    assert_eq!(rep.after.piece_counts, vec![1]);
    assert!(rep.notes[0].contains("ramified"));

    let p = poly("Y^2 - X*(X-1)", "Q-trivial");
    let rep = base_change_stabilization_demo(&p, &g("1/4"), &g("4")).unwrap();
    assert!(rep.stable);
    assert_eq!(rep.after.to_json(), rep.before.to_json());
    assert!(rep.notes.iter().any(|n| n.starts_with("r < 1") && n.contains("ramified")));
    assert!(rep.notes.iter().any(|n| n.starts_with("r = 1") && n.contains("transcendental")));

    let p = poly("Y^2 - 2 + 0*X", "Q-trivial");
    let rep = base_change_stabilization_demo(&p, &g("1/4"), &g("4")).unwrap();
    assert_eq!((rep.before.piece_counts.clone(), rep.after.piece_counts.clone()), (vec![1], vec![2]));
    assert!(rep.stable);

    let p = poly("Y^2 - 1 + 0*X", "Q-trivial");
    assert!(base_change_stabilization_demo(&p, &g("1/4"), &g("4")).unwrap().stable);

    let p = poly("Y^2 - X", "Q-padic:2");
    assert!(matches!(base_change_stabilization_demo(&p, &g("1/4"), &g("4")), Err(Error::WildOrDeepRamification(_))));
}
