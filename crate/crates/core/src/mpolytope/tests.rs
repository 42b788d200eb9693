use super::*;
use crate::linarith::{dimension, parse_point};
use crate::ovalgroup::GroupElement as G;
use crate::rational::{q, qf};
use proptest::prelude::*;

fn set(s: &str, n: usize) -> DefinableSet {
    DefinableSet::parse(s, n).unwrap()
}

fn pt(s: &str) -> Vec<G> {
    parse_point(s).unwrap()
}

fn qq() -> ValueGroupDesc {
    ValueGroupDesc::rationals()
}

fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

fn line() -> DefinableSet {
    set("t1 = t2 & 1 <= t1 | t1 = 1 & t2 <= 1 | t2 = 1 & t1 <= 1", 2)
}

fn bounded_line() -> CPolytope {
    let b = set("1/2 <= t1 & t1 <= 4 & 1/2 <= t2 & t2 <= 4", 2);
    make_polytope(&line().intersect(&b), &qq()).unwrap()
}

#[test]
fn make_polytope_examples() {
    let p = make_polytope(&set("1/2 <= t1 & t1 <= 2", 1), &qq()).unwrap();
    assert_eq!(p.bounds, Some(vec![(G::ratio(1, 2), G::from_int(2))]));
    assert_eq!(
        make_polytope(&set("1 <= t1", 1), &qq()),
        Err(Error::Unbounded { coordinate: 0, direction: Direction::Up })
    );
    let two = ValueGroupDesc::generated_by(&[q(2)]).unwrap();
    assert!(matches!(
        make_polytope(&set("t1 <= 3^(1/2)", 1), &two),
        Err(Error::ConstantOutsideParameterGroup(_))
    ));
    let p = make_polytope(&set("1 < t1 & t1 < 2", 1), &qq()).unwrap();
    assert!(p.contains(&pt("1")) && p.carrier.is_closed_syntactically());
    assert!(make_polytope(&set("2 < t1 & t1 < 1", 1), &qq()).unwrap().is_empty());
}

#[test]
fn decompose_examples() {
    let p = make_polytope(&set("1/2 <= t1 & t1 <= 2 & 1/2 <= t2 & t2 <= t1", 2), &qq()).unwrap();
    let c = decompose(&p);
    assert_eq!(c.cells.len(), 1);
    assert_eq!(c.cells[0].dim, 2);

    let p = make_polytope(&set("1 <= t1 & t1 <= 3 | 2 <= t1 & t1 <= 4", 1), &qq()).unwrap();
    let c = decompose(&p);
    assert!(c.cells.len() <= 3);
    assert!(c.carrier().set_eq(&p.carrier));
    assert!(c.faces_compatible());

    let c = decompose(&bounded_line());
    assert_eq!(c.count_cells_of_dim(1), 3);
    assert_eq!(c.cells.len(), 3);
    assert_eq!(c.junctions.len(), 1);
    assert_eq!(c.count_junctions_of_dim(0), 1);
    assert!(c.junctions[0].contains(&pt("1,1")));
    assert!(c.is_connected() && c.is_tree() && c.faces_compatible());
}

#[test]
fn image_examples() {
    let sq = CPolytope::cube(2, &G::from_int(2), &qq()).unwrap();
    let id = image_monomial(&sq, &mat(&[&[1, 0], &[0, 1]]), &[G::one(), G::one()]).unwrap();
    assert!(id.carrier.set_eq(&sq.carrier));
    let pr = image_monomial(&sq, &mat(&[&[1, 0]]), &[G::one()]).unwrap();
    assert!(pr.carrier.set_eq(&set("1/2 <= t1 & t1 <= 2", 1)));
    let p = make_polytope(&set("t1*t2 = 2 & 1 <= t1 & t1 <= 2", 2), &qq()).unwrap();
    let img = image_monomial(&p, &mat(&[&[1, 2]]), &[G::one()]).unwrap();
    assert!(img.carrier.set_eq(&set("2 <= t1 & t1 <= 4", 1)));
    assert_eq!(img.bounds, Some(vec![(G::from_int(2), G::from_int(4))]));
}

#[test]
fn star_examples() {
    let sq = CPolytope::cube(2, &G::from_int(2), &qq()).unwrap();
    let s = star(&sq.carrier, &pt("1,1")).unwrap();
    assert!(s.set_eq(&DefinableSet::universe(2)));
    let seg = make_polytope(&set("1 <= t1 & t1 <= 2", 1), &qq()).unwrap();
    let s = star(&seg.carrier, &pt("2")).unwrap();
    assert!(s.set_eq(&set("t1 <= 1", 1)));
    // Vertex of the tropical line: the three rays (1,1), (-1,0), (0,-1).
    let s = star(&line(), &pt("1,1")).unwrap();
    let rays = set("t1 = t2 & 1 <= t1 | t2 = 1 & t1 <= 1 | t1 = 1 & t2 <= 1", 2);
    assert!(s.set_eq(&rays));
    assert!(matches!(star(&line(), &pt("2,1")), Err(Error::NotInSet)));
    // Interior of the diagonal ray.
    let s = star(&line(), &pt("3,3")).unwrap();
    assert!(s.set_eq(&set("t1 = t2", 2)));
}

#[test]
fn star_agrees_with_probe_on_directions() {
    let s = star(&line(), &pt("1,1")).unwrap();
    for a in -6i64..=6 {
        for b in -6i64..=6 {
            let v = [q(a), q(b)];
            let d = [G::from_int(2).pow(&v[0]), G::from_int(2).pow(&v[1])];
            assert_eq!(s.contains(&d), star_probe(&line(), &pt("1,1"), &v), "direction ({a},{b})");
        }
    }
}

#[test]
fn immersion_examples() {
    let c = decompose(&bounded_line());
    let id = PLMap::monomial(c.clone(), &mat(&[&[1, 0], &[0, 1]]), &[G::one(), G::one()]).unwrap();
    assert!(is_piecewise_immersion(&id) && id.is_consistent());
    let proj = PLMap::monomial(c.clone(), &mat(&[&[1, 0]]), &[G::one()]).unwrap();
    assert!(!is_piecewise_immersion(&proj));
    let seg = decompose(&make_polytope(&set("1 <= t1 & t1 <= 2", 1), &qq()).unwrap());
    let constant = PLMap::monomial(seg, &mat(&[&[0]]), &[G::from_int(3)]).unwrap();
    assert!(!is_piecewise_immersion(&constant));
    // Inconsistent formulas across the vertex.
    let mut pieces = vec![vec![AffForm::coordinate(2, 0)]; 3];
    pieces[0] = vec![AffForm::constant(2, G::from_int(5))];
    let bad = PLMap::new(c, pieces).unwrap();
    assert!(!bad.is_consistent());
}

#[test]
fn atlas_examples() {
    let p = make_polytope(&set("1 <= t1 & t1 <= 4", 1), &qq()).unwrap();
    let qp = make_polytope(&set("2 <= t1 & t1 <= 8", 1), &qq()).unwrap();
    let a = PolytopalChart::identity(p.clone());
    let b = PolytopalChart::monomial(qp, &mat(&[&[2]]), &[G::one()]).unwrap();
    assert!(atlas_compatible(&a, &a));
    assert!(atlas_compatible(&a, &b));
    let far = make_polytope(&set("16 <= t1 & t1 <= 32", 1), &qq()).unwrap();
    assert!(atlas_compatible(&a, &PolytopalChart::identity(far)));
    // A chart constant outside the parameter group.
    let two = ValueGroupDesc::generated_by(&[q(2)]).unwrap();
    let p2 = make_polytope(&set("1 <= t1 & t1 <= 4", 1), &two).unwrap();
    let q2 = make_polytope(&set("2 <= t1 & t1 <= 8", 1), &two).unwrap();
    let a2 = PolytopalChart::identity(p2);
    let b2 = PolytopalChart::monomial(q2, &mat(&[&[1]]), &[G::parse("3^(1/2)").unwrap()]).unwrap();
    assert!(!atlas_compatible(&a2, &b2));
    assert!(matches!(union_charts(&[a2, b2]), Err(Error::IncompatibleCharts { first: 0, second: 1, .. })));
    // A chart that forgets a direction.
    let sq = CPolytope::cube(2, &G::from_int(2), &qq()).unwrap();
    let flat = PolytopalChart::monomial(sq.clone(), &mat(&[&[1, 0]]), &[G::one()]).unwrap();
    assert!(!atlas_compatible(&PolytopalChart::identity(sq.clone()), &flat));
    let u = union_charts(&[a.clone(), a]).unwrap();
    assert!(u.carrier().set_eq(&p.carrier));
}

fn arb_square_matrix() -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2)
        .prop_map(|m| m.into_iter().map(|r| r.into_iter().map(q).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn image_composition(m1 in arb_square_matrix(), m2 in arb_square_matrix()) {
        let p = make_polytope(&set("1/2 <= t1 & t1 <= 2 & 1 <= t2 & t2 <= 3 & t1 <= t2", 2), &qq()).unwrap();
        let ones = [G::one(), G::one()];
        let a = image_monomial(&image_monomial(&p, &m1, &ones).unwrap(), &m2, &ones).unwrap();
        let prod = crate::linalg::mat_mul(&m2, &m1);
        let b = image_monomial(&p, &prod, &ones).unwrap();
        prop_assert!(a.carrier.set_eq(&b.carrier));
        prop_assert!(dimension(&b.carrier) <= dimension(&p.carrier));
    }

    #[test]
    fn cells_cover_the_polytope(a in -3i64..=3, b in -3i64..=3) {
        let p = bounded_line();
        let c = decompose(&p);
        let x = vec![G::from_int(2).pow(&qf(a, 2)), G::from_int(2).pow(&qf(b, 2))];
        prop_assert_eq!(p.contains(&x), c.cell_containing(&x).is_some());
    }
}
