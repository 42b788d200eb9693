//! The acceptance criteria, one function each.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use tropcore::gaussfield::{extension_count_profile, gauss_eval, ValuedFieldDesc, ValuedPolynomial};
use tropcore::linarith::{dimension_at, eliminate, is_connected, parse_set, DefinableSet};
use tropcore::mpolytope::{atlas_compatible, image_monomial_set, CPolytope, PolytopalChart};
use tropcore::rational::{q, Q};
use tropcore::skeleton::skeleton_preimage_curve;
use tropcore::tropicalizer::{corner_locus, full_image_check, local_germ};
use tropcore::{GroupElement, ValueGroupDesc};

use crate::gen;
use crate::oracles;
use crate::tolerances::*;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {mark} {}: {}", self.id, self.title, self.detail)
    }
}

fn outcome(id: u8, title: &'static str, failures: Vec<String>, summary: String) -> Outcome {
    let passed = failures.is_empty();
    let detail = if passed {
        summary
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        format!("{} ({} problems; first: {})", summary, failures.len(), shown.join("; "))
    };
    Outcome { id, title, passed, detail }
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_add(stream))
}

fn g(s: &str) -> GroupElement {
    GroupElement::parse(s).expect("literal")
}

fn set(s: &str, n: usize) -> DefinableSet {
    parse_set(s, n).expect("literal")
}

fn timed(start: Instant, limit: f64, failures: &mut Vec<String>) -> f64 {
    let secs = start.elapsed().as_secs_f64();
    if secs > limit {
        failures.push(format!("took {secs:.2} s, limit {limit} s"));
    }
    secs
}

pub fn gauss_laws() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let fields = gen::fields();
    let mut failures = Vec::new();
    for i in 0..GAUSS_PAIRS {
        let field = &fields[i % fields.len()];
        let n = rng.gen_range(1..=GAUSS_MAX_VARS);
        let p = gen::polynomial(&mut rng, field, n, GAUSS_MAX_TERMS, 3);
        let qq = gen::polynomial(&mut rng, field, n, GAUSS_MAX_TERMS, 3);
        let r: Vec<GroupElement> = (0..n).map(|_| gen::radius(&mut rng)).collect();
        let ev = |x: &ValuedPolynomial| gauss_eval(x, &r).expect("arity");
        let (vp, vq) = (ev(&p), ev(&qq));
        let prod = ev(&p.mul(&qq));
        let sum = ev(&p.add(&qq));
        let expected = vp.as_ref().zip(vq.as_ref()).map(|(a, b)| a.mul(b));
        if prod != expected {
            failures.push(format!("|PQ| != |P||Q| for P = {p}, Q = {qq}"));
        }
        if sum > vp.clone().max(vq.clone()) {
            failures.push(format!("|P+Q| > max for P = {p}, Q = {qq}"));
        }
        if vp != oracles::gauss_value(&p, &r) {
            failures.push(format!("|P| disagrees with the definition for P = {p}"));
        }
    }
    let secs = timed(start, GAUSS_SECONDS, &mut failures);
    outcome(1, "Gauss valuation laws", failures, format!("{GAUSS_PAIRS} pairs over 3 field kinds in {secs:.2} s"))
}

pub fn elimination() -> Outcome {
    let mut rng = rng(2);
    let mut failures = Vec::new();
    let mut checks = 0usize;
    for _ in 0..ELIM_SETS {
        let n = rng.gen_range(2..=3);
        let d = gen::definable_set(&mut rng, n, ELIM_MAX_ATOMS);
        let i = rng.gen_range(0..n);
        let e = match eliminate(&d, i) {
            Ok(e) => e,
            Err(err) => {
                failures.push(format!("eliminate failed on {d:?}: {err}"));
                continue;
            }
        };
        for _ in 0..ELIM_POINTS {
            let rest = gen::grid_point(&mut rng, n - 1);
            if e.contains(&rest) != oracles::exists_witness(&d, &rest, i) {
                failures.push(format!("projection of {d:?} along t{} at {rest:?}", i + 1));
            }
            let x = gen::grid_point(&mut rng, n);
            if d.contains(&x) != oracles::member(&d, &x) {
                failures.push(format!("membership of {x:?} in {d:?}"));
            }
            checks += 2;
        }
    }
    outcome(2, "Elimination vs witness search", failures, format!("{ELIM_SETS} sets, {checks} exact checks"))
}

pub fn closure() -> Outcome {
    let mut rng = rng(3);
    let mut failures = Vec::new();
    for _ in 0..CLOSURE_SETS {
        let n = rng.gen_range(1..=3);
        let d = gen::definable_set(&mut rng, n, ELIM_MAX_ATOMS);
        let c = d.closure();
        for _ in 0..CLOSURE_POINTS {
            let x = gen::grid_point(&mut rng, n);
            if c.contains(&x) != oracles::in_infinitesimal_limit(&d, &x) {
                failures.push(format!("closure of {d:?} at {x:?}"));
            }
        }
    }
    let pruned = set("t1 < 1 & 1 < t1", 1).closure();
    if !pruned.is_empty() {
        failures.push("closure of {t < 1 and 1 < t} is not empty".into());
    }
    outcome(3, "Closure as infinitesimal limits", failures, format!("{CLOSURE_SETS} sets x {CLOSURE_POINTS} points"))
}

fn tropical_line() -> ValuedPolynomial {
    ValuedPolynomial::parse("1 + T1 + T2", &ValuedFieldDesc::trivial()).expect("literal")
}

const THREE_RAYS: &str = "t1 = t2 & t1 >= 1 | t1 = 1 & t2 <= 1 | t2 = 1 & t1 <= 1";

pub fn tropical_line_grid() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let t = corner_locus(&tropical_line());
    let half = (GRID_SIDE - 1) / 2;
    let step = |k: i64| GroupElement::from_int(2).pow(&Q::new((k - half).into(), 10.into()));
    let mut disagreements = 0;
    for i in 0..GRID_SIDE {
        for j in 0..GRID_SIDE {
            let x = [step(i), step(j)];
            let expected = oracles::max_attained_twice(&[GroupElement::one(), x[0].clone(), x[1].clone()]);
            if t.carrier.contains(&x) != expected {
                disagreements += 1;
            }
        }
    }
    if disagreements > 0 {
        failures.push(format!("{disagreements} grid disagreements"));
    }
    if !t.carrier.set_eq(&set(THREE_RAYS, 2)) {
        failures.push("locus differs from the three rays".into());
    }
    if t.dimension() != Some(1) {
        failures.push(format!("dimension {:?}", t.dimension()));
    }
    if !is_connected(&t.carrier) || !t.complex.is_connected() {
        failures.push("not connected".into());
    }
    let secs = timed(start, LINE_SECONDS, &mut failures);
    outcome(
        4,
        "Tropical line",
        failures,
        format!("{}x{} grid, dimension 1, connected, {secs:.2} s", GRID_SIDE, GRID_SIDE),
    )
}

fn geometric_mid(a: &[GroupElement], b: &[GroupElement]) -> Vec<GroupElement> {
    a.iter().zip(b).map(|(x, y)| x.mul(y).root(2)).collect()
}

pub fn dimension_bound() -> Outcome {
    let mut rng = rng(5);
    let mut failures = Vec::new();
    let fields = [ValuedFieldDesc::trivial(), ValuedFieldDesc::padic(5).unwrap()];
    let mut points = 0;
    for k in 0..HYPERSURFACES {
        let n = 2 + k % 2;
        let field = &fields[(k / 2) % 2];
        let p = loop {
            let p = gen::polynomial(&mut rng, field, n, if n == 2 { 5 } else { 4 }, 2);
            if p.terms.len() >= 2 {
                break p;
            }
        };
        let t = corner_locus(&p);
        if t.dimension() != Some(n - 1) {
            failures.push(format!("dim {:?} for {p}", t.dimension()));
            continue;
        }
        let mut pts: Vec<Vec<GroupElement>> = t.complex.faces.iter().map(|f| f.sample.clone()).collect();
        let mut i = 0;
        while pts.len() < PURITY_POINTS {
            let cell = &t.complex.cells[i % t.complex.cells.len()];
            let inside: Vec<&Vec<GroupElement>> = pts.iter().filter(|x| cell.contains(x)).collect();
            let other = inside[i % inside.len()].clone();
            pts.push(geometric_mid(&cell.sample, &other));
            pts.push(geometric_mid(&cell.sample, &geometric_mid(&cell.sample, &other)));
            i += 1;
        }
        let values = |x: &[GroupElement]| -> Vec<GroupElement> {
            p.terms
                .iter()
                .map(|(j, c)| {
                    let mut v = oracles::abs_of(&p.field, c).unwrap();
                    for (e, xi) in j.iter().zip(x) {
                        v = v.mul(&xi.pow_int(*e));
                    }
                    v
                })
                .collect()
        };
        for x in pts.iter().take(PURITY_POINTS) {
            points += 1;
            if !oracles::max_attained_twice(&values(x)) {
                failures.push(format!("sample {x:?} is off the locus of {p}"));
            }
            match dimension_at(&t.carrier, x) {
                Ok(d) if d == n - 1 => {}
                other => failures.push(format!("local dimension {other:?} at {x:?} for {p}")),
            }
        }
    }
    outcome(5, "Dimension bound and purity", failures, format!("{HYPERSURFACES} hypersurfaces, {points} points"))
}

pub fn germs() -> Outcome {
    let mut failures = Vec::new();
    let p = tropical_line();
    match local_germ(&p, &[g("1"), g("1")]) {
        Ok(v) if v.cone.set_eq(&set(THREE_RAYS, 2)) => {}
        Ok(v) => failures.push(format!("vertex cone {:?}", v.cone)),
        Err(e) => failures.push(format!("vertex: {e}")),
    }
    match local_germ(&p, &[g("1"), g("1/3")]) {
        Ok(v) if v.cone.set_eq(&set("t1 = 1", 2)) => {}
        Ok(v) => failures.push(format!("edge cone {:?}", v.cone)),
        Err(e) => failures.push(format!("edge: {e}")),
    }
    outcome(6, "Local germs of the tropical line", failures, "vertex cone and edge line exact".into())
}

fn y2_x_x1() -> ValuedPolynomial {
    ValuedPolynomial::parse("Y^2 - X*(X-1)", &ValuedFieldDesc::trivial()).expect("literal")
}

const PROFILE_SAMPLES: [&str; 9] = ["1/4", "1/3", "1/2", "3/4", "1", "3/2", "2", "3", "4"];

pub fn profile() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let p = y2_x_x1();
    match extension_count_profile(&p, &g("1/4"), &g("4")) {
        Err(e) => failures.push(e.to_string()),
        Ok(prof) => {
            if prof.breakpoints != vec![g("1")] {
                failures.push(format!("breakpoints {:?}", prof.breakpoints));
            }
            let expected = json!({"pieces": [
                {"lt": "1", "count": 1},
                {"at": "1", "count": 1},
                {"gt": "1", "count": 2},
            ]});
            if prof.to_json() != expected {
                failures.push(format!("profile {}", prof.to_json()));
            }
            for s in PROFILE_SAMPLES {
                let r = g(s);
                let want = oracles::puiseux_count(&r);
                if prof.count_at(&r) != Some(want) {
                    failures.push(format!("count at {s}: {:?}, oracle {want}", prof.count_at(&r)));
                }
            }
        }
    }
    let secs = timed(start, PROFILE_SECONDS, &mut failures);
    outcome(7, "Extension profile", failures, format!("pieces (1, 1, 2) around 1 in {secs:.2} s"))
}

pub fn curve_skeleton() -> Outcome {
    let mut failures = Vec::new();
    let p = y2_x_x1();
    let seps: Vec<ValuedPolynomial> = ["Y", "Y - X"]
        .iter()
        .map(|e| ValuedPolynomial::parse_with_vars(e, &p.field, &p.vars).expect("literal"))
        .collect();
    match skeleton_preimage_curve(&p, &seps, &g("1/4"), &g("4")) {
        Err(e) => failures.push(e.to_string()),
        Ok(c) => {
            for s in PROFILE_SAMPLES.iter().take(SKELETON_SAMPLES) {
                let r = g(s);
                let fiber = c.projection.fiber_size(std::slice::from_ref(&r));
                let want = oracles::puiseux_count(&r);
                if fiber.as_ref().ok() != Some(&want) || c.profile.count_at(&r) != Some(want) {
                    failures.push(format!("fiber over {s}: {fiber:?}, expected {want}"));
                }
            }
            if !c.is_piecewise_immersion() {
                failures.push("projection is not a piecewise immersion".into());
            }
            let edges = c.complex.count_cells_of_dim(1);
            let vertices = c.complex.count_junctions_of_dim(0);
            if !c.complex.is_tree() || edges != 3 || vertices != 1 {
                failures.push(format!("tree {} with {edges} edges and {vertices} vertices", c.complex.is_tree()));
            }
        }
    }
    outcome(8, "Curve skeleton preimage", failures, format!("{SKELETON_SAMPLES} fibers, tree with 3 edges and 1 vertex"))
}

pub fn atlas() -> Outcome {
    let mut failures = Vec::new();
    let lam = ValueGroupDesc::rationals();
    let m = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
    let mut charts = Vec::new();
    for r in ATLAS_RADII {
        let bx = CPolytope::cube(2, &GroupElement::from_int(r), &lam).expect("box");
        charts.push((format!("P_{r}"), PolytopalChart::identity(bx.clone())));
        charts.push((
            format!("M*P_{r}"),
            PolytopalChart::monomial(bx, &m, &[GroupElement::one(), GroupElement::one()]).expect("chart"),
        ));
    }
    for i in 0..charts.len() {
        for j in i + 1..charts.len() {
            if !atlas_compatible(&charts[i].1, &charts[j].1) {
                failures.push(format!("{} and {}", charts[i].0, charts[j].0));
            }
        }
    }
    outcome(9, "Skeleton atlas", failures, format!("{} charts pairwise compatible", charts.len()))
}

pub fn full_image() -> Outcome {
    let suite: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![1, 1], vec![1, -1]],
        vec![vec![2, 1], vec![1, 1]],
        vec![vec![1, 0], vec![1, 0]],
        vec![vec![2, 4], vec![1, 2]],
        vec![vec![0, 0], vec![0, 0]],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]],
        vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 2, 1]],
        vec![vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]],
    ];
    assert_eq!(suite.len(), IMAGE_MATRICES);
    let mut failures = Vec::new();
    for m in &suite {
        let n = m.len();
        let mq: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let full = oracles::integer_rank(m) == n;
        match full_image_check(&mq) {
            Ok(f) if f == full => {}
            other => failures.push(format!("{m:?}: full image {other:?}, rank oracle says {full}")),
        }
        if !full {
            let ones = vec![GroupElement::one(); n];
            let dim = image_monomial_set(&DefinableSet::universe(n), &mq, &ones).map(|s| s.dimension());
            match dim {
                Ok(Some(d)) if d < n => {}
                other => failures.push(format!("{m:?}: image dimension {other:?}")),
            }
        }
    }
    outcome(10, "Full-image case", failures, format!("{IMAGE_MATRICES} matrices"))
}

pub fn all() -> Vec<fn() -> Outcome> {
    vec![
        gauss_laws,
        elimination,
        closure,
        tropical_line_grid,
        dimension_bound,
        germs,
        profile,
        curve_skeleton,
        atlas,
        full_image,
    ]
}
