//! Polytopal charts and their compatibility.

use super::complex::{decompose_set, CellComplex};
use super::plmap::cell_frame;
use super::{image_monomial_set, CPolytope};
use crate::error::{Error, Result};
use crate::linalg::{mat_mul, solve, transpose};
use crate::linarith::AffForm;
use crate::ovalgroup::GroupElement;
use crate::rational::Q;

/// A polytope in the ambient torus together with the monomial functions giving its chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopalChart {
    pub polytope: CPolytope,
    pub chart: Vec<AffForm>,
}

impl PolytopalChart {
    pub fn new(polytope: CPolytope, chart: Vec<AffForm>) -> Result<Self> {
        for f in &chart {
            if f.dim() != polytope.n() {
                return Err(Error::DimensionMismatch { expected: polytope.n(), got: f.dim() });
            }
        }
        Ok(Self { polytope, chart })
    }

    /// Chart given by the coordinates themselves.
    pub fn identity(polytope: CPolytope) -> Self {
        let n = polytope.n();
        let chart = (0..n).map(|i| AffForm::coordinate(n, i)).collect();
        Self { polytope, chart }
    }

    /// Chart `t -> cst * t^M`.
    pub fn monomial(polytope: CPolytope, m: &[Vec<Q>], cst: &[GroupElement]) -> Result<Self> {
        let chart = m.iter().zip(cst).map(|(r, c)| AffForm::new(r.clone(), c.clone())).collect();
        Self::new(polytope, chart)
    }

    fn linear_part(&self) -> Vec<Vec<Q>> {
        self.chart.iter().map(|f| f.coeffs.clone()).collect()
    }

    fn constants(&self) -> Vec<GroupElement> {
        self.chart.iter().map(|f| f.constant.clone()).collect()
    }
}

/// On one convex piece, `b = constant * a^matrix` (rows index the functions of `b`).
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub matrix: Vec<Vec<Q>>,
    pub constant: Vec<GroupElement>,
}

/// Expresses the chart functions of `b` through those of `a` on each cell of the common
/// part, or explains why that is impossible.
pub fn chart_transition(
    a: &PolytopalChart,
    b: &PolytopalChart,
) -> std::result::Result<Vec<Transition>, String> {
    let n = a.polytope.n();
    let common = a.polytope.carrier.intersect(&b.polytope.carrier);
    if common.is_empty() {
        return Ok(vec![]);
    }
    let lambda = &a.polytope.lambda;
    let complex = decompose_set(&common);
    let la = a.linear_part();
    let lb = b.linear_part();
    let mut out = Vec::new();
    for cell in &complex.cells {
        let frame = cell_frame(n, cell);
        let k = frame.len();
        let bt = transpose(&frame, n);
        // Restricted linear parts, m x k.
        let ra = mat_mul(&la, &bt);
        let rb = mat_mul(&lb, &bt);
        let ra_t = transpose(&ra, k);
        let mut matrix = Vec::with_capacity(lb.len());
        for row in &rb {
            let sol = if k == 0 { Some(vec![Q::from_integer(0.into()); la.len()]) } else { solve(&ra_t, row, la.len()) };
            match sol {
                Some(x) => matrix.push(x),
                None => {
                    return Err(format!(
                        "a chart function of the second chart is not a function of the first on the cell through {:?}",
                        cell.sample
                    ))
                }
            }
        }
        let fa: Vec<GroupElement> = a.chart.iter().map(|f| f.eval(&cell.sample)).collect();
        let mut constant = Vec::with_capacity(lb.len());
        for (row, g) in matrix.iter().zip(&b.chart) {
            let mut c = g.eval(&cell.sample);
            for (t, v) in row.iter().zip(&fa) {
                c = c.div(&v.pow(t));
            }
            if !lambda.contains(&c) || !b.polytope.lambda.contains(&c) {
                return Err(format!("transition constant {c} lies outside the parameter group"));
            }
            constant.push(c);
        }
        // Both presentations must describe the same piece.
        let cell_set = cell.as_set(n);
        let img_a = image_monomial_set(&cell_set, &la, &a.constants()).map_err(|e| e.to_string())?;
        let img_b = image_monomial_set(&cell_set, &lb, &b.constants()).map_err(|e| e.to_string())?;
        let moved = image_monomial_set(&img_a, &matrix, &constant).map_err(|e| e.to_string())?;
        if !moved.set_eq(&img_b) {
            return Err("the two presentations of the common piece differ".into());
        }
        out.push(Transition { matrix, constant });
    }
    Ok(out)
}

fn check_pair(a: &PolytopalChart, b: &PolytopalChart) -> std::result::Result<(), String> {
    chart_transition(a, b)?;
    chart_transition(b, a)?;
    Ok(())
}

/// Whether the two charts induce the same piecewise-linear structure on their overlap.
pub fn atlas_compatible(a: &PolytopalChart, b: &PolytopalChart) -> bool {
    check_pair(a, b).is_ok()
}

/// Union of pairwise compatible charts, decomposed into cells.
pub fn union_charts(parts: &[PolytopalChart]) -> Result<CellComplex> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidInput("no charts given".into()));
    };
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if parts[i].polytope.n() != parts[j].polytope.n() {
                return Err(Error::DimensionMismatch {
                    expected: parts[i].polytope.n(),
                    got: parts[j].polytope.n(),
                });
            }
            check_pair(&parts[i], &parts[j])
                .map_err(|reason| Error::IncompatibleCharts { first: i, second: j, reason })?;
        }
    }
    let mut carrier = first.polytope.carrier.clone();
    for p in &parts[1..] {
        carrier = carrier.union(&p.polytope.carrier);
    }
    Ok(decompose_set(&carrier))
}
