//! Newton polygons of polynomials in one variable over a Gauss-valued function field.

use serde_json::{json, Value};

use super::poly::ValuedPolynomial;
use super::residue::gauss_eval;
use crate::error::{Error, Result};
use crate::ovalgroup::GroupElement;
use crate::rational::Q;

/// A segment of the polygon. `slope` is the common absolute value of the roots it
/// accounts for.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSegment {
    pub start: usize,
    pub end: usize,
    pub slope: GroupElement,
}

impl NewtonSegment {
    pub fn length(&self) -> usize {
        self.end - self.start
    }
}

/// Lower hull of `(i, -log|a_i|)`, segments from left to right (slopes increasing).
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, GroupElement)>,
    pub segments: Vec<NewtonSegment>,
    /// Index of the lowest nonzero coefficient.
    pub ord: usize,
    pub deg: usize,
}

impl NewtonPolygon {
    /// From the absolute values of the coefficients (`None` for zero ones).
    pub fn from_values(vals: &[Option<GroupElement>]) -> Result<Self> {
        let pts: Vec<(usize, GroupElement)> =
            vals.iter().enumerate().filter_map(|(i, v)| v.clone().map(|v| (i, v))).collect();
        if pts.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let ord = pts[0].0;
        let deg = pts.last().unwrap().0;
        let mut hull: Vec<(usize, GroupElement)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let (i, ai) = &hull[hull.len() - 2];
                let (j, aj) = &hull[hull.len() - 1];
                let (k, ak) = (&p.0, &p.1);
                // j is dropped when it lies on or below the chord from i to k in log scale.
                let lhs = aj.pow_int((k - i) as i64);
                let rhs = ai.pow_int((k - j) as i64).mul(&ak.pow_int((j - i) as i64));
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let (i, ai) = &w[0];
                let (k, ak) = &w[1];
                let slope = ai.div(ak).pow(&Q::new(1.into(), ((k - i) as i64).into()));
                NewtonSegment { start: *i, end: *k, slope }
            })
            .collect();
        Ok(Self { vertices: hull, segments, ord, deg })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ord": self.ord,
            "deg": self.deg,
            "segments": self.segments.iter().map(|s| json!({
                "start": s.start,
                "end": s.end,
                "length": s.length(),
                "slope": s.slope.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Index of the main variable: `Y` if present, otherwise the last one.
pub fn main_variable(p: &ValuedPolynomial) -> Result<usize> {
    if p.n() == 0 {
        return Err(Error::InvalidInput("polynomial has no variables".into()));
    }
    Ok(p.var_index("Y").unwrap_or(p.n() - 1))
}

/// Newton polygon of `P` in its main variable at the Gauss point `η_r` of the others.
pub fn newton_polygon(p: &ValuedPolynomial, r: &[GroupElement]) -> Result<NewtonPolygon> {
    let y = main_variable(p)?;
    let coeffs = p.coefficients_in(y)?;
    let vals = coeffs.iter().map(|c| gauss_eval(c, r)).collect::<Result<Vec<_>>>()?;
    NewtonPolygon::from_values(&vals)
}

/// Whether the slope data `(length, slope)` of two polygons agree.
pub fn same_slope_data(a: &NewtonPolygon, b: &NewtonPolygon) -> bool {
    a.segments.len() == b.segments.len()
        && a.segments.iter().zip(&b.segments).all(|(s, t)| s.length() == t.length() && s.slope == t.slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussfield::field::ValuedFieldDesc;

    fn np(s: &str, r: &[&str]) -> NewtonPolygon {
        let p = ValuedPolynomial::parse(s, &ValuedFieldDesc::trivial()).unwrap();
        let r: Vec<GroupElement> = r.iter().map(|x| GroupElement::parse(x).unwrap()).collect();
        newton_polygon(&p, &r).unwrap()
    }

    #[test]
    fn examples() {
        let a = np("Y^2 - X", &["4"]);
        assert_eq!(a.segments.len(), 1);
        assert_eq!(a.segments[0].slope, GroupElement::from_int(2));
        assert_eq!(a.segments[0].length(), 2);
        let b = np("Y - 1", &[]);
        assert_eq!((b.segments[0].slope.clone(), b.segments[0].length()), (GroupElement::one(), 1));
        let c = np("Y^2 - 1", &[]);
        assert_eq!((c.segments[0].slope.clone(), c.segments[0].length()), (GroupElement::one(), 2));
        // Roots of absolute values 1/2 and 1: (Y - 1)(Y - X) at |X| = 1/2.
        let d = np("(Y - 1)*(Y - X)", &["1/2"]);
        assert_eq!(d.segments.len(), 2);
        assert_eq!(d.segments[0].slope, GroupElement::ratio(1, 2));
        assert_eq!(d.segments[1].slope, GroupElement::one());
        let e = np("Y^3 + Y^2", &[]);
        assert_eq!((e.ord, e.deg), (2, 3));
    }
}
