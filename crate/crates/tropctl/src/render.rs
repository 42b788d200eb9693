//! SVG pictures of sets in one or two coordinates, drawn in log-log coordinates.

use std::fmt::Write;

use num_traits::ToPrimitive;
use serde_json::Value;
use tropcore::linarith::{Atom, DefinableSet};
use tropcore::{Error, GroupElement, Result};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 30.0;
const EPS: f64 = 1e-9;

fn log(g: &GroupElement) -> f64 {
    g.ln_f64()
}

/// Convex pieces of an artifact: the cells of a complex when present, otherwise the
/// disjuncts of the first set found.
pub fn pieces(artifact: &Value) -> Result<(usize, Vec<Vec<Atom>>)> {
    let cells = artifact
        .get("cells")
        .or_else(|| artifact.get("complex").and_then(|c| c.get("cells")))
        .and_then(Value::as_array);
    if let Some(cells) = cells {
        let mut n = None;
        let mut out = Vec::new();
        for c in cells {
            let d = DefinableSet::from_json(c.get("set").ok_or_else(|| Error::Parse("cell without `set`".into()))?)?;
            n = Some(d.n);
            out.extend(d.disjuncts);
        }
        let n = n.or_else(|| artifact.get("n").and_then(Value::as_u64).map(|n| n as usize)).unwrap_or(2);
        return Ok((n, out));
    }
    for key in ["set", "carrier", "cone", "closure", "projection"] {
        if let Some(v) = artifact.get(key).filter(|v| v.get("or").is_some()) {
            let d = DefinableSet::from_json(v)?;
            return Ok((d.n, d.disjuncts));
        }
    }
    let d = DefinableSet::from_json(artifact)?;
    Ok((d.n, d.disjuncts))
}

/// Half-planes `a . u + c <= 0` in log coordinates, padded to two coordinates.
fn halfplanes(n: usize, atoms: &[Atom]) -> Vec<([f64; 2], f64)> {
    atoms
        .iter()
        .map(|a| {
            let mut v = [0.0; 2];
            for (i, c) in a.form.coeffs.iter().enumerate().take(n) {
                v[i] = c.to_f64().unwrap_or(0.0);
            }
            (v, log(&a.form.constant))
        })
        .collect()
}

/// Vertices of the clipped convex piece in counter-clockwise order.
fn polygon(mut hp: Vec<([f64; 2], f64)>, n: usize, half: f64) -> Vec<[f64; 2]> {
    hp.extend([([1.0, 0.0], -half), ([-1.0, 0.0], -half)]);
    if n == 2 {
        hp.extend([([0.0, 1.0], -half), ([0.0, -1.0], -half)]);
    } else {
        hp.extend([([0.0, 1.0], 0.0), ([0.0, -1.0], 0.0)]);
    }
    let mut pts = Vec::new();
    for i in 0..hp.len() {
        for j in i + 1..hp.len() {
            let ([a, b], c) = hp[i];
            let ([d, e], f) = hp[j];
            let det = a * e - b * d;
            if det.abs() < EPS {
                continue;
            }
            let p = [(b * f - c * e) / det, (c * d - a * f) / det];
            if hp.iter().all(|([x, y], k)| x * p[0] + y * p[1] + k <= 1e-7 * (1.0 + half)) {
                pts.push(p);
            }
        }
    }
    hull(pts)
}

fn hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-7 && (a[1] - b[1]).abs() < 1e-7);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut out: Vec<[f64; 2]> = Vec::new();
    for pass in [pts.clone(), pts.iter().rev().cloned().collect()] {
        let start = out.len();
        for p in pass {
            while out.len() >= start + 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= 1e-12 {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
    }
    if out.len() < 2 {
        // Collinear input collapses to its two extreme points.
        return vec![pts[0], pts[pts.len() - 1]];
    }
    out
}

/// Half-width of the window: room around every constant appearing in the pieces.
fn window(pieces: &[Vec<Atom>]) -> f64 {
    let m = pieces.iter().flatten().map(|a| log(&a.form.constant).abs()).fold(0.0, f64::max);
    (1.5 * m).max(2.0).ceil()
}

pub fn render(artifact: &Value) -> Result<String> {
    let (n, pieces) = pieces(artifact)?;
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("rendering needs one or two coordinates, got {n}")));
    }
    let half = window(&pieces);
    let scale = (SIZE - 2.0 * MARGIN) / (2.0 * half);
    let px = |p: [f64; 2]| (MARGIN + (p[0] + half) * scale, SIZE - MARGIN - (p[1] + half) * scale);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let (x0, y0) = px([-half, 0.0]);
    let (x1, _) = px([half, 0.0]);
    let _ = writeln!(s, r##"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y0:.3}" stroke="#bbbbbb" stroke-width="1"/>"##);
    if n == 2 {
        let (xa, ya) = px([0.0, -half]);
        let (_, yb) = px([0.0, half]);
        let _ = writeln!(s, r##"<line x1="{xa:.3}" y1="{ya:.3}" x2="{xa:.3}" y2="{yb:.3}" stroke="#bbbbbb" stroke-width="1"/>"##);
    }
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="12">log t1</text>"#, SIZE - MARGIN - 30.0, y0 - 6.0);
    if n == 2 {
        let (xa, _) = px([0.0, 0.0]);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="12">log t2</text>"#, xa + 6.0, MARGIN - 10.0);
    }
    for atoms in &pieces {
        let poly = polygon(halfplanes(n, atoms), n, half);
        match poly.len() {
            0 => {}
            1 => {
                let (x, y) = px(poly[0]);
                let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#1f4e9c"/>"##);
            }
            2 => {
                let ((xa, ya), (xb, yb)) = (px(poly[0]), px(poly[1]));
                let _ = writeln!(
                    s,
                    r##"<line x1="{xa:.3}" y1="{ya:.3}" x2="{xb:.3}" y2="{yb:.3}" stroke="#1f4e9c" stroke-width="2"/>"##
                );
            }
            _ => {
                let pts: Vec<String> = poly.iter().map(|p| px(*p)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
                let _ = writeln!(
                    s,
                    r##"<polygon points="{}" fill="#9cb8e6" fill-opacity="0.5" stroke="#1f4e9c" stroke-width="1"/>"##,
                    pts.join(" ")
                );
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropcore::linarith::parse_set;

    fn shapes(svg: &str) -> (usize, usize, usize) {
        (svg.matches("<circle").count(), svg.matches("stroke-width=\"2\"").count(), svg.matches("<polygon").count())
    }

    #[test]
    fn three_rays() {
        let d = parse_set("t1 = t2 & t1 >= 1 | t1 = 1 & t2 <= 1 | t2 = 1 & t1 <= 1", 2).unwrap();
        let svg = render(&d.to_json()).unwrap();
        assert_eq!(shapes(&svg), (0, 3, 0));
        assert_eq!(svg, render(&d.to_json()).unwrap());
    }

    #[test]
    fn regions_and_points() {
        let d = parse_set("t1 <= 2 & t2 <= t1 & t2 >= 1/2 | t1 = 4 & t2 = 4", 2).unwrap();
        assert_eq!(shapes(&render(&d.to_json()).unwrap()), (1, 0, 1));
        let e = parse_set("t1 >= 1/2 & t1 <= 2", 1).unwrap();
        assert_eq!(shapes(&render(&e.to_json()).unwrap()), (0, 1, 0));
        let f = parse_set("t1 <= 1 & t2 <= 1 & t3 <= 1", 3).unwrap();
        assert!(render(&f.to_json()).is_err());
    }

    #[test]
    fn hull_orders_vertices() {
        let h = hull(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.5]]);
        assert_eq!(h, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
    }
}
