//! Static SVG of a 2-D instance: the set, the fan of lines missing it, and the
//! returned hyperplane.

use std::fmt::Write;

use hb_core::{brute_force_2d_normals, ConvexSet, SeparationResult, Vector};

use crate::exit::Failure;

const SIZE: f64 = 480.0;
/// Angular grid of the admissible fan (0.5° steps).
const FAN_GRID: usize = 360;
/// Cells per side when shading an oracle set.
const ORACLE_GRID: usize = 96;

struct View {
    half: f64,
}

impl View {
    fn px(&self, x: f64) -> f64 {
        (x + self.half) / (2.0 * self.half) * SIZE
    }

    fn py(&self, y: f64) -> f64 {
        (self.half - y) / (2.0 * self.half) * SIZE
    }

    fn line(&self, out: &mut String, d: [f64; 2], style: &str) {
        let r = 2.0 * self.half;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}/>"#,
            self.px(-r * d[0]),
            self.py(-r * d[1]),
            self.px(r * d[0]),
            self.py(r * d[1]),
        );
    }
}

fn extent(set: &ConvexSet, anchor: Option<&Vector>) -> f64 {
    let mut half: f64 = 3.0;
    if let ConvexSet::OpenBall { center, radius } = set {
        half = half.max(center.norm() + radius + 0.5);
    }
    if let Some(x) = anchor {
        half = half.max(x.norm() + 0.5);
    }
    half.min(50.0)
}

/// Convex polygon `{a_i·e < b_i}` clipped to the view box.
fn clip_polygon(rows: &[hb_core::HalfSpace], half: f64) -> Vec<[f64; 2]> {
    let mut poly = vec![[-half, -half], [half, -half], [half, half], [-half, half]];
    for r in rows {
        let (a, b) = ([r.normal[0], r.normal[1]], r.offset);
        let side = |p: &[f64; 2]| a[0] * p[0] + a[1] * p[1] - b;
        let mut next = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            let (sp, sq) = (side(&p), side(&q));
            if sp <= 0.0 {
                next.push(p);
            }
            if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
                let t = sp / (sp - sq);
                next.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        poly = next;
        if poly.is_empty() {
            break;
        }
    }
    poly
}

pub fn svg(set: &ConvexSet, r: &SeparationResult) -> Result<String, Failure> {
    let view = View {
        half: extent(set, r.anchor.as_ref()),
    };
    let fan = brute_force_2d_normals(set, FAN_GRID)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );

    for k in 0..fan.grid {
        if fan.admissible[k] {
            let th = fan.angle(k);
            view.line(
                &mut out,
                [th.cos(), th.sin()],
                r##"stroke="#9ecae1" stroke-width="0.6""##,
            );
        }
    }

    let fill = r##"fill="#fdae6b" fill-opacity="0.7" stroke="#e6550d""##;
    match set {
        ConvexSet::OpenBall { center, radius } => {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" {fill} stroke-dasharray="4 3"/>"#,
                view.px(center[0]),
                view.py(center[1]),
                radius / (2.0 * view.half) * SIZE,
            );
        }
        ConvexSet::HPolyhedron { rows, .. } => {
            let poly = clip_polygon(rows, view.half);
            if !poly.is_empty() {
                let pts: Vec<String> = poly
                    .iter()
                    .map(|p| format!("{:.2},{:.2}", view.px(p[0]), view.py(p[1])))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polygon points="{}" {fill} stroke-dasharray="4 3"/>"#,
                    pts.join(" ")
                );
            }
        }
        ConvexSet::Oracle(o) => {
            let cell = 2.0 * view.half / ORACLE_GRID as f64;
            let w = SIZE / ORACLE_GRID as f64;
            for i in 0..ORACLE_GRID {
                for j in 0..ORACLE_GRID {
                    let x = -view.half + (i as f64 + 0.5) * cell;
                    let y = -view.half + (j as f64 + 0.5) * cell;
                    if (o.membership)(&[x, y]) {
                        let _ = writeln!(
                            out,
                            r##"<rect x="{:.2}" y="{:.2}" width="{w:.2}" height="{w:.2}" fill="#fdae6b"/>"##,
                            view.px(x - cell / 2.0),
                            view.py(y + cell / 2.0),
                        );
                    }
                }
            }
        }
    }

    // axes
    view.line(
        &mut out,
        [1.0, 0.0],
        r##"stroke="#bbbbbb" stroke-width="0.8""##,
    );
    view.line(
        &mut out,
        [0.0, 1.0],
        r##"stroke="#bbbbbb" stroke-width="0.8""##,
    );

    let nrm = r.hyperplane.normal();
    view.line(
        &mut out,
        [-nrm[1], nrm[0]],
        r##"stroke="#08519c" stroke-width="2.5""##,
    );

    if let Some(x) = &r.anchor {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="#000000"/>"##,
            view.px(x[0]),
            view.py(x[1]),
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="8" y="18" font-family="monospace" font-size="12" fill="#333333">normal ({:.6}, {:.6})</text>"##,
        nrm[0], nrm[1]
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hb_core::HalfSpace;

    #[test]
    fn clipping_a_half_plane() {
        let rows = vec![HalfSpace::new(Vector::new(vec![0.0, 1.0]).unwrap(), 0.0).unwrap()];
        let poly = clip_polygon(&rows, 1.0);
        assert_eq!(poly.len(), 4);
        assert!(poly.iter().all(|p| p[1] <= 1e-12));
    }
}
