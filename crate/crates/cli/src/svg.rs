//! Two-dimensional price sets drawn as polygons clipped to a viewport.
//! Edges produced by the clipping (not part of the set's own boundary) are
//! dashed.

use std::fmt::Write;

use setcalc::{Halfspace, Polyhedron, Rational};

use crate::Viewport;

const PANEL: f64 = 220.0;
const GAP: f64 = 24.0;
const TITLE: f64 = 18.0;

pub struct Panel {
    pub title: String,
    pub row: usize,
    pub set: Polyhedron,
}

fn viewport_box(v: &Viewport) -> Polyhedron {
    let one = Rational::one;
    let zero = Rational::zero;
    let h = |a: Rational, b: Rational, off: Rational| Halfspace::new(vec![a, b], off);
    Polyhedron::from_halfspaces(
        2,
        vec![
            h(one(), zero(), v.xmin.clone()),
            h(-one(), zero(), -v.xmax.clone()),
            h(zero(), one(), v.ymin.clone()),
            h(zero(), -one(), -v.ymax.clone()),
        ],
        vec![],
    )
    .expect("dimension 2")
}

struct Frame<'a> {
    v: &'a Viewport,
    left: f64,
    top: f64,
}

impl Frame<'_> {
    fn x(&self, x: &Rational) -> f64 {
        let (lo, hi) = (self.v.xmin.to_f64(), self.v.xmax.to_f64());
        self.left + (x.to_f64() - lo) / (hi - lo) * PANEL
    }

    fn y(&self, y: &Rational) -> f64 {
        let (lo, hi) = (self.v.ymin.to_f64(), self.v.ymax.to_f64());
        self.top + (hi - y.to_f64()) / (hi - lo) * PANEL
    }

    fn point(&self, p: &[Rational]) -> String {
        format!("{:.3},{:.3}", self.x(&p[0]), self.y(&p[1]))
    }
}

/// Vertices in counter-clockwise order around their centroid.
fn ordered(mut pts: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p[0].to_f64()).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p[1].to_f64()).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a[1].to_f64() - cy).atan2(a[0].to_f64() - cx);
        let tb = (b[1].to_f64() - cy).atan2(b[0].to_f64() - cx);
        ta.total_cmp(&tb)
    });
    pts
}

/// An edge of the clipped polygon belongs to the set's own boundary when
/// some constraint of the set is tight at its midpoint.
fn own_edge(set: &Polyhedron, a: &[Rational], b: &[Rational]) -> bool {
    let half = Rational::new(1, 2);
    let mid: Vec<Rational> = a.iter().zip(b).map(|(x, y)| (x + y) * &half).collect();
    let tight = |normal: &[Rational], offset: &Rational| {
        &normal
            .iter()
            .zip(&mid)
            .map(|(c, x)| c * x)
            .sum::<Rational>()
            == offset
    };
    set.inequalities()
        .iter()
        .any(|h| tight(&h.normal, &h.offset))
        || set.equalities().iter().any(|h| tight(&h.normal, &h.offset))
}

fn panel(out: &mut String, p: &Panel, frame: &Frame, clip: &Polyhedron) {
    let (l, t) = (frame.left, frame.top);
    let _ = writeln!(
        out,
        r#"  <text x="{:.3}" y="{:.3}" class="title">{}</text>"#,
        l,
        t - 5.0,
        escape(&p.title)
    );
    let _ = writeln!(
        out,
        r#"  <rect x="{l:.3}" y="{t:.3}" width="{PANEL:.3}" height="{PANEL:.3}" class="frame"/>"#
    );
    let zero = Rational::zero();
    if frame.v.xmin < zero && zero < frame.v.xmax {
        let x = frame.x(&zero);
        let _ = writeln!(
            out,
            r#"  <line x1="{x:.3}" y1="{t:.3}" x2="{x:.3}" y2="{:.3}" class="axis"/>"#,
            t + PANEL
        );
    }
    if frame.v.ymin < zero && zero < frame.v.ymax {
        let y = frame.y(&zero);
        let _ = writeln!(
            out,
            r#"  <line x1="{l:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" class="axis"/>"#,
            l + PANEL
        );
    }
    let message = |out: &mut String, text: &str| {
        let _ = writeln!(
            out,
            r#"  <text x="{:.3}" y="{:.3}" class="note">{text}</text>"#,
            l + PANEL / 2.0,
            t + PANEL / 2.0
        );
    };
    if p.set.is_empty() {
        message(out, "empty");
        return;
    }
    let clipped = p.set.intersect(clip).expect("same dimension");
    if clipped.is_empty() {
        message(out, "outside viewport");
        return;
    }
    let pts = ordered(clipped.vertices().to_vec());
    match pts.len() {
        1 => {
            let _ = writeln!(
                out,
                r#"  <circle cx="{:.3}" cy="{:.3}" r="3" class="set"/>"#,
                frame.x(&pts[0][0]),
                frame.y(&pts[0][1])
            );
        }
        2 => {
            let _ = writeln!(
                out,
                r#"  <polyline points="{} {}" class="{}"/>"#,
                frame.point(&pts[0]),
                frame.point(&pts[1]),
                if own_edge(&p.set, &pts[0], &pts[1]) {
                    "edge"
                } else {
                    "clipped"
                }
            );
        }
        _ => {
            let poly: Vec<String> = pts.iter().map(|q| frame.point(q)).collect();
            let _ = writeln!(
                out,
                r#"  <polygon points="{}" class="set"/>"#,
                poly.join(" ")
            );
            for i in 0..pts.len() {
                let (a, b) = (&pts[i], &pts[(i + 1) % pts.len()]);
                let class = if own_edge(&p.set, a, b) {
                    "edge"
                } else {
                    "clipped"
                };
                let _ = writeln!(
                    out,
                    r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" class="{class}"/>"#,
                    frame.x(&a[0]),
                    frame.y(&a[1]),
                    frame.x(&b[0]),
                    frame.y(&b[1])
                );
            }
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One panel per entry, rows by `row` in input order.
pub fn render(panels: &[Panel], v: &Viewport) -> String {
    let rows = panels.iter().map(|p| p.row).max().map_or(0, |r| r + 1);
    let mut per_row = vec![0usize; rows];
    for p in panels {
        per_row[p.row] += 1;
    }
    let cols = per_row.iter().copied().max().unwrap_or(0).max(1);
    let width = GAP + cols as f64 * (PANEL + GAP);
    let height = GAP + rows as f64 * (PANEL + GAP + TITLE);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    out.push_str(concat!(
        "  <style>\n",
        "    .frame { fill: none; stroke: #999; stroke-width: 1; }\n",
        "    .axis { stroke: #ccc; stroke-width: 1; }\n",
        "    .set { fill: #4c78a8; fill-opacity: 0.35; stroke: none; }\n",
        "    .edge { stroke: #1f3b5c; stroke-width: 2; fill: none; }\n",
        "    .clipped { stroke: #1f3b5c; stroke-width: 1; stroke-dasharray: 4 3; fill: none; }\n",
        "    .title { font: 12px sans-serif; }\n",
        "    .note { font: 12px sans-serif; text-anchor: middle; fill: #666; }\n",
        "  </style>\n"
    ));
    let clip = viewport_box(v);
    let mut seen = vec![0usize; rows];
    for p in panels {
        let col = seen[p.row];
        seen[p.row] += 1;
        let frame = Frame {
            v,
            left: GAP + col as f64 * (PANEL + GAP),
            top: GAP + TITLE + p.row as f64 * (PANEL + GAP + TITLE),
        };
        panel(&mut out, p, &frame, &clip);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use setcalc::linalg::from_ints;

    fn view() -> Viewport {
        let q = |n| Rational::from_integer(n);
        Viewport {
            xmin: q(-20),
            xmax: q(20),
            ymin: q(-20),
            ymax: q(20),
        }
    }

    #[test]
    fn half_plane_has_one_own_edge() {
        let hp = Polyhedron::from_halfspaces(
            2,
            vec![Halfspace::new(
                from_ints(&[1, 10]),
                Rational::from_integer(10),
            )],
            vec![],
        )
        .unwrap();
        let s = render(
            &[Panel {
                title: "root".into(),
                row: 0,
                set: hp,
            }],
            &view(),
        );
        assert_eq!(s.matches(r#"class="edge""#).count(), 1);
        assert!(s.matches(r#"class="clipped""#).count() >= 2);
        assert!(s.contains("<polygon"));
    }

    #[test]
    fn empty_and_distant_sets() {
        let far = Polyhedron::point(from_ints(&[100, 100]));
        let s = render(
            &[
                Panel {
                    title: "a".into(),
                    row: 0,
                    set: Polyhedron::empty(2),
                },
                Panel {
                    title: "b<c".into(),
                    row: 1,
                    set: far,
                },
            ],
            &view(),
        );
        assert!(s.contains(">empty<"));
        assert!(s.contains("outside viewport"));
        assert!(s.contains("b&lt;c"));
    }
}
