//! SVG diagrams of schemes: the polygon outline with paired points joined by
//! dotted chords and fold points marked.

use std::fmt::Write;

use paperfold::{Point, Scheme};

const SIZE: f64 = 600.0;
const PAD: f64 = 30.0;
const CHORDS_PER_PAIRING: usize = 7;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Frame {
    lo: Point,
    hi: Point,
    scale: f64,
}

impl Frame {
    fn new(points: &[Point]) -> Self {
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        Frame {
            lo,
            hi,
            scale: (SIZE - 2.0 * PAD) / span,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (PAD + (p.x - self.lo.x) * self.scale, PAD + (self.hi.y - p.y) * self.scale)
    }

    fn width(&self) -> f64 {
        2.0 * PAD + (self.hi.x - self.lo.x) * self.scale
    }

    fn height(&self) -> f64 {
        2.0 * PAD + (self.hi.y - self.lo.y) * self.scale
    }
}

fn c(v: f64) -> String {
    format!("{:.3}", v)
}

pub fn render(sch: &Scheme) -> String {
    let polygon = sch.polygon();
    let frame = Frame::new(polygon.vertices());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        c(frame.width()),
        c(frame.height()),
        c(frame.width()),
        c(frame.height())
    );
    let outline: Vec<String> = polygon
        .vertices()
        .iter()
        .map(|&v| {
            let (x, y) = frame.map(v);
            format!("{},{}", c(x), c(y))
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polygon class="outline" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        outline.join(" ")
    );
    for (i, p) in sch.pairings().iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"  <g class="pairing" id="pairing-{i}" stroke="{colour}" stroke-width="1" stroke-dasharray="2,3" fill="none">"#
        );
        // Inward normal of the side carrying segment a.
        let a_mid = p.a().midpoint();
        let t = polygon.boundary_point(a_mid + 1e-6 * polygon.perimeter()) - polygon.boundary_point(a_mid);
        let t = t * (1.0 / t.norm());
        let inward = Point::new(-t.y, t.x);
        for k in 0..CHORDS_PER_PAIRING {
            let s = p.a().start + p.len() * (k as f64 + 0.5) / CHORDS_PER_PAIRING as f64;
            let q = p.pair_point(polygon, s).expect("sample lies on the pairing");
            let (x1, y1) = frame.map(polygon.boundary_point(s));
            let (x2, y2) = frame.map(polygon.boundary_point(q));
            if p.is_fold() {
                let a = polygon.boundary_point(s);
                let b = polygon.boundary_point(q);
                let ctrl = a.lerp(b, 0.5) + inward * (0.5 * a.dist(b));
                let (cx, cy) = frame.map(ctrl);
                let _ = writeln!(
                    out,
                    r#"    <path class="chord" d="M {} {} Q {} {} {} {}"/>"#,
                    c(x1),
                    c(y1),
                    c(cx),
                    c(cy),
                    c(x2),
                    c(y2)
                );
            } else {
                let _ = writeln!(
                    out,
                    r#"    <line class="chord" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    c(x1),
                    c(y1),
                    c(x2),
                    c(y2)
                );
            }
        }
        let _ = writeln!(out, "  </g>");
    }
    for p in sch.pairings() {
        if let Some(f) = p.fold_point() {
            let (x, y) = frame.map(polygon.boundary_point(f));
            let _ = writeln!(out, r#"  <circle class="fold-point" cx="{}" cy="{}" r="3" fill="black"/>"#, c(x), c(y));
        }
    }
    out.push_str("</svg>\n");
    out
}
