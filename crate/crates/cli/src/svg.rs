//! Deterministic SVG rendering of a diagram.
//!
//! The domain's bounding box is scaled uniformly into a 1000-unit square
//! viewbox with a 20-unit margin, y pointing up. Cells get a fixed pastel
//! fill by insertion index; boundary edges are black, bisector edges blue,
//! edges of equidistant regions red. Coordinates are printed with three
//! decimals, so the output is byte-identical across runs.

use std::fmt::Write;

use hilbert_core::{EdgeSource, Point, VoronoiDiagram};

pub const VIEWBOX: f64 = 1000.0;
const MARGIN: f64 = 20.0;

const FILLS: [&str; 8] = [
    "#fbb4ae", "#b3cde3", "#ccebc5", "#decbe4", "#fed9a6", "#ffffcc", "#e5d8bd", "#fddaec",
];

/// Maps domain coordinates into the viewbox.
#[derive(Debug, Clone, Copy)]
pub struct ViewTransform {
    lo: Point,
    hi_y: f64,
    scale: f64,
}

impl ViewTransform {
    pub fn fit(lo: Point, hi: Point) -> ViewTransform {
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        ViewTransform {
            lo,
            hi_y: hi.y,
            scale: (VIEWBOX - 2.0 * MARGIN) / span,
        }
    }

    pub fn apply(&self, p: Point) -> (f64, f64) {
        (
            MARGIN + (p.x - self.lo.x) * self.scale,
            MARGIN + (self.hi_y - p.y) * self.scale,
        )
    }
}

fn coord(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn points_attr(tf: &ViewTransform, pts: &[Point]) -> String {
    pts.iter()
        .map(|&p| {
            let (x, y) = tf.apply(p);
            format!("{},{}", coord(x), coord(y))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn stroke(src: &EdgeSource) -> (&'static str, &'static str) {
    match src {
        EdgeSource::Boundary { .. } => ("#000000", "2"),
        EdgeSource::Bisector { .. } => ("#1f4e9c", "1.5"),
        EdgeSource::DegenerateRegion { .. } => ("#c0392b", "1.5"),
    }
}

pub fn render(d: &VoronoiDiagram) -> String {
    let (lo, hi) = d.polygon().bbox();
    let tf = ViewTransform::fit(lo, hi);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {v} {v}" width="{v}" height="{v}">"#,
        v = VIEWBOX
    );
    let _ = writeln!(
        out,
        r##"<polygon class="domain" points="{}" fill="#ffffff" stroke="#000000" stroke-width="2"/>"##,
        points_attr(&tf, d.polygon().vertices())
    );
    for (i, cell) in d.cells().iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<polygon class="cell" data-site="{}" points="{}" fill="{}" stroke="none"/>"#,
            escape(&cell.site),
            points_attr(&tf, cell.boundary()),
            FILLS[i % FILLS.len()]
        );
    }
    for cell in d.cells() {
        let v = cell.boundary();
        for (i, src) in cell.provenance().iter().enumerate() {
            let (a, b) = (tf.apply(v[i]), tf.apply(v[(i + 1) % v.len()]));
            let (color, width) = stroke(src);
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{width}"/>"#,
                coord(a.0),
                coord(a.1),
                coord(b.0),
                coord(b.1)
            );
        }
    }
    for s in d.sites() {
        let (x, y) = tf.apply(s.pos);
        let _ = writeln!(
            out,
            r##"<circle class="site" cx="{}" cy="{}" r="4" fill="#000000"/><text x="{}" y="{}" font-size="16">{}</text>"##,
            coord(x),
            coord(y),
            coord(x + 6.0),
            coord(y - 6.0),
            escape(&s.id)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_fills_viewbox() {
        let tf = ViewTransform::fit(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
        assert_eq!(tf.apply(Point::new(0.0, 1.0)), (MARGIN, MARGIN));
        assert_eq!(tf.apply(Point::new(1.0, 0.0)), (VIEWBOX - MARGIN, VIEWBOX - MARGIN));
    }
}
