//! Convex polygons and half-plane clipping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{orient2d, Line, OrientedLine, Point, Segment, EPS_GEOM, EPS_SINGULAR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    /// Canonical supporting line.
    pub line: Line,
    /// Supporting line oriented with the polygon interior on the positive side.
    pub inward: OrientedLine,
    pub segment: Segment,
}

/// A convex polygon with counter-clockwise vertices. Edge `i` runs from
/// vertex `i` to vertex `i + 1 (mod m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    #[serde(skip)]
    edges: Vec<Edge>,
}

impl TryFrom<Vec<Point>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        ConvexPolygon::from_region(v).ok_or_else(|| Error::InvalidPolygon("degenerate region".into()))
    }
}

impl From<ConvexPolygon> for Vec<Point> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

impl ConvexPolygon {
    /// Validates a user-supplied domain: at least three finite vertices in
    /// counter-clockwise order with a strict left turn at every vertex.
    pub fn new(vertices: Vec<Point>) -> Result<ConvexPolygon> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::InvalidPolygon(format!("{m} vertices, need at least 3")));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon(format!("vertex {i} is not finite")));
        }
        for i in 0..m {
            for j in i + 1..m {
                if vertices[i].dist(vertices[j]) <= EPS_GEOM {
                    return Err(Error::InvalidPolygon(format!("vertices {i} and {j} repeat")));
                }
            }
        }
        for i in 0..m {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % m], vertices[(i + 2) % m]);
            if orient2d(a, b, c) <= EPS_GEOM {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {} is not a strict counter-clockwise turn",
                    (i + 1) % m
                )));
            }
        }
        // Consecutive left turns can still wind around twice.
        let winding: f64 = (0..m)
            .map(|i| {
                let (a, b, c) = (vertices[i], vertices[(i + 1) % m], vertices[(i + 2) % m]);
                let (u, v) = (b - a, c - b);
                u.cross(v).atan2(u.dot(v))
            })
            .sum();
        if (winding - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::InvalidPolygon("polygon is not simple".into()));
        }
        Ok(Self::build(vertices))
    }

    /// Builds a polygon from the output of clipping: drops repeated and
    /// collinear vertices (relative tolerance) and returns `None` when
    /// nothing of positive area remains.
    pub fn from_region(points: Vec<Point>) -> Option<ConvexPolygon> {
        let pts = clean_convex(points);
        if pts.len() < 3 || signed_area(&pts) <= 0.0 {
            return None;
        }
        Some(Self::build(pts))
    }

    fn build(vertices: Vec<Point>) -> ConvexPolygon {
        let m = vertices.len();
        let edges = (0..m)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % m]);
                let inward = OrientedLine::through(a, b).expect("distinct vertices");
                Edge {
                    line: inward.to_line(),
                    inward,
                    segment: Segment { a, b },
                }
            })
            .collect();
        ConvexPolygon { vertices, edges }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i % self.edges.len()]
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// Signed distance to the nearest edge line; positive inside.
    pub fn inward_distance(&self, p: Point) -> f64 {
        self.edges
            .iter()
            .map(|e| e.inward.eval(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point, eps: f64) -> bool {
        self.inward_distance(p) >= -eps
    }

    /// Index of the edge whose closed segment is nearest to `p`, lowest index
    /// on ties.
    pub fn nearest_edge(&self, p: Point) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, e) in self.edges.iter().enumerate() {
            let d = e.segment.distance_to(p);
            if d < best.1 - 1e-15 {
                best = (i, d);
            }
        }
        best.0
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(&self.vertices)
    }

    /// Clip by the closed half-plane where `line` is non-negative.
    pub fn clip(&self, line: &OrientedLine) -> Option<ConvexPolygon> {
        ConvexPolygon::from_region(clip_halfplane(&self.vertices, line))
    }
}

pub fn bbox(pts: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

pub fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let o = pts[0];
    (1..n - 1).map(|i| (pts[i] - o).cross(pts[i + 1] - o)).sum::<f64>() * 0.5
}

pub fn centroid(pts: &[Point]) -> Point {
    let n = pts.len();
    let o = pts[0];
    let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
    for i in 1..n.saturating_sub(1) {
        let (p, q) = (pts[i] - o, pts[i + 1] - o);
        let w = p.cross(q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
        a += w;
    }
    if a.abs() < f64::MIN_POSITIVE {
        let s = pts.iter().fold(Point::default(), |acc, &p| acc + p);
        return s * (1.0 / n as f64);
    }
    Point::new(o.x + cx / (3.0 * a), o.y + cy / (3.0 * a))
}

fn scale_of(pts: &[Point]) -> f64 {
    let (lo, hi) = bbox(pts);
    (hi - lo).norm().max(f64::MIN_POSITIVE)
}

/// Removes repeated and collinear vertices from a convex CCW ring.
fn clean_convex(points: Vec<Point>) -> Vec<Point> {
    if points.len() < 3 {
        return points;
    }
    let scale = scale_of(&points);
    let eps_len = (1e-12 * scale).max(10.0 * EPS_SINGULAR);
    let mut pts: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if pts.last().is_none_or(|q: &Point| q.dist(p) > eps_len) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) <= eps_len {
        pts.pop();
    }
    let eps_area = 1e-13 * scale * scale;
    let mut changed = true;
    while changed && pts.len() >= 3 {
        changed = false;
        let n = pts.len();
        for i in 0..n {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            if orient2d(a, b, c) <= eps_area {
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
    pts
}

/// Which side of a canonical [`Line`] to keep when clipping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `u·x + v·y + l >= 0`
    Positive,
    /// `u·x + v·y + l <= 0`
    Negative,
}

/// Clips a convex CCW ring to a closed half-plane of `line`. The result is
/// convex and CCW; it is empty when nothing of positive extent remains.
pub fn clip_polygon_halfplane(pts: &[Point], line: &Line, side: Side) -> Vec<Point> {
    let o = OrientedLine {
        u: line.u,
        v: line.v,
        l: line.l,
    };
    let o = match side {
        Side::Positive => o,
        Side::Negative => o.flipped(),
    };
    let out = clip_halfplane(pts, &o);
    if out.len() < 3 {
        Vec::new()
    } else {
        out
    }
}

/// Sutherland–Hodgman against one half-plane `line >= 0`.
pub fn clip_halfplane(pts: &[Point], line: &OrientedLine) -> Vec<Point> {
    let n = pts.len();
    if n == 0 {
        return Vec::new();
    }
    let eps = 1e-13 * scale_of(pts).max(1.0);
    let d: Vec<f64> = pts
        .iter()
        .map(|&p| {
            let v = line.eval(p);
            if v.abs() <= eps {
                0.0
            } else {
                v
            }
        })
        .collect();
    if d.iter().all(|&v| v >= 0.0) {
        return pts.to_vec();
    }
    if d.iter().all(|&v| v <= 0.0) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (pts[i], pts[j]);
        let (dp, dq) = (d[i], d[j]);
        if dp >= 0.0 {
            out.push(p);
        }
        if (dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0) {
            let u = dp / (dp - dq);
            out.push(p.lerp(q, u));
        }
    }
    let mut dedup: Vec<Point> = Vec::with_capacity(out.len());
    for p in out {
        if dedup.last().is_none_or(|q: &Point| q.dist(p) > eps) {
            dedup.push(p);
        }
    }
    while dedup.len() > 1 && dedup[0].dist(*dedup.last().unwrap()) <= eps {
        dedup.pop();
    }
    dedup
}

/// Convex hull (CCW, no collinear points) by monotone chain.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) <= 1e-14);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient2d(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient2d(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Even-odd point-in-polygon test for an arbitrary simple ring.
pub fn point_in_ring(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn validates_domain() {
        assert!(ConvexPolygon::new(sq()).is_ok());
        let mut cw = sq();
        cw.reverse();
        assert!(ConvexPolygon::new(cw).is_err());
        let nonconvex = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ];
        assert!(ConvexPolygon::new(nonconvex).is_err());
        let collinear = vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(ConvexPolygon::new(collinear).is_err());
        assert!(ConvexPolygon::new(sq()[..2].to_vec()).is_err());
    }

    #[test]
    fn domain_vertex_triples_turn_left() {
        let p = ConvexPolygon::new(sq()).unwrap();
        let m = p.len();
        for i in 0..m {
            let o = crate::geometry::orient(p.vertex(i), p.vertex(i + 1), p.vertex(i + 2));
            assert_eq!(o.sign(), 1);
        }
    }

    #[test]
    fn clip_examples() {
        let x_le = |c: f64| Line::new(1.0, 0.0, -c).unwrap();
        let half = clip_polygon_halfplane(&sq(), &x_le(0.5), Side::Negative);
        let poly = ConvexPolygon::from_region(half).unwrap();
        assert!((poly.area() - 0.5).abs() < 1e-15);
        let (lo, hi) = poly.bbox();
        assert_eq!((lo.x, lo.y, hi.x, hi.y), (0.0, 0.0, 0.5, 1.0));

        let same = clip_polygon_halfplane(&sq(), &x_le(2.0), Side::Negative);
        assert_eq!(same, sq());

        assert!(clip_polygon_halfplane(&sq(), &x_le(-1.0), Side::Negative).is_empty());
    }

    #[test]
    fn clip_through_vertex_is_clean() {
        // Diagonal cut through two vertices.
        let diag = Line::new(1.0, -1.0, 0.0).unwrap();
        let out = clip_polygon_halfplane(&sq(), &diag, Side::Positive);
        let poly = ConvexPolygon::from_region(out).unwrap();
        assert_eq!(poly.len(), 3);
        assert!((poly.area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn area_and_centroid() {
        let p = ConvexPolygon::new(sq()).unwrap();
        assert_eq!(p.area(), 1.0);
        assert!(p.centroid().dist(Point::new(0.5, 0.5)) < 1e-15);
        assert!((p.diameter() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let mut pts = sq();
        pts.push(Point::new(0.5, 0.5));
        pts.push(Point::new(0.5, 0.0));
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((signed_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn serde_is_a_vertex_list() {
        let p = ConvexPolygon::new(sq()).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]");
        let back: ConvexPolygon = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
