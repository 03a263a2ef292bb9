//! Polygons that are star-shaped about a center, stored as a boundary ring
//! in counter-clockwise angular order with a tag on every edge. Two star
//! polygons with the same center intersect by taking the smaller radius
//! along every ray, which keeps the result star-shaped and the tags of
//! whichever boundary is nearer.

use std::f64::consts::TAU;

use crate::geometry::Point;
use crate::polygon::{point_in_ring, signed_area};

/// Angular gap below which two directions count as one.
const ANGLE_EPS: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct StarPolygon<S> {
    center: Point,
    vertices: Vec<Point>,
    /// `sources[i]` tags the edge `vertices[i] → vertices[i + 1]`.
    sources: Vec<S>,
}

fn angle_of(center: Point, p: Point) -> f64 {
    let v = p - center;
    let a = v.y.atan2(v.x);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

fn ray_dir(theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(c, s)
}

/// Point where the ray from `c` at angle `theta` meets the line `a b`.
fn ray_hit(c: Point, theta: f64, a: Point, b: Point) -> Point {
    ray_hit_dir(c, ray_dir(theta), a, b)
}

fn ray_hit_dir(c: Point, d: Point, a: Point, b: Point) -> Point {
    let e = b - a;
    let den = d.cross(e);
    if den.abs() <= 1e-300 {
        return if (a - c).dot(d) > (b - c).dot(d) { a } else { b };
    }
    c + d * ((a - c).cross(e) / den)
}

/// Boundary of one angular interval of an intersection: two or three
/// points, with the input edge (polygon, edge index) under each segment.
struct Chain {
    pts: [Point; 3],
    edges: [(u8, usize); 2],
    len: usize,
}

/// Tag of an output edge before sources are resolved.
#[derive(Clone, Copy, PartialEq)]
enum Origin {
    Edge(u8, usize),
    /// A radial jump between chains; index into the jump tags.
    Radial(usize),
}

impl<S: Clone + PartialEq> StarPolygon<S> {
    /// `vertices` must run counter-clockwise around `center`.
    pub fn new(center: Point, vertices: Vec<Point>, sources: Vec<S>) -> StarPolygon<S> {
        assert_eq!(vertices.len(), sources.len());
        let mut sp = StarPolygon {
            center,
            vertices,
            sources,
        };
        sp.clean();
        sp
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn sources(&self) -> &[S] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn contains(&self, p: Point) -> bool {
        point_in_ring(&self.vertices, p)
    }

    fn scale(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dist(self.center))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    /// Drops zero-length edges and merges collinear edges with equal tags.
    fn clean(&mut self) {
        let eps = 1e-12 * self.scale();
        let n = self.vertices.len();
        let mut vs: Vec<Point> = Vec::with_capacity(n);
        let mut ss: Vec<S> = Vec::with_capacity(n);
        for i in 0..n {
            let (p, s) = (self.vertices[i], &self.sources[i]);
            if let Some(last) = vs.last() {
                if last.dist(p) <= eps {
                    *ss.last_mut().unwrap() = s.clone();
                    continue;
                }
            }
            vs.push(p);
            ss.push(s.clone());
        }
        while vs.len() > 1 && vs[0].dist(*vs.last().unwrap()) <= eps {
            vs.pop();
            ss.pop();
        }
        // Collinear merge: vertex i is redundant when edges i-1 and i carry
        // the same tag and turn by nothing.
        let redundant = |a: Point, b: Point, c: Point| {
            let turn = (b - a).cross(c - b).abs();
            turn <= 1e-14 * (b - a).norm() * (c - b).norm() && (b - a).dot(c - b) > 0.0
        };
        loop {
            let n = vs.len();
            if n <= 3 {
                break;
            }
            let mut keep = vec![true; n];
            let mut kept = n;
            let mut prev = n - 1;
            for i in 0..n {
                let next = (i + 1) % n;
                if kept > 3 && keep[next] && ss[prev] == ss[i] && redundant(vs[prev], vs[i], vs[next]) {
                    keep[i] = false;
                    kept -= 1;
                } else {
                    prev = i;
                }
            }
            if keep.iter().all(|&k| k) {
                break;
            }
            let mut it = keep.iter();
            vs.retain(|_| *it.next().unwrap());
            let mut it = keep.iter();
            ss.retain(|_| *it.next().unwrap());
        }
        self.vertices = vs;
        self.sources = ss;
    }

    fn angles(&self) -> Vec<f64> {
        self.vertices.iter().map(|&v| angle_of(self.center, v)).collect()
    }

    /// Non-radial edges keyed by start angle, for lookup by direction.
    fn radial_index(&self, angles: &[f64]) -> Vec<(f64, f64, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (angles[i], angles[(i + 1) % n]);
            let mut span = b - a;
            if span < 0.0 {
                span += TAU;
            }
            if span <= ANGLE_EPS || span >= TAU - ANGLE_EPS || span > std::f64::consts::PI + 1e-9 {
                continue;
            }
            out.push((a, span, i));
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }

    /// Edge crossed by the ray at `theta`.
    fn edge_at(index: &[(f64, f64, usize)], theta: f64) -> usize {
        let k = index.partition_point(|e| e.0 <= theta);
        let cand = if k == 0 { index.len() - 1 } else { k - 1 };
        // Fall back to the nearest covering edge if rounding left a hole.
        let covers = |e: &(f64, f64, usize)| {
            let mut d = theta - e.0;
            if d < 0.0 {
                d += TAU;
            }
            d <= e.1 + 1e-12
        };
        if covers(&index[cand]) {
            return index[cand].2;
        }
        index.iter().find(|e| covers(e)).unwrap_or(&index[cand]).2
    }

    fn point_on(&self, edge: usize, theta: f64) -> Point {
        let n = self.vertices.len();
        ray_hit(self.center, theta, self.vertices[edge], self.vertices[(edge + 1) % n])
    }

    /// Tag of the radial edge of this polygon through `p`, if any.
    fn radial_source_through(&self, p: Point, tol: f64) -> Option<S> {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if crate::geometry::segment_distance(a, b, p) <= tol {
                return Some(self.sources[i].clone());
            }
        }
        None
    }

    /// Pointwise minimum of the two radial functions. Both polygons must
    /// share the center.
    pub fn intersect(&self, other: &StarPolygon<S>) -> StarPolygon<S> {
        let c = self.center;
        let (aa, ab) = (self.angles(), other.angles());
        let (ia, ib) = (self.radial_index(&aa), other.radial_index(&ab));
        if ia.is_empty() {
            return other.clone();
        }
        if ib.is_empty() {
            return self.clone();
        }
        let mut angles: Vec<f64> = aa.iter().chain(ab.iter()).copied().collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|x, y| *x - *y <= ANGLE_EPS);
        if angles.len() > 1 && angles[0] + TAU - angles[angles.len() - 1] <= ANGLE_EPS {
            angles.pop();
        }
        let dirs: Vec<Point> = angles.iter().map(|&a| ray_dir(a)).collect();
        let tol = 1e-12 * self.scale().max(other.scale());
        let (na, nb) = (self.len(), other.len());
        let count = angles.len();
        let mut chains: Vec<Chain> = Vec::with_capacity(count);
        for k in 0..count {
            let alpha = angles[k];
            let beta = if k + 1 < count { angles[k + 1] } else { angles[0] + TAU };
            if beta - alpha <= ANGLE_EPS {
                continue;
            }
            let mid = {
                let m = 0.5 * (alpha + beta);
                if m >= TAU {
                    m - TAU
                } else {
                    m
                }
            };
            let (d0, d1) = (dirs[k], dirs[(k + 1) % count]);
            let ea = Self::edge_at(&ia, mid);
            let eb = Self::edge_at(&ib, mid);
            let (a0, a1) = (self.vertices[ea], self.vertices[(ea + 1) % na]);
            let (b0, b1) = (other.vertices[eb], other.vertices[(eb + 1) % nb]);
            let (pa0, pa1) = (ray_hit_dir(c, d0, a0, a1), ray_hit_dir(c, d1, a0, a1));
            let (pb0, pb1) = (ray_hit_dir(c, d0, b0, b1), ray_hit_dir(c, d1, b0, b1));
            let g0 = pa0.dist(c) - pb0.dist(c);
            let g1 = pa1.dist(c) - pb1.dist(c);
            let (oa, ob) = ((0u8, ea), (1u8, eb));
            let chain = if g0 <= tol && g1 <= tol {
                Chain {
                    pts: [pa0, pa1, pa1],
                    edges: [oa, oa],
                    len: 2,
                }
            } else if g0 >= -tol && g1 >= -tol {
                Chain {
                    pts: [pb0, pb1, pb1],
                    edges: [ob, ob],
                    len: 2,
                }
            } else {
                // The crossing lies on both edge lines; intersect them.
                let x = line_cross(a0, a1, b0, b1).unwrap_or_else(|| {
                    let u = g0 / (g0 - g1);
                    self.point_on(ea, alpha + u * (beta - alpha))
                });
                if g0 < 0.0 {
                    Chain {
                        pts: [pa0, x, pb1],
                        edges: [oa, ob],
                        len: 3,
                    }
                } else {
                    Chain {
                        pts: [pb0, x, pa1],
                        edges: [ob, oa],
                        len: 3,
                    }
                }
            };
            chains.push(chain);
        }
        // Consecutive chains are joined by a radial edge when their end and
        // start differ.
        let nc = chains.len();
        let mut out_v: Vec<Point> = Vec::with_capacity(2 * nc);
        let mut out_o: Vec<Origin> = Vec::with_capacity(2 * nc);
        let mut radial: Vec<S> = Vec::new();
        for k in 0..nc {
            let ch = &chains[k];
            let next = &chains[(k + 1) % nc];
            for j in 0..ch.len - 1 {
                out_v.push(ch.pts[j]);
                out_o.push(Origin::Edge(ch.edges[j].0, ch.edges[j].1));
            }
            let end = ch.pts[ch.len - 1];
            let next_start = next.pts[0];
            out_v.push(end);
            if end.dist(next_start) <= tol {
                // Continuous: the end vertex starts the next chain's first edge.
                out_o.push(Origin::Edge(next.edges[0].0, next.edges[0].1));
            } else {
                let m = end.lerp(next_start, 0.5);
                let src = self
                    .radial_source_through(m, 1e-9 * self.scale())
                    .or_else(|| other.radial_source_through(m, 1e-9 * other.scale()))
                    .unwrap_or_else(|| self.source_of(other, next.edges[0]));
                out_o.push(Origin::Radial(radial.len()));
                radial.push(src);
            }
        }
        // Drop breakpoints interior to a single input edge.
        let n = out_v.len();
        let mut keep = vec![true; n];
        if n > 3 {
            for i in 0..n {
                let prev = out_o[(i + n - 1) % n];
                keep[i] = matches!(prev, Origin::Radial(_)) || prev != out_o[i];
            }
            if keep.iter().filter(|&&k| k).count() < 3 {
                keep.fill(true);
            }
        }
        let mut vs = Vec::with_capacity(n);
        let mut ss = Vec::with_capacity(n);
        for i in 0..n {
            if keep[i] {
                vs.push(out_v[i]);
                ss.push(match out_o[i] {
                    Origin::Edge(p, e) => self.source_of(other, (p, e)),
                    Origin::Radial(r) => radial[r].clone(),
                });
            }
        }
        StarPolygon::new(c, vs, ss)
    }

    fn source_of(&self, other: &StarPolygon<S>, (poly, edge): (u8, usize)) -> S {
        if poly == 0 {
            self.sources[edge].clone()
        } else {
            other.sources[edge].clone()
        }
    }
}

fn line_cross(a: Point, b: Point, p: Point, q: Point) -> Option<Point> {
    let (e, f) = (b - a, q - p);
    let den = e.cross(f);
    if den.abs() <= 1e-15 * e.norm() * f.norm() {
        return None;
    }
    Some(a + e * ((p - a).cross(f) / den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn rect(c: Point, x0: f64, y0: f64, x1: f64, y1: f64, tag: u8) -> StarPolygon<u8> {
        StarPolygon::new(c, vec![p(x0, y0), p(x1, y0), p(x1, y1), p(x0, y1)], vec![tag; 4])
    }

    #[test]
    fn rectangles_intersect_to_overlap() {
        let c = p(0.4, 0.5);
        let a = rect(c, 0.0, 0.0, 1.0, 1.0, 1);
        let b = rect(c, -1.0, 0.2, 0.6, 2.0, 2);
        let r = a.intersect(&b);
        assert!((r.area() - 0.6 * 0.8).abs() < 1e-12, "{}", r.area());
        assert!(r.contains(p(0.1, 0.9)));
        assert!(!r.contains(p(0.7, 0.5)));
        // Right side from b, bottom from b, top and left from a.
        let tag_at = |q: Point| {
            let n = r.len();
            (0..n)
                .find(|&i| crate::geometry::segment_distance(r.vertices()[i], r.vertices()[(i + 1) % n], q) < 1e-12)
                .map(|i| r.sources()[i])
        };
        assert_eq!(tag_at(p(0.6, 0.5)), Some(2));
        assert_eq!(tag_at(p(0.3, 0.2)), Some(2));
        assert_eq!(tag_at(p(0.3, 1.0)), Some(1));
        assert_eq!(tag_at(p(0.0, 0.5)), Some(1));
    }

    #[test]
    fn radial_edges_survive() {
        let c = p(0.0, 0.0);
        // A notch: boundary steps in along the ray at angle π/2.
        let a = StarPolygon::new(
            c,
            vec![
                p(1.0, -1.0),
                p(1.0, 1.0),
                p(0.0, 1.0),
                p(0.0, 0.5),
                p(-0.5, 0.5),
                p(-0.5, -1.0),
            ],
            vec![0u8, 1, 2, 3, 4, 5],
        );
        let b = rect(c, -2.0, -2.0, 2.0, 2.0, 9);
        let r = a.intersect(&b);
        assert!((r.area() - a.area()).abs() < 1e-12);
        let i = r.vertices().iter().position(|v| v.dist(p(0.0, 1.0)) < 1e-12).unwrap();
        assert_eq!(r.sources()[i], 2);
    }

    #[test]
    fn self_intersection_is_identity() {
        let c = p(0.3, 0.2);
        let a = rect(c, 0.0, 0.0, 1.0, 1.0, 1);
        let r = a.intersect(&a);
        assert!((r.area() - 1.0).abs() < 1e-12);
        assert_eq!(r.len(), 4);
    }
}
