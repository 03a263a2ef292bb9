//! Funk and Hilbert distances on a convex polygon, chords, spokes, metric
//! balls and points at a prescribed distance.
//!
//! Distances are evaluated through the edge lines: for an interior pair
//! `s, t` the forward Funk distance is `max_i ln(f_i(s) / f_i(t))`, where
//! `f_i` is the inward distance to edge line `i`. The maximizing edge is the
//! one the ray from `s` through `t` leaves through, so no explicit chord is
//! needed. [`Domain::hilbert_distance_by_cross_ratio`] evaluates the same
//! quantity the long way round, from the chord endpoints and the cross
//! ratio, and is kept as an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{collinearity_residual, cross_ratio, Point, EPS_GEOM};
use crate::polygon::ConvexPolygon;

/// Interior margin relative to the domain diameter.
pub const EPS_INTERIOR_REL: f64 = 1e-6;
/// Polyline sampling tolerance relative to the domain diameter.
pub const SAMPLING_TOL_REL: f64 = 1e-3;

/// Endpoints of the chord through two interior points, ordered `x, s, t, y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub x_end: Point,
    pub y_end: Point,
    pub x_edge: usize,
    pub y_edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spoke {
    pub site: Point,
    pub vertex: usize,
    /// Where the ray from the vertex through the site leaves the domain.
    pub forward_end: Point,
    /// The vertex itself.
    pub backward_end: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertBall {
    pub center: Point,
    pub radius: f64,
    pub boundary: ConvexPolygon,
}

/// A validated Hilbert domain with its derived tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    polygon: ConvexPolygon,
    diameter: f64,
}

impl Domain {
    pub fn new(polygon: ConvexPolygon) -> Domain {
        let diameter = polygon.diameter();
        Domain { polygon, diameter }
    }

    pub fn from_vertices(vertices: Vec<Point>) -> Result<Domain> {
        Ok(Domain::new(ConvexPolygon::new(vertices)?))
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        &self.polygon
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn eps_interior(&self) -> f64 {
        EPS_INTERIOR_REL * self.diameter
    }

    pub fn sampling_tol(&self) -> f64 {
        SAMPLING_TOL_REL * self.diameter
    }

    pub fn is_interior(&self, p: Point) -> bool {
        p.is_finite() && self.polygon.inward_distance(p) > self.eps_interior()
    }

    pub fn check_interior(&self, p: Point) -> Result<()> {
        if self.is_interior(p) {
            Ok(())
        } else {
            Err(Error::PointNotInterior { x: p.x, y: p.y })
        }
    }

    /// Inward distances to every edge line.
    pub fn edge_values(&self, p: Point) -> Vec<f64> {
        self.polygon.edges().iter().map(|e| e.inward.eval(p)).collect()
    }

    /// Parameter `λ > 0` and edge where the ray `p + λ·dir` leaves the
    /// domain. Ties (the ray hits a vertex) go to the lower edge index.
    pub fn ray_exit(&self, p: Point, dir: Point) -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, e) in self.polygon.edges().iter().enumerate() {
            let rate = e.inward.normal().dot(dir);
            if rate < 0.0 {
                let lam = e.inward.eval(p).max(0.0) / -rate;
                if lam < best.0 * (1.0 - 1e-12) {
                    best = (lam, i);
                }
            }
        }
        debug_assert!(best.1 != usize::MAX, "ray from an interior point must exit");
        best
    }

    /// Boundary point hit by the ray from `a` through `b`.
    pub fn ray_boundary(&self, a: Point, b: Point) -> Point {
        let d = b - a;
        let (lam, _) = self.ray_exit(a, d);
        a + d * lam
    }

    /// Edges hit behind `s` and beyond `p` by the chord through `s` and `p`.
    /// No interior validation; `s != p` required.
    pub fn chord_edges(&self, s: Point, p: Point) -> (usize, usize) {
        let d = p - s;
        let (_, fwd) = self.ray_exit(s, d);
        let (_, back) = self.ray_exit(s, -d);
        (back, fwd)
    }

    pub fn chord(&self, s: Point, t: Point) -> Result<Chord> {
        self.check_interior(s)?;
        self.check_interior(t)?;
        if s.dist(t) <= EPS_GEOM {
            return Err(Error::PointsCoincide);
        }
        let d = t - s;
        let (lf, y_edge) = self.ray_exit(s, d);
        let (lb, x_edge) = self.ray_exit(s, -d);
        Ok(Chord {
            x_end: s - d * lb,
            y_end: s + d * lf,
            x_edge,
            y_edge,
        })
    }

    /// Forward Funk distance `ln(|s − y| / |t − y|)` with `y` the chord end
    /// beyond `t`.
    pub fn funk_distance(&self, s: Point, t: Point) -> Result<f64> {
        self.check_interior(s)?;
        self.check_interior(t)?;
        Ok(self.funk_unchecked(s, t))
    }

    pub(crate) fn funk_unchecked(&self, s: Point, t: Point) -> f64 {
        self.polygon
            .edges()
            .iter()
            .map(|e| (e.inward.eval(s) / e.inward.eval(t)).ln())
            .fold(0.0, f64::max)
    }

    pub fn hilbert_distance(&self, s: Point, t: Point) -> Result<f64> {
        self.check_interior(s)?;
        self.check_interior(t)?;
        Ok(self.distance_unchecked(s, t))
    }

    /// Hilbert distance without the interior checks; for hot loops over
    /// points already known to be interior.
    pub fn distance_unchecked(&self, s: Point, t: Point) -> f64 {
        let (mut fwd, mut back) = (0.0f64, 0.0f64);
        for e in self.polygon.edges() {
            let r = (e.inward.eval(s) / e.inward.eval(t)).ln();
            fwd = fwd.max(r);
            back = back.max(-r);
        }
        0.5 * (fwd + back)
    }

    /// `½ ln (s, t; y, x)` from the explicit chord endpoints.
    pub fn hilbert_distance_by_cross_ratio(&self, s: Point, t: Point) -> Result<f64> {
        if s == t {
            self.check_interior(s)?;
            return Ok(0.0);
        }
        let c = self.chord(s, t)?;
        Ok(0.5 * cross_ratio(s, t, c.y_end, c.x_end)?.ln())
    }

    /// Whether `H(a,b) + H(b,c) = H(a,c)` is certified by the boundary
    /// condition: `r(a,b), r(b,c), r(a,c)` collinear and
    /// `r(b,a), r(c,b), r(c,a)` collinear, `r(p,q)` being where the ray
    /// `pq` meets the boundary.
    pub fn geodesic_additivity_holds(&self, a: Point, b: Point, c: Point) -> Result<bool> {
        for p in [a, b, c] {
            self.check_interior(p)?;
        }
        if a.dist(b) <= EPS_GEOM || b.dist(c) <= EPS_GEOM || a.dist(c) <= EPS_GEOM {
            return Err(Error::PointsCoincide);
        }
        let r = |p, q| self.ray_boundary(p, q);
        let front = [r(a, b), r(b, c), r(a, c)];
        let back = [r(b, a), r(c, b), r(c, a)];
        Ok(collinearity_residual(&front) <= EPS_GEOM && collinearity_residual(&back) <= EPS_GEOM)
    }

    pub fn spokes(&self, s: Point) -> Result<Vec<Spoke>> {
        self.check_interior(s)?;
        Ok(self
            .polygon
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| Spoke {
                site: s,
                vertex: i,
                forward_end: self.ray_boundary(v, s),
                backward_end: v,
            })
            .collect())
    }

    /// The point on the ray from `s` along `direction` at Hilbert distance
    /// `r`. On a fixed chord with `s` at parameter 0, forward end at `λf` and
    /// backward end at `−λb`, the distance to `λ` is
    /// `½ ln(λf (λb + λ) / ((λf − λ) λb))`, which inverts in closed form.
    pub fn point_at_distance(&self, s: Point, direction: Point, r: f64) -> Result<Point> {
        self.check_interior(s)?;
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidRadius);
        }
        let n = direction.norm();
        if !(n > 0.0) {
            return Err(Error::PointsCoincide);
        }
        let d = direction * (1.0 / n);
        Ok(self.point_at_distance_unchecked(s, d, r))
    }

    pub(crate) fn point_at_distance_unchecked(&self, s: Point, d: Point, r: f64) -> Point {
        let (lf, _) = self.ray_exit(s, d);
        let (lb, _) = self.ray_exit(s, -d);
        let inv_k = (-2.0 * r).exp();
        let lam = lf * lb * -(-2.0 * r).exp_m1() / (lf * inv_k + lb);
        s + d * lam
    }

    /// Hilbert ball as a polygon with a vertex on each of the `2m` spoke
    /// ray-halves from the center; duplicates (ray-halves that coincide)
    /// are merged.
    pub fn hilbert_ball(&self, s: Point, r: f64) -> Result<HilbertBall> {
        self.check_interior(s)?;
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidRadius);
        }
        let mut dirs: Vec<(f64, Point)> = Vec::with_capacity(2 * self.polygon.len());
        for &v in self.polygon.vertices() {
            let d = (s - v).normalized();
            dirs.push((d.y.atan2(d.x), d));
            dirs.push(((-d).y.atan2(-d.x), -d));
        }
        dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pts: Vec<Point> = Vec::with_capacity(dirs.len());
        for (_, d) in dirs {
            let p = self.point_at_distance_unchecked(s, d, r);
            if pts.last().is_none_or(|q: &Point| q.dist(p) > EPS_GEOM) {
                pts.push(p);
            }
        }
        if pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) <= EPS_GEOM {
            pts.pop();
        }
        let boundary = ConvexPolygon::from_region(pts).ok_or(Error::InvalidRadius)?;
        Ok(HilbertBall {
            center: s,
            radius: r,
            boundary,
        })
    }
}
