//! Planar primitives: points, homogeneous points, lines, segments and the
//! predicates built on them.
//!
//! All arithmetic is `f64`. Predicates compare against [`EPS_GEOM`], matrix
//! and determinant tests against [`EPS_SINGULAR`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for orientation and incidence predicates.
pub const EPS_GEOM: f64 = 1e-9;
/// Tolerance for determinants, pivots and homogeneous weights.
pub const EPS_SINGULAR: f64 = 1e-12;

#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, u: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * u, self.y + (o.y - self.y) * u)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn from_angle(theta: f64) -> Point {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn to_homogeneous(self) -> HomogeneousPoint {
        HomogeneousPoint {
            x: self.x,
            y: self.y,
            w: 1.0,
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A point of the projective plane. `w == 0` encodes a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousPoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl HomogeneousPoint {
    pub fn new(x: f64, y: f64, w: f64) -> Self {
        HomogeneousPoint { x, y, w }
    }

    fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.w * self.w).sqrt()
    }

    /// Rescaled to unit Euclidean norm with a non-negative weight.
    pub fn normalized(&self) -> HomogeneousPoint {
        let n = self.norm();
        let s = if self.w < 0.0 { -1.0 / n } else { 1.0 / n };
        HomogeneousPoint::new(self.x * s, self.y * s, self.w * s)
    }

    pub fn is_at_infinity(&self) -> bool {
        self.w.abs() <= EPS_SINGULAR * self.norm()
    }

    /// Affine point, or `None` for points at infinity.
    pub fn to_point(&self) -> Option<Point> {
        if self.is_at_infinity() {
            None
        } else {
            Some(Point::new(self.x / self.w, self.y / self.w))
        }
    }

    /// Direction of a point at infinity (unit vector).
    pub fn direction(&self) -> Point {
        Point::new(self.x, self.y).normalized()
    }

    /// Residual of the incidence test with the line through `a` and `b`:
    /// the sine of the angle between the line and the direction from `a`
    /// (or `b`) toward this point. Zero when the three are collinear.
    pub fn collinearity_residual(&self, a: Point, b: Point) -> f64 {
        let d = (b - a).normalized();
        if let Some(o) = self.to_point() {
            // Use the farther of the two anchors for a better-conditioned angle.
            let anchor = if o.dist(a) > o.dist(b) { a } else { b };
            let v = o - anchor;
            let n = v.norm();
            if n == 0.0 {
                return 0.0;
            }
            (d.cross(v) / n).abs()
        } else {
            d.cross(self.direction()).abs()
        }
    }
}

/// The line `u·x + v·y + l = 0`, stored with `u² + v² = 1` and the first
/// non-zero of `(u, v)` positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub u: f64,
    pub v: f64,
    pub l: f64,
}

impl Line {
    pub fn new(u: f64, v: f64, l: f64) -> Result<Line> {
        let n = u.hypot(v);
        if !(n > EPS_SINGULAR) || !l.is_finite() {
            return Err(Error::InvalidPolygon("line with zero normal".into()));
        }
        let (mut u, mut v, mut l) = (u / n, v / n, l / n);
        if u < -EPS_SINGULAR || (u.abs() <= EPS_SINGULAR && v < 0.0) {
            u = -u;
            v = -v;
            l = -l;
        }
        Ok(Line { u, v, l })
    }

    pub fn through(a: Point, b: Point) -> Result<Line> {
        let o = OrientedLine::through(a, b)?;
        Line::new(o.u, o.v, o.l)
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.u * p.x + self.v * p.y + self.l
    }

    pub fn coeffs(&self) -> [f64; 3] {
        [self.u, self.v, self.l]
    }

    pub fn approx_eq(&self, o: &Line, eps: f64) -> bool {
        (self.u - o.u).abs() <= eps && (self.v - o.v).abs() <= eps && (self.l - o.l).abs() <= eps
    }
}

/// A line with a unit normal and a chosen positive side. For the edge
/// `a → b` of a counter-clockwise polygon the positive side is the interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub u: f64,
    pub v: f64,
    pub l: f64,
}

impl OrientedLine {
    /// Positive to the left of `a → b`.
    pub fn through(a: Point, b: Point) -> Result<OrientedLine> {
        let u = a.y - b.y;
        let v = b.x - a.x;
        let n = u.hypot(v);
        if !(n > EPS_SINGULAR) {
            return Err(Error::CoincidentPoints);
        }
        let l = a.x * b.y - a.y * b.x;
        Ok(OrientedLine {
            u: u / n,
            v: v / n,
            l: l / n,
        })
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.u * p.x + self.v * p.y + self.l
    }

    pub fn normal(&self) -> Point {
        Point::new(self.u, self.v)
    }

    pub fn coeffs(&self) -> [f64; 3] {
        [self.u, self.v, self.l]
    }

    pub fn flipped(&self) -> OrientedLine {
        OrientedLine {
            u: -self.u,
            v: -self.v,
            l: -self.l,
        }
    }

    pub fn to_line(&self) -> Line {
        // Unit normal by construction.
        Line::new(self.u, self.v, self.l).expect("oriented line has a unit normal")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Segment> {
        if a.dist(b) <= EPS_GEOM {
            return Err(Error::CoincidentPoints);
        }
        Ok(Segment { a, b })
    }

    pub fn at(&self, u: f64) -> Point {
        self.a.lerp(self.b, u)
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        segment_distance(self.a, self.b, p)
    }
}

/// Euclidean distance from `p` to the closed segment `ab`.
pub fn segment_distance(a: Point, b: Point, p: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let u = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

/// Doubled signed area of triangle `pqr`.
pub fn orient2d(p: Point, q: Point, r: Point) -> f64 {
    (q - p).cross(r - p)
}

pub fn orient(p: Point, q: Point, r: Point) -> Orientation {
    let a = orient2d(p, q, r);
    if a.abs() <= EPS_GEOM {
        Orientation::Collinear
    } else if a > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    }
}

/// Scale-free collinearity residual: distance of the remaining point from
/// the line through the farthest pair.
pub fn collinearity_residual(pts: &[Point]) -> f64 {
    let mut best = (0, 0, -1.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].dist(pts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (i, j, d) = best;
    if d <= 0.0 {
        return 0.0;
    }
    let dir = (pts[j] - pts[i]) * (1.0 / d);
    pts.iter().map(|&p| dir.cross(p - pts[i]).abs()).fold(0.0, f64::max)
}

/// Homogeneous intersection of two lines; a point at infinity when parallel.
pub fn line_intersection(l1: &Line, l2: &Line) -> Result<HomogeneousPoint> {
    if l1.approx_eq(l2, EPS_GEOM) {
        return Err(Error::CoincidentLines);
    }
    Ok(meet(l1.coeffs(), l2.coeffs()))
}

/// Cross product of two coefficient triples: the meet of two lines, or the
/// join of two homogeneous points.
pub fn meet(a: [f64; 3], b: [f64; 3]) -> HomogeneousPoint {
    let x = a[1] * b[2] - a[2] * b[1];
    let y = a[2] * b[0] - a[0] * b[2];
    let mut w = a[0] * b[1] - a[1] * b[0];
    if w.abs() <= EPS_SINGULAR * (x.hypot(y)) {
        w = 0.0;
    }
    HomogeneousPoint::new(x, y, w)
}

pub fn point_line_distance(line: &Line, p: Point) -> f64 {
    line.eval(p).abs()
}

/// Signed cross ratio `(a, b; c, d) = (ac · bd) / (bc · ad)` of four distinct
/// collinear points. Distances are signed along one orientation of the
/// common line, so the choice of orientation cancels out.
pub fn cross_ratio(a: Point, b: Point, c: Point, d: Point) -> Result<f64> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].dist(pts[j]) <= EPS_GEOM {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    if collinearity_residual(&pts) > EPS_GEOM {
        return Err(Error::NotCollinear);
    }
    // Orient along the farthest pair for conditioning.
    let (mut dir, mut far) = (Point::default(), -1.0);
    for i in 0..4 {
        for j in i + 1..4 {
            let v = pts[j] - pts[i];
            if v.norm() > far {
                far = v.norm();
                dir = v;
            }
        }
    }
    let dir = dir.normalized();
    let t = |p: Point| (p - a).dot(dir);
    let (ta, tb, tc, td) = (t(a), t(b), t(c), t(d));
    Ok(((ta - tc) * (tb - td)) / ((tb - tc) * (ta - td)))
}
