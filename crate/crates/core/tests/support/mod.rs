//! Random fixtures shared by the integration suites.

#![allow(dead_code)]

use hilbert_core::{ConvexPolygon, Domain, Point, Site};
use rand::Rng;

/// Convex polygon with `m` vertices on a random ellipse, counter-clockwise.
pub fn random_polygon<R: Rng>(rng: &mut R, m: usize) -> ConvexPolygon {
    loop {
        let min_gap = 0.3 * std::f64::consts::TAU / m as f64;
        let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = (0..m).all(|i| {
            let next = if i + 1 < m {
                angles[i + 1]
            } else {
                angles[0] + std::f64::consts::TAU
            };
            next - angles[i] >= min_gap
        });
        if !gaps_ok {
            continue;
        }
        let (ax, ay) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let rot = rng.gen_range(0.0..std::f64::consts::PI);
        let (c, s) = (rot.cos(), rot.sin());
        let shift = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let pts: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let (x, y) = (ax * a.cos(), ay * a.sin());
                Point::new(c * x - s * y, s * x + c * y) + shift
            })
            .collect();
        if let Ok(p) = ConvexPolygon::new(pts) {
            return p;
        }
    }
}

/// Uniform interior point at inward distance at least `margin · diameter`,
/// relaxed to half the centroid's inward distance on thin polygons.
pub fn random_interior<R: Rng>(rng: &mut R, domain: &Domain, margin: f64) -> Point {
    let poly = domain.polygon();
    let (lo, hi) = poly.bbox();
    let need = (margin * domain.diameter()).min(0.5 * poly.inward_distance(poly.centroid()));
    loop {
        let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if domain.polygon().inward_distance(p) >= need {
            return p;
        }
    }
}

/// `n` interior sites, pairwise at least `sep · diameter` apart.
pub fn random_sites<R: Rng>(rng: &mut R, domain: &Domain, n: usize, margin: f64, sep: f64) -> Vec<Site> {
    let mut out: Vec<Site> = Vec::new();
    while out.len() < n {
        let p = random_interior(rng, domain, margin);
        if out.iter().all(|s| s.pos.dist(p) >= sep * domain.diameter()) {
            out.push(Site::new(format!("s{:02}", out.len()), p));
        }
    }
    out
}

/// Uniform point of a convex polygon by fan triangulation.
pub fn random_in_polygon<R: Rng>(rng: &mut R, poly: &ConvexPolygon) -> Point {
    let v = poly.vertices();
    let areas: Vec<f64> = (1..v.len() - 1)
        .map(|i| 0.5 * (v[i] - v[0]).cross(v[i + 1] - v[0]))
        .collect();
    let total: f64 = areas.iter().sum();
    let mut pick = rng.gen_range(0.0..total);
    let mut i = 0;
    while i + 1 < areas.len() && pick > areas[i] {
        pick -= areas[i];
        i += 1;
    }
    let (mut u, mut w) = (rng.gen::<f64>(), rng.gen::<f64>());
    if u + w > 1.0 {
        u = 1.0 - u;
        w = 1.0 - w;
    }
    v[0] + (v[i + 1] - v[0]) * u + (v[i + 2] - v[0]) * w
}
