//! Shared fixtures for the benchmarks.

use hilbert_core::{ConvexPolygon, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Regular `m`-gon inscribed in the unit circle, counter-clockwise.
pub fn regular_polygon(m: usize) -> ConvexPolygon {
    let pts = (0..m)
        .map(|i| Point::from_angle(std::f64::consts::TAU * i as f64 / m as f64))
        .collect();
    ConvexPolygon::new(pts).expect("regular polygon is convex")
}

/// Deterministic interior points of the unit disk, away from the boundary
/// of any regular polygon with at least 6 sides.
pub fn interior_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = 0.7 * rng.gen::<f64>().sqrt();
            Point::from_angle(std::f64::consts::TAU * rng.gen::<f64>()) * r
        })
        .collect()
}
