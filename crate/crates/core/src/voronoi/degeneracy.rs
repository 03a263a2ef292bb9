//! Two-dimensional bisectors, Z-regions and the motion events at which a
//! pair of sites passes through a degenerate configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{meet, HomogeneousPoint, OrientedLine, Point, Segment, EPS_GEOM};
use crate::metric::Domain;
use crate::polygon::{convex_hull, ConvexPolygon};
use crate::sector::{sector_decomposition, Sector, SectorLabels};

/// A degenerate pair found geometrically, before site ids are attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Degeneracy {
    /// Indices `i < j` of the two edges whose lines meet at the vanishing
    /// point.
    pub edges: [usize; 2],
    pub vanishing_point: HomogeneousPoint,
    /// The equidistant regions, one per orientation of the shared pair that
    /// occurs in the arrangement.
    pub regions: Vec<ConvexPolygon>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub pair: [String; 2],
    pub edges: [usize; 2],
    pub vanishing_point: HomogeneousPoint,
    pub regions: Vec<ConvexPolygon>,
    pub tie_assignment: String,
}

impl Degeneracy {
    /// Attaches site ids; the region goes to the lexicographically smaller.
    pub fn report(&self, a: &str, b: &str) -> DegeneracyReport {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        DegeneracyReport {
            pair: [lo.to_string(), hi.to_string()],
            edges: self.edges,
            vanishing_point: self.vanishing_point,
            regions: self.regions.clone(),
            tie_assignment: lo.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZRegion {
    pub s: Point,
    pub t: Point,
    pub quad: ConvexPolygon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub u: f64,
    pub vanishing_point: HomogeneousPoint,
    pub edges: [usize; 2],
}

/// Vanishing points of every pair of edge lines, `i < j`.
pub fn vanishing_points(domain: &Domain) -> Vec<([usize; 2], HomogeneousPoint)> {
    let edges = domain.polygon().edges();
    let mut out = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            out.push(([i, j], meet(edges[i].line.coeffs(), edges[j].line.coeffs())));
        }
    }
    out
}

fn shared_pair_regions(sectors: &[Sector], i: usize, j: usize) -> Vec<ConvexPolygon> {
    let mut out = Vec::new();
    for labels in [SectorLabels::from([i, j, i, j]), SectorLabels::from([j, i, j, i])] {
        let pts: Vec<Point> = sectors
            .iter()
            .filter(|s| s.labels == labels)
            .flat_map(|s| s.region.vertices().iter().copied())
            .collect();
        if let Some(region) = ConvexPolygon::from_region(convex_hull(&pts)) {
            out.push(region);
        }
    }
    out
}

pub(crate) fn detect_in(domain: &Domain, s: Point, t: Point, sectors: &[Sector]) -> Option<Degeneracy> {
    for (edges, o) in vanishing_points(domain) {
        if o.collinearity_residual(s, t) > EPS_GEOM {
            continue;
        }
        let regions = shared_pair_regions(sectors, edges[0], edges[1]);
        if !regions.is_empty() {
            return Some(Degeneracy {
                edges,
                vanishing_point: o,
                regions,
            });
        }
    }
    None
}

/// The pair is degenerate when both sites lie on one line through a
/// vanishing point `O_{i,j}` and the arrangement has a cell whose chords
/// from both sites run from `E_i` to `E_j` (or from `E_j` to `E_i`).
pub fn detect_degenerate_pair(domain: &Domain, s: Point, t: Point) -> Result<Option<Degeneracy>> {
    let sectors = sector_decomposition(domain, s, t)?;
    Ok(detect_in(domain, s, t, &sectors))
}

/// Line through `o` and `p`, oriented so that `side` is on its positive side.
fn line_through_vanishing(o: &HomogeneousPoint, p: Point, side: Point) -> Option<OrientedLine> {
    let q = match o.to_point() {
        Some(q) => q,
        None => p + o.direction(),
    };
    let line = OrientedLine::through(p, q).ok()?;
    Some(if line.eval(side) < 0.0 { line.flipped() } else { line })
}

/// Intersection over all edge pairs of the wedge between the lines
/// `O_{i,j} s` and `O_{i,j} t`, clipped to the domain. Pairs whose vanishing
/// point is collinear with both sites bound nothing and are skipped.
pub fn z_region(domain: &Domain, s: Point, t: Point) -> Result<ZRegion> {
    let sectors = sector_decomposition(domain, s, t)?;
    if detect_in(domain, s, t, &sectors).is_some() {
        return Err(Error::DegeneratePair("s".into(), "t".into()));
    }
    let mut pts = domain.polygon().vertices().to_vec();
    for (_, o) in vanishing_points(domain) {
        if o.collinearity_residual(s, t) <= EPS_GEOM {
            continue;
        }
        for (p, side) in [(s, t), (t, s)] {
            if let Some(line) = line_through_vanishing(&o, p, side) {
                pts = crate::polygon::clip_halfplane(&pts, &line);
            }
        }
    }
    let quad = ConvexPolygon::from_region(pts).ok_or_else(|| Error::TraceFailed("Z-region has no interior".into()))?;
    Ok(ZRegion { s, t, quad })
}

/// Parameters `u ∈ [0, 1]` at which `moving(u)`, `other` and a vanishing
/// point are collinear and the pair is degenerate, ascending.
pub fn crossing_events(domain: &Domain, moving: Segment, other: Point) -> Vec<CrossingEvent> {
    let mut out = Vec::new();
    for (edges, o) in vanishing_points(domain) {
        let f = |p: Point| {
            // det [p 1; other 1; o]
            p.x * (other.y * o.w - o.y) - p.y * (other.x * o.w - o.x) + (other.x * o.y - other.y * o.x)
        };
        let (f0, f1) = (f(moving.a), f(moving.b));
        if f0 == f1 {
            continue;
        }
        let u = f0 / (f0 - f1);
        if !(-1e-12..=1.0 + 1e-12).contains(&u) {
            continue;
        }
        let u = u.clamp(0.0, 1.0);
        let p = moving.at(u);
        if !domain.is_interior(p) || p.dist(other) <= EPS_GEOM {
            continue;
        }
        let Ok(sectors) = sector_decomposition(domain, p, other) else {
            continue;
        };
        if o.collinearity_residual(p, other) > EPS_GEOM {
            continue;
        }
        if shared_pair_regions(&sectors, edges[0], edges[1]).is_empty() {
            continue;
        }
        out.push(CrossingEvent {
            u,
            vanishing_point: o,
            edges,
        });
    }
    out.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.edges.cmp(&b.edges)));
    out
}
