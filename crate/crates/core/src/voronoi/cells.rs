//! Two-site Voronoi cells: each site's half of the domain, star-shaped about
//! the site, with every boundary edge tagged by where it came from.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bisector::{bisector_conic, trace_with_sectors, BisectorCurve};
use crate::error::Result;
use crate::geometry::{segment_distance, Point};
use crate::metric::Domain;
use crate::sector::{locate, sector_decomposition, Sector};
use crate::star::StarPolygon;

use super::degeneracy::{detect_in, Degeneracy};

/// Distance slack under which two sites count as equidistant; the point
/// then belongs to the lexicographically smaller id.
pub const TIE_TOL: f64 = 1e-10;

/// Sagitta bound for radially sampled cell boundaries, relative to the
/// domain diameter.
const RADIAL_TOL_REL: f64 = 1e-6;

/// Where a cell boundary edge came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeSource {
    /// A piece of the domain boundary.
    Boundary { edge: usize },
    /// A conic piece of the bisector of `pair` in the sector with edges
    /// `sector_edges`.
    Bisector {
        pair: SitePair,
        sector_edges: [usize; 4],
        conic: [f64; 6],
        k: f64,
    },
    /// The rim of the two-dimensional equidistant region of a degenerate
    /// pair, or any other edge of a cell built for such a pair.
    DegenerateRegion {
        pair: SitePair,
        sector_edges: [usize; 4],
        conic: [f64; 6],
        k: f64,
    },
}

/// Site ids of a bisector, shared by every edge it contributes.
pub type SitePair = Arc<[String; 2]>;

pub type Cell = StarPolygon<EdgeSource>;

/// The domain as a star polygon about `center`.
pub fn domain_cell(domain: &Domain, center: Point) -> Cell {
    let verts = domain.polygon().vertices().to_vec();
    let sources = (0..verts.len()).map(|edge| EdgeSource::Boundary { edge }).collect();
    StarPolygon::new(center, verts, sources)
}

fn bisector_source(domain: &Domain, pair: &SitePair, sector: &Sector, degenerate: bool) -> EdgeSource {
    let l = sector.labels;
    let (conic, k) = match bisector_conic(domain, sector) {
        Ok(c) => (c.coeffs(), c.k),
        Err(_) => ([0.0; 6], f64::NAN),
    };
    let sector_edges = [l.a, l.b, l.c, l.d];
    if degenerate {
        EdgeSource::DegenerateRegion {
            pair: pair.clone(),
            sector_edges,
            conic,
            k,
        }
    } else {
        EdgeSource::Bisector {
            pair: pair.clone(),
            sector_edges,
            conic,
            k,
        }
    }
}

/// Edge of the domain containing boundary point `p`, choosing the edge that
/// continues counter-clockwise from `p` when `p` is a vertex.
fn boundary_edge_forward(domain: &Domain, p: Point) -> usize {
    let poly = domain.polygon();
    let m = poly.len();
    let tol = 1e-9 * domain.diameter();
    for i in 0..m {
        if poly.vertex(i).dist(p) <= tol {
            return i;
        }
    }
    poly.nearest_edge(p)
}

/// Domain vertices met walking counter-clockwise along the boundary from
/// `from` to `to`, both boundary points.
fn boundary_chain(domain: &Domain, from: Point, to: Point) -> Vec<usize> {
    let poly = domain.polygon();
    let m = poly.len();
    let ef = boundary_edge_forward(domain, from);
    let et = poly.nearest_edge(to);
    let tol = 1e-9 * domain.diameter();
    let mut count = (et + m - ef) % m;
    if count == 0 {
        // Same edge: empty chain when `to` lies ahead of `from`.
        let a = poly.vertex(ef);
        let dir = poly.vertex((ef + 1) % m) - a;
        let ahead = (to - a).dot(dir) >= (from - a).dot(dir) - tol;
        if !ahead {
            count = m;
        }
    }
    (1..=count).map(|k| (ef + k) % m).collect()
}

/// The halves of the domain for `s` and `t` separated by a traced bisector.
fn halves_from_curve(domain: &Domain, curve: &BisectorCurve, pair: &SitePair) -> (Cell, Cell) {
    let mut pts: Vec<Point> = Vec::new();
    let mut segs: Vec<EdgeSource> = Vec::new();
    for piece in &curve.pieces {
        let src = bisector_source(domain, pair, &piece.sector, false);
        for &p in &piece.polyline {
            if let Some(last) = pts.last() {
                if last.dist(p) <= 1e-13 * domain.diameter() {
                    continue;
                }
                segs.push(src.clone());
            }
            pts.push(p);
        }
    }
    let (p0, pn) = (pts[0], *pts.last().unwrap());
    let boundary = |e: usize| EdgeSource::Boundary { edge: e };

    // Half of s: the bisector from P0 to Pn, then the boundary back to P0.
    let mut sv = pts.clone();
    let mut ss = segs.clone();
    ss.push(boundary(boundary_edge_forward(domain, pn)));
    for v in boundary_chain(domain, pn, p0) {
        sv.push(domain.polygon().vertex(v));
        ss.push(boundary(v));
    }

    // Half of t: the boundary from P0 to Pn, then the bisector backwards.
    let mut tv = vec![p0];
    let mut ts = vec![boundary(boundary_edge_forward(domain, p0))];
    for v in boundary_chain(domain, p0, pn) {
        tv.push(domain.polygon().vertex(v));
        ts.push(boundary(v));
    }
    for j in (1..pts.len()).rev() {
        tv.push(pts[j]);
        ts.push(segs[j - 1].clone());
    }
    (StarPolygon::new(curve.s, sv, ss), StarPolygon::new(curve.t, tv, ts))
}

/// Radius along the ray from `center` at which membership ends, found by
/// bisection; membership is an interval starting at the center.
fn radial_extent(domain: &Domain, center: Point, d: Point, member: &dyn Fn(Point) -> bool) -> Point {
    let (lam_exit, _) = domain.ray_exit(center, d);
    let far = lam_exit * (1.0 - 1e-12);
    if member(center + d * far) {
        return center + d * lam_exit;
    }
    let (mut lo, mut hi) = (0.0, far);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if member(center + d * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * lam_exit {
            break;
        }
    }
    center + d * (0.5 * (lo + hi))
}

/// Samples a star-shaped region's boundary along rays from `center`,
/// refining until consecutive samples are within the sagitta tolerance
/// or angularly indistinguishable.
fn sample_star(domain: &Domain, center: Point, seeds: &[f64], member: &dyn Fn(Point) -> bool) -> Vec<Point> {
    let tol = RADIAL_TOL_REL * domain.diameter();
    let at = |theta: f64| radial_extent(domain, center, Point::from_angle(theta), member);
    let mut out = Vec::new();
    fn refine(
        at: &dyn Fn(f64) -> Point,
        (ta, pa): (f64, Point),
        (tb, pb): (f64, Point),
        tol: f64,
        depth: u32,
        out: &mut Vec<Point>,
    ) {
        if tb - ta <= 1e-11 || depth > 48 {
            return;
        }
        let tm = 0.5 * (ta + tb);
        let pm = at(tm);
        if segment_distance(pa, pb, pm) > tol || depth < 1 {
            refine(at, (ta, pa), (tm, pm), tol, depth + 1, out);
            out.push(pm);
            refine(at, (tm, pm), (tb, pb), tol, depth + 1, out);
        }
    }
    let n = seeds.len();
    let pts: Vec<Point> = seeds.iter().map(|&t| at(t)).collect();
    for i in 0..n {
        let (ta, tb) = (
            seeds[i],
            if i + 1 < n {
                seeds[i + 1]
            } else {
                seeds[0] + std::f64::consts::TAU
            },
        );
        out.push(pts[i]);
        refine(&at, (ta, pts[i]), (tb, pts[(i + 1) % n]), tol, 0, &mut out);
    }
    out
}

/// Seed directions from `center`: a uniform fan plus every vertex of the
/// sector arrangement, so corners of the region are hit exactly.
fn seed_angles(center: Point, sectors: &[Sector]) -> Vec<f64> {
    let mut a: Vec<f64> = (0..64).map(|i| i as f64 * std::f64::consts::TAU / 64.0).collect();
    for sec in sectors {
        for &v in sec.region.vertices() {
            let d = v - center;
            if d.norm() > 0.0 {
                a.push(d.y.atan2(d.x).rem_euclid(std::f64::consts::TAU));
            }
        }
    }
    a.sort_by(f64::total_cmp);
    a.dedup_by(|x, y| *x - *y <= 1e-12);
    a
}

fn tag_radial_cell(
    domain: &Domain,
    center: Point,
    pts: Vec<Point>,
    sectors: &[Sector],
    pair: &SitePair,
    deg: &Degeneracy,
) -> Cell {
    let n = pts.len();
    let btol = 1e-9 * domain.diameter();
    let poly = domain.polygon();
    let sources = (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let m = a.lerp(b, 0.5);
            if poly.inward_distance(a).abs() <= btol
                && poly.inward_distance(b).abs() <= btol
                && poly.inward_distance(m) <= btol
            {
                return EdgeSource::Boundary {
                    edge: poly.nearest_edge(m),
                };
            }
            let sec = &sectors[locate(sectors, m).unwrap_or(0)];
            let shared = sec.labels.is_shared_pair() && {
                let mut e = [sec.labels.a, sec.labels.b];
                e.sort_unstable();
                e == deg.edges
            };
            bisector_source(
                domain,
                pair,
                sec,
                shared || deg.regions.iter().any(|r| r.inward_distance(m).abs() <= btol),
            )
        })
        .collect();
    StarPolygon::new(center, pts, sources)
}

/// Both sites' halves for a degenerate pair: the winner (smaller id) keeps
/// the equidistant region. Boundaries are found ray by ray.
fn halves_degenerate(
    domain: &Domain,
    (sid, s): (&str, Point),
    (tid, t): (&str, Point),
    sectors: &[Sector],
    deg: &Degeneracy,
) -> (Cell, Cell) {
    let pair = Arc::new(pair_of(sid, tid));
    let s_wins = sid <= tid;
    let diff = |c: Point, o: Point, p: Point| domain.distance_unchecked(c, p) - domain.distance_unchecked(o, p);
    let member_s = |p: Point| {
        if s_wins {
            diff(s, t, p) <= TIE_TOL
        } else {
            diff(s, t, p) < -TIE_TOL
        }
    };
    let member_t = |p: Point| {
        if s_wins {
            diff(t, s, p) < -TIE_TOL
        } else {
            diff(t, s, p) <= TIE_TOL
        }
    };
    let ps = sample_star(domain, s, &seed_angles(s, sectors), &member_s);
    let pt = sample_star(domain, t, &seed_angles(t, sectors), &member_t);
    (
        tag_radial_cell(domain, s, ps, sectors, &pair, deg),
        tag_radial_cell(domain, t, pt, sectors, &pair, deg),
    )
}

/// The two ids in lexicographic order.
pub fn pair_of(a: &str, b: &str) -> [String; 2] {
    if a <= b {
        [a.to_string(), b.to_string()]
    } else {
        [b.to_string(), a.to_string()]
    }
}

/// The two-site diagram of `s` and `t`: each site's half of the domain,
/// and the degeneracy if the pair has a two-dimensional bisector. The
/// result does not depend on argument order.
pub fn two_site_cells(
    domain: &Domain,
    (sid, s): (&str, Point),
    (tid, t): (&str, Point),
) -> Result<(Cell, Cell, Option<Degeneracy>)> {
    if tid < sid {
        let (ht, hs, deg) = two_site_cells_ordered(domain, (tid, t), (sid, s))?;
        return Ok((hs, ht, deg));
    }
    two_site_cells_ordered(domain, (sid, s), (tid, t))
}

fn two_site_cells_ordered(
    domain: &Domain,
    (sid, s): (&str, Point),
    (tid, t): (&str, Point),
) -> Result<(Cell, Cell, Option<Degeneracy>)> {
    let sectors = sector_decomposition(domain, s, t)?;
    if let Some(deg) = detect_in(domain, s, t, &sectors) {
        let (hs, ht) = halves_degenerate(domain, (sid, s), (tid, t), &sectors, &deg);
        return Ok((hs, ht, Some(deg)));
    }
    let curve = trace_with_sectors(domain, s, t, sectors)?;
    let (hs, ht) = halves_from_curve(domain, &curve, &Arc::new(pair_of(sid, tid)));
    Ok((hs, ht, None))
}
