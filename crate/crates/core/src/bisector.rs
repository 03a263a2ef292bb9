//! Bisector tracing: one conic per sector of the two-site arrangement,
//! clipped to the sector, sampled along a pencil of rays from `s` and
//! stitched into a single curve from boundary to boundary.
//!
//! Every ray from `s` meets the bisector at most once (cells are star
//! shaped about their site), so within a sector each arc is found between
//! two consecutive conic/sector-edge crossings, ordered by angle around
//! `s`, and sampled by solving the conic along intermediate rays.

use crate::conic::{conic_from_lines, quadratic_roots, ConicCoefficients};
use crate::error::{Error, Result};
use crate::geometry::{segment_distance, Point, EPS_GEOM};
use crate::metric::Domain;
use crate::polygon::ConvexPolygon;
use crate::sector::{sector_decomposition, Sector};
use crate::voronoi::degeneracy::detect_in;

/// Maximum gap between consecutive pieces of a traced bisector.
pub const EPS_STITCH: f64 = 1e-6;

const MIN_DEPTH: u32 = 2;
const MAX_DEPTH: u32 = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct BisectorPiece {
    pub sector: Sector,
    pub conic: ConicCoefficients,
    /// Samples in counter-clockwise order around `s`.
    pub polyline: Vec<Point>,
    /// The piece runs along a sector edge that lies on the conic.
    pub on_sector_boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectorCurve {
    pub s: Point,
    pub t: Point,
    pub pieces: Vec<BisectorPiece>,
    pub endpoints: [Point; 2],
}

impl BisectorCurve {
    /// All samples as one polyline, shared piece endpoints merged.
    pub fn polyline(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for piece in &self.pieces {
            for &p in &piece.polyline {
                if out.last().is_none_or(|q: &Point| q.dist(p) > 1e-12) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Largest `|H(s,p) − H(t,p)|` over the samples interior to the domain.
    pub fn max_residual(&self, domain: &Domain) -> f64 {
        self.pieces
            .iter()
            .flat_map(|pc| pc.polyline.iter())
            .filter(|&&p| domain.is_interior(p))
            .map(|&p| (domain.distance_unchecked(self.s, p) - domain.distance_unchecked(self.t, p)).abs())
            .fold(0.0, f64::max)
    }
}

/// Bisector conic of a sector, from the inward edge lines of the domain.
pub fn bisector_conic(domain: &Domain, sector: &Sector) -> Result<ConicCoefficients> {
    let line = |i: usize| domain.polygon().edge(i).inward.coeffs();
    let l = sector.labels;
    conic_from_lines(line(l.a), line(l.b), line(l.c), line(l.d), sector.s, sector.t)
}

/// The part of the sector conic that can meet the open domain. When both
/// chords share an edge, the conic contains that edge's line as a factor,
/// which only touches the boundary; the remaining linear factor is traced
/// instead. `None` when both pairs are shared and nothing is left.
fn tracing_conic(domain: &Domain, sector: &Sector, conic: &ConicCoefficients) -> Option<ConicCoefficients> {
    let line = |i: usize| domain.polygon().edge(i).inward.coeffs();
    let l = sector.labels;
    let k = conic.k;
    let linear = |x: [f64; 3], y: [f64; 3]| ConicCoefficients {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: x[0] - k * y[0],
        e: x[1] - k * y[1],
        f: x[2] - k * y[2],
        k,
    };
    match (l.a == l.c, l.b == l.d) {
        (true, true) => None,
        // (b·p)(c·p) − k(a·p)(b·p) = (b·p)((c·p) − k(a·p))
        (false, true) => Some(linear(line(l.c), line(l.a))),
        // (a·p)((b·p) − k(d·p))
        (true, false) => Some(linear(line(l.b), line(l.d))),
        (false, false) => Some(*conic),
    }
}

/// Rays from `s`, angles measured from the direction toward `t`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pencil {
    pub s: Point,
    u: Point,
}

impl Pencil {
    pub fn new(s: Point, toward: Point) -> Pencil {
        Pencil {
            s,
            u: (toward - s).normalized(),
        }
    }

    pub fn angle(&self, p: Point) -> f64 {
        let v = p - self.s;
        self.u.cross(v).atan2(self.u.dot(v))
    }

    pub fn dir(&self, theta: f64) -> Point {
        let (sn, cs) = theta.sin_cos();
        Point::new(self.u.x * cs - self.u.y * sn, self.u.x * sn + self.u.y * cs)
    }
}

/// Parameter interval of the ray `s + λ d`, `λ ≥ 0`, inside `region`.
pub(crate) fn ray_interval(region: &ConvexPolygon, s: Point, d: Point, tol: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for e in region.edges() {
        let v = e.inward.eval(s);
        let r = e.inward.normal().dot(d);
        if r == 0.0 {
            if v < -tol {
                return None;
            }
            continue;
        }
        let lam = (-tol - v) / r;
        if r > 0.0 {
            lo = lo.max(lam);
        } else {
            hi = hi.min(lam);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

struct SectorTracer<'a> {
    region: &'a ConvexPolygon,
    conic: ConicCoefficients,
    pencil: Pencil,
    tol: f64,
    sag_tol: f64,
}

impl SectorTracer<'_> {
    fn root_at(&self, theta: f64) -> Option<Point> {
        let d = self.pencil.dir(theta);
        let (lo, hi) = ray_interval(self.region, self.pencil.s, d, self.tol)?;
        let (a, b, c) = self.conic.along(self.pencil.s, d);
        let mid = 0.5 * (lo + hi);
        quadratic_roots(a, b, c)
            .into_iter()
            .filter(|&l| l >= lo && l <= hi)
            .min_by(|x, y| (x - mid).abs().total_cmp(&(y - mid).abs()))
            .map(|l| self.pencil.s + d * l)
    }

    /// Points where the conic meets the region boundary, and whether some
    /// region edge lies on the conic.
    fn crossings(&self) -> (Vec<Point>, bool) {
        let verts = self.region.vertices();
        let n = verts.len();
        let cn = self.conic.norm();
        let mut pts: Vec<Point> = Vec::new();
        let mut on_edge = false;
        for i in 0..n {
            let (p0, p1) = (verts[i], verts[(i + 1) % n]);
            let (a, b, c) = self.conic.along(p0, p1 - p0);
            let scale = cn * (1.0 + p0.dot(p0) + p1.dot(p1));
            if a.abs().max(b.abs()).max(c.abs()) <= 1e-12 * scale {
                on_edge = true;
                pts.push(p0);
                pts.push(p1);
                continue;
            }
            for mu in quadratic_roots(a, b, c) {
                if (-1e-9..=1.0 + 1e-9).contains(&mu) {
                    pts.push(p0.lerp(p1, mu.clamp(0.0, 1.0)));
                }
            }
        }
        let mut keyed: Vec<(f64, Point)> = pts.into_iter().map(|p| (self.pencil.angle(p), p)).collect();
        keyed.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<Point> = Vec::new();
        for (_, p) in keyed {
            if !out.iter().any(|q| q.dist(p) <= self.tol) {
                out.push(p);
            }
        }
        out.sort_by(|x, y| self.pencil.angle(*x).total_cmp(&self.pencil.angle(*y)));
        (out, on_edge)
    }

    fn refine(&self, ta: f64, pa: Point, tb: f64, pb: Point, depth: u32, out: &mut Vec<Point>) {
        let tm = 0.5 * (ta + tb);
        let Some(pm) = self.root_at(tm) else {
            return;
        };
        let sag = segment_distance(pa, pb, pm);
        if depth < MIN_DEPTH || (sag > self.sag_tol && depth < MAX_DEPTH) {
            self.refine(ta, pa, tm, pm, depth + 1, out);
            out.push(pm);
            self.refine(tm, pm, tb, pb, depth + 1, out);
        }
    }

    fn arcs(&self) -> (Vec<Vec<Point>>, bool) {
        let (cross, on_edge) = self.crossings();
        // Crossings on one ray from `s` (a radial region edge) are grouped;
        // at most one of them continues an arc on either side.
        let mut clusters: Vec<(f64, Vec<Point>)> = Vec::new();
        for p in cross {
            let a = self.pencil.angle(p);
            match clusters.last_mut() {
                Some((ca, pts)) if a - *ca <= 1e-13 => pts.push(p),
                _ => clusters.push((a, vec![p])),
            }
        }
        let nearest = |pts: &[Point], q: Point| *pts.iter().min_by(|x, y| x.dist(q).total_cmp(&y.dist(q))).unwrap();
        let mut arcs = Vec::new();
        for w in clusters.windows(2) {
            let ((ta, ref ca), (tb, ref cb)) = (w[0].clone(), w[1].clone());
            let span = tb - ta;
            let Some(pm) = self.root_at(ta + 0.5 * span) else {
                continue;
            };
            let pa = nearest(ca, self.root_at(ta + 1e-6 * span).unwrap_or(pm));
            let pb = nearest(cb, self.root_at(tb - 1e-6 * span).unwrap_or(pm));
            let (ta, tb) = (self.pencil.angle(pa), self.pencil.angle(pb));
            let mut poly = vec![pa];
            self.refine(ta, pa, tb, pb, 0, &mut poly);
            poly.push(pb);
            arcs.push(poly);
        }
        (arcs, on_edge)
    }
}

/// Traces the bisector of `s` and `t` as a curve from boundary to boundary,
/// ordered counter-clockwise around `s`.
pub fn trace_bisector(domain: &Domain, s: Point, t: Point) -> Result<BisectorCurve> {
    let sectors = sector_decomposition(domain, s, t)?;
    if detect_in(domain, s, t, &sectors).is_some() {
        return Err(Error::DegeneratePair("s".into(), "t".into()));
    }
    trace_with_sectors(domain, s, t, sectors)
}

pub fn trace_with_sectors(domain: &Domain, s: Point, t: Point, sectors: Vec<Sector>) -> Result<BisectorCurve> {
    let pencil = Pencil::new(s, t);
    let tol = 1e-9 * domain.diameter();
    let sag_tol = 0.02 * domain.sampling_tol();
    let mut pieces: Vec<(f64, BisectorPiece)> = Vec::new();
    for sector in sectors {
        let conic = bisector_conic(domain, &sector)?;
        let Some(traced) = tracing_conic(domain, &sector, &conic) else {
            continue;
        };
        let tracer = SectorTracer {
            region: &sector.region,
            conic: traced,
            pencil,
            tol,
            sag_tol,
        };
        let (arcs, on_edge) = tracer.arcs();
        for polyline in arcs {
            let key = pencil.angle(polyline[0]);
            pieces.push((
                key,
                BisectorPiece {
                    sector: sector.clone(),
                    conic,
                    polyline,
                    on_sector_boundary: on_edge,
                },
            ));
        }
    }
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut kept: Vec<BisectorPiece> = Vec::new();
    let mut end_angle = f64::NEG_INFINITY;
    for (start, piece) in pieces {
        let last = *piece.polyline.last().unwrap();
        if start < end_angle - 1e-9 {
            // Same arc reported by both sectors sharing an edge on the conic.
            continue;
        }
        if let Some(prev) = kept.last() {
            let gap = prev.polyline.last().unwrap().dist(piece.polyline[0]);
            if gap > EPS_STITCH {
                return Err(Error::TraceFailed(format!(
                    "gap of {gap:e} between bisector pieces at angle {start}"
                )));
            }
        }
        end_angle = pencil.angle(last);
        kept.push(piece);
    }
    let (Some(first), Some(last)) = (kept.first(), kept.last()) else {
        return Err(Error::TraceFailed("no bisector arc found".into()));
    };
    let endpoints = [first.polyline[0], *last.polyline.last().unwrap()];
    let boundary_tol = (1e-7 * domain.diameter()).max(EPS_GEOM);
    for e in endpoints {
        if domain.polygon().inward_distance(e).abs() > boundary_tol {
            return Err(Error::TraceFailed(format!(
                "endpoint ({}, {}) is not on the boundary",
                e.x, e.y
            )));
        }
    }
    Ok(BisectorCurve {
        s,
        t,
        pieces: kept,
        endpoints,
    })
}
