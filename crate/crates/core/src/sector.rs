//! Sector decomposition: the arrangement cut out of the domain by the spokes
//! of two sites, each cell labeled with the four edges its chords hit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{OrientedLine, Point, EPS_GEOM};
use crate::metric::Domain;
use crate::polygon::ConvexPolygon;

/// Edge labels of a sector: the chord from `s` through a point `p` of the
/// sector meets edge `a` behind `s` and edge `b` beyond `p`; the chord from
/// `t` meets `c` behind `t` and `d` beyond `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 4]", into = "[usize; 4]")]
pub struct SectorLabels {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl From<[usize; 4]> for SectorLabels {
    fn from(v: [usize; 4]) -> Self {
        SectorLabels {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
        }
    }
}

impl From<SectorLabels> for [usize; 4] {
    fn from(l: SectorLabels) -> Self {
        [l.a, l.b, l.c, l.d]
    }
}

impl SectorLabels {
    /// Labels of the point `p` with respect to sites `s` and `t`.
    pub fn at(domain: &Domain, s: Point, t: Point, p: Point) -> SectorLabels {
        let (a, b) = domain.chord_edges(s, p);
        let (c, d) = domain.chord_edges(t, p);
        SectorLabels { a, b, c, d }
    }

    /// Number of distinct edges among the four labels.
    pub fn distinct_edges(&self) -> usize {
        let mut v = [self.a, self.b, self.c, self.d];
        v.sort_unstable();
        1 + v.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// The same two edges are behind and in front of both sites, the shape
    /// of an equidistant two-dimensional region.
    pub fn is_shared_pair(&self) -> bool {
        self.a == self.c && self.b == self.d && self.a != self.b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub region: ConvexPolygon,
    pub labels: SectorLabels,
    pub s: Point,
    pub t: Point,
}

impl Sector {
    pub fn edge_a(&self) -> usize {
        self.labels.a
    }
    pub fn edge_b(&self) -> usize {
        self.labels.b
    }
    pub fn edge_c(&self) -> usize {
        self.labels.c
    }
    pub fn edge_d(&self) -> usize {
        self.labels.d
    }
}

/// Lines carrying the spokes of `site`, one per domain vertex.
pub fn spoke_lines(domain: &Domain, site: Point) -> Vec<OrientedLine> {
    domain
        .polygon()
        .vertices()
        .iter()
        .filter_map(|&v| OrientedLine::through(v, site).ok())
        .collect()
}

/// Cuts `cells` by every line. Cells of no area are dropped.
pub fn subdivide(mut cells: Vec<ConvexPolygon>, lines: &[OrientedLine]) -> Vec<ConvexPolygon> {
    for line in lines {
        let flipped = line.flipped();
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in &cells {
            let d: Vec<f64> = cell.vertices().iter().map(|&p| line.eval(p)).collect();
            let scale = 1e-12 * (1.0 + cell.diameter());
            let has_pos = d.iter().any(|&v| v > scale);
            let has_neg = d.iter().any(|&v| v < -scale);
            if has_pos && has_neg {
                next.extend(cell.clip(line));
                next.extend(cell.clip(&flipped));
            } else {
                next.push(cell.clone());
            }
        }
        cells = next;
    }
    cells
}

/// The spoke cells of a single site.
pub fn single_site_sectors(domain: &Domain, s: Point) -> Result<Vec<ConvexPolygon>> {
    domain.check_interior(s)?;
    Ok(subdivide(vec![domain.polygon().clone()], &spoke_lines(domain, s)))
}

/// The arrangement of the spokes of `s` and `t`, each cell labeled at its
/// centroid.
pub fn sector_decomposition(domain: &Domain, s: Point, t: Point) -> Result<Vec<Sector>> {
    domain.check_interior(s)?;
    domain.check_interior(t)?;
    if s.dist(t) <= EPS_GEOM {
        return Err(Error::PointsCoincide);
    }
    let mut lines = spoke_lines(domain, s);
    lines.extend(spoke_lines(domain, t));
    let cells = subdivide(vec![domain.polygon().clone()], &lines);
    Ok(cells
        .into_iter()
        .map(|region| {
            let labels = SectorLabels::at(domain, s, t, region.centroid());
            Sector { region, labels, s, t }
        })
        .collect())
}

/// Index of the sector containing `p` (closed regions, first match).
pub fn locate(sectors: &[Sector], p: Point) -> Option<usize> {
    let mut best = (None, f64::NEG_INFINITY);
    for (i, sec) in sectors.iter().enumerate() {
        let d = sec.region.inward_distance(p);
        if d >= 0.0 {
            return Some(i);
        }
        if d > best.1 {
            best = (Some(i), d);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square() -> Domain {
        Domain::from_vertices(vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap()
    }

    #[test]
    fn triangle_has_six_single_site_cells() {
        let tri = Domain::from_vertices(vec![p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap();
        assert_eq!(single_site_sectors(&tri, p(0.2, 0.3)).unwrap().len(), 6);
    }

    #[test]
    fn top_cell_of_symmetric_pair() {
        let sq = square();
        let secs = sector_decomposition(&sq, p(0.25, 0.5), p(0.75, 0.5)).unwrap();
        let i = locate(&secs, p(0.5, 0.9)).unwrap();
        // Both chords leave through the top edge (index 2) beyond the point.
        assert_eq!(secs[i].labels.b, 2);
        assert_eq!(secs[i].labels.d, 2);
    }

    #[test]
    fn cells_partition_domain() {
        let dom = Domain::from_vertices(vec![p(0., 0.), p(4., 0.), p(5., 2.), p(2., 4.), p(-1., 2.)]).unwrap();
        let secs = sector_decomposition(&dom, p(1.0, 1.0), p(3.0, 2.2)).unwrap();
        let total: f64 = secs.iter().map(|s| s.region.area()).sum();
        let area = dom.polygon().area();
        assert!((total - area).abs() <= 1e-9 * area);
    }

    #[test]
    fn labels_are_constant_in_each_cell() {
        let dom = Domain::from_vertices(vec![p(0., 0.), p(4., 0.), p(5., 2.), p(2., 4.), p(-1., 2.)]).unwrap();
        let (s, t) = (p(1.0, 1.0), p(3.0, 2.2));
        let secs = sector_decomposition(&dom, s, t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for sec in &secs {
            let v = sec.region.vertices();
            for _ in 0..10 {
                // Random convex combination, pulled toward the centroid.
                let w: Vec<f64> = (0..v.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
                let sum: f64 = w.iter().sum();
                let q = v
                    .iter()
                    .zip(&w)
                    .fold(Point::default(), |acc, (&pt, &wi)| acc + pt * (wi / sum));
                let q = q.lerp(sec.region.centroid(), 0.05);
                assert_eq!(SectorLabels::at(&dom, s, t, q), sec.labels);
            }
        }
    }

    #[test]
    fn coincident_sites_rejected() {
        assert_eq!(
            sector_decomposition(&square(), p(0.4, 0.4), p(0.4, 0.4)).unwrap_err(),
            Error::PointsCoincide
        );
    }
}
