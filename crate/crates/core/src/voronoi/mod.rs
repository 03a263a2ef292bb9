//! Dynamic Voronoi diagrams in the Hilbert metric.
//!
//! Insertion follows the incremental scheme: for a new site `t`, every
//! existing cell is cut down to its half of the two-site diagram with `t`,
//! and the cell of `t` is the intersection of its halves over all existing
//! sites. Removal and motion rebuild from scratch in id order. Diagrams are
//! immutable values; every update returns a new one.

pub mod cells;
pub mod degeneracy;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metric::Domain;
use crate::polygon::ConvexPolygon;

pub use cells::{two_site_cells, Cell, EdgeSource, TIE_TOL};
pub use degeneracy::{
    crossing_events, detect_degenerate_pair, z_region, CrossingEvent, Degeneracy, DegeneracyReport, ZRegion,
};

/// Minimum separation of two sites, relative to the domain diameter.
pub const EPS_SITE_REL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub id: String,
    pub pos: Point,
}

impl Site {
    pub fn new(id: impl Into<String>, pos: Point) -> Site {
        Site { id: id.into(), pos }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiCell {
    pub site: String,
    pub region: Cell,
}

impl VoronoiCell {
    pub fn boundary(&self) -> &[Point] {
        self.region.vertices()
    }

    pub fn provenance(&self) -> &[EdgeSource] {
        self.region.sources()
    }

    pub fn area(&self) -> f64 {
        self.region.area()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.region.contains(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiDiagram {
    domain: Domain,
    sites: Vec<Site>,
    cells: Vec<VoronoiCell>,
    degeneracies: Vec<DegeneracyReport>,
}

impl VoronoiDiagram {
    pub fn new(polygon: ConvexPolygon) -> VoronoiDiagram {
        VoronoiDiagram {
            domain: Domain::new(polygon),
            sites: Vec::new(),
            cells: Vec::new(),
            degeneracies: Vec::new(),
        }
    }

    pub fn from_vertices(vertices: Vec<Point>) -> Result<VoronoiDiagram> {
        Ok(VoronoiDiagram::new(ConvexPolygon::new(vertices)?))
    }

    /// Builds a diagram by inserting `sites` in the given order.
    pub fn build(polygon: ConvexPolygon, sites: &[Site]) -> Result<VoronoiDiagram> {
        sites
            .iter()
            .try_fold(VoronoiDiagram::new(polygon), |d, s| d.insert_site(s.clone()))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        self.domain.polygon()
    }

    /// Sites in insertion order.
    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Cells, parallel to [`sites`](Self::sites).
    pub fn cells(&self) -> &[VoronoiCell] {
        &self.cells
    }

    pub fn degeneracies(&self) -> &[DegeneracyReport] {
        &self.degeneracies
    }

    pub fn site(&self, id: &str) -> Option<&Site> {
        self.sites.iter().find(|s| s.id == id)
    }

    pub fn cell(&self, id: &str) -> Option<&VoronoiCell> {
        self.cells.iter().find(|c| c.site == id)
    }

    pub fn eps_site(&self) -> f64 {
        EPS_SITE_REL * self.domain.diameter()
    }

    fn validate(&self, site: &Site, ignore: Option<&str>) -> Result<()> {
        if !self.domain.is_interior(site.pos) {
            return Err(Error::SiteTooCloseToBoundary(site.id.clone()));
        }
        for other in &self.sites {
            if Some(other.id.as_str()) == ignore {
                continue;
            }
            if other.pos.dist(site.pos) < self.eps_site() {
                return Err(Error::SiteCoincident(site.id.clone(), other.id.clone()));
            }
        }
        Ok(())
    }

    pub fn insert_site(&self, site: Site) -> Result<VoronoiDiagram> {
        if self.site(&site.id).is_some() {
            return Err(Error::DuplicateSite(site.id));
        }
        self.validate(&site, None)?;
        let t = site.pos;
        let mut new_cell = cells::domain_cell(&self.domain, t);
        let mut cells = self.cells.clone();
        let mut degeneracies = self.degeneracies.clone();
        for (old, cell) in self.sites.iter().zip(cells.iter_mut()) {
            let (half_s, half_t, deg) = two_site_cells(&self.domain, (&old.id, old.pos), (&site.id, t))?;
            cell.region = cell.region.intersect(&half_s);
            new_cell = new_cell.intersect(&half_t);
            if let Some(d) = deg {
                degeneracies.push(d.report(&old.id, &site.id));
            }
        }
        let mut sites = self.sites.clone();
        cells.push(VoronoiCell {
            site: site.id.clone(),
            region: new_cell,
        });
        sites.push(site);
        Ok(VoronoiDiagram {
            domain: self.domain.clone(),
            sites,
            cells,
            degeneracies,
        })
    }

    fn rebuild(&self, mut sites: Vec<Site>) -> Result<VoronoiDiagram> {
        sites.sort_by(|a, b| a.id.cmp(&b.id));
        VoronoiDiagram::build(self.domain.polygon().clone(), &sites)
    }

    pub fn remove_site(&self, id: &str) -> Result<VoronoiDiagram> {
        if self.site(id).is_none() {
            return Err(Error::UnknownSite(id.to_string()));
        }
        self.rebuild(self.sites.iter().filter(|s| s.id != id).cloned().collect())
    }

    pub fn move_site(&self, id: &str, pos: Point) -> Result<VoronoiDiagram> {
        if self.site(id).is_none() {
            return Err(Error::UnknownSite(id.to_string()));
        }
        let moved = Site::new(id, pos);
        self.validate(&moved, Some(id))?;
        let sites = self
            .sites
            .iter()
            .map(|s| if s.id == id { moved.clone() } else { s.clone() })
            .collect();
        self.rebuild(sites)
    }

    /// Hilbert-nearest site; distances within [`TIE_TOL`] go to the smaller id.
    pub fn nearest_site(&self, q: Point) -> Result<&Site> {
        self.domain.check_interior(q)?;
        let mut best: Option<(&Site, f64)> = None;
        for s in &self.sites {
            let d = self.domain.distance_unchecked(s.pos, q);
            best = match best {
                None => Some((s, d)),
                Some((b, bd)) => {
                    if d < bd - TIE_TOL || (d <= bd + TIE_TOL && s.id < b.id) {
                        Some((s, d))
                    } else {
                        Some((b, bd))
                    }
                }
            };
        }
        best.map(|(s, _)| s).ok_or(Error::EmptyDiagram)
    }

    /// Id of the cell whose region contains `q` (first in site order).
    pub fn locate(&self, q: Point) -> Option<&str> {
        self.cells.iter().find(|c| c.contains(q)).map(|c| c.site.as_str())
    }

    /// Compares cell membership with the brute-force nearest site on an
    /// `n × n` grid of interior points, skipping points within `band` of a
    /// cell boundary. Returns `(checked, mismatches)`.
    pub fn grid_check(&self, n: usize, band: f64) -> (usize, Vec<Point>) {
        let (lo, hi) = self.polygon().bbox();
        let mut checked = 0;
        let mut bad = Vec::new();
        if self.sites.is_empty() {
            return (0, bad);
        }
        for i in 0..n {
            for j in 0..n {
                let q = Point::new(
                    lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / n as f64,
                    lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / n as f64,
                );
                if !self.domain.is_interior(q) || self.near_cell_boundary(q, band) {
                    continue;
                }
                checked += 1;
                let want = self.nearest_site(q).map(|s| s.id.as_str()).ok();
                if self.locate(q) != want {
                    bad.push(q);
                }
            }
        }
        (checked, bad)
    }

    fn near_cell_boundary(&self, q: Point, band: f64) -> bool {
        self.cells.iter().any(|c| {
            let v = c.boundary();
            let n = v.len();
            (0..n).any(|i| crate::geometry::segment_distance(v[i], v[(i + 1) % n], q) <= band)
        })
    }

    /// Sum of cell areas minus the domain area.
    pub fn area_defect(&self) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        self.cells.iter().map(|c| c.area()).sum::<f64>() - self.polygon().area()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap()
    }

    #[test]
    fn single_site_owns_domain() {
        let d = VoronoiDiagram::new(square())
            .insert_site(Site::new("a", p(0.3, 0.6)))
            .unwrap();
        assert!((d.cells()[0].area() - 1.0).abs() < 1e-12);
        assert_eq!(d.nearest_site(p(0.9, 0.9)).unwrap().id, "a");
    }

    #[test]
    fn symmetric_pair_halves() {
        let d = VoronoiDiagram::build(square(), &[Site::new("a", p(0.25, 0.5)), Site::new("b", p(0.75, 0.5))]).unwrap();
        for (c, x0) in d.cells().iter().zip([0.0, 0.5]) {
            assert!((c.area() - 0.5).abs() < 1e-12);
            for v in c.boundary() {
                assert!(v.x >= x0 - 1e-12 && v.x <= x0 + 0.5 + 1e-12);
            }
        }
        assert_eq!(d.nearest_site(p(0.5, 0.2)).unwrap().id, "a");
    }

    #[test]
    fn errors() {
        let d = VoronoiDiagram::new(square())
            .insert_site(Site::new("a", p(0.3, 0.6)))
            .unwrap();
        assert_eq!(
            d.insert_site(Site::new("a", p(0.5, 0.5))),
            Err(Error::DuplicateSite("a".into()))
        );
        assert_eq!(
            d.insert_site(Site::new("b", p(0.0, 0.5))),
            Err(Error::SiteTooCloseToBoundary("b".into()))
        );
        assert_eq!(
            d.insert_site(Site::new("b", p(0.3, 0.6))),
            Err(Error::SiteCoincident("b".into(), "a".into()))
        );
        assert_eq!(d.remove_site("z"), Err(Error::UnknownSite("z".into())));
        assert!(d.remove_site("a").unwrap().cells().is_empty());
        assert_eq!(
            VoronoiDiagram::new(square()).nearest_site(p(0.5, 0.5)),
            Err(Error::EmptyDiagram)
        );
        assert!(VoronoiDiagram::from_vertices(vec![p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)]).is_err());
    }

    #[test]
    fn three_sites_match_oracle() {
        let d = VoronoiDiagram::build(
            square(),
            &[
                Site::new("a", p(0.2, 0.3)),
                Site::new("b", p(0.7, 0.4)),
                Site::new("c", p(0.45, 0.8)),
            ],
        )
        .unwrap();
        let (checked, bad) = d.grid_check(64, d.domain().sampling_tol());
        assert!(checked > 3000);
        assert!(bad.is_empty(), "{bad:?}");
        assert!(d.area_defect().abs() < 1e-6);
    }

    #[test]
    fn degenerate_pair_recorded() {
        let d = VoronoiDiagram::build(square(), &[Site::new("b", p(0.5, 0.3)), Site::new("a", p(0.5, 0.7))]).unwrap();
        assert_eq!(d.degeneracies().len(), 1);
        assert_eq!(d.degeneracies()[0].tie_assignment, "a");
        let (_, bad) = d.grid_check(64, d.domain().sampling_tol());
        assert!(bad.is_empty(), "{bad:?}");
    }
}
