//! Computational geometry in the Hilbert metric of a convex polygon:
//! distances and balls, spoke and sector decompositions, per-sector conic
//! bisectors, and dynamically updated Voronoi diagrams.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bisector;
pub mod conic;
pub mod error;
pub mod geometry;
pub mod metric;
pub mod polygon;
pub mod projective;
pub mod protocol;
pub mod scene;
pub mod sector;
pub mod star;
pub mod voronoi;

pub use bisector::{trace_bisector, BisectorCurve, BisectorPiece};
pub use conic::{classify_conic, ConicClass, ConicCoefficients, ConicType};
pub use error::{Error, Result};
pub use geometry::{HomogeneousPoint, Line, OrientedLine, Point, Segment, EPS_GEOM, EPS_SINGULAR};
pub use metric::{Domain, HilbertBall, Spoke};
pub use polygon::ConvexPolygon;
pub use projective::ProjectiveMap;
pub use scene::{BisectorDump, DiagramDump, Scene, SceneSite};
pub use sector::{sector_decomposition, Sector, SectorLabels};
pub use voronoi::{
    crossing_events, detect_degenerate_pair, z_region, CrossingEvent, DegeneracyReport, EdgeSource, Site, VoronoiCell,
    VoronoiDiagram, ZRegion,
};
