use thiserror::Error;

/// Errors raised by the geometry kernel, the metric, bisector tracing and
/// the Voronoi diagram.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lines coincide")]
    CoincidentLines,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("quadrilateral is degenerate")]
    DegenerateQuad,
    #[error("triangle is degenerate")]
    DegenerateTriangle,
    #[error("image lies at infinity")]
    ImageAtInfinity,
    #[error("singular projective map")]
    SingularMap,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("points coincide")]
    PointsCoincide,
    #[error("point ({x}, {y}) is not interior to the domain")]
    PointNotInterior { x: f64, y: f64 },
    #[error("site lies on an edge line of the sector")]
    SiteOnEdgeLine,
    #[error("site lies outside the canonical frame")]
    SiteOutsideFrame,
    #[error("conic is not degenerate")]
    NotDegenerate,
    #[error("bisector of {0} and {1} contains a two-dimensional region")]
    DegeneratePair(String, String),
    #[error("duplicate site id {0}")]
    DuplicateSite(String),
    #[error("site {0} is too close to the boundary")]
    SiteTooCloseToBoundary(String),
    #[error("site {0} coincides with site {1}")]
    SiteCoincident(String, String),
    #[error("unknown site {0}")]
    UnknownSite(String),
    #[error("diagram has no sites")]
    EmptyDiagram,
    #[error("bisector tracing failed: {0}")]
    TraceFailed(String),
    #[error("radius must be positive and finite")]
    InvalidRadius,
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

impl Error {
    /// Process exit code for front ends: 3 for geometric degeneracy, 2 for
    /// everything caused by the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegeneratePair(..) => 3,
            Error::TraceFailed(_) => 1,
            _ => 2,
        }
    }

    /// Stable snake_case name used in wire formats.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CoincidentLines => "coincident_lines",
            Error::NotCollinear => "not_collinear",
            Error::CoincidentPoints => "coincident_points",
            Error::DegenerateQuad => "degenerate_quad",
            Error::DegenerateTriangle => "degenerate_triangle",
            Error::ImageAtInfinity => "image_at_infinity",
            Error::SingularMap => "singular_map",
            Error::InvalidPolygon(_) => "invalid_polygon",
            Error::PointsCoincide => "points_coincide",
            Error::PointNotInterior { .. } => "point_not_interior",
            Error::SiteOnEdgeLine => "site_on_edge_line",
            Error::SiteOutsideFrame => "site_outside_frame",
            Error::NotDegenerate => "not_degenerate",
            Error::DegeneratePair(..) => "degenerate_pair",
            Error::DuplicateSite(_) => "duplicate_site",
            Error::SiteTooCloseToBoundary(_) => "site_too_close_to_boundary",
            Error::SiteCoincident(..) => "site_coincident",
            Error::UnknownSite(_) => "unknown_site",
            Error::EmptyDiagram => "empty_diagram",
            Error::TraceFailed(_) => "trace_failed",
            Error::InvalidRadius => "invalid_radius",
            Error::InvalidScene(_) => "invalid_scene",
            Error::InvalidRequest(_) => "invalid_request",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
