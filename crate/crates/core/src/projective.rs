//! Projective maps of the plane and the canonical frames used to simplify
//! bisector computations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HomogeneousPoint, Line, Point, EPS_SINGULAR};

/// A 3×3 homography acting on column vectors `(x, y, 1)ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveMap {
    pub m: [[f64; 3]; 3],
}

impl ProjectiveMap {
    pub fn new(m: [[f64; 3]; 3]) -> Result<ProjectiveMap> {
        let t = ProjectiveMap { m };
        let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        if !(scale > 0.0) || !(t.det().abs() > EPS_SINGULAR * scale.powi(3)) {
            return Err(Error::SingularMap);
        }
        Ok(t)
    }

    pub fn identity() -> ProjectiveMap {
        ProjectiveMap {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn det(&self) -> f64 {
        det3(&self.m)
    }

    pub fn apply_h(&self, p: HomogeneousPoint) -> HomogeneousPoint {
        let v = mul_vec(&self.m, [p.x, p.y, p.w]);
        HomogeneousPoint::new(v[0], v[1], v[2])
    }

    pub fn apply(&self, p: Point) -> Result<Point> {
        let v = mul_vec(&self.m, [p.x, p.y, 1.0]);
        let scale = v[0].abs().max(v[1].abs()).max(1.0);
        if v[2].abs() <= EPS_SINGULAR * scale {
            return Err(Error::ImageAtInfinity);
        }
        Ok(Point::new(v[0] / v[2], v[1] / v[2]))
    }

    /// Image of a line: coefficients transform by the inverse transpose.
    pub fn apply_line(&self, l: &Line) -> Result<Line> {
        let c = self.apply_coeffs(l.coeffs());
        Line::new(c[0], c[1], c[2]).map_err(|_| Error::ImageAtInfinity)
    }

    /// Inverse-transpose action on raw line coefficients (no normalization).
    pub fn apply_coeffs(&self, l: [f64; 3]) -> [f64; 3] {
        let inv = inverse3(&self.m);
        // (M⁻¹)ᵀ l
        [
            inv[0][0] * l[0] + inv[1][0] * l[1] + inv[2][0] * l[2],
            inv[0][1] * l[0] + inv[1][1] * l[1] + inv[2][1] * l[2],
            inv[0][2] * l[0] + inv[1][2] * l[1] + inv[2][2] * l[2],
        ]
    }

    pub fn invert(&self) -> Result<ProjectiveMap> {
        ProjectiveMap::new(inverse3(&self.m))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ProjectiveMap) -> Result<ProjectiveMap> {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        ProjectiveMap::new(r)
    }

    /// Transport of a conic matrix `Q` (points with `pᵀQp = 0`) to the
    /// image frame: `M⁻ᵀ Q M⁻¹`.
    pub fn apply_conic_matrix(&self, q: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let inv = inverse3(&self.m);
        let mut tmp = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                tmp[i][j] = (0..3).map(|k| q[i][k] * inv[k][j]).sum();
            }
        }
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| inv[k][i] * tmp[k][j]).sum();
            }
        }
        out
    }
}

fn mul_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub(crate) fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn adjugate3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

fn inverse3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let adj = adjugate3(m);
    let d = det3(m);
    let mut r = adj;
    for row in r.iter_mut() {
        for v in row.iter_mut() {
            *v /= d;
        }
    }
    r
}

/// Gaussian elimination with partial pivoting; `None` when a pivot falls
/// below [`EPS_SINGULAR`].
pub fn solve_linear<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= EPS_SINGULAR {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let pivot = a[col];
                for (x, p) in a[row][col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Corners of the unit square in the order the quad corners are sent to.
pub const UNIT_SQUARE: [Point; 4] = [
    Point::new(0.0, 0.0),
    Point::new(0.0, 1.0),
    Point::new(1.0, 1.0),
    Point::new(1.0, 0.0),
];

/// Homography sending `p1..p4` to `(0,0), (0,1), (1,1), (1,0)`, obtained
/// from the 8×8 direct linear system with `t33 = 1`.
pub fn map_quad_to_unit_square(p1: Point, p2: Point, p3: Point, p4: Point) -> Result<ProjectiveMap> {
    map_quad_to_quad([p1, p2, p3, p4], UNIT_SQUARE)
}

pub fn map_quad_to_quad(src: [Point; 4], dst: [Point; 4]) -> Result<ProjectiveMap> {
    let mut a = [[0.0; 8]; 8];
    let mut b = [0.0; 8];
    for i in 0..4 {
        let (p, q) = (src[i], dst[i]);
        a[2 * i] = [p.x, p.y, 1.0, 0.0, 0.0, 0.0, -p.x * q.x, -p.y * q.x];
        b[2 * i] = q.x;
        a[2 * i + 1] = [0.0, 0.0, 0.0, p.x, p.y, 1.0, -p.x * q.y, -p.y * q.y];
        b[2 * i + 1] = q.y;
    }
    let v = solve_linear(a, b).ok_or(Error::DegenerateQuad)?;
    ProjectiveMap::new([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], 1.0]]).map_err(|_| Error::DegenerateQuad)
}

/// Affine map sending `p → (1,0)`, `q → (0,1)`, `r → (0,0)`.
pub fn map_triangle_to_unit_simplex(p: Point, q: Point, r: Point) -> Result<ProjectiveMap> {
    // Forward frame: (u, v) ↦ r + u (p − r) + v (q − r).
    let (e1, e2) = (p - r, q - r);
    let det = e1.cross(e2);
    let scale = e1.norm().max(e2.norm()).max(1.0);
    if det.abs() <= EPS_SINGULAR * scale * scale {
        return Err(Error::DegenerateTriangle);
    }
    let frame = [[e1.x, e2.x, r.x], [e1.y, e2.y, r.y], [0.0, 0.0, 1.0]];
    let mut inv = inverse3(&frame);
    inv[2] = [0.0, 0.0, 1.0];
    ProjectiveMap::new(inv).map_err(|_| Error::DegenerateTriangle)
}
