//! Bisector conics: coefficients from four edge lines and two sites,
//! classification, factoring of degenerate conics, and the canonical
//! frames (unit square, unit simplex) in which the sector cases simplify.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Line, Point, EPS_SINGULAR};
use crate::projective::{adjugate3, det3};

/// `A x² + B xy + C y² + D x + E y + F = 0` together with the sector
/// constant `k` it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicType {
    Ellipse,
    Parabola,
    Hyperbola,
    DegenerateLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicClass {
    pub tag: ConicType,
    /// `B² − 4AC`
    pub discriminant: f64,
}

fn dot3(l: [f64; 3], p: Point) -> f64 {
    l[0] * p.x + l[1] * p.y + l[2]
}

impl ConicCoefficients {
    pub fn coeffs(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.a * p.x * p.x + self.b * p.x * p.y + self.c * p.y * p.y + self.d * p.x + self.e * p.y + self.f
    }

    pub fn norm(&self) -> f64 {
        self.coeffs().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// Symmetric matrix `Q` with `(x, y, 1) Q (x, y, 1)ᵀ` equal to [`eval`](Self::eval).
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.a, self.b / 2.0, self.d / 2.0],
            [self.b / 2.0, self.c, self.e / 2.0],
            [self.d / 2.0, self.e / 2.0, self.f],
        ]
    }

    pub fn from_matrix(q: &[[f64; 3]; 3], k: f64) -> ConicCoefficients {
        ConicCoefficients {
            a: q[0][0],
            b: q[0][1] + q[1][0],
            c: q[1][1],
            d: q[0][2] + q[2][0],
            e: q[1][2] + q[2][1],
            f: q[2][2],
            k,
        }
    }

    /// Coefficients scaled to unit Euclidean norm, first significant
    /// coefficient positive. `k` is left untouched.
    pub fn normalized(&self) -> [f64; 6] {
        let n = self.norm();
        let c = self.coeffs();
        let lead = c.iter().copied().find(|v| v.abs() > 1e-12 * n).unwrap_or(1.0);
        let s = lead.signum() / n;
        c.map(|v| v * s)
    }

    /// Whether every coefficient vanishes relative to `scale`.
    pub fn is_null(&self, scale: f64) -> bool {
        self.coeffs().iter().all(|v| v.abs() <= 1e-12 * scale)
    }

    /// Coefficients `(α, β, γ)` of `λ ↦ Q(p + λ d)`.
    pub fn along(&self, p: Point, d: Point) -> (f64, f64, f64) {
        let alpha = self.a * d.x * d.x + self.b * d.x * d.y + self.c * d.y * d.y;
        let beta = 2.0 * self.a * p.x * d.x
            + self.b * (p.x * d.y + p.y * d.x)
            + 2.0 * self.c * p.y * d.y
            + self.d * d.x
            + self.e * d.y;
        (alpha, beta, self.eval(p))
    }
}

/// Real roots of `a λ² + b λ + c`, ascending. Near-tangent (slightly
/// negative discriminant) cases report the double root.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-13 * scale {
        if b.abs() <= 1e-13 * scale {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc > -1e-12 * b.mul_add(b, (4.0 * a * c).abs()) {
            disc = 0.0;
        } else {
            return Vec::new();
        }
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let mut r = if q == 0.0 { vec![0.0, 0.0] } else { vec![q / a, c / q] };
    r.sort_by(f64::total_cmp);
    r
}

/// The bisector conic for a sector whose edges have lines `a, b, c, d`
/// (coefficient triples `x₁ x + x₂ y + x₃`). With `ℓ·p` the line value at
/// `p`, the sector constant is `k = (b·s)(c·t) / ((d·t)(a·s))` and the
/// bisector is `(b·p)(c·p) − k (a·p)(d·p) = 0`.
pub fn conic_from_lines(
    a: [f64; 3],
    b: [f64; 3],
    c: [f64; 3],
    d: [f64; 3],
    s: Point,
    t: Point,
) -> Result<ConicCoefficients> {
    let (as_, bs, ct, dt) = (dot3(a, s), dot3(b, s), dot3(c, t), dot3(d, t));
    if [as_, bs, ct, dt].iter().any(|v| v.abs() <= EPS_SINGULAR) {
        return Err(Error::SiteOnEdgeLine);
    }
    let k = (bs * ct) / (dt * as_);
    Ok(ConicCoefficients {
        a: b[0] * c[0] - a[0] * d[0] * k,
        b: b[1] * c[0] + b[0] * c[1] - a[0] * d[1] * k - a[1] * d[0] * k,
        c: b[1] * c[1] - a[1] * d[1] * k,
        d: b[2] * c[0] + c[2] * b[0] - a[2] * d[0] * k - a[0] * d[2] * k,
        e: b[2] * c[1] + b[1] * c[2] - a[1] * d[2] * k - a[2] * d[1] * k,
        f: b[2] * c[2] - a[2] * d[2] * k,
        k,
    })
}

/// Relative discriminant threshold below which a conic counts as parabolic.
pub fn eps_disc(c: &ConicCoefficients) -> f64 {
    1e-9 * (c.a * c.a).max(c.b * c.b).max(c.c * c.c).max(1.0)
}

fn tag_from_discriminant(disc: f64, eps: f64) -> ConicType {
    if disc.abs() <= eps {
        ConicType::Parabola
    } else if disc < 0.0 {
        ConicType::Ellipse
    } else {
        ConicType::Hyperbola
    }
}

fn is_rank_deficient(c: &ConicCoefficients) -> bool {
    let s = c.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    s == 0.0 || det3(&c.matrix()).abs() <= 1e-10 * s * s * s
}

pub fn classify_conic(c: &ConicCoefficients) -> ConicClass {
    let disc = c.discriminant();
    let eps = eps_disc(c);
    let tag = if is_rank_deficient(c) && disc >= -eps {
        ConicType::DegenerateLinear
    } else {
        tag_from_discriminant(disc, eps)
    };
    ConicClass {
        tag,
        discriminant: disc,
    }
}

/// Splits a rank-deficient conic into its real lines. Lines at infinity
/// are dropped, so a conic that is really one affine line plus the line at
/// infinity yields a single line.
pub fn degenerate_factor(c: &ConicCoefficients) -> Result<Vec<Line>> {
    if classify_conic(c).tag != ConicType::DegenerateLinear {
        return Err(Error::NotDegenerate);
    }
    let m = c.matrix();
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let adj = adjugate3(&m);
    let i = (0..3)
        .max_by(|&x, &y| adj[x][x].abs().total_cmp(&adj[y][y].abs()))
        .unwrap();
    let to_line = |v: [f64; 3]| Line::new(v[0], v[1], v[2]).ok();
    let mut lines: Vec<Line> = Vec::new();
    if adj[i][i].abs() <= 1e-10 * scale * scale {
        // Rank one: a double line.
        let j = (0..3).max_by(|&x, &y| m[x][x].abs().total_cmp(&m[y][y].abs())).unwrap();
        let r = m[j][j].abs().sqrt().max(f64::MIN_POSITIVE);
        lines.extend(to_line([m[j][0] / r, m[j][1] / r, m[j][2] / r]));
        return Ok(lines);
    }
    if adj[i][i] > 0.0 {
        // Two complex lines meeting in a real point.
        return Err(Error::NotDegenerate);
    }
    let beta = (-adj[i][i]).sqrt();
    let p = [adj[0][i] / beta, adj[1][i] / beta, adj[2][i] / beta];
    // Q + [p]ₓ = g hᵀ for the two factors g, h.
    let px = [[0.0, p[2], -p[1]], [-p[2], 0.0, p[0]], [p[1], -p[0], 0.0]];
    let mut cm = [[0.0; 3]; 3];
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for r in 0..3 {
        for col in 0..3 {
            cm[r][col] = m[r][col] + px[r][col];
            if cm[r][col].abs() > best {
                best = cm[r][col].abs();
                bi = r;
                bj = col;
            }
        }
    }
    let g = cm[bi];
    let h = [cm[0][bj], cm[1][bj], cm[2][bj]];
    lines.extend(to_line(g));
    lines.extend(to_line(h));
    if lines.len() == 2 && lines[0].approx_eq(&lines[1], 1e-9) {
        lines.pop();
    }
    Ok(lines)
}

// Canonical frames.

/// Unit square frame with `E_A: x = 0`, `E_B: x = 1`, `E_C: y = 0`,
/// `E_D: y = 1`.
pub const SQUARE_FRAME: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [1.0, 0.0, -1.0], [0.0, 1.0, 0.0], [0.0, 1.0, -1.0]];

/// Unit simplex frame with `E_A: y = 0`, `E_B = E_C: x + y − 1 = 0`,
/// `E_D: x = 0`.
pub const SIMPLEX_FRAME: [[f64; 3]; 4] = [[0.0, 1.0, 0.0], [1.0, 1.0, -1.0], [1.0, 1.0, -1.0], [1.0, 0.0, 0.0]];

/// Two-edge frame with `E_A = E_D: x = 0`, `E_B = E_C: y = 0`.
pub const TWO_EDGE_FRAME: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]];

fn frame_conic(frame: &[[f64; 3]; 4], s: Point, t: Point) -> Result<ConicCoefficients> {
    conic_from_lines(frame[0], frame[1], frame[2], frame[3], s, t)
}

fn check_in_square(p: Point) -> Result<()> {
    let m = p.x.min(p.y).min(1.0 - p.x).min(1.0 - p.y);
    if m.abs() <= EPS_SINGULAR {
        Err(Error::SiteOnEdgeLine)
    } else if m < 0.0 {
        Err(Error::SiteOutsideFrame)
    } else {
        Ok(())
    }
}

fn check_in_simplex(p: Point) -> Result<()> {
    if p.x > 0.0 && p.y > 0.0 && p.x + p.y < 1.0 {
        Ok(())
    } else {
        Err(Error::SiteOutsideFrame)
    }
}

pub fn four_edge_conic(s: Point, t: Point) -> Result<ConicCoefficients> {
    check_in_square(s)?;
    check_in_square(t)?;
    frame_conic(&SQUARE_FRAME, s, t)
}

/// Discriminant of the bisector conic in the unit square frame; it equals
/// `(1 − k)²`.
pub fn four_edge_discriminant(s: Point, t: Point) -> Result<f64> {
    Ok(four_edge_conic(s, t)?.discriminant())
}

pub fn three_edge_conic(s: Point, t: Point) -> Result<ConicCoefficients> {
    check_in_simplex(s)?;
    check_in_simplex(t)?;
    frame_conic(&SIMPLEX_FRAME, s, t)
}

pub fn two_edge_conic(s: Point, t: Point) -> Result<ConicCoefficients> {
    frame_conic(&TWO_EDGE_FRAME, s, t)
}

/// Sign function of the simplex frame whose sign is the sign of the
/// discriminant: `(s_x + s_y − 1)(t_x + t_y − 1) − 4 s_y t_x`.
pub fn three_edge_sign_function(s: Point, t: Point) -> f64 {
    (s.x + s.y - 1.0) * (t.x + t.y - 1.0) - 4.0 * s.y * t.x
}

/// Conic type in the simplex frame decided by the sign function alone. The
/// discriminant is `k(k − 4)` and `k − 4 = f / (t_x s_y)`, so the class
/// follows from `f` with the same threshold [`classify_conic`] applies.
pub fn three_edge_conic_type(s: Point, t: Point) -> Result<ConicClass> {
    check_in_simplex(s)?;
    check_in_simplex(t)?;
    let f = three_edge_sign_function(s, t);
    let k = ((s.x + s.y - 1.0) / t.x) * ((t.x + t.y - 1.0) / s.y);
    let disc = k * f / (t.x * s.y);
    let eps = 1e-9 * ((2.0 - k) * (2.0 - k)).max(1.0);
    Ok(ConicClass {
        tag: tag_from_discriminant(disc, eps),
        discriminant: disc,
    })
}

/// With `s` fixed, the line in `t`-coordinates where the simplex-frame
/// bisector is a parabola; ellipses lie on the side where the sign
/// function is negative, hyperbolas where it is positive.
pub fn conic_type_separating_line(fixed_s: Point) -> Result<Line> {
    check_in_simplex(fixed_s)?;
    let sigma = fixed_s.x + fixed_s.y - 1.0;
    Line::new(sigma - 4.0 * fixed_s.y, sigma, -sigma)
}

/// Same as [`conic_type_separating_line`] with `t` fixed; the line is in
/// `s`-coordinates.
pub fn conic_type_separating_line_for_t(fixed_t: Point) -> Result<Line> {
    check_in_simplex(fixed_t)?;
    let tau = fixed_t.x + fixed_t.y - 1.0;
    Line::new(tau, tau - 4.0 * fixed_t.x, -tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::line_intersection;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn simplex_frame_canonical_form() {
        let (s, t) = (p(0.2, 0.2), p(0.45, 0.4));
        let c = three_edge_conic(s, t).unwrap();
        let k = ((s.x + s.y - 1.0) / t.x) * ((t.x + t.y - 1.0) / s.y);
        assert!((c.k - k).abs() < 1e-15);
        let expect = [1.0, 2.0 - k, 1.0, -2.0, -2.0, 1.0];
        for (got, want) in c.coeffs().iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn two_edge_frame_canonical_form() {
        let (s, t) = (p(1.0, 2.0), p(2.0, 1.0));
        let c = two_edge_conic(s, t).unwrap();
        assert!((c.k - 1.0).abs() < 1e-15);
        assert_eq!(c.coeffs(), [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let lines = degenerate_factor(&c).unwrap();
        assert_eq!(lines.len(), 2);
        let diag = Line::new(1.0, -1.0, 0.0).unwrap();
        let anti = Line::new(1.0, 1.0, 0.0).unwrap();
        assert!(lines.iter().any(|l| l.approx_eq(&diag, 1e-12)));
        assert!(lines.iter().any(|l| l.approx_eq(&anti, 1e-12)));
    }

    #[test]
    fn two_edge_factor_is_root_k_slope() {
        let (s, t) = (p(0.3, 1.7), p(1.1, 0.4));
        let c = two_edge_conic(s, t).unwrap();
        let rk = c.k.sqrt();
        let lines = degenerate_factor(&c).unwrap();
        let want = Line::new(rk, -1.0, 0.0).unwrap();
        assert!(lines.iter().any(|l| l.approx_eq(&want, 1e-12)));
    }

    #[test]
    fn table_rows() {
        let rows = [
            (p(0.2, 0.2), p(0.45, 0.4), 1.0, -3.0, ConicType::Ellipse),
            (p(0.2, 0.2), p(0.25, 0.4), 4.2, 0.84, ConicType::Hyperbola),
            (p(0.1, 0.15), p(0.5, 0.3), 2.0, -4.0, ConicType::Ellipse),
            (p(0.1, 0.1), p(0.2, 0.7), 4.0, 0.0, ConicType::Parabola),
        ];
        for (s, t, k, disc, tag) in rows {
            let c = three_edge_conic(s, t).unwrap();
            assert!((c.k - k).abs() < 1e-9);
            let cls = classify_conic(&c);
            assert!((cls.discriminant - disc).abs() < 1e-9);
            assert_eq!(cls.tag, tag);
            assert_eq!(three_edge_conic_type(s, t).unwrap().tag, tag);
        }
    }

    #[test]
    fn swapping_edge_roles_scales_coefficients() {
        let lines = [[0.3, 1.0, -0.2], [1.0, 0.7, -2.0], [-0.4, 1.0, -1.5], [1.0, -0.2, 0.4]];
        let (s, t) = (p(0.6, 0.5), p(0.9, 0.3));
        let c1 = conic_from_lines(lines[0], lines[1], lines[2], lines[3], s, t).unwrap();
        let c2 = conic_from_lines(lines[1], lines[0], lines[3], lines[2], s, t).unwrap();
        let (n1, n2) = (c1.normalized(), c2.normalized());
        for i in 0..6 {
            assert!((n1[i] - n2[i]).abs() < 1e-9, "{n1:?} vs {n2:?}");
        }
    }

    #[test]
    fn four_edge_discriminant_is_square() {
        let (s, t) = (p(0.3, 0.4), p(0.6, 0.5));
        let c = four_edge_conic(s, t).unwrap();
        let d = four_edge_discriminant(s, t).unwrap();
        assert!((d - (1.0 - c.k).powi(2)).abs() < 1e-9);
        // k = 1 gives a parabola.
        let (s, t) = (p(0.5, 0.5), p(0.5, 0.5));
        assert!(four_edge_discriminant(s, t).unwrap().abs() < 1e-12);
        assert_eq!(four_edge_discriminant(p(0.0, 0.4), t), Err(Error::SiteOnEdgeLine));
        assert_eq!(four_edge_discriminant(p(1.5, 0.4), t), Err(Error::SiteOutsideFrame));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let s = p(rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99));
            let t = p(rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99));
            assert!(four_edge_discriminant(s, t).unwrap() >= 0.0);
        }
    }

    #[test]
    fn separating_line_examples() {
        let l = conic_type_separating_line(p(0.1, 0.1)).unwrap();
        let want = Line::new(1.2, 0.8, -0.8).unwrap();
        assert!(l.approx_eq(&want, 1e-12));
        assert!(l.eval(p(0.2, 0.7)).abs() < 1e-12);

        let l = conic_type_separating_line(p(0.2, 0.2)).unwrap();
        let e = three_edge_conic_type(p(0.2, 0.2), p(0.45, 0.4)).unwrap();
        let h = three_edge_conic_type(p(0.2, 0.2), p(0.25, 0.4)).unwrap();
        assert_eq!(e.tag, ConicType::Ellipse);
        assert_eq!(h.tag, ConicType::Hyperbola);
        assert!(l.eval(p(0.45, 0.4)).signum() != l.eval(p(0.25, 0.4)).signum());
        assert_eq!(conic_type_separating_line(p(0.7, 0.7)), Err(Error::SiteOutsideFrame));
    }

    #[test]
    fn separating_line_for_t_splits_types() {
        let t = p(0.3, 0.35);
        let l = conic_type_separating_line_for_t(t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = [false; 2];
        for _ in 0..500 {
            let s = p(rng.gen_range(0.01..0.5), rng.gen_range(0.01..0.49));
            let side = l.eval(s);
            if side.abs() < 1e-6 {
                continue;
            }
            let tag = three_edge_conic_type(s, t).unwrap().tag;
            let f = three_edge_sign_function(s, t);
            let expect = if f < 0.0 {
                ConicType::Ellipse
            } else {
                ConicType::Hyperbola
            };
            assert_eq!(tag, expect);
            seen[(side > 0.0) as usize] = true;
            // Same side of the line ⇔ same sign of the sign function.
            let probe = l.eval(s) * f;
            assert!(probe != 0.0);
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn shared_edge_in_front_factors_through_vanishing_point() {
        // Simplex lines, shared edge in front of both sites: E_B = E_D.
        let (a, b, c) = ([0.0, 1.0, 0.0], [1.0, 1.0, -1.0], [1.0, 0.0, 0.0]);
        let (s, t) = (p(0.2, 0.3), p(0.35, 0.15));
        let con = conic_from_lines(a, b, c, b, s, t).unwrap();
        assert_eq!(classify_conic(&con).tag, ConicType::DegenerateLinear);
        let lines = degenerate_factor(&con).unwrap();
        let shared = Line::new(b[0], b[1], b[2]).unwrap();
        let other: Vec<_> = lines.iter().filter(|l| !l.approx_eq(&shared, 1e-9)).collect();
        assert_eq!(other.len(), 1);
        let la = Line::new(a[0], a[1], a[2]).unwrap();
        let lc = Line::new(c[0], c[1], c[2]).unwrap();
        let o = line_intersection(&la, &lc).unwrap().to_point().unwrap();
        assert!(other[0].eval(o).abs() < 1e-12);
    }

    #[test]
    fn non_degenerate_conic_is_not_factored() {
        let c = three_edge_conic(p(0.2, 0.2), p(0.45, 0.4)).unwrap();
        assert_eq!(degenerate_factor(&c), Err(Error::NotDegenerate));
    }

    #[test]
    fn quadratic_roots_are_stable() {
        assert_eq!(quadratic_roots(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert_eq!(quadratic_roots(0.0, 2.0, -1.0), vec![0.5]);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
        let r = quadratic_roots(1.0, -1e8, 1.0);
        assert!((r[0] - 1e-8).abs() < 1e-20);
        assert_eq!(quadratic_roots(1.0, -2.0, 1.0), vec![1.0, 1.0]);
    }
}
