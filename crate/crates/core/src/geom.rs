//! Exact planar primitives: points, half-planes, convex polygons.
//!
//! Polygon moments up to total degree 2 are exact to rounding: each fan
//! triangle is integrated with the three-edge-midpoint rule, which is exact
//! for every quadratic. Distortion integrands `|x - c|^2` are quadratic, so
//! polygonal cell distortions never carry quadrature error.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degeneracy threshold for areas and vertex coincidence.
pub const GEOM_EPS: f64 = 1e-12;

/// A position vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x1: f64,
    pub x2: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x1: 0.0, x2: 0.0 };

    #[inline]
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x1 * other.x2 - self.x2 * other.x1
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    /// Rotate counterclockwise by `angle` radians about the origin.
    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x1 - s * self.x2, s * self.x1 + c * self.x2)
    }

    /// Lexicographic order on `(x1, x2)`.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x1
            .total_cmp(&other.x1)
            .then_with(|| self.x2.total_cmp(&other.x2))
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x1, p.x2]
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl AddAssign for Point {
    #[inline]
    fn add_assign(&mut self, rhs: Point) {
        self.x1 += rhs.x1;
        self.x2 += rhs.x2;
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x1 * s, self.x2 * s)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    #[inline]
    fn mul(self, p: Point) -> Point {
        p * self
    }
}

impl Div<f64> for Point {
    type Output = Point;
    #[inline]
    fn div(self, s: f64) -> Point {
        Point::new(self.x1 / s, self.x2 / s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x1, -self.x2)
    }
}

/// Squared Euclidean distance.
#[inline]
pub fn sq_dist(a: Point, b: Point) -> f64 {
    (a - b).norm_sq()
}

/// The closed half-plane `{x : normal . x <= offset}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    normal: Point,
    offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        if !normal.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidInput("half-plane with non-finite data".into()));
        }
        if normal.norm() <= 0.0 {
            return Err(Error::InvalidInput("half-plane normal must be non-zero".into()));
        }
        Ok(Self { normal, offset })
    }

    /// Points at least as close to `own` as to `other`.
    pub fn bisector(own: Point, other: Point) -> Result<Self> {
        let normal = other - own;
        if normal.norm() <= 1e-9 {
            return Err(Error::InvalidInput(format!(
                "coincident generators at ({}, {})",
                own.x1, own.x2
            )));
        }
        Self::new(normal, 0.5 * (other.norm_sq() - own.norm_sq()))
    }

    #[inline]
    pub fn normal(&self) -> Point {
        self.normal
    }

    #[inline]
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `normal . p - offset`; non-positive inside.
    #[inline]
    pub fn eval(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.eval(p) <= 0.0
    }

    /// Closure of the complementary half-plane.
    pub fn complement(&self) -> Self {
        Self {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    /// Euclidean distance from `p` to the boundary line.
    pub fn line_distance(&self, p: Point) -> f64 {
        self.eval(p).abs() / self.normal.norm()
    }
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Validate and canonicalize: drop repeated and collinear vertices, orient
    /// counterclockwise, reject reflex turns and tiny areas.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("polygon vertex is not finite".into()));
        }
        let mut pts = dedup_ring(vertices);
        if pts.len() < 3 {
            return Err(Error::Degenerate("polygon needs at least 3 distinct vertices".into()));
        }
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        let scale = bbox_scale(&pts);
        for i in 0..pts.len() {
            let a = pts[i];
            let b = pts[(i + 1) % pts.len()];
            let c = pts[(i + 2) % pts.len()];
            let turn = (b - a).cross(c - b);
            if turn < -GEOM_EPS * scale * scale {
                return Err(Error::InvalidInput("polygon is not convex".into()));
            }
        }
        Self::from_ring(pts).ok_or_else(|| Error::Degenerate("polygon area below 1e-12".into()))
    }

    /// Canonicalize a counterclockwise ring produced internally (clipping,
    /// transforms); `None` when fewer than 3 vertices survive or the area is
    /// below the degeneracy threshold.
    pub(crate) fn from_ring(pts: Vec<Point>) -> Option<Self> {
        let mut pts = dedup_ring(pts);
        let scale = bbox_scale(&pts);
        // Strip vertices whose turn is not strictly left; rounding can leave
        // near-collinear or very slightly reflex corners after clipping.
        let mut changed = true;
        while changed && pts.len() >= 3 {
            changed = false;
            let n = pts.len();
            for i in 0..n {
                let a = pts[(i + n - 1) % n];
                let b = pts[i];
                let c = pts[(i + 1) % n];
                let turn = (b - a).cross(c - b);
                let len = (b - a).norm() * (c - b).norm();
                if turn <= GEOM_EPS * len.max(GEOM_EPS * scale * scale) {
                    pts.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        if pts.len() < 3 {
            return None;
        }
        let poly = Self { vertices: pts };
        (poly.area() >= GEOM_EPS).then_some(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Iterator over directed edges `(v_i, v_{i+1})`.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    /// Apply `x -> scale * R(angle) x + shift`.
    pub fn transform(&self, angle: f64, scale: f64, shift: Point) -> Result<Self> {
        let pts = self
            .vertices
            .iter()
            .map(|&v| v.rotate(angle) * scale + shift)
            .collect();
        Self::new(pts)
    }

    /// Fan triangles `(v0, v_i, v_{i+1})`.
    pub fn fan(&self) -> impl Iterator<Item = [Point; 3]> + '_ {
        let v0 = self.vertices[0];
        self.vertices
            .windows(2)
            .skip(1)
            .map(move |w| [v0, w[0], w[1]])
    }
}

fn dedup_ring(vertices: Vec<Point>) -> Vec<Point> {
    let scale = bbox_scale(&vertices).max(1.0);
    let mut out: Vec<Point> = Vec::with_capacity(vertices.len());
    for p in vertices {
        if out
            .last()
            .is_none_or(|&q| (p - q).norm() > GEOM_EPS * scale)
        {
            out.push(p);
        }
    }
    while out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= GEOM_EPS * scale {
        out.pop();
    }
    out
}

fn bbox_scale(pts: &[Point]) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = lo.min(p.x1).min(p.x2);
        hi = hi.max(p.x1).max(p.x2);
    }
    if pts.is_empty() {
        1.0
    } else {
        (hi - lo).max(f64::MIN_POSITIVE)
    }
}

/// Shoelace signed area; positive for counterclockwise rings.
pub(crate) fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum::<f64>()
}

pub fn polygon_area(poly: &ConvexPolygon) -> f64 {
    poly.area()
}

/// Exact `∬_poly x1^px x2^py` for `px + py <= 2`.
pub fn polygon_moment(poly: &ConvexPolygon, px: u32, py: u32) -> Result<f64> {
    if px + py > 2 {
        return Err(Error::UnsupportedDegree { px, py });
    }
    if px + py == 0 {
        return Ok(poly.area());
    }
    Ok(poly
        .fan()
        .map(|tri| triangle_midpoint_rule(tri, |p| monomial(p, px, py)))
        .sum())
}

/// Signed integral of `f` over a triangle, exact for quadratics.
pub(crate) fn triangle_midpoint_rule(tri: [Point; 3], f: impl Fn(Point) -> f64) -> f64 {
    let [a, b, c] = tri;
    let area = 0.5 * (b - a).cross(c - a);
    let m_ab = (a + b) * 0.5;
    let m_bc = (b + c) * 0.5;
    let m_ca = (c + a) * 0.5;
    area / 3.0 * (f(m_ab) + f(m_bc) + f(m_ca))
}

#[inline]
pub(crate) fn monomial(p: Point, px: u32, py: u32) -> f64 {
    p.x1.powi(px as i32) * p.x2.powi(py as i32)
}

pub fn polygon_centroid(poly: &ConvexPolygon) -> Point {
    let area = poly.area();
    // Degree-1 moments are always in range; the unwraps cannot fire.
    let m10 = polygon_moment(poly, 1, 0).unwrap();
    let m01 = polygon_moment(poly, 0, 1).unwrap();
    Point::new(m10 / area, m01 / area)
}

/// `poly ∩ h`, or `None` when the intersection has area below 1e-12.
pub fn clip_halfplane(poly: &ConvexPolygon, h: &HalfPlane) -> Option<ConvexPolygon> {
    let vals: Vec<f64> = poly.vertices.iter().map(|&v| h.eval(v)).collect();
    if vals.iter().all(|&s| s <= 0.0) {
        return Some(poly.clone());
    }
    if vals.iter().all(|&s| s >= 0.0) {
        return None;
    }
    let n = poly.vertices.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (a, sa) = (poly.vertices[i], vals[i]);
        let (b, sb) = (poly.vertices[(i + 1) % n], vals[(i + 1) % n]);
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push(a + (b - a) * t);
        }
    }
    ConvexPolygon::from_ring(out)
}

/// Clip by every half-plane in turn.
pub fn clip_all(poly: &ConvexPolygon, cuts: &[HalfPlane]) -> Option<ConvexPolygon> {
    let mut cur = poly.clone();
    for h in cuts {
        cur = clip_halfplane(&cur, h)?;
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn rhombus() -> ConvexPolygon {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0 + s, s),
            Point::new(s, s),
        ])
        .unwrap()
    }

    fn half_square_triangle() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn areas() {
        assert_abs_diff_eq!(polygon_area(&unit_square()), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            polygon_area(&rhombus()),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(polygon_area(&half_square_triangle()), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn square_moments() {
        let sq = unit_square();
        assert_eq!(polygon_moment(&sq, 0, 0).unwrap(), 1.0);
        assert_abs_diff_eq!(polygon_moment(&sq, 1, 1).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(polygon_moment(&sq, 2, 0).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(
            polygon_moment(&sq, 2, 1),
            Err(Error::UnsupportedDegree { px: 2, py: 1 })
        );
    }

    #[test]
    fn centroids() {
        let c = polygon_centroid(&unit_square());
        assert_abs_diff_eq!(c.x1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.x2, 0.5, epsilon = 1e-15);
        let c = polygon_centroid(&half_square_triangle());
        assert_abs_diff_eq!(c.x1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.x2, 1.0 / 3.0, epsilon = 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = polygon_centroid(&rhombus());
        assert_abs_diff_eq!(c.x1, 0.5 * (1.0 + s), epsilon = 1e-15);
        assert_abs_diff_eq!(c.x2, 0.5 * s, epsilon = 1e-15);
    }

    #[test]
    fn clipping() {
        let sq = unit_square();
        let left = clip_halfplane(&sq, &HalfPlane::new(Point::new(1.0, 0.0), 0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(left.area(), 0.5, epsilon = 1e-15);
        let expect = [
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(0.5, 1.0),
            Point::new(0.0, 1.0),
        ];
        for v in expect {
            assert!(left.vertices().iter().any(|&w| (w - v).norm() < 1e-15));
        }
        assert_eq!(left.len(), 4);

        let same = clip_halfplane(&sq, &HalfPlane::new(Point::new(1.0, 0.0), 2.0).unwrap()).unwrap();
        assert_eq!(same, sq);
        assert!(clip_halfplane(&sq, &HalfPlane::new(Point::new(1.0, 0.0), -1.0).unwrap()).is_none());
    }

    #[test]
    fn sq_dist_examples() {
        assert_eq!(sq_dist(Point::new(0.0, 0.0), Point::new(1.0, 0.0)), 1.0);
        assert_eq!(sq_dist(Point::ORIGIN, Point::ORIGIN), 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(
            sq_dist(Point::new(1.0, 0.0), Point::new(1.0 + s, s)),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn canonicalization() {
        // clockwise input with a repeated and a collinear vertex
        let p = ConvexPolygon::new(vec![
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.5),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.area() > 0.0);
    }

    #[test]
    fn rejects_bad_polygons() {
        assert!(ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).is_err());
        assert!(ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0)
        ])
        .is_err());
        // dart: reflex vertex at (0.5, 0.2)
        assert!(ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.2),
            Point::new(1.0, 0.0),
            Point::new(0.5, 1.0)
        ])
        .is_err());
        assert!(ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(f64::NAN, 0.0),
            Point::new(0.5, 1.0)
        ])
        .is_err());
        assert!(HalfPlane::new(Point::ORIGIN, 1.0).is_err());
    }

    #[test]
    fn bisector_contains_own_side() {
        let h = HalfPlane::bisector(Point::new(0.25, 0.5), Point::new(0.75, 0.5)).unwrap();
        assert!(h.contains(Point::new(0.1, 0.9)));
        assert!(!h.contains(Point::new(0.9, 0.1)));
        assert_abs_diff_eq!(h.eval(Point::new(0.5, 0.3)), 0.0, epsilon = 1e-15);
    }
}
