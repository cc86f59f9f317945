//! Raw monomial moments `∬ x1^i x2^j dA` over cell geometries.
//!
//! Every density-weighted quantity downstream (mass, centroid, distortion) is
//! a linear combination of these. Densities are polynomials of total degree
//! at most 2 and distortion adds 2 more, so tables stop at degree 4.

use serde::Serialize;

use crate::geom::{monomial, triangle_midpoint_rule, Point};
use crate::quad::gauss_legendre;

pub const MAX_DEGREE: usize = 4;

/// How an integral was obtained, ordered from most to least exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactPolygon,
    SegmentAnalytic,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactPolygon => "exact-polygon",
            Method::SegmentAnalytic => "segment-analytic",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Table of raw moments up to `degree`, with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    raw: [[f64; MAX_DEGREE + 1]; MAX_DEGREE + 1],
    degree: usize,
    pub method: Method,
    pub estimated_error: f64,
}

impl Moments {
    pub fn zero(degree: usize, method: Method) -> Self {
        assert!(degree <= MAX_DEGREE);
        Self {
            raw: [[0.0; MAX_DEGREE + 1]; MAX_DEGREE + 1],
            degree,
            method,
            estimated_error: 0.0,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `∬ x1^i x2^j`; panics outside the computed degree.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i + j <= self.degree, "moment ({i},{j}) beyond degree {}", self.degree);
        self.raw[i][j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.raw[i][j] = v;
    }

    pub(crate) fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.raw[i][j] += v;
    }

    /// Accumulate `other` (same degree); provenance degrades to the weaker method.
    pub fn accumulate(&mut self, other: &Moments) {
        debug_assert_eq!(self.degree, other.degree);
        for (i, j) in indices(self.degree) {
            self.raw[i][j] += other.raw[i][j];
        }
        self.method = self.method.max(other.method);
        self.estimated_error += other.estimated_error;
    }

    /// Subtract `other` (same degree).
    pub fn subtract(&mut self, other: &Moments) {
        for (i, j) in indices(self.degree) {
            self.raw[i][j] -= other.raw[i][j];
        }
        self.method = self.method.max(other.method);
        self.estimated_error += other.estimated_error;
    }
}

/// All `(i, j)` with `i + j <= degree`.
pub fn indices(degree: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=degree).flat_map(move |i| (0..=degree - i).map(move |j| (i, j)))
}

/// Moments of a counterclockwise convex ring (may be degenerate: fewer than
/// three points contribute nothing).
///
/// Degree <= 2 uses the edge-midpoint triangle rule and is exact. Higher
/// degrees use a collapsed Gauss product rule; with 3 points per direction it
/// is already exact through degree 4, and the 4-point rule supplies the error
/// estimate.
pub fn ring_moments(ring: &[Point], degree: usize) -> Moments {
    let mut m = Moments::zero(degree, Method::ExactPolygon);
    if ring.len() < 3 {
        return m;
    }
    let v0 = ring[0];
    let tris = ring.windows(2).skip(1).map(|w| [v0, w[0], w[1]]);
    if degree <= 2 {
        for tri in tris {
            for (i, j) in indices(degree) {
                m.add_to(i, j, triangle_midpoint_rule(tri, |p| monomial(p, i as u32, j as u32)));
            }
        }
        return m;
    }
    m.method = Method::Quadrature;
    let mut coarse = Moments::zero(degree, Method::Quadrature);
    for tri in tris {
        collapsed_gauss(tri, degree, 4, &mut m);
        collapsed_gauss(tri, degree, 3, &mut coarse);
    }
    m.estimated_error = indices(degree)
        .map(|(i, j)| (m.get(i, j) - coarse.get(i, j)).abs())
        .fold(0.0, f64::max);
    m
}

/// Signed integral over a triangle via the square-to-triangle collapse
/// `x = a + u (b - a) + u v (c - b)`, Jacobian `u * cross(b - a, c - b)`.
pub(crate) fn collapsed_gauss(tri: [Point; 3], degree: usize, k: usize, out: &mut Moments) {
    let [a, b, c] = tri;
    let jac = (b - a).cross(c - b);
    let (x, w) = gauss_legendre(k);
    for (xu, wu) in x.iter().zip(&w) {
        let u = 0.5 * (xu + 1.0);
        for (xv, wv) in x.iter().zip(&w) {
            let v = 0.5 * (xv + 1.0);
            let p = a + (b - a) * u + (c - b) * (u * v);
            let weight = 0.25 * wu * wv * u * jac;
            add_monomials(out, p, weight, degree);
        }
    }
}

/// `out[i][j] += weight * p.x1^i p.x2^j` for all `i + j <= degree`.
pub(crate) fn add_monomials(out: &mut Moments, p: Point, weight: f64, degree: usize) {
    let mut px = [1.0; MAX_DEGREE + 1];
    let mut py = [1.0; MAX_DEGREE + 1];
    for k in 1..=degree {
        px[k] = px[k - 1] * p.x1;
        py[k] = py[k - 1] * p.x2;
    }
    for (i, j) in indices(degree) {
        out.add_to(i, j, weight * px[i] * py[j]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_square_table() {
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let m = ring_moments(&sq, 4);
        for (i, j) in indices(4) {
            let exact = 1.0 / ((i + 1) * (j + 1)) as f64;
            assert_abs_diff_eq!(m.get(i, j), exact, epsilon = 1e-15);
        }
        assert!(m.estimated_error < 1e-15);
        assert_eq!(ring_moments(&sq, 2).method, Method::ExactPolygon);
    }

    #[test]
    fn degenerate_rings_contribute_nothing() {
        let m = ring_moments(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0)], 2);
        assert_eq!(m.get(0, 0), 0.0);
    }
}
