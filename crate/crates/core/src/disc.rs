//! Discs and their intersections with convex polygons.
//!
//! A disc cut by half-planes is stored as a "chord polygon" (its boundary
//! with every arc replaced by its chord) plus one circular segment per arc.
//! Moments through degree 2 then come from the exact polygon rule and the
//! closed-form segment integrals; no sampling or quadrature is involved.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geom::{ConvexPolygon, Point};
use crate::moments::{add_monomials, collapsed_gauss, indices, ring_moments, Method, Moments};
use crate::quad::gauss_legendre;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidInput(format!("disc radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn unit() -> Self {
        Self { center: Point::ORIGIN, radius: 1.0 }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        (p - self.center).norm_sq() <= self.radius * self.radius
    }

    /// Axis-aligned square strictly containing the disc.
    pub fn bounding_square(&self) -> ConvexPolygon {
        let h = 1.25 * self.radius;
        let c = self.center;
        ConvexPolygon::new(vec![
            c + Point::new(-h, -h),
            c + Point::new(h, -h),
            c + Point::new(h, h),
            c + Point::new(-h, h),
        ])
        .expect("square around a valid disc")
    }
}

/// A counterclockwise circular arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub start: Point,
    pub end: Point,
    pub start_angle: f64,
    /// Angular extent in `(0, 2π]`.
    pub sweep: f64,
}

/// One piece of a clipped disc's boundary, in counterclockwise order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryElement {
    Line(Point, Point),
    Arc(Arc),
}

/// `disc ∩ polygon` in chord-polygon-plus-segments form.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscPiece {
    pub disc: Disc,
    clip: ConvexPolygon,
    chord: Vec<Point>,
    boundary: Vec<BoundaryElement>,
}

impl DiscPiece {
    /// Intersect `disc` with a convex polygon; `None` when they share no area.
    pub fn intersect(disc: Disc, clip: &ConvexPolygon) -> Option<Self> {
        let c = disc.center;
        let r = disc.radius;
        let verts = clip.vertices();
        let n = verts.len();
        // Portions of each edge inside the disc, as (entry, exit).
        let mut pieces: Vec<(Point, Point)> = Vec::new();
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let d = b - a;
            let f = a - c;
            let qa = d.norm_sq();
            let qb = 2.0 * f.dot(d);
            let qc = f.norm_sq() - r * r;
            let disc_ = qb * qb - 4.0 * qa * qc;
            if disc_ <= 0.0 {
                continue;
            }
            let sq = disc_.sqrt();
            let t0 = (-qb - sq) / (2.0 * qa);
            let t1 = (-qb + sq) / (2.0 * qa);
            let lo = t0.max(0.0);
            let hi = t1.min(1.0);
            if hi - lo <= 1e-14 {
                continue;
            }
            let entry = if lo == 0.0 { a } else { a + d * lo };
            let exit = if hi == 1.0 { b } else { a + d * hi };
            pieces.push((entry, exit));
        }

        if pieces.is_empty() {
            if !clip.contains(c, 0.0) {
                return None;
            }
            let start = c + Point::new(r, 0.0);
            let arc = Arc { start, end: start, start_angle: 0.0, sweep: TAU };
            return Some(Self {
                disc,
                clip: clip.clone(),
                chord: Vec::new(),
                boundary: vec![BoundaryElement::Arc(arc)],
            });
        }

        let same = |p: Point, q: Point| (p - q).norm() <= 1e-12 * r;
        let mut boundary = Vec::new();
        let mut chord: Vec<Point> = Vec::new();
        let k = pieces.len();
        for idx in 0..k {
            let (entry, exit) = pieces[idx];
            if chord.last().is_none_or(|&q| !same(q, entry)) {
                chord.push(entry);
            }
            if !same(entry, exit) {
                boundary.push(BoundaryElement::Line(entry, exit));
                chord.push(exit);
            }
            let next_entry = pieces[(idx + 1) % k].0;
            if !same(exit, next_entry) {
                let a0 = (exit - c).x2.atan2((exit - c).x1);
                let a1 = (next_entry - c).x2.atan2((next_entry - c).x1);
                let mut sweep = (a1 - a0).rem_euclid(TAU);
                if sweep <= 0.0 {
                    sweep = TAU;
                }
                boundary.push(BoundaryElement::Arc(Arc {
                    start: exit,
                    end: next_entry,
                    start_angle: a0,
                    sweep,
                }));
            }
        }
        while chord.len() > 1 && same(chord[0], chord[chord.len() - 1]) {
            chord.pop();
        }
        Some(Self { disc, clip: clip.clone(), chord, boundary })
    }

    pub fn boundary(&self) -> &[BoundaryElement] {
        &self.boundary
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Arc> {
        self.boundary.iter().filter_map(|b| match b {
            BoundaryElement::Arc(a) => Some(a),
            BoundaryElement::Line(..) => None,
        })
    }

    /// The boundary with every arc replaced by its chord.
    pub fn chord_polygon(&self) -> &[Point] {
        &self.chord
    }

    pub fn contains(&self, p: Point) -> bool {
        self.disc.contains(p) && self.clip.contains(p, 0.0)
    }

    pub fn moments(&self, degree: usize) -> Moments {
        let mut m = ring_moments(&self.chord, degree);
        for arc in self.arcs() {
            let seg = if degree <= 2 {
                segment_moments(&self.disc, arc, degree)
            } else {
                segment_moments_quadrature(&self.disc, arc, degree)
            };
            m.accumulate(&seg);
        }
        m
    }
}

/// Closed-form moments (degree <= 2) of the region between an arc and its chord.
///
/// In the local frame `(s, t)` aligned with the arc's bisecting radius and
/// centred on the disc, with half-angle `θ`:
/// area `r²(θ - sinθ cosθ)`, `∫s = 2r³ sin³θ / 3`, `∫t = ∫st = 0`,
/// `∫s² = r⁴(θ + sinθ cosθ)/4 - r⁴ cos³θ sinθ / 2`,
/// `∫t² = r⁴(θ - sinθ cosθ)/4 - r⁴ sin³θ cosθ / 6`.
/// The expressions stay valid past a half disc (`θ > π/2`).
pub fn segment_moments(disc: &Disc, arc: &Arc, degree: usize) -> Moments {
    assert!(degree <= 2);
    let r = disc.radius;
    let theta = 0.5 * arc.sweep;
    let psi = arc.start_angle + theta;
    let (s, c) = theta.sin_cos();
    let r2 = r * r;
    let r4 = r2 * r2;
    let area = r2 * (theta - s * c);
    let first_s = 2.0 / 3.0 * r2 * r * s * s * s;
    let i_ss = r4 / 4.0 * (theta + s * c) - r4 * c * c * c * s / 2.0;
    let i_tt = r4 / 4.0 * (theta - s * c) - r4 * s * s * s * c / 6.0;

    let (uy, ux) = psi.sin_cos();
    let (vx, vy) = (-uy, ux);
    let o = disc.center;

    let mut m = Moments::zero(degree, Method::SegmentAnalytic);
    m.set(0, 0, area);
    if degree >= 1 {
        m.set(1, 0, o.x1 * area + ux * first_s);
        m.set(0, 1, o.x2 * area + uy * first_s);
    }
    if degree >= 2 {
        m.set(2, 0, o.x1 * o.x1 * area + 2.0 * o.x1 * ux * first_s + ux * ux * i_ss + vx * vx * i_tt);
        m.set(0, 2, o.x2 * o.x2 * area + 2.0 * o.x2 * uy * first_s + uy * uy * i_ss + vy * vy * i_tt);
        m.set(
            1,
            1,
            o.x1 * o.x2 * area + (o.x1 * uy + o.x2 * ux) * first_s + ux * uy * i_ss + vx * vy * i_tt,
        );
    }
    m
}

/// Segment moments of any degree: polar Gauss rule over the sector minus the
/// signed triangle `(center, start, end)`.
fn segment_moments_quadrature(disc: &Disc, arc: &Arc, degree: usize) -> Moments {
    let fine = sector_moments(disc, arc, degree, 24);
    let coarse = sector_moments(disc, arc, degree, 16);
    let mut tri = Moments::zero(degree, Method::Quadrature);
    collapsed_gauss([disc.center, arc.start, arc.end], degree, 4, &mut tri);
    let mut m = fine.clone();
    m.subtract(&tri);
    m.method = Method::Quadrature;
    m.estimated_error = indices(degree)
        .map(|(i, j)| (fine.get(i, j) - coarse.get(i, j)).abs())
        .fold(0.0, f64::max);
    m
}

fn sector_moments(disc: &Disc, arc: &Arc, degree: usize, k_angle: usize) -> Moments {
    let mut m = Moments::zero(degree, Method::Quadrature);
    let (xr, wr) = gauss_legendre(4);
    let (xa, wa) = gauss_legendre(k_angle);
    // Split the sweep into quarter turns so the angular rule stays accurate.
    let chunks = (arc.sweep / (0.5 * PI)).ceil().max(1.0) as usize;
    let h = arc.sweep / chunks as f64;
    let r = disc.radius;
    for chunk in 0..chunks {
        let a0 = arc.start_angle + chunk as f64 * h;
        for (xa, wa) in xa.iter().zip(&wa) {
            let phi = a0 + 0.5 * h * (xa + 1.0);
            let dir = Point::new(phi.cos(), phi.sin());
            for (xr, wr) in xr.iter().zip(&wr) {
                let rho = 0.5 * r * (xr + 1.0);
                let weight = 0.25 * h * r * wa * wr * rho;
                add_monomials(&mut m, disc.center + dir * rho, weight, degree);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::HalfPlane;
    use approx::assert_abs_diff_eq;

    fn cut(disc: Disc, cuts: &[HalfPlane]) -> Option<DiscPiece> {
        let sq = crate::geom::clip_all(&disc.bounding_square(), cuts)?;
        DiscPiece::intersect(disc, &sq)
    }

    #[test]
    fn full_disc_moments() {
        let d = Disc::new(Point::new(0.3, -0.2), 2.0).unwrap();
        let m = cut(d, &[]).unwrap().moments(2);
        let a = d.area();
        assert_abs_diff_eq!(m.get(0, 0), a, epsilon = 1e-13);
        assert_abs_diff_eq!(m.get(1, 0), 0.3 * a, epsilon = 1e-13);
        assert_abs_diff_eq!(m.get(0, 1), -0.2 * a, epsilon = 1e-13);
        // ∬ x² = π r⁴/4 + cx² A
        assert_abs_diff_eq!(m.get(2, 0), PI * 16.0 / 4.0 + 0.09 * a, epsilon = 1e-12);
        assert_abs_diff_eq!(m.get(1, 1), -0.06 * a, epsilon = 1e-12);
    }

    #[test]
    fn half_disc_centroid() {
        let d = Disc::unit();
        let upper = cut(d, &[HalfPlane::new(Point::new(0.0, -1.0), 0.0).unwrap()]).unwrap();
        let m = upper.moments(2);
        assert_abs_diff_eq!(m.get(0, 0), PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.get(0, 1) / m.get(0, 0), 4.0 / (3.0 * PI), epsilon = 1e-14);
        assert_abs_diff_eq!(m.get(1, 0), 0.0, epsilon = 1e-14);
        assert_eq!(upper.arcs().count(), 1);
    }

    #[test]
    fn polygon_inside_disc_is_exact_polygon() {
        let d = Disc::new(Point::ORIGIN, 10.0).unwrap();
        let sq = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let piece = DiscPiece::intersect(d, &sq).unwrap();
        let m = piece.moments(2);
        assert_eq!(m.method, Method::ExactPolygon);
        assert_abs_diff_eq!(m.get(0, 0), 1.0, epsilon = 1e-15);
        assert!(DiscPiece::intersect(
            Disc::new(Point::new(5.0, 5.0), 1.0).unwrap(),
            &sq
        )
        .is_none());
    }

    #[test]
    fn high_degree_segment_rule_agrees_with_closed_form() {
        let d = Disc::new(Point::new(0.1, 0.2), 0.7).unwrap();
        let h = HalfPlane::new(Point::new(1.0, 2.0), 0.4).unwrap();
        let piece = cut(d, &[h]).unwrap();
        let exact = piece.moments(2);
        let quad = piece.moments(4);
        for (i, j) in indices(2) {
            assert_abs_diff_eq!(exact.get(i, j), quad.get(i, j), epsilon = 1e-13);
        }
        assert!(quad.estimated_error < 1e-12);
    }
}
