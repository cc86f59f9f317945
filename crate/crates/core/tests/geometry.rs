mod common;

use std::f64::consts::PI;

use common::{fan_centroid, hull_polygon, shoelace};
use cvtq_core::disc::Disc;
use cvtq_core::geom::{clip_halfplane, polygon_area, polygon_moment};
use cvtq_core::region::{centroid_between_curves, expected_vector};
use cvtq_core::{ConvexPolygon, Density, HalfPlane, Point, Region, Shape, Term};
use proptest::prelude::*;

fn cloud() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 3..12)
}

fn polygon() -> impl Strategy<Value = ConvexPolygon> {
    cloud().prop_filter_map("thin hull", |pts| hull_polygon(pts, 0.05))
}

fn halfplane() -> impl Strategy<Value = HalfPlane> {
    (0.0..2.0 * PI, -1.0..1.0f64).prop_map(|(t, c)| HalfPlane::new(Point::new(t.cos(), t.sin()), c).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn area_matches_shoelace(pts in cloud()) {
        if let Some(p) = hull_polygon(pts.clone(), 1e-6) {
            let ring: Vec<(f64, f64)> = p.vertices().iter().map(|v| (v.x1, v.x2)).collect();
            prop_assert!(rel(polygon_area(&p), shoelace(&ring)) < 1e-12);
        }
    }

    #[test]
    fn clipping_is_additive(p in polygon(), h in halfplane()) {
        let parts = [clip_halfplane(&p, &h), clip_halfplane(&p, &h.complement())];
        for (px, py) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
            let whole = polygon_moment(&p, px, py).unwrap();
            let sum: f64 = parts.iter().flatten().map(|q| polygon_moment(q, px, py).unwrap()).sum();
            prop_assert!((whole - sum).abs() < 1e-10 * (1.0 + whole.abs()), "({px},{py}) {whole} vs {sum}");
        }
    }

    #[test]
    fn moments_follow_translation_and_scaling(
        p in polygon(),
        dx in -3.0..3.0f64,
        dy in -3.0..3.0f64,
        s in 0.2..4.0f64,
        angle in 0.0..2.0 * PI,
    ) {
        let a = polygon_area(&p);
        let m10 = polygon_moment(&p, 1, 0).unwrap();
        let m01 = polygon_moment(&p, 0, 1).unwrap();
        let shifted = p.transform(0.0, 1.0, Point::new(dx, dy)).unwrap();
        prop_assert!(rel(polygon_area(&shifted), a) < 1e-12);
        prop_assert!((polygon_moment(&shifted, 1, 0).unwrap() - (m10 + dx * a)).abs() < 1e-10);
        prop_assert!((polygon_moment(&shifted, 0, 1).unwrap() - (m01 + dy * a)).abs() < 1e-10);

        let scaled = p.transform(angle, s, Point::ORIGIN).unwrap();
        prop_assert!(rel(polygon_area(&scaled), s * s * a) < 1e-12);
        // The polar moment is rotation invariant and has degree 4 in lengths.
        let polar = |q: &ConvexPolygon| polygon_moment(q, 2, 0).unwrap() + polygon_moment(q, 0, 2).unwrap();
        prop_assert!(rel(polar(&scaled), s.powi(4) * polar(&p)) < 1e-10);
    }

    #[test]
    fn expected_vector_is_the_centroid(p in polygon()) {
        let r = Region::uniform(Shape::Polygon(p.clone())).unwrap();
        let e = expected_vector(&r);
        let c = fan_centroid(&p);
        prop_assert!((e - c).norm() < 1e-9, "{e:?} vs {c:?}");
    }

    #[test]
    fn disc_cut_conserves_mass(h in halfplane(), r in 0.3..2.0f64) {
        let region = Region::uniform(Shape::Disc(Disc::new(Point::new(0.1, -0.2), r).unwrap())).unwrap();
        let mass: f64 = [h, h.complement()]
            .iter()
            .filter_map(|cut| region.clip(&[*cut]))
            .map(|g| region.profile_of(&g).mass)
            .sum();
        prop_assert!(rel(mass, PI * r * r) < 1e-10);
    }

    #[test]
    fn polynomial_density_moments_are_additive(p in polygon(), h in halfplane(), c in 0.1..2.0f64) {
        let density = Density::Polynomial(vec![
            Term { coef: c, px: 0, py: 0 },
            Term { coef: 0.3, px: 2, py: 0 },
            Term { coef: 0.2, px: 1, py: 1 },
            Term { coef: 0.3, px: 0, py: 2 },
        ]);
        let r = Region::new(Shape::Polygon(p), density).unwrap();
        let whole = r.mass_profile();
        let parts: Vec<_> = [h, h.complement()]
            .iter()
            .filter_map(|cut| r.clip(&[*cut]))
            .map(|g| r.profile_of(&g))
            .collect();
        let mass: f64 = parts.iter().map(|q| q.mass).sum();
        let m20: f64 = parts.iter().map(|q| q.m20).sum();
        prop_assert!(rel(mass, whole.mass) < 1e-10);
        prop_assert!(rel(m20, whole.m20) < 1e-10);
    }
}

#[test]
fn quarter_disc_between_curves() {
    // Quarter disc x in [0, 1], 0 <= y <= sqrt(1 - x²): centroid (4/(3π), 4/(3π)).
    let c = centroid_between_curves(|x| (1.0 - x * x).max(0.0).sqrt(), |_| 0.0, 0.0, 1.0).unwrap();
    let k = 4.0 / (3.0 * PI);
    assert!((c - Point::new(k, k)).norm() < 1e-9, "{c:?}");
}

#[test]
fn triangle_between_lines() {
    let c = centroid_between_curves(|x| x, |_| 0.0, 0.0, 1.0).unwrap();
    assert!((c - Point::new(2.0 / 3.0, 1.0 / 3.0)).norm() < 1e-12);
}
