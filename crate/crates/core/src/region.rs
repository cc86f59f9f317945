//! Regions with densities: convex polygons, discs and laminas between two
//! curves, each carrying a uniform or low-degree polynomial density.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::disc::{Disc, DiscPiece};
use crate::error::{Error, Result};
use crate::geom::{clip_all, ConvexPolygon, HalfPlane, Point};
use crate::moments::{indices, ring_moments, Method, Moments};
use crate::quad::adaptive_gk;

/// Absolute tolerance of curve-bounded quadrature.
pub const QUAD_TOL: f64 = 1e-10;
/// Evaluation cap for curve-bounded quadrature.
pub const QUAD_MAX_EVALS: usize = 1_000_000;

const DENSITY_SAMPLES: usize = 10_000;
const CURVE_SAMPLES: usize = 1_000;

/// One monomial `coef * x1^px * x2^py`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    pub px: u32,
    pub py: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    Uniform,
    Polynomial(Vec<Term>),
}

impl Density {
    pub fn terms(&self) -> Vec<Term> {
        match self {
            Density::Uniform => vec![Term { coef: 1.0, px: 0, py: 0 }],
            Density::Polynomial(t) => t.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        self.terms().iter().map(|t| (t.px + t.py) as usize).max().unwrap_or(0)
    }

    /// True for `Uniform` and for polynomials with only a constant term.
    pub fn is_constant(&self) -> bool {
        self.terms().iter().all(|t| t.coef == 0.0 || t.px + t.py == 0)
    }

    pub fn eval(&self, p: Point) -> f64 {
        match self {
            Density::Uniform => 1.0,
            Density::Polynomial(terms) => terms
                .iter()
                .map(|t| t.coef * p.x1.powi(t.px as i32) * p.x2.powi(t.py as i32))
                .sum(),
        }
    }
}

pub type CurveFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The lamina `{(x1, x2) : a <= x1 <= b, lower(x1) <= x2 <= upper(x1)}`.
#[derive(Clone)]
pub struct CurveBounded {
    pub upper: CurveFn,
    pub lower: CurveFn,
    pub a: f64,
    pub b: f64,
}

impl fmt::Debug for CurveBounded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveBounded")
            .field("a", &self.a)
            .field("b", &self.b)
            .finish_non_exhaustive()
    }
}

impl CurveBounded {
    pub fn new(upper: CurveFn, lower: CurveFn, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInput(format!("need a < b, got [{a}, {b}]")));
        }
        let c = Self { upper, lower, a, b };
        for x in c.grid(CURVE_SAMPLES) {
            let (hi, lo) = ((c.upper)(x), (c.lower)(x));
            if !(hi.is_finite() && lo.is_finite()) {
                return Err(Error::InvalidInput(format!("curve not finite at x = {x}")));
            }
            if hi < lo {
                return Err(Error::InvalidInput(format!("upper curve below lower at x = {x}")));
            }
        }
        Ok(c)
    }

    fn grid(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        (0..k).map(move |i| self.a + (self.b - self.a) * i as f64 / (k - 1) as f64)
    }

    /// Sampled convexity: upper concave and lower convex on a uniform grid.
    pub fn is_convex(&self) -> bool {
        let xs: Vec<f64> = self.grid(CURVE_SAMPLES).collect();
        let tol = 1e-9;
        xs.windows(3).all(|w| {
            let du = (self.upper)(w[0]) + (self.upper)(w[2]) - 2.0 * (self.upper)(w[1]);
            let dl = (self.lower)(w[0]) + (self.lower)(w[2]) - 2.0 * (self.lower)(w[1]);
            du <= tol && dl >= -tol
        })
    }

    /// Bounding box `(min, max)` estimated from a grid, padded slightly.
    pub fn bounding_box(&self) -> (Point, Point) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in self.grid(CURVE_SAMPLES) {
            lo = lo.min((self.lower)(x));
            hi = hi.max((self.upper)(x));
        }
        let pad = 1e-3 * (hi - lo).max(self.b - self.a);
        (Point::new(self.a, lo - pad), Point::new(self.b, hi + pad))
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x1 >= self.a && p.x1 <= self.b && p.x2 >= (self.lower)(p.x1) && p.x2 <= (self.upper)(p.x1)
    }
}

/// A curve-bounded lamina intersected with half-planes.
#[derive(Clone, Debug)]
pub struct CurvePiece {
    pub curves: CurveBounded,
    pub cuts: Vec<HalfPlane>,
}

impl CurvePiece {
    /// The vertical slice at `x`, or `None` when empty.
    fn slice(&self, x: f64) -> Option<(f64, f64)> {
        let mut lo = (self.curves.lower)(x);
        let mut hi = (self.curves.upper)(x);
        for h in &self.cuts {
            let n = h.normal();
            let rhs = h.offset() - n.x1 * x;
            if n.x2 > 0.0 {
                hi = hi.min(rhs / n.x2);
            } else if n.x2 < 0.0 {
                lo = lo.max(rhs / n.x2);
            } else if rhs < 0.0 {
                return None;
            }
        }
        (hi > lo).then_some((lo, hi))
    }

    /// Slice integration: closed form in `x2`, adaptive Gauss-Kronrod in `x1`.
    pub fn moments(&self, degree: usize) -> Moments {
        let idx: Vec<(usize, usize)> = indices(degree).collect();
        let r = adaptive_gk(
            |x| {
                let mut out = vec![0.0; idx.len()];
                if let Some((lo, hi)) = self.slice(x) {
                    for (k, &(i, j)) in idx.iter().enumerate() {
                        let jj = j as i32 + 1;
                        out[k] = x.powi(i as i32) * (hi.powi(jj) - lo.powi(jj)) / jj as f64;
                    }
                }
                out
            },
            self.curves.a,
            self.curves.b,
            idx.len(),
            QUAD_TOL,
            QUAD_MAX_EVALS,
        );
        let mut m = Moments::zero(degree, Method::Quadrature);
        for (k, &(i, j)) in idx.iter().enumerate() {
            m.set(i, j, r.value[k]);
        }
        m.estimated_error = r.error;
        m
    }

    pub fn contains(&self, p: Point) -> bool {
        self.curves.contains(p) && self.cuts.iter().all(|h| h.contains(p))
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    Polygon(ConvexPolygon),
    Disc(Disc),
    CurveBounded(CurveBounded),
}

/// The part of a region's shape that survives a list of half-plane cuts.
#[derive(Clone, Debug)]
pub enum CellGeometry {
    Polygon(ConvexPolygon),
    ClippedDisc(DiscPiece),
    ClippedCurves(CurvePiece),
}

impl CellGeometry {
    pub fn moments(&self, degree: usize) -> Moments {
        match self {
            CellGeometry::Polygon(p) => ring_moments(p.vertices(), degree),
            CellGeometry::ClippedDisc(d) => d.moments(degree),
            CellGeometry::ClippedCurves(c) => c.moments(degree),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            CellGeometry::Polygon(poly) => poly.contains(p, 1e-12),
            CellGeometry::ClippedDisc(d) => d.contains(p),
            CellGeometry::ClippedCurves(c) => c.contains(p),
        }
    }
}

/// Cached mass and raw moments of a density over a piece of a region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassProfile {
    pub mass: f64,
    pub first_moments: Point,
    pub m20: f64,
    pub m11: f64,
    pub m02: f64,
    pub method: Method,
    pub estimated_error: f64,
}

impl MassProfile {
    pub fn zero() -> Self {
        Self {
            mass: 0.0,
            first_moments: Point::ORIGIN,
            m20: 0.0,
            m11: 0.0,
            m02: 0.0,
            method: Method::ExactPolygon,
            estimated_error: 0.0,
        }
    }

    /// Combine raw shape moments with the density's monomial terms.
    pub fn from_moments(m: &Moments, density: &Density) -> Self {
        let mut p = Self::zero();
        for t in density.terms() {
            let (i, j) = (t.px as usize, t.py as usize);
            p.mass += t.coef * m.get(i, j);
            p.first_moments.x1 += t.coef * m.get(i + 1, j);
            p.first_moments.x2 += t.coef * m.get(i, j + 1);
            p.m20 += t.coef * m.get(i + 2, j);
            p.m11 += t.coef * m.get(i + 1, j + 1);
            p.m02 += t.coef * m.get(i, j + 2);
        }
        p.method = m.method;
        p.estimated_error = m.estimated_error;
        p
    }

    pub fn centroid(&self) -> Point {
        self.first_moments / self.mass
    }

    /// `∬ |x - c|^2 ρ dA` over the piece (not normalized).
    pub fn second_moment_about(&self, c: Point) -> f64 {
        let v = self.m20 + self.m02 - 2.0 * c.dot(self.first_moments) + c.norm_sq() * self.mass;
        v.max(0.0)
    }

    /// `E|X - E X|^2`, the one-point quantization error.
    pub fn variance(&self) -> f64 {
        self.second_moment_about(self.centroid()) / self.mass
    }
}

#[derive(Clone, Debug)]
pub struct Region {
    pub shape: Shape,
    pub density: Density,
}

impl Region {
    /// Validate shape and density: polynomial densities are limited to total
    /// degree 2, must be nonnegative on sampled points and carry positive mass.
    pub fn new(shape: Shape, density: Density) -> Result<Self> {
        if let Density::Polynomial(terms) = &density {
            if terms.is_empty() {
                return Err(Error::InvalidInput("polynomial density without terms".into()));
            }
            for t in terms {
                if !t.coef.is_finite() {
                    return Err(Error::InvalidInput("density coefficient is not finite".into()));
                }
                if t.px + t.py > 2 {
                    return Err(Error::UnsupportedDegree { px: t.px, py: t.py });
                }
            }
        }
        let region = Self { shape, density };
        if !region.density.is_constant() || matches!(region.density, Density::Polynomial(_)) {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for p in region.sample(&mut rng, DENSITY_SAMPLES) {
                if region.density.eval(p) < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "density is negative at ({}, {})",
                        p.x1, p.x2
                    )));
                }
            }
        }
        let mass = region.mass_profile().mass;
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::Degenerate("region has no positive mass".into()));
        }
        Ok(region)
    }

    pub fn uniform(shape: Shape) -> Result<Self> {
        Self::new(shape, Density::Uniform)
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        Self::uniform(Shape::Polygon(ConvexPolygon::new(vertices)?))
    }

    /// Moment degree needed to combine the density with a quadratic integrand.
    pub fn moment_degree(&self) -> usize {
        self.density.degree() + 2
    }

    /// The full shape as a cell.
    pub fn whole(&self) -> CellGeometry {
        self.clip(&[]).expect("validated region is non-empty")
    }

    /// Shape ∩ cuts; `None` when the remainder has area below 1e-12.
    pub fn clip(&self, cuts: &[HalfPlane]) -> Option<CellGeometry> {
        match &self.shape {
            Shape::Polygon(p) => clip_all(p, cuts).map(CellGeometry::Polygon),
            Shape::Disc(d) => {
                let sq = clip_all(&d.bounding_square(), cuts)?;
                let piece = DiscPiece::intersect(*d, &sq)?;
                (piece.moments(0).get(0, 0) >= 1e-12).then_some(CellGeometry::ClippedDisc(piece))
            }
            Shape::CurveBounded(c) => {
                let piece = CurvePiece { curves: c.clone(), cuts: cuts.to_vec() };
                if cuts.is_empty() {
                    return Some(CellGeometry::ClippedCurves(piece));
                }
                (piece.moments(0).get(0, 0) >= 1e-12).then_some(CellGeometry::ClippedCurves(piece))
            }
        }
    }

    pub fn profile_of(&self, cell: &CellGeometry) -> MassProfile {
        MassProfile::from_moments(&cell.moments(self.moment_degree()), &self.density)
    }

    pub fn mass_profile(&self) -> MassProfile {
        self.profile_of(&self.whole())
    }

    /// Density-weighted mean position.
    pub fn expected_vector(&self) -> Point {
        self.mass_profile().centroid()
    }

    /// Geometric centroid of the shape, ignoring the density.
    pub fn shape_centroid(&self) -> Point {
        let m = self.whole().moments(1);
        Point::new(m.get(1, 0) / m.get(0, 0), m.get(0, 1) / m.get(0, 0))
    }

    /// Quantization requires a convex shape; curve-bounded shapes are sampled.
    pub fn check_convex(&self) -> Result<()> {
        match &self.shape {
            Shape::CurveBounded(c) if !c.is_convex() => {
                Err(Error::InvalidInput("curve-bounded region is not convex".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match &self.shape {
            Shape::Polygon(poly) => poly.contains(p, 1e-12),
            Shape::Disc(d) => d.contains(p),
            Shape::CurveBounded(c) => c.contains(p),
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        match &self.shape {
            Shape::Polygon(poly) => {
                let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in poly.vertices() {
                    lo = Point::new(lo.x1.min(v.x1), lo.x2.min(v.x2));
                    hi = Point::new(hi.x1.max(v.x1), hi.x2.max(v.x2));
                }
                (lo, hi)
            }
            Shape::Disc(d) => {
                let r = Point::new(d.radius, d.radius);
                (d.center - r, d.center + r)
            }
            Shape::CurveBounded(c) => c.bounding_box(),
        }
    }

    /// Points uniformly distributed over the shape (density ignored).
    ///
    /// Polygons pick a fan triangle by area and then a barycentric point, so
    /// the draw is exactly equivariant under similarity transforms; other
    /// shapes use rejection from the bounding box.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(count);
        match &self.shape {
            Shape::Polygon(poly) => {
                let tris: Vec<[Point; 3]> = poly.fan().collect();
                let mut cum = Vec::with_capacity(tris.len());
                let mut acc = 0.0;
                for [a, b, c] in &tris {
                    acc += 0.5 * (*b - *a).cross(*c - *a);
                    cum.push(acc);
                }
                for _ in 0..count {
                    let t: f64 = rng.random::<f64>() * acc;
                    let k = cum.partition_point(|&c| c < t).min(tris.len() - 1);
                    let [a, b, c] = tris[k];
                    let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
                    if u + v > 1.0 {
                        u = 1.0 - u;
                        v = 1.0 - v;
                    }
                    out.push(a + (b - a) * u + (c - a) * v);
                }
            }
            _ => {
                let (lo, hi) = self.bounding_box();
                while out.len() < count {
                    let p = Point::new(
                        lo.x1 + (hi.x1 - lo.x1) * rng.random::<f64>(),
                        lo.x2 + (hi.x2 - lo.x2) * rng.random::<f64>(),
                    );
                    if self.contains(p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

/// `(1/A ∫ x (f - g), 1/A ∫ (f² - g²)/2)` with `A = ∫ (f - g)` over `[a, b]`.
pub fn centroid_between_curves<F, G>(f: F, g: G, a: f64, b: f64) -> Result<Point>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::InvalidInput(format!("need a < b, got [{a}, {b}]")));
    }
    let r = adaptive_gk(
        |x| {
            let (hi, lo) = (f(x), g(x));
            vec![hi - lo, x * (hi - lo), 0.5 * (hi * hi - lo * lo)]
        },
        a,
        b,
        3,
        QUAD_TOL,
        QUAD_MAX_EVALS,
    );
    let area = r.value[0];
    if area.is_nan() || area <= 0.0 {
        return Err(Error::Degenerate(format!("area between curves is {area}")));
    }
    Ok(Point::new(r.value[1] / area, r.value[2] / area))
}

pub fn expected_vector(region: &Region) -> Point {
    region.expected_vector()
}

pub fn mass_profile(region: &Region) -> MassProfile {
    region.mass_profile()
}

pub const PRESETS: [&str; 6] = [
    "example1",
    "example2",
    "prop2-disc",
    "prop3-triangle",
    "prop4-rhombus",
    "unit-square",
];

/// Built-in regions by name.
pub fn preset(name: &str) -> Option<Region> {
    let unit_square = || {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    };
    let region = match name {
        "example1" => Region::uniform(Shape::CurveBounded(
            CurveBounded::new(
                Arc::new(|x: f64| (1.0 - x * x).max(0.0).sqrt()),
                Arc::new(|x: f64| x - 1.0),
                0.0,
                1.0,
            )
            .unwrap(),
        )),
        "example2" => Region::new(
            Shape::Polygon(unit_square()),
            Density::Polynomial(vec![Term { coef: 4.0, px: 1, py: 1 }]),
        ),
        "prop2-disc" => Region::uniform(Shape::Disc(Disc::unit())),
        "prop3-triangle" => {
            Region::polygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0)])
        }
        "prop4-rhombus" => Region::new(
            Shape::Polygon(rhombus()),
            Density::Polynomial(vec![Term { coef: 2f64.sqrt(), px: 0, py: 0 }]),
        ),
        "unit-square" => Region::uniform(Shape::Polygon(unit_square())),
        _ => return None,
    };
    Some(region.expect("presets are valid"))
}

/// The unit-side rhombus `O(0,0), A(1,0), B(1+1/√2, 1/√2), C(1/√2, 1/√2)`.
pub fn rhombus() -> ConvexPolygon {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ConvexPolygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0 + s, s),
        Point::new(s, s),
    ])
    .expect("rhombus is convex")
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ShapeSpec {
    Polygon { vertices: Vec<Point> },
    Disc { center: Point, radius: f64 },
}

#[derive(Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum DensitySpec {
    #[default]
    Uniform,
    Polynomial { terms: Vec<Term> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    format: String,
    shape: ShapeSpec,
    #[serde(default)]
    density: DensitySpec,
}

pub const REGION_FORMAT: &str = "cvtq-region/1";

impl Region {
    /// Parse a `cvtq-region/1` document.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: RegionFile = serde_json::from_str(text)?;
        if file.format != REGION_FORMAT {
            return Err(Error::InvalidInput(format!(
                "unsupported format {:?}, expected {REGION_FORMAT:?}",
                file.format
            )));
        }
        let shape = match file.shape {
            ShapeSpec::Polygon { vertices } => Shape::Polygon(ConvexPolygon::new(vertices)?),
            ShapeSpec::Disc { center, radius } => Shape::Disc(Disc::new(center, radius)?),
        };
        let density = match file.density {
            DensitySpec::Uniform => Density::Uniform,
            DensitySpec::Polynomial { terms } => Density::Polynomial(terms),
        };
        Region::new(shape, density)
    }

    /// Serialize polygon and disc regions; curve-bounded shapes have no file form.
    pub fn to_json(&self) -> Result<String> {
        let shape = match &self.shape {
            Shape::Polygon(p) => ShapeSpec::Polygon { vertices: p.vertices().to_vec() },
            Shape::Disc(d) => ShapeSpec::Disc { center: d.center, radius: d.radius },
            Shape::CurveBounded(_) => {
                return Err(Error::InvalidInput("curve-bounded regions cannot be serialized".into()))
            }
        };
        let density = match &self.density {
            Density::Uniform => DensitySpec::Uniform,
            Density::Polynomial(terms) => DensitySpec::Polynomial { terms: terms.clone() },
        };
        let file = RegionFile { format: REGION_FORMAT.into(), shape, density };
        Ok(serde_json::to_string(&file).expect("region serializes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn example1_centroid() {
        let c = centroid_between_curves(|x| (1.0 - x * x).max(0.0).sqrt(), |x| x - 1.0, 0.0, 1.0)
            .unwrap();
        assert_abs_diff_eq!(c.x1, 2.0 / (2.0 + PI), epsilon = 1e-10);
        assert_abs_diff_eq!(c.x2, 2.0 / (3.0 * (2.0 + PI)), epsilon = 1e-10);
        let ev = preset("example1").unwrap().expected_vector();
        assert_abs_diff_eq!(ev.x1, c.x1, epsilon = 1e-10);
        assert_abs_diff_eq!(ev.x2, c.x2, epsilon = 1e-10);
    }

    #[test]
    fn simple_curves() {
        let c = centroid_between_curves(|_| 1.0, |_| 0.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(c.x1, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.x2, 0.5, epsilon = 1e-12);
        let c = centroid_between_curves(|x| x, |_| 0.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(c.x1, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.x2, 1.0 / 3.0, epsilon = 1e-12);
        assert!(centroid_between_curves(|_| 0.0, |_| 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn example2_density_shifts_the_mean() {
        let r = preset("example2").unwrap();
        let ev = r.expected_vector();
        assert_abs_diff_eq!(ev.x1, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev.x2, 2.0 / 3.0, epsilon = 1e-12);
        let c = r.shape_centroid();
        assert_abs_diff_eq!(ev.x1 - c.x1, 1.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.mass_profile().mass, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn profiles() {
        let sq = preset("unit-square").unwrap().mass_profile();
        assert_eq!(sq.mass, 1.0);
        assert_abs_diff_eq!(sq.first_moments.x1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sq.m20, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sq.m02, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sq.variance(), 1.0 / 6.0, epsilon = 1e-15);

        let disc = preset("prop2-disc").unwrap().mass_profile();
        assert_abs_diff_eq!(disc.mass, PI, epsilon = 1e-13);
        assert_abs_diff_eq!(disc.m20, PI / 4.0, epsilon = 1e-13);
        assert_abs_diff_eq!(disc.m02, PI / 4.0, epsilon = 1e-13);

        let rh = preset("prop4-rhombus").unwrap().mass_profile();
        assert_abs_diff_eq!(rh.mass, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_bad_densities() {
        let sq = || Shape::Polygon(rhombus());
        let neg = Density::Polynomial(vec![
            Term { coef: 1.0, px: 0, py: 0 },
            Term { coef: -3.0, px: 1, py: 0 },
        ]);
        assert!(Region::new(sq(), neg).is_err());
        let cubic = Density::Polynomial(vec![Term { coef: 1.0, px: 2, py: 1 }]);
        assert_eq!(
            Region::new(sq(), cubic).unwrap_err(),
            Error::UnsupportedDegree { px: 2, py: 1 }
        );
    }

    #[test]
    fn curve_validation() {
        let up: CurveFn = Arc::new(|x| x);
        let down: CurveFn = Arc::new(|_| 0.5);
        assert!(CurveBounded::new(up, down, 0.0, 1.0).is_err());
        let wavy = CurveBounded::new(Arc::new(|x: f64| 2.0 + (8.0 * x).sin()), Arc::new(|_| 0.0), 0.0, 1.0)
            .unwrap();
        assert!(!wavy.is_convex());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"format":"cvtq-region/1","shape":{"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]},"density":{"type":"polynomial","terms":[{"coef":4,"px":1,"py":1}]}}"#;
        let r = Region::from_json(text).unwrap();
        assert_abs_diff_eq!(r.expected_vector().x1, 2.0 / 3.0, epsilon = 1e-12);
        let again = Region::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(again.density, r.density);

        let disc = r#"{"format":"cvtq-region/1","shape":{"type":"disc","center":[0,0],"radius":1}}"#;
        assert!(matches!(Region::from_json(disc).unwrap().shape, Shape::Disc(_)));

        match Region::from_json("{\n  \"format\": 3,") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let wrong = r#"{"format":"cvtq-region/9","shape":{"type":"disc","center":[0,0],"radius":1}}"#;
        assert!(Region::from_json(wrong).is_err());
    }

    #[test]
    fn polygon_sampling_stays_inside() {
        let r = preset("prop4-rhombus").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(r.sample(&mut rng, 1000).iter().all(|&p| r.contains(p)));
        let d = preset("prop2-disc").unwrap();
        assert!(d.sample(&mut rng, 1000).iter().all(|&p| p.norm() <= 1.0));
    }
}
