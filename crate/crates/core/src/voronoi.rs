//! Voronoi partitions of a region by a finite generator set, and the
//! centroidal-tessellation predicate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{sq_dist, HalfPlane, Point};
use crate::region::{CellGeometry, MassProfile, Region};

/// Minimum separation between centers.
pub const MIN_SEPARATION: f64 = 1e-9;

/// A finite set of distinct centers, kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Quantizer {
    centers: Vec<Point>,
}

impl Quantizer {
    pub fn new(mut centers: Vec<Point>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidInput("a quantizer needs at least one center".into()));
        }
        if centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("center is not finite".into()));
        }
        centers.sort_by(Point::lex_cmp);
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                if (centers[i] - centers[j]).norm() <= MIN_SEPARATION {
                    return Err(Error::InvalidInput(format!(
                        "coincident centers at ({}, {})",
                        centers[i].x1, centers[i].x2
                    )));
                }
            }
        }
        Ok(Self { centers })
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Index of a nearest center; ties go to the lowest index.
    pub fn nearest(&self, p: Point) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &c) in self.centers.iter().enumerate() {
            let d = sq_dist(p, c);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// Image under `x -> scale * R(angle) x + shift`.
    pub fn transform(&self, angle: f64, scale: f64, shift: Point) -> Result<Self> {
        Self::new(self.centers.iter().map(|c| c.rotate(angle) * scale + shift).collect())
    }

    /// Same size and every center within `tol` of its counterpart (canonical order).
    pub fn approx_eq(&self, other: &Quantizer, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .centers
                .iter()
                .zip(&other.centers)
                .all(|(a, b)| (a.x1 - b.x1).abs() <= tol && (a.x2 - b.x2).abs() <= tol)
    }

    /// Same center set up to `tol`, regardless of order.
    pub fn same_set(&self, other: &Quantizer, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .centers
                .iter()
                .all(|a| other.centers.iter().any(|b| (*a - *b).norm() <= tol))
    }

    /// Lexicographic comparison of the canonical center lists.
    pub fn canonical_cmp(&self, other: &Quantizer) -> std::cmp::Ordering {
        for (a, b) in self.centers.iter().zip(&other.centers) {
            let o = a.lex_cmp(b);
            if o.is_ne() {
                return o;
            }
        }
        self.len().cmp(&other.len())
    }
}

impl TryFrom<Vec<Point>> for Quantizer {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Quantizer> for Vec<Point> {
    fn from(q: Quantizer) -> Self {
        q.centers
    }
}

/// One generator's Voronoi region inside the domain.
#[derive(Clone, Debug)]
pub struct VoronoiCell {
    pub generator_index: usize,
    pub generator: Point,
    /// `None` for an empty cell.
    pub geometry: Option<CellGeometry>,
    pub mass_profile: MassProfile,
}

impl VoronoiCell {
    pub fn is_empty(&self) -> bool {
        self.geometry.is_none() || self.mass_profile.mass.is_nan() || self.mass_profile.mass <= 0.0
    }
}

/// Bisector half-planes keeping the points nearest to generator `i`.
pub fn bisectors(q: &Quantizer, i: usize) -> Result<Vec<HalfPlane>> {
    let own = q.centers[i];
    q.centers
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &other)| HalfPlane::bisector(own, other))
        .collect()
}

/// Region ∩ bisector half-planes, one cell per generator in canonical order.
pub fn voronoi_partition(region: &Region, q: &Quantizer) -> Result<Vec<VoronoiCell>> {
    region.check_convex()?;
    (0..q.len())
        .map(|i| {
            let geometry = region.clip(&bisectors(q, i)?);
            let mass_profile = geometry
                .as_ref()
                .map_or_else(MassProfile::zero, |g| region.profile_of(g));
            Ok(VoronoiCell { generator_index: i, generator: q.centers[i], geometry, mass_profile })
        })
        .collect()
}

/// Per-center distance from each generator to its cell's mass centroid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvtReport {
    pub is_cvt: bool,
    /// Infinite for empty cells.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub empty_cells: Vec<usize>,
}

impl CvtReport {
    pub fn from_cells(cells: &[VoronoiCell], tol: f64) -> Self {
        let mut empty_cells = Vec::new();
        let deviations: Vec<f64> = cells
            .iter()
            .map(|c| {
                if c.is_empty() {
                    empty_cells.push(c.generator_index);
                    f64::INFINITY
                } else {
                    (c.mass_profile.centroid() - c.generator).norm()
                }
            })
            .collect();
        let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
        Self { is_cvt: max_deviation <= tol, deviations, max_deviation, empty_cells }
    }
}

pub fn is_cvt(region: &Region, q: &Quantizer, tol: f64) -> Result<CvtReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    Ok(CvtReport::from_cells(&voronoi_partition(region, q)?, tol))
}
