//! Discrete uniform distributions on finite point sets: means, distortion,
//! discrete Lloyd and exact optimal n-means.

pub mod bnb;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{sq_dist, Point};
use crate::voronoi::Quantizer;

pub use bnb::{enumerate_optimal_sets, optimal_nmeans_exact, optimal_nmeans_exact_with, OptimalResult, MAX_EXACT_POINTS};

/// Equal point masses `1/m` on `m` distinct points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteUniform {
    points: Vec<Point>,
}

impl DiscreteUniform {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point set is empty".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("point is not finite".into()));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (points[i] - points[j]).norm() <= 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "duplicate point ({}, {})",
                        points[i].x1, points[i].x2
                    )));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nearest-center index per point; ties go to the lowest index.
    pub fn assign(&self, q: &Quantizer) -> Vec<usize> {
        self.points.iter().map(|&p| q.nearest(p)).collect()
    }
}

pub const POINTS_FORMAT: &str = "cvtq-points/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsFile {
    format: String,
    points: Vec<Point>,
}

impl DiscreteUniform {
    /// Parse a `cvtq-points/1` document.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PointsFile = serde_json::from_str(text)?;
        if file.format != POINTS_FORMAT {
            return Err(Error::InvalidInput(format!(
                "unsupported format {:?}, expected {POINTS_FORMAT:?}",
                file.format
            )));
        }
        Self::new(file.points)
    }

    pub fn to_json(&self) -> String {
        let file = PointsFile { format: POINTS_FORMAT.into(), points: self.points.clone() };
        serde_json::to_string(&file).expect("points serialize")
    }
}

pub const PRESETS: [&str; 2] = ["grid4", "triangle9"];

/// Built-in point sets by name.
pub fn preset(name: &str) -> Option<DiscreteUniform> {
    let pts = match name {
        "triangle9" => triangle9(),
        "grid4" => (1..=4)
            .flat_map(|i| (1..=4).map(move |j| Point::new(i as f64, j as f64)))
            .collect(),
        _ => return None,
    };
    Some(DiscreteUniform::new(pts).expect("presets are valid"))
}

/// Nine points on the unit equilateral triangle: the vertices, the two
/// trisection points of each side, with √3 kept exact to rounding.
fn triangle9() -> Vec<Point> {
    let r3 = 3f64.sqrt();
    vec![
        Point::new(0.0, 0.0),
        Point::new(1.0 / 3.0, 0.0),
        Point::new(2.0 / 3.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0 / 6.0, r3 / 6.0),
        Point::new(1.0 / 3.0, r3 / 3.0),
        Point::new(0.5, r3 / 2.0),
        Point::new(5.0 / 6.0, r3 / 6.0),
        Point::new(2.0 / 3.0, r3 / 3.0),
    ]
}

/// A five-center CVT of the 4×4 grid that is not optimal. The second center
/// is the exact cluster mean `(5/3, 5/3)`; its two-decimal rounding is
/// [`BETA_ROUNDED`].
pub fn beta_set() -> Quantizer {
    let f = 5.0 / 3.0;
    Quantizer::new(vec![
        Point::new(2.8, 3.6),
        Point::new(f, f),
        Point::new(3.6, 1.8),
        Point::new(1.0, 3.5),
        Point::new(1.0, 1.0),
    ])
    .expect("distinct")
}

pub const BETA_ROUNDED: [(f64, f64); 5] = [(2.8, 3.6), (1.67, 1.67), (3.6, 1.8), (1.0, 3.5), (1.0, 1.0)];

pub fn mean(dist: &DiscreteUniform) -> Point {
    average(dist.points.iter().copied())
}

fn average(it: impl Iterator<Item = Point>) -> Point {
    let (mut s, mut k) = (Point::ORIGIN, 0usize);
    for p in it {
        s += p;
        k += 1;
    }
    s / k as f64
}

/// Mean of the points with the given indices.
pub fn conditional_mean(dist: &DiscreteUniform, subset: &[usize]) -> Result<Point> {
    if subset.is_empty() {
        return Err(Error::Domain("conditional mean of an empty subset".into()));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= dist.len()) {
        return Err(Error::Domain(format!("index {bad} out of range")));
    }
    Ok(average(subset.iter().map(|&i| dist.points[i])))
}

/// `(1/m) Σ min_c |x - c|²`.
pub fn distortion_discrete(dist: &DiscreteUniform, q: &Quantizer) -> f64 {
    dist.points
        .iter()
        .map(|&p| sq_dist(p, q.centers()[q.nearest(p)]))
        .sum::<f64>()
        / dist.len() as f64
}

/// A partition into non-empty clusters with centers at the cluster means.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clustering {
    /// Cluster index per point, referring to the canonical order of `centers`.
    pub assignment: Vec<usize>,
    pub centers: Quantizer,
    /// `(1/m) Σ |x - center(x)|²`.
    pub sse: f64,
}

impl Clustering {
    /// Cluster means of an assignment with labels `0..n`.
    pub fn from_assignment(dist: &DiscreteUniform, labels: &[usize], n: usize) -> Result<Self> {
        let mut sums = vec![Point::ORIGIN; n];
        let mut counts = vec![0usize; n];
        for (&p, &c) in dist.points.iter().zip(labels) {
            sums[c] += p;
            counts[c] += 1;
        }
        if counts.contains(&0) {
            return Err(Error::InvalidInput("assignment leaves a cluster empty".into()));
        }
        let means: Vec<Point> = sums.iter().zip(&counts).map(|(s, &k)| *s / k as f64).collect();
        let centers = Quantizer::new(means.clone())?;
        let relabel: Vec<usize> = means
            .iter()
            .map(|m| centers.centers().iter().position(|c| c == m).expect("present"))
            .collect();
        let assignment: Vec<usize> = labels.iter().map(|&c| relabel[c]).collect();
        let sse = dist
            .points
            .iter()
            .zip(&assignment)
            .map(|(&p, &c)| sq_dist(p, centers.centers()[c]))
            .sum::<f64>()
            / dist.len() as f64;
        Ok(Self { assignment, centers, sse })
    }
}

/// Discrete Lloyd: nearest-center assignment alternating with cluster means
/// until the assignment repeats. An empty cluster takes the point that is
/// currently farthest from its center.
pub fn lloyd_discrete(dist: &DiscreteUniform, init: &Quantizer, max_iter: usize) -> Result<Clustering> {
    let n = init.len();
    if n > dist.len() {
        return Err(Error::Domain(format!("{n} centers for {} points", dist.len())));
    }
    let mut centers = init.centers().to_vec();
    let mut prev: Option<Vec<usize>> = None;
    for _ in 0..max_iter.max(1) {
        let q = Quantizer::new(centers.clone())?;
        let labels = dist.assign(&q);
        if prev.as_ref() == Some(&labels) {
            break;
        }
        centers = q.centers().to_vec();
        let mut sums = vec![Point::ORIGIN; n];
        let mut counts = vec![0usize; n];
        for (&p, &c) in dist.points.iter().zip(&labels) {
            sums[c] += p;
            counts[c] += 1;
        }
        let mut cost: Vec<f64> =
            dist.points.iter().zip(&labels).map(|(&p, &c)| sq_dist(p, centers[c])).collect();
        for c in 0..n {
            if counts[c] > 0 {
                centers[c] = sums[c] / counts[c] as f64;
            }
        }
        for c in 0..n {
            if counts[c] == 0 {
                let far = (0..dist.len())
                    .max_by(|&a, &b| cost[a].total_cmp(&cost[b]).then(b.cmp(&a)))
                    .expect("non-empty");
                centers[c] = dist.points[far];
                cost[far] = f64::NEG_INFINITY;
            }
        }
        prev = Some(labels);
    }
    let q = Quantizer::new(centers)?;
    let labels = dist.assign(&q);
    Clustering::from_assignment(dist, &labels, n)
}

/// Every center is the mean of its nearest-point cluster (within `tol`) and
/// no cluster is empty.
pub fn is_discrete_cvt(dist: &DiscreteUniform, q: &Quantizer, tol: f64) -> bool {
    let labels = dist.assign(q);
    (0..q.len()).all(|c| {
        let members: Vec<usize> = (0..dist.len()).filter(|&i| labels[i] == c).collect();
        conditional_mean(dist, &members).is_ok_and(|m| (m - q.centers()[c]).norm() <= tol)
    })
}
