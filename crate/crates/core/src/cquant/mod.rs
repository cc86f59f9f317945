//! Continuous quantization: distortion, Lloyd relaxation and multi-start
//! search for n-means of a region.

pub mod cases;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::moments::Method;
use crate::region::Region;
use crate::voronoi::{voronoi_partition, CvtReport, Quantizer, VoronoiCell};

pub use cases::{
    disc_two_means_residual, disc_two_means_roots, disc_two_means_solve, golden_partition_solve,
    rhombus_all_cases, rhombus_case_solve, CaseId, CaseSolution, GoldenPartition, RhombusSummary,
};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const RESEED_SAMPLES: usize = 1_000;
const RESEED_SEED: u64 = 0x1107d;
pub const MONTE_CARLO_SAMPLES: usize = 1_000_000;

/// Expected squared distance to the nearest center.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionReport {
    pub value: f64,
    pub per_cell: Vec<f64>,
    pub method: Method,
    pub estimated_error: f64,
}

/// Distortion as a probability expectation: cell integrals of `|x - c|² ρ`
/// divided by the total mass of the region.
pub fn distortion(region: &Region, q: &Quantizer) -> Result<DistortionReport> {
    let cells = voronoi_partition(region, q)?;
    Ok(distortion_of_cells(region.mass_profile().mass, &cells))
}

pub fn distortion_of_cells(total_mass: f64, cells: &[VoronoiCell]) -> DistortionReport {
    let mut method = Method::ExactPolygon;
    let mut estimated_error = 0.0;
    let per_cell: Vec<f64> = cells
        .iter()
        .map(|c| {
            let p = &c.mass_profile;
            if c.is_empty() {
                return 0.0;
            }
            method = method.max(p.method);
            if p.method >= Method::Quadrature {
                // Raw-moment error propagated through |x|² - 2 c.x + |c|².
                let g = c.generator.norm();
                estimated_error += p.estimated_error * (1.0 + g).powi(2) / total_mass;
            }
            p.second_moment_about(c.generator) / total_mass
        })
        .collect();
    DistortionReport { value: per_cell.iter().sum(), per_cell, method, estimated_error }
}

/// Monte Carlo estimate with `samples` density-weighted draws; the reported
/// error is three standard errors.
pub fn distortion_monte_carlo(
    region: &Region,
    q: &Quantizer,
    samples: usize,
    seed: u64,
) -> DistortionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = region.sample(&mut rng, samples);
    let mut per_cell = vec![0.0; q.len()];
    let (mut sw, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for p in pts {
        let w = region.density.eval(p);
        let i = q.nearest(p);
        let d = (p - q.centers()[i]).norm_sq();
        per_cell[i] += w * d;
        sw += w;
        s1 += w * d;
        s2 += w * d * d;
    }
    let mean = s1 / sw;
    let var = (s2 / sw - mean * mean).max(0.0);
    for v in &mut per_cell {
        *v /= sw;
    }
    DistortionReport {
        value: mean,
        per_cell,
        method: Method::MonteCarlo,
        estimated_error: 3.0 * var.sqrt() / (samples as f64).sqrt(),
    }
}

/// Move each center to its cell centroid; returns the new quantizer and the
/// largest movement (measured per generator, before re-sorting).
fn step_from_cells(region: &Region, q: &Quantizer, cells: &[VoronoiCell]) -> Result<(Quantizer, f64)> {
    let mut next: Vec<Option<Point>> = cells
        .iter()
        .map(|c| (!c.is_empty()).then(|| c.mass_profile.centroid()))
        .collect();
    if next.iter().any(Option::is_none) {
        let mut rng = ChaCha8Rng::seed_from_u64(RESEED_SEED);
        let samples = region.sample(&mut rng, RESEED_SAMPLES);
        for i in 0..next.len() {
            if next[i].is_some() {
                continue;
            }
            let placed: Vec<Point> = next.iter().flatten().copied().collect();
            let far = samples
                .iter()
                .copied()
                .max_by(|a, b| {
                    let da = placed.iter().map(|c| (*a - *c).norm_sq()).fold(f64::INFINITY, f64::min);
                    let db = placed.iter().map(|c| (*b - *c).norm_sq()).fold(f64::INFINITY, f64::min);
                    da.total_cmp(&db)
                })
                .expect("reseed samples are non-empty");
            next[i] = Some(far);
        }
    }
    let next: Vec<Point> = next.into_iter().flatten().collect();
    let movement = next
        .iter()
        .zip(q.centers())
        .map(|(a, b)| (*a - *b).norm())
        .fold(0.0, f64::max);
    Ok((Quantizer::new(next)?, movement))
}

/// One Lloyd update; empty cells are reseeded at the sampled region point
/// farthest from the surviving centers.
pub fn lloyd_step(region: &Region, q: &Quantizer) -> Result<Quantizer> {
    let cells = voronoi_partition(region, q)?;
    Ok(step_from_cells(region, q, &cells)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LloydTrace {
    pub iterations: usize,
    /// Distortion of the initial quantizer and of every iterate.
    pub distortion_history: Vec<f64>,
    pub final_quantizer: Quantizer,
    pub converged: bool,
    pub cvt_deviation: f64,
    pub method: Method,
}

impl LloydTrace {
    pub fn distortion(&self) -> f64 {
        *self.distortion_history.last().expect("history is never empty")
    }
}

/// Iterate [`lloyd_step`] until the largest center movement drops below
/// `tol` or `max_iter` steps have run.
pub fn lloyd_run(region: &Region, init: &Quantizer, tol: f64, max_iter: usize) -> Result<LloydTrace> {
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidInput("need tol > 0 and max_iter >= 1".into()));
    }
    let total = region.mass_profile().mass;
    let mut q = init.clone();
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        let cells = voronoi_partition(region, &q)?;
        let report = distortion_of_cells(total, &cells);
        history.push(report.value);
        if converged || iterations == max_iter {
            return Ok(LloydTrace {
                iterations,
                distortion_history: history,
                final_quantizer: q,
                converged,
                cvt_deviation: CvtReport::from_cells(&cells, f64::INFINITY).max_deviation,
                method: report.method,
            });
        }
        let (next, movement) = step_from_cells(region, &q, &cells)?;
        q = next;
        iterations += 1;
        converged = movement < tol;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestOptions {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub parallel: bool,
}

impl Default for BestOptions {
    fn default() -> Self {
        Self { restarts: 16, seed: 42, tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, parallel: false }
    }
}

/// `n` distinct uniform points in the region from the stream `restart` of
/// the seeded generator.
pub fn random_init(region: &Region, n: usize, seed: u64, restart: u64) -> Result<Quantizer> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart);
    for _ in 0..100 {
        if let Ok(q) = Quantizer::new(region.sample(&mut rng, n)) {
            return Ok(q);
        }
    }
    Err(Error::Degenerate("could not draw distinct initial centers".into()))
}

/// Best of `restarts` Lloyd runs from seeded random starts.
pub fn best_nmeans(region: &Region, n: usize, restarts: usize, seed: u64) -> Result<LloydTrace> {
    best_nmeans_with(region, n, &BestOptions { restarts, seed, ..BestOptions::default() })
}

/// The winner is the lowest final distortion, ties broken by canonical center
/// order, so parallel and serial runs agree.
pub fn best_nmeans_with(region: &Region, n: usize, opts: &BestOptions) -> Result<LloydTrace> {
    if n == 0 || opts.restarts == 0 {
        return Err(Error::InvalidInput("need n >= 1 and restarts >= 1".into()));
    }
    let run = |k: usize| -> Result<LloydTrace> {
        let init = random_init(region, n, opts.seed, k as u64)?;
        lloyd_run(region, &init, opts.tol, opts.max_iter)
    };
    let traces: Vec<LloydTrace> = if opts.parallel {
        (0..opts.restarts).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..opts.restarts).map(run).collect::<Result<_>>()?
    };
    Ok(traces
        .into_iter()
        .min_by(|a, b| {
            a.distortion()
                .total_cmp(&b.distortion())
                .then_with(|| a.final_quantizer.canonical_cmp(&b.final_quantizer))
        })
        .expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::preset;
    use approx::assert_abs_diff_eq;

    fn q(pts: &[(f64, f64)]) -> Quantizer {
        Quantizer::new(pts.iter().map(|&(a, b)| Point::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn square_singleton() {
        let r = preset("unit-square").unwrap();
        let d = distortion(&r, &q(&[(0.5, 0.5)])).unwrap();
        assert_abs_diff_eq!(d.value, 1.0 / 6.0, epsilon = 1e-15);
        assert_eq!(d.method, Method::ExactPolygon);
        assert_eq!(d.estimated_error, 0.0);
    }

    #[test]
    fn single_step_reaches_centroid() {
        let r = preset("prop3-triangle").unwrap();
        let next = lloyd_step(&r, &q(&[(0.9, 0.1)])).unwrap();
        assert_abs_diff_eq!(next.centers()[0].x1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(next.centers()[0].x2, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn square_halves_are_fixed() {
        let r = preset("unit-square").unwrap();
        let start = q(&[(0.25, 0.5), (0.75, 0.5)]);
        let t = lloyd_run(&r, &start, 1e-10, 10).unwrap();
        assert!(t.converged);
        assert_eq!(t.iterations, 1);
        assert!(t.final_quantizer.approx_eq(&start, 1e-15));
    }

    #[test]
    fn empty_cell_is_reseeded() {
        let r = preset("unit-square").unwrap();
        let next = lloyd_step(&r, &q(&[(0.5, 0.5), (5.0, 5.0)])).unwrap();
        assert!(next.centers().iter().all(|&c| r.contains(c)));
        let t = lloyd_run(&r, &q(&[(0.5, 0.5), (5.0, 5.0)]), 1e-10, 10_000).unwrap();
        assert!(t.converged);
        assert!(t.distortion() < 1.0 / 6.0);
    }

    #[test]
    fn monte_carlo_agrees_with_exact() {
        let r = preset("prop4-rhombus").unwrap();
        let pair = q(&[(0.3, 0.2), (1.2, 0.5)]);
        let exact = distortion(&r, &pair).unwrap().value;
        let mc = distortion_monte_carlo(&r, &pair, 200_000, 3);
        assert!((mc.value - exact).abs() <= mc.estimated_error, "{} vs {exact}", mc.value);
    }

    #[test]
    fn parallel_matches_serial() {
        let r = preset("prop3-triangle").unwrap();
        let base = BestOptions { restarts: 6, seed: 9, ..BestOptions::default() };
        let a = best_nmeans_with(&r, 3, &base).unwrap();
        let b = best_nmeans_with(&r, 3, &BestOptions { parallel: true, ..base }).unwrap();
        assert_eq!(a, b);
    }
}
