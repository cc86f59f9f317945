//! Closed-form two-means configurations: the disc split by a chord, the
//! right isosceles triangle cut parallel to its hypotenuse, and the six ways
//! a line can cut the unit rhombus.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{clip_halfplane, polygon_centroid, sq_dist, ConvexPolygon, HalfPlane, Point};
use crate::quad::bisect_newton;
use crate::region::{preset, Region};
use crate::voronoi::Quantizer;

use super::distortion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    Disc,
    Golden,
}

impl CaseId {
    pub const RHOMBUS: [CaseId; 6] =
        [CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4, CaseId::Case5, CaseId::Case6];

    /// Rhombus case from its number `1..=6`.
    pub fn rhombus(k: usize) -> Option<CaseId> {
        Self::RHOMBUS.get(k.checked_sub(1)?).copied()
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseId::Case1 => "case-1",
            CaseId::Case2 => "case-2",
            CaseId::Case3 => "case-3",
            CaseId::Case4 => "case-4",
            CaseId::Case5 => "case-5",
            CaseId::Case6 => "case-6",
            CaseId::Disc => "disc",
            CaseId::Golden => "golden",
        }
    }
}

/// A root of one of the two-means systems with its centers and distortion.
///
/// `p` and `q` keep the labelling used by the parametrization; `centers` is
/// the same pair in canonical order. Single-parameter families store the
/// parameter in both `alpha` and `beta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseSolution {
    pub case_id: CaseId,
    pub alpha: f64,
    pub beta: f64,
    pub p: Point,
    pub q: Point,
    pub centers: Quantizer,
    pub distortion: f64,
    /// Largest `|ρ(p, x) - ρ(q, x)|` over the two boundary points.
    pub bisector_residual: f64,
}

// ---------------------------------------------------------------------------
// Disc

/// Centroid heights `(u2, v2)` of the two pieces of the unit disc cut by the
/// chord `x2 = sqrt(1 - a²)`.
pub fn disc_piece_heights(a: f64) -> (f64, f64) {
    let w = a * (1.0 - a * a).max(0.0).sqrt();
    let a3 = a * a * a;
    let u2 = 2.0 * a3 / (3.0 * (a.asin() - w));
    let v2 = -2.0 * a3 / (3.0 * (w + a.asin() + 2.0 * a.acos()));
    (u2, v2)
}

/// `(u2 + v2)/2 - sqrt(1 - a²)`: zero when the chord bisects the two centroids.
pub fn disc_two_means_residual(a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("chord half-length must lie in (0, 1], got {a}")));
    }
    let (u2, v2) = disc_piece_heights(a);
    Ok(0.5 * (u2 + v2) - (1.0 - a * a).max(0.0).sqrt())
}

/// Roots of the disc residual on `(0, 1]`: every sign change on a uniform
/// scan is refined by bisection and Newton; the endpoint is accepted when the
/// residual vanishes there.
pub fn disc_two_means_roots(scan: usize, tol: f64) -> Result<Vec<f64>> {
    let f = |a: f64| disc_two_means_residual(a).unwrap_or(f64::NAN);
    let grid: Vec<f64> = (1..=scan).map(|k| k as f64 / scan as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&a| f(a)).collect();
    let mut roots = Vec::new();
    for k in 0..grid.len() - 1 {
        if vals[k] == 0.0 {
            roots.push(grid[k]);
        } else if vals[k] * vals[k + 1] < 0.0 {
            roots.push(bisect_newton(f, grid[k], grid[k + 1], 1e-15)?);
        }
    }
    if f(1.0).abs() <= tol {
        roots.push(1.0);
    }
    Ok(roots)
}

/// The chord solution on the unit disc: the largest root of the residual.
pub fn disc_two_means_solve() -> Result<CaseSolution> {
    let roots = disc_two_means_roots(10_000, 1e-10)?;
    let a = *roots
        .last()
        .ok_or_else(|| Error::NoSolution("disc residual has no root on (0, 1]".into()))?;
    let (u2, v2) = disc_piece_heights(a);
    let p = Point::new(0.0, u2);
    let q = Point::new(0.0, v2);
    let b = (1.0 - a * a).max(0.0).sqrt();
    let ends = [Point::new(-a, b), Point::new(a, b)];
    solution(CaseId::Disc, a, a, p, q, &ends, &preset("prop2-disc").expect("preset"))
}

// ---------------------------------------------------------------------------
// Golden partition of the triangle O(0,0), A(1,0), B(1,1)

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoldenPartition {
    pub solution: CaseSolution,
    /// Area of the corner triangle over the area of the trapezoid.
    pub area_ratio: f64,
}

fn golden_triangle() -> ConvexPolygon {
    ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0)])
        .expect("triangle")
}

/// The line `x2 = x1 - 1 + α` cuts off the corner triangle ACD (AC = AD = α)
/// and leaves the trapezoid OBCD.
fn golden_pieces(alpha: f64) -> Option<(ConvexPolygon, ConvexPolygon)> {
    let tri = golden_triangle();
    let trapezoid = HalfPlane::new(Point::new(1.0, -1.0), 1.0 - alpha).ok()?;
    let corner = clip_halfplane(&tri, &trapezoid.complement())?;
    let rest = clip_halfplane(&tri, &trapezoid)?;
    Some((corner, rest))
}

/// Midpoint of the two centroids measured against the cutting line.
pub fn golden_residual(alpha: f64) -> f64 {
    match golden_pieces(alpha) {
        Some((corner, rest)) => {
            let p = polygon_centroid(&corner);
            let q = polygon_centroid(&rest);
            0.5 * (p.x2 + q.x2) - (0.5 * (p.x1 + q.x1) - 1.0 + alpha)
        }
        None => f64::NAN,
    }
}

pub fn golden_partition_solve() -> Result<GoldenPartition> {
    let alpha = bisect_newton(golden_residual, 1e-3, 1.0 - 1e-3, 1e-15)?;
    let (corner, rest) = golden_pieces(alpha)
        .ok_or_else(|| Error::NoSolution("golden cut leaves an empty piece".into()))?;
    let p = polygon_centroid(&corner);
    let q = polygon_centroid(&rest);
    let ends = [Point::new(1.0 - alpha, 0.0), Point::new(1.0, alpha)];
    let region = Region::polygon(golden_triangle().vertices().to_vec())?;
    let solution = solution(CaseId::Golden, alpha, alpha, p, q, &ends, &region)?;
    Ok(GoldenPartition { solution, area_ratio: corner.area() / rest.area() })
}

// ---------------------------------------------------------------------------
// Rhombus O(0,0), A(1,0), B(1+1/√2, 1/√2), C(1/√2, 1/√2) with density √2

struct Rhombus {
    a: Point,
    b: Point,
    c: Point,
    cm: Point,
}

const RH: Rhombus = {
    let s = FRAC_1_SQRT_2;
    Rhombus {
        a: Point::new(1.0, 0.0),
        b: Point::new(1.0 + s, s),
        c: Point::new(s, s),
        cm: Point::new(0.5 * (1.0 + s), 0.5 * s),
    }
};

/// `(p, q, d, e)` for the given case: `d`, `e` are where the cut meets the
/// sides, `p` the centroid of the piece named in the case and `q` that of the
/// remainder.
fn rhombus_case_points(case: CaseId, alpha: f64, beta: f64) -> Option<(Point, Point, Point, Point)> {
    let Rhombus { a, b, c, cm } = RH;
    let s = FRAC_1_SQRT_2;
    // Corner cases: a triangle with legs α, β at a vertex; its mass is
    // αβ/(2√2) and the complement's centroid follows from the total.
    let corner = |d: Point, e: Point, p: Point| {
        let t = alpha * beta / (2.0 * 2f64.sqrt());
        let q = (cm * s - p * t) / (s * (1.0 - alpha * beta / 2.0));
        (p, q, d, e)
    };
    let out = match case {
        CaseId::Case1 => {
            let (d, e) = (a * alpha, c * beta);
            corner(d, e, (d + e) / 3.0)
        }
        CaseId::Case2 => {
            let (d, e) = (b + (a - b) * alpha, b + (c - b) * beta);
            corner(d, e, (b + d + e) / 3.0)
        }
        CaseId::Case3 => {
            let (d, e) = (a * (1.0 - alpha), b * beta + a * (1.0 - beta));
            corner(d, e, (a + d + e) / 3.0)
        }
        CaseId::Case4 => {
            let (d, e) = (c * (1.0 - alpha), c + (b - c) * beta);
            corner(d, e, (c + d + e) / 3.0)
        }
        CaseId::Case5 => {
            let (d, e) = (a * alpha, b * beta + c * (1.0 - beta));
            let p = ((c + d) / 3.0 * alpha + (c + d + e) / 3.0 * beta) / (alpha + beta);
            let q = ((a + b + d) / 3.0 * (1.0 - alpha) + (b + d + e) / 3.0 * (1.0 - beta))
                / (2.0 - alpha - beta);
            (p, q, d, e)
        }
        CaseId::Case6 => {
            let (d, e) = (a * (1.0 - alpha) + b * alpha, c * beta);
            let p = ((a + e) / 3.0 * beta + (a + d + e) / 3.0 * alpha) / (alpha + beta);
            let q = ((b + c + d) / 3.0 * (1.0 - alpha) + (c + d + e) / 3.0 * (1.0 - beta))
                / (2.0 - alpha - beta);
            (p, q, d, e)
        }
        CaseId::Disc | CaseId::Golden => return None,
    };
    let finite = [out.0, out.1, out.2, out.3].iter().all(|p| p.is_finite());
    finite.then_some(out)
}

/// The bisector system `ρ(p, d) - ρ(q, d) = 0`, `ρ(p, e) - ρ(q, e) = 0`.
pub fn rhombus_case_residual(case: CaseId, alpha: f64, beta: f64) -> Option<[f64; 2]> {
    let (p, q, d, e) = rhombus_case_points(case, alpha, beta)?;
    let r = [sq_dist(p, d) - sq_dist(q, d), sq_dist(p, e) - sq_dist(q, e)];
    r.iter().all(|v| v.is_finite()).then_some(r)
}

const NEWTON_FD_STEP: f64 = 1e-7;
const NEWTON_MAX_ITER: usize = 100;
const ROOT_RESIDUAL: f64 = 1e-10;
const PARAM_SLACK: f64 = 1e-9;
const ROOT_DEDUP: f64 = 1e-8;
const SEED_GRID: usize = 20;

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Damped Newton with a forward-difference Jacobian; `None` when the
/// iteration leaves the domain of finite values or stalls away from a root.
fn damped_newton<F: Fn(f64, f64) -> Option<[f64; 2]>>(f: F, start: [f64; 2]) -> Option<[f64; 2]> {
    let mut x = start;
    let mut fx = f(x[0], x[1])?;
    for _ in 0..NEWTON_MAX_ITER {
        let nf = norm2(fx);
        if nf < 1e-15 {
            break;
        }
        let h = NEWTON_FD_STEP;
        let fa = f(x[0] + h, x[1])?;
        let fb = f(x[0], x[1] + h)?;
        let j = [[(fa[0] - fx[0]) / h, (fb[0] - fx[0]) / h], [(fa[1] - fx[1]) / h, (fb[1] - fx[1]) / h]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if !det.is_finite() || det.abs() < 1e-300 {
            return None;
        }
        let dx = [
            -(j[1][1] * fx[0] - j[0][1] * fx[1]) / det,
            -(-j[1][0] * fx[0] + j[0][0] * fx[1]) / det,
        ];
        let mut lambda = 1.0;
        loop {
            let cand = [x[0] + lambda * dx[0], x[1] + lambda * dx[1]];
            if let Some(fc) = f(cand[0], cand[1]) {
                if norm2(fc) < nf {
                    x = cand;
                    fx = fc;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                return (nf < ROOT_RESIDUAL).then_some(x);
            }
        }
        if lambda * norm2(dx) < 1e-16 {
            break;
        }
    }
    (norm2(fx) < ROOT_RESIDUAL).then_some(x)
}

/// All roots in `[0, 1]²` of one rhombus case, found by damped Newton from a
/// 20×20 grid of seeds and deduplicated.
pub fn rhombus_case_solve(case: CaseId) -> Result<Vec<CaseSolution>> {
    if !CaseId::RHOMBUS.contains(&case) {
        return Err(Error::InvalidInput(format!("{} is not a rhombus case", case.as_str())));
    }
    let f = |a: f64, b: f64| rhombus_case_residual(case, a, b);
    let mut any_converged = false;
    let mut roots: Vec<[f64; 2]> = Vec::new();
    for i in 0..SEED_GRID {
        for j in 0..SEED_GRID {
            let seed = [(i as f64 + 0.5) / SEED_GRID as f64, (j as f64 + 0.5) / SEED_GRID as f64];
            let Some(r) = damped_newton(f, seed) else { continue };
            any_converged = true;
            let inside = r.iter().all(|&v| (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&v));
            if inside && !roots.iter().any(|s| (s[0] - r[0]).abs().max((s[1] - r[1]).abs()) < ROOT_DEDUP) {
                roots.push(r);
            }
        }
    }
    if !any_converged {
        return Err(Error::NoSolution(format!(
            "Newton did not converge from any seed for {}",
            case.as_str()
        )));
    }
    roots.sort_by(|x, y| y[0].total_cmp(&x[0]).then(y[1].total_cmp(&x[1])));
    let region = preset("prop4-rhombus").expect("preset");
    roots
        .into_iter()
        .map(|[alpha, beta]| {
            let (p, q, d, e) = rhombus_case_points(case, alpha, beta).expect("root is finite");
            solution(case, alpha, beta, p, q, &[d, e], &region)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhombusSummary {
    pub cases: Vec<(CaseId, Vec<CaseSolution>)>,
    /// First solution, in case order, attaining the smallest distortion.
    pub best: CaseSolution,
}

pub fn rhombus_all_cases() -> Result<RhombusSummary> {
    let cases: Vec<(CaseId, Vec<CaseSolution>)> = CaseId::RHOMBUS
        .iter()
        .map(|&c| Ok((c, rhombus_case_solve(c)?)))
        .collect::<Result<_>>()?;
    let mut best: Option<&CaseSolution> = None;
    for sol in cases.iter().flat_map(|(_, s)| s) {
        if best.is_none_or(|b| sol.distortion < b.distortion - 1e-12) {
            best = Some(sol);
        }
    }
    let best = best
        .cloned()
        .ok_or_else(|| Error::NoSolution("no rhombus case has a root".into()))?;
    Ok(RhombusSummary { cases, best })
}

fn solution(
    case_id: CaseId,
    alpha: f64,
    beta: f64,
    p: Point,
    q: Point,
    ends: &[Point],
    region: &Region,
) -> Result<CaseSolution> {
    let centers = Quantizer::new(vec![p, q])?;
    let bisector_residual = ends
        .iter()
        .map(|&x| (sq_dist(p, x) - sq_dist(q, x)).abs())
        .fold(0.0, f64::max);
    Ok(CaseSolution {
        case_id,
        alpha,
        beta,
        p,
        q,
        distortion: distortion(region, &centers)?.value,
        centers,
        bisector_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn disc_residual_endpoint() {
        assert_abs_diff_eq!(disc_two_means_residual(1.0).unwrap(), 0.0, epsilon = 1e-15);
        let (u2, v2) = disc_piece_heights(1.0);
        assert_abs_diff_eq!(u2, 4.0 / (3.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(v2, -4.0 / (3.0 * PI), epsilon = 1e-15);
        let r5 = disc_two_means_residual(0.5).unwrap();
        let r9 = disc_two_means_residual(0.9).unwrap();
        assert!(r5 != 0.0 && r5.signum() == r9.signum());
        assert!(disc_two_means_residual(0.0).is_err());
        assert!(disc_two_means_residual(1.5).is_err());
    }

    #[test]
    fn disc_heights_match_segment_centroids() {
        // Upper piece is the segment above the chord at height sqrt(1 - a²).
        let region = preset("prop2-disc").unwrap();
        for a in [0.3f64, 0.7, 0.95] {
            let b = (1.0 - a * a).sqrt();
            let up = region.clip(&[HalfPlane::new(Point::new(0.0, -1.0), -b).unwrap()]).unwrap();
            let down = region.clip(&[HalfPlane::new(Point::new(0.0, 1.0), b).unwrap()]).unwrap();
            let (u2, v2) = disc_piece_heights(a);
            assert_abs_diff_eq!(region.profile_of(&up).centroid().x2, u2, epsilon = 1e-12);
            assert_abs_diff_eq!(region.profile_of(&down).centroid().x2, v2, epsilon = 1e-12);
        }
    }

    #[test]
    fn golden_closed_forms() {
        let g = golden_partition_solve().unwrap();
        let a = (5f64.sqrt() - 1.0) / 2.0;
        let s = &g.solution;
        assert_abs_diff_eq!(s.alpha, a, epsilon = 1e-12);
        assert_abs_diff_eq!(s.p.x1, (3.0 - a) / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.p.x2, a / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.q.x1, (-a * a + 2.0 * a + 2.0) / (3.0 * a + 3.0), epsilon = 1e-12);
        assert_abs_diff_eq!(s.q.x2, (a * a + a + 1.0) / (3.0 * a + 3.0), epsilon = 1e-12);
        assert_abs_diff_eq!(g.area_ratio, a, epsilon = 1e-12);
        assert!(s.bisector_residual < 1e-12);
    }

    #[test]
    fn rhombus_case1_points() {
        let (p, q, _, _) = rhombus_case_points(CaseId::Case1, 1.0, 1.0).unwrap();
        let s = FRAC_1_SQRT_2;
        assert_abs_diff_eq!(p.x1, (1.0 + s) / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.x1, 2.0 * (1.0 + s) / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.x2, 2f64.sqrt() / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn rhombus_corner_centroids_match_clipping() {
        // The complement centroid formula against direct polygon clipping.
        let region = preset("prop4-rhombus").unwrap();
        for case in [CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4, CaseId::Case5, CaseId::Case6] {
            let (p, q, d, e) = rhombus_case_points(case, 0.6, 0.7).unwrap();
            let n = Point::new(e.x2 - d.x2, d.x1 - e.x1);
            let h = HalfPlane::new(n, n.dot(d)).unwrap();
            let pieces = [region.clip(&[h]).unwrap(), region.clip(&[h.complement()]).unwrap()];
            let cents: Vec<Point> = pieces.iter().map(|g| region.profile_of(g).centroid()).collect();
            for target in [p, q] {
                assert!(
                    cents.iter().any(|c| (*c - target).norm() < 1e-12),
                    "{case:?}: {target:?} not in {cents:?}"
                );
            }
        }
    }

    #[test]
    fn rhombus_case1_root() {
        let sols = rhombus_case_solve(CaseId::Case1).unwrap();
        assert_eq!(sols.len(), 1);
        assert_abs_diff_eq!(sols[0].alpha, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sols[0].beta, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            sols[0].distortion,
            (2.0 * 2f64.sqrt() - 1.0) / (18.0 * 2f64.sqrt()),
            epsilon = 1e-12
        );
    }
}
