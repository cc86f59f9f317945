//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's integration or search code.

#![allow(dead_code)]

use cvtq_core::{ConvexPolygon, Point, Quantizer};

/// Convex hull by monotone chain, counter-clockwise, collinear points dropped.
pub fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-12 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-12 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Hull of `pts` as a polygon, if it is a reasonably fat one.
pub fn hull_polygon(pts: Vec<(f64, f64)>, min_area: f64) -> Option<ConvexPolygon> {
    let h = convex_hull(pts);
    if h.len() < 3 || shoelace(&h) < min_area {
        return None;
    }
    ConvexPolygon::new(h.into_iter().map(|(x, y)| Point::new(x, y)).collect()).ok()
}

pub fn shoelace(ring: &[(f64, f64)]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

/// Area-weighted average of fan-triangle vertex averages.
pub fn fan_centroid(poly: &ConvexPolygon) -> Point {
    let v = poly.vertices();
    let (mut area, mut acc) = (0.0, Point::ORIGIN);
    for i in 1..v.len() - 1 {
        let a = 0.5 * (v[i] - v[0]).cross(v[i + 1] - v[0]);
        area += a;
        acc += (v[0] + v[i] + v[i + 1]) * (a / 3.0);
    }
    acc / area
}

/// Cluster means and `(1/m) Σ |x - mean|²` for a labelling into `n` groups.
pub fn partition_cost(pts: &[Point], labels: &[usize], n: usize) -> (Vec<Point>, f64) {
    let mut means = vec![Point::ORIGIN; n];
    let mut counts = vec![0.0; n];
    for (&p, &l) in pts.iter().zip(labels) {
        means[l] += p;
        counts[l] += 1.0;
    }
    for (m, c) in means.iter_mut().zip(&counts) {
        *m = *m / *c;
    }
    let sse: f64 = pts
        .iter()
        .zip(labels)
        .map(|(&p, &l)| (p - means[l]).norm_sq())
        .sum();
    (means, sse / pts.len() as f64)
}

/// Calls `f` with every restricted growth string of length `m` using exactly
/// `n` labels, i.e. every partition of `m` items into `n` blocks.
pub fn for_each_partition(m: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(i: usize, used: usize, m: usize, n: usize, labels: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == m {
            if used == n {
                f(labels);
            }
            return;
        }
        if n - used > m - i {
            return;
        }
        for l in 0..=used.min(n - 1) {
            labels[i] = l;
            rec(i + 1, used.max(l + 1), m, n, labels, f);
        }
    }
    rec(0, 0, m, n, &mut vec![0; m], f);
}

/// Exhaustive optimum over all partitions: `V_n` and the canonical list of
/// optimal quantizers within `tie` of it.
pub fn naive_optimal(pts: &[Point], n: usize, tie: f64) -> (f64, Vec<Quantizer>) {
    let mut all: Vec<(f64, Vec<Point>)> = Vec::new();
    for_each_partition(pts.len(), n, &mut |labels| {
        let (means, cost) = partition_cost(pts, labels, n);
        all.push((cost, means));
    });
    let best = all.iter().map(|(c, _)| *c).fold(f64::INFINITY, f64::min);
    let mut sets: Vec<Quantizer> = Vec::new();
    for (c, means) in all {
        if c <= best + tie {
            let q = Quantizer::new(means).expect("means of disjoint clusters are distinct");
            if !sets.iter().any(|s| s.approx_eq(&q, 1e-9)) {
                sets.push(q);
            }
        }
    }
    sets.sort_by(Quantizer::canonical_cmp);
    (best, sets)
}

/// The eight symmetries of the square `[1, 4]²`.
pub fn grid_symmetries() -> Vec<Box<dyn Fn(Point) -> Point>> {
    let c = 2.5;
    vec![
        Box::new(|p| p),
        Box::new(move |p: Point| Point::new(2.0 * c - p.x1, p.x2)),
        Box::new(move |p: Point| Point::new(p.x1, 2.0 * c - p.x2)),
        Box::new(move |p: Point| Point::new(2.0 * c - p.x1, 2.0 * c - p.x2)),
        Box::new(|p: Point| Point::new(p.x2, p.x1)),
        Box::new(move |p: Point| Point::new(2.0 * c - p.x2, p.x1)),
        Box::new(move |p: Point| Point::new(p.x2, 2.0 * c - p.x1)),
        Box::new(move |p: Point| Point::new(2.0 * c - p.x2, 2.0 * c - p.x1)),
    ]
}
