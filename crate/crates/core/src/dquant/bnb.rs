//! Exact minimum-sum-of-squares clustering by branch and bound.
//!
//! Points are assigned one at a time in a fixed order. Point `i` may join an
//! open cluster or open the next one, so each partition is visited once.
//! Adding `p` to a cluster of `c` points with mean `μ` raises the cluster's
//! SSE by `c/(c+1) |p - μ|²`.
//!
//! The lower bound for a partial assignment of the first `i` points is its
//! SSE plus the optimal SSE of the remaining points alone. SSE is
//! superadditive over disjoint point sets, so this never overestimates. The
//! suffix optima are computed the same way, from the shortest suffix up.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{sq_dist, Point};
use crate::voronoi::Quantizer;

use super::{lloyd_discrete, mean, Clustering, DiscreteUniform};

/// Largest point set accepted by the exact solver.
pub const MAX_EXACT_POINTS: usize = 24;
/// Tolerance on the normalized distortion for "equally optimal".
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimalResult {
    pub vn: f64,
    /// Every optimal quantizer, canonical and deduplicated, in lexicographic order.
    pub optimal_sets: Vec<Quantizer>,
    pub nodes_explored: u64,
}

struct Search<'a> {
    pts: &'a [Point],
    k: usize,
    /// `bound[i]`: optimal SSE of `pts[i..]` in `min(k_max, len)` clusters.
    bound: &'a [f64],
    /// Slack added to the incumbent before pruning; `None` keeps only the value.
    collect_tol: Option<f64>,
}

#[derive(Clone)]
struct State {
    count: Vec<usize>,
    mean: Vec<Point>,
    labels: Vec<u8>,
    open: usize,
    cost: f64,
}

impl State {
    fn new(k: usize, m: usize) -> Self {
        Self { count: vec![0; k], mean: vec![Point::ORIGIN; k], labels: vec![0; m], open: 0, cost: 0.0 }
    }

    fn delta(&self, c: usize, p: Point) -> f64 {
        let n = self.count[c] as f64;
        if n == 0.0 { 0.0 } else { n / (n + 1.0) * sq_dist(p, self.mean[c]) }
    }

    fn push(&mut self, i: usize, c: usize, p: Point, delta: f64) {
        let n = self.count[c] as f64;
        self.mean[c] = (self.mean[c] * n + p) / (n + 1.0);
        self.count[c] += 1;
        if c == self.open {
            self.open += 1;
        }
        self.labels[i] = c as u8;
        self.cost += delta;
    }
}

struct Outcome {
    leaves: Vec<(f64, Vec<u8>)>,
    nodes: u64,
}

fn load(a: &AtomicU64) -> f64 {
    f64::from_bits(a.load(Ordering::Relaxed))
}

impl Search<'_> {
    fn pruned(&self, lb: f64, incumbent: f64) -> bool {
        match self.collect_tol {
            Some(tol) => lb > incumbent + tol,
            None => lb >= incumbent,
        }
    }

    /// Children of `st` at depth `i`, cheapest first.
    fn moves(&self, i: usize, st: &State, incumbent: f64) -> Vec<(usize, f64)> {
        let m = self.pts.len();
        let p = self.pts[i];
        let remaining = m - i;
        let mut out = Vec::with_capacity(st.open + 1);
        if self.k - st.open < remaining {
            for c in 0..st.open {
                out.push((c, st.delta(c, p)));
            }
        }
        if st.open < self.k {
            out.push((st.open, 0.0));
        }
        out.retain(|&(_, d)| !self.pruned(st.cost + d + self.bound[i + 1], incumbent));
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out
    }

    fn dfs(&self, i: usize, st: &mut State, best: &AtomicU64, out: &mut Outcome) {
        out.nodes += 1;
        if i == self.pts.len() {
            best.fetch_min(st.cost.to_bits(), Ordering::Relaxed);
            if let Some(tol) = self.collect_tol {
                if st.cost <= load(best) + tol {
                    out.leaves.push((st.cost, st.labels.clone()));
                }
            }
            return;
        }
        for (c, d) in self.moves(i, st, load(best)) {
            // Re-check against an incumbent that may have improved meanwhile.
            if self.pruned(st.cost + d + self.bound[i + 1], load(best)) {
                continue;
            }
            let saved = (st.count[c], st.mean[c], st.open, st.cost);
            st.push(i, c, self.pts[i], d);
            self.dfs(i + 1, st, best, out);
            (st.count[c], st.mean[c], st.open, st.cost) = saved;
        }
    }
}

/// Optimal SSE of every suffix `pts[i..]` with `min(n, len)` clusters.
fn suffix_bounds(pts: &[Point], n: usize) -> (Vec<f64>, u64) {
    let m = pts.len();
    let mut bound = vec![0.0; m + 1];
    let mut nodes = 0;
    for s in (0..m).rev() {
        let k = n.min(m - s);
        if k == m - s {
            continue;
        }
        let search = Search { pts: &pts[s..], k, bound: &bound[s..], collect_tol: None };
        let best = AtomicU64::new(f64::INFINITY.to_bits());
        let mut out = Outcome { leaves: Vec::new(), nodes: 0 };
        search.dfs(0, &mut State::new(k, m - s), &best, &mut out);
        nodes += out.nodes;
        bound[s] = load(&best);
    }
    (bound, nodes)
}

pub fn optimal_nmeans_exact(dist: &DiscreteUniform, n: usize) -> Result<OptimalResult> {
    optimal_nmeans_exact_with(dist, n, false)
}

/// Exact `V_n` and all optimal center sets. With `parallel`, subtrees below
/// a fixed-depth prefix run on the rayon pool against a shared incumbent;
/// the result does not depend on the schedule.
pub fn optimal_nmeans_exact_with(dist: &DiscreteUniform, n: usize, parallel: bool) -> Result<OptimalResult> {
    let m = dist.len();
    if n == 0 || n > m {
        return Err(Error::Domain(format!("need 1 <= n <= {m}, got n = {n}")));
    }
    if m > MAX_EXACT_POINTS {
        return Err(Error::TooLarge { m, max: MAX_EXACT_POINTS });
    }
    // Far-from-mean points first: branches diverge early and prune sooner.
    let g = mean(dist);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        sq_dist(dist.points()[b], g).total_cmp(&sq_dist(dist.points()[a], g)).then(a.cmp(&b))
    });
    let pts: Vec<Point> = order.iter().map(|&i| dist.points()[i]).collect();

    let (bound, mut nodes) = suffix_bounds(&pts, n);
    let tol = TIE_TOL * m as f64;
    let search = Search { pts: &pts, k: n, bound: &bound, collect_tol: Some(tol) };

    let incumbent = seed_incumbent(dist, n);
    let best = AtomicU64::new(incumbent.to_bits());
    let mut leaves = Vec::new();
    if parallel {
        let depth = m.min(6);
        let mut prefixes = Vec::new();
        expand(&search, 0, depth, &mut State::new(n, m), &best, &mut prefixes);
        let outs: Vec<Outcome> = prefixes
            .into_par_iter()
            .map(|mut st| {
                let mut out = Outcome { leaves: Vec::new(), nodes: 0 };
                search.dfs(depth, &mut st, &best, &mut out);
                out
            })
            .collect();
        for o in outs {
            nodes += o.nodes;
            leaves.extend(o.leaves);
        }
    } else {
        let mut out = Outcome { leaves: Vec::new(), nodes: 0 };
        search.dfs(0, &mut State::new(n, m), &best, &mut out);
        nodes += out.nodes;
        leaves = out.leaves;
    }

    let best_sse = load(&best);
    let mut sets: Vec<Quantizer> = Vec::new();
    for (cost, labels) in leaves {
        if cost > best_sse + tol {
            continue;
        }
        let mut by_point = vec![0usize; m];
        for (k, &i) in order.iter().enumerate() {
            by_point[i] = labels[k] as usize;
        }
        let c = Clustering::from_assignment(dist, &by_point, n)?;
        if !sets.iter().any(|s| s.approx_eq(&c.centers, 1e-9)) {
            sets.push(c.centers);
        }
    }
    sets.sort_by(Quantizer::canonical_cmp);
    Ok(OptimalResult { vn: best_sse / m as f64, optimal_sets: sets, nodes_explored: nodes })
}

/// Prefix states at `depth`, in depth-first order.
fn expand(search: &Search, i: usize, depth: usize, st: &mut State, best: &AtomicU64, out: &mut Vec<State>) {
    if i == depth {
        out.push(st.clone());
        return;
    }
    for (c, d) in search.moves(i, st, load(best)) {
        let mut next = st.clone();
        next.push(i, c, search.pts[i], d);
        expand(search, i + 1, depth, &mut next, best, out);
    }
}

/// An upper bound from discrete Lloyd runs started at evenly spaced points.
fn seed_incumbent(dist: &DiscreteUniform, n: usize) -> f64 {
    let m = dist.len();
    let mut best = f64::INFINITY;
    for shift in 0..m.min(4) {
        let init: Vec<Point> = (0..n).map(|j| dist.points()[(shift + j * m / n) % m]).collect();
        let Ok(q) = Quantizer::new(init) else { continue };
        if let Ok(c) = lloyd_discrete(dist, &q, 1_000) {
            // Unnormalized, with a little headroom for rounding differences.
            best = best.min(c.sse * m as f64 * (1.0 + 1e-12));
        }
    }
    best
}

/// Number of optimal sets and the sets themselves.
pub fn enumerate_optimal_sets(dist: &DiscreteUniform, n: usize) -> Result<(usize, Vec<Quantizer>)> {
    let r = optimal_nmeans_exact(dist, n)?;
    Ok((r.optimal_sets.len(), r.optimal_sets))
}
