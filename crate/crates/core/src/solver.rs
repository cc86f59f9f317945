//! Named n-means solvers behind a common trait, selected at runtime.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cquant::{best_nmeans_with, BestOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::dquant::{is_discrete_cvt, lloyd_discrete, optimal_nmeans_exact_with, Clustering, DiscreteUniform};
use crate::error::{Error, Result};
use crate::region::Region;
use crate::voronoi::{is_cvt, Quantizer};

/// CVT tolerance used when reporting solutions.
pub const CVT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub enum Problem<'a> {
    Region(&'a Region),
    Points(&'a DiscreteUniform),
}

impl Problem<'_> {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Region(_) => "continuous region",
            Problem::Points(_) => "discrete point set",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub n: usize,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { n: 2, restarts: 16, seed: 42, tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, parallel: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub centers: Quantizer,
    pub distortion: f64,
    pub method: &'static str,
    /// Number of optimal sets, for solvers that certify optimality.
    pub multiplicity: Option<usize>,
    pub optimal_sets: Vec<Quantizer>,
    pub is_cvt: bool,
}

pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn supports(&self, problem: &Problem) -> bool;
    fn solve(&self, problem: &Problem, opts: &SolveOptions) -> Result<Solution>;
}

/// Best-of-restarts continuous Lloyd.
pub struct LloydMultiStart;

impl Solver for LloydMultiStart {
    fn name(&self) -> &'static str {
        "lloyd"
    }

    fn description(&self) -> &'static str {
        "best of seeded Lloyd runs on a continuous region"
    }

    fn supports(&self, problem: &Problem) -> bool {
        matches!(problem, Problem::Region(_))
    }

    fn solve(&self, problem: &Problem, opts: &SolveOptions) -> Result<Solution> {
        let Problem::Region(region) = problem else { return Err(unsupported(self, problem)) };
        let best = BestOptions {
            restarts: opts.restarts,
            seed: opts.seed,
            tol: opts.tol,
            max_iter: opts.max_iter,
            parallel: opts.parallel,
        };
        let trace = best_nmeans_with(region, opts.n, &best)?;
        let cvt = is_cvt(region, &trace.final_quantizer, CVT_TOL)?.is_cvt;
        Ok(Solution {
            distortion: trace.distortion(),
            method: trace.method.as_str(),
            centers: trace.final_quantizer,
            multiplicity: None,
            optimal_sets: Vec::new(),
            is_cvt: cvt,
        })
    }
}

/// Exact branch and bound over all partitions of a point set.
pub struct ExactBranchAndBound;

impl Solver for ExactBranchAndBound {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn description(&self) -> &'static str {
        "exact optimal n-means of a point set with every optimal set"
    }

    fn supports(&self, problem: &Problem) -> bool {
        matches!(problem, Problem::Points(_))
    }

    fn solve(&self, problem: &Problem, opts: &SolveOptions) -> Result<Solution> {
        let Problem::Points(dist) = problem else { return Err(unsupported(self, problem)) };
        let r = optimal_nmeans_exact_with(dist, opts.n, opts.parallel)?;
        let centers = r.optimal_sets[0].clone();
        Ok(Solution {
            is_cvt: is_discrete_cvt(dist, &centers, CVT_TOL),
            centers,
            distortion: r.vn,
            method: "branch-and-bound",
            multiplicity: Some(r.optimal_sets.len()),
            optimal_sets: r.optimal_sets,
        })
    }
}

/// Best of seeded discrete Lloyd runs started at random data points.
pub struct DiscreteLloyd;

impl Solver for DiscreteLloyd {
    fn name(&self) -> &'static str {
        "lloyd-discrete"
    }

    fn description(&self) -> &'static str {
        "best of seeded discrete Lloyd runs on a point set"
    }

    fn supports(&self, problem: &Problem) -> bool {
        matches!(problem, Problem::Points(_))
    }

    fn solve(&self, problem: &Problem, opts: &SolveOptions) -> Result<Solution> {
        let Problem::Points(dist) = problem else { return Err(unsupported(self, problem)) };
        if opts.n == 0 || opts.n > dist.len() || opts.restarts == 0 {
            return Err(Error::Domain(format!("need 1 <= n <= {} and restarts >= 1", dist.len())));
        }
        let run = |k: usize| -> Result<Clustering> {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(k as u64);
            let picks = sample(&mut rng, dist.len(), opts.n);
            let init = Quantizer::new(picks.iter().map(|i| dist.points()[i]).collect())?;
            lloyd_discrete(dist, &init, opts.max_iter)
        };
        let runs: Vec<Clustering> = if opts.parallel {
            (0..opts.restarts).into_par_iter().map(run).collect::<Result<_>>()?
        } else {
            (0..opts.restarts).map(run).collect::<Result<_>>()?
        };
        let best = runs
            .into_iter()
            .min_by(|a, b| a.sse.total_cmp(&b.sse).then_with(|| a.centers.canonical_cmp(&b.centers)))
            .expect("restarts >= 1");
        Ok(Solution {
            is_cvt: is_discrete_cvt(dist, &best.centers, CVT_TOL),
            centers: best.centers,
            distortion: best.sse,
            method: "discrete-lloyd",
            multiplicity: None,
            optimal_sets: Vec::new(),
        })
    }
}

fn unsupported(s: &dyn Solver, problem: &Problem) -> Error {
    Error::Unsupported(format!("solver {:?} does not accept a {}", s.name(), problem.kind()))
}

/// Solvers by name, in registration order.
pub struct Registry {
    solvers: Vec<Box<dyn Solver>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(LloydMultiStart));
        r.register(Box::new(ExactBranchAndBound));
        r.register(Box::new(DiscreteLloyd));
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self { solvers: Vec::new() }
    }

    /// Add a solver, replacing any existing one with the same name.
    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Solver> {
        self.solvers.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Solver> {
        self.solvers.iter().map(|s| s.as_ref())
    }

    pub fn solve(&self, name: &str, problem: &Problem, opts: &SolveOptions) -> Result<Solution> {
        let solver = self
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown solver {name:?}; known: {:?}", self.names())))?;
        if !solver.supports(problem) {
            return Err(unsupported(solver, problem));
        }
        solver.solve(problem, opts)
    }
}
