//! Centers of mass, Voronoi partitions, centroidal Voronoi tessellations and
//! optimal n-means quantizers for uniform and polynomial densities on convex
//! planar regions and for finite point sets.

pub mod cquant;
pub mod disc;
pub mod dquant;
pub mod error;
pub mod geom;
pub mod moments;
pub mod quad;
pub mod region;
pub mod solver;
pub mod voronoi;

pub use error::{Error, Result};
pub use geom::{ConvexPolygon, HalfPlane, Point};
pub use moments::Method;
pub use region::{Density, MassProfile, Region, Shape, Term};
pub use voronoi::{Quantizer, VoronoiCell};
pub use dquant::DiscreteUniform;
pub use solver::{Problem, Registry, SolveOptions, Solution, Solver};
