//! Reproduction tables: named groups of expected-versus-computed rows.

use std::f64::consts::PI;

use cvtq_core::cquant::{
    best_nmeans, disc_two_means_roots, golden_partition_solve, rhombus_case_solve, CaseId,
};
use cvtq_core::dquant::{beta_set, distortion_discrete, optimal_nmeans_exact, preset as points};
use cvtq_core::region::preset;
use cvtq_core::Result;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub table: &'static str,
    pub label: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Row {
    fn new(table: &'static str, label: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        let pass = (computed - expected).abs() <= tolerance;
        Self { table, label: label.into(), expected, computed, tolerance, pass }
    }
}

pub trait ReproTable: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn rows(&self) -> Result<Vec<Row>>;
}

pub struct Centroids;

impl ReproTable for Centroids {
    fn name(&self) -> &'static str {
        "centroid"
    }

    fn description(&self) -> &'static str {
        "centroid of the quarter-disc lamina and expected vector of the 4xy density"
    }

    fn rows(&self) -> Result<Vec<Row>> {
        let t = self.name();
        let c = preset("example1").expect("preset").mass_profile().centroid();
        let e = preset("example2").expect("preset").expected_vector();
        Ok(vec![
            Row::new(t, "lamina centroid x1 = 2/(2+pi)", 2.0 / (2.0 + PI), c.x1, 1e-9),
            Row::new(t, "lamina centroid x2 = 2/(3(2+pi))", 2.0 / (3.0 * (2.0 + PI)), c.x2, 1e-9),
            Row::new(t, "density 4xy, E(X1)", 2.0 / 3.0, e.x1, 1e-12),
            Row::new(t, "density 4xy, E(X2)", 2.0 / 3.0, e.x2, 1e-12),
        ])
    }
}

pub struct Disc;

impl ReproTable for Disc {
    fn name(&self) -> &'static str {
        "prop2"
    }

    fn description(&self) -> &'static str {
        "two-means of the unit disc"
    }

    fn rows(&self) -> Result<Vec<Row>> {
        let t = self.name();
        let roots = disc_two_means_roots(10_000, 1e-12)?;
        let trace = best_nmeans(&preset("prop2-disc").expect("preset"), 2, 32, 42)?;
        let c = trace.final_quantizer.centers();
        let k = 4.0 / (3.0 * PI);
        Ok(vec![
            Row::new(t, "residual roots on (0, 1]", 1.0, roots.len() as f64, 0.0),
            Row::new(t, "chord parameter a", 1.0, roots.first().copied().unwrap_or(f64::NAN), 1e-6),
            Row::new(t, "|c| = 4/(3pi), Lloyd", k, 0.5 * (c[0].norm() + c[1].norm()), 1e-6),
            Row::new(t, "V2 = 1/2 - 16/(9pi^2), Lloyd", 0.5 - k * k, trace.distortion(), 1e-6),
        ])
    }
}

pub struct Golden;

impl ReproTable for Golden {
    fn name(&self) -> &'static str {
        "prop3"
    }

    fn description(&self) -> &'static str {
        "golden-ratio CVT of the right isosceles triangle"
    }

    fn rows(&self) -> Result<Vec<Row>> {
        let g = golden_partition_solve()?;
        Ok(vec![
            Row::new(self.name(), "root alpha", 0.618033989, g.solution.alpha, 1e-9),
            Row::new(self.name(), "area ratio", (5f64.sqrt() - 1.0) / 2.0, g.area_ratio, 1e-9),
        ])
    }
}

pub struct Rhombus;

impl ReproTable for Rhombus {
    fn name(&self) -> &'static str {
        "prop4"
    }

    fn description(&self) -> &'static str {
        "two-means of the unit rhombus: optimal case and the case-3 CVT"
    }

    fn rows(&self) -> Result<Vec<Row>> {
        let first = |c| -> Result<f64> {
            Ok(rhombus_case_solve(c)?.first().map_or(f64::NAN, |s| s.distortion))
        };
        Ok(vec![
            Row::new(self.name(), "V2 (case 1, optimal)", 0.0718274, first(CaseId::Case1)?, 1e-6),
            Row::new(self.name(), "V (case 3, CVT)", 0.150395, first(CaseId::Case3)?, 1e-6),
        ])
    }
}

pub struct Discrete;

impl ReproTable for Discrete {
    fn name(&self) -> &'static str {
        "discrete"
    }

    fn description(&self) -> &'static str {
        "exact n-means errors of the nine-point triangle and the 4x4 grid, and the CVT beta"
    }

    fn rows(&self) -> Result<Vec<Row>> {
        let t = self.name();
        let tri = points("triangle9").expect("preset");
        let grid = points("grid4").expect("preset");
        let mut rows = Vec::new();
        for (n, v) in [0.185185, 0.111111, 0.037037, 0.030864].into_iter().enumerate() {
            let vn = optimal_nmeans_exact(&tri, n + 1)?.vn;
            rows.push(Row::new(t, format!("triangle V{}", n + 1), v, vn, 1e-6));
        }
        for (n, v) in [2.5, 1.5, 0.927083, 0.5, 0.4375].into_iter().enumerate() {
            let vn = optimal_nmeans_exact(&grid, n + 1)?.vn;
            rows.push(Row::new(t, format!("grid V{}", n + 1), v, vn, 1e-6));
        }
        rows.push(Row::new(t, "grid beta (CVT, not optimal)", 0.614583, distortion_discrete(&grid, &beta_set()), 1e-6));
        Ok(rows)
    }
}

/// Tables by name, in registration order.
pub struct TableRegistry {
    tables: Vec<Box<dyn ReproTable>>,
}

impl Default for TableRegistry {
    fn default() -> Self {
        Self {
            tables: vec![
                Box::new(Centroids),
                Box::new(Disc),
                Box::new(Golden),
                Box::new(Rhombus),
                Box::new(Discrete),
            ],
        }
    }
}

impl TableRegistry {
    pub fn names(&self) -> Vec<&'static str> {
        self.tables.iter().map(|t| t.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn ReproTable> {
        self.tables.iter().find(|t| t.name() == name).map(|t| t.as_ref())
    }

    /// `"all"` selects every table.
    pub fn select(&self, name: &str) -> Option<Vec<&dyn ReproTable>> {
        if name == "all" {
            Some(self.tables.iter().map(|t| t.as_ref()).collect())
        } else {
            self.get(name).map(|t| vec![t])
        }
    }
}
