//! `cvtq`: centroids, optimal quantizers, reproduction tables and diagrams.

mod error;
mod input;
mod report;
mod svg;
mod tables;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvtq_core::solver::CVT_TOL;
use cvtq_core::voronoi::is_cvt;
use cvtq_core::{dquant, Problem, Quantizer, Registry, SolveOptions};

use error::{CliError, Result, EXIT_OK, EXIT_PARSE};
use input::{digest, load, parse_centers, Input};
use report::{pt9, sig9, RunReport};
use tables::TableRegistry;

#[derive(Parser)]
#[command(name = "cvtq", version, about = "Centroids, Voronoi partitions and optimal n-means quantizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Centroid and expected vector of a region.
    Centroid {
        /// Preset name or path to a cvtq-region/1 file.
        input: String,
    },
    /// Best or exact n-means of a region or point set.
    Optimal {
        /// Preset name or path to a cvtq-region/1 or cvtq-points/1 file.
        input: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Exact branch and bound (point sets only); same as --solver exact.
        #[arg(long, conflicts_with = "solver")]
        exact: bool,
        /// Solver name; defaults to lloyd for regions and lloyd-discrete for point sets.
        #[arg(long)]
        solver: Option<String>,
    },
    /// Recompute the reference values and compare against them.
    Reproduce {
        /// Table to run: all, centroid, prop2, prop3, prop4 or discrete.
        #[arg(long, default_value = "all")]
        table: String,
    },
    /// Write an SVG diagram of a Voronoi partition.
    Render {
        /// Preset name or path to a cvtq-region/1 or cvtq-points/1 file.
        input: String,
        /// Generators as "x,y;x,y;..."; otherwise the best --n centers are drawn.
        #[arg(long, conflicts_with = "n", allow_hyphen_values = true)]
        centers: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Number of centers.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Random restarts for Lloyd searches.
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Seed for random starts.
    #[arg(long, env = "CVTQ_SEED", default_value_t = 42)]
    seed: u64,
    /// Run restarts and branch-and-bound subtrees on all cores.
    #[arg(long)]
    parallel: bool,
}

impl SearchArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            n: self.n,
            restarts: self.restarts,
            seed: self.seed,
            parallel: self.parallel,
            ..SolveOptions::default()
        }
    }

    /// Bytes identifying the search settings; `parallel` is left out because
    /// it does not change results.
    fn identity(&self) -> String {
        format!("n={};restarts={};seed={}", self.n, self.restarts, self.seed)
    }
}

fn centroid(arg: &str) -> Result<RunReport> {
    let loaded = load(arg)?;
    let Input::Region(region) = loaded.input else {
        return Err(CliError::Unsupported("centroid needs a region, not a point set".into()));
    };
    let profile = region.mass_profile();
    let centroid = region.shape_centroid();
    let expected = profile.centroid();
    let q = Quantizer::new(vec![expected])?;
    let mut r = RunReport::new("centroid", digest(&[b"centroid", &loaded.identity]), &q, profile.variance());
    r.is_cvt = true;
    r.method = profile.method.as_str().to_string();
    r.centroid = Some(pt9(centroid));
    r.expected_vector = Some(pt9(expected));
    r.density_mismatch = Some(!region.density.is_constant());
    Ok(r)
}

fn optimal(arg: &str, search: &SearchArgs, exact: bool, solver: Option<&str>) -> Result<RunReport> {
    let loaded = load(arg)?;
    let registry = Registry::default();
    let problem = match &loaded.input {
        Input::Region(r) => Problem::Region(r),
        Input::Points(d) => Problem::Points(d),
    };
    let name = match (exact, solver) {
        (true, _) => "exact",
        (false, Some(s)) => s,
        (false, None) if matches!(problem, Problem::Region(_)) => "lloyd",
        (false, None) => "lloyd-discrete",
    };
    let sol = registry.solve(name, &problem, &search.options())?;
    let id = format!("{};solver={name}", search.identity());
    let mut r = RunReport::new("optimal", digest(&[b"optimal", &loaded.identity, id.as_bytes()]), &sol.centers, sol.distortion);
    r.multiplicity = sol.multiplicity;
    r.is_cvt = sol.is_cvt;
    r.method = sol.method.to_string();
    r.solver = Some(name.to_string());
    if name != "exact" {
        r.seed = Some(search.seed);
    }
    Ok(r)
}

fn reproduce(table: &str) -> Result<()> {
    let registry = TableRegistry::default();
    let selected = registry.select(table).ok_or_else(|| {
        CliError::Input {
            origin: "--table".into(),
            source: cvtq_core::Error::InvalidInput(format!(
                "unknown table {table:?}; known: all, {}",
                registry.names().join(", ")
            )),
        }
    })?;
    let mut e = std::io::stderr().lock();
    let mut rows = Vec::new();
    for t in selected {
        let _ = writeln!(e, "{}: {}", t.name(), t.description());
        rows.extend(t.rows()?);
    }
    let _ = writeln!(e, "{:<9} {:<34} {:>14} {:>14} {:>8}  status", "table", "row", "expected", "computed", "tol");
    for r in &rows {
        let _ = writeln!(
            e,
            "{:<9} {:<34} {:>14} {:>14} {:>8.0e}  {}",
            r.table,
            r.label,
            sig9(r.expected),
            sig9(r.computed),
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let summary = serde_json::json!({
        "command": "reproduce",
        "table": table,
        "rows": rows.iter().map(|r| serde_json::json!({
            "table": r.table,
            "row": r.label,
            "expected": sig9(r.expected),
            "computed": sig9(r.computed),
            "tolerance": r.tolerance,
            "pass": r.pass,
        })).collect::<Vec<_>>(),
        "passed": failed == 0,
    });
    println!("{summary}");
    if failed > 0 {
        return Err(CliError::Reproduction { failed, total: rows.len() });
    }
    Ok(())
}

fn render(arg: &str, centers: Option<&str>, search: &SearchArgs, out: &PathBuf) -> Result<RunReport> {
    let loaded = load(arg)?;
    let given = centers.map(parse_centers).transpose()?;
    let registry = Registry::default();
    let (q, distortion, cvt, method, seed) = match (&loaded.input, given) {
        (Input::Region(r), Some(q)) => {
            let d = cvtq_core::cquant::distortion(r, &q)?;
            let cvt = is_cvt(r, &q, CVT_TOL)?.is_cvt;
            (q, d.value, cvt, d.method.as_str().to_string(), None)
        }
        (Input::Points(d), Some(q)) => {
            let v = dquant::distortion_discrete(d, &q);
            let cvt = dquant::is_discrete_cvt(d, &q, CVT_TOL);
            (q, v, cvt, "exact-sum".to_string(), None)
        }
        (input, None) => {
            let (name, problem) = match input {
                Input::Region(r) => ("lloyd", Problem::Region(r)),
                Input::Points(d) => ("lloyd-discrete", Problem::Points(d)),
            };
            let sol = registry.solve(name, &problem, &search.options())?;
            (sol.centers, sol.distortion, sol.is_cvt, sol.method.to_string(), Some(search.seed))
        }
    };
    let svg = match &loaded.input {
        Input::Region(r) => svg::render_region(r, &q)?,
        Input::Points(d) => svg::render_points(d, &q)?,
    };
    std::fs::write(out, svg).map_err(|source| CliError::Io { path: out.clone(), source })?;
    let id = match centers {
        Some(c) => format!("centers={c}"),
        None => search.identity(),
    };
    let mut r = RunReport::new("render", digest(&[b"render", &loaded.identity, id.as_bytes()]), &q, distortion);
    r.is_cvt = cvt;
    r.method = method;
    r.seed = seed;
    r.output = Some(out.display().to_string());
    Ok(r)
}

fn run(cli: Cli) -> Result<()> {
    let report = match &cli.command {
        Command::Centroid { input } => centroid(input)?,
        Command::Optimal { input, search, exact, solver } => optimal(input, search, *exact, solver.as_deref())?,
        Command::Reproduce { table } => return reproduce(table),
        Command::Render { input, centers, search, out } => render(input, centers.as_deref(), search, out)?,
    };
    report.emit();
    report.describe();
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("cvtq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
