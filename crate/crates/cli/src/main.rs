//! `qgrowth`: growth curves to CSV, verification suites to JSON, and the two
//! counterexample curves.
//!
//! Exit codes: 0 success, 1 a verdict differs from its expectation, 2 unknown
//! function, suite or bad usage, 3 critical radius in the grid under
//! `--strict`, 4 numerical failure.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qgrowth::calculus::{self, DiffSpec, ScalarCurve};
use qgrowth::growth::{self, fmt17, Functional, FunctionalCurve, QuadratureSpec};
use qgrowth::suites::{self, SuiteConfig};
use qgrowth::{qfun, Error};

use config::{pick, FileConfig, GridArg};

#[derive(Parser, Debug)]
#[command(name = "qgrowth", version, about = "Growth functions of multivalued harmonic maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a functional of a registered map on a grid and write CSV.
    Growth(GrowthArgs),
    /// Run a named verification suite and write its JSON report.
    Verify(VerifyArgs),
    /// Write the derivative curve of a counterexample as CSV.
    Counterexample(CounterArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Flat `key = value` file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent); a `.meta.json` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GrowthArgs {
    /// Registry id: cube-root, dellis, roots:q,a,b, homog:alpha,profile, harm:m=2;terms.
    #[arg(long = "fn")]
    function: Option<String>,
    /// H, Hbar, D, I, hN:<N>, a, A or d:<weight>.
    #[arg(long)]
    functional: Option<String>,
    /// Sampling grid min:max:count.
    #[arg(long)]
    grid: Option<GridArg>,
    /// Derivative order of the functional written instead of its value.
    #[arg(long)]
    order: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Fail with exit code 3 instead of shifting a grid that meets a critical radius.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(value_name = "SUITE", conflicts_with = "suite")]
    name: Option<String>,
    /// Suite name, or `all`.
    #[arg(long)]
    suite: Option<String>,
    /// Derivative tolerance of the sign checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Grid size override; only the count of min:max:count is used.
    #[arg(long)]
    grid: Option<GridArg>,
    /// α_m for homogeneity bounds when m > 2.
    #[arg(long = "alpha-m")]
    alpha_m: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CounterArgs {
    /// cube-root or dellis.
    #[arg(long = "fn")]
    function: Option<String>,
    #[arg(long)]
    grid: Option<GridArg>,
    /// Derivative order (default 2 for cube-root, 3 for dellis).
    #[arg(long)]
    order: Option<usize>,
    /// Fail with exit code 3 instead of shifting a grid that meets a critical radius.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    common: Common,
}

/// Failures with their exit codes.
#[derive(Debug)]
enum Failure {
    Mismatch,
    Usage(anyhow::Error),
    Strict(String),
    Numerical(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch => 1,
            Failure::Usage(_) => 2,
            Failure::Strict(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let usage = matches!(
            e.downcast_ref::<Error>(),
            Some(Error::UnknownFunction(_) | Error::Parse(_) | Error::InvalidParameter(_) | Error::Domain(_))
        );
        if usage {
            Failure::Usage(e)
        } else {
            Failure::Numerical(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Growth(a) => cmd_growth(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Counterexample(a) => cmd_counterexample(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Mismatch => eprintln!("qgrowth: some claims did not match their expectation"),
                Failure::Usage(e) | Failure::Numerical(e) => eprintln!("qgrowth: {e:#}"),
                Failure::Strict(msg) => eprintln!("qgrowth: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn load_file(common: &Common) -> Result<FileConfig, Failure> {
    match &common.config {
        Some(p) => FileConfig::load(p).map_err(Failure::Usage),
        None => Ok(FileConfig::default()),
    }
}

fn out_path(common: &Common, file: &FileConfig) -> Option<PathBuf> {
    common.out.clone().or_else(|| file.get("out").map(PathBuf::from))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

/// `<out>.meta.json` with the resolved run parameters.
fn write_sidecar(path: Option<&Path>, meta: serde_json::Value) -> Result<()> {
    if let Some(p) = path {
        let mut name = p.as_os_str().to_owned();
        name.push(".meta.json");
        let text = serde_json::to_string_pretty(&meta)? + "\n";
        fs::write(PathBuf::from(name), text).context("writing metadata sidecar")?;
    }
    Ok(())
}

fn quad_json(q: &QuadratureSpec) -> serde_json::Value {
    json!({
        "circle_nodes": q.circle_nodes,
        "max_circle_nodes": q.max_circle_nodes,
        "sphere_order": q.sphere_order,
        "radial_depth": q.radial_depth,
        "graded_ratio": q.graded_ratio,
        "abs_tol": q.abs_tol,
        "rel_tol": q.rel_tol,
    })
}

/// Equispaced grid on [min, max]; when a point falls within a quarter
/// spacing of a critical point the whole grid is shifted so that the
/// critical point sits midway between two samples.
fn sample_grid(g: &GridArg, critical: &[f64], domain: (f64, f64), strict: bool) -> Result<(Vec<f64>, Vec<String>), Failure> {
    if !(g.min > domain.0 && g.max < domain.1) {
        return Err(Failure::Usage(anyhow!(
            "grid {}:{} leaves the domain ({}, {})",
            g.min,
            g.max,
            domain.0,
            domain.1
        )));
    }
    let mut pts = calculus::linspace(g.min, g.max, g.count)?;
    let h = (g.max - g.min) / (g.count - 1) as f64;
    let mut warnings = Vec::new();
    for &c in critical {
        let Some((k, d)) = pts
            .iter()
            .enumerate()
            .map(|(k, x)| (k, c - x))
            .filter(|(_, d)| d.abs() < 0.25 * h)
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        else {
            continue;
        };
        if strict {
            return Err(Failure::Strict(format!(
                "grid point {} lies within {:e} of the critical point {c}",
                pts[k],
                d.abs()
            )));
        }
        let mut options = [d - 0.5 * h, d + 0.5 * h];
        options.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        let delta = options
            .into_iter()
            .find(|s| pts[0] + s > domain.0 && pts[pts.len() - 1] + s < domain.1)
            .ok_or_else(|| Failure::Strict(format!("cannot shift the grid away from the critical point {c}")))?;
        for p in pts.iter_mut() {
            *p += delta;
        }
        let msg = format!("grid shifted by {delta:e} to avoid the critical point {c}");
        eprintln!("qgrowth: warning: {msg}");
        warnings.push(msg);
    }
    Ok((pts, warnings))
}

fn cmd_growth(a: GrowthArgs) -> Result<(), Failure> {
    let file = load_file(&a.common)?;
    let id = pick(&a.function, &file, "fn")?.ok_or_else(|| Failure::Usage(anyhow!("--fn is required")))?;
    let f = qfun::lookup(&id)?;
    let functional: Functional = pick(&a.functional, &file, "functional")?
        .unwrap_or_else(|| "Hbar".to_string())
        .parse()?;
    let default_grid = match functional {
        Functional::LogGrowth => GridArg { min: -3.0, max: -0.1, count: 50 },
        _ => GridArg { min: 0.05, max: 0.95, count: 50 },
    };
    let grid = pick(&a.grid, &file, "grid")?.unwrap_or(default_grid);
    let order = pick(&a.order, &file, "order")?.unwrap_or(0);
    let strict = a.strict || pick(&None::<bool>, &file, "strict")?.unwrap_or(false);
    let mut quad = file.quadrature()?;
    if let Some(t) = pick(&a.tol, &file, "tol")? {
        quad.rel_tol = t;
    }
    quad.validate()?;

    let (pts, warnings) = sample_grid(&grid, &functional.critical_points(&f), functional.domain(), strict)?;
    let csv = if order == 0 {
        growth::compute_curve(&f, &functional, &pts, &quad)?.to_csv_string()?
    } else {
        let curve = FunctionalCurve::new(&f, functional.clone(), &quad);
        let spec = DiffSpec {
            noise: quad.rel_tol,
            ..DiffSpec::default()
        };
        let rows = derivative_rows(&curve, &pts, order, &spec)?;
        let label = format!("{functional}^({order})");
        let mut out = String::from("r,value,functional,function_id,nodes\n");
        for (x, v) in pts.iter().zip(rows) {
            out.push_str(&format!("{},{},{label},\"{}\",0\n", fmt17(*x), fmt17(v), f.id()));
        }
        out
    };
    let path = out_path(&a.common, &file);
    write_output(path.as_deref(), csv.as_bytes())?;
    write_sidecar(
        path.as_deref(),
        json!({
            "command": "growth",
            "version": env!("CARGO_PKG_VERSION"),
            "function_id": f.id(),
            "functional": functional.to_string(),
            "order": order,
            "grid": {"min": grid.min, "max": grid.max, "count": grid.count},
            "quadrature": quad_json(&quad),
            "warnings": warnings,
        }),
    )?;
    Ok(())
}

fn derivative_rows(curve: &dyn ScalarCurve, pts: &[f64], order: usize, spec: &DiffSpec) -> Result<Vec<f64>, Failure> {
    pts.iter()
        .map(|&x| Ok(calculus::derivative(curve, x, order, spec)?.value))
        .collect()
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let file = load_file(&a.common)?;
    let suite = pick(&a.suite.or(a.name), &file, "suite")?.unwrap_or_else(|| "all".to_string());
    if suite != "all" && !suites::SUITES.contains(&suite.as_str()) {
        return Err(Failure::Usage(anyhow!(
            "unknown suite `{suite}`; known: all, {}",
            suites::SUITES.join(", ")
        )));
    }
    let cfg = SuiteConfig {
        quad: file.quadrature()?,
        tol: pick(&a.tol, &file, "tol")?,
        grid_points: pick(&a.grid, &file, "grid")?.map(|g| g.count),
        alpha_m: pick(&a.alpha_m, &file, "alpha_m")?,
    };
    let reports = suites::run_suite(&suite, &cfg)?;
    let json = calculus::suite_json(&reports) + "\n";
    let path = out_path(&a.common, &file);
    write_output(path.as_deref(), json.as_bytes())?;
    write_sidecar(
        path.as_deref(),
        json!({
            "command": "verify",
            "version": env!("CARGO_PKG_VERSION"),
            "suite": suite,
            "tol": cfg.tol,
            "grid_points": cfg.grid_points,
            "alpha_m": cfg.alpha_m,
            "quadrature": quad_json(&cfg.quad),
            "semantics": "sampled",
        }),
    )?;
    let summary = calculus::suite_summary(&reports);
    if path.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if suites::all_passed(&reports) {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_counterexample(a: CounterArgs) -> Result<(), Failure> {
    let file = load_file(&a.common)?;
    let name = pick(&a.function, &file, "fn")?.ok_or_else(|| Failure::Usage(anyhow!("--fn is required")))?;
    let quad = file.quadrature()?;
    let strict = a.strict || pick(&None::<bool>, &file, "strict")?.unwrap_or(false);
    let grid_flag = pick(&a.grid, &file, "grid")?;
    let order_flag = pick(&a.order, &file, "order")?;
    let (quantity, pts, values, warnings) = match name.as_str() {
        "cube-root" => {
            let order = order_flag.unwrap_or(2);
            let grid = grid_flag.unwrap_or(GridArg { min: 0.05, max: 0.95, count: 50 });
            let (pts, warnings) = sample_grid(&grid, &[], (0.0, 1.0), strict)?;
            let f = qfun::QFunction::cube_root();
            let curve = FunctionalCurve::new(&f, Functional::Hbar, &quad);
            let spec = DiffSpec {
                noise: quad.rel_tol,
                ..DiffSpec::default()
            };
            let values = derivative_rows(&curve, &pts, order, &spec)?;
            (format!("Hbar^({order})"), pts, values, warnings)
        }
        "dellis" => {
            let order = order_flag.unwrap_or(3);
            if order > 3 {
                return Err(Failure::Usage(anyhow!("A has explicit integrands up to order 3")));
            }
            let grid = grid_flag.unwrap_or(GridArg { min: 0.55, max: 0.95, count: 41 });
            let (pts, warnings) = sample_grid(&grid, &[0.5], (0.0, 1.0), strict)?;
            let values = pts
                .iter()
                .map(|&r| growth::a_integral(r, order, &quad))
                .collect::<qgrowth::Result<Vec<f64>>>()?;
            (format!("A^({order})"), pts, values, warnings)
        }
        other => bail_usage(format!("no counterexample named `{other}`; use cube-root or dellis"))?,
    };
    let mut csv = String::from("rho,value,quantity\n");
    for (r, v) in pts.iter().zip(&values) {
        csv.push_str(&format!("{},{},{quantity}\n", fmt17(*r), fmt17(*v)));
    }
    let path = out_path(&a.common, &file);
    write_output(path.as_deref(), csv.as_bytes())?;
    write_sidecar(
        path.as_deref(),
        json!({
            "command": "counterexample",
            "version": env!("CARGO_PKG_VERSION"),
            "name": name,
            "quantity": quantity,
            "points": pts.len(),
            "quadrature": quad_json(&quad),
            "warnings": warnings,
        }),
    )?;
    Ok(())
}

fn bail_usage<T>(msg: String) -> Result<T, Failure> {
    Err(Failure::Usage(anyhow!(msg)))
}
