mod format;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paperfold::analysis;
use paperfold::approx::{self, ApproxError, ExperimentOptions};
use paperfold::gh::{self, DiffOptions, GhError};
use paperfold::io::{self, Document, IoError, SchemeFile};
use paperfold::quotient::{self, QuotientError, RefineOptions};
use paperfold::{InfiniteScheme, Point, Scheme};
use serde_json::{json, Value};
use thiserror::Error;

use crate::format::{num, round};

#[derive(Parser)]
#[command(name = "paperfold", version, about = "Metric quotients of polygons under paper-folding schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SchemeArgs {
    /// Scheme or pattern JSON file.
    file: PathBuf,
    /// Truncation level used when the file holds a pattern.
    #[arg(long, default_value_t = 1)]
    level: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scheme or pattern file.
    Validate { file: PathBuf },
    /// Upper bound for the quotient distance between two points.
    Dist {
        #[command(flatten)]
        input: SchemeArgs,
        /// Boundary coordinates of the two points.
        #[arg(long, num_args = 2, value_names = ["S1", "S2"], conflicts_with = "points")]
        coords: Option<Vec<f64>>,
        /// Two points given as x1 y1 x2 y2.
        #[arg(long, num_args = 4, value_names = ["X1", "Y1", "X2", "Y2"], allow_negative_numbers = true)]
        points: Option<Vec<f64>>,
        /// Base mesh (default perimeter/200).
        #[arg(long)]
        delta: Option<f64>,
        /// Refinement stops when successive values differ by less than this (default perimeter/1000).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Gromov–Hausdorff upper bound between two schemes on the same polygon.
    GhBound {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Convergence experiment for a pattern file, written as CSV.
    Converge {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = gh::DEFAULT_DELTA0)]
        delta0: f64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG diagram of a scheme.
    Render {
        #[command(flatten)]
        input: SchemeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cone points, Euler characteristic and curvature sums as JSON.
    Curvature {
        #[command(flatten)]
        input: SchemeArgs,
        /// Also list flat classes.
        #[arg(long)]
        include_flat: bool,
    },
    /// Replace every pattern by a finite truncation within a total GH budget.
    Simplify {
        file: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = gh::DEFAULT_DELTA0)]
        delta0: f64,
        /// Also compare consecutive stages on a net.
        #[arg(long)]
        empirical: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Failure(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Approx(a) => a.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::MeshTooFine { .. } | QuotientError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<GhError> for CliError {
    fn from(e: GhError) -> Self {
        match e {
            GhError::Quotient(q) => q.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            ApproxError::Gh(g) => g.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn load_scheme(path: &Path, level: u32, partial: bool) -> Result<Scheme, CliError> {
    match io::read_document(path)? {
        Document::Scheme(file) if partial => Ok(file.to_partial_scheme()?),
        Document::Scheme(file) => Ok(file.to_scheme()?),
        Document::Pattern(file) => Ok(file.to_infinite_scheme()?.truncate(level)?),
    }
}

fn load_pattern(path: &Path) -> Result<InfiniteScheme, CliError> {
    match io::read_document(path)? {
        Document::Pattern(file) => Ok(file.to_infinite_scheme()?),
        Document::Scheme(_) => Err(CliError::Usage(format!("{} is a scheme file, expected a pattern", path.display()))),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON serializes"));
}

fn run(command: Command) -> Result<(), CliError> {
    let budget = quotient::node_budget_from_env();
    match command {
        Command::Validate { file } => validate(&file),
        Command::Dist {
            input,
            coords,
            points,
            delta,
            tol,
        } => {
            let sch = load_scheme(&input.file, input.level, false)?;
            let polygon = sch.polygon();
            let (x, y) = match (coords, points) {
                (Some(c), None) => (polygon.boundary_point(c[0]), polygon.boundary_point(c[1])),
                (None, Some(p)) => (Point::new(p[0], p[1]), Point::new(p[2], p[3])),
                _ => return Err(CliError::Usage("give either --coords S1 S2 or --points X1 Y1 X2 Y2".into())),
            };
            let opts = RefineOptions {
                delta,
                tol,
                budget,
                ..RefineOptions::default()
            };
            let r = quotient::refine_until_with(&sch, x, y, &opts)?;
            println!("distance {}", num(r.result.value));
            println!("mesh {}", num(r.result.mesh));
            println!("levels {}", r.history.len());
            println!("note: upper bound from walks on the net");
            Ok(())
        }
        Command::GhBound {
            first,
            second,
            level,
            delta,
        } => {
            let a = load_scheme(&first, level, false)?;
            let b = load_scheme(&second, level, false)?;
            let delta = delta.unwrap_or_else(|| quotient::default_delta(a.polygon()));
            let opts = DiffOptions {
                budget,
                ..DiffOptions::default()
            };
            let (bound, diff) = gh::gh_bound_for_schemes(&a, &b, delta, &opts)?;
            print_json(&json!({
                "r": round(bound.r),
                "sup_diff": round(bound.sup_diff),
                "bound": round(bound.bound),
                "nodes": diff.nodes,
            }));
            Ok(())
        }
        Command::Converge {
            file,
            n_max,
            delta,
            delta0,
            out,
        } => {
            let inf = load_pattern(&file)?;
            let opts = ExperimentOptions {
                delta: delta.unwrap_or_else(|| quotient::default_delta(inf.polygon())),
                delta0,
                budget,
            };
            let rows = approx::approximation_sequence(&inf, n_max, &opts)?;
            write_output(out.as_deref(), &format::csv(&rows))
        }
        Command::Render { input, out } => {
            let sch = load_scheme(&input.file, input.level, true)?;
            write_output(out.as_deref(), &svg::render(&sch))
        }
        Command::Curvature { input, include_flat } => {
            let sch = load_scheme(&input.file, input.level, false)?;
            let report = analysis::curvature_report(&sch, include_flat);
            let cones: Vec<Value> = report
                .cone_points
                .iter()
                .map(|c| {
                    json!({
                        "class_id": c.class_id,
                        "members": c.members.iter().map(|&s| round(s)).collect::<Vec<_>>(),
                        "total_angle": round(c.total_angle),
                        "curvature": round(c.curvature),
                    })
                })
                .collect();
            print_json(&json!({
                "cone_points": cones,
                "euler_char": report.euler_char,
                "gauss_bonnet_residual": round(report.gauss_bonnet_residual),
                "total_abs_curvature": round(report.total_abs_curvature),
            }));
            Ok(())
        }
        Command::Simplify {
            file,
            eps,
            delta,
            delta0,
            empirical,
        } => {
            let inf = load_pattern(&file)?;
            let opts = ExperimentOptions {
                delta: delta.unwrap_or_else(|| quotient::default_delta(inf.polygon())),
                delta0,
                budget,
            };
            let r = approx::repeat_simplify(&inf, eps, &opts, empirical)?;
            let stages: Vec<Value> = r
                .stages
                .iter()
                .map(|s| {
                    let mut v = json!({
                        "anchor": round(s.anchor),
                        "n": s.n,
                        "gamma_diam": round(s.gamma_diam),
                        "theorem_bound": round(s.theorem_bound),
                    });
                    if let Some(e) = s.empirical {
                        v["gh_bound"] = json!(round(e.bound));
                        v["sup_diff"] = json!(round(e.sup_diff));
                    }
                    v
                })
                .collect();
            let scheme = serde_json::to_value(SchemeFile::from_scheme(&r.scheme)).expect("scheme serializes");
            print_json(&json!({
                "eps": round(eps),
                "stages": stages,
                "total_bound": round(r.total_bound),
                "scheme": scheme,
            }));
            Ok(())
        }
    }
}

fn validate(path: &Path) -> Result<(), CliError> {
    match io::read_document(path)? {
        Document::Scheme(file) => {
            let sch = file.to_scheme()?;
            println!("valid, full, {}", if sch.is_plain() { "plain" } else { "NOT plain" });
            println!("pairings {}", sch.pairings().len());
            println!("interior_disjoint true");
        }
        Document::Pattern(file) => {
            let inf = file.to_infinite_scheme()?;
            let kinds: Vec<String> = inf.patterns().iter().map(|p| p.kind.to_string()).collect();
            println!("valid, full, plain");
            println!("patterns {}", kinds.join(","));
        }
    }
    Ok(())
}
