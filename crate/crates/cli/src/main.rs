//! `tia`: geometry reports, mesh audits, interpolation errors, sweeps and
//! property checks for tetrahedral Lagrange interpolation.

mod mesh;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tia_core::experiments::{bound_sweep, ElementFamily, ErrorRatioRecord, SweepResult};
use tia_core::norms::check_p;
use tia_core::projection::geometry_report;
use tia_core::simplex::{Reference, TetrahedronData};
use tia_core::verify::{run_suites, Suite};
use tia_core::{experiments, par, Error, MultiPolynomial, PExponent, Tetrahedron};

use mesh::{audit, MeshFile, DEFAULT_SLIVER_THRESHOLD};

const EXIT_PROPERTY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_INVALID_P: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "tia", version, about = "Interpolation error analysis on tetrahedra")]
struct Cli {
    /// Worker threads (the TIA_THREADS environment variable takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyName {
    Sliver,
    Squeezed,
    Needle,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReferenceName {
    Hat,
    Tilde,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Geometry report (h_K, rho_K, R_sphere, R_K, per-facet data) for one element.
    Analyze {
        /// Tetrahedron JSON: {"vertices": [[x,y,z], x4]}.
        input: PathBuf,
    },
    /// Per-element quality table for a mesh.
    MeshAudit {
        /// Mesh JSON: {"vertices": [[x,y,z], ...], "tets": [[i,j,k,l], ...]}.
        mesh: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Flag elements with R_K / h_K above this value.
        #[arg(long, default_value_t = DEFAULT_SLIVER_THRESHOLD)]
        threshold: f64,
    },
    /// Interpolation error record for one element and one polynomial.
    InterpError {
        /// Tetrahedron JSON.
        element: PathBuf,
        /// Polynomial JSON: {"terms": [{"exp": [a,b,c], "coef": c}, ...]}.
        function: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: PExponent,
    },
    /// Error-ratio sweep over a degenerating element family, written as CSV.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyName,
        /// Sliver height exponent.
        #[arg(long, default_value_t = 2.5)]
        alpha: f64,
        /// Sliver half-widths.
        #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05, 0.025])]
        h_grid: Vec<f64>,
        /// Squeeze factors in z for the squeezed family.
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 4.0, 16.0])]
        b_grid: Vec<f64>,
        /// Squeeze factor in y for the squeezed family.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_enum, default_value = "hat")]
        reference: ReferenceName,
        /// Needle thicknesses.
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.25, 0.0625])]
        eps_grid: Vec<f64>,
        /// Needle z/y aspect.
        #[arg(long, default_value_t = 4.0)]
        aspect: f64,
        /// Number of random elements.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: PExponent,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded property suites.
    Verify {
        /// all, geometry, interp, norms or bounds.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// A failure with its exit code and one-line diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateElement(_)
            | Error::NonFinite
            | Error::CollinearPoints
            | Error::DegenerateProjection { .. }
            | Error::IllConditioned => EXIT_DEGENERATE,
            Error::InvalidPForKM { .. } => EXIT_INVALID_P,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("cannot parse {}: {e}", path.display())))
}

fn load_element(path: &Path) -> Result<Tetrahedron, Failure> {
    let data: TetrahedronData = parse_json(path)?;
    Ok(Tetrahedron::new(data.vertices)?)
}

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::input(format!("output error: {e}"))
}

fn analyze(input: &Path) -> CmdResult {
    let k = load_element(input)?;
    print_json(&geometry_report(&k)?)
}

fn mesh_audit(path: &Path, format: Format, threshold: f64) -> CmdResult {
    let mesh: MeshFile = parse_json(path)?;
    mesh.check_indices().map_err(Failure::input)?;
    let rows = audit(&mesh, threshold);
    match format {
        Format::Json => print_json(&rows),
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout());
            w.write_record(["index", "h_K", "rho_K", "R_sphere", "R_K", "R_K/h_K", "sliver_flag", "degenerate"])
                .map_err(io_failure)?;
            for row in &rows {
                w.serialize(row).map_err(io_failure)?;
            }
            w.flush().map_err(io_failure)
        }
    }
}

fn interp_error(element: &Path, function: &Path, k: u32, m: u32, p: PExponent) -> CmdResult {
    let el = load_element(element)?;
    let v = MultiPolynomial::from_json(&read(function)?)
        .map_err(|e| Failure::input(format!("cannot parse {}: {e}", function.display())))?;
    let record: ErrorRatioRecord = experiments::error_ratio(&el, &v, k, m, p)?;
    print_json(&record)
}

fn print_summary(result: &SweepResult) {
    println!("{:>12} {:>18} {:>18}", "h_param", "max_ratio_proj", "max_ratio_naive");
    for s in &result.summaries {
        println!("{:>12.6} {:>18.6e} {:>18.6e}", s.h_param, s.max_ratio_projected, s.max_ratio_naive);
    }
}

fn sweep(cmd: &Command) -> CmdResult {
    let Command::Sweep { family, alpha, h_grid, b_grid, a, reference, eps_grid, aspect, count, k, m, p, seed, out } =
        cmd
    else {
        unreachable!()
    };
    check_p(*k, *m, *p)?;
    let family = match family {
        FamilyName::Sliver => ElementFamily::sliver(*alpha, h_grid),
        FamilyName::Squeezed => {
            let which = match reference {
                ReferenceName::Hat => Reference::Hat,
                ReferenceName::Tilde => Reference::Tilde,
            };
            ElementFamily::squeezed(which, *a, b_grid)
        }
        FamilyName::Needle => ElementFamily::needle(*aspect, eps_grid),
        FamilyName::Random => ElementFamily::random(*seed, *count),
    };
    let result = bound_sweep(&family, *k, *m, *p, *seed)?;
    match out {
        Some(path) => {
            let file =
                fs::File::create(path).map_err(|e| Failure::input(format!("cannot create {}: {e}", path.display())))?;
            result.write_csv(io::BufWriter::new(file)).map_err(io_failure)?;
            print_summary(&result);
        }
        None => {
            // CSV owns standard output; the summary goes to standard error
            result.write_csv(io::stdout()).map_err(io_failure)?;
            let mut err = io::stderr();
            for s in &result.summaries {
                let _ = writeln!(err, "{} {:e} {:e}", s.h_param, s.max_ratio_projected, s.max_ratio_naive);
            }
        }
    }
    Ok(())
}

fn verify(suite: &str) -> CmdResult {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>().map_err(|e| Failure::input(e.to_string()))?]
    };
    let outcomes = run_suites(&suites);
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("{} properties, {} passed, {} failed", outcomes.len(), outcomes.len() - failed, failed);
    if failed > 0 {
        return Err(Failure { code: EXIT_PROPERTY, message: format!("{failed} properties failed") });
    }
    Ok(())
}

fn configure_threads(flag: Option<usize>) -> CmdResult {
    let threads = match std::env::var("TIA_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Failure::input(format!("TIA_THREADS must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => flag,
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::input("thread count must be positive"));
        }
        par::init_threads(n);
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    configure_threads(cli.threads)?;
    match &cli.command {
        Command::Analyze { input } => analyze(input),
        Command::MeshAudit { mesh, format, threshold } => mesh_audit(mesh, *format, *threshold),
        Command::InterpError { element, function, k, m, p } => interp_error(element, function, *k, *m, *p),
        cmd @ Command::Sweep { .. } => sweep(cmd),
        Command::Verify { suite } => verify(suite),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tia: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
