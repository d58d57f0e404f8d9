//! Thin command-line wrapper over the library pipeline.

use clap::{Parser, Subcommand, ValueEnum};
use orbitope::cli::{self, Command as CliCommand, InputSource, OutputFormat, RunRequest};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "orbitope",
    version,
    about = "Convex-geometric invariants and orbit-space maps for spherical homogeneous spaces"
)]
struct Args {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Common {
    /// named catalog entry (see `orbitope list`)
    #[arg(long, conflicts_with = "input")]
    example: Option<String>,
    /// JSON input file
    #[arg(long)]
    input: Option<PathBuf>,
    /// report format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// seed for all randomized steps
    #[arg(long, default_value = "0")]
    seed: u64,
    /// residual tolerance override for numeric solvers
    #[arg(long)]
    tol: Option<f64>,
    /// target point, comma-separated coordinates (rational or decimal)
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// also write the report to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Print the valuation cone of a datum
    Valcone(Common),
    /// Print the moment polytope with its face lattice
    Polytope(Common),
    /// Check a toroidal fan against the polytope's normal fan
    VerifyFan(Common),
    /// Build the orbit-space model (polytope minus matched boundary faces)
    OrbitSpace(Common),
    /// Per-face stratification reports over the retained faces
    Stratify(Common),
    /// Invert the toric moment parametrization at --mu
    InvertMoment(Common),
    /// Run norm-square minimization on a weighted vector
    KempfNess(Common),
    /// Cartan (KAK) decomposition of a group element
    Cartan(Common),
    /// Sample sum-zero triples and classify their orbits
    SampleOrbits(Common),
    /// List the named catalog entries
    List,
}

fn to_request(cmd: CliCommand, c: Common) -> Result<RunRequest, String> {
    let source = match (c.example, c.input) {
        (Some(name), None) => InputSource::Example(name),
        (None, Some(path)) => InputSource::Path(path),
        _ => return Err("exactly one of --example or --input is required".into()),
    };
    Ok(RunRequest {
        command: cmd,
        source,
        format: match c.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
        seed: c.seed,
        tol: c.tol,
        mu: c.mu,
        out: c.out,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (cmd, common) = match args.command {
        Sub::List => {
            for name in orbitope::instances::registry() {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
        Sub::Valcone(c) => (CliCommand::Valcone, c),
        Sub::Polytope(c) => (CliCommand::Polytope, c),
        Sub::VerifyFan(c) => (CliCommand::VerifyFan, c),
        Sub::OrbitSpace(c) => (CliCommand::OrbitSpace, c),
        Sub::Stratify(c) => (CliCommand::Stratify, c),
        Sub::InvertMoment(c) => (CliCommand::InvertMoment, c),
        Sub::KempfNess(c) => (CliCommand::KempfNess, c),
        Sub::Cartan(c) => (CliCommand::Cartan, c),
        Sub::SampleOrbits(c) => (CliCommand::SampleOrbits, c),
    };
    let req = match to_request(cmd, common) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(1);
        }
    };
    let outcome = cli::run(&req);
    if let Some(path) = &req.out {
        if let Err(e) = std::fs::write(path, &outcome.report) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    // tolerate a closed pipe (e.g. piping into head)
    use std::io::Write;
    let _ = std::io::stdout().write_all(outcome.report.as_bytes());
    ExitCode::from(outcome.exit_code)
}
