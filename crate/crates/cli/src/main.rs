//! `purecubic` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification mismatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use purecubic::cocycle::AnalysisContext;
use purecubic::exactmath::{parse_integer, Rational};
use purecubic::ingest::{parse_fixture, parse_point, GeneratorFile};
use purecubic::mordell::{phi, phi_hat, preimage_by_phi, MordellPoint};
use purecubic::pipeline::{analyze, audit_row, search_generators};
use purecubic::Error;

#[derive(Parser)]
#[command(name = "purecubic", version, about = "Quasi-monogenic pure cubic fields from Mordell curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// E^D -> E^{-27D}
    Phi,
    /// E^{-27D} -> E^D
    Phihat,
    /// rational preimage under phi of a point on E^{-27D}
    Preimage,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the quasi-monogenic fields of discriminant D = -3n^2.
    Analyze {
        #[arg(long, conflicts_with = "disc", required_unless_present = "disc")]
        n: Option<String>,
        #[arg(long = "D", allow_hyphen_values = true)]
        disc: Option<String>,
        /// Generator file with points on E^{-27D}
        #[arg(long)]
        generators: Option<PathBuf>,
        /// Numerator bound for the naive point search when no file is given
        #[arg(long, default_value_t = 20)]
        search_bound: u64,
        /// Box bound for the index-form unit search
        #[arg(long, default_value_t = 5)]
        index_bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Audit a table fixture; rows with a generator file are rerun in full.
    VerifyTables {
        #[arg(long)]
        fixture: PathBuf,
        /// Directory holding <D>.json generator files
        #[arg(long)]
        generators_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        index_bound: u64,
    },
    /// Apply an isogeny (or invert phi) on the 4X3 model.
    Isogeny {
        #[arg(long = "D", allow_hyphen_values = true)]
        disc: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_enum)]
        direction: Direction,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn context(n: Option<&str>, disc: Option<&str>) -> Result<AnalysisContext, Failure> {
    let usage = |e: Error| Failure::Usage(e.to_string());
    match (n, disc) {
        (Some(n), None) => AnalysisContext::from_n(&parse_integer(n).map_err(usage)?).map_err(usage),
        (None, Some(d)) => AnalysisContext::from_disc(&parse_integer(d).map_err(usage)?).map_err(usage),
        _ => Err(Failure::Usage("give exactly one of --n and --D".into())),
    }
}

fn cmd_analyze(
    n: Option<&str>,
    disc: Option<&str>,
    generators: Option<&Path>,
    search_bound: u64,
    index_bound: u64,
    format: Format,
) -> Result<(), Failure> {
    let ctx = context(n, disc)?;
    let (points, source) = match generators {
        Some(path) => {
            let file = GeneratorFile::parse(&read(path)?)?;
            if file.disc != ctx.disc {
                return Err(Failure::Data(format!(
                    "{}: generators are for D = {}, not {}",
                    path.display(),
                    file.disc,
                    ctx.disc
                )));
            }
            (file.quartic_points()?, "file")
        }
        None => (search_generators(&ctx, search_bound)?, "search"),
    };
    let analysis = analyze(&ctx, &points, None, index_bound)?;
    match format {
        Format::Json => {
            let mut value = analysis.to_json();
            value["generator_source"] = serde_json::Value::String(source.into());
            println!("{}", serde_json::to_string_pretty(&value).expect("json value serializes"));
        }
        Format::Tsv => print!("{}", analysis.to_tsv()),
    }
    if analysis.routes_agree {
        Ok(())
    } else {
        eprintln!("matrix and point enumerations disagree");
        Err(Failure::Mismatch)
    }
}

fn cmd_verify_tables(fixture: &Path, generators_dir: Option<&Path>, index_bound: u64) -> Result<(), Failure> {
    let rows = parse_fixture(&read(fixture)?)?;
    let outcomes: Vec<Result<(bool, String), String>> = rows
        .par_iter()
        .map(|row| {
            let file = match generators_dir.map(|d| d.join(format!("{}.json", row.disc))) {
                Some(path) if path.exists() => {
                    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                    Some(GeneratorFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?)
                }
                _ => None,
            };
            let audit = audit_row(row, file.as_ref(), index_bound).map_err(|e| format!("D={}: {e}", row.disc))?;
            Ok((audit.passed(), audit.summary()))
        })
        .collect();
    let (mut failed, mut errors) = (0usize, 0usize);
    for outcome in &outcomes {
        match outcome {
            Ok((passed, line)) => {
                failed += usize::from(!passed);
                println!("{} {line}", if *passed { "PASS" } else { "FAIL" });
            }
            Err(msg) => {
                errors += 1;
                println!("ERROR {msg}");
            }
        }
    }
    println!("{} rows, {failed} failed, {errors} errors", outcomes.len());
    if errors > 0 {
        Err(Failure::Data(format!("{errors} rows could not be checked")))
    } else if failed > 0 {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn cmd_isogeny(disc: &str, point: &str, direction: Direction) -> Result<(), Failure> {
    let disc = parse_integer(disc).map_err(|e| Failure::Usage(e.to_string()))?;
    if disc == 0.into() {
        return Err(Failure::Usage("D must be nonzero".into()));
    }
    let d = Rational::from_integer(disc);
    let p = parse_point(point).map_err(|e| Failure::Usage(e.to_string()))?;
    let image: Option<MordellPoint> = match direction {
        Direction::Phi => Some(phi(&d, &p)?),
        Direction::Phihat => Some(phi_hat(&d, &p)?),
        Direction::Preimage => preimage_by_phi(&d, &p)?,
    };
    match image {
        Some(q) => println!("{q}"),
        None => println!("none"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Analyze { n, disc, generators, search_bound, index_bound, format } => cmd_analyze(
            n.as_deref(),
            disc.as_deref(),
            generators.as_deref(),
            *search_bound,
            *index_bound,
            *format,
        ),
        Command::VerifyTables { fixture, generators_dir, index_bound } => {
            cmd_verify_tables(fixture, generators_dir.as_deref(), *index_bound)
        }
        Command::Isogeny { disc, point, direction } => cmd_isogeny(disc, point, *direction),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch) => ExitCode::from(3),
    }
}
