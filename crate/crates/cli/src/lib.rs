//! Command-line front end.

pub mod commands;
pub mod error;
pub mod output;
pub mod spec;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{Kind, TensorName};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "bipara",
    version,
    about = "Exact connections and invariants of almost biparacomplex structures"
)]
pub struct Cli {
    /// Aligned plain text instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "BIPARA_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a spec and check the structure identities.
    Validate {
        spec: PathBuf,
    },
    /// Connection table on the context frame.
    Connection {
        #[arg(long, value_enum, default_value = "canonical")]
        kind: Kind,
        /// Also print Christoffel symbols on the adapted frame.
        #[arg(long)]
        christoffels: bool,
        spec: PathBuf,
    },
    /// Torsion of the chosen connection.
    Torsion {
        #[arg(long, value_enum, default_value = "canonical")]
        kind: Kind,
        spec: PathBuf,
    },
    /// Curvature of the chosen connection.
    Curvature {
        #[arg(long, value_enum, default_value = "canonical")]
        kind: Kind,
        spec: PathBuf,
    },
    /// The difference tensor between the canonical and well-adapted connections.
    Difference {
        spec: PathBuf,
    },
    /// Nijenhuis tensor of F, P, or the bracket [F,P].
    Nijenhuis {
        #[arg(long, value_enum)]
        tensor: TensorName,
        spec: PathBuf,
    },
    /// Triple kind, integrability, flatness and metric class.
    Classify {
        spec: PathBuf,
    },
    /// Check that a map carries one structure to the other.
    Equivalent {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// First prolongation dimension of the structure algebra in dimension 2n.
    Prolongation {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Count of differential invariants of order r in dimension 2n.
    Invariants {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// Bi-Lagrangian assembly from `omega` and the metric block `H`.
    Bilagrangian {
        spec: PathBuf,
    },
    /// Everything applicable to the spec.
    Report {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Runs a parsed command and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let value = match &cli.command {
        Command::Validate { spec } => commands::validate(spec)?,
        Command::Connection {
            kind,
            christoffels,
            spec,
        } => commands::connection(spec, *kind, *christoffels)?,
        Command::Torsion { kind, spec } => commands::torsion(spec, *kind)?,
        Command::Curvature { kind, spec } => commands::curvature(spec, *kind)?,
        Command::Difference { spec } => commands::difference(spec)?,
        Command::Nijenhuis { tensor, spec } => commands::nijenhuis(spec, *tensor)?,
        Command::Classify { spec } => commands::classify(spec)?,
        Command::Equivalent { a, b, map } => commands::equivalent(a, b, map)?,
        Command::Prolongation { n } => commands::prolongation(*n as usize)?,
        Command::Invariants { n, r } => commands::invariants(*n as usize, *r as usize)?,
        Command::Bilagrangian { spec } => commands::bilagrangian(spec)?,
        Command::Report { spec, .. } => commands::report(spec, cli.seed)?,
    };
    Ok(if cli.text {
        output::render_text(&value)
    } else {
        output::render_json(&value)
    })
}

/// Parses arguments, runs, and writes output. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let rendered = match execute(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let target = match &cli.command {
        Command::Report { output: Some(path), .. } => Some(path),
        _ => None,
    };
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{rendered}"),
    }
    0
}
