//! `mfnorm`: weight tables, mixed norms and verification suites from the
//! command line.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 configuration or usage
//! error, 3 numeric divergence, 4 check not applicable to the geometry.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use commands::{Check, RhoForm};
use config::Overrides;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Lib(#[from] mfnorm::Error),

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(mfnorm::Error::Divergence(_)) => 3,
            CliError::Lib(mfnorm::Error::NotApplicable(_)) => 4,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "mfnorm", version, about = "Mixed-norm spaces of holomorphic functions: weights, norms and checks")]
struct Cli {
    /// Worker threads for the parallel stages (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Tabulate the frequency weight numerically and in closed form (CSV)
    Rho {
        /// Comma-separated frequencies; defaults depend on the geometry
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        xi: Option<Vec<f64>>,
        /// Closed form to compare against
        #[arg(long, value_enum, default_value_t = RhoForm::Derived)]
        form: RhoForm,
    },
    /// Mixed norm of the selected function, with the weighted boundary norm when it applies
    Norm,
    /// Run one verification check, or all of them
    Verify {
        #[arg(value_enum)]
        check: Check,
    },
    /// List the built-in test functions
    Catalog {
        /// Machine-readable listing with parameter schemas
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    if let Commands::Catalog { json } = cli.command {
        return Ok(commands::catalog_listing(json));
    }
    let cfg = config::resolve(&cli.overrides)?;
    match cli.command {
        Commands::Rho { xi, form } => commands::rho(&cfg, xi.as_deref(), form),
        Commands::Norm => commands::norm(&cfg),
        Commands::Verify { check } => commands::verify(&cfg, check),
        Commands::Catalog { .. } => unreachable!(),
    }
}

fn write_files(files: &[(PathBuf, String)]) -> Result<(), CliError> {
    for (path, body) in files {
        let wrap = |source| CliError::Write { path: path.clone(), source };
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(wrap)?;
        }
        std::fs::write(path, body).map_err(wrap)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli).and_then(|out| write_files(&out.files).map(|_| out)) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
