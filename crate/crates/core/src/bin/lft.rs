use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lft_core::cli::{parse_backend, run, CliError, Command, Job, EXIT_INVALID};
use lft_core::transform::TransformKind;

/// Exact local Fourier transforms of formal connections.
#[derive(Parser)]
#[command(name = "lft", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Transform every piece and emit the canonical result.
    Transform {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a transform against the matrix oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        run: RunArgs,
        /// Transformed document to check; defaults to the tool's own transform.
        #[arg(long)]
        transformed: Option<String>,
    },
    /// Slope, irregularity and rank of each piece.
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Canonical form of a document.
    Canon {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Input document (`-` for stdin).
    #[arg(short, long, default_value = "-")]
    input: String,
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<String>,
    /// Coefficient ring: `rational` or `ext:N:m:a` for Q(ζ_N)[x]/(x^m - a).
    #[arg(long)]
    backend: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Transform kind: 0-inf, inf-0 or inf-inf.
    #[arg(long)]
    kind: TransformKind,
    /// Number of normalized output coefficients (at least s + 1).
    #[arg(long)]
    prec: usize,
    /// Explicit branch, a root in the coefficient ring.
    #[arg(long)]
    branch: Option<String>,
}

fn read(path: &str) -> Result<String, CliError> {
    let io_err = |e: io::Error| CliError::Io { path: path.to_string(), message: e.to_string() };
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (common, command) = match cli.command {
        Sub::Transform { common, run } => (common, Command::Transform { kind: run.kind, prec: run.prec, branch: run.branch }),
        Sub::Verify { common, run, transformed } => {
            let transformed = transformed.as_deref().map(read).transpose()?;
            (common, Command::Verify { kind: run.kind, prec: run.prec, branch: run.branch, transformed })
        }
        Sub::Info { common } => (common, Command::Info),
        Sub::Canon { common } => (common, Command::Canon),
    };
    let backend = common.backend.as_deref().map(parse_backend).transpose()?;
    let job = Job { command, backend, input: read(&common.input)? };
    let outcome = run(&job)?;
    match &common.output {
        Some(path) => fs::write(path, &outcome.document).map_err(|e| CliError::Io { path: path.clone(), message: e.to_string() })?,
        None => io::stdout().write_all(outcome.document.as_bytes()).map_err(|e| CliError::Io { path: "stdout".into(), message: e.to_string() })?,
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
