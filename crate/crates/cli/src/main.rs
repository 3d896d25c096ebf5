use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use equisign::catalog;
use equisign::runner::{run_text, Options, RunError};

#[derive(Debug, Parser)]
#[command(name = "equisign", version, about = "Equivariant signatures, canonical models and bundle checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the tasks of a problem description.
    Run {
        spec: PathBuf,
        /// Tolerance for complex identities.
        #[arg(long)]
        tol: Option<f64>,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
        /// Seed for the random fiber factors in model checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Barycentric subdivisions allowed to make an action regular.
        #[arg(long, default_value_t = 2)]
        max_subdivisions: usize,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List or emit shipped problem descriptions.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List,
    Emit { name: String },
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> RunError {
    RunError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn main_inner(cli: Cli) -> Result<u8, RunError> {
    match cli.command {
        Command::Run {
            spec,
            tol,
            json,
            seed,
            max_subdivisions,
            output,
        } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| io_error(&spec, e))?;
            let options = Options {
                tol,
                seed,
                max_subdivisions,
            };
            let report = run_text(&text, &options)?;
            let rendered = if json { report.to_json() } else { report.to_text() };
            match output {
                Some(path) => std::fs::write(&path, rendered).map_err(|e| io_error(&path, e))?,
                None => print!("{rendered}"),
            }
            Ok(report.exit_code() as u8)
        }
        Command::Catalog { action: CatalogAction::List } => {
            for f in catalog::fixtures() {
                let expect = match &f.expect {
                    catalog::Expectation::Pass => "PASS".to_string(),
                    catalog::Expectation::Fail { task, witness } => format!("FAIL {task} {witness}"),
                };
                println!("{:<28} {:<28} {}", f.name, expect, f.summary);
            }
            Ok(0)
        }
        Command::Catalog {
            action: CatalogAction::Emit { name },
        } => {
            let spec = catalog::emit(&name)?;
            println!("{}", serde_json::to_string_pretty(&spec).expect("spec serializes"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let kind = match e {
                RunError::Syntax { .. } | RunError::Parse { .. } => "ParseError",
                RunError::Validation { .. } => "ValidationError",
                RunError::UnknownFixture { .. } => "UnknownFixture",
                RunError::Io { .. } => "IoError",
            };
            eprintln!("{kind}: {e}");
            ExitCode::from(2)
        }
    }
}
