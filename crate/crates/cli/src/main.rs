use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gqw_cli::{parse_config, run_scenario, validate, CliError, Suite, OUTPUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "gqw", about = "Quantum walks for Dirac fermions in (1+1)-dimensional space-times")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a key=value run file.
    Run {
        config: PathBuf,
    },
    /// Run a validation suite: unitarity, dispersion, geometry or oracle.
    Validate {
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the version.
    Version,
}

fn run(path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::ConfigFile { path: path.to_path_buf(), source: e })?;
    let mut cfg = parse_config(&text)?;
    if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
        cfg.output_dir = PathBuf::from(dir);
    }
    let summary = run_scenario(&cfg, &cfg.output_dir)?;
    println!("{} steps, norm drift {:.3e}", summary.steps, summary.norm_drift);
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => run(&config),
        Command::Validate { suite, seed } => validate(suite, seed).map_err(CliError::from).and_then(|report| {
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::ValidationFailed)
            }
        }),
        Command::Version => {
            println!("gqw {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
