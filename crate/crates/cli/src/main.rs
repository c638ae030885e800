use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Spectral toolkit for 2x2 Dirac-type boundary value problems.
#[derive(Parser)]
#[command(name = "dirac-spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Problem config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Recorded in report metadata.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Minors, boundary class and P derivatives.
    Classify,
    /// Expansion coefficient table with the low-order closed-form check.
    Coefficients,
    /// Normalized determinant along a ray, as CSV.
    Scan,
    /// Numeric fits of the leading coefficients against the table.
    VerifyAsymptotics,
    /// Zeros of the determinant in the configured rectangle.
    Eigenvalues,
    /// Completeness verdict with numeric corroboration.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Coefficients => "coefficients",
            Command::Scan => "scan",
            Command::VerifyAsymptotics => "verify-asymptotics",
            Command::Eigenvalues => "eigenvalues",
            Command::Report => "report",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("DIRAC_SPECTRA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let Some(config) = cli.config else {
        eprintln!("error: --config is required");
        return ExitCode::from(dirac_spectra_cli::EXIT_INVALID_CONFIG as u8);
    };
    let result = dirac_spectra_cli::run(cli.command.name(), &config, cli.seed).and_then(|text| {
        match &cli.out {
            Some(path) => std::fs::write(path, text).map_err(Into::into),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
