use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgAction, Parser, Subcommand};

use prym_lab::cli::{
    formulas_csv, parse_genus_range, parse_primes, run, Command, RunConfig, RunInfo, EXIT_USAGE, PRIMES_ENV,
};

/// Exact finite-field certificates for plane Prym-canonical models and the genus-5 square family.
#[derive(Parser, Debug)]
#[command(name = "prym-verifier", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Genus `N` or inclusive range `A..B`, within 5..64.
    #[arg(long = "g", global = true, default_value = "5")]
    genera: String,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Random configurations per prime for each dimension claim.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,

    /// Comma-separated primes; overrides the PRYM_VERIFIER_PRIMES environment variable.
    #[arg(long, global = true)]
    primes: Option<String>,

    /// Also count points of a medium-prime instance against the Weil bound (slow).
    #[arg(long = "pointcount", global = true)]
    point_count: bool,

    /// Random point pairs for the separation and immersion spot check.
    #[arg(long, global = true, default_value_t = 200)]
    spot_samples: usize,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Write the formula table as CSV (formulas and all only).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    /// Record the wall-clock time in the report, outside the content hash.
    #[arg(long, global = true)]
    timestamp: bool,

    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Sub {
    /// Closed-form dimension table.
    Formulas,
    /// Dimension certificates for the plane linear systems.
    Claims,
    /// Full plane Prym-canonical pipeline.
    Prym,
    /// The genus-5 (4,4) square family.
    Genus5,
    /// Formulas, plane pipeline and genus-5 family together.
    All,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("prym-verifier: {msg}");
    ExitCode::from(EXIT_USAGE as u8)
}

fn config(cli: &Cli) -> prym_lab::Result<RunConfig> {
    let command = match cli.command {
        Sub::Formulas => Command::Formulas,
        Sub::Claims => Command::Claims,
        Sub::Prym => Command::Prym,
        Sub::Genus5 => Command::Genus5,
        Sub::All => Command::All,
    };
    let mut cfg = RunConfig::new(command);
    cfg.genera = parse_genus_range(&cli.genera)?;
    cfg.seed = cli.seed;
    cfg.trials = cli.trials as usize;
    if let Some(p) = &cli.primes {
        cfg.primes = parse_primes(p)?;
    } else if let Ok(p) = std::env::var(PRIMES_ENV) {
        cfg.primes = parse_primes(&p)?;
    }
    cfg.point_count = cli.point_count;
    cfg.spot_samples = cli.spot_samples;
    cfg.verbosity = cli.verbose;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // a closed stdout is not an error for help output
            let _ = write!(std::io::stdout(), "{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let mut report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    if cli.timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        report.run_info = Some(RunInfo { timestamp_unix: secs });
    }
    if let Some(path) = &cli.csv {
        if !matches!(cfg.command, Command::Formulas | Command::All) {
            return usage("--csv applies to the formulas and all subcommands");
        }
        let written = formulas_csv(&cfg).map_err(|e| e.to_string()).and_then(|csv| {
            std::fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display()))
        });
        if let Err(e) = written {
            return usage(e);
        }
    }
    let json = report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                return usage(format!("{}: {e}", path.display()));
            }
        }
        None => {
            if let Err(e) = writeln!(std::io::stdout(), "{json}") {
                return usage(format!("stdout: {e}"));
            }
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
