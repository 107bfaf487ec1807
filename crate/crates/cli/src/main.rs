use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use detblow::commands::{cmd_analyze, cmd_blowup, cmd_sample, cmd_secants};
use detblow::config::{Format, MatrixSource, RunConfig};
use detblow::error::Failure;
use detblow::examples::{cmd_examples, expectations, parse_expectations};
use detblow::output::render;
use detblow::scan::{cmd_phase_scan, parse_list, parse_range};
use detblow_core::blowup::BlowupMode;
use detblow_core::field::DEFAULT_PRIME;
use detblow_core::graded::Budget;

#[derive(Debug, Parser)]
#[command(name = "detblow", version, about = "Determinantal varieties, their multisecant loci and blow-up embeddings over F_p")]
struct Cli {
    /// Odd prime for the coefficient field.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Seed for sampled matrices and randomized steps.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Last degree of Hilbert functions to compute (at least 4).
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (phase-scan only).
    #[arg(long, global = true)]
    csv: bool,
    /// Largest Macaulay matrix width per degree.
    #[arg(long, global = true, default_value_t = 60_000)]
    max_columns: usize,
    /// Largest number of rows fed to one degree.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    max_rows: usize,
    /// Also write the output to this file.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree, dimension, sigma, genus and Hilbert table of the variety of maximal minors.
    Analyze {
        #[command(flatten)]
        source: MatrixSource,
    },
    /// Rank loci of lines and sigma-secant lines, or the intersection with a given line.
    Secants {
        #[command(flatten)]
        source: MatrixSource,
        /// Two points "P;Q" with comma-separated homogeneous coordinates.
        #[arg(long)]
        line: Option<String>,
        /// Extract and verify an explicit sigma-secant line.
        #[arg(long)]
        witness: bool,
        /// Skip dimension and degree of loci already known to be nonempty.
        #[arg(long)]
        no_measure: bool,
    },
    /// Presentation of the blow-up embedded by forms of degree sigma or sigma + 1.
    Blowup {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long, value_enum, default_value = "sigma")]
        mode: ModeArg,
    },
    /// Emptiness of the line and secant loci over ranges of (n, sigma).
    PhaseScan {
        /// Ambient dimensions, "a" or "a..b".
        #[arg(long = "n-range", default_value = "3..4")]
        n_range: String,
        /// Matrix sizes, "a" or "a..b".
        #[arg(long = "sigma-range", default_value = "4..9")]
        sigma_range: String,
        /// Comma-separated seeds.
        #[arg(long, default_value = "1,2,3")]
        seeds: String,
        /// Also fit dimension and degree of nonempty loci.
        #[arg(long)]
        measure: bool,
    },
    /// Recompute the worked examples and compare with the expectation table.
    Examples {
        /// Example ids; all when omitted.
        ids: Vec<String>,
        /// Expectation table to use instead of the bundled one.
        #[arg(long, value_name = "FILE")]
        expectations: Option<PathBuf>,
    },
    /// Print a sampled matrix as JSON.
    Sample {
        #[command(flatten)]
        source: MatrixSource,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Sigma,
    SigmaPlusOne,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("DETBLOW_THREADS") else { return Ok(()) };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Input(format!("DETBLOW_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot start thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    configure_threads()?;
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let budget = Budget { max_columns: cli.max_columns, max_rows: cli.max_rows };
    let cfg = RunConfig::new(cli.prime, cli.seed, cli.max_degree, format, budget)?;
    let out = match &cli.command {
        Command::Analyze { source } => (render(&cmd_analyze(&cfg, source)?, format)?, true),
        Command::Secants { source, line, witness, no_measure } => {
            (render(&cmd_secants(&cfg, source, line.as_deref(), *witness, !no_measure)?, format)?, true)
        }
        Command::Blowup { source, mode } => {
            let mode = match mode {
                ModeArg::Sigma => BlowupMode::Sigma,
                ModeArg::SigmaPlusOne => BlowupMode::SigmaPlusOne,
            };
            (render(&cmd_blowup(&cfg, source, mode)?, format)?, true)
        }
        Command::PhaseScan { n_range, sigma_range, seeds, measure } => {
            let ns = parse_range(n_range)?;
            let sigmas = parse_range(sigma_range)?;
            let seeds = parse_list(seeds)?;
            let format = if format == Format::Text { Format::Csv } else { format };
            (render(&cmd_phase_scan(&cfg, &ns, &sigmas, &seeds, *measure)?, format)?, true)
        }
        Command::Examples { ids, expectations: path } => {
            let table = match path {
                Some(path) => parse_expectations(
                    &std::fs::read_to_string(path)
                        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?,
                )?,
                None => expectations(),
            };
            let report = cmd_examples(&cfg, &table, ids)?;
            (render(&report, format)?, report.pass)
        }
        Command::Sample { source } => (render(&cmd_sample(&cfg, source)?, Format::Text)?, true),
    };
    if let Some(path) = &cli.output {
        std::fs::write(path, &out.0).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, pass)) => {
            print!("{out}");
            if pass {
                ExitCode::SUCCESS
            } else {
                let failure = Failure::Mismatch("some examples do not match their expectations".into());
                eprintln!("{failure}");
                ExitCode::from(failure.exit_code() as u8)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
