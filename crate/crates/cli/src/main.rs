//! `warnsmell`: ingest static-analysis and smell reports, analyze their
//! association per package, rank warnings and summarize.

mod analyze;
mod config;
mod diag;
mod error;
mod ingest;
mod output;
mod rank;
mod report;
mod synth;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{FileConfig, Overrides, Settings};
use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "warnsmell", version, about = "Warnings versus architectural smells, per package")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// JSON config file; flags and environment variables override its keys.
    #[arg(long, global = true, env = "WARNSMELL_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "WARNSMELL_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "WARNSMELL_JOBS")]
    jobs: Option<usize>,
    /// Omit timestamps from output metadata.
    #[arg(long, global = true, env = "WARNSMELL_DETERMINISTIC")]
    deterministic: bool,
    /// Significance level for Benjamini-Hochberg.
    #[arg(long, global = true, env = "WARNSMELL_ALPHA")]
    alpha: Option<f64>,
    /// Lower |rho| bound of the moderate band.
    #[arg(long, global = true, env = "WARNSMELL_RHO_MODERATE")]
    rho_moderate: Option<f64>,
    /// Lower |rho| bound of the strong band.
    #[arg(long, global = true, env = "WARNSMELL_RHO_STRONG")]
    rho_strong: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse native reports into canonical dumps and package profiles.
    Ingest {
        /// Report files or directories to scan.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Source roots stripped from file paths (comma separated).
        #[arg(long, value_delimiter = ',', env = "WARNSMELL_ROOTS")]
        roots: Option<Vec<String>>,
        /// JSON map overriding native severity normalization.
        #[arg(long, env = "WARNSMELL_SEVERITY_MAP")]
        severity_map: Option<PathBuf>,
        /// Skip unparseable files instead of failing.
        #[arg(long, env = "WARNSMELL_KEEP_GOING")]
        keep_going: bool,
    },
    /// Correlation, co-occurrence, P scores and the H2/H3 batteries.
    Analyze,
    /// Rankings, effort curves, Popt and the H4 battery.
    Rank {
        /// Cutoff rounding: ceiling or floor.
        #[arg(long, env = "WARNSMELL_CUTOFF_MODE")]
        cutoff_mode: Option<String>,
        /// Ranking unit: instance or rule.
        #[arg(long, env = "WARNSMELL_RANK_UNIT")]
        rank_unit: Option<String>,
    },
    /// Human-readable summary of prior outputs.
    Report,
    /// Write a synthetic corpus with planted structure.
    Synth {
        #[arg(long, env = "WARNSMELL_SEED")]
        seed: Option<u64>,
        #[arg(long, env = "WARNSMELL_PACKAGES")]
        packages: Option<usize>,
        /// JSON plant spec; defaults to the built-in demo plant.
        #[arg(long, env = "WARNSMELL_SPEC")]
        spec: Option<PathBuf>,
    },
    /// Run a single statistical test and print its intermediates.
    #[command(subcommand)]
    Diag(diag::Diag),
}

fn run(cli: Cli) -> CliResult {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let g = cli.global;
    let mut overrides = Overrides {
        out: g.out,
        alpha: g.alpha,
        jobs: g.jobs,
        deterministic: g.deterministic,
        rho_moderate: g.rho_moderate,
        rho_strong: g.rho_strong,
        ..Overrides::default()
    };
    match &cli.command {
        Command::Ingest {
            roots,
            severity_map,
            keep_going,
            ..
        } => {
            overrides.roots = roots.clone();
            overrides.severity_map = severity_map.clone();
            overrides.keep_going = *keep_going;
        }
        Command::Rank { cutoff_mode, rank_unit } => {
            overrides.cutoff_mode = cutoff_mode.clone();
            overrides.rank_unit = rank_unit.clone();
        }
        Command::Synth { seed, packages, .. } => {
            overrides.seed = *seed;
            overrides.packages = *packages;
        }
        _ => {}
    }
    let settings = Settings::resolve(overrides, file)?;
    if let Some(jobs) = settings.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::config(format!("cannot size worker pool: {e}")))?;
    }
    match &cli.command {
        Command::Ingest { inputs, .. } => ingest::run(inputs, &settings),
        Command::Analyze => analyze::run(&settings),
        Command::Rank { .. } => rank::run(&settings),
        Command::Report => report::run(&settings),
        Command::Synth { spec, .. } => synth::run(spec.as_deref(), &settings),
        Command::Diag(d) => diag::run(d, settings.alpha),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("warnsmell: {:#}", e.error);
            ExitCode::from(e.kind as u8)
        }
    }
}
