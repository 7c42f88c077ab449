use clap::Subcommand;
use serde_json::json;
use warnsmell_core::stats::{
    anderson_darling, average_ranks, bh_adjust, signed_rank_detail, spearman_rho_with, wilcoxon_signed_rank,
    SpearmanMethod, StatsError,
};

use crate::error::{CliError, CliResult};

/// Runs one statistical test on literal inputs and prints its intermediates.
#[derive(Debug, Subcommand)]
pub enum Diag {
    /// Spearman rank correlation of two equal-length samples.
    Spearman {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
        /// Exact permutation p-value (at most 10 observations).
        #[arg(long)]
        exact: bool,
    },
    /// Two-sided Wilcoxon signed-rank test of paired samples.
    Wilcoxon {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b: Vec<f64>,
    },
    /// Anderson-Darling normality test.
    Ad {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        sample: Vec<f64>,
    },
    /// Benjamini-Hochberg adjustment at the configured alpha.
    Bh {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
    },
}

fn stats_error(e: StatsError) -> CliError {
    match e {
        StatsError::NonFinite | StatsError::OutOfRangeP(_) | StatsError::OutOfRangeAlpha(_) => CliError::config(e),
        _ => CliError::insufficient(e),
    }
}

pub fn run(diag: &Diag, alpha: f64) -> CliResult {
    let value = match diag {
        Diag::Spearman { x, y, exact } => {
            let method = if *exact {
                SpearmanMethod::ExactPermutation
            } else {
                SpearmanMethod::TApprox
            };
            let outcome = spearman_rho_with(x, y, method).map_err(stats_error)?;
            json!({
                "test": "spearman",
                "rank_x": average_ranks(x),
                "rank_y": average_ranks(y),
                "outcome": outcome,
            })
        }
        Diag::Wilcoxon { a, b } => {
            let detail = signed_rank_detail(a, b).map_err(stats_error)?;
            let outcome = wilcoxon_signed_rank(a, b).map_err(stats_error)?;
            json!({ "test": "wilcoxon", "detail": detail, "outcome": outcome })
        }
        Diag::Ad { sample } => {
            let outcome = anderson_darling(sample).map_err(stats_error)?;
            json!({ "test": "anderson-darling", "n": sample.len(), "outcome": outcome })
        }
        Diag::Bh { p } => {
            let adjusted = bh_adjust(p, alpha).map_err(stats_error)?;
            json!({ "test": "benjamini-hochberg", "alpha": alpha, "adjusted": adjusted })
        }
    };
    println!("{}", serde_json::to_string_pretty(&value).map_err(anyhow::Error::from)?);
    Ok(())
}
