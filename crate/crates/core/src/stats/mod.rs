//! Nonparametric statistics: Anderson–Darling normality, Spearman rank
//! correlation, the Wilcoxon signed-rank test, Benjamini–Hochberg adjustment
//! and quartile helpers.

mod describe;
mod fdr;
mod normality;
mod rank;
mod spearman;
mod wilcoxon;

use serde::{Deserialize, Serialize};

pub use describe::{interpret_rho, quartiles, Quartiles, RhoBand, RhoBands};
pub use fdr::{bh_adjust, AdjustedOutcome, DEFAULT_ALPHA};
pub use normality::anderson_darling;
pub use rank::average_ranks;
pub use spearman::{spearman_rho, spearman_rho_with, SpearmanMethod, EXACT_SPEARMAN_MAX_N};
pub use wilcoxon::{signed_rank_detail, wilcoxon_signed_rank, SignedRankDetail, EXACT_WILCOXON_MAX_N};

/// How a p-value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    NormalApprox,
    TApprox,
    Permutation,
    Stephens,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::NormalApprox => "normal-approx",
            Method::TApprox => "t-approx",
            Method::Permutation => "permutation",
            Method::Stephens => "stephens",
        }
    }
}

/// Result of one hypothesis test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub method: Method,
}

impl TestOutcome {
    fn new(statistic: f64, p_value: f64, method: Method) -> Self {
        debug_assert!(statistic.is_finite());
        TestOutcome {
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("sample too small: need at least {needed}, got {got}")]
    SampleTooSmall { needed: usize, got: usize },
    #[error("sample is constant")]
    ConstantSample,
    #[error("inputs differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("an input vector is constant")]
    ConstantInput,
    #[error("need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("all paired differences are zero")]
    AllZeroDifferences,
    #[error("p-value {0} outside [0, 1]")]
    OutOfRangeP(f64),
    #[error("alpha {0} outside (0, 1)")]
    OutOfRangeAlpha(f64),
    #[error("rho {0} outside [-1, 1]")]
    OutOfRangeRho(f64),
    #[error("input contains a non-finite value")]
    NonFinite,
    #[error("input is empty")]
    Empty,
    #[error("exact permutation test supports at most {max} observations, got {got}")]
    TooLongForExact { max: usize, got: usize },
}

fn check_finite(values: &[f64]) -> Result<(), StatsError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

pub(crate) fn standard_normal() -> statrs::distribution::Normal {
    statrs::distribution::Normal::new(0.0, 1.0).expect("unit normal is valid")
}
