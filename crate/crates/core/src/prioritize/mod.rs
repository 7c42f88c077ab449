//! Warning rankers, effort-capture curves, the Popt area and the ranker
//! comparison battery.

mod curve;
mod items;
mod rank;

pub use curve::{
    capture_profile, compare_rankers, effort_curve, popt_area, popt_area_weighted, BucketWeights, CurvePoint,
    CutoffMode, EffortCurve, H4Key, Popt, CUTOFFS,
};
pub use items::{collapse_to_rules, rank_items, RankItem, RankUnit};
pub use rank::{default_p_combo, rank_by_p, rank_by_severity, rank_optimal, RankedWarning, Ranker};

use serde::{Deserialize, Serialize};

use crate::analysis::AnalysisError;
use crate::model::SmellCombo;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PrioritizeError {
    #[error("ranking is empty")]
    EmptyRanking,
    #[error("no P scores for combo {0}")]
    UnknownCombo(SmellCombo),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("unknown ranker `{0}`")]
    UnknownRanker(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Smell-proneness of a warning, from the most severe smell in its package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Bucket {
    None,
    Medium,
    High,
    Critical,
}

impl Bucket {
    pub const SCORED: [Bucket; 3] = [Bucket::Medium, Bucket::High, Bucket::Critical];

    pub fn as_str(self) -> &'static str {
        match self {
            Bucket::None => "None",
            Bucket::Medium => "Medium",
            Bucket::High => "High",
            Bucket::Critical => "Critical",
        }
    }
}

impl std::fmt::Display for Bucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Highest member smell severity; 0 for a smell-free combo.
pub fn combo_severity(combo: SmellCombo) -> u8 {
    combo.kinds().map(|k| k.default_severity()).max().unwrap_or(0)
}

pub fn bucket_of(combo: SmellCombo) -> Bucket {
    match combo_severity(combo) {
        0 => Bucket::None,
        s if s >= 9 => Bucket::Critical,
        s if s >= 7 => Bucket::High,
        _ => Bucket::Medium,
    }
}
