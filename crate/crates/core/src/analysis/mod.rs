//! Warning–smell correlation, co-occurrence counting, relative frequencies
//! and the paired-test batteries comparing smells and tools.

mod battery;
mod cooccurrence;
mod correlation;

pub use battery::{
    h2_battery, h3_battery, rank_matched_pairs, run_battery, Battery, BatteryEntry, H2Key, H3Key,
    TestStatus, MIN_PAIRS, PAIRING_STRATEGY,
};
pub use cooccurrence::{cooccurrence_table, p_scores, CooccurrenceRow, CooccurrenceTable, PScore, PScoreReport};
pub use correlation::{
    correlation_matrix, normality_gate, top_quartile_warnings, CorrelationCell, CorrelationReport,
    NormalityResult, QuartileGroup, SkippedPair, TopQuartile,
};

use crate::stats::StatsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
}
