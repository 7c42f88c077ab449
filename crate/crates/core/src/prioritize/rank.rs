use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{combo_severity, Bucket, PrioritizeError, RankItem};
use crate::analysis::PScoreReport;
use crate::ingest::SourceTool;
use crate::model::SmellCombo;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Ranker {
    Severity,
    PBased(SmellCombo),
    Optimal,
    /// Any other ordering, e.g. a baseline in an experiment.
    Named(String),
}

impl fmt::Display for Ranker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ranker::Severity => f.write_str("severity"),
            Ranker::PBased(c) => write!(f, "p:{c}"),
            Ranker::Optimal => f.write_str("optimal"),
            Ranker::Named(n) => f.write_str(n),
        }
    }
}

impl FromStr for Ranker {
    type Err = PrioritizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "severity" => Ok(Ranker::Severity),
            "optimal" => Ok(Ranker::Optimal),
            _ => match s.strip_prefix("p:") {
                Some(c) => c
                    .parse()
                    .map(Ranker::PBased)
                    .map_err(|_| PrioritizeError::UnknownRanker(s.to_string())),
                None if !s.is_empty() => Ok(Ranker::Named(s.to_string())),
                None => Err(PrioritizeError::UnknownRanker(s.to_string())),
            },
        }
    }
}

impl From<Ranker> for String {
    fn from(r: Ranker) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for Ranker {
    type Error = PrioritizeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedWarning {
    pub tool: SourceTool,
    pub rule_id: String,
    pub package: Option<String>,
    pub key: f64,
    pub bucket: Bucket,
}

/// Descending key, then descending rule instance count, rule id, tool,
/// package and descending severity. Items equal under all of these are
/// indistinguishable in the output, so the order is permutation invariant.
fn rank_with(items: &[RankItem], key: impl Fn(&RankItem) -> f64) -> Vec<RankedWarning> {
    let mut keyed: Vec<(f64, &RankItem)> = items.iter().map(|i| (key(i), i)).collect();
    keyed.sort_by(|(ka, a), (kb, b)| {
        kb.total_cmp(ka)
            .then(b.rule_count.cmp(&a.rule_count))
            .then_with(|| a.rule_id.cmp(&b.rule_id))
            .then(a.tool.cmp(&b.tool))
            .then_with(|| a.package.cmp(&b.package))
            .then(b.severity.cmp(&a.severity))
            .then_with(|| combo_severity(b.combo).cmp(&combo_severity(a.combo)))
            .then(a.combo.index().cmp(&b.combo.index()))
    });
    keyed
        .into_iter()
        .map(|(key, i)| RankedWarning {
            tool: i.tool,
            rule_id: i.rule_id.clone(),
            package: i.package.clone(),
            key,
            bucket: i.bucket(),
        })
        .collect()
}

pub fn rank_by_severity(items: &[RankItem]) -> Vec<RankedWarning> {
    rank_with(items, |i| i.severity as f64)
}

/// Orders by P of the item's rule in `combo`; rules without a score get key 0
/// and so follow every scored rule.
pub fn rank_by_p(
    items: &[RankItem],
    scores: &PScoreReport,
    combo: SmellCombo,
) -> Result<Vec<RankedWarning>, PrioritizeError> {
    if scores.for_combo(combo).next().is_none() {
        return Err(PrioritizeError::UnknownCombo(combo));
    }
    Ok(rank_with(items, |i| scores.get(&i.rule(), combo).unwrap_or(0.0)))
}

/// Orders by the severity of the item's combo: the smell-aware upper bound.
pub fn rank_optimal(items: &[RankItem]) -> Vec<RankedWarning> {
    rank_with(items, |i| combo_severity(i.combo) as f64)
}

/// The full combo when it has scores, else the non-NCO combo with the most
/// scored instances (ties to canonical order), else NCO.
pub fn default_p_combo(scores: &PScoreReport) -> Option<SmellCombo> {
    if scores.for_combo(SmellCombo::FULL).next().is_some() {
        return Some(SmellCombo::FULL);
    }
    let populated = |c: SmellCombo| scores.for_combo(c).map(|s| s.count).sum::<u64>();
    SmellCombo::ALL
        .into_iter()
        .filter(|c| !c.is_nco() && populated(*c) > 0)
        .max_by(|a, b| populated(*a).cmp(&populated(*b)).then(b.index().cmp(&a.index())))
        .or_else(|| (populated(SmellCombo::NCO) > 0).then_some(SmellCombo::NCO))
}
