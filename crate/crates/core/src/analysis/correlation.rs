use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::ingest::SourceTool;
use crate::model::{PackageProfile, RuleKey, SmellKind};
use crate::stats::{anderson_darling, bh_adjust, quartiles, spearman_rho, AdjustedOutcome, StatsError, TestOutcome};

/// Spearman test of one (rule, smell) pair over all packages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCell {
    pub tool: SourceTool,
    pub rule_id: String,
    pub smell: SmellKind,
    pub rho: f64,
    pub outcome: AdjustedOutcome,
    pub n_packages: usize,
}

/// A pair left out of the family, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPair {
    pub tool: SourceTool,
    pub rule_id: String,
    pub smell: SmellKind,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub cells: Vec<CorrelationCell>,
    pub skipped: Vec<SkippedPair>,
}

impl CorrelationReport {
    pub fn rejected(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome.rejected).count()
    }
}

fn sorted_profiles(profiles: &[PackageProfile]) -> Vec<&PackageProfile> {
    let mut sorted: Vec<&PackageProfile> = profiles.iter().collect();
    sorted.sort_by(|a, b| a.package().cmp(b.package()));
    sorted
}

fn all_rules(profiles: &[&PackageProfile]) -> BTreeSet<RuleKey> {
    profiles
        .iter()
        .flat_map(|p| p.warning_counts().keys().cloned())
        .collect()
}

/// Tests every (rule, smell) pair with Spearman's ρ over all packages: `x` is
/// the rule's per-package instance count, `y` the number of smell instances
/// of that kind touching the package. Pairs where either vector is constant
/// are skipped; the remaining raw p-values are BH-adjusted as one family.
pub fn correlation_matrix(profiles: &[PackageProfile], alpha: f64) -> Result<CorrelationReport, AnalysisError> {
    if profiles.len() < 3 {
        return Err(AnalysisError::InsufficientData(format!(
            "correlation needs at least 3 packages, got {}",
            profiles.len()
        )));
    }
    let profiles = sorted_profiles(profiles);
    let smell_vectors: BTreeMap<SmellKind, Vec<f64>> = SmellKind::ALL
        .iter()
        .map(|&k| (k, profiles.iter().map(|p| p.smell_count(k) as f64).collect()))
        .collect();
    let pairs: Vec<(RuleKey, SmellKind)> = all_rules(&profiles)
        .into_iter()
        .flat_map(|r| SmellKind::ALL.map(|k| (r.clone(), k)))
        .collect();

    let results: Vec<(RuleKey, SmellKind, Result<TestOutcome, StatsError>)> = pairs
        .into_par_iter()
        .map(|(rule, smell)| {
            let x: Vec<f64> = profiles.iter().map(|p| p.count_of(&rule) as f64).collect();
            let outcome = spearman_rho(&x, &smell_vectors[&smell]);
            (rule, smell, outcome)
        })
        .collect();

    let mut tested = Vec::new();
    let mut skipped = Vec::new();
    for (rule, smell, outcome) in results {
        match outcome {
            Ok(o) => tested.push((rule, smell, o)),
            Err(e) => skipped.push(SkippedPair {
                tool: rule.tool,
                rule_id: rule.rule_id,
                smell,
                reason: e.to_string(),
            }),
        }
    }
    if tested.is_empty() {
        return Ok(CorrelationReport { cells: Vec::new(), skipped });
    }
    let raw: Vec<f64> = tested.iter().map(|(_, _, o)| o.p_value).collect();
    let adjusted = bh_adjust(&raw, alpha)?;
    let cells = tested
        .into_iter()
        .zip(adjusted)
        .map(|((rule, smell, o), adj)| CorrelationCell {
            tool: rule.tool,
            rule_id: rule.rule_id,
            smell,
            rho: o.statistic,
            outcome: adj,
            n_packages: profiles.len(),
        })
        .collect();
    Ok(CorrelationReport { cells, skipped })
}

/// Anderson–Darling result for one per-package metric vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityResult {
    pub variable: String,
    pub outcome: Option<TestOutcome>,
    pub adjusted: Option<AdjustedOutcome>,
    pub note: Option<String>,
}

/// Normality check of every rule-count and smell-count vector. A rejection
/// means the metric cannot be assumed normal, which is why correlation uses
/// ranks.
pub fn normality_gate(profiles: &[PackageProfile], alpha: f64) -> Result<Vec<NormalityResult>, AnalysisError> {
    let profiles = sorted_profiles(profiles);
    let mut variables: Vec<(String, Vec<f64>)> = all_rules(&profiles)
        .into_iter()
        .map(|r| {
            let v = profiles.iter().map(|p| p.count_of(&r) as f64).collect();
            (r.to_string(), v)
        })
        .collect();
    for kind in SmellKind::ALL {
        variables.push((
            format!("smell:{kind}"),
            profiles.iter().map(|p| p.smell_count(kind) as f64).collect(),
        ));
    }
    let mut results: Vec<NormalityResult> = variables
        .into_par_iter()
        .map(|(variable, v)| match anderson_darling(&v) {
            Ok(o) => NormalityResult {
                variable,
                outcome: Some(o),
                adjusted: None,
                note: None,
            },
            Err(e) => NormalityResult {
                variable,
                outcome: None,
                adjusted: None,
                note: Some(e.to_string()),
            },
        })
        .collect();
    let raw: Vec<f64> = results.iter().filter_map(|r| r.outcome.map(|o| o.p_value)).collect();
    if !raw.is_empty() {
        let mut adjusted = bh_adjust(&raw, alpha)?.into_iter();
        for r in results.iter_mut().filter(|r| r.outcome.is_some()) {
            r.adjusted = adjusted.next();
        }
    }
    Ok(results)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuartileGroup {
    pub tool: SourceTool,
    pub smell: SmellKind,
    pub q3: f64,
    /// `(rule_id, rho)` with ρ >= q3, by descending ρ then rule id.
    pub rules: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopQuartile {
    pub groups: Vec<QuartileGroup>,
    /// `(tool, smell, cell count)` of groups with fewer than 4 cells.
    pub too_small: Vec<(SourceTool, SmellKind, usize)>,
}

impl TopQuartile {
    pub fn rules_for(&self, tool: SourceTool, smell: SmellKind) -> Option<Vec<&str>> {
        self.groups
            .iter()
            .find(|g| g.tool == tool && g.smell == smell)
            .map(|g| g.rules.iter().map(|(r, _)| r.as_str()).collect())
    }
}

const MIN_GROUP: usize = 4;

/// Per (tool, smell), the rules whose ρ reaches the group's third quartile.
pub fn top_quartile_warnings(cells: &[CorrelationCell]) -> TopQuartile {
    let mut groups: BTreeMap<(SourceTool, SmellKind), Vec<&CorrelationCell>> = BTreeMap::new();
    for c in cells {
        groups.entry((c.tool, c.smell)).or_default().push(c);
    }
    let mut out = TopQuartile {
        groups: Vec::new(),
        too_small: Vec::new(),
    };
    for ((tool, smell), members) in groups {
        if members.len() < MIN_GROUP {
            out.too_small.push((tool, smell, members.len()));
            continue;
        }
        let rhos: Vec<f64> = members.iter().map(|c| c.rho).collect();
        let q3 = quartiles(&rhos).expect("group is non-empty and finite").q3;
        let mut rules: Vec<(String, f64)> = members
            .iter()
            .filter(|c| c.rho >= q3)
            .map(|c| (c.rule_id.clone(), c.rho))
            .collect();
        rules.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out.groups.push(QuartileGroup { tool, smell, q3, rules });
    }
    out
}
