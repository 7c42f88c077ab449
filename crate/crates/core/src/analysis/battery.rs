use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AnalysisError, CooccurrenceTable};
use crate::ingest::SourceTool;
use crate::model::{PackageProfile, RuleKey, SmellCombo, SmellKind};
use crate::stats::{bh_adjust, wilcoxon_signed_rank, AdjustedOutcome, StatsError, TestOutcome};

/// Smallest number of pairs a comparison needs before it is tested.
pub const MIN_PAIRS: usize = 5;

/// Recorded in every battery header.
pub const PAIRING_STRATEGY: &str =
    "rank-matched: each group sorted by descending load (ties by name); the smaller group is paired with evenly spaced quantile positions of the larger";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestStatus {
    Tested,
    NotTestable,
    InsufficientData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryEntry<K> {
    pub key: K,
    pub n_pairs: usize,
    pub status: TestStatus,
    pub outcome: Option<TestOutcome>,
    pub adjusted: Option<AdjustedOutcome>,
    pub note: Option<String>,
}

impl<K> BatteryEntry<K> {
    pub fn rejected(&self) -> bool {
        self.adjusted.is_some_and(|a| a.rejected)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Battery<K> {
    pub pairing: String,
    pub alpha: f64,
    pub entries: Vec<BatteryEntry<K>>,
}

impl<K> Battery<K> {
    pub fn tested(&self) -> usize {
        self.entries.iter().filter(|e| e.status == TestStatus::Tested).count()
    }

    pub fn rejected(&self) -> usize {
        self.entries.iter().filter(|e| e.rejected()).count()
    }

    pub fn rejection_rate(&self) -> Option<f64> {
        let tested = self.tested();
        (tested > 0).then(|| self.rejected() as f64 / tested as f64)
    }
}

/// Input to one battery comparison: the paired samples or why none exist.
pub type PairedSamples = Result<(Vec<f64>, Vec<f64>), String>;

/// Runs a signed-rank test per entry and adjusts all tested p-values as one
/// family. Entry order is preserved.
pub fn run_battery<K: Send>(items: Vec<(K, PairedSamples)>, alpha: f64) -> Result<Battery<K>, AnalysisError> {
    let mut entries: Vec<BatteryEntry<K>> = items
        .into_par_iter()
        .map(|(key, samples)| match samples {
            Err(note) => BatteryEntry {
                key,
                n_pairs: 0,
                status: TestStatus::InsufficientData,
                outcome: None,
                adjusted: None,
                note: Some(note),
            },
            Ok((a, b)) => {
                let n_pairs = a.len();
                let (status, outcome, note) = if n_pairs < MIN_PAIRS {
                    (
                        TestStatus::InsufficientData,
                        None,
                        Some(format!("{n_pairs} pairs, at least {MIN_PAIRS} needed")),
                    )
                } else {
                    match wilcoxon_signed_rank(&a, &b) {
                        Ok(o) => (TestStatus::Tested, Some(o), None),
                        Err(StatsError::AllZeroDifferences) => (
                            TestStatus::NotTestable,
                            None,
                            Some("not testable: all paired differences are zero".into()),
                        ),
                        Err(e) => (TestStatus::InsufficientData, None, Some(e.to_string())),
                    }
                };
                BatteryEntry {
                    key,
                    n_pairs,
                    status,
                    outcome,
                    adjusted: None,
                    note,
                }
            }
        })
        .collect();
    let raw: Vec<f64> = entries.iter().filter_map(|e| e.outcome.map(|o| o.p_value)).collect();
    if !raw.is_empty() {
        let mut adjusted = bh_adjust(&raw, alpha)?.into_iter();
        for e in entries.iter_mut().filter(|e| e.outcome.is_some()) {
            e.adjusted = adjusted.next();
        }
    }
    Ok(Battery {
        pairing: PAIRING_STRATEGY.to_string(),
        alpha,
        entries,
    })
}

/// Pairs two groups of `(load, name, value)` items. Both groups are sorted by
/// descending load then name; item `i` of the smaller group (size `n`) meets
/// item `floor((i + 0.5) * N / n)` of the larger (size `N`), so equal-sized
/// groups pair position by position. Returned vectors keep the argument order.
pub fn rank_matched_pairs<N: Ord>(a: &[(f64, N, f64)], b: &[(f64, N, f64)]) -> (Vec<f64>, Vec<f64>) {
    fn sorted<N: Ord>(g: &[(f64, N, f64)]) -> Vec<&(f64, N, f64)> {
        let mut v: Vec<_> = g.iter().collect();
        v.sort_by(|x, y| y.0.total_cmp(&x.0).then_with(|| x.1.cmp(&y.1)));
        v
    }
    let (sa, sb) = (sorted(a), sorted(b));
    let (small, large, swapped) = if sa.len() <= sb.len() { (sa, sb, false) } else { (sb, sa, true) };
    let (n, big) = (small.len(), large.len());
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for (i, item) in small.iter().enumerate() {
        // (2i + 1) * N / (2n) < N for i < n
        let j = (2 * i + 1) * big / (2 * n);
        xs.push(item.2);
        ys.push(large[j].2);
    }
    if swapped {
        (ys, xs)
    } else {
        (xs, ys)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct H2Key {
    pub tool: SourceTool,
    pub rule_id: String,
    pub smell_a: SmellKind,
    pub smell_b: SmellKind,
}

impl fmt::Display for H2Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} {} vs {}", self.tool, self.rule_id, self.smell_a, self.smell_b)
    }
}

const SMELL_PAIRS: [(SmellKind, SmellKind); 3] = [
    (SmellKind::CD, SmellKind::UD),
    (SmellKind::CD, SmellKind::HL),
    (SmellKind::UD, SmellKind::HL),
];

/// For every rule and unordered smell pair, compares the rule's per-package
/// count between packages affected by one smell and packages affected by the
/// other. Packages are matched by total warning load.
pub fn h2_battery(
    table: &CooccurrenceTable,
    profiles: &[PackageProfile],
    alpha: f64,
) -> Result<Battery<H2Key>, AnalysisError> {
    let group = |kind: SmellKind, rule: &RuleKey| -> Vec<(f64, String, f64)> {
        profiles
            .iter()
            .filter(|p| p.smell_count(kind) > 0)
            .map(|p| {
                (
                    p.total_warnings() as f64,
                    p.package().to_string(),
                    p.count_of(rule) as f64,
                )
            })
            .collect()
    };
    let mut items = Vec::new();
    for rule in table.rules() {
        for (s, t) in SMELL_PAIRS {
            let (ga, gb) = (group(s, &rule), group(t, &rule));
            let samples = if ga.len().min(gb.len()) < MIN_PAIRS {
                Err(format!(
                    "{} {s} and {} {t} packages, at least {MIN_PAIRS} of each needed",
                    ga.len(),
                    gb.len()
                ))
            } else {
                Ok(rank_matched_pairs(&ga, &gb))
            };
            let key = H2Key {
                tool: rule.tool,
                rule_id: rule.rule_id.clone(),
                smell_a: s,
                smell_b: t,
            };
            items.push((key, samples));
        }
    }
    run_battery(items, alpha)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct H3Key {
    pub tool_a: SourceTool,
    pub tool_b: SourceTool,
    pub combo: SmellCombo,
}

impl fmt::Display for H3Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vs {} in {}", self.tool_a, self.tool_b, self.combo)
    }
}

/// For every unordered tool pair and combo, compares the share of each rule's
/// instances that fall in the combo. Rules are matched by instance count.
pub fn h3_battery(table: &CooccurrenceTable, alpha: f64) -> Result<Battery<H3Key>, AnalysisError> {
    let rules = table.rules();
    let tools: Vec<SourceTool> = table.tools().into_iter().collect();
    let shares = |tool: SourceTool, combo: SmellCombo| -> Vec<(f64, String, f64)> {
        rules
            .iter()
            .filter(|r| r.tool == tool)
            .map(|r| {
                let total = table.rule_total(r);
                (total as f64, r.rule_id.clone(), table.get(r, combo) as f64 / total as f64)
            })
            .collect()
    };
    let mut items = Vec::new();
    for (i, &a) in tools.iter().enumerate() {
        for &b in &tools[i + 1..] {
            for combo in SmellCombo::ALL {
                let (ga, gb) = (shares(a, combo), shares(b, combo));
                let samples = if ga.len().min(gb.len()) < MIN_PAIRS {
                    Err(format!(
                        "{} {a} and {} {b} rules, at least {MIN_PAIRS} of each needed",
                        ga.len(),
                        gb.len()
                    ))
                } else {
                    Ok(rank_matched_pairs(&ga, &gb))
                };
                items.push((
                    H3Key {
                        tool_a: a,
                        tool_b: b,
                        combo,
                    },
                    samples,
                ));
            }
        }
    }
    run_battery(items, alpha)
}
