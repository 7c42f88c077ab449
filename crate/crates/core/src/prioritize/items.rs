use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{bucket_of, combo_severity, Bucket};
use crate::ingest::{SourceTool, WarningRecord};
use crate::model::{warning_package, Attribution, PackageProfile, RuleKey, SmellCombo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankUnit {
    #[default]
    Instance,
    Rule,
}

impl std::str::FromStr for RankUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "instance" => Ok(RankUnit::Instance),
            "rule" => Ok(RankUnit::Rule),
            other => Err(format!("unknown ranking unit `{other}` (instance or rule)")),
        }
    }
}

/// One entity to rank: a warning instance, or a whole rule at rule level
/// (then `package` is `None` and `combo` is the rule's dominant combo).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankItem {
    pub tool: SourceTool,
    pub rule_id: String,
    pub package: Option<String>,
    /// Normalized severity, 1..=5.
    pub severity: u8,
    pub combo: SmellCombo,
    /// Instances of the rule in the whole corpus.
    pub rule_count: u64,
}

impl RankItem {
    pub fn rule(&self) -> RuleKey {
        RuleKey::new(self.tool, self.rule_id.clone())
    }

    pub fn bucket(&self) -> Bucket {
        bucket_of(self.combo)
    }
}

/// One item per attributable warning, carrying its package's combo. Records
/// whose package cannot be resolved are skipped; their number is returned.
pub fn rank_items(
    records: &[WarningRecord],
    profiles: &[PackageProfile],
    attribution: &Attribution,
) -> (Vec<RankItem>, usize) {
    let combos: HashMap<&str, SmellCombo> = profiles.iter().map(|p| (p.package().as_str(), p.combo())).collect();
    let mut rule_counts: HashMap<RuleKey, u64> = HashMap::new();
    let mut located = Vec::with_capacity(records.len());
    let mut skipped = 0;
    for r in records {
        match warning_package(r, attribution) {
            Ok(p) => {
                *rule_counts.entry(RuleKey::of(r)).or_default() += 1;
                located.push((r, p));
            }
            Err(_) => skipped += 1,
        }
    }
    let items = located
        .into_iter()
        .map(|(r, package)| RankItem {
            tool: r.tool(),
            rule_id: r.rule_id().to_string(),
            combo: combos.get(package.as_str()).copied().unwrap_or(SmellCombo::NCO),
            package: Some(package.as_str().to_string()),
            severity: r.normalized().level(),
            rule_count: rule_counts[&RuleKey::of(r)],
        })
        .collect();
    (items, skipped)
}

/// Collapses instances to one item per rule. Severity is the highest seen;
/// the combo is the one holding most instances, ties to the more severe combo
/// and then to the earlier combo in canonical order.
pub fn collapse_to_rules(items: &[RankItem]) -> Vec<RankItem> {
    let mut per_rule: BTreeMap<RuleKey, (u8, [u64; 8])> = BTreeMap::new();
    for item in items {
        let entry = per_rule.entry(item.rule()).or_insert((0, [0; 8]));
        entry.0 = entry.0.max(item.severity);
        entry.1[item.combo.index()] += 1;
    }
    per_rule
        .into_iter()
        .map(|(rule, (severity, bins))| {
            let combo = SmellCombo::ALL
                .into_iter()
                .max_by(|&a, &b| {
                    bins[a.index()]
                        .cmp(&bins[b.index()])
                        .then(combo_severity(a).cmp(&combo_severity(b)))
                        .then(b.index().cmp(&a.index()))
                })
                .expect("eight combos");
            RankItem {
                tool: rule.tool,
                rule_id: rule.rule_id,
                package: None,
                severity,
                combo,
                rule_count: bins.iter().sum(),
            }
        })
        .collect()
}
