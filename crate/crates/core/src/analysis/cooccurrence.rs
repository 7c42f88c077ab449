use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ingest::SourceTool;
use crate::model::{PackageProfile, RuleKey, SmellCombo};

/// Warning instances per (rule, combo of the package they sit in).
/// Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooccurrenceTable {
    counts: BTreeMap<(RuleKey, SmellCombo), u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooccurrenceRow {
    pub tool: SourceTool,
    pub rule_id: String,
    pub combo: SmellCombo,
    pub count: u64,
}

impl CooccurrenceTable {
    pub fn add(&mut self, rule: RuleKey, combo: SmellCombo, count: u64) {
        if count > 0 {
            *self.counts.entry((rule, combo)).or_default() += count;
        }
    }

    pub fn get(&self, rule: &RuleKey, combo: SmellCombo) -> u64 {
        self.counts.get(&(rule.clone(), combo)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn rules(&self) -> BTreeSet<RuleKey> {
        self.counts.keys().map(|(r, _)| r.clone()).collect()
    }

    pub fn tools(&self) -> BTreeSet<SourceTool> {
        self.counts.keys().map(|(r, _)| r.tool).collect()
    }

    pub fn rule_total(&self, rule: &RuleKey) -> u64 {
        SmellCombo::ALL.iter().map(|&c| self.get(rule, c)).sum()
    }

    /// Instances of all `tool` rules in `combo`.
    pub fn tool_combo_total(&self, tool: SourceTool, combo: SmellCombo) -> u64 {
        self.counts
            .iter()
            .filter(|((r, c), _)| r.tool == tool && *c == combo)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn combo_total(&self, combo: SmellCombo) -> u64 {
        self.counts.iter().filter(|((_, c), _)| *c == combo).map(|(_, n)| n).sum()
    }

    /// Share of all instances that sit in smell-free packages; `None` when the
    /// table is empty.
    pub fn nco_fraction(&self) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| self.combo_total(SmellCombo::NCO) as f64 / total as f64)
    }

    /// Rows ordered by tool, rule id, then combo.
    pub fn rows(&self) -> Vec<CooccurrenceRow> {
        let mut rows: Vec<CooccurrenceRow> = self
            .counts
            .iter()
            .map(|((r, c), n)| CooccurrenceRow {
                tool: r.tool,
                rule_id: r.rule_id.clone(),
                combo: *c,
                count: *n,
            })
            .collect();
        rows.sort_by(|a, b| {
            (a.tool, &a.rule_id, a.combo.index()).cmp(&(b.tool, &b.rule_id, b.combo.index()))
        });
        rows
    }

    pub fn from_rows(rows: impl IntoIterator<Item = CooccurrenceRow>) -> Self {
        let mut table = CooccurrenceTable::default();
        for row in rows {
            table.add(RuleKey::new(row.tool, row.rule_id), row.combo, row.count);
        }
        table
    }
}

impl Serialize for CooccurrenceTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CooccurrenceTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<CooccurrenceRow>::deserialize(deserializer).map(CooccurrenceTable::from_rows)
    }
}

/// Bins every warning instance into the combo of its package.
pub fn cooccurrence_table(profiles: &[PackageProfile]) -> CooccurrenceTable {
    let mut table = CooccurrenceTable::default();
    for profile in profiles {
        let combo = profile.combo();
        for (rule, &n) in profile.warning_counts() {
            table.add(rule.clone(), combo, n);
        }
    }
    table
}

/// Relative frequency of a rule among all instances of its tool in a combo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PScore {
    pub tool: SourceTool,
    pub rule_id: String,
    pub combo: SmellCombo,
    pub p: f64,
    pub count: u64,
    pub denominator: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PScoreReport {
    pub scores: Vec<PScore>,
    /// (tool, combo) cells with no instances of that tool.
    pub empty: Vec<(SourceTool, SmellCombo)>,
}

impl PScoreReport {
    pub fn for_combo(&self, combo: SmellCombo) -> impl Iterator<Item = &PScore> {
        self.scores.iter().filter(move |s| s.combo == combo)
    }

    pub fn get(&self, rule: &RuleKey, combo: SmellCombo) -> Option<f64> {
        self.scores
            .iter()
            .find(|s| s.combo == combo && s.tool == rule.tool && s.rule_id == rule.rule_id)
            .map(|s| s.p)
    }
}

/// Scores ordered by tool, combo, then rule id; only nonzero counts are
/// emitted.
pub fn p_scores(table: &CooccurrenceTable) -> PScoreReport {
    let mut scores = Vec::new();
    let mut empty = Vec::new();
    let rules = table.rules();
    for tool in table.tools() {
        for combo in SmellCombo::ALL {
            let denominator = table.tool_combo_total(tool, combo);
            if denominator == 0 {
                empty.push((tool, combo));
                continue;
            }
            for rule in rules.iter().filter(|r| r.tool == tool) {
                let count = table.get(rule, combo);
                if count > 0 {
                    scores.push(PScore {
                        tool,
                        rule_id: rule.rule_id.clone(),
                        combo,
                        p: count as f64 / denominator as f64,
                        count,
                        denominator,
                    });
                }
            }
        }
    }
    PScoreReport { scores, empty }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PackageId, SmellKind};
    use proptest::prelude::*;

    fn profile(name: &str, rules: &[(&str, u64)], smells: &[SmellKind]) -> PackageProfile {
        PackageProfile::new(
            PackageId::new(name).unwrap(),
            rules.iter().map(|(r, n)| (RuleKey::new(SourceTool::Pmd, *r), *n)).collect(),
            smells.iter().map(|&k| (k, 1)).collect(),
        )
        .unwrap()
    }

    fn key(r: &str) -> RuleKey {
        RuleKey::new(SourceTool::Pmd, r)
    }

    #[test]
    fn bins_by_package_combo() {
        let cd = SmellCombo::from_kinds([SmellKind::CD]);
        let table = cooccurrence_table(&[
            profile("a", &[("R", 3)], &[SmellKind::CD]),
            profile("b", &[("R", 1)], &[]),
            profile("c", &[("R", 2)], &[SmellKind::CD, SmellKind::UD, SmellKind::HL]),
        ]);
        assert_eq!(table.get(&key("R"), cd), 3);
        assert_eq!(table.get(&key("R"), SmellCombo::NCO), 1);
        assert_eq!(table.get(&key("R"), SmellCombo::FULL), 2);
        assert_eq!(table.get(&key("R"), SmellCombo::from_kinds([SmellKind::HL])), 0);
        assert_eq!(table.rule_total(&key("R")), 6);
        assert_eq!(table.nco_fraction(), Some(1.0 / 6.0));
        assert!(cooccurrence_table(&[]).is_empty());
        assert_eq!(cooccurrence_table(&[]).nco_fraction(), None);
    }

    #[test]
    fn p_score_examples() {
        let cd = SmellCombo::from_kinds([SmellKind::CD]);
        let table = cooccurrence_table(&[
            profile("a", &[("A", 3), ("B", 1)], &[SmellKind::CD]),
            profile("b", &[("A", 4)], &[]),
        ]);
        let report = p_scores(&table);
        assert_eq!(report.get(&key("A"), cd), Some(0.75));
        assert_eq!(report.get(&key("B"), cd), Some(0.25));
        assert_eq!(report.get(&key("A"), SmellCombo::NCO), Some(1.0));
        assert_eq!(report.get(&key("B"), SmellCombo::NCO), None);
        assert_eq!(report.for_combo(SmellCombo::FULL).count(), 0);
        assert!(report.empty.contains(&(SourceTool::Pmd, SmellCombo::FULL)));
    }

    #[test]
    fn serde_round_trip() {
        let table = cooccurrence_table(&[profile("a", &[("A", 3), ("B", 1)], &[SmellKind::HL])]);
        let json = serde_json::to_string(&table).unwrap();
        assert_eq!(serde_json::from_str::<CooccurrenceTable>(&json).unwrap(), table);
    }

    fn arb_profiles() -> impl Strategy<Value = Vec<PackageProfile>> {
        prop::collection::vec(
            (prop::collection::vec(0u64..6, 4), 0u8..8),
            1..20,
        )
        .prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .filter_map(|(i, (counts, bits))| {
                    let warnings = counts
                        .iter()
                        .enumerate()
                        .map(|(j, &n)| (RuleKey::new(SourceTool::ALL[j % 4], format!("r{}", j % 2)), n))
                        .collect();
                    let smells = SmellKind::ALL
                        .iter()
                        .filter(|k| bits & k.bit() != 0)
                        .map(|&k| (k, 1))
                        .collect();
                    PackageProfile::new(PackageId::new(format!("p{i}")).unwrap(), warnings, smells).ok()
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn counts_are_conserved(profiles in arb_profiles()) {
            let table = cooccurrence_table(&profiles);
            for rule in table.rules() {
                let attributed: u64 = profiles.iter().map(|p| p.count_of(&rule)).sum();
                prop_assert_eq!(table.rule_total(&rule), attributed);
            }
        }

        #[test]
        fn p_sums_to_one(profiles in arb_profiles()) {
            let report = p_scores(&cooccurrence_table(&profiles));
            let mut sums: BTreeMap<(SourceTool, SmellCombo), f64> = BTreeMap::new();
            for s in &report.scores {
                prop_assert!(s.p > 0.0 && s.p <= 1.0);
                *sums.entry((s.tool, s.combo)).or_default() += s.p;
            }
            for total in sums.values() {
                prop_assert!((total - 1.0).abs() <= 1e-12);
            }
        }
    }
}
