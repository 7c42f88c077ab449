use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::SynthError;
use crate::ingest::{NativeSeverity, SourceTool};
use crate::model::{SmellCombo, SmellKind};

/// A rule to generate: native severity text and mean instances per package.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantRule {
    pub tool: SourceTool,
    pub rule_id: String,
    pub severity: String,
    pub rate: f64,
}

impl PlantRule {
    pub fn new(tool: SourceTool, rule_id: &str, severity: &str, rate: f64) -> Self {
        PlantRule {
            tool,
            rule_id: rule_id.to_string(),
            severity: severity.to_string(),
            rate,
        }
    }
}

/// Target Spearman ρ between a rule's and a smell's per-package counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedRho {
    pub tool: SourceTool,
    pub rule_id: String,
    pub smell: SmellKind,
    pub rho: f64,
}

/// Multiplier on a rule's rate inside packages of one combo; absent means 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComboWeight {
    pub tool: SourceTool,
    pub rule_id: String,
    pub combo: SmellCombo,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantSpec {
    pub seed: u64,
    pub n_packages: usize,
    pub rules: Vec<PlantRule>,
    #[serde(default)]
    pub target_rho: Vec<PlantedRho>,
    /// Probability of each combo, in canonical combo order.
    pub combo_mix: [f64; 8],
    #[serde(default)]
    pub p_profile: Vec<ComboWeight>,
    /// Mean extra smell instances of a present kind beyond the first.
    pub smell_rate: f64,
    /// Dotted prefix of generated package names.
    #[serde(default = "default_prefix")]
    pub package_prefix: String,
}

fn default_prefix() -> String {
    "org.synth".to_string()
}

const MAX_RATE: f64 = 500.0;

impl PlantSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        if self.n_packages == 0 {
            return bad("n_packages must be positive".into());
        }
        let mut seen = BTreeSet::new();
        for r in &self.rules {
            if r.rule_id.is_empty() || r.rule_id.contains(|c: char| c.is_whitespace() || ".;=".contains(c)) {
                return bad(format!("rule id `{}` must be a plain token", r.rule_id));
            }
            if !seen.insert((r.tool, r.rule_id.as_str())) {
                return bad(format!("duplicate rule {}:{}", r.tool, r.rule_id));
            }
            if NativeSeverity::parse(r.tool, &r.severity).is_err() {
                return bad(format!("`{}` is not a {} severity", r.severity, r.tool));
            }
            if !(r.rate.is_finite() && (0.0..=MAX_RATE).contains(&r.rate)) {
                return bad(format!("rate of {} must lie in [0, {MAX_RATE}]", r.rule_id));
            }
        }
        if crate::model::PackageId::new(self.package_prefix.as_str()).is_err() {
            return bad(format!("`{}` is not a package name", self.package_prefix));
        }
        if self.combo_mix.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return bad("combo_mix weights must be finite and nonnegative".into());
        }
        let sum: f64 = self.combo_mix.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return bad(format!("combo_mix sums to {sum}, not 1"));
        }
        if !(self.smell_rate.is_finite() && (0.0..=MAX_RATE).contains(&self.smell_rate)) {
            return bad(format!("smell_rate must lie in [0, {MAX_RATE}]"));
        }
        let mut planted = BTreeSet::new();
        for p in &self.target_rho {
            if !seen.contains(&(p.tool, p.rule_id.as_str())) {
                return bad(format!("target_rho names unknown rule {}:{}", p.tool, p.rule_id));
            }
            if !(p.rho.is_finite() && (-1.0..=1.0).contains(&p.rho)) {
                return bad(format!("target rho {} outside [-1, 1]", p.rho));
            }
            if !planted.insert((p.tool, p.rule_id.as_str())) {
                return bad(format!("rule {}:{} has more than one planted rho", p.tool, p.rule_id));
            }
        }
        for w in &self.p_profile {
            if !seen.contains(&(w.tool, w.rule_id.as_str())) {
                return bad(format!("p_profile names unknown rule {}:{}", w.tool, w.rule_id));
            }
            if !(w.weight.is_finite() && w.weight >= 0.0) {
                return bad(format!("weight of {} in {} must be finite and nonnegative", w.rule_id, w.combo));
            }
        }
        Ok(())
    }

    pub fn weight(&self, tool: SourceTool, rule_id: &str, combo: SmellCombo) -> f64 {
        self.p_profile
            .iter()
            .find(|w| w.tool == tool && w.rule_id == rule_id && w.combo == combo)
            .map_or(1.0, |w| w.weight)
    }

    /// Six rules per tool spread over each tool's severity scale.
    pub fn standard_rules(rate: f64) -> Vec<PlantRule> {
        let table: [(SourceTool, [(&str, &str); 6]); 4] = [
            (
                SourceTool::Checkstyle,
                [
                    ("MagicNumberCheck", "warning"),
                    ("LineLengthCheck", "info"),
                    ("JavadocMethodCheck", "warning"),
                    ("EmptyBlockCheck", "error"),
                    ("HiddenFieldCheck", "warning"),
                    ("FinalParametersCheck", "info"),
                ],
            ),
            (
                SourceTool::Pmd,
                [
                    ("GodClass", "1"),
                    ("CyclomaticComplexity", "2"),
                    ("UnusedPrivateField", "3"),
                    ("ShortVariable", "4"),
                    ("CommentRequired", "5"),
                    ("ExcessiveImports", "3"),
                ],
            ),
            (
                SourceTool::FindBugs,
                [
                    ("NP_NULL_ON_SOME_PATH", "3"),
                    ("EI_EXPOSE_REP", "8"),
                    ("SE_BAD_FIELD", "12"),
                    ("DM_CONVERT_CASE", "17"),
                    ("URF_UNREAD_FIELD", "15"),
                    ("SIC_INNER_SHOULD_BE_STATIC", "18"),
                ],
            ),
            (
                SourceTool::SonarQube,
                [
                    ("java:S1068", "MAJOR"),
                    ("java:S2259", "BLOCKER"),
                    ("java:S1192", "CRITICAL"),
                    ("java:S125", "MINOR"),
                    ("java:S1135", "INFO"),
                    ("java:S3776", "CRITICAL"),
                ],
            ),
        ];
        table
            .iter()
            .flat_map(|(tool, rules)| rules.iter().map(move |(id, sev)| PlantRule::new(*tool, id, sev, rate)))
            .collect()
    }

    /// Every combo equally likely.
    pub const UNIFORM_MIX: [f64; 8] = [0.125; 8];

    /// Every package carries all three smells.
    pub const FULL_MIX: [f64; 8] = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];

    /// One rule planted against CD at `rho` among unplanted fillers; every
    /// package carries all smells and counts are dense enough that ties
    /// barely dilute the rank correlation.
    pub fn calibration(seed: u64, n_packages: usize, rho: f64) -> Self {
        let rules = vec![
            PlantRule::new(SourceTool::Pmd, "Planted", "2", 12.0),
            PlantRule::new(SourceTool::Pmd, "Filler", "3", 4.0),
        ];
        PlantSpec {
            seed,
            n_packages,
            rules,
            target_rho: vec![PlantedRho {
                tool: SourceTool::Pmd,
                rule_id: "Planted".into(),
                smell: SmellKind::CD,
                rho,
            }],
            combo_mix: Self::FULL_MIX,
            p_profile: Vec::new(),
            smell_rate: 12.0,
            package_prefix: default_prefix(),
        }
    }

    /// Independent rules and smells with every combo equally likely.
    pub fn null(seed: u64, n_packages: usize, rules: Vec<PlantRule>) -> Self {
        PlantSpec {
            seed,
            n_packages,
            rules,
            target_rho: Vec::new(),
            combo_mix: Self::UNIFORM_MIX,
            p_profile: Vec::new(),
            smell_rate: 2.0,
            package_prefix: default_prefix(),
        }
    }

    /// A mixed corpus: a third of packages smell-free, two planted
    /// correlations, and two rules that only occur in smell-free packages.
    pub fn demo(seed: u64, n_packages: usize) -> Self {
        let rules = Self::standard_rules(2.0);
        let planted = |tool, id: &str, smell, rho| PlantedRho {
            tool,
            rule_id: id.into(),
            smell,
            rho,
        };
        let nco_only = [(SourceTool::Pmd, "CommentRequired"), (SourceTool::SonarQube, "java:S1135")];
        let p_profile = nco_only
            .iter()
            .flat_map(|&(tool, id)| {
                SmellCombo::ALL.into_iter().map(move |combo| ComboWeight {
                    tool,
                    rule_id: id.into(),
                    combo,
                    weight: if combo.is_nco() { 3.0 } else { 0.0 },
                })
            })
            .collect();
        PlantSpec {
            seed,
            n_packages,
            rules,
            target_rho: vec![
                planted(SourceTool::FindBugs, "NP_NULL_ON_SOME_PATH", SmellKind::CD, 1.0),
                planted(SourceTool::Pmd, "GodClass", SmellKind::HL, 0.6),
            ],
            combo_mix: [0.34, 0.14, 0.12, 0.08, 0.1, 0.08, 0.06, 0.08],
            p_profile,
            smell_rate: 1.0,
            package_prefix: default_prefix(),
        }
    }
}
