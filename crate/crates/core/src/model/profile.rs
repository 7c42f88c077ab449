use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{derive_package, Attribution, Granularity, ModelError, PackageId, SmellCombo, SmellInstance, SmellKind};
use crate::ingest::{SourceTool, WarningRecord};

/// A rule qualified by the tool that defines it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RuleKey {
    pub tool: SourceTool,
    pub rule_id: String,
}

impl RuleKey {
    pub fn new(tool: SourceTool, rule_id: impl Into<String>) -> Self {
        RuleKey {
            tool,
            rule_id: rule_id.into(),
        }
    }

    pub fn of(record: &WarningRecord) -> Self {
        RuleKey::new(record.tool(), record.rule_id())
    }
}

impl std::fmt::Display for RuleKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.tool, self.rule_id)
    }
}

/// Warnings and smells joined on one package.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct PackageProfile {
    package: PackageId,
    warning_counts: BTreeMap<RuleKey, u64>,
    smell_counts: BTreeMap<SmellKind, u64>,
    combo: SmellCombo,
}

impl PackageProfile {
    /// Zero counts are dropped; a profile with neither warnings nor smells is
    /// rejected.
    pub fn new(
        package: PackageId,
        warning_counts: BTreeMap<RuleKey, u64>,
        smell_counts: BTreeMap<SmellKind, u64>,
    ) -> Result<Self, ModelError> {
        let warning_counts: BTreeMap<_, _> = warning_counts.into_iter().filter(|(_, n)| *n > 0).collect();
        let smell_counts: BTreeMap<_, _> = smell_counts.into_iter().filter(|(_, n)| *n > 0).collect();
        if warning_counts.is_empty() && smell_counts.is_empty() {
            return Err(ModelError::InvalidDump(format!(
                "package {package} has neither warnings nor smells"
            )));
        }
        let combo = SmellCombo::from_kinds(smell_counts.keys().copied());
        Ok(PackageProfile {
            package,
            warning_counts,
            smell_counts,
            combo,
        })
    }

    pub fn package(&self) -> &PackageId {
        &self.package
    }
    pub fn warning_counts(&self) -> &BTreeMap<RuleKey, u64> {
        &self.warning_counts
    }
    pub fn smell_counts(&self) -> &BTreeMap<SmellKind, u64> {
        &self.smell_counts
    }
    pub fn combo(&self) -> SmellCombo {
        self.combo
    }

    pub fn count_of(&self, rule: &RuleKey) -> u64 {
        self.warning_counts.get(rule).copied().unwrap_or(0)
    }

    /// Number of smell instances of `kind` touching this package.
    pub fn smell_count(&self, kind: SmellKind) -> u64 {
        self.smell_counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn smells_present(&self) -> BTreeSet<SmellKind> {
        self.smell_counts.keys().copied().collect()
    }

    pub fn total_warnings(&self) -> u64 {
        self.warning_counts.values().sum()
    }

    pub fn has_warnings(&self) -> bool {
        !self.warning_counts.is_empty()
    }
}

/// Smell combination of a profile; the empty set (NCO) when no smell is present.
pub fn combo_of(profile: &PackageProfile) -> SmellCombo {
    SmellCombo::from_kinds(profile.smell_counts.keys().copied())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Partial {
    warnings: BTreeMap<RuleKey, u64>,
    smells: BTreeMap<SmellKind, u64>,
}

/// Per-package count maps under construction. `merge` is associative and
/// commutative, so shards built independently combine to the same result.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProfileAccumulator {
    packages: BTreeMap<PackageId, Partial>,
}

impl ProfileAccumulator {
    pub fn add_warning(&mut self, package: PackageId, rule: RuleKey, count: u64) {
        *self
            .packages
            .entry(package)
            .or_default()
            .warnings
            .entry(rule)
            .or_insert(0) += count;
    }

    pub fn add_smell(&mut self, package: PackageId, kind: SmellKind, count: u64) {
        *self
            .packages
            .entry(package)
            .or_default()
            .smells
            .entry(kind)
            .or_insert(0) += count;
    }

    pub fn merge(mut self, other: ProfileAccumulator) -> ProfileAccumulator {
        for (package, part) in other.packages {
            let mine = self.packages.entry(package).or_default();
            for (rule, n) in part.warnings {
                *mine.warnings.entry(rule).or_insert(0) += n;
            }
            for (kind, n) in part.smells {
                *mine.smells.entry(kind).or_insert(0) += n;
            }
        }
        self
    }

    /// Profiles sorted by package; packages with only zero counts are dropped.
    pub fn finish(self) -> Vec<PackageProfile> {
        self.packages
            .into_iter()
            .filter_map(|(package, part)| PackageProfile::new(package, part.warnings, part.smells).ok())
            .collect()
    }
}

/// A record whose package could not be resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unresolved {
    pub record: String,
    pub error: ModelError,
}

/// Package of a warning: by class name when it resolves, else by file path.
pub fn warning_package(w: &WarningRecord, attribution: &Attribution) -> Result<PackageId, ModelError> {
    let by_class = w.fq_class().map(|c| derive_package(c, attribution));
    match (by_class, w.file_path()) {
        (Some(Ok(p)), _) => Ok(p),
        (Some(Err(_)) | None, Some(path)) => derive_package(path, attribution),
        (Some(Err(e)), None) => Err(e),
        (None, None) => unreachable!("records always carry a location"),
    }
}

fn smell_packages(s: &SmellInstance, attribution: &Attribution) -> Result<BTreeSet<PackageId>, (String, ModelError)> {
    s.affected()
        .iter()
        .map(|entity| {
            let resolved = match s.granularity() {
                Granularity::Package => PackageId::new(entity.as_str()),
                Granularity::Class => derive_package(entity, attribution),
            };
            resolved.map_err(|e| (format!("{} smell on {entity}", s.kind()), e))
        })
        .collect()
}

fn accumulate(
    warnings: &[WarningRecord],
    smells: &[SmellInstance],
    attribution: &Attribution,
    strict: bool,
) -> Result<(ProfileAccumulator, Vec<Unresolved>), ModelError> {
    let mut acc = ProfileAccumulator::default();
    let mut unresolved = Vec::new();
    for w in warnings {
        match warning_package(w, attribution) {
            Ok(package) => acc.add_warning(package, RuleKey::of(w), 1),
            Err(error) => {
                let record = format!("{} warning {} at {}", w.tool(), w.rule_id(), w.locator());
                if strict {
                    return Err(ModelError::Attribution {
                        record,
                        source: Box::new(error),
                    });
                }
                unresolved.push(Unresolved { record, error });
            }
        }
    }
    for s in smells {
        match smell_packages(s, attribution) {
            Ok(packages) => {
                for package in packages {
                    acc.add_smell(package, s.kind(), 1);
                }
            }
            Err((record, error)) => {
                if strict {
                    return Err(ModelError::Attribution {
                        record,
                        source: Box::new(error),
                    });
                }
                unresolved.push(Unresolved { record, error });
            }
        }
    }
    Ok((acc, unresolved))
}

/// Joins warnings and smells per package. Each warning counts once toward its
/// package; a smell counts once toward every distinct package it touches.
pub fn build_profiles(
    warnings: &[WarningRecord],
    smells: &[SmellInstance],
    attribution: &Attribution,
) -> Result<Vec<PackageProfile>, ModelError> {
    accumulate(warnings, smells, attribution, true).map(|(acc, _)| acc.finish())
}

/// Like [`build_profiles`] but skips unresolvable records and returns them.
pub fn build_profiles_lenient(
    warnings: &[WarningRecord],
    smells: &[SmellInstance],
    attribution: &Attribution,
) -> (Vec<PackageProfile>, Vec<Unresolved>) {
    let (acc, unresolved) =
        accumulate(warnings, smells, attribution, false).expect("lenient accumulation never fails");
    (acc.finish(), unresolved)
}

#[derive(Serialize, Deserialize)]
struct RawWarningCount {
    tool: SourceTool,
    rule_id: String,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    package: PackageId,
    warnings: Vec<RawWarningCount>,
    smells: BTreeMap<SmellKind, u64>,
    combo: SmellCombo,
}

impl TryFrom<RawProfile> for PackageProfile {
    type Error = ModelError;

    fn try_from(raw: RawProfile) -> Result<Self, Self::Error> {
        let counts = raw
            .warnings
            .into_iter()
            .map(|w| (RuleKey::new(w.tool, w.rule_id), w.count))
            .collect();
        let profile = PackageProfile::new(raw.package, counts, raw.smells)?;
        if profile.combo != raw.combo {
            return Err(ModelError::InvalidDump(format!(
                "package {}: combo {} does not match smells {}",
                profile.package, raw.combo, profile.combo
            )));
        }
        Ok(profile)
    }
}

impl From<PackageProfile> for RawProfile {
    fn from(p: PackageProfile) -> Self {
        RawProfile {
            package: p.package,
            warnings: p
                .warning_counts
                .into_iter()
                .map(|(k, count)| RawWarningCount {
                    tool: k.tool,
                    rule_id: k.rule_id,
                    count,
                })
                .collect(),
            smells: p.smell_counts,
            combo: p.combo,
        }
    }
}

const CSV_HEADER: [&str; 4] = ["package", "warnings", "smells", "combo"];

/// Writes the delimited profile table: `package,warnings,smells,combo`, where
/// `warnings` holds sparse `Tool:rule=count` pairs and `smells` holds
/// `KIND=count` pairs, both `;`-separated.
pub fn write_profiles_csv<W: Write>(out: W, profiles: &[PackageProfile]) -> Result<(), ModelError> {
    let io_err = |e: csv::Error| ModelError::InvalidDump(e.to_string());
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER).map_err(io_err)?;
    for p in profiles {
        let mut warnings = Vec::with_capacity(p.warning_counts.len());
        for (key, n) in &p.warning_counts {
            if key.rule_id.contains(';') {
                return Err(ModelError::InvalidDump(format!(
                    "rule id `{}` contains the pair separator `;`",
                    key.rule_id
                )));
            }
            warnings.push(format!("{}={n}", key));
        }
        let smells: Vec<String> = p.smell_counts.iter().map(|(k, n)| format!("{k}={n}")).collect();
        writer
            .write_record([
                p.package.as_str(),
                &warnings.join(";"),
                &smells.join(";"),
                &p.combo.label(),
            ])
            .map_err(io_err)?;
    }
    writer
        .flush()
        .map_err(|e| ModelError::InvalidDump(e.to_string()))
}

fn split_pair(pair: &str) -> Result<(&str, u64), ModelError> {
    let (key, count) = pair
        .rsplit_once('=')
        .ok_or_else(|| ModelError::InvalidDump(format!("`{pair}` is not a key=count pair")))?;
    let count = count
        .parse()
        .map_err(|_| ModelError::InvalidDump(format!("bad count in `{pair}`")))?;
    Ok((key, count))
}

/// Reads a table written by [`write_profiles_csv`]; `#` lines are comments.
pub fn read_profiles_csv<R: Read>(input: R) -> Result<Vec<PackageProfile>, ModelError> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut profiles = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| ModelError::InvalidDump(e.to_string()))?;
        if row.len() != CSV_HEADER.len() {
            return Err(ModelError::InvalidDump(format!("expected 4 columns, got {}", row.len())));
        }
        let package = PackageId::new(&row[0])?;
        let mut warnings = BTreeMap::new();
        for pair in row[1].split(';').filter(|s| !s.is_empty()) {
            let (key, count) = split_pair(pair)?;
            let (tool, rule) = key
                .split_once(':')
                .ok_or_else(|| ModelError::InvalidDump(format!("`{key}` lacks a tool prefix")))?;
            let tool: SourceTool = tool.parse().map_err(ModelError::InvalidDump)?;
            warnings.insert(RuleKey::new(tool, rule), count);
        }
        let mut smells = BTreeMap::new();
        for pair in row[2].split(';').filter(|s| !s.is_empty()) {
            let (kind, count) = split_pair(pair)?;
            let kind: SmellKind = kind
                .parse()
                .map_err(|k| ModelError::InvalidDump(format!("unknown smell kind `{k}`")))?;
            smells.insert(kind, count);
        }
        let combo: SmellCombo = row[3].parse().map_err(ModelError::InvalidDump)?;
        let profile = PackageProfile::new(package, warnings, smells)?;
        if profile.combo != combo {
            return Err(ModelError::InvalidDump(format!(
                "package {}: combo column {combo} disagrees with smells",
                profile.package
            )));
        }
        profiles.push(profile);
    }
    Ok(profiles)
}
