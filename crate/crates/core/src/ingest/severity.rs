use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::IngestError;

/// The static analysis tool that emitted a warning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SourceTool {
    Checkstyle,
    FindBugs,
    #[serde(rename = "PMD")]
    Pmd,
    SonarQube,
}

impl SourceTool {
    pub const ALL: [SourceTool; 4] = [
        SourceTool::Checkstyle,
        SourceTool::FindBugs,
        SourceTool::Pmd,
        SourceTool::SonarQube,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SourceTool::Checkstyle => "Checkstyle",
            SourceTool::FindBugs => "FindBugs",
            SourceTool::Pmd => "PMD",
            SourceTool::SonarQube => "SonarQube",
        }
    }

    /// Lower-case identifier used in file names.
    pub fn slug(self) -> &'static str {
        match self {
            SourceTool::Checkstyle => "checkstyle",
            SourceTool::FindBugs => "findbugs",
            SourceTool::Pmd => "pmd",
            SourceTool::SonarQube => "sonarqube",
        }
    }
}

impl fmt::Display for SourceTool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SourceTool {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "checkstyle" => Ok(SourceTool::Checkstyle),
            "findbugs" | "spotbugs" => Ok(SourceTool::FindBugs),
            "pmd" => Ok(SourceTool::Pmd),
            "sonarqube" | "sonar" => Ok(SourceTool::SonarQube),
            _ => Err(format!("unknown tool `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckstyleLevel {
    Error,
    Warning,
    Info,
    Ignore,
}

impl CheckstyleLevel {
    fn parse(raw: &str) -> Option<Self> {
        match raw {
            "error" => Some(CheckstyleLevel::Error),
            "warning" => Some(CheckstyleLevel::Warning),
            "info" => Some(CheckstyleLevel::Info),
            "ignore" => Some(CheckstyleLevel::Ignore),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckstyleLevel::Error => "error",
            CheckstyleLevel::Warning => "warning",
            CheckstyleLevel::Info => "info",
            CheckstyleLevel::Ignore => "ignore",
        }
    }
}

/// FindBugs/SpotBugs bug rank, 1 (scariest) ..= 20.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct FindBugsRank(u8);

impl FindBugsRank {
    pub fn new(rank: u8) -> Option<Self> {
        (1..=20).contains(&rank).then_some(FindBugsRank(rank))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for FindBugsRank {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        FindBugsRank::new(v).ok_or_else(|| format!("FindBugs rank {v} outside 1..=20"))
    }
}

impl From<FindBugsRank> for u8 {
    fn from(r: FindBugsRank) -> u8 {
        r.0
    }
}

/// PMD rule priority, 1 (most severe) ..= 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct PmdPriority(u8);

impl PmdPriority {
    pub fn new(priority: u8) -> Option<Self> {
        (1..=5).contains(&priority).then_some(PmdPriority(priority))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for PmdPriority {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        PmdPriority::new(v).ok_or_else(|| format!("PMD priority {v} outside 1..=5"))
    }
}

impl From<PmdPriority> for u8 {
    fn from(p: PmdPriority) -> u8 {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SonarSeverity {
    Blocker,
    Critical,
    Major,
    Minor,
    Info,
}

impl SonarSeverity {
    /// Case-insensitive; the web API emits upper case, exports often title case.
    fn parse(raw: &str) -> Option<Self> {
        match raw.to_ascii_lowercase().as_str() {
            "blocker" => Some(SonarSeverity::Blocker),
            "critical" => Some(SonarSeverity::Critical),
            "major" => Some(SonarSeverity::Major),
            "minor" => Some(SonarSeverity::Minor),
            "info" => Some(SonarSeverity::Info),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SonarSeverity::Blocker => "Blocker",
            SonarSeverity::Critical => "Critical",
            SonarSeverity::Major => "Major",
            SonarSeverity::Minor => "Minor",
            SonarSeverity::Info => "Info",
        }
    }
}

/// A severity exactly as the emitting tool reported it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tool", content = "raw")]
pub enum NativeSeverity {
    Checkstyle(CheckstyleLevel),
    FindBugs(FindBugsRank),
    #[serde(rename = "PMD")]
    Pmd(PmdPriority),
    SonarQube(SonarSeverity),
}

impl NativeSeverity {
    /// Validates `raw` against the tool's native domain.
    pub fn parse(tool: SourceTool, raw: &str) -> Result<Self, IngestError> {
        let unknown = || IngestError::UnknownSeverity {
            tool,
            raw: raw.to_string(),
        };
        let raw_trim = raw.trim();
        match tool {
            SourceTool::Checkstyle => CheckstyleLevel::parse(raw_trim)
                .map(NativeSeverity::Checkstyle)
                .ok_or_else(unknown),
            SourceTool::FindBugs => raw_trim
                .parse::<u8>()
                .ok()
                .and_then(FindBugsRank::new)
                .map(NativeSeverity::FindBugs)
                .ok_or_else(unknown),
            SourceTool::Pmd => raw_trim
                .parse::<u8>()
                .ok()
                .and_then(PmdPriority::new)
                .map(NativeSeverity::Pmd)
                .ok_or_else(unknown),
            SourceTool::SonarQube => SonarSeverity::parse(raw_trim)
                .map(NativeSeverity::SonarQube)
                .ok_or_else(unknown),
        }
    }

    pub fn tool(&self) -> SourceTool {
        match self {
            NativeSeverity::Checkstyle(_) => SourceTool::Checkstyle,
            NativeSeverity::FindBugs(_) => SourceTool::FindBugs,
            NativeSeverity::Pmd(_) => SourceTool::Pmd,
            NativeSeverity::SonarQube(_) => SourceTool::SonarQube,
        }
    }

    /// Rank within the tool's own scale; larger means more severe.
    pub fn severity_order(&self) -> i32 {
        match *self {
            NativeSeverity::Checkstyle(level) => match level {
                CheckstyleLevel::Error => 3,
                CheckstyleLevel::Warning => 2,
                CheckstyleLevel::Info => 1,
                CheckstyleLevel::Ignore => 0,
            },
            NativeSeverity::FindBugs(rank) => 21 - i32::from(rank.get()),
            NativeSeverity::Pmd(p) => 6 - i32::from(p.get()),
            NativeSeverity::SonarQube(s) => match s {
                SonarSeverity::Blocker => 4,
                SonarSeverity::Critical => 3,
                SonarSeverity::Major => 2,
                SonarSeverity::Minor => 1,
                SonarSeverity::Info => 0,
            },
        }
    }

    /// The raw value rendered as the tool prints it.
    pub fn raw_text(&self) -> String {
        match *self {
            NativeSeverity::Checkstyle(level) => level.as_str().to_string(),
            NativeSeverity::FindBugs(rank) => rank.get().to_string(),
            NativeSeverity::Pmd(p) => p.get().to_string(),
            NativeSeverity::SonarQube(s) => s.as_str().to_string(),
        }
    }
}

/// Shared ordinal level, 1 (least severe) ..= 5 (most severe).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct NormalizedSeverity(u8);

impl NormalizedSeverity {
    pub const MIN: NormalizedSeverity = NormalizedSeverity(1);
    pub const MAX: NormalizedSeverity = NormalizedSeverity(5);

    pub fn new(level: u8) -> Option<Self> {
        (1..=5).contains(&level).then_some(NormalizedSeverity(level))
    }

    pub fn level(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for NormalizedSeverity {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        NormalizedSeverity::new(v).ok_or_else(|| format!("normalized severity {v} outside 1..=5"))
    }
}

impl From<NormalizedSeverity> for u8 {
    fn from(s: NormalizedSeverity) -> u8 {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankGroup {
    Scariest,
    Scary,
    Troubling,
    Concern,
}

/// Boundary-inclusive FindBugs rank groups: 1-4, 5-9, 10-14, 15-20.
pub fn rank_group(rank: u32) -> Result<RankGroup, IngestError> {
    match rank {
        1..=4 => Ok(RankGroup::Scariest),
        5..=9 => Ok(RankGroup::Scary),
        10..=14 => Ok(RankGroup::Troubling),
        15..=20 => Ok(RankGroup::Concern),
        _ => Err(IngestError::UnknownSeverity {
            tool: SourceTool::FindBugs,
            raw: rank.to_string(),
        }),
    }
}

fn lvl(level: u8) -> NormalizedSeverity {
    NormalizedSeverity(level)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SonarLevels {
    #[serde(rename = "Blocker")]
    pub blocker: NormalizedSeverity,
    #[serde(rename = "Critical")]
    pub critical: NormalizedSeverity,
    #[serde(rename = "Major")]
    pub major: NormalizedSeverity,
    #[serde(rename = "Minor")]
    pub minor: NormalizedSeverity,
    #[serde(rename = "Info")]
    pub info: NormalizedSeverity,
}

impl Default for SonarLevels {
    fn default() -> Self {
        SonarLevels {
            blocker: lvl(5),
            critical: lvl(4),
            major: lvl(3),
            minor: lvl(2),
            info: lvl(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PmdLevels {
    #[serde(rename = "1")]
    pub p1: NormalizedSeverity,
    #[serde(rename = "2")]
    pub p2: NormalizedSeverity,
    #[serde(rename = "3")]
    pub p3: NormalizedSeverity,
    #[serde(rename = "4")]
    pub p4: NormalizedSeverity,
    #[serde(rename = "5")]
    pub p5: NormalizedSeverity,
}

impl Default for PmdLevels {
    // priority p -> 6 - p
    fn default() -> Self {
        PmdLevels {
            p1: lvl(5),
            p2: lvl(4),
            p3: lvl(3),
            p4: lvl(2),
            p5: lvl(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FindBugsLevels {
    pub scariest: NormalizedSeverity,
    pub scary: NormalizedSeverity,
    pub troubling: NormalizedSeverity,
    pub concern: NormalizedSeverity,
}

impl Default for FindBugsLevels {
    fn default() -> Self {
        FindBugsLevels {
            scariest: lvl(5),
            scary: lvl(4),
            troubling: lvl(3),
            concern: lvl(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckstyleLevels {
    pub error: NormalizedSeverity,
    pub warning: NormalizedSeverity,
    pub info: NormalizedSeverity,
    pub ignore: NormalizedSeverity,
}

impl Default for CheckstyleLevels {
    fn default() -> Self {
        CheckstyleLevels {
            error: lvl(4),
            warning: lvl(3),
            info: lvl(2),
            ignore: lvl(1),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SeverityMapError {
    #[error("invalid severity map document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("severity map for {0} is not monotone: a more severe native value maps to a lower level")]
    NotMonotone(SourceTool),
}

/// Per-tool mapping from native severities onto [`NormalizedSeverity`].
///
/// Overrides are loaded from a JSON object with optional `sonarqube`, `pmd`,
/// `findbugs` and `checkstyle` members; omitted entries keep their defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeverityMap {
    pub sonarqube: SonarLevels,
    pub pmd: PmdLevels,
    pub findbugs: FindBugsLevels,
    pub checkstyle: CheckstyleLevels,
}

impl SeverityMap {
    pub fn from_json(text: &str) -> Result<Self, SeverityMapError> {
        let map: SeverityMap = serde_json::from_str(text)?;
        map.validate()?;
        Ok(map)
    }

    pub fn validate(&self) -> Result<(), SeverityMapError> {
        fn non_increasing(levels: &[NormalizedSeverity]) -> bool {
            levels.windows(2).all(|w| w[0] >= w[1])
        }
        let s = &self.sonarqube;
        let p = &self.pmd;
        let f = &self.findbugs;
        let c = &self.checkstyle;
        let checks = [
            (
                SourceTool::SonarQube,
                non_increasing(&[s.blocker, s.critical, s.major, s.minor, s.info]),
            ),
            (
                SourceTool::Pmd,
                non_increasing(&[p.p1, p.p2, p.p3, p.p4, p.p5]),
            ),
            (
                SourceTool::FindBugs,
                non_increasing(&[f.scariest, f.scary, f.troubling, f.concern]),
            ),
            (
                SourceTool::Checkstyle,
                non_increasing(&[c.error, c.warning, c.info, c.ignore]),
            ),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((tool, _)) => Err(SeverityMapError::NotMonotone(*tool)),
            None => Ok(()),
        }
    }
}

pub fn normalize_severity(native: NativeSeverity, map: &SeverityMap) -> NormalizedSeverity {
    match native {
        NativeSeverity::SonarQube(s) => match s {
            SonarSeverity::Blocker => map.sonarqube.blocker,
            SonarSeverity::Critical => map.sonarqube.critical,
            SonarSeverity::Major => map.sonarqube.major,
            SonarSeverity::Minor => map.sonarqube.minor,
            SonarSeverity::Info => map.sonarqube.info,
        },
        NativeSeverity::Pmd(p) => match p.get() {
            1 => map.pmd.p1,
            2 => map.pmd.p2,
            3 => map.pmd.p3,
            4 => map.pmd.p4,
            _ => map.pmd.p5,
        },
        NativeSeverity::FindBugs(rank) => {
            let group = rank_group(u32::from(rank.get())).expect("FindBugsRank is always 1..=20");
            match group {
                RankGroup::Scariest => map.findbugs.scariest,
                RankGroup::Scary => map.findbugs.scary,
                RankGroup::Troubling => map.findbugs.troubling,
                RankGroup::Concern => map.findbugs.concern,
            }
        }
        NativeSeverity::Checkstyle(level) => match level {
            CheckstyleLevel::Error => map.checkstyle.error,
            CheckstyleLevel::Warning => map.checkstyle.warning,
            CheckstyleLevel::Info => map.checkstyle.info,
            CheckstyleLevel::Ignore => map.checkstyle.ignore,
        },
    }
}
