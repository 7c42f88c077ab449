use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Architectural smell kinds. Adding a kind means extending [`SmellKind::ALL`]
/// and the bit layout of [`super::SmellCombo`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SmellKind {
    /// Cyclic dependency.
    CD,
    /// Unstable dependency.
    UD,
    /// Hub-like dependency.
    HL,
}

impl SmellKind {
    pub const ALL: [SmellKind; 3] = [SmellKind::CD, SmellKind::UD, SmellKind::HL];

    /// Default severity on the 1..=10 scale: CD 5, UD 7, HL 9.
    pub fn default_severity(self) -> u8 {
        match self {
            SmellKind::CD => 5,
            SmellKind::UD => 7,
            SmellKind::HL => 9,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SmellKind::CD => "CD",
            SmellKind::UD => "UD",
            SmellKind::HL => "HL",
        }
    }

    pub(crate) fn bit(self) -> u8 {
        match self {
            SmellKind::CD => 1,
            SmellKind::UD => 2,
            SmellKind::HL => 4,
        }
    }
}

impl fmt::Display for SmellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SmellKind {
    type Err = String;

    /// Accepts the abbreviations and the spelled-out names Arcan uses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "cd" | "cyclicdependency" | "cyclicdep" => Ok(SmellKind::CD),
            "ud" | "unstabledependency" | "unstabledep" => Ok(SmellKind::UD),
            "hl" | "hublikedependency" | "hublikedep" | "hublike" => Ok(SmellKind::HL),
            _ => Err(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Class,
    Package,
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "class" | "classes" => Ok(Granularity::Class),
            "package" | "packages" => Ok(Granularity::Package),
            _ => Err(format!("unknown granularity `{s}`")),
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Class => "class",
            Granularity::Package => "package",
        })
    }
}

/// One detected architectural smell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSmell", into = "RawSmell")]
pub struct SmellInstance {
    kind: SmellKind,
    granularity: Granularity,
    affected: BTreeSet<String>,
    severity: u8,
}

impl SmellInstance {
    /// Builds an instance with the kind's default severity.
    pub fn new<I, S>(kind: SmellKind, granularity: Granularity, affected: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_severity(kind, granularity, affected, kind.default_severity())
    }

    pub fn with_severity<I, S>(
        kind: SmellKind,
        granularity: Granularity,
        affected: I,
        severity: u8,
    ) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let affected: BTreeSet<String> = affected
            .into_iter()
            .map(|s| s.into().trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if affected.is_empty() {
            return Err(ModelError::InvalidSmell(format!("{kind} affects no entity")));
        }
        if !(1..=10).contains(&severity) {
            return Err(ModelError::InvalidSmell(format!(
                "severity {severity} outside 1..=10"
            )));
        }
        Ok(SmellInstance {
            kind,
            granularity,
            affected,
            severity,
        })
    }

    pub fn kind(&self) -> SmellKind {
        self.kind
    }
    pub fn granularity(&self) -> Granularity {
        self.granularity
    }
    pub fn affected(&self) -> &BTreeSet<String> {
        &self.affected
    }
    pub fn severity(&self) -> u8 {
        self.severity
    }
}

#[derive(Serialize, Deserialize)]
struct RawSmell {
    kind: SmellKind,
    granularity: Granularity,
    affected: Vec<String>,
    severity: u8,
}

impl TryFrom<RawSmell> for SmellInstance {
    type Error = ModelError;

    fn try_from(raw: RawSmell) -> Result<Self, Self::Error> {
        SmellInstance::with_severity(raw.kind, raw.granularity, raw.affected, raw.severity)
    }
}

impl From<SmellInstance> for RawSmell {
    fn from(s: SmellInstance) -> Self {
        RawSmell {
            kind: s.kind,
            granularity: s.granularity,
            affected: s.affected.into_iter().collect(),
            severity: s.severity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_severities() {
        assert_eq!(SmellKind::CD.default_severity(), 5);
        assert_eq!(SmellKind::UD.default_severity(), 7);
        assert_eq!(SmellKind::HL.default_severity(), 9);
    }

    #[test]
    fn kind_aliases() {
        assert_eq!("cyclicDep".parse::<SmellKind>().unwrap(), SmellKind::CD);
        assert_eq!("Hub-Like Dependency".parse::<SmellKind>().unwrap(), SmellKind::HL);
        assert_eq!("ud".parse::<SmellKind>().unwrap(), SmellKind::UD);
        assert!("GC".parse::<SmellKind>().is_err());
    }

    #[test]
    fn empty_affected_is_rejected() {
        assert!(SmellInstance::new(SmellKind::CD, Granularity::Package, [" ", ""]).is_err());
        assert!(SmellInstance::with_severity(SmellKind::CD, Granularity::Package, ["a"], 0).is_err());
    }
}
