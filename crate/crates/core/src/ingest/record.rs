use serde::{Deserialize, Serialize};

use super::{NativeSeverity, NormalizedSeverity, SourceTool};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecordError {
    #[error("rule id is empty")]
    EmptyRule,
    #[error("record has neither a file path nor a class name")]
    NoLocation,
    #[error("line number given without a file path")]
    LineWithoutFile,
    #[error("line number must be positive")]
    ZeroLine,
    #[error("native severity belongs to {native}, record is from {tool}")]
    ToolMismatch { tool: SourceTool, native: SourceTool },
}

/// One static-analysis finding in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRecord", into = "RawRecord")]
pub struct WarningRecord {
    tool: SourceTool,
    rule_id: String,
    category: String,
    native: NativeSeverity,
    normalized: NormalizedSeverity,
    file_path: Option<String>,
    line: Option<u32>,
    fq_class: Option<String>,
    remediation: Option<String>,
}

impl WarningRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rule_id: impl Into<String>,
        category: impl Into<String>,
        native: NativeSeverity,
        normalized: NormalizedSeverity,
        file_path: Option<String>,
        line: Option<u32>,
        fq_class: Option<String>,
    ) -> Result<Self, RecordError> {
        let record = WarningRecord {
            tool: native.tool(),
            rule_id: rule_id.into(),
            category: category.into(),
            native,
            normalized,
            file_path: file_path.filter(|p| !p.is_empty()),
            line,
            fq_class: fq_class.filter(|c| !c.is_empty()),
            remediation: None,
        };
        record.check()?;
        Ok(record)
    }

    /// Attaches free-text remediation cost (SonarQube `effort`/`debt`).
    pub fn with_remediation(mut self, text: Option<String>) -> Self {
        self.remediation = text.filter(|t| !t.is_empty());
        self
    }

    fn check(&self) -> Result<(), RecordError> {
        if self.rule_id.trim().is_empty() {
            return Err(RecordError::EmptyRule);
        }
        if self.file_path.is_none() && self.fq_class.is_none() {
            return Err(RecordError::NoLocation);
        }
        match (self.line, &self.file_path) {
            (Some(_), None) => return Err(RecordError::LineWithoutFile),
            (Some(0), _) => return Err(RecordError::ZeroLine),
            _ => {}
        }
        if self.native.tool() != self.tool {
            return Err(RecordError::ToolMismatch {
                tool: self.tool,
                native: self.native.tool(),
            });
        }
        Ok(())
    }

    pub fn tool(&self) -> SourceTool {
        self.tool
    }
    pub fn rule_id(&self) -> &str {
        &self.rule_id
    }
    pub fn category(&self) -> &str {
        &self.category
    }
    pub fn native(&self) -> NativeSeverity {
        self.native
    }
    pub fn normalized(&self) -> NormalizedSeverity {
        self.normalized
    }
    pub fn file_path(&self) -> Option<&str> {
        self.file_path.as_deref()
    }
    pub fn line(&self) -> Option<u32> {
        self.line
    }
    pub fn fq_class(&self) -> Option<&str> {
        self.fq_class.as_deref()
    }
    pub fn remediation(&self) -> Option<&str> {
        self.remediation.as_deref()
    }

    /// The location used for package attribution: class name first, then path.
    pub fn locator(&self) -> &str {
        self.fq_class
            .as_deref()
            .or(self.file_path.as_deref())
            .expect("constructor guarantees a location")
    }
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    tool: SourceTool,
    rule_id: String,
    #[serde(default)]
    category: String,
    native: NativeSeverity,
    normalized: NormalizedSeverity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    file_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    line: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fq_class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    remediation: Option<String>,
}

impl TryFrom<RawRecord> for WarningRecord {
    type Error = RecordError;

    fn try_from(raw: RawRecord) -> Result<Self, Self::Error> {
        let record = WarningRecord {
            tool: raw.tool,
            rule_id: raw.rule_id,
            category: raw.category,
            native: raw.native,
            normalized: raw.normalized,
            file_path: raw.file_path,
            line: raw.line,
            fq_class: raw.fq_class,
            remediation: raw.remediation,
        };
        record.check()?;
        Ok(record)
    }
}

impl From<WarningRecord> for RawRecord {
    fn from(r: WarningRecord) -> Self {
        RawRecord {
            tool: r.tool,
            rule_id: r.rule_id,
            category: r.category,
            native: r.native,
            normalized: r.normalized,
            file_path: r.file_path,
            line: r.line,
            fq_class: r.fq_class,
            remediation: r.remediation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{normalize_severity, SeverityMap};

    fn native() -> NativeSeverity {
        NativeSeverity::parse(SourceTool::Pmd, "2").unwrap()
    }

    fn norm() -> NormalizedSeverity {
        normalize_severity(native(), &SeverityMap::default())
    }

    #[test]
    fn invariants_are_enforced() {
        assert_eq!(
            WarningRecord::new("", "c", native(), norm(), Some("a.java".into()), None, None),
            Err(RecordError::EmptyRule)
        );
        assert_eq!(
            WarningRecord::new("R", "c", native(), norm(), None, None, None),
            Err(RecordError::NoLocation)
        );
        assert_eq!(
            WarningRecord::new("R", "c", native(), norm(), None, Some(3), Some("a.B".into())),
            Err(RecordError::LineWithoutFile)
        );
        assert!(WarningRecord::new("R", "c", native(), norm(), None, None, Some("a.B".into())).is_ok());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let rec = WarningRecord::new(
            "UnusedLocalVariable",
            "bestpractices",
            native(),
            norm(),
            Some("src/org/a/B.java".into()),
            Some(7),
            Some("org.a.B".into()),
        )
        .unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        let back: WarningRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);

        let no_loc = r#"{"tool":"PMD","rule_id":"X","native":{"tool":"PMD","raw":2},"normalized":4}"#;
        assert!(serde_json::from_str::<WarningRecord>(no_loc).is_err());
    }
}
