//! Parsers for the native report formats of Checkstyle, PMD, FindBugs/SpotBugs,
//! SonarQube and Arcan-style smell tables.
//!
//! Every warning parser yields [`WarningRecord`]s in document order with the
//! native severity preserved and a normalized 1..=5 level attached through a
//! [`SeverityMap`].

mod arcan;
mod checkstyle;
mod findbugs;
mod pmd;
mod record;
mod severity;
mod sonarqube;

use std::io::{BufRead, Write};

pub use arcan::{parse_arcan, ArcanOptions};
pub use checkstyle::parse_checkstyle;
pub use findbugs::parse_findbugs;
pub use pmd::parse_pmd;
pub use record::{RecordError, WarningRecord};
pub use severity::{
    normalize_severity, rank_group, CheckstyleLevel, FindBugsRank, NativeSeverity,
    NormalizedSeverity, PmdPriority, RankGroup, SeverityMap, SeverityMapError, SonarSeverity,
    SourceTool,
};
pub use sonarqube::parse_sonarqube;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("malformed {format} report: {detail}")]
    MalformedReport { format: &'static str, detail: String },
    #[error("unknown {tool} severity `{raw}`")]
    UnknownSeverity { tool: SourceTool, raw: String },
    #[error("unknown smell kind `{0}`")]
    UnknownSmellKind(String),
}

impl IngestError {
    pub(crate) fn malformed(format: &'static str, detail: impl Into<String>) -> Self {
        IngestError::MalformedReport {
            format,
            detail: detail.into(),
        }
    }
}

/// Parses a warning report of the given tool.
pub fn parse_report(
    tool: SourceTool,
    bytes: &[u8],
    map: &SeverityMap,
) -> Result<Vec<WarningRecord>, IngestError> {
    match tool {
        SourceTool::Checkstyle => parse_checkstyle(bytes, map),
        SourceTool::FindBugs => parse_findbugs(bytes, map),
        SourceTool::Pmd => parse_pmd(bytes, map),
        SourceTool::SonarQube => parse_sonarqube(bytes, map),
    }
}

pub(crate) fn xml_document<'a>(
    format: &'static str,
    bytes: &'a [u8],
) -> Result<roxmltree::Document<'a>, IngestError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| IngestError::malformed(format, format!("not UTF-8: {e}")))?;
    roxmltree::Document::parse(text).map_err(|e| IngestError::malformed(format, e.to_string()))
}

/// Writes records as newline-delimited JSON, one object per line.
pub fn write_ndjson<T: serde::Serialize, W: Write>(
    mut out: W,
    records: &[T],
) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads newline-delimited JSON records; blank lines are skipped.
pub fn read_ndjson<T: serde::de::DeserializeOwned, R: BufRead>(
    input: R,
) -> Result<Vec<T>, serde_json::Error> {
    let mut records = Vec::new();
    for line in input.lines() {
        let line = line.map_err(serde_json::Error::io)?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line)?);
    }
    Ok(records)
}
