use serde::Deserialize;

use super::{normalize_severity, IngestError, NativeSeverity, SeverityMap, SourceTool, WarningRecord};

const FORMAT: &str = "SonarQube";

#[derive(Deserialize)]
#[serde(untagged)]
enum Export {
    Bare(Vec<Issue>),
    Wrapped { issues: Vec<Issue> },
}

#[derive(Deserialize)]
struct Issue {
    rule: String,
    severity: String,
    component: String,
    #[serde(default)]
    line: Option<u32>,
    #[serde(default, rename = "type")]
    kind: Option<String>,
    #[serde(default)]
    effort: Option<String>,
    #[serde(default)]
    debt: Option<String>,
}

/// Parses a SonarQube issue export: either a bare JSON array of issues or the
/// `api/issues/search` envelope with an `issues` member.
///
/// `component` keys of the form `project:path/to/File.java` are reduced to the
/// path part.
pub fn parse_sonarqube(bytes: &[u8], map: &SeverityMap) -> Result<Vec<WarningRecord>, IngestError> {
    let export: Export = serde_json::from_slice(bytes)
        .map_err(|e| IngestError::malformed(FORMAT, e.to_string()))?;
    let issues = match export {
        Export::Bare(issues) | Export::Wrapped { issues } => issues,
    };

    issues
        .into_iter()
        .map(|issue| {
            let native = NativeSeverity::parse(SourceTool::SonarQube, &issue.severity)?;
            let path = match issue.component.split_once(':') {
                Some((_project, path)) => path.to_string(),
                None => issue.component.clone(),
            };
            let remediation = issue.effort.or(issue.debt);
            WarningRecord::new(
                issue.rule.as_str(),
                issue.kind.unwrap_or_default(),
                native,
                normalize_severity(native, map),
                Some(path),
                issue.line.filter(|&l| l > 0),
                None,
            )
            .map(|r| r.with_remediation(remediation))
            .map_err(|e| IngestError::malformed(FORMAT, format!("{}: {e}", issue.rule)))
        })
        .collect()
}
