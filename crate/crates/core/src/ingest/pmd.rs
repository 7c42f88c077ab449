use super::checkstyle::parse_line;
use super::{
    normalize_severity, xml_document, IngestError, NativeSeverity, SeverityMap, SourceTool,
    WarningRecord,
};

const FORMAT: &str = "PMD";

/// Parses a PMD XML report. Processing `<error>` entries are not findings and
/// are skipped.
pub fn parse_pmd(bytes: &[u8], map: &SeverityMap) -> Result<Vec<WarningRecord>, IngestError> {
    let doc = xml_document(FORMAT, bytes)?;
    let root = doc.root_element();
    if root.tag_name().name() != "pmd" {
        return Err(IngestError::malformed(
            FORMAT,
            format!("root element is <{}>, expected <pmd>", root.tag_name().name()),
        ));
    }

    let mut records = Vec::new();
    for file in root.children().filter(|n| n.tag_name().name() == "file") {
        let path = file
            .attribute("name")
            .ok_or_else(|| IngestError::malformed(FORMAT, "<file> without name attribute"))?;
        for violation in file.children().filter(|n| n.tag_name().name() == "violation") {
            let rule = violation.attribute("rule").ok_or_else(|| {
                IngestError::malformed(FORMAT, format!("<violation> in {path} without rule"))
            })?;
            let priority = violation.attribute("priority").ok_or_else(|| {
                IngestError::malformed(FORMAT, format!("<violation> in {path} without priority"))
            })?;
            let native = NativeSeverity::parse(SourceTool::Pmd, priority)?;
            let fq_class = match (violation.attribute("package"), violation.attribute("class")) {
                (Some(pkg), Some(class)) if !pkg.is_empty() && !class.is_empty() => {
                    Some(format!("{pkg}.{class}"))
                }
                _ => None,
            };
            let record = WarningRecord::new(
                rule,
                violation.attribute("ruleset").unwrap_or_default(),
                native,
                normalize_severity(native, map),
                Some(path.to_string()),
                parse_line(violation.attribute("beginline"))?,
                fq_class,
            )
            .map_err(|e| IngestError::malformed(FORMAT, format!("{path}: {e}")))?;
            records.push(record);
        }
    }
    Ok(records)
}
