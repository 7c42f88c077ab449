use super::{
    normalize_severity, xml_document, IngestError, NativeSeverity, SeverityMap, SourceTool,
    WarningRecord,
};

const FORMAT: &str = "Checkstyle";

/// Parses a Checkstyle XML report (`<checkstyle><file><error/>...`).
///
/// The rule id is the trailing segment of the `source` attribute, the category
/// is the package segment before it (e.g. `javadoc`).
pub fn parse_checkstyle(bytes: &[u8], map: &SeverityMap) -> Result<Vec<WarningRecord>, IngestError> {
    let doc = xml_document(FORMAT, bytes)?;
    let root = doc.root_element();
    if root.tag_name().name() != "checkstyle" {
        return Err(IngestError::malformed(
            FORMAT,
            format!("root element is <{}>, expected <checkstyle>", root.tag_name().name()),
        ));
    }

    let mut records = Vec::new();
    for file in root.children().filter(|n| n.has_tag_name("file")) {
        let path = file
            .attribute("name")
            .ok_or_else(|| IngestError::malformed(FORMAT, "<file> without name attribute"))?;
        for error in file.children().filter(|n| n.has_tag_name("error")) {
            let severity = error.attribute("severity").ok_or_else(|| {
                IngestError::malformed(FORMAT, format!("<error> in {path} without severity"))
            })?;
            let native = NativeSeverity::parse(SourceTool::Checkstyle, severity)?;
            let source = error.attribute("source").ok_or_else(|| {
                IngestError::malformed(FORMAT, format!("<error> in {path} without source"))
            })?;
            let mut segments = source.rsplit('.');
            let rule = segments.next().unwrap_or_default();
            let category = segments.next().unwrap_or_default();
            let line = parse_line(error.attribute("line"))?;
            let record = WarningRecord::new(
                rule,
                category,
                native,
                normalize_severity(native, map),
                Some(path.to_string()),
                line,
                None,
            )
            .map_err(|e| IngestError::malformed(FORMAT, format!("{path}: {e}")))?;
            records.push(record);
        }
    }
    Ok(records)
}

pub(super) fn parse_line(raw: Option<&str>) -> Result<Option<u32>, IngestError> {
    match raw {
        None => Ok(None),
        Some(text) => {
            let n: u32 = text
                .trim()
                .parse()
                .map_err(|_| IngestError::malformed(FORMAT, format!("bad line number `{text}`")))?;
            // line 0 marks file-level findings
            Ok((n > 0).then_some(n))
        }
    }
}
