use roxmltree::Node;

use super::{
    normalize_severity, xml_document, IngestError, NativeSeverity, SeverityMap, SourceTool,
    WarningRecord,
};

const FORMAT: &str = "FindBugs";

fn child<'a, 'input>(node: Node<'a, 'input>, name: &str) -> Option<Node<'a, 'input>> {
    node.children().find(|n| n.tag_name().name() == name)
}

/// Parses a FindBugs or SpotBugs XML report (`<BugCollection><BugInstance>`).
///
/// The primary class is the first `<Class>` child (or the one flagged
/// `primary="true"`); the location comes from the `<SourceLine>` that is a
/// direct child of the instance, falling back to the class's own source line.
pub fn parse_findbugs(bytes: &[u8], map: &SeverityMap) -> Result<Vec<WarningRecord>, IngestError> {
    let doc = xml_document(FORMAT, bytes)?;
    let root = doc.root_element();
    if root.tag_name().name() != "BugCollection" {
        return Err(IngestError::malformed(
            FORMAT,
            format!("root element is <{}>, expected <BugCollection>", root.tag_name().name()),
        ));
    }

    let mut records = Vec::new();
    for bug in root.children().filter(|n| n.tag_name().name() == "BugInstance") {
        let pattern = bug
            .attribute("type")
            .ok_or_else(|| IngestError::malformed(FORMAT, "<BugInstance> without type"))?;
        let rank = bug.attribute("rank").ok_or_else(|| {
            IngestError::malformed(FORMAT, format!("<BugInstance type={pattern}> without rank"))
        })?;
        let native = NativeSeverity::parse(SourceTool::FindBugs, rank)?;

        let classes: Vec<Node> = bug
            .children()
            .filter(|n| n.tag_name().name() == "Class")
            .collect();
        let class = classes
            .iter()
            .find(|c| c.attribute("primary") == Some("true"))
            .or(classes.first())
            .copied();
        let source_line = child(bug, "SourceLine").or_else(|| class.and_then(|c| child(c, "SourceLine")));

        let fq_class = class
            .and_then(|c| c.attribute("classname"))
            .or_else(|| source_line.and_then(|s| s.attribute("classname")))
            .map(str::to_string);
        let file_path = source_line
            .and_then(|s| s.attribute("sourcepath"))
            .map(str::to_string);
        let line = match (&file_path, source_line.and_then(|s| s.attribute("start"))) {
            (Some(_), Some(start)) => start.trim().parse::<u32>().ok().filter(|&n| n > 0),
            _ => None,
        };

        let record = WarningRecord::new(
            pattern,
            bug.attribute("category").unwrap_or_default(),
            native,
            normalize_severity(native, map),
            file_path,
            line,
            fq_class,
        )
        .map_err(|e| IngestError::malformed(FORMAT, format!("{pattern}: {e}")))?;
        records.push(record);
    }
    Ok(records)
}
