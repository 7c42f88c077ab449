use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::Corpus;
use crate::ingest::{SourceTool, WarningRecord};
use crate::model::SmellInstance;

/// File names written by [`write_corpus`], in write order.
pub const REPORT_FILES: [&str; 5] = [
    "checkstyle-result.xml",
    "pmd.xml",
    "findbugs.xml",
    "sonarqube-issues.json",
    "arcan-smells.csv",
];

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn of_tool(records: &[WarningRecord], tool: SourceTool) -> impl Iterator<Item = &WarningRecord> {
    records.iter().filter(move |r| r.tool() == tool)
}

fn by_file(records: impl Iterator<Item = impl std::ops::Deref<Target = WarningRecord>>) -> BTreeMap<String, Vec<WarningRecord>> {
    let mut files: BTreeMap<String, Vec<WarningRecord>> = BTreeMap::new();
    for r in records {
        let path = r.file_path().unwrap_or_default().to_string();
        files.entry(path).or_default().push((*r).clone());
    }
    files
}

fn line_attr(name: &str, line: Option<u32>) -> String {
    line.map(|l| format!(" {name}=\"{l}\"")).unwrap_or_default()
}

pub fn emit_checkstyle(records: &[WarningRecord]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<checkstyle version=\"10.12.0\">\n");
    for (path, errors) in by_file(of_tool(records, SourceTool::Checkstyle)) {
        let _ = writeln!(out, "  <file name=\"{}\">", esc(&path));
        for r in errors {
            let _ = writeln!(
                out,
                "    <error{} severity=\"{}\" message=\"{}\" source=\"com.puppycrawl.tools.checkstyle.checks.{}.{}\"/>",
                line_attr("line", r.line()),
                esc(&r.native().raw_text()),
                esc(r.rule_id()),
                esc(r.category()),
                esc(r.rule_id()),
            );
        }
        out.push_str("  </file>\n");
    }
    out.push_str("</checkstyle>\n");
    out
}

pub fn emit_pmd(records: &[WarningRecord]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pmd version=\"6.55.0\">\n");
    for (path, violations) in by_file(of_tool(records, SourceTool::Pmd)) {
        let _ = writeln!(out, "  <file name=\"{}\">", esc(&path));
        for r in violations {
            let class_attrs = r
                .fq_class()
                .and_then(|fq| fq.rsplit_once('.'))
                .map(|(pkg, class)| format!(" package=\"{}\" class=\"{}\"", esc(pkg), esc(class)))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "    <violation{}{} rule=\"{}\" ruleset=\"{}\"{} priority=\"{}\">{}</violation>",
                line_attr("beginline", r.line()),
                line_attr("endline", r.line()),
                esc(r.rule_id()),
                esc(r.category()),
                class_attrs,
                esc(&r.native().raw_text()),
                esc(r.rule_id()),
            );
        }
        out.push_str("  </file>\n");
    }
    out.push_str("</pmd>\n");
    out
}

pub fn emit_findbugs(records: &[WarningRecord]) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<BugCollection version=\"4.7.3\" sequence=\"0\">\n",
    );
    for r in of_tool(records, SourceTool::FindBugs) {
        let class = r.fq_class().unwrap_or_default();
        let source = match (r.file_path(), r.line()) {
            (Some(path), line) => format!(
                "<SourceLine classname=\"{}\"{}{} sourcepath=\"{}\"/>",
                esc(class),
                line_attr("start", line),
                line_attr("end", line),
                esc(path)
            ),
            (None, _) => String::new(),
        };
        let _ = writeln!(
            out,
            "  <BugInstance type=\"{}\" rank=\"{}\" category=\"{}\" priority=\"2\">\n    <Class classname=\"{}\" primary=\"true\"/>\n    {}\n  </BugInstance>",
            esc(r.rule_id()),
            esc(&r.native().raw_text()),
            esc(r.category()),
            esc(class),
            source,
        );
    }
    out.push_str("</BugCollection>\n");
    out
}

pub fn emit_sonarqube(records: &[WarningRecord]) -> String {
    let issues: Vec<serde_json::Value> = of_tool(records, SourceTool::SonarQube)
        .enumerate()
        .map(|(i, r)| {
            let mut issue = json!({
                "key": format!("SYN{i}"),
                "rule": r.rule_id(),
                "severity": r.native().raw_text(),
                "component": format!("synth:{}", r.file_path().unwrap_or_default()),
                "type": r.category(),
            });
            if let Some(line) = r.line() {
                issue["line"] = json!(line);
            }
            if let Some(effort) = r.remediation() {
                issue["effort"] = json!(effort);
            }
            issue
        })
        .collect();
    let doc = json!({ "total": issues.len(), "issues": issues });
    let mut text = serde_json::to_string_pretty(&doc).expect("json values serialize");
    text.push('\n');
    text
}

pub fn emit_arcan(smells: &[SmellInstance]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["smell_id", "smell_type", "granularity", "affected_entities"])
        .expect("in-memory write");
    for (i, s) in smells.iter().enumerate() {
        let entities: Vec<&str> = s.affected().iter().map(String::as_str).collect();
        writer
            .write_record([
                (i + 1).to_string(),
                s.kind().to_string(),
                s.granularity().to_string(),
                entities.join(";"),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Writes the corpus as one native report per tool plus the smell table.
pub fn write_corpus(corpus: &Corpus, dir: &Path) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let contents = [
        emit_checkstyle(&corpus.warnings),
        emit_pmd(&corpus.warnings),
        emit_findbugs(&corpus.warnings),
        emit_sonarqube(&corpus.warnings),
        emit_arcan(&corpus.smells),
    ];
    REPORT_FILES
        .iter()
        .zip(contents)
        .map(|(name, text)| {
            let path = dir.join(name);
            std::fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}
