use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;
use warnsmell_core::ingest::{
    parse_arcan, parse_report, read_ndjson, write_ndjson, ArcanOptions, SeverityMap, SourceTool, WarningRecord,
};
use warnsmell_core::model::{build_profiles_lenient, write_profiles_csv, Attribution, PackageProfile, SmellInstance};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{write_json, Meta};

pub const INGEST_DIR: &str = "ingest";
pub const REPORT_FILE: &str = "ingest-report.json";
pub const SMELL_DUMP: &str = "smells.ndjson";
pub const PROFILES_FILE: &str = "profiles.csv";

pub fn warning_dump(tool: SourceTool) -> String {
    format!("warnings-{}.ndjson", tool.slug())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Warnings(SourceTool),
    Smells,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Warnings(t) => t.name(),
            Format::Smells => "Arcan",
        }
    }
}

/// Report format from the file name: the tool name must appear in it and the
/// extension must match the tool's output.
fn detect(name: &str) -> Option<Format> {
    let file = name.rsplit(['/', '\\']).next().unwrap_or(name);
    let lower = file.to_ascii_lowercase();
    let (stem, ext) = lower.rsplit_once('.')?;
    match ext {
        "xml" if stem.contains("checkstyle") => Some(Format::Warnings(SourceTool::Checkstyle)),
        "xml" if stem.contains("pmd") => Some(Format::Warnings(SourceTool::Pmd)),
        "xml" if stem.contains("findbugs") || stem.contains("spotbugs") => Some(Format::Warnings(SourceTool::FindBugs)),
        "json" if stem.contains("sonar") => Some(Format::Warnings(SourceTool::SonarQube)),
        "csv" if stem.contains("arcan") || stem.contains("smell") => Some(Format::Smells),
        _ => None,
    }
}

struct Input {
    display: String,
    path: PathBuf,
}

fn collect_inputs(roots: &[PathBuf]) -> CliResult<Vec<Input>> {
    let mut inputs = Vec::new();
    for root in roots {
        if !root.exists() {
            return Err(CliError::config(format!("input {} does not exist", root.display())));
        }
        let label = root
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| root.display().to_string());
        if root.is_file() {
            inputs.push(Input {
                display: label,
                path: root.clone(),
            });
            continue;
        }
        for entry in WalkDir::new(root).sort_by_file_name() {
            let entry = entry.with_context(|| format!("cannot walk {}", root.display()))?;
            if entry.file_type().is_file() {
                let rel = entry.path().strip_prefix(root).unwrap_or(entry.path());
                let rel: Vec<String> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
                inputs.push(Input {
                    display: format!("{label}/{}", rel.join("/")),
                    path: entry.into_path(),
                });
            }
        }
    }
    Ok(inputs)
}

enum Parsed {
    Warnings(Vec<WarningRecord>),
    Smells(Vec<SmellInstance>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub format: String,
    pub records: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailedFile {
    pub path: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnresolvedEntry {
    pub record: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestReport {
    pub roots: Vec<String>,
    pub files: Vec<FileEntry>,
    pub skipped: Vec<String>,
    pub failed: Vec<FailedFile>,
    pub warnings: BTreeMap<String, usize>,
    pub smells: usize,
    pub packages: usize,
    pub unresolved: Vec<UnresolvedEntry>,
}

fn load_severity_map(path: Option<&Path>) -> CliResult<SeverityMap> {
    let Some(path) = path else {
        return Ok(SeverityMap::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read severity map {}: {e}", path.display())))?;
    SeverityMap::from_json(&text).map_err(|e| CliError::config(format!("severity map {}: {e}", path.display())))
}

pub fn run(inputs: &[PathBuf], settings: &Settings) -> CliResult {
    if inputs.is_empty() {
        return Err(CliError::config("ingest needs at least one input file or directory"));
    }
    let map = load_severity_map(settings.severity_map.as_deref())?;
    let all = collect_inputs(inputs)?;
    let (recognized, skipped): (Vec<_>, Vec<_>) = all.into_iter().partition(|i| detect(&i.display).is_some());
    if recognized.is_empty() {
        let shown: Vec<String> = inputs.iter().map(|p| p.display().to_string()).collect();
        return Err(CliError::config(format!(
            "no report files found in {} (expected names containing checkstyle, pmd, findbugs/spotbugs, sonar or arcan/smell)",
            shown.join(", ")
        )));
    }

    let results: Vec<Result<Parsed, String>> = recognized
        .par_iter()
        .map(|input| {
            let format = detect(&input.display).expect("recognized");
            let bytes = fs::read(&input.path).map_err(|e| e.to_string())?;
            match format {
                Format::Warnings(tool) => parse_report(tool, &bytes, &map).map(Parsed::Warnings),
                Format::Smells => parse_arcan(&bytes, &ArcanOptions::default()).map(Parsed::Smells),
            }
            .map_err(|e| e.to_string())
        })
        .collect();

    let mut files = Vec::new();
    let mut failed = Vec::new();
    let mut warnings: BTreeMap<SourceTool, Vec<WarningRecord>> = SourceTool::ALL.iter().map(|&t| (t, Vec::new())).collect();
    let mut smells = Vec::new();
    for (input, result) in recognized.iter().zip(results) {
        let format = detect(&input.display).expect("recognized");
        match result {
            Ok(Parsed::Warnings(records)) => {
                files.push(FileEntry {
                    path: input.display.clone(),
                    format: format.name().into(),
                    records: records.len(),
                });
                let Format::Warnings(tool) = format else { unreachable!() };
                warnings.get_mut(&tool).expect("all tools").extend(records);
            }
            Ok(Parsed::Smells(found)) => {
                files.push(FileEntry {
                    path: input.display.clone(),
                    format: format.name().into(),
                    records: found.len(),
                });
                smells.extend(found);
            }
            Err(error) => {
                if !settings.keep_going {
                    return Err(CliError::parse(format!("{}: {error}", input.display)));
                }
                failed.push(FailedFile {
                    path: input.display.clone(),
                    error,
                });
            }
        }
    }
    if files.is_empty() {
        return Err(CliError::parse("every input report failed to parse"));
    }

    let dir = settings.out.join(INGEST_DIR);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (tool, records) in &warnings {
        let path = dir.join(warning_dump(*tool));
        let file = fs::File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
        write_ndjson(std::io::BufWriter::new(file), records)?;
    }
    let smell_path = dir.join(SMELL_DUMP);
    write_ndjson(std::io::BufWriter::new(fs::File::create(&smell_path)?), &smells)?;

    let all_warnings: Vec<WarningRecord> = warnings.values().flatten().cloned().collect();
    let attribution = Attribution::with_roots(settings.roots.iter().cloned());
    let (profiles, unresolved) = build_profiles_lenient(&all_warnings, &smells, &attribution);
    let mut profile_bytes = Vec::new();
    write_profiles_csv(&mut profile_bytes, &profiles)?;
    fs::write(dir.join(PROFILES_FILE), profile_bytes)?;

    let report = IngestReport {
        roots: settings.roots.clone(),
        files,
        skipped: skipped.into_iter().map(|i| i.display).collect(),
        failed,
        warnings: warnings.iter().map(|(t, r)| (t.name().to_string(), r.len())).collect(),
        smells: smells.len(),
        packages: profiles.len(),
        unresolved: unresolved
            .into_iter()
            .map(|u| UnresolvedEntry {
                record: u.record,
                error: u.error.to_string(),
            })
            .collect(),
    };
    let meta = Meta::new("ingest", settings).with("roots", settings.roots.join(","));
    write_json(&dir.join(REPORT_FILE), &meta, &report)?;

    let counts: Vec<String> = report.warnings.iter().map(|(t, n)| format!("{t} {n}")).collect();
    println!(
        "ingested {} files: warnings {}; smells {}; {} packages; {} unresolved",
        report.files.len(),
        counts.join(", "),
        report.smells,
        report.packages,
        report.unresolved.len()
    );
    for f in &report.failed {
        eprintln!("warning: skipped {}: {}", f.path, f.error);
    }
    Ok(())
}

/// Outputs of a previous ingest run.
pub struct Ingested {
    pub report: IngestReport,
    pub profiles: Vec<PackageProfile>,
    pub dir: PathBuf,
}

pub fn load(settings: &Settings) -> CliResult<Ingested> {
    let dir = settings.out.join(INGEST_DIR);
    let report_path = dir.join(REPORT_FILE);
    if !report_path.exists() {
        return Err(CliError::config(format!(
            "no ingest outputs under {}; run `warnsmell ingest` first",
            dir.display()
        )));
    }
    let report: IngestReport = crate::output::read_json(&report_path)?;
    let profile_path = dir.join(PROFILES_FILE);
    let file = fs::File::open(&profile_path).with_context(|| format!("cannot read {}", profile_path.display()))?;
    let profiles = warnsmell_core::model::read_profiles_csv(BufReader::new(file))
        .map_err(|e| CliError::parse(format!("{}: {e}", profile_path.display())))?;
    Ok(Ingested { report, profiles, dir })
}

pub fn load_warnings(dir: &Path) -> CliResult<Vec<WarningRecord>> {
    let mut all = Vec::new();
    for tool in SourceTool::ALL {
        let path = dir.join(warning_dump(tool));
        let file = fs::File::open(&path).with_context(|| format!("cannot read {}", path.display()))?;
        let records: Vec<WarningRecord> =
            read_ndjson(BufReader::new(file)).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        all.extend(records);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detection() {
        assert_eq!(detect("alpha/checkstyle-result.xml"), Some(Format::Warnings(SourceTool::Checkstyle)));
        assert_eq!(detect("SpotBugs.xml"), Some(Format::Warnings(SourceTool::FindBugs)));
        assert_eq!(detect("x/sonarqube-issues.json"), Some(Format::Warnings(SourceTool::SonarQube)));
        assert_eq!(detect("arcan-smells.csv"), Some(Format::Smells));
        assert_eq!(detect("pmd.json"), None);
        assert_eq!(detect("pmd-project/notes.xml"), None);
        assert_eq!(detect("manifest.json"), None);
        assert_eq!(detect("README"), None);
    }
}
