use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_warnsmell"));
    for (key, _) in std::env::vars_os() {
        if key.to_string_lossy().starts_with("WARNSMELL_") {
            cmd.env_remove(key);
        }
    }
    cmd
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).arg("--deterministic").output().unwrap()
}

fn ok(args: &[&str], out: &Path) -> String {
    let o = run(args, out);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn data(path: &Path) -> Value {
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    doc["data"].clone()
}

fn mini_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/mini-corpus")
}

#[test]
fn ingest_counts_match_fixture_manifests() {
    let out = tempfile::tempdir().unwrap();
    ok(&["ingest", mini_corpus().to_str().unwrap()], out.path());
    let mut expected: BTreeMap<String, u64> = BTreeMap::new();
    let (mut smells, mut packages) = (0, 0);
    for project in ["alpha", "beta", "gamma"] {
        let manifest = data(&mini_corpus().join(project).join("manifest.json"));
        for (tool, n) in manifest["warnings"].as_object().unwrap() {
            *expected.entry(tool.clone()).or_default() += n.as_u64().unwrap();
        }
        smells += manifest["smells"].as_u64().unwrap();
        packages += manifest["packages"].as_u64().unwrap();
    }
    let report = data(&out.path().join("ingest/ingest-report.json"));
    let got: BTreeMap<String, u64> = report["warnings"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.clone(), v.as_u64().unwrap()))
        .collect();
    assert_eq!(got, expected);
    assert_eq!(report["smells"].as_u64().unwrap(), smells);
    assert_eq!(report["packages"].as_u64().unwrap(), packages);
    assert_eq!(report["files"].as_array().unwrap().len(), 15);
    for dump in [
        "warnings-checkstyle.ndjson",
        "warnings-pmd.ndjson",
        "warnings-findbugs.ndjson",
        "warnings-sonarqube.ndjson",
        "smells.ndjson",
    ] {
        assert!(out.path().join("ingest").join(dump).is_file(), "{dump}");
    }
}

#[test]
fn empty_directory_is_a_config_error() {
    let input = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = run(&["ingest", input.path().to_str().unwrap()], out.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no report files found"));
}

#[test]
fn malformed_report_fails_unless_keep_going() {
    let input = tempfile::tempdir().unwrap();
    let alpha = mini_corpus().join("alpha");
    std::fs::copy(alpha.join("pmd.xml"), input.path().join("pmd.xml")).unwrap();
    std::fs::copy(alpha.join("arcan-smells.csv"), input.path().join("arcan-smells.csv")).unwrap();
    std::fs::write(input.path().join("checkstyle-result.xml"), "<checkstyle><file name=").unwrap();
    let out = tempfile::tempdir().unwrap();

    let strict = run(&["ingest", input.path().to_str().unwrap()], out.path());
    assert_eq!(strict.status.code(), Some(3));

    ok(&["ingest", "--keep-going", input.path().to_str().unwrap()], out.path());
    let report = data(&out.path().join("ingest/ingest-report.json"));
    let failed = report["failed"].as_array().unwrap();
    assert_eq!(failed.len(), 1);
    assert!(failed[0]["path"].as_str().unwrap().ends_with("checkstyle-result.xml"));
    assert_eq!(report["files"].as_array().unwrap().len(), 2);
}

#[test]
fn later_stages_need_earlier_outputs() {
    let out = tempfile::tempdir().unwrap();
    assert_eq!(run(&["analyze"], out.path()).status.code(), Some(2));
    assert_eq!(run(&["rank"], out.path()).status.code(), Some(2));
    assert_eq!(run(&["report"], out.path()).status.code(), Some(2));
}

#[test]
fn invalid_settings_exit_with_config_code() {
    let out = tempfile::tempdir().unwrap();
    assert_eq!(run(&["--alpha", "1.5", "analyze"], out.path()).status.code(), Some(2));
    let o = bin()
        .args(["rank", "--out"])
        .arg(out.path())
        .env("WARNSMELL_RANK_UNIT", "module")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let config = out.path().join("config.json");
    std::fs::write(&config, r#"{"alpah": 0.1}"#).unwrap();
    let o = bin().args(["--config"]).arg(&config).arg("report").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let work = tempfile::tempdir().unwrap();
    let reports = work.path().join("reports");
    let config = work.path().join("config.json");
    std::fs::write(&config, r#"{"seed": 5, "packages": 12, "alpha": 0.2}"#).unwrap();
    let o = bin()
        .args(["--config"])
        .arg(&config)
        .args(["synth", "--packages", "9", "--deterministic", "--out"])
        .arg(&reports)
        .output()
        .unwrap();
    assert!(o.status.success());
    let spec = data(&reports.join("plant-spec.json"));
    assert_eq!(spec["seed"], 5);
    assert_eq!(spec["n_packages"], 9);
}

#[test]
fn nco_ranking_puts_never_co_occurring_rules_first() {
    let work = tempfile::tempdir().unwrap();
    let (reports, out) = (work.path().join("reports"), work.path().join("out"));
    ok(&["synth", "--seed", "3", "--packages", "60"], &reports);
    ok(&["ingest", reports.to_str().unwrap()], &out);
    ok(&["analyze"], &out);
    ok(&["rank"], &out);

    let nco_only = ["CommentRequired", "java:S1135"];
    let ingest = std::fs::read_to_string(out.join("ingest/warnings-pmd.ndjson")).unwrap()
        + &std::fs::read_to_string(out.join("ingest/warnings-sonarqube.ndjson")).unwrap();
    let planted = ingest.lines().filter(|l| nco_only.iter().any(|r| l.contains(&format!("\"{r}\"")))).count();
    assert!(planted > 0);

    let text = std::fs::read_to_string(out.join("rank/ranking-p-nco.csv")).unwrap();
    let mut rows = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rules: Vec<String> = rows.records().map(|r| r.unwrap()[2].to_string()).collect();
    assert!(rules[..planted].iter().all(|r| nco_only.contains(&r.as_str())));
    assert!(!nco_only.contains(&rules[planted].as_str()));
}

#[test]
fn diag_prints_intermediates_and_maps_errors() {
    let out = tempfile::tempdir().unwrap();
    let stdout = ok(&["diag", "wilcoxon", "--a", "1,2,3,4,5,6", "--b", "2,3,4,5,6,7"], out.path());
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["outcome"]["p_value"].as_f64().unwrap(), 0.03125);
    assert_eq!(v["detail"]["w_plus"].as_f64().unwrap(), 0.0);

    let stdout = ok(&["diag", "spearman", "--x", "1,2,3,4", "--y", "-1,-4,-9,-16", "--exact"], out.path());
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["outcome"]["statistic"].as_f64().unwrap(), -1.0);

    let o = run(&["diag", "spearman", "--x", "1,1,1", "--y", "1,2,3"], out.path());
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["diag", "bh", "--p", "0.2,1.5"], out.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn timestamps_only_without_deterministic() {
    let work = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["synth", "--packages", "5", "--out"])
        .arg(work.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(work.path().join("manifest.json")).unwrap();
    assert!(text.contains("generated_at_unix"));
}
