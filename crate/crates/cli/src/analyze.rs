use std::fs;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use warnsmell_core::analysis::{
    correlation_matrix, cooccurrence_table, h2_battery, h3_battery, normality_gate, p_scores, top_quartile_warnings,
    AnalysisError, Battery, BatteryEntry, CooccurrenceTable, CorrelationReport, H2Key, H3Key, NormalityResult,
    PScoreReport, TestStatus, TopQuartile,
};
use warnsmell_core::stats::interpret_rho;

use crate::config::Settings;
use crate::error::CliResult;
use crate::ingest;
use crate::output::{fmt6, fmt_opt, write_json, write_table, Meta};

pub const ANALYSIS_DIR: &str = "analysis";

/// A table that may be missing for lack of data; the run continues either way.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Section<T> {
    pub status: String,
    pub result: Option<T>,
}

impl<T> Section<T> {
    fn from(r: Result<T, AnalysisError>) -> Self {
        match r {
            Ok(result) => Section {
                status: "ok".into(),
                result: Some(result),
            },
            Err(e) => Section {
                status: e.to_string(),
                result: None,
            },
        }
    }
}

pub fn sorted_cells(report: &CorrelationReport) -> Vec<&warnsmell_core::analysis::CorrelationCell> {
    let mut cells: Vec<_> = report.cells.iter().collect();
    cells.sort_by(|a, b| {
        b.rho
            .total_cmp(&a.rho)
            .then(a.tool.cmp(&b.tool))
            .then_with(|| a.rule_id.cmp(&b.rule_id))
            .then(a.smell.cmp(&b.smell))
    });
    cells
}

fn status_str(s: TestStatus) -> &'static str {
    match s {
        TestStatus::Tested => "tested",
        TestStatus::NotTestable => "not-testable",
        TestStatus::InsufficientData => "insufficient-data",
    }
}

pub const BATTERY_TAIL: [&str; 8] = ["n_pairs", "status", "statistic", "p_value", "method", "q_value", "rejected", "note"];

pub fn battery_tail<K>(e: &BatteryEntry<K>) -> Vec<String> {
    vec![
        e.n_pairs.to_string(),
        status_str(e.status).into(),
        fmt_opt(e.outcome.map(|o| o.statistic)),
        fmt_opt(e.outcome.map(|o| o.p_value)),
        e.outcome.map(|o| o.method.as_str().to_string()).unwrap_or_default(),
        fmt_opt(e.adjusted.map(|a| a.q_value)),
        e.adjusted.map(|a| a.rejected.to_string()).unwrap_or_default(),
        e.note.clone().unwrap_or_default(),
    ]
}

pub fn header_with<'a>(lead: &[&'a str]) -> Vec<&'a str> {
    lead.iter().copied().chain(BATTERY_TAIL).collect()
}

pub fn run(settings: &Settings) -> CliResult {
    let ingested = ingest::load(settings)?;
    let profiles = &ingested.profiles;
    let dir = settings.out.join(ANALYSIS_DIR);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let meta = Meta::new("analyze", settings)
        .with("alpha", settings.alpha)
        .with("roots", ingested.report.roots.join(","))
        .with("packages", profiles.len())
        .with("rho_bands", format!("moderate={},strong={}", settings.bands.moderate, settings.bands.strong));

    let correlation = Section::from(correlation_matrix(profiles, settings.alpha));
    let cmeta = meta.with("status", &correlation.status);
    let mut rows = Vec::new();
    if let Some(report) = &correlation.result {
        for c in sorted_cells(report) {
            rows.push(vec![
                c.tool.name().to_string(),
                c.rule_id.clone(),
                c.smell.to_string(),
                fmt6(c.rho),
                fmt6(c.outcome.raw_p),
                fmt6(c.outcome.q_value),
                c.outcome.rejected.to_string(),
                interpret_rho(c.rho, &settings.bands).map(|b| b.as_str().to_string()).unwrap_or_default(),
                c.n_packages.to_string(),
            ]);
        }
    }
    write_table(
        &dir.join("correlation.csv"),
        &cmeta,
        &["tool", "rule_id", "smell", "rho", "p_value", "q_value", "rejected", "band", "n_packages"],
        &rows,
    )?;
    write_json(&dir.join("correlation.json"), &cmeta, &correlation)?;

    let normality: Section<Vec<NormalityResult>> = Section::from(normality_gate(profiles, settings.alpha));
    let rows: Vec<Vec<String>> = normality
        .result
        .iter()
        .flatten()
        .map(|r| {
            vec![
                r.variable.clone(),
                fmt_opt(r.outcome.map(|o| o.statistic)),
                fmt_opt(r.outcome.map(|o| o.p_value)),
                fmt_opt(r.adjusted.map(|a| a.q_value)),
                r.adjusted.map(|a| a.rejected.to_string()).unwrap_or_default(),
                r.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let nmeta = meta.with("test", "anderson-darling");
    write_table(
        &dir.join("normality.csv"),
        &nmeta,
        &["variable", "a2_star", "p_value", "q_value", "non_normal", "note"],
        &rows,
    )?;
    write_json(&dir.join("normality.json"), &nmeta, &normality)?;

    let top: Option<TopQuartile> = correlation.result.as_ref().map(|r| top_quartile_warnings(&r.cells));
    let mut rows = Vec::new();
    for g in top.iter().flat_map(|t| &t.groups) {
        for (i, (rule, rho)) in g.rules.iter().enumerate() {
            rows.push(vec![
                g.tool.name().to_string(),
                g.smell.to_string(),
                fmt6(g.q3),
                (i + 1).to_string(),
                rule.clone(),
                fmt6(*rho),
            ]);
        }
    }
    write_table(
        &dir.join("top-quartile.csv"),
        &meta,
        &["tool", "smell", "q3", "rank", "rule_id", "rho"],
        &rows,
    )?;
    write_json(&dir.join("top-quartile.json"), &meta, &top)?;

    let table: CooccurrenceTable = cooccurrence_table(profiles);
    let nco = table.nco_fraction();
    let ometa = meta.with("nco_fraction", nco.map(|f| format!("{f:.4}")).unwrap_or_else(|| "n/a".into()));
    let rows: Vec<Vec<String>> = table
        .rows()
        .into_iter()
        .map(|r| vec![r.tool.name().to_string(), r.rule_id, r.combo.label(), r.count.to_string()])
        .collect();
    write_table(&dir.join("cooccurrence.csv"), &ometa, &["tool", "rule_id", "combo", "count"], &rows)?;
    write_json(&dir.join("cooccurrence.json"), &ometa, &table)?;

    let scores: PScoreReport = p_scores(&table);
    let rows: Vec<Vec<String>> = scores
        .scores
        .iter()
        .map(|s| {
            vec![
                s.tool.name().to_string(),
                s.rule_id.clone(),
                s.combo.label(),
                format!("{:.6}", s.p),
                s.count.to_string(),
                s.denominator.to_string(),
            ]
        })
        .collect();
    write_table(
        &dir.join("p-scores.csv"),
        &meta,
        &["tool", "rule_id", "combo", "p", "count", "denominator"],
        &rows,
    )?;
    write_json(&dir.join("p-scores.json"), &meta, &scores)?;

    let h2: Section<Battery<H2Key>> = Section::from(h2_battery(&table, profiles, settings.alpha));
    let bmeta = meta.with("pairing", warnsmell_core::analysis::PAIRING_STRATEGY);
    let rows: Vec<Vec<String>> = h2
        .result
        .iter()
        .flat_map(|b| &b.entries)
        .map(|e| {
            let mut row = vec![
                e.key.tool.name().to_string(),
                e.key.rule_id.clone(),
                e.key.smell_a.to_string(),
                e.key.smell_b.to_string(),
            ];
            row.extend(battery_tail(e));
            row
        })
        .collect();
    write_table(
        &dir.join("h2.csv"),
        &bmeta.with("status", &h2.status),
        &header_with(&["tool", "rule_id", "smell_a", "smell_b"]),
        &rows,
    )?;
    write_json(&dir.join("h2.json"), &bmeta, &h2)?;

    let h3: Section<Battery<H3Key>> = Section::from(h3_battery(&table, settings.alpha));
    let rows: Vec<Vec<String>> = h3
        .result
        .iter()
        .flat_map(|b| &b.entries)
        .map(|e| {
            let mut row = vec![e.key.tool_a.name().to_string(), e.key.tool_b.name().to_string(), e.key.combo.label()];
            row.extend(battery_tail(e));
            row
        })
        .collect();
    write_table(
        &dir.join("h3.csv"),
        &bmeta.with("status", &h3.status),
        &header_with(&["tool_a", "tool_b", "combo"]),
        &rows,
    )?;
    write_json(&dir.join("h3.json"), &bmeta, &h3)?;

    let tested = correlation.result.as_ref().map_or(0, |r| r.cells.len());
    let rejected = correlation.result.as_ref().map_or(0, |r| r.rejected());
    println!(
        "analyzed {} packages: correlation {tested} tested, {rejected} rejected ({}); H2 {} tested; H3 {} tested",
        profiles.len(),
        correlation.status,
        h2.result.as_ref().map_or(0, |b| b.tested()),
        h3.result.as_ref().map_or(0, |b| b.tested()),
    );
    Ok(())
}
