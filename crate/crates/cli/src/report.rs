use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use anyhow::Context;
use serde::Serialize;
use warnsmell_core::analysis::{Battery, CooccurrenceTable, CorrelationReport, H2Key, H3Key, TestStatus};
use warnsmell_core::ingest::SourceTool;
use warnsmell_core::model::SmellKind;
use warnsmell_core::prioritize::{EffortCurve, H4Key};
use warnsmell_core::stats::{interpret_rho, RhoBand};

use crate::analyze::{sorted_cells, Section, ANALYSIS_DIR};
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::ingest::{IngestReport, INGEST_DIR, REPORT_FILE};
use crate::output::{read_json, write_json, write_table, Meta};
use crate::rank::{PoptRow, RANK_DIR};

pub const REPORT_DIR: &str = "report";
const TOP_N: usize = 5;

#[derive(Debug, Serialize)]
struct BatterySummary {
    name: &'static str,
    status: String,
    tested: usize,
    rejected: usize,
    not_testable: usize,
    insufficient: usize,
    rejection_rate: Option<f64>,
}

fn summarize<K>(name: &'static str, section: &Section<Battery<K>>) -> BatterySummary {
    let count = |s: TestStatus| section.result.as_ref().map_or(0, |b| b.entries.iter().filter(|e| e.status == s).count());
    BatterySummary {
        name,
        status: section.status.clone(),
        tested: count(TestStatus::Tested),
        rejected: section.result.as_ref().map_or(0, |b| b.rejected()),
        not_testable: count(TestStatus::NotTestable),
        insufficient: count(TestStatus::InsufficientData),
        rejection_rate: section.result.as_ref().and_then(|b| b.rejection_rate()),
    }
}

#[derive(Debug, Serialize)]
struct TopRow {
    tool: SourceTool,
    smell: SmellKind,
    rank: usize,
    rule_id: String,
    rho: f64,
    q_value: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    packages: usize,
    warnings: BTreeMap<String, usize>,
    smells: usize,
    nco_fraction: Option<f64>,
    correlation_status: String,
    correlation_tested: usize,
    correlation_rejected: usize,
    correlation_skipped: usize,
    band_histogram: Vec<(String, usize, usize)>,
    batteries: Vec<BatterySummary>,
    top: Vec<TopRow>,
    curves: Vec<EffortCurve>,
    popt: Vec<PoptRow>,
}

fn pct(rate: Option<f64>) -> String {
    rate.map(|r| format!("{:.1}%", 100.0 * r)).unwrap_or_else(|| "n/a".into())
}

pub fn run(settings: &Settings) -> CliResult {
    let analysis = settings.out.join(ANALYSIS_DIR);
    if !analysis.join("correlation.json").exists() {
        return Err(CliError::config(format!(
            "no analysis outputs under {}; run `warnsmell analyze` first",
            analysis.display()
        )));
    }
    let ingest: IngestReport = read_json(&settings.out.join(INGEST_DIR).join(REPORT_FILE))?;
    let correlation: Section<CorrelationReport> = read_json(&analysis.join("correlation.json"))?;
    let table: CooccurrenceTable = read_json(&analysis.join("cooccurrence.json"))?;
    let h2: Section<Battery<H2Key>> = read_json(&analysis.join("h2.json"))?;
    let h3: Section<Battery<H3Key>> = read_json(&analysis.join("h3.json"))?;
    let rank = settings.out.join(RANK_DIR);
    let ranked = rank.join("curves.json").exists();
    let (curves, popt, h4): (Vec<EffortCurve>, Vec<PoptRow>, Option<Section<Battery<H4Key>>>) = if ranked {
        (
            read_json(&rank.join("curves.json"))?,
            read_json(&rank.join("popt.json"))?,
            Some(read_json(&rank.join("h4.json"))?),
        )
    } else {
        (Vec::new(), Vec::new(), None)
    };

    let cells = correlation.result.as_ref().map(sorted_cells).unwrap_or_default();
    let mut histogram: Vec<(String, usize, usize)> =
        RhoBand::ALL.iter().map(|b| (b.as_str().to_string(), 0, 0)).collect();
    for c in &cells {
        if let Ok(band) = interpret_rho(c.rho, &settings.bands) {
            let slot = &mut histogram[RhoBand::ALL.iter().position(|b| *b == band).expect("listed")];
            if c.rho < 0.0 {
                slot.2 += 1;
            } else {
                slot.1 += 1;
            }
        }
    }
    let mut top = Vec::new();
    let mut per_group: BTreeMap<(SourceTool, SmellKind), usize> = BTreeMap::new();
    for c in &cells {
        let taken = per_group.entry((c.tool, c.smell)).or_default();
        if *taken < TOP_N {
            *taken += 1;
            top.push(TopRow {
                tool: c.tool,
                smell: c.smell,
                rank: *taken,
                rule_id: c.rule_id.clone(),
                rho: c.rho,
                q_value: c.outcome.q_value,
            });
        }
    }
    top.sort_by_key(|t| (t.tool, t.smell, t.rank));

    let mut batteries = vec![summarize("H2 smell pairs", &h2), summarize("H3 tool pairs", &h3)];
    if let Some(h4) = &h4 {
        batteries.push(summarize("H4 rankers", h4));
    }
    let summary = Summary {
        packages: ingest.packages,
        warnings: ingest.warnings.clone(),
        smells: ingest.smells,
        nco_fraction: table.nco_fraction(),
        correlation_status: correlation.status.clone(),
        correlation_tested: cells.len(),
        correlation_rejected: cells.iter().filter(|c| c.outcome.rejected).count(),
        correlation_skipped: correlation.result.as_ref().map_or(0, |r| r.skipped.len()),
        band_histogram: histogram,
        batteries,
        top,
        curves,
        popt,
    };

    let text = render(&summary, settings);
    let dir = settings.out.join(REPORT_DIR);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    fs::write(dir.join("summary.txt"), &text)?;
    let meta = Meta::new("report", settings).with("alpha", settings.alpha);
    write_json(&dir.join("summary.json"), &meta, &summary)?;
    let rows: Vec<Vec<String>> = summary
        .band_histogram
        .iter()
        .map(|(b, pos, neg)| vec![b.clone(), pos.to_string(), neg.to_string()])
        .collect();
    write_table(&dir.join("band-histogram.csv"), &meta, &["band", "positive", "negative"], &rows)?;
    print!("{text}");
    Ok(())
}

fn render(s: &Summary, settings: &Settings) -> String {
    let mut out = String::new();
    let total: usize = s.warnings.values().sum();
    let per_tool: Vec<String> = s.warnings.iter().map(|(t, n)| format!("{t} {n}")).collect();
    let _ = writeln!(out, "warnsmell summary");
    let _ = writeln!(out, "packages           {}", s.packages);
    let _ = writeln!(out, "warning instances  {total} ({})", per_tool.join(", "));
    let _ = writeln!(out, "smell instances    {}", s.smells);
    let nco = s.nco_fraction.map(|f| format!("{f:.2}")).unwrap_or_else(|| "n/a".into());
    let _ = writeln!(out, "NCO fraction       {nco}");
    let _ = writeln!(out);

    let _ = writeln!(out, "Correlation (Spearman, BH at alpha {})", settings.alpha);
    if s.correlation_status != "ok" {
        let _ = writeln!(out, "  {}", s.correlation_status);
    }
    let rate = (s.correlation_tested > 0).then(|| s.correlation_rejected as f64 / s.correlation_tested as f64);
    let _ = writeln!(
        out,
        "  tested {}, rejected {} ({}), skipped {}",
        s.correlation_tested,
        s.correlation_rejected,
        pct(rate),
        s.correlation_skipped
    );
    let _ = writeln!(out, "  band       positive  negative");
    for (band, pos, neg) in &s.band_histogram {
        let _ = writeln!(out, "  {band:<9}  {pos:>8}  {neg:>8}");
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "Batteries (BH within each)");
    for b in &s.batteries {
        let _ = writeln!(
            out,
            "  {:<15} tested {}, rejected {} ({}), not testable {}, insufficient {}",
            b.name,
            b.tested,
            b.rejected,
            pct(b.rejection_rate),
            b.not_testable,
            b.insufficient
        );
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "Top {TOP_N} rules per tool and smell");
    let _ = writeln!(out, "  {:<10}  {:<5}  {:>4}  {:<28}  {:>9}  {:>9}", "tool", "smell", "rank", "rule", "rho", "q");
    for t in &s.top {
        let _ = writeln!(
            out,
            "  {:<10}  {:<5}  {:>4}  {:<28}  {:>9.4}  {:>9.4}",
            t.tool.name(),
            t.smell.to_string(),
            t.rank,
            t.rule_id,
            t.rho,
            t.q_value
        );
    }
    if !s.curves.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "Effort curves (Medium/High/Critical captured)");
        let _ = writeln!(out, "  {:<12}  {:>14}  {:>14}  {:>14}", "ranker", "x=10", "x=50", "x=100");
        for c in &s.curves {
            let at = |x: u32| {
                let p = c.points.iter().find(|p| p.x == x).expect("ten cutoffs");
                format!("{}/{}/{}", p.medium, p.high, p.critical)
            };
            let _ = writeln!(out, "  {:<12}  {:>14}  {:>14}  {:>14}", c.ranker.to_string(), at(10), at(50), at(100));
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "Popt");
        for p in &s.popt {
            let flag = if p.popt.degenerate { " (degenerate)" } else { "" };
            let _ = writeln!(out, "  {:<12}  {:.4}{flag}", p.ranker.to_string(), p.popt.value);
        }
    }
    out
}
