use std::fs;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use warnsmell_core::analysis::{Battery, PScoreReport};
use warnsmell_core::model::{Attribution, SmellCombo};
use warnsmell_core::prioritize::{
    collapse_to_rules, compare_rankers, default_p_combo, effort_curve, popt_area, rank_by_p, rank_by_severity,
    rank_items, rank_optimal, EffortCurve, H4Key, Popt, RankUnit, RankedWarning, Ranker,
};

use crate::analyze::{battery_tail, header_with, Section, ANALYSIS_DIR};
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::ingest;
use crate::output::{fmt6, read_json, write_json, write_table, Meta};

pub const RANK_DIR: &str = "rank";

fn combo_slug(combo: SmellCombo) -> String {
    combo.label().to_ascii_lowercase().replace('+', "-")
}

fn ranking_file(ranker: &Ranker) -> String {
    match ranker {
        Ranker::PBased(c) => format!("ranking-p-{}.csv", combo_slug(*c)),
        other => format!("ranking-{other}.csv"),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoptRow {
    pub ranker: Ranker,
    pub popt: Popt,
}

pub fn run(settings: &Settings) -> CliResult {
    let ingested = ingest::load(settings)?;
    let scores_path = settings.out.join(ANALYSIS_DIR).join("p-scores.json");
    if !scores_path.exists() {
        return Err(CliError::config(format!(
            "no analysis outputs under {}; run `warnsmell analyze` first",
            settings.out.join(ANALYSIS_DIR).display()
        )));
    }
    let scores: PScoreReport = read_json(&scores_path)?;
    let records = ingest::load_warnings(&ingested.dir)?;
    let attribution = Attribution::with_roots(ingested.report.roots.iter().cloned());
    let (mut items, _) = rank_items(&records, &ingested.profiles, &attribution);
    if settings.rank_unit == RankUnit::Rule {
        items = collapse_to_rules(&items);
    }
    if items.is_empty() {
        return Err(CliError::insufficient("ranking is empty: no attributable warnings"));
    }

    let mut rankings: Vec<(Ranker, Vec<RankedWarning>)> = vec![
        (Ranker::Severity, rank_by_severity(&items)),
        (Ranker::Optimal, rank_optimal(&items)),
    ];
    for combo in SmellCombo::ALL {
        if let Ok(r) = rank_by_p(&items, &scores, combo) {
            rankings.push((Ranker::PBased(combo), r));
        }
    }
    let p_default = default_p_combo(&scores);

    let dir = settings.out.join(RANK_DIR);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let unit = match settings.rank_unit {
        RankUnit::Instance => "instance",
        RankUnit::Rule => "rule",
    };
    let meta = Meta::new("rank", settings)
        .with("alpha", settings.alpha)
        .with("cutoff_mode", settings.cutoff_mode)
        .with("rank_unit", unit)
        .with("entities", items.len())
        .with("p_ranker_combo", p_default.map(|c| c.label()).unwrap_or_else(|| "none".into()));

    for (ranker, ranking) in &rankings {
        let rows: Vec<Vec<String>> = ranking
            .iter()
            .enumerate()
            .map(|(i, w)| {
                vec![
                    (i + 1).to_string(),
                    w.tool.name().to_string(),
                    w.rule_id.clone(),
                    w.package.clone().unwrap_or_default(),
                    fmt6(w.key),
                    w.bucket.to_string(),
                ]
            })
            .collect();
        write_table(
            &dir.join(ranking_file(ranker)),
            &meta.with("ranker", ranker),
            &["position", "tool", "rule_id", "package", "key", "bucket"],
            &rows,
        )?;
    }

    let compared: Vec<&Ranker> = {
        let mut v = vec![&Ranker::Severity];
        if let Some(c) = p_default {
            v.push(rankings.iter().map(|(r, _)| r).find(|r| **r == Ranker::PBased(c)).expect("ranked"));
        }
        v.push(&Ranker::Optimal);
        v
    };
    let curves: Vec<EffortCurve> = compared
        .iter()
        .map(|r| {
            let ranking = &rankings.iter().find(|(x, _)| x == *r).expect("ranked").1;
            effort_curve((*r).clone(), ranking, settings.cutoff_mode)
        })
        .collect::<Result<_, _>>()
        .map_err(CliError::insufficient)?;
    let rows: Vec<Vec<String>> = curves
        .iter()
        .flat_map(|c| {
            c.points.iter().map(move |p| {
                vec![
                    c.ranker.to_string(),
                    p.x.to_string(),
                    p.cutoff.to_string(),
                    p.medium.to_string(),
                    p.high.to_string(),
                    p.critical.to_string(),
                ]
            })
        })
        .collect();
    write_table(
        &dir.join("curves.csv"),
        &meta,
        &["ranker", "x", "cutoff", "medium", "high", "critical"],
        &rows,
    )?;
    write_json(&dir.join("curves.json"), &meta, &curves)?;

    let popts: Vec<PoptRow> = rankings
        .iter()
        .map(|(ranker, ranking)| {
            popt_area(ranking).map(|popt| PoptRow {
                ranker: ranker.clone(),
                popt,
            })
        })
        .collect::<Result<_, _>>()
        .map_err(CliError::insufficient)?;
    let rows: Vec<Vec<String>> = popts
        .iter()
        .map(|p| vec![p.ranker.to_string(), fmt6(p.popt.value), p.popt.degenerate.to_string()])
        .collect();
    write_table(&dir.join("popt.csv"), &meta, &["ranker", "popt", "degenerate"], &rows)?;
    write_json(&dir.join("popt.json"), &meta, &popts)?;

    let h4: Section<Battery<H4Key>> = match compare_rankers(&curves, settings.alpha) {
        Ok(b) => Section {
            status: "ok".into(),
            result: Some(b),
        },
        Err(e) => Section {
            status: e.to_string(),
            result: None,
        },
    };
    let rows: Vec<Vec<String>> = h4
        .result
        .iter()
        .flat_map(|b| &b.entries)
        .map(|e| {
            let mut row = vec![e.key.ranker_a.to_string(), e.key.ranker_b.to_string(), e.key.bucket.to_string()];
            row.extend(battery_tail(e));
            row
        })
        .collect();
    let hmeta = meta.with("status", &h4.status).with("pairing", "cutoffs x = 10..100");
    write_table(&dir.join("h4.csv"), &hmeta, &header_with(&["ranker_a", "ranker_b", "bucket"]), &rows)?;
    write_json(&dir.join("h4.json"), &hmeta, &h4)?;

    println!(
        "ranked {} {unit}s with {} rankers; curves for {}",
        items.len(),
        rankings.len(),
        compared.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}
