//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test -p warnsmell-cli --test acceptance`. Set
//! `UPDATE_GOLDEN=1` to rewrite the golden files of the end-to-end run.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use warnsmell_core::analysis::{cooccurrence_table, correlation_matrix, h2_battery, p_scores, CooccurrenceTable, H2Key};
use warnsmell_core::ingest::{parse_arcan, parse_report, ArcanOptions, SeverityMap, SourceTool, WarningRecord};
use warnsmell_core::model::{build_profiles, Attribution, PackageProfile, RuleKey, SmellCombo, SmellInstance, SmellKind};
use warnsmell_core::prioritize::{
    capture_profile, compare_rankers, effort_curve, popt_area, rank_optimal, Bucket, BucketWeights, CutoffMode,
    EffortCurve, RankItem, RankedWarning, Ranker,
};
use warnsmell_core::stats::{bh_adjust, spearman_rho, wilcoxon_signed_rank, StatsError};
use warnsmell_core::synth::{
    generate, oracle_counts, synth_attribution, ComboWeight, PlantRule, PlantSpec,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "statistics oracles", budget: Duration::from_secs(30), run: statistics_oracles },
        Criterion { id: 2, name: "planted-correlation recovery", budget: Duration::from_secs(60), run: planted_recovery },
        Criterion { id: 3, name: "conservation invariants", budget: Duration::from_secs(60), run: conservation },
        Criterion { id: 4, name: "optimal-ranker dominance", budget: Duration::from_secs(60), run: dominance },
        Criterion { id: 5, name: "end-to-end golden run", budget: Duration::from_secs(10), run: golden_run },
        Criterion { id: 6, name: "battery sanity", budget: Duration::from_secs(60), run: battery_sanity },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > c.budget => Err(format!("{detail}; over the {:?} budget", c.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{}] {} ({:.1}s): {detail}", c.id, c.name, took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {} ({:.1}s): {detail}", c.id, c.name, took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- criterion 1

/// Average ranks by sorting indices and sharing the mean position over runs.
fn oracle_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = shared;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// `P(min(W+, W-) <= w)` over all 2^n sign assignments of ranks 1..=n.
fn enumerated_wilcoxon_p(n: usize, w: f64) -> f64 {
    let total = n * (n + 1) / 2;
    let mut hits = 0u64;
    for mask in 0u32..(1 << n) {
        let plus: usize = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).sum();
        if (plus.min(total - plus) as f64) <= w {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

/// Sort ascending, reject up to the largest `k` with `p_(k) <= k alpha / m`,
/// and take running minima of `m p_(j) / j` from the top.
fn hand_bh(p: &[f64], alpha: f64) -> (Vec<f64>, Vec<bool>) {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].partial_cmp(&p[b]).unwrap().then(a.cmp(&b)));
    let mut k = 0;
    for (i, &j) in order.iter().enumerate() {
        if p[j] <= (i + 1) as f64 * alpha / m as f64 {
            k = i + 1;
        }
    }
    let mut q = vec![0.0; m];
    let mut running = 1.0f64;
    for i in (0..m).rev() {
        let j = order[i];
        running = running.min(m as f64 * p[j] / (i + 1) as f64).min(1.0);
        q[j] = running;
    }
    let mut rejected = vec![false; m];
    for &j in &order[..k] {
        rejected[j] = true;
    }
    (q, rejected)
}

fn statistics_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let mut compared = 0;
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let n = rng.random_range(3..80);
        let tied = case % 2 == 0;
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..n)
                .map(|_| if tied { rng.random_range(0..6) as f64 } else { rng.random::<f64>() * 100.0 - 50.0 })
                .collect()
        };
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        let expected = pearson(&oracle_ranks(&x), &oracle_ranks(&y));
        match (spearman_rho(&x, &y), expected) {
            (Ok(got), Some(want)) => {
                worst = worst.max((got.statistic - want).abs());
                compared += 1;
            }
            (Err(StatsError::ConstantInput), None) => {}
            (got, want) => return Err(format!("spearman case {case}: {got:?} vs oracle {want:?}")),
        }
    }
    check(worst <= 1e-12, || format!("spearman deviates by {worst:e}"))?;

    let mut wilcoxon_cases = 0;
    let mut wilcoxon_worst = 0.0f64;
    for n in 1..=10usize {
        let magnitudes: Vec<f64> = {
            let mut m: Vec<f64> = (1..=n).map(|i| i as f64 + rng.random::<f64>() * 0.5).collect();
            m.shuffle(&mut rng);
            m
        };
        let mut sorted = magnitudes.clone();
        sorted.sort_by(f64::total_cmp);
        for mask in 0u32..(1 << n) {
            let d: Vec<f64> = magnitudes
                .iter()
                .enumerate()
                .map(|(i, m)| if mask >> i & 1 == 1 { *m } else { -m })
                .collect();
            let zeros = vec![0.0; n];
            let got = wilcoxon_signed_rank(&d, &zeros).map_err(|e| format!("wilcoxon n={n}: {e}"))?;
            let plus: usize = d
                .iter()
                .filter(|v| **v > 0.0)
                .map(|v| sorted.iter().position(|s| s == &v.abs()).unwrap() + 1)
                .sum();
            let w = plus.min(n * (n + 1) / 2 - plus) as f64;
            let want = enumerated_wilcoxon_p(n, w);
            wilcoxon_worst = wilcoxon_worst.max((got.p_value - want).abs());
            check(got.statistic == w, || format!("wilcoxon n={n} mask={mask}: W {} vs {w}", got.statistic))?;
            wilcoxon_cases += 1;
        }
    }
    check(wilcoxon_worst <= 1e-12, || format!("wilcoxon p deviates by {wilcoxon_worst:e}"))?;

    let mut bh_worst = 0.0f64;
    for case in 0..200 {
        let m = rng.random_range(1..60);
        let alpha = [0.01, 0.05, 0.1][case % 3];
        let p: Vec<f64> = (0..m)
            .map(|_| {
                let raw: f64 = rng.random::<f64>().powi(3);
                if case % 4 == 0 { (raw * 50.0).round() / 50.0 } else { raw }
            })
            .collect();
        let got = bh_adjust(&p, alpha).map_err(|e| format!("bh case {case}: {e}"))?;
        let (q, rejected) = hand_bh(&p, alpha);
        for (i, g) in got.iter().enumerate() {
            bh_worst = bh_worst.max((g.q_value - q[i]).abs());
            check(g.rejected == rejected[i], || format!("bh case {case}: rejection set differs at {i}"))?;
        }
    }
    check(bh_worst <= 1e-12, || format!("bh q deviates by {bh_worst:e}"))?;

    Ok(format!(
        "spearman {compared} vectors max |diff| {worst:.1e}; wilcoxon {wilcoxon_cases} sign patterns n<=10 max |diff| {wilcoxon_worst:.1e}; bh 200 vectors max |diff| {bh_worst:.1e}, rejection sets equal"
    ))
}

// ---------------------------------------------------------------- criterion 2

fn profiles_of(spec: &PlantSpec) -> Vec<PackageProfile> {
    let corpus = generate(spec).expect("valid plant spec");
    build_profiles(&corpus.warnings, &corpus.smells, &synth_attribution()).expect("synthetic records resolve")
}

fn planted_recovery() -> Outcome {
    const SEEDS: u64 = 50;
    const N: usize = 500;
    const TOLERANCE: f64 = 0.07;
    let targets = [0.0, 0.3, -0.3, 0.5, -0.5, 0.8, -0.8];
    let planted = RuleKey::new(SourceTool::Pmd, "Planted");
    let mut lines = Vec::new();
    for &target in &targets {
        let measured: Vec<f64> = (0..SEEDS)
            .into_par_iter()
            .map(|seed| {
                let profiles = profiles_of(&PlantSpec::calibration(seed, N, target));
                let x: Vec<f64> = profiles.iter().map(|p| p.count_of(&planted) as f64).collect();
                let y: Vec<f64> = profiles.iter().map(|p| p.smell_count(SmellKind::CD) as f64).collect();
                spearman_rho(&x, &y).map(|o| o.statistic).unwrap_or(0.0)
            })
            .collect();
        let mean = measured.iter().sum::<f64>() / SEEDS as f64;
        let within = measured.iter().filter(|r| (*r - target).abs() <= TOLERANCE).count();
        check((mean - target).abs() <= TOLERANCE, || format!("target {target}: mean rho {mean:.4}"))?;
        check(within * 10 >= 9 * SEEDS as usize, || {
            format!("target {target}: only {within}/{SEEDS} seeds within {TOLERANCE}")
        })?;
        lines.push(format!("{target:+.1}->{mean:+.3} ({within}/{SEEDS})"));
    }

    let rates: Vec<(usize, usize)> = (0..SEEDS)
        .into_par_iter()
        .map(|seed| {
            let profiles = profiles_of(&PlantSpec::null(1000 + seed, N, PlantSpec::standard_rules(3.0)));
            let report = correlation_matrix(&profiles, 0.05).expect("enough packages");
            (report.rejected(), report.cells.len())
        })
        .collect();
    let rejected: usize = rates.iter().map(|r| r.0).sum();
    let tested: usize = rates.iter().map(|r| r.1).sum();
    let per_seed: Vec<f64> = rates.iter().map(|(r, t)| *r as f64 / *t as f64).collect();
    let mean = per_seed.iter().sum::<f64>() / SEEDS as f64;
    let sd = (per_seed.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (SEEDS - 1) as f64).sqrt();
    let upper = mean + 1.96 * sd / (SEEDS as f64).sqrt();
    check(upper <= 0.10, || format!("null rejection rate {mean:.4}, 95% upper bound {upper:.4}"))?;
    Ok(format!(
        "{}; null {rejected}/{tested} rejected, rate {mean:.4} (95% upper {upper:.4})",
        lines.join(", ")
    ))
}

// ---------------------------------------------------------------- criterion 3

fn mini_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/mini-corpus")
}

const PROJECTS: [&str; 3] = ["alpha", "beta", "gamma"];

fn read_mini_corpus() -> Result<(Vec<WarningRecord>, Vec<SmellInstance>), String> {
    let map = SeverityMap::default();
    let mut warnings = Vec::new();
    let mut smells = Vec::new();
    for project in PROJECTS {
        let dir = mini_corpus().join(project);
        let read = |name: &str| std::fs::read(dir.join(name)).map_err(|e| format!("{project}/{name}: {e}"));
        for (tool, name) in [
            (SourceTool::Checkstyle, "checkstyle-result.xml"),
            (SourceTool::Pmd, "pmd.xml"),
            (SourceTool::FindBugs, "findbugs.xml"),
            (SourceTool::SonarQube, "sonarqube-issues.json"),
        ] {
            warnings.extend(parse_report(tool, &read(name)?, &map).map_err(|e| format!("{project}/{name}: {e}"))?);
        }
        smells.extend(parse_arcan(&read("arcan-smells.csv")?, &ArcanOptions::default()).map_err(|e| e.to_string())?);
    }
    Ok((warnings, smells))
}

/// Checks table totals against raw per-rule record counts and P sums.
fn conserved(
    label: &str,
    warnings: &[WarningRecord],
    smells: &[SmellInstance],
    attribution: &Attribution,
) -> Result<(), String> {
    let profiles = build_profiles(warnings, smells, attribution).map_err(|e| format!("{label}: {e}"))?;
    let table = cooccurrence_table(&profiles);
    let mut per_rule: BTreeMap<RuleKey, u64> = BTreeMap::new();
    for w in warnings {
        *per_rule.entry(RuleKey::of(w)).or_default() += 1;
    }
    check(table.rules().len() == per_rule.len(), || format!("{label}: rule sets differ"))?;
    for (rule, n) in &per_rule {
        let by_combo: u64 = SmellCombo::ALL.iter().map(|c| table.get(rule, *c)).sum();
        check(by_combo == *n && table.rule_total(rule) == *n, || {
            format!("{label}: {rule:?} has {n} records but {by_combo} attributed")
        })?;
    }
    check(table == oracle_counts(warnings, smells, attribution), || {
        format!("{label}: table differs from brute-force recount")
    })?;
    p_sums_to_one(label, &table)
}

fn p_sums_to_one(label: &str, table: &CooccurrenceTable) -> Result<(), String> {
    let mut sums: BTreeMap<(SourceTool, SmellCombo), f64> = BTreeMap::new();
    for s in p_scores(table).scores {
        *sums.entry((s.tool, s.combo)).or_default() += s.p;
    }
    for ((tool, combo), s) in sums {
        check((s - 1.0).abs() <= 1e-12, || format!("{label}: P over {tool} in {combo} sums to {s}"))?;
    }
    Ok(())
}

fn conservation() -> Outcome {
    let specs: Vec<(String, PlantSpec)> = (0..20u64)
        .flat_map(|seed| {
            [
                (format!("demo/{seed}"), PlantSpec::demo(seed, 120)),
                (format!("null/{seed}"), PlantSpec::null(seed, 120, PlantSpec::standard_rules(2.0))),
                (format!("calibration/{seed}"), PlantSpec::calibration(seed, 120, 0.5)),
            ]
        })
        .collect();
    specs.par_iter().try_for_each(|(label, spec)| {
        let corpus = generate(spec).map_err(|e| e.to_string())?;
        conserved(label, &corpus.warnings, &corpus.smells, &synth_attribution())
    })?;
    let (warnings, smells) = read_mini_corpus()?;
    conserved("mini-corpus", &warnings, &smells, &synth_attribution())?;
    Ok(format!(
        "{} generated fixtures and the mini-corpus ({} records): counts exact, P sums within 1e-12",
        specs.len(),
        warnings.len()
    ))
}

// ---------------------------------------------------------------- criterion 4

fn random_items(rng: &mut ChaCha8Rng, n: usize) -> Vec<RankItem> {
    (0..n)
        .map(|i| RankItem {
            tool: SourceTool::ALL[rng.random_range(0..4)],
            rule_id: format!("r{}", rng.random_range(0..12)),
            package: Some(format!("p{i}")),
            severity: rng.random_range(1..=5),
            combo: SmellCombo::ALL[rng.random_range(0..8)],
            rule_count: rng.random_range(1..20),
        })
        .collect()
}

fn for_each_permutation<T: Clone>(items: &mut Vec<T>, k: usize, f: &mut impl FnMut(&[T]) -> Result<(), String>) -> Result<(), String> {
    if k <= 1 {
        return f(items);
    }
    for i in 0..k {
        for_each_permutation(items, k - 1, f)?;
        let j = if k.is_multiple_of(2) { i } else { 0 };
        items.swap(j, k - 1);
    }
    Ok(())
}

fn dominates(best: &[u64], other: &[u64]) -> bool {
    best.iter().zip(other).all(|(b, o)| b >= o)
}

fn dominance() -> Outcome {
    let weights = BucketWeights::default();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut permutations = 0u64;
    for n in 1..=7 {
        for _ in 0..4 {
            let items = random_items(&mut rng, n);
            let optimal = rank_optimal(&items);
            let best = capture_profile(&optimal, &weights);
            let popt = popt_area(&optimal).map_err(|e| e.to_string())?;
            check(popt.value == 1.0, || format!("popt(optimal) = {} at n = {n}", popt.value))?;
            let mut order = optimal.clone();
            for_each_permutation(&mut order, n, &mut |perm: &[RankedWarning]| {
                permutations += 1;
                check(dominates(&best, &capture_profile(perm, &weights)), || {
                    format!("a permutation of {n} beats optimal")
                })
            })?;
        }
    }
    let items = random_items(&mut rng, 200);
    let optimal = rank_optimal(&items);
    let best = capture_profile(&optimal, &weights);
    let best_curve = effort_curve(Ranker::Optimal, &optimal, CutoffMode::Ceiling).map_err(|e| e.to_string())?;
    check(popt_area(&optimal).map_err(|e| e.to_string())?.value == 1.0, || "popt(optimal) != 1 at n = 200".into())?;
    for _ in 0..1000 {
        let mut other = optimal.clone();
        other.shuffle(&mut rng);
        check(dominates(&best, &capture_profile(&other, &weights)), || "a random ranking beats optimal".into())?;
        let curve = effort_curve(Ranker::Named("random".into()), &other, CutoffMode::Ceiling).map_err(|e| e.to_string())?;
        let weigh = |p: &warnsmell_core::prioritize::CurvePoint| {
            Bucket::SCORED.iter().map(|b| weights.weight(*b) * p.count(*b)).sum::<u64>()
        };
        for (b, o) in best_curve.points.iter().zip(&curve.points) {
            check(weigh(b) >= weigh(o), || format!("random curve beats optimal at x = {}", b.x))?;
        }
    }
    Ok(format!("{permutations} permutations for n <= 7 and 1000 random rankings at n = 200; popt(optimal) = 1"))
}

// ---------------------------------------------------------------- criterion 5

const GOLDEN_FILES: [&str; 9] = [
    "ingest/ingest-report.json",
    "analysis/correlation.csv",
    "analysis/cooccurrence.csv",
    "analysis/p-scores.csv",
    "analysis/h2.csv",
    "rank/curves.csv",
    "rank/popt.csv",
    "rank/h4.csv",
    "report/summary.txt",
];

fn warnsmell(args: &[&str], out: &Path) -> Result<String, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_warnsmell"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--deterministic")
        .output()
        .map_err(|e| e.to_string())?;
    if !output.status.success() {
        return Err(format!(
            "warnsmell {} exited {:?}: {}",
            args.join(" "),
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&output.stdout).into_owned())
}

fn pipeline(out: &Path) -> Result<(), String> {
    let corpus = mini_corpus();
    warnsmell(&["ingest", corpus.to_str().unwrap()], out)?;
    warnsmell(&["analyze"], out)?;
    warnsmell(&["rank"], out)?;
    warnsmell(&["report"], out)?;
    Ok(())
}

fn tree(root: &Path) -> Result<BTreeMap<PathBuf, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let bytes = std::fs::read(&path).map_err(|e| e.to_string())?;
                files.insert(path.strip_prefix(root).unwrap().to_path_buf(), bytes);
            }
        }
    }
    Ok(files)
}

fn golden_run() -> Outcome {
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (first, second) = (work.path().join("first"), work.path().join("second"));
    pipeline(&first)?;
    pipeline(&second)?;
    let (a, b) = (tree(&first)?, tree(&second)?);
    check(a.keys().eq(b.keys()), || "runs wrote different file sets".into())?;
    for (path, bytes) in &a {
        check(&b[path] == bytes, || format!("{} differs between runs", path.display()))?;
    }

    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for name in GOLDEN_FILES {
        let produced = a.get(Path::new(name)).ok_or_else(|| format!("{name} was not written"))?;
        let golden = golden_dir.join(name);
        if update {
            std::fs::create_dir_all(golden.parent().unwrap()).map_err(|e| e.to_string())?;
            std::fs::write(&golden, produced).map_err(|e| e.to_string())?;
        }
        let expected = std::fs::read(&golden).map_err(|e| format!("{}: {e}", golden.display()))?;
        check(&expected == produced, || format!("{name} differs from its golden copy"))?;
    }

    let summary = String::from_utf8_lossy(&a[Path::new("report/summary.txt")]).into_owned();
    let nco = summary
        .lines()
        .find_map(|l| l.strip_prefix("NCO fraction"))
        .map(str::trim)
        .ok_or("summary has no NCO fraction")?;
    check(nco.len() == 4 && nco.parse::<f64>().is_ok(), || format!("NCO fraction `{nco}` is not 2 decimals"))?;
    check(summary.contains("Top 5 rules per tool and smell"), || "summary has no top-5 table".into())?;

    let curves: Vec<EffortCurve> = read_data(&first.join("rank/curves.json"))?;
    check(curves.len() == 3, || format!("{} effort curves, expected 3", curves.len()))?;
    let last = curves[0].last();
    check(curves.iter().all(|c| c.last() == last), || "x = 100 rows differ".into())?;
    Ok(format!(
        "{} files byte-identical across two runs, {} golden files match, NCO fraction {nco}, x = 100 row {}/{}/{}",
        a.len(),
        GOLDEN_FILES.len(),
        last.medium,
        last.high,
        last.critical
    ))
}

fn read_data<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    serde_json::from_value(doc["data"].take()).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- criterion 6

/// CD-only and UD-only packages; `Planted` fires only in CD packages.
fn h2_extreme_spec(seed: u64) -> PlantSpec {
    let mut rules = PlantSpec::standard_rules(2.0);
    rules.push(PlantRule::new(SourceTool::Pmd, "Planted", "2", 4.0));
    let p_profile = SmellCombo::ALL
        .into_iter()
        .map(|combo| ComboWeight {
            tool: SourceTool::Pmd,
            rule_id: "Planted".into(),
            combo,
            weight: if combo.contains(SmellKind::UD) { 0.0 } else { 1.0 },
        })
        .collect();
    let mut spec = PlantSpec::null(seed, 120, rules);
    spec.combo_mix = [0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0];
    spec.p_profile = p_profile;
    spec
}

fn tie_shuffled(ranking: &[RankedWarning], rng: &mut ChaCha8Rng) -> Vec<RankedWarning> {
    let mut out = ranking.to_vec();
    let mut start = 0;
    while start < out.len() {
        let end = start + out[start..].iter().take_while(|w| w.bucket == out[start].bucket).count();
        out[start..end].shuffle(rng);
        start = end;
    }
    out
}

fn battery_sanity() -> Outcome {
    const SEEDS: u64 = 50;
    let planted = |k: &H2Key| k.rule_id == "Planted" && (k.smell_a, k.smell_b) == (SmellKind::CD, SmellKind::UD);
    let extreme = h2_battery_of(&h2_extreme_spec(1))?;
    let entry = extreme.entries.iter().find(|e| planted(&e.key)).ok_or("planted H2 pair missing")?;
    check(entry.rejected(), || format!("planted H2 pair not rejected: {:?}", entry.adjusted))?;

    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let items = random_items(&mut rng, 200);
    let optimal = rank_optimal(&items);
    let reversed: Vec<RankedWarning> = optimal.iter().rev().cloned().collect();
    let curves = [
        effort_curve(Ranker::Optimal, &optimal, CutoffMode::Ceiling).map_err(|e| e.to_string())?,
        effort_curve(Ranker::Named("reversed".into()), &reversed, CutoffMode::Ceiling).map_err(|e| e.to_string())?,
    ];
    let h4 = compare_rankers(&curves, 0.05).map_err(|e| e.to_string())?;
    let critical = h4.entries.iter().find(|e| e.key.bucket == Bucket::Critical).ok_or("no Critical comparison")?;
    check(critical.rejected(), || "optimal vs reversed not rejected for Critical".into())?;

    let h2_null: Vec<usize> = (0..SEEDS)
        .into_par_iter()
        .map(|seed| {
            h2_battery_of(&PlantSpec::null(2000 + seed, 120, PlantSpec::standard_rules(3.0)))
                .map(|b| b.rejected())
                .unwrap_or(usize::MAX)
        })
        .collect();
    let h2_clean = h2_null.iter().filter(|r| **r == 0).count();
    check(h2_clean * 10 >= 9 * SEEDS as usize, || format!("H2 null clean in only {h2_clean}/{SEEDS} seeds"))?;

    let mut h4_clean = 0;
    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        let items = random_items(&mut rng, 200);
        let optimal = rank_optimal(&items);
        let shuffled = tie_shuffled(&optimal, &mut rng);
        let curves = [
            effort_curve(Ranker::Optimal, &optimal, CutoffMode::Ceiling).map_err(|e| e.to_string())?,
            effort_curve(Ranker::Named("tie-shuffled".into()), &shuffled, CutoffMode::Ceiling)
                .map_err(|e| e.to_string())?,
        ];
        if compare_rankers(&curves, 0.05).map_err(|e| e.to_string())?.rejected() == 0 {
            h4_clean += 1;
        }
    }
    check(h4_clean * 10 >= 9 * SEEDS as usize, || format!("H4 null clean in only {h4_clean}/{SEEDS} seeds"))?;
    Ok(format!(
        "planted H2 q = {:.2e}, optimal vs reversed Critical q = {:.2e}; nulls clean in H2 {h2_clean}/{SEEDS}, H4 {h4_clean}/{SEEDS}",
        entry.adjusted.map_or(f64::NAN, |a| a.q_value),
        critical.adjusted.map_or(f64::NAN, |a| a.q_value)
    ))
}

fn h2_battery_of(spec: &PlantSpec) -> Result<warnsmell_core::analysis::Battery<H2Key>, String> {
    let profiles = profiles_of(spec);
    h2_battery(&cooccurrence_table(&profiles), &profiles, 0.05).map_err(|e| e.to_string())
}
