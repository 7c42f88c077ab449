//! Seeded synthetic corpora with planted rank correlations, smell
//! combinations and per-combo rule frequencies, plus writers for the native
//! report formats and a brute-force co-occurrence recount.

mod emit;
mod oracle;
mod spec;

pub use emit::{emit_arcan, emit_checkstyle, emit_findbugs, emit_pmd, emit_sonarqube, write_corpus, REPORT_FILES};
pub use oracle::oracle_counts;
pub use spec::{ComboWeight, PlantRule, PlantSpec, PlantedRho};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::ContinuousCDF;
use serde::{Deserialize, Serialize};

use crate::ingest::{normalize_severity, NativeSeverity, SeverityMap, SourceTool, WarningRecord};
use crate::model::{Attribution, Granularity, SmellCombo, SmellInstance, SmellKind};
use crate::stats::standard_normal;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("invalid plant spec: {0}")]
    InvalidSpec(String),
}

/// Source root under which generated file paths live.
pub const SOURCE_ROOT: &str = "src/main/java";

/// Attribution that resolves every generated record.
pub fn synth_attribution() -> Attribution {
    Attribution::with_roots([SOURCE_ROOT])
}

const CLASSES_PER_PACKAGE: usize = 3;

// One ChaCha stream per purpose so adding draws to one never shifts another.
const STREAM_COMBOS: u64 = 1;
const STREAM_SMELLS: u64 = 2;
const STREAM_RULES: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub packages: Vec<String>,
    pub combos: Vec<SmellCombo>,
    pub warnings: Vec<WarningRecord>,
    pub smells: Vec<SmellInstance>,
}

/// Smallest `k` with `P(X <= k) >= u` for `X ~ Poisson(lambda)`.
pub(crate) fn poisson_quantile(u: f64, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let cap = (lambda + 20.0 * lambda.sqrt() + 50.0) as u64;
    let mut k = 0u64;
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    while cdf < u && k < cap {
        k += 1;
        pmf *= lambda / k as f64;
        cdf += pmf;
    }
    k
}

/// Pearson correlation of the latent normals that yields Spearman `rho`.
pub(crate) fn latent_correlation(rho: f64) -> f64 {
    2.0 * (std::f64::consts::PI * rho / 6.0).sin()
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn package_name(prefix: &str, i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len().max(4);
    format!("{prefix}.p{i:0width$}")
}

fn record_for(
    rule: &PlantRule,
    native: NativeSeverity,
    map: &SeverityMap,
    package: &str,
    k: usize,
) -> WarningRecord {
    let class = format!("C{}", k % CLASSES_PER_PACKAGE);
    let dir = package.replace('.', "/");
    let rooted = format!("{SOURCE_ROOT}/{dir}/{class}.java");
    let fq = format!("{package}.{class}");
    let line = Some(k as u32 + 1);
    let normalized = normalize_severity(native, map);
    let build = |category: &str, path: String, fq: Option<String>| {
        WarningRecord::new(rule.rule_id.clone(), category, native, normalized, Some(path), line, fq)
            .expect("generated records are valid")
    };
    match rule.tool {
        SourceTool::Checkstyle => build("synth", rooted, None),
        SourceTool::Pmd => build("synth", rooted, Some(fq)),
        SourceTool::FindBugs => build("SYNTH", format!("{dir}/{class}.java"), Some(fq)),
        SourceTool::SonarQube => build("CODE_SMELL", rooted, None).with_remediation(Some("5min".into())),
    }
}

/// Draws a corpus. Per package: a combo from `combo_mix`, then for every smell
/// kind a latent normal `z` (count `1 + Poisson quantile of Φ(z)` when the
/// combo holds the kind, else 0), then for every rule a count. A rule planted
/// against smell `s` with `|ρ| < 1` couples its latent, at the Pearson
/// correlation matching Spearman ρ, to the normal score of the package's rank
/// by `(count of s, z_s)`; `ρ = 1` sets the count to `2y` and
/// `ρ = -1` to `2(max y - y)`. Other rules draw independently.
pub fn generate(spec: &PlantSpec) -> Result<Corpus, SynthError> {
    spec.validate()?;
    let n = spec.n_packages;
    let map = SeverityMap::default();

    let mut combo_rng = stream(spec.seed, STREAM_COMBOS);
    let cumulative: Vec<f64> = spec
        .combo_mix
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    let total = cumulative[7];
    let last_positive = spec.combo_mix.iter().rposition(|&w| w > 0.0).expect("mix sums to 1");
    let combos: Vec<SmellCombo> = (0..n)
        .map(|_| {
            let u = combo_rng.random::<f64>() * total;
            // the first bin with u < cumulative weight never has weight 0
            let idx = cumulative.iter().position(|&c| u < c).unwrap_or(last_positive);
            SmellCombo::ALL[idx]
        })
        .collect();

    let normal = standard_normal();
    let mut smell_rng = stream(spec.seed, STREAM_SMELLS);
    let mut latent_smell = vec![[0.0f64; 3]; n];
    let mut smell_counts = vec![[0u64; 3]; n];
    for i in 0..n {
        for (j, kind) in SmellKind::ALL.iter().enumerate() {
            let z: f64 = smell_rng.sample(StandardNormal);
            latent_smell[i][j] = z;
            if combos[i].contains(*kind) {
                smell_counts[i][j] = 1 + poisson_quantile(normal.cdf(z), spec.smell_rate);
            }
        }
    }
    // Normal scores of packages ordered by (count, latent): monotone in the
    // observed count, continuous where counts tie (including absent smells).
    let mut coupling = vec![[0.0f64; 3]; n];
    for j in 0..3 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            smell_counts[a][j]
                .cmp(&smell_counts[b][j])
                .then(latent_smell[a][j].total_cmp(&latent_smell[b][j]))
        });
        for (rank, &i) in order.iter().enumerate() {
            coupling[i][j] = normal.inverse_cdf((rank as f64 + 0.5) / n as f64);
        }
    }
    let max_smell: [u64; 3] =
        std::array::from_fn(|j| smell_counts.iter().map(|c| c[j]).max().unwrap_or(0));

    let planted: BTreeMap<(SourceTool, &str), (usize, f64)> = spec
        .target_rho
        .iter()
        .map(|p| {
            let j = SmellKind::ALL.iter().position(|k| *k == p.smell).expect("known kind");
            ((p.tool, p.rule_id.as_str()), (j, p.rho))
        })
        .collect();
    let natives: Vec<NativeSeverity> = spec
        .rules
        .iter()
        .map(|r| NativeSeverity::parse(r.tool, &r.severity).expect("validated"))
        .collect();

    let packages: Vec<String> = (0..n).map(|i| package_name(&spec.package_prefix, i, n)).collect();
    let mut rule_rng = stream(spec.seed, STREAM_RULES);
    let mut warnings = Vec::new();
    for i in 0..n {
        for (rule, &native) in spec.rules.iter().zip(&natives) {
            let e: f64 = rule_rng.sample(StandardNormal);
            let lambda = rule.rate * spec.weight(rule.tool, &rule.rule_id, combos[i]);
            let count = match planted.get(&(rule.tool, rule.rule_id.as_str())) {
                Some(&(j, 1.0)) => 2 * smell_counts[i][j],
                Some(&(j, -1.0)) => 2 * (max_smell[j] - smell_counts[i][j]),
                Some(&(j, rho)) => {
                    let r = latent_correlation(rho);
                    let latent = r * coupling[i][j] + (1.0 - r * r).sqrt() * e;
                    poisson_quantile(normal.cdf(latent), lambda)
                }
                None => poisson_quantile(normal.cdf(e), lambda),
            };
            for k in 0..count as usize {
                warnings.push(record_for(rule, native, &map, &packages[i], k));
            }
        }
    }

    let mut smells = Vec::new();
    for i in 0..n {
        for (j, &kind) in SmellKind::ALL.iter().enumerate() {
            for k in 0..smell_counts[i][j] as usize {
                let (granularity, entity) = if k % 2 == 0 {
                    (Granularity::Package, packages[i].clone())
                } else {
                    (Granularity::Class, format!("{}.C{}", packages[i], k % CLASSES_PER_PACKAGE))
                };
                smells.push(SmellInstance::new(kind, granularity, [entity]).expect("non-empty entity"));
            }
        }
    }

    Ok(Corpus {
        packages,
        combos,
        warnings,
        smells,
    })
}
