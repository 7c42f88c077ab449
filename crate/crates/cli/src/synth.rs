use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use warnsmell_core::analysis::cooccurrence_table;
use warnsmell_core::model::build_profiles_lenient;
use warnsmell_core::synth::{generate, synth_attribution, write_corpus, PlantSpec, REPORT_FILES};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{write_json, Meta};

pub const SPEC_FILE: &str = "plant-spec.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Expected counts a later ingest of the written reports must reproduce.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub files: Vec<String>,
    pub packages: usize,
    pub warnings: std::collections::BTreeMap<String, usize>,
    pub smells: usize,
    pub cooccurrence_total: u64,
}

pub fn run(spec_file: Option<&Path>, settings: &Settings) -> CliResult {
    let spec = match spec_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read plant spec {}: {e}", path.display())))?;
            serde_json::from_str::<PlantSpec>(&text)
                .map_err(|e| CliError::config(format!("plant spec {}: {e}", path.display())))?
        }
        None => PlantSpec::demo(settings.seed, settings.packages),
    };
    let corpus = generate(&spec).map_err(CliError::config)?;
    let dir = &settings.out;
    write_corpus(&corpus, dir).with_context(|| format!("cannot write reports to {}", dir.display()))?;

    let mut warnings = std::collections::BTreeMap::new();
    for w in &corpus.warnings {
        *warnings.entry(w.tool().name().to_string()).or_insert(0) += 1;
    }
    let (profiles, _) = build_profiles_lenient(&corpus.warnings, &corpus.smells, &synth_attribution());
    let manifest = Manifest {
        files: REPORT_FILES.iter().map(|s| s.to_string()).collect(),
        packages: corpus.packages.len(),
        warnings,
        smells: corpus.smells.len(),
        cooccurrence_total: cooccurrence_table(&profiles).total(),
    };
    let meta = Meta::new("synth", settings).with("seed", spec.seed);
    write_json(&dir.join(SPEC_FILE), &meta, &spec)?;
    write_json(&dir.join(MANIFEST_FILE), &meta, &manifest)?;
    println!(
        "wrote {} packages, {} warnings, {} smells to {}",
        manifest.packages,
        corpus.warnings.len(),
        manifest.smells,
        dir.display()
    );
    Ok(())
}
