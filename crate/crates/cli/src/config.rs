use std::path::{Path, PathBuf};

use serde::Deserialize;
use warnsmell_core::prioritize::{CutoffMode, RankUnit};
use warnsmell_core::stats::{RhoBands, DEFAULT_ALPHA};

use crate::error::{CliError, CliResult};

/// Flat key-value config document. Every key is optional; command-line
/// flags and `WARNSMELL_*` variables take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub roots: Option<Vec<String>>,
    pub severity_map: Option<PathBuf>,
    pub cutoff_mode: Option<String>,
    pub rank_unit: Option<String>,
    pub jobs: Option<usize>,
    pub deterministic: Option<bool>,
    pub keep_going: Option<bool>,
    pub seed: Option<u64>,
    pub packages: Option<usize>,
    pub rho_moderate: Option<f64>,
    pub rho_strong: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("config {}: {e}", path.display())))
    }
}

/// Resolved settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub out: PathBuf,
    pub alpha: f64,
    pub roots: Vec<String>,
    pub severity_map: Option<PathBuf>,
    pub cutoff_mode: CutoffMode,
    pub rank_unit: RankUnit,
    pub jobs: Option<usize>,
    pub deterministic: bool,
    pub keep_going: bool,
    pub seed: u64,
    pub packages: usize,
    pub bands: RhoBands,
}

pub const DEFAULT_ROOTS: [&str; 2] = ["src/main/java", "src/test/java"];
pub const DEFAULT_OUT: &str = "warnsmell-out";
pub const DEFAULT_PACKAGES: usize = 120;

/// Command-line values; `None` means not given.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub roots: Option<Vec<String>>,
    pub severity_map: Option<PathBuf>,
    pub cutoff_mode: Option<String>,
    pub rank_unit: Option<String>,
    pub jobs: Option<usize>,
    pub deterministic: bool,
    pub keep_going: bool,
    pub seed: Option<u64>,
    pub packages: Option<usize>,
    pub rho_moderate: Option<f64>,
    pub rho_strong: Option<f64>,
}

impl Settings {
    pub fn resolve(cli: Overrides, file: FileConfig) -> CliResult<Self> {
        let alpha = cli.alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CliError::config(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        let cutoff_mode = match cli.cutoff_mode.or(file.cutoff_mode) {
            Some(s) => s.parse().map_err(CliError::config)?,
            None => CutoffMode::default(),
        };
        let rank_unit = match cli.rank_unit.or(file.rank_unit) {
            Some(s) => s.parse().map_err(CliError::config)?,
            None => RankUnit::default(),
        };
        let defaults = RhoBands::default();
        let bands = RhoBands {
            moderate: cli.rho_moderate.or(file.rho_moderate).unwrap_or(defaults.moderate),
            strong: cli.rho_strong.or(file.rho_strong).unwrap_or(defaults.strong),
        };
        if !bands.is_valid() {
            return Err(CliError::config(format!(
                "rho bands need 0 < moderate < strong < 1, got {} and {}",
                bands.moderate, bands.strong
            )));
        }
        let jobs = cli.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(CliError::config("jobs must be positive"));
        }
        let packages = cli.packages.or(file.packages).unwrap_or(DEFAULT_PACKAGES);
        if packages == 0 {
            return Err(CliError::config("packages must be positive"));
        }
        let roots = cli
            .roots
            .or(file.roots)
            .unwrap_or_else(|| DEFAULT_ROOTS.iter().map(|s| s.to_string()).collect())
            .into_iter()
            .map(|r| r.trim().trim_end_matches('/').to_string())
            .filter(|r| !r.is_empty())
            .collect();
        Ok(Settings {
            out: cli.out.or(file.out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            alpha,
            roots,
            severity_map: cli.severity_map.or(file.severity_map),
            cutoff_mode,
            rank_unit,
            jobs,
            deterministic: cli.deterministic || file.deterministic.unwrap_or(false),
            keep_going: cli.keep_going || file.keep_going.unwrap_or(false),
            seed: cli.seed.or(file.seed).unwrap_or(0),
            packages,
            bands,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file: FileConfig = serde_json::from_str(r#"{"alpha": 0.1, "seed": 4, "cutoff_mode": "floor"}"#).unwrap();
        let cli = Overrides {
            alpha: Some(0.01),
            ..Overrides::default()
        };
        let s = Settings::resolve(cli, file).unwrap();
        assert_eq!(s.alpha, 0.01);
        assert_eq!(s.seed, 4);
        assert_eq!(s.cutoff_mode, CutoffMode::Floor);
        assert_eq!(s.roots, vec!["src/main/java", "src/test/java"]);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |o: Overrides| Settings::resolve(o, FileConfig::default()).unwrap_err().kind;
        use crate::error::ExitKind::Config;
        assert_eq!(bad(Overrides { alpha: Some(1.0), ..Default::default() }), Config);
        assert_eq!(bad(Overrides { rank_unit: Some("pkg".into()), ..Default::default() }), Config);
        assert_eq!(bad(Overrides { rho_moderate: Some(0.8), ..Default::default() }), Config);
        assert!(serde_json::from_str::<FileConfig>(r#"{"alpah": 0.1}"#).is_err());
    }
}
