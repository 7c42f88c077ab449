use std::collections::HashMap;

use crate::analysis::CooccurrenceTable;
use crate::ingest::WarningRecord;
use crate::model::{derive_package, Attribution, Granularity, PackageId, RuleKey, SmellCombo, SmellInstance};

/// Recounts co-occurrence from raw records by brute force: for every warning,
/// scan all smells for one touching the warning's package. Shares only
/// package derivation with the pipeline. Unresolvable records are skipped.
pub fn oracle_counts(warnings: &[WarningRecord], smells: &[SmellInstance], attribution: &Attribution) -> CooccurrenceTable {
    let resolve = |entity: &str, granularity: Granularity| match granularity {
        Granularity::Package => PackageId::new(entity).ok(),
        Granularity::Class => derive_package(entity, attribution).ok(),
    };
    let mut combo_cache: HashMap<PackageId, SmellCombo> = HashMap::new();
    let mut table = CooccurrenceTable::default();
    for w in warnings {
        let by_class = w.fq_class().and_then(|c| derive_package(c, attribution).ok());
        let package = by_class.or_else(|| w.file_path().and_then(|p| derive_package(p, attribution).ok()));
        let Some(package) = package else { continue };
        let combo = *combo_cache.entry(package.clone()).or_insert_with(|| {
            let mut kinds = Vec::new();
            for s in smells {
                for entity in s.affected() {
                    if resolve(entity, s.granularity()).as_ref() == Some(&package) {
                        kinds.push(s.kind());
                    }
                }
            }
            SmellCombo::from_kinds(kinds)
        });
        table.add(RuleKey::of(w), combo, 1);
    }
    table
}
