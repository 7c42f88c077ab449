//! Domain model: smells, package identity, smell combinations and the
//! per-package join of warnings and smells.

mod combo;
mod package;
mod profile;
mod smell;

pub use combo::SmellCombo;
pub use package::{derive_package, Attribution, PackageId};
pub use profile::{
    build_profiles, build_profiles_lenient, combo_of, read_profiles_csv, write_profiles_csv,
    warning_package, PackageProfile, ProfileAccumulator, RuleKey, Unresolved,
};
pub use smell::{Granularity, SmellInstance, SmellKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("cannot resolve a package for `{input}`: {reason}")]
    UnresolvablePackage { input: String, reason: String },
    #[error("cannot attribute {record}: {source}")]
    Attribution {
        record: String,
        #[source]
        source: Box<ModelError>,
    },
    #[error("invalid smell instance: {0}")]
    InvalidSmell(String),
    #[error("invalid profile dump: {0}")]
    InvalidDump(String),
}
