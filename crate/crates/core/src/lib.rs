//! Joins static-analysis warnings with architectural smells at package
//! granularity, measures their correlation and co-occurrence, and ranks
//! warnings for smell remediation.
//!
//! The pipeline: [`ingest`] native reports into canonical records, join them
//! into [`model::PackageProfile`]s, run the correlation and co-occurrence
//! [`analysis`] on top of the [`stats`] engine, and [`prioritize`] warnings
//! with effort-aware capture curves. [`synth`] generates corpora with planted
//! structure for testing.

pub mod analysis;
pub mod ingest;
pub mod model;
pub mod prioritize;
pub mod stats;
pub mod synth;
