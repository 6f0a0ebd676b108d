//! File formats, reports and the analysis pipeline behind the `duelbias`
//! command. The arithmetic lives in `duelbias-core`; this crate reads CSV
//! inputs, runs the analyses, and writes sorted-key JSON reports plus flat
//! CSV tables.

pub mod config;
pub mod error;
pub mod input;
pub mod mapping;
pub mod output;
pub mod pipeline;

pub use config::AnalysisConfig;
pub use error::{Error, Result};
