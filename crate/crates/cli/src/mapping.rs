//! Column-mapping files adapt CSV layouts that differ from the canonical one.
//!
//! ```toml
//! [items]
//! item_id = "image_id"      # canonical name = header in the file
//! group = "source"
//!
//! [duels]
//! item_a = "left"
//! item_b = "right"
//!
//! [labels]                  # raw group / winner labels to sides
//! recipe = "A"
//! instagram = "B"
//! ```
//!
//! Columns not listed keep their canonical header.

use std::collections::BTreeMap;
use std::path::Path;

use duelbias_core::bias::Side;
use serde::Deserialize;

use crate::error::{Error, Result};

pub const ITEM_COLUMNS: [&str; 4] = ["item_id", "group", "category", "external_ref"];
pub const DUEL_COLUMNS: [&str; 7] = ["duel_id", "category", "dimension", "item_a", "item_b", "winner", "rater_id"];
pub const TAG_COLUMNS: [&str; 4] = ["duel_id", "item_id", "rater_id", "raw_tag"];

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMapping {
    pub items: BTreeMap<String, String>,
    pub duels: BTreeMap<String, String>,
    pub tags: BTreeMap<String, String>,
    pub labels: BTreeMap<String, Side>,
}

impl ColumnMapping {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.to_owned(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mapping: ColumnMapping = toml::from_str(text).map_err(|e| Error::Config(format!("column mapping: {e}")))?;
        for (table, columns, canonical) in [
            ("items", &mapping.items, &ITEM_COLUMNS[..]),
            ("duels", &mapping.duels, &DUEL_COLUMNS[..]),
            ("tags", &mapping.tags, &TAG_COLUMNS[..]),
        ] {
            if let Some(unknown) = columns.keys().find(|k| !canonical.contains(&k.as_str())) {
                return Err(Error::Config(format!(
                    "column mapping: [{table}] has no column `{unknown}` (expected one of {})",
                    canonical.join(", ")
                )));
            }
        }
        Ok(mapping)
    }

    /// Header to look for in the file for a canonical column.
    pub fn header<'a>(columns: &'a BTreeMap<String, String>, canonical: &'a str) -> &'a str {
        columns.get(canonical).map_or(canonical, String::as_str)
    }

    /// Side named by a group or winner label, if it names one.
    pub fn side(&self, label: &str) -> Option<Side> {
        let label = label.trim();
        self.labels.get(label).copied().or_else(|| label.parse().ok())
    }
}
