//! Reading and writing the three input tables.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use csv::StringRecord;
use duelbias_core::bias::{DuelRecord, Side};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mapping::{ColumnMapping, DUEL_COLUMNS, ITEM_COLUMNS, TAG_COLUMNS};

/// Raw bytes of an input file and their SHA-256.
#[derive(Debug, Clone)]
pub struct Input {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub sha256: String,
}

impl Input {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_owned();
        let bytes = std::fs::read(&path).map_err(|source| Error::Read { path: path.clone(), source })?;
        Ok(Self::from_bytes(path, bytes))
    }

    pub fn from_bytes(path: impl Into<PathBuf>, bytes: Vec<u8>) -> Self {
        let sha256 = format!("{:x}", Sha256::digest(&bytes));
        Input { path: path.into(), bytes, sha256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemRecord {
    pub item_id: String,
    pub group: Side,
    pub category: String,
    pub external_ref: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ItemCatalog {
    items: Vec<ItemRecord>,
    index: BTreeMap<String, usize>,
}

impl ItemCatalog {
    pub fn new(items: Vec<ItemRecord>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, item) in items.iter().enumerate() {
            if item.item_id.is_empty() || item.category.is_empty() {
                return Err(Error::Validation(format!("item #{} has an empty id or category", i + 1)));
            }
            if index.insert(item.item_id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate item_id `{}`", item.item_id)));
            }
        }
        Ok(ItemCatalog { items, index })
    }

    pub fn items(&self) -> &[ItemRecord] {
        &self.items
    }

    pub fn get(&self, id: &str) -> Option<&ItemRecord> {
        self.index.get(id).map(|&i| &self.items[i])
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn categories(&self) -> BTreeSet<&str> {
        self.items.iter().map(|i| i.category.as_str()).collect()
    }

    /// Items of one category and side, in file order.
    pub fn members(&self, category: &str, side: Side) -> Vec<&str> {
        self.items
            .iter()
            .filter(|i| i.category == category && i.group == side)
            .map(|i| i.item_id.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TagRecord {
    pub duel_id: String,
    pub item_id: String,
    pub rater_id: String,
    pub raw_tag: String,
}

/// Rows of a CSV table with columns resolved through a mapping.
struct Table<'a> {
    input: &'a Input,
    positions: Vec<usize>,
    rows: csv::StringRecordsIntoIter<&'a [u8]>,
}

struct Row<'a> {
    input: &'a Input,
    line: u64,
    record: StringRecord,
    positions: &'a [usize],
}

impl Row<'_> {
    fn field(&self, column: usize) -> &str {
        self.record.get(self.positions[column]).unwrap_or("").trim()
    }

    fn required(&self, column: usize, name: &str) -> Result<String> {
        let value = self.field(column);
        if value.is_empty() {
            return Err(self.error(format!("empty `{name}`")));
        }
        Ok(value.to_owned())
    }

    fn error(&self, message: String) -> Error {
        Error::Parse { path: self.input.path.clone(), line: self.line, message }
    }
}

impl<'a> Table<'a> {
    fn open(input: &'a Input, columns: &BTreeMap<String, String>, canonical: &[&str], optional: &[&str]) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input.bytes.as_slice());
        let parse_error = |line, message| Error::Parse { path: input.path.clone(), line, message };
        let headers = reader
            .headers()
            .map_err(|e| parse_error(1, e.to_string()))?
            .iter()
            .map(|h| h.trim().trim_start_matches('\u{feff}').to_owned())
            .collect::<Vec<_>>();
        let mut positions = Vec::with_capacity(canonical.len());
        for name in canonical {
            let header = ColumnMapping::header(columns, name);
            match headers.iter().position(|h| h == header) {
                Some(p) => positions.push(p),
                None if optional.contains(name) => positions.push(usize::MAX),
                None => return Err(parse_error(1, format!("missing column `{header}`"))),
            }
        }
        Ok(Table { input, positions, rows: reader.into_records() })
    }

    fn for_each(self, mut f: impl FnMut(Row<'_>) -> Result<()>) -> Result<()> {
        for record in self.rows {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                Error::Parse { path: self.input.path.clone(), line, message: e.to_string() }
            })?;
            let line = record.position().map_or(0, |p| p.line());
            if record.iter().all(|f| f.trim().is_empty()) {
                continue;
            }
            f(Row { input: self.input, line, record, positions: &self.positions })?;
        }
        Ok(())
    }
}

pub fn parse_items(input: &Input, mapping: &ColumnMapping) -> Result<ItemCatalog> {
    let table = Table::open(input, &mapping.items, &ITEM_COLUMNS, &["external_ref"])?;
    let mut items = Vec::new();
    let mut seen = BTreeMap::new();
    table.for_each(|row| {
        let item_id = row.required(0, "item_id")?;
        let label = row.required(1, "group")?;
        let group = mapping
            .side(&label)
            .ok_or_else(|| Error::Validation(format!("{}:{}: unknown group `{label}`", input.path.display(), row.line)))?;
        let category = row.required(2, "category")?;
        let external_ref = Some(row.field(3).to_owned()).filter(|s| !s.is_empty());
        if let Some(first) = seen.insert(item_id.clone(), row.line) {
            return Err(Error::Validation(format!(
                "{}:{}: duplicate item_id `{item_id}` (first on line {first})",
                input.path.display(),
                row.line
            )));
        }
        items.push(ItemRecord { item_id, group, category, external_ref });
        Ok(())
    })?;
    ItemCatalog::new(items)
}

/// Parses duels and checks them against the catalog. Records are oriented so
/// that `item_a` is the group-A item. A non-empty `dimensions` restricts the
/// accepted dimension labels.
pub fn parse_duels(
    input: &Input,
    catalog: &ItemCatalog,
    dimensions: &[String],
    mapping: &ColumnMapping,
) -> Result<Vec<DuelRecord>> {
    let table = Table::open(input, &mapping.duels, &DUEL_COLUMNS, &[])?;
    let categories = catalog.categories();
    let at = |line: u64| format!("{}:{line}", input.path.display());
    let mut duels = Vec::new();
    table.for_each(|row| {
        let duel_id = row.required(0, "duel_id")?;
        let category = row.required(1, "category")?;
        let dimension = row.required(2, "dimension")?;
        let mut item_a = row.required(3, "item_a")?;
        let mut item_b = row.required(4, "item_b")?;
        let winner_label = row.required(5, "winner")?;
        let rater_id = row.field(6).to_owned();
        let mut winner = if winner_label == item_a {
            Side::A
        } else if winner_label == item_b {
            Side::B
        } else {
            mapping
                .side(&winner_label)
                .ok_or_else(|| row.error(format!("winner `{winner_label}` is neither A, B nor one of the duel's items")))?
        };
        if !categories.contains(category.as_str()) {
            return Err(Error::Referential(format!("{}: category `{category}` is not in the item catalog", at(row.line))));
        }
        if !dimensions.is_empty() && !dimensions.contains(&dimension) {
            return Err(Error::Validation(format!("{}: unknown dimension `{dimension}`", at(row.line))));
        }
        let lookup = |id: &str| {
            catalog
                .get(id)
                .ok_or_else(|| Error::Referential(format!("{}: unknown item `{id}`", at(row.line))))
        };
        let (a, b) = (lookup(&item_a)?, lookup(&item_b)?);
        if a.group == b.group {
            return Err(Error::Validation(format!(
                "{}: duel `{duel_id}` pairs two group-{} items",
                at(row.line),
                a.group.as_str()
            )));
        }
        for item in [a, b] {
            if item.category != category {
                return Err(Error::Validation(format!(
                    "{}: item `{}` has category `{}`, duel has `{category}`",
                    at(row.line),
                    item.item_id,
                    item.category
                )));
            }
        }
        if a.group == Side::B {
            std::mem::swap(&mut item_a, &mut item_b);
            winner = winner.other();
        }
        duels.push(DuelRecord { duel_id, category, dimension, item_a, item_b, winner, rater_id });
        Ok(())
    })?;
    Ok(duels)
}

/// Catalog implied by a duel file alone: `item_a` items form group A and
/// `item_b` items group B.
pub fn infer_catalog(input: &Input, mapping: &ColumnMapping) -> Result<ItemCatalog> {
    let table = Table::open(input, &mapping.duels, &DUEL_COLUMNS, &[])?;
    let mut items: Vec<ItemRecord> = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    table.for_each(|row| {
        let category = row.required(1, "category")?;
        for (column, group) in [(3, Side::A), (4, Side::B)] {
            let item_id = row.required(column, DUEL_COLUMNS[column])?;
            match seen.get(&item_id) {
                Some(&i) if items[i].group != group || items[i].category != category => {
                    return Err(Error::Validation(format!(
                        "{}:{}: item `{item_id}` appears with two groups or categories",
                        input.path.display(),
                        row.line
                    )))
                }
                Some(_) => {}
                None => {
                    seen.insert(item_id.clone(), items.len());
                    items.push(ItemRecord { item_id, group, category: category.clone(), external_ref: None });
                }
            }
        }
        Ok(())
    })?;
    ItemCatalog::new(items)
}

pub fn parse_tags(input: &Input, catalog: &ItemCatalog, mapping: &ColumnMapping) -> Result<Vec<TagRecord>> {
    let table = Table::open(input, &mapping.tags, &TAG_COLUMNS, &[])?;
    let mut tags = Vec::new();
    table.for_each(|row| {
        let item_id = row.required(1, "item_id")?;
        if catalog.get(&item_id).is_none() {
            return Err(Error::Referential(format!(
                "{}:{}: unknown item `{item_id}`",
                input.path.display(),
                row.line
            )));
        }
        tags.push(TagRecord {
            duel_id: row.field(0).to_owned(),
            item_id,
            rater_id: row.field(2).to_owned(),
            raw_tag: row.field(3).to_owned(),
        });
        Ok(())
    })?;
    Ok(tags)
}

#[derive(Serialize)]
struct ItemRow<'a> {
    item_id: &'a str,
    group: &'a str,
    category: &'a str,
    external_ref: &'a str,
}

#[derive(Serialize)]
struct DuelRow<'a> {
    duel_id: &'a str,
    category: &'a str,
    dimension: &'a str,
    item_a: &'a str,
    item_b: &'a str,
    winner: &'a str,
    rater_id: &'a str,
}

fn csv_error(e: csv::Error) -> Error {
    Error::Write { path: PathBuf::from("<csv>"), source: e.into() }
}

/// Writes rows with the canonical headers.
pub fn write_csv<W: Write, T: Serialize>(writer: W, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(|source| Error::Write { path: PathBuf::from("<csv>"), source })
}

pub fn write_items<W: Write>(writer: W, catalog: &ItemCatalog) -> Result<()> {
    write_csv(
        writer,
        catalog.items().iter().map(|i| ItemRow {
            item_id: &i.item_id,
            group: i.group.as_str(),
            category: &i.category,
            external_ref: i.external_ref.as_deref().unwrap_or(""),
        }),
    )
}

pub fn write_duels<W: Write>(writer: W, duels: &[DuelRecord]) -> Result<()> {
    write_csv(
        writer,
        duels.iter().map(|d| DuelRow {
            duel_id: &d.duel_id,
            category: &d.category,
            dimension: &d.dimension,
            item_a: &d.item_a,
            item_b: &d.item_b,
            winner: d.winner.as_str(),
            rater_id: &d.rater_id,
        }),
    )
}

pub fn write_tags<W: Write>(writer: W, tags: &[TagRecord]) -> Result<()> {
    write_csv(writer, tags)
}
