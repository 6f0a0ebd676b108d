//! End-to-end analysis over parsed inputs.

use std::collections::{BTreeMap, BTreeSet};

use duelbias_core::bias::{
    self, frequency_divergence, rater_macro_average, score_correlations, BiasConfig, BiasReport, CorrelationMatrix,
    DimensionAnalysis, DuelRecord, FrequencyComparison, RaterSummary, Side, Tournament, WinFraction,
};
use duelbias_core::choice::{rank_items, FitConfig, ScoreTable};
use duelbias_core::schedule::{
    duels_per_item_for_budget, replicate_seed, sample_balanced_duels_with, simulate_replicate, RecoveryCurve,
    SchedulePlan,
};
use duelbias_core::tags::{distinctive_tags, DistinctiveTag, TagDistribution, TagNormalizer};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::input::{ItemCatalog, TagRecord};

/// Tournaments keyed by dimension, each list sorted by category.
pub type Tournaments = BTreeMap<String, Vec<Tournament>>;

/// Categories named by the config filter, checked against the catalog.
fn category_filter<'a>(config: &'a AnalysisConfig, catalog: &ItemCatalog) -> Result<Option<BTreeSet<&'a str>>> {
    if config.categories.is_empty() {
        return Ok(None);
    }
    let known = catalog.categories();
    if let Some(missing) = config.categories.iter().find(|c| !known.contains(c.as_str())) {
        return Err(Error::Referential(format!("category filter names `{missing}`, which is not in the item catalog")));
    }
    Ok(Some(config.categories.iter().map(String::as_str).collect()))
}

/// Checks that every duel's category and items are in the catalog. Parsing
/// already does this; duels built in memory go through here before fitting.
pub fn check_references(catalog: &ItemCatalog, duels: &[DuelRecord]) -> Result<()> {
    let categories = catalog.categories();
    for d in duels {
        if !categories.contains(d.category.as_str()) {
            return Err(Error::Referential(format!(
                "duel `{}`: category `{}` is not in the item catalog",
                d.duel_id, d.category
            )));
        }
        for (id, side) in [(&d.item_a, Side::A), (&d.item_b, Side::B)] {
            match catalog.get(id) {
                None => return Err(Error::Referential(format!("duel `{}`: unknown item `{id}`", d.duel_id))),
                Some(item) if item.group != side => {
                    return Err(Error::Validation(format!(
                        "duel `{}`: item `{id}` is in group {}, expected {}",
                        d.duel_id,
                        item.group.as_str(),
                        side.as_str()
                    )))
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}

/// Groups duels into one tournament per (category, dimension).
pub fn tournaments(config: &AnalysisConfig, catalog: &ItemCatalog, duels: &[DuelRecord]) -> Result<Tournaments> {
    check_references(catalog, duels)?;
    let filter = category_filter(config, catalog)?;
    let mut groups: BTreeMap<(&str, &str), Vec<&DuelRecord>> = BTreeMap::new();
    for d in duels {
        if filter.as_ref().is_none_or(|f| f.contains(d.category.as_str())) {
            groups.entry((&d.dimension, &d.category)).or_default().push(d);
        }
    }
    let mut out = Tournaments::new();
    for ((dimension, category), records) in groups {
        let t = Tournament::from_records(category, dimension, records)
            .map_err(|e| Error::in_context(category, dimension, e))?;
        out.entry(dimension.to_owned()).or_default().push(t);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreEntry {
    pub category: String,
    pub dimension: String,
    pub table: ScoreTable,
    /// Item ids from best to worst.
    pub ranking: Vec<String>,
}

fn score_entry(t: &Tournament, table: ScoreTable) -> ScoreEntry {
    ScoreEntry { category: t.category.clone(), dimension: t.dimension.clone(), ranking: rank_items(&table), table }
}

/// Fits every tournament, in parallel.
pub fn fit_all(tournaments: &Tournaments, fit: &FitConfig) -> Result<Vec<ScoreEntry>> {
    let all: Vec<&Tournament> = tournaments.values().flatten().collect();
    all.par_iter()
        .map(|t| {
            t.fit(fit)
                .map(|table| score_entry(t, table))
                .map_err(|e| Error::in_context(&t.category, &t.dimension, e))
        })
        .collect()
}

/// Finds the tournament whose fit fails so the error names it.
fn locate(dimension: &str, tournaments: &[Tournament], fit: &FitConfig, error: duelbias_core::Error) -> Error {
    for t in tournaments {
        if let Err(e) = t.fit(fit) {
            return Error::in_context(&t.category, dimension, e);
        }
    }
    Error::in_context("*", dimension, error)
}

/// Bias report for one dimension, with bootstrap replicates evaluated in
/// parallel. Replicates are seeded independently, so the result does not
/// depend on the thread count.
pub fn analyze_dimension(
    dimension: &str,
    tournaments: &[Tournament],
    config: &BiasConfig,
) -> Result<(BiasReport, Vec<ScoreEntry>)> {
    let analysis = DimensionAnalysis::new(dimension, tournaments, config)
        .map_err(|e| locate(dimension, tournaments, &config.fit, e))?;
    let entries = tournaments
        .iter()
        .zip(analysis.score_tables())
        .map(|(t, table)| score_entry(t, table.clone()))
        .collect();
    let replicates = (0..config.bootstrap.replicates).into_par_iter().map(|r| analysis.replicate(r)).collect();
    // a failed bootstrap cannot be pinned on one category unless there is only one
    let category = if tournaments.len() == 1 { tournaments[0].category.as_str() } else { "*" };
    let report = analysis.finish(replicates).map_err(|e| Error::in_context(category, dimension, e))?;
    Ok((report, entries))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryCorrelation {
    pub category: String,
    /// Items duelled in every dimension; the correlations run over these.
    pub items: usize,
    pub matrix: CorrelationMatrix,
}

/// Per category, correlations of fitted scores between dimensions. Skips
/// categories seen in fewer than two dimensions or with fewer than three
/// shared items.
pub fn dimension_correlations(entries: &[ScoreEntry], config: &AnalysisConfig) -> Result<Vec<CategoryCorrelation>> {
    let mut by_category: BTreeMap<&str, Vec<&ScoreEntry>> = BTreeMap::new();
    for e in entries {
        by_category.entry(&e.category).or_default().push(e);
    }
    let mut out = Vec::new();
    for (category, mut list) in by_category {
        if list.len() < 2 {
            continue;
        }
        list.sort_by(|a, b| a.dimension.cmp(&b.dimension));
        let shared: BTreeSet<&String> = list[0]
            .table
            .scores
            .keys()
            .filter(|id| list.iter().all(|e| e.table.scores.contains_key(*id)))
            .collect();
        if shared.len() < 3 {
            continue;
        }
        let restricted: Vec<ScoreTable> = list
            .iter()
            .map(|e| {
                let mut t = e.table.clone();
                t.scores.retain(|id, _| shared.contains(id));
                t
            })
            .collect();
        let named: Vec<(&str, &ScoreTable)> = list.iter().map(|e| e.dimension.as_str()).zip(&restricted).collect();
        let matrix = score_correlations(&named, config.scale).map_err(|e| Error::in_context(category, "*", e))?;
        out.push(CategoryCorrelation { category: category.to_owned(), items: shared.len(), matrix });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryWins {
    pub category: String,
    pub win_fraction: WinFraction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DuelStats {
    pub dimension: String,
    /// Fraction of duels won by group B, with its exact binomial test.
    pub win_fraction: WinFraction,
    pub raters: RaterSummary,
    pub categories: Vec<CategoryWins>,
}

/// Outcome-level statistics per dimension. Needs no fitting.
pub fn duel_stats(duels: &[DuelRecord], categories: &[String]) -> Result<Vec<DuelStats>> {
    let mut by_dimension: BTreeMap<&str, Vec<&DuelRecord>> = BTreeMap::new();
    for d in duels {
        if categories.is_empty() || categories.contains(&d.category) {
            by_dimension.entry(&d.dimension).or_default().push(d);
        }
    }
    by_dimension
        .into_iter()
        .map(|(dimension, records)| {
            let ctx = |e| Error::in_context("*", dimension, e);
            let mut by_category: BTreeMap<&str, Vec<&DuelRecord>> = BTreeMap::new();
            for d in &records {
                by_category.entry(&d.category).or_default().push(d);
            }
            let categories = by_category
                .into_iter()
                .map(|(category, list)| {
                    bias::duel_win_fraction(list.iter().copied(), Side::B)
                        .map(|win_fraction| CategoryWins { category: category.to_owned(), win_fraction })
                        .map_err(|e| Error::in_context(category, dimension, e))
                })
                .collect::<Result<_>>()?;
            Ok(DuelStats {
                dimension: dimension.to_owned(),
                win_fraction: bias::duel_win_fraction(records.iter().copied(), Side::B).map_err(ctx)?,
                raters: rater_macro_average(records.iter().copied(), Side::B).map_err(ctx)?,
                categories,
            })
        })
        .collect()
}

/// Category frequencies of the two groups over the catalog.
pub fn frequency(catalog: &ItemCatalog, config: &AnalysisConfig) -> Result<FrequencyComparison> {
    let filter = category_filter(config, catalog)?;
    let members = catalog
        .items()
        .iter()
        .filter(|i| filter.as_ref().is_none_or(|f| f.contains(i.category.as_str())))
        .map(|i| (i.group, i.category.as_str()));
    Ok(frequency_divergence(members)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TagReport {
    /// Normalized tag mentions per group.
    pub mentions_a: u64,
    pub mentions_b: u64,
    pub vocabulary: usize,
    /// Tags most typical of group A, then of group B.
    pub a: Vec<DistinctiveTag>,
    pub b: Vec<DistinctiveTag>,
}

/// Normalizes tags, counts one per mention on the side of the tagged item,
/// and ranks the distinctive tags of each side.
pub fn tag_analysis(
    tags: &[TagRecord],
    catalog: &ItemCatalog,
    normalizer: &TagNormalizer,
    config: &AnalysisConfig,
) -> Result<TagReport> {
    let filter = category_filter(config, catalog)?;
    let s = &config.tags;
    let mut a = TagDistribution::new(s.smoothing);
    let mut b = TagDistribution::new(s.smoothing);
    for record in tags {
        let item = catalog
            .get(&record.item_id)
            .ok_or_else(|| Error::Referential(format!("tag on unknown item `{}`", record.item_id)))?;
        if filter.as_ref().is_some_and(|f| !f.contains(item.category.as_str())) {
            continue;
        }
        let target = match item.group {
            Side::A => &mut a,
            Side::B => &mut b,
        };
        for tag in normalizer.normalize(&record.raw_tag) {
            target.add(tag);
        }
    }
    let vocabulary = a.counts.keys().chain(b.counts.keys()).collect::<BTreeSet<_>>().len();
    let ranked = distinctive_tags(&a, &b, s.top_k, s.min_count, s.yates)?;
    Ok(TagReport { mentions_a: a.total, mentions_b: b.total, vocabulary, a: ranked.a, b: ranked.b })
}

/// Rank-recovery curve with replicates run in parallel; identical to the
/// sequential core routine for the same seed.
pub fn simulate(
    items_per_group: usize,
    budgets: &[usize],
    replicates: usize,
    seed: u64,
    fit: &FitConfig,
) -> Result<RecoveryCurve> {
    if replicates == 0 {
        return Err(Error::Validation("at least one replicate is required".into()));
    }
    for &budget in budgets {
        duels_per_item_for_budget(items_per_group, budget)?;
    }
    let taus = budgets
        .iter()
        .map(|&budget| {
            (0..replicates)
                .into_par_iter()
                .map(|r| simulate_replicate(items_per_group, budget, replicate_seed(seed, r), fit))
                .collect::<std::result::Result<Vec<f64>, _>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(RecoveryCurve::from_replicates(budgets, &taus, seed))
}

/// A balanced A-vs-B schedule per category. Each category gets its own
/// seed, `seed + index` in category order.
pub fn design(
    catalog: &ItemCatalog,
    config: &AnalysisConfig,
    duels_per_item: usize,
    distinct: bool,
) -> Result<Vec<(String, SchedulePlan)>> {
    let seed = config.require_seed()?;
    let filter = category_filter(config, catalog)?;
    catalog
        .categories()
        .into_iter()
        .filter(|c| filter.as_ref().is_none_or(|f| f.contains(c)))
        .enumerate()
        .map(|(i, category)| {
            let ids = |side| catalog.members(category, side).into_iter().map(str::to_owned).collect::<Vec<_>>();
            sample_balanced_duels_with(&ids(Side::A), &ids(Side::B), duels_per_item, replicate_seed(seed, i), distinct)
                .map(|plan| (category.to_owned(), plan))
                .map_err(|e| Error::in_context(category, "*", e))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bundle {
    pub score_tables: Vec<ScoreEntry>,
    pub bias: Vec<BiasReport>,
    pub correlations: Vec<CategoryCorrelation>,
    pub duel_stats: Vec<DuelStats>,
    /// Absent when fewer than two categories are analyzed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency: Option<FrequencyComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tags: Option<TagReport>,
}

/// The whole analysis: fits, bias reports, correlations, outcome statistics,
/// frequencies and, when tags are given, tag rankings.
pub fn run_pipeline(
    config: &AnalysisConfig,
    catalog: &ItemCatalog,
    duels: &[DuelRecord],
    tags: Option<&[TagRecord]>,
) -> Result<Bundle> {
    let bias_config = config.bias_config()?;
    let normalizer = tags.map(|_| config.normalizer()).transpose()?;
    let grouped = tournaments(config, catalog, duels)?;
    let mut score_tables = Vec::new();
    let mut reports = Vec::new();
    for (dimension, list) in &grouped {
        let (report, entries) = analyze_dimension(dimension, list, &bias_config)?;
        reports.push(report);
        score_tables.extend(entries);
    }
    score_tables.sort_by(|a, b| (&a.category, &a.dimension).cmp(&(&b.category, &b.dimension)));
    let correlations = dimension_correlations(&score_tables, config)?;
    let duel_stats = duel_stats(duels, &config.categories)?;
    let analyzed = match &config.categories[..] {
        [] => catalog.categories().len(),
        filter => filter.len(),
    };
    let frequency = if analyzed >= 2 { Some(frequency(catalog, config)?) } else { None };
    let tags = match (tags, normalizer) {
        (Some(t), Some(n)) => Some(tag_analysis(t, catalog, &n, config)?),
        _ => None,
    };
    Ok(Bundle { score_tables, bias: reports, correlations, duel_stats, frequency, tags })
}
