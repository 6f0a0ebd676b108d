//! Bias statistics between a reference population (side A) and a compared
//! population (side B): duel outcomes, score differences, percentile ranks,
//! rank curves, cross-dimension correlations and category frequencies.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bootstrap::{bootstrap_with, resample_indices, summarize_replicates, BootstrapConfig, Interval, ResampleUnit};
use crate::choice::{fit, ComparisonGraph, FitConfig, ItemId, ScoreTable};
use crate::error::{Error, Result};
use crate::pvalue::PValue;
use crate::stats::{self, Correlation};

/// Population an item belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::A => "A",
            Side::B => "B",
        }
    }
}

impl core::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::domain(format!("side must be A or B, got `{other}`"))),
        }
    }
}

/// One pairwise judgment between an A item and a B item.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DuelRecord {
    pub duel_id: String,
    pub category: String,
    pub dimension: String,
    pub item_a: ItemId,
    pub item_b: ItemId,
    pub winner: Side,
    pub rater_id: String,
}

impl DuelRecord {
    pub fn winner_id(&self) -> &str {
        match self.winner {
            Side::A => &self.item_a,
            Side::B => &self.item_b,
        }
    }

    pub fn loser_id(&self) -> &str {
        match self.winner {
            Side::A => &self.item_b,
            Side::B => &self.item_a,
        }
    }
}

/// Share of duels won by one side, with an exact two-sided binomial test
/// against one half.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WinFraction {
    pub side: Side,
    pub wins: u64,
    pub n: u64,
    pub fraction: f64,
    pub p: PValue,
}

pub fn win_fraction_from_counts(side: Side, wins: u64, n: u64) -> Result<WinFraction> {
    if n == 0 {
        return Err(Error::domain("win fraction of zero duels"));
    }
    Ok(WinFraction {
        side,
        wins,
        n,
        fraction: wins as f64 / n as f64,
        p: stats::binomial_two_sided(wins, n, 0.5)?,
    })
}

/// Fraction of `duels` won by `side`.
pub fn duel_win_fraction<'a>(duels: impl IntoIterator<Item = &'a DuelRecord>, side: Side) -> Result<WinFraction> {
    let (mut wins, mut n) = (0, 0);
    for d in duels {
        n += 1;
        if d.winner == side {
            wins += 1;
        }
    }
    win_fraction_from_counts(side, wins, n)
}

pub const HISTOGRAM_BINS: usize = 20;

/// Per-rater win fractions and their unweighted mean.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RaterSummary {
    pub side: Side,
    pub per_rater: BTreeMap<String, f64>,
    pub macro_mean: f64,
    /// Counts of raters over `[0, 0.05), [0.05, 0.10), ..., [0.95, 1]`.
    pub histogram: Vec<u64>,
}

pub fn rater_macro_average<'a>(duels: impl IntoIterator<Item = &'a DuelRecord>, side: Side) -> Result<RaterSummary> {
    let mut tallies: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for d in duels {
        let t = tallies.entry(d.rater_id.clone()).or_insert((0, 0));
        t.1 += 1;
        if d.winner == side {
            t.0 += 1;
        }
    }
    if tallies.is_empty() {
        return Err(Error::domain("rater summary of zero duels"));
    }
    let per_rater: BTreeMap<String, f64> = tallies
        .into_iter()
        .map(|(r, (w, n))| (r, w as f64 / n as f64))
        .collect();
    let mut histogram = vec![0u64; HISTOGRAM_BINS];
    for &f in per_rater.values() {
        let bin = ((f * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        histogram[bin] += 1;
    }
    let macro_mean = per_rater.values().sum::<f64>() / per_rater.len() as f64;
    Ok(RaterSummary { side, per_rater, macro_mean, histogram })
}

/// Scale on which score differences are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BiasScale {
    #[default]
    Log,
    Raw,
}

impl BiasScale {
    fn apply(self, score: f64) -> f64 {
        match self {
            BiasScale::Log => libm::log(score),
            BiasScale::Raw => score,
        }
    }
}

/// `mean(scores_b) - mean(scores_a)`.
pub fn score_bias(scores_a: &[f64], scores_b: &[f64]) -> Result<f64> {
    if scores_a.is_empty() || scores_b.is_empty() {
        return Err(Error::domain("score bias needs scores in both groups"));
    }
    Ok(stats::mean(scores_b) - stats::mean(scores_a))
}

/// [`score_bias`] after mapping positive scores onto `scale`.
pub fn scaled_score_bias(scores_a: &[f64], scores_b: &[f64], scale: BiasScale) -> Result<f64> {
    let map = |xs: &[f64]| xs.iter().map(|&s| scale.apply(s)).collect::<Vec<_>>();
    score_bias(&map(scores_a), &map(scores_b))
}

/// Percentile rank, within group A, of the median group-B score.
pub fn median_percentile_rank(scores_a: &[f64], scores_b: &[f64]) -> Result<f64> {
    if scores_b.is_empty() {
        return Err(Error::domain("median of an empty group"));
    }
    stats::percentile_rank(stats::median(scores_b), scores_a)
}

/// Percentiles 0, 5, ..., 100.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 * 5.0).collect()
}

/// For each `x` in `grid`, the percentile rank within group A of the
/// `x`-th percentile of group B.
pub fn rank_curve(scores_a: &[f64], scores_b: &[f64], grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if scores_a.is_empty() || scores_b.is_empty() {
        return Err(Error::domain("rank curve needs scores in both groups"));
    }
    if let Some(x) = grid.iter().find(|x| !(0.0..=100.0).contains(*x)) {
        return Err(Error::domain(format!("rank-curve grid point {x} is outside [0, 100]")));
    }
    let mut sorted_b = scores_b.to_vec();
    sorted_b.sort_by(f64::total_cmp);
    grid.iter()
        .map(|&x| {
            let value = stats::quantile_sorted(&sorted_b, x / 100.0);
            Ok((x, stats::percentile_rank(value, scores_a)?))
        })
        .collect()
}

/// Lower bound on the larger of two unobserved biases that sum to `bias`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TriangleBound {
    pub bound: f64,
    pub low: f64,
    pub high: f64,
}

/// If `b(T,G) + b(G,M) = bias`, one of the two terms is at least `|bias| / 2`.
/// The interval keeps the distances of the measured interval from its point
/// estimate, shifted onto the halved magnitude.
pub fn triangle_lower_bound(bias: f64, low: f64, high: f64) -> TriangleBound {
    let (magnitude, lo, hi) = if bias >= 0.0 { (bias, low, high) } else { (-bias, -high, -low) };
    let bound = magnitude / 2.0;
    TriangleBound { bound, low: bound - (magnitude - lo), high: bound + (hi - magnitude) }
}

/// Pearson correlations between dimensions over a shared item set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationMatrix {
    pub dimensions: Vec<String>,
    pub r: Vec<Vec<f64>>,
    pub p: Vec<Vec<PValue>>,
}

pub fn score_correlations(tables: &[(&str, &ScoreTable)], scale: BiasScale) -> Result<CorrelationMatrix> {
    let Some((_, first)) = tables.first() else {
        return Err(Error::domain("no score tables to correlate"));
    };
    for (name, t) in tables {
        if t.scores.len() != first.scores.len() || t.scores.keys().ne(first.scores.keys()) {
            return Err(Error::domain(format!("dimension `{name}` covers a different item set")));
        }
    }
    let columns: Vec<Vec<f64>> = tables
        .iter()
        .map(|(_, t)| t.scores.values().map(|&s| scale.apply(s)).collect())
        .collect();
    let k = tables.len();
    let mut r = vec![vec![1.0; k]; k];
    let mut p = vec![vec![PValue::Value(0.0); k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let c = stats::pearson(&columns[i], &columns[j])?;
            r[i][j] = c.coefficient;
            r[j][i] = c.coefficient;
            p[i][j] = c.p;
            p[j][i] = c.p;
        }
    }
    Ok(CorrelationMatrix { dimensions: tables.iter().map(|(n, _)| String::from(*n)).collect(), r, p })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CategoryFrequency {
    pub category: String,
    pub count_a: u64,
    pub count_b: u64,
    pub freq_a: f64,
    pub freq_b: f64,
    /// `freq_a / freq_b`; `None` when the category never occurs in group B.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrequencyComparison {
    pub categories: Vec<CategoryFrequency>,
    /// Spearman correlation of the two frequency columns; absent when either
    /// column is constant or there are fewer than three categories.
    pub spearman: Option<Correlation>,
}

/// Relative category frequencies within each group, from `(group, category)`
/// memberships.
pub fn frequency_divergence<'a>(members: impl IntoIterator<Item = (Side, &'a str)>) -> Result<FrequencyComparison> {
    let mut counts: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for (side, category) in members {
        let c = counts.entry(category).or_insert((0, 0));
        match side {
            Side::A => c.0 += 1,
            Side::B => c.1 += 1,
        }
    }
    let total_a: u64 = counts.values().map(|c| c.0).sum();
    let total_b: u64 = counts.values().map(|c| c.1).sum();
    if total_a == 0 || total_b == 0 {
        return Err(Error::domain("frequency comparison needs items in both groups"));
    }
    if counts.len() < 2 {
        return Err(Error::domain("frequency comparison needs at least two categories"));
    }
    let categories: Vec<CategoryFrequency> = counts
        .into_iter()
        .map(|(category, (a, b))| {
            let freq_a = a as f64 / total_a as f64;
            let freq_b = b as f64 / total_b as f64;
            CategoryFrequency {
                category: String::from(category),
                count_a: a,
                count_b: b,
                freq_a,
                freq_b,
                ratio: (b > 0).then(|| freq_a / freq_b),
            }
        })
        .collect();
    let xs: Vec<f64> = categories.iter().map(|c| c.freq_a).collect();
    let ys: Vec<f64> = categories.iter().map(|c| c.freq_b).collect();
    Ok(FrequencyComparison { spearman: stats::spearman(&xs, &ys).ok(), categories })
}

/// The duels of one (category, dimension) pair, indexed for fitting.
/// Items of side A come first in `items`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tournament {
    pub category: String,
    pub dimension: String,
    pub items: Vec<ItemId>,
    pub n_a: usize,
    /// (winner, loser) indices into `items`.
    pub duels: Vec<(usize, usize)>,
}

impl Tournament {
    /// Collects the items and outcomes of `records`, which must all belong to
    /// this category and dimension.
    pub fn from_records<'a>(
        category: &str,
        dimension: &str,
        records: impl IntoIterator<Item = &'a DuelRecord>,
    ) -> Result<Self> {
        let records: Vec<&DuelRecord> = records.into_iter().collect();
        let mut a_ids = BTreeSet::new();
        let mut b_ids = BTreeSet::new();
        for r in &records {
            if r.category != category || r.dimension != dimension {
                return Err(Error::domain(format!(
                    "duel `{}` belongs to ({}, {}), not ({category}, {dimension})",
                    r.duel_id, r.category, r.dimension
                )));
            }
            a_ids.insert(r.item_a.clone());
            b_ids.insert(r.item_b.clone());
        }
        if let Some(id) = a_ids.intersection(&b_ids).next() {
            return Err(Error::domain(format!("item `{id}` appears on both sides")));
        }
        let n_a = a_ids.len();
        let items: Vec<ItemId> = a_ids.into_iter().chain(b_ids).collect();
        let index: BTreeMap<&str, usize> = items.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let duels = records
            .iter()
            .map(|r| (index[r.winner_id()], index[r.loser_id()]))
            .collect();
        Ok(Tournament {
            category: String::from(category),
            dimension: String::from(dimension),
            items,
            n_a,
            duels,
        })
    }

    pub fn side_of(&self, index: usize) -> Side {
        if index < self.n_a { Side::A } else { Side::B }
    }

    /// Duels won by `side`.
    pub fn wins(&self, side: Side) -> u64 {
        self.duels.iter().filter(|&&(w, _)| self.side_of(w) == side).count() as u64
    }

    fn graph_of(&self, duels: impl IntoIterator<Item = (usize, usize)>) -> Result<ComparisonGraph> {
        ComparisonGraph::with_duels(self.items.clone(), duels)
    }

    pub fn graph(&self) -> Result<ComparisonGraph> {
        self.graph_of(self.duels.iter().copied())
    }

    pub fn fit(&self, config: &FitConfig) -> Result<ScoreTable> {
        fit(&self.graph()?, config)
    }

    /// Fitted scores split into (side A, side B), in item order.
    pub fn group_scores(&self, table: &ScoreTable) -> Result<(Vec<f64>, Vec<f64>)> {
        let lookup = |id: &ItemId| table.get(id).ok_or_else(|| Error::MissingScore(id.clone()));
        let a = self.items[..self.n_a].iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let b = self.items[self.n_a..].iter().map(lookup).collect::<Result<Vec<_>>>()?;
        Ok((a, b))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct BiasConfig {
    pub scale: BiasScale,
    pub grid: Vec<f64>,
    pub bootstrap: BootstrapConfig,
    pub fit: FitConfig,
    /// Side whose wins are counted by the win fraction.
    pub focus: Side,
}

impl Default for BiasConfig {
    fn default() -> Self {
        BiasConfig {
            scale: BiasScale::Log,
            grid: default_grid(),
            bootstrap: BootstrapConfig::default(),
            fit: FitConfig::default(),
            focus: Side::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RankCurvePoint {
    pub x: f64,
    pub y: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CategoryBias {
    pub category: String,
    pub items_a: usize,
    pub items_b: usize,
    pub duels: usize,
    pub converged: bool,
    pub win_fraction: WinFraction,
    pub score_bias: Interval,
    pub median_percentile: Interval,
    /// The median-percentile interval excludes 50.
    pub median_significant: bool,
    pub rank_curve: Vec<RankCurvePoint>,
}

/// All bias statistics of one dimension. Pooled values are unweighted means
/// over categories.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BiasReport {
    pub dimension: String,
    pub scale: BiasScale,
    pub unit: ResampleUnit,
    pub win_fraction: WinFraction,
    pub score_bias: Interval,
    pub triangle_bound: TriangleBound,
    pub median_percentile: Interval,
    pub median_significant: bool,
    pub rank_curve: Vec<RankCurvePoint>,
    pub categories: Vec<CategoryBias>,
    pub bootstrap_replicates: usize,
    pub bootstrap_discarded: usize,
}

/// Group scores of each category mapped to the statistic vector
/// `[pooled bias, pooled median, (bias, median, curve...) per category, pooled curve...]`.
fn statistic_vector(groups: &[(Vec<f64>, Vec<f64>)], config: &BiasConfig) -> Result<Vec<f64>> {
    let g = config.grid.len();
    let c = groups.len();
    let mut out = vec![0.0; 2 + c * (2 + g) + g];
    for (k, (a, b)) in groups.iter().enumerate() {
        let bias = scaled_score_bias(a, b, config.scale)?;
        let median = median_percentile_rank(a, b)?;
        let curve = rank_curve(a, b, &config.grid)?;
        let base = 2 + k * (2 + g);
        out[base] = bias;
        out[base + 1] = median;
        out[0] += bias / c as f64;
        out[1] += median / c as f64;
        for (i, (_, y)) in curve.into_iter().enumerate() {
            out[base + 2 + i] = y;
            out[2 + c * (2 + g) + i] += y / c as f64;
        }
    }
    Ok(out)
}

/// Point fits of one dimension plus the replicate generator for its
/// bootstrap. Replicates are independent, so callers may evaluate
/// [`DimensionAnalysis::replicate`] in any order before calling
/// [`DimensionAnalysis::finish`].
#[derive(Debug, Clone)]
pub struct DimensionAnalysis<'a> {
    dimension: String,
    tournaments: &'a [Tournament],
    config: &'a BiasConfig,
    tables: Vec<ScoreTable>,
    groups: Vec<(Vec<f64>, Vec<f64>)>,
    point: Vec<f64>,
}

impl<'a> DimensionAnalysis<'a> {
    pub fn new(dimension: &str, tournaments: &'a [Tournament], config: &'a BiasConfig) -> Result<Self> {
        if tournaments.is_empty() {
            return Err(Error::domain(format!("dimension `{dimension}` has no tournaments")));
        }
        config.bootstrap.validate()?;
        let mut tables = Vec::with_capacity(tournaments.len());
        let mut groups = Vec::with_capacity(tournaments.len());
        for t in tournaments {
            let table = t.fit(&config.fit)?;
            groups.push(t.group_scores(&table)?);
            tables.push(table);
        }
        let point = statistic_vector(&groups, config)?;
        Ok(DimensionAnalysis { dimension: String::from(dimension), tournaments, config, tables, groups, point })
    }

    pub fn score_tables(&self) -> &[ScoreTable] {
        &self.tables
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    /// Statistic vector of bootstrap replicate `r`, or `None` if it could not
    /// be computed.
    pub fn replicate(&self, r: usize) -> Option<Vec<f64>> {
        let mut rng = self.config.bootstrap.replicate_rng(r);
        let groups = match self.config.bootstrap.unit {
            ResampleUnit::Item => self
                .groups
                .iter()
                .map(|(a, b)| {
                    let ra = resample_indices(a.len(), &mut rng).into_iter().map(|i| a[i]).collect();
                    let rb = resample_indices(b.len(), &mut rng).into_iter().map(|i| b[i]).collect();
                    (ra, rb)
                })
                .collect::<Vec<_>>(),
            ResampleUnit::Duel => {
                let mut groups = Vec::with_capacity(self.tournaments.len());
                for t in self.tournaments {
                    let picks = resample_indices(t.duels.len(), &mut rng);
                    let graph = t.graph_of(picks.into_iter().map(|i| t.duels[i])).ok()?;
                    let table = fit(&graph, &self.config.fit).ok()?;
                    groups.push(t.group_scores(&table).ok()?);
                }
                groups
            }
        };
        statistic_vector(&groups, self.config).ok()
    }

    /// Assembles the report from replicate results (indexed by replicate).
    pub fn finish(self, replicates: Vec<Option<Vec<f64>>>) -> Result<BiasReport> {
        let summary = summarize_replicates(&self.point, replicates, self.config.bootstrap.confidence)?;
        let iv = &summary.intervals;
        let g = self.config.grid.len();
        let c = self.tournaments.len();
        let curve = |offset: usize| -> Vec<RankCurvePoint> {
            self.config
                .grid
                .iter()
                .enumerate()
                .map(|(i, &x)| RankCurvePoint {
                    x,
                    y: iv[offset + i].point,
                    ci_low: iv[offset + i].low,
                    ci_high: iv[offset + i].high,
                })
                .collect()
        };
        let focus = self.config.focus;
        let mut categories = Vec::with_capacity(c);
        let (mut wins, mut n) = (0, 0);
        for (k, (t, table)) in self.tournaments.iter().zip(&self.tables).enumerate() {
            let base = 2 + k * (2 + g);
            let tw = t.wins(focus);
            wins += tw;
            n += t.duels.len() as u64;
            categories.push(CategoryBias {
                category: t.category.clone(),
                items_a: t.n_a,
                items_b: t.items.len() - t.n_a,
                duels: t.duels.len(),
                converged: table.converged,
                win_fraction: win_fraction_from_counts(focus, tw, t.duels.len() as u64)?,
                score_bias: iv[base],
                median_percentile: iv[base + 1],
                median_significant: iv[base + 1].excludes(50.0),
                rank_curve: curve(base + 2),
            });
        }
        let score_bias = iv[0];
        Ok(BiasReport {
            dimension: self.dimension,
            scale: self.config.scale,
            unit: self.config.bootstrap.unit,
            win_fraction: win_fraction_from_counts(focus, wins, n)?,
            score_bias,
            triangle_bound: triangle_lower_bound(score_bias.point, score_bias.low, score_bias.high),
            median_percentile: iv[1],
            median_significant: iv[1].excludes(50.0),
            rank_curve: curve(2 + c * (2 + g)),
            categories,
            bootstrap_replicates: summary.replicates,
            bootstrap_discarded: summary.discarded,
        })
    }
}

/// Fits every tournament of a dimension, bootstraps, and reports. Returns the
/// point-estimate score tables alongside the report, in tournament order.
pub fn analyze_dimension(
    dimension: &str,
    tournaments: &[Tournament],
    config: &BiasConfig,
) -> Result<(BiasReport, Vec<ScoreTable>)> {
    let analysis = DimensionAnalysis::new(dimension, tournaments, config)?;
    let tables = analysis.tables.clone();
    let replicates = (0..config.bootstrap.replicates).map(|r| analysis.replicate(r)).collect();
    Ok((analysis.finish(replicates)?, tables))
}

/// Bootstrap interval of the score bias of a single tournament.
pub fn score_bias_ci(tournament: &Tournament, config: &BiasConfig) -> Result<Interval> {
    let table = tournament.fit(&config.fit)?;
    let (a, b) = tournament.group_scores(&table)?;
    let point = scaled_score_bias(&a, &b, config.scale)?;
    let summary = bootstrap_with(&[point], &config.bootstrap, |rng| {
        let (ra, rb) = match config.bootstrap.unit {
            ResampleUnit::Item => (
                resample_indices(a.len(), rng).into_iter().map(|i| a[i]).collect(),
                resample_indices(b.len(), rng).into_iter().map(|i| b[i]).collect(),
            ),
            ResampleUnit::Duel => {
                let picks = resample_indices(tournament.duels.len(), rng);
                let graph = tournament.graph_of(picks.into_iter().map(|i| tournament.duels[i])).ok()?;
                tournament.group_scores(&fit(&graph, &config.fit).ok()?).ok()?
            }
        };
        scaled_score_bias(&ra, &rb, config.scale).ok().map(|v| vec![v])
    })?;
    Ok(summary.intervals[0])
}
