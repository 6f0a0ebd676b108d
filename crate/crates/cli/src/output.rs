//! Report envelopes, byte-deterministic JSON, and flat CSV tables.

use std::collections::BTreeMap;
use std::path::PathBuf;

use duelbias_core::bias::{BiasReport, FrequencyComparison, WinFraction};
use duelbias_core::bootstrap::Interval;
use duelbias_core::schedule::{RecoveryCurve, SchedulePlan};
use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::input::{write_csv, Input, ItemCatalog};
use crate::pipeline::{DuelStats, ScoreEntry, TagReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

/// Every JSON report: what ran, on which inputs, with which settings.
#[derive(Debug, Serialize)]
pub struct Report<'a, T> {
    pub command: &'a str,
    pub version: &'a str,
    pub seed: Option<u64>,
    pub config: &'a AnalysisConfig,
    pub inputs: BTreeMap<&'a str, InputDigest>,
    pub result: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, config: &'a AnalysisConfig, inputs: &[(&'a str, &Input)], result: T) -> Self {
        let inputs = inputs
            .iter()
            .map(|(role, input)| {
                let file = input.path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
                (*role, InputDigest { file, sha256: input.sha256.clone() })
            })
            .collect();
        Report { command, version: env!("CARGO_PKG_VERSION"), seed: config.seed, config, inputs, result }
    }
}

/// Pretty JSON with object keys sorted at every level.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let fail = |e: serde_json::Error| Error::Write { path: PathBuf::from("<json>"), source: e.into() };
    // serde_json's Map is a BTreeMap, so round-tripping through Value sorts keys
    let tree = serde_json::to_value(value).map_err(fail)?;
    let mut text = serde_json::to_string_pretty(&tree).map_err(fail)?;
    text.push('\n');
    Ok(text)
}

/// Directory that receives the files of one run.
#[derive(Debug, Clone)]
pub struct OutputDir {
    pub path: PathBuf,
}

impl OutputDir {
    pub fn create(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        std::fs::create_dir_all(&path).map_err(|source| Error::Write { path: path.clone(), source })?;
        Ok(OutputDir { path })
    }

    pub fn write(&self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.path.join(name);
        std::fs::write(&path, contents).map_err(|source| Error::Write { path: path.clone(), source })?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        self.write(name, to_json(value)?.as_bytes())
    }

    pub fn write_csv<T: Serialize>(&self, name: &str, rows: impl IntoIterator<Item = T>) -> Result<PathBuf> {
        let mut buf = Vec::new();
        write_csv(&mut buf, rows)?;
        self.write(name, &buf)
    }
}

#[derive(Serialize)]
pub struct RecoveryRow {
    pub budget: usize,
    pub mean_tau: f64,
    pub std_tau: f64,
    pub replicates: usize,
    pub seed: u64,
}

pub fn recovery_rows(curve: &RecoveryCurve) -> Vec<RecoveryRow> {
    curve
        .budgets
        .iter()
        .zip(curve.mean_tau.iter().zip(&curve.std_tau))
        .map(|(&budget, (&mean_tau, &std_tau))| RecoveryRow {
            budget,
            mean_tau,
            std_tau,
            replicates: curve.replicates,
            seed: curve.seed,
        })
        .collect()
}

#[derive(Serialize)]
pub struct ScheduleRow<'a> {
    pub duel_id: String,
    pub category: &'a str,
    pub item_a: &'a str,
    pub item_b: &'a str,
}

pub fn schedule_rows(plans: &[(String, SchedulePlan)]) -> Vec<ScheduleRow<'_>> {
    let mut n = 0;
    let mut rows = Vec::new();
    for (category, plan) in plans {
        for (a, b) in &plan.pairs {
            n += 1;
            rows.push(ScheduleRow { duel_id: format!("d{n:06}"), category, item_a: a, item_b: b });
        }
    }
    rows
}

#[derive(Serialize)]
pub struct ScoreRow<'a> {
    pub category: &'a str,
    pub dimension: &'a str,
    pub item_id: &'a str,
    pub group: &'a str,
    pub rank: usize,
    pub score: f64,
    pub log_score: f64,
}

pub fn score_rows<'a>(entries: &'a [ScoreEntry], catalog: &'a ItemCatalog) -> Vec<ScoreRow<'a>> {
    entries
        .iter()
        .flat_map(|e| {
            e.ranking.iter().enumerate().map(move |(i, id)| ScoreRow {
                category: &e.category,
                dimension: &e.dimension,
                item_id: id,
                group: catalog.get(id).map_or("", |item| item.group.as_str()),
                rank: i + 1,
                score: e.table.scores[id],
                log_score: e.table.scores[id].ln(),
            })
        })
        .collect()
}

#[derive(Serialize)]
pub struct CurveRow<'a> {
    pub dimension: &'a str,
    pub category: &'a str,
    pub x: f64,
    pub y: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Rank curves of every report; the pooled curve has category `*`.
pub fn curve_rows(reports: &[BiasReport]) -> Vec<CurveRow<'_>> {
    let mut rows = Vec::new();
    for r in reports {
        let curves = std::iter::once(("*", &r.rank_curve))
            .chain(r.categories.iter().map(|c| (c.category.as_str(), &c.rank_curve)));
        for (category, points) in curves {
            rows.extend(points.iter().map(|p| CurveRow {
                dimension: &r.dimension,
                category,
                x: p.x,
                y: p.y,
                ci_low: p.ci_low,
                ci_high: p.ci_high,
            }));
        }
    }
    rows
}

#[derive(Serialize)]
pub struct BiasRow<'a> {
    pub dimension: &'a str,
    pub category: &'a str,
    pub wins_b: u64,
    pub duels: u64,
    pub win_fraction_b: f64,
    pub win_log10_p: f64,
    pub score_bias: f64,
    pub score_bias_low: f64,
    pub score_bias_high: f64,
    pub median_percentile: f64,
    pub median_percentile_low: f64,
    pub median_percentile_high: f64,
    pub median_significant: bool,
}

fn bias_row<'a>(
    dimension: &'a str,
    category: &'a str,
    wf: &WinFraction,
    bias: &Interval,
    median: &Interval,
    median_significant: bool,
) -> BiasRow<'a> {
    BiasRow {
        dimension,
        category,
        wins_b: wf.wins,
        duels: wf.n,
        win_fraction_b: wf.fraction,
        win_log10_p: wf.p.log10(),
        score_bias: bias.point,
        score_bias_low: bias.low,
        score_bias_high: bias.high,
        median_percentile: median.point,
        median_percentile_low: median.low,
        median_percentile_high: median.high,
        median_significant,
    }
}

/// One row per dimension (category `*`) and per (dimension, category).
pub fn bias_rows(reports: &[BiasReport]) -> Vec<BiasRow<'_>> {
    let mut rows = Vec::new();
    for r in reports {
        rows.push(bias_row(&r.dimension, "*", &r.win_fraction, &r.score_bias, &r.median_percentile, r.median_significant));
        for c in &r.categories {
            rows.push(bias_row(
                &r.dimension,
                &c.category,
                &c.win_fraction,
                &c.score_bias,
                &c.median_percentile,
                c.median_significant,
            ));
        }
    }
    rows
}

#[derive(Serialize)]
pub struct TagRow<'a> {
    /// Group the tag is typical of.
    pub group: &'a str,
    pub rank: usize,
    pub tag: &'a str,
    pub count_target: u64,
    pub count_reference: u64,
    pub p_target: f64,
    pub p_reference: f64,
    pub kl: f64,
    pub chi_square: f64,
    pub log10_p: f64,
    pub stars: &'a str,
}

pub fn tag_rows(report: &TagReport) -> Vec<TagRow<'_>> {
    [("A", &report.a), ("B", &report.b)]
        .into_iter()
        .flat_map(|(group, list)| {
            list.iter().enumerate().map(move |(i, t)| TagRow {
                group,
                rank: i + 1,
                tag: &t.tag,
                count_target: t.count_target,
                count_reference: t.count_reference,
                p_target: t.p_target,
                p_reference: t.p_reference,
                kl: t.kl,
                chi_square: t.chi_square.statistic,
                log10_p: t.chi_square.p.log10(),
                stars: &t.stars,
            })
        })
        .collect()
}

#[derive(Serialize)]
pub struct FrequencyRow<'a> {
    pub category: &'a str,
    pub count_a: u64,
    pub count_b: u64,
    pub freq_a: f64,
    pub freq_b: f64,
    /// Empty when the category never occurs in group B.
    pub ratio: Option<f64>,
}

pub fn frequency_rows(freq: &FrequencyComparison) -> Vec<FrequencyRow<'_>> {
    freq.categories
        .iter()
        .map(|c| FrequencyRow {
            category: &c.category,
            count_a: c.count_a,
            count_b: c.count_b,
            freq_a: c.freq_a,
            freq_b: c.freq_b,
            ratio: c.ratio,
        })
        .collect()
}

#[derive(Serialize)]
pub struct HistogramRow<'a> {
    pub dimension: &'a str,
    pub bin_low: f64,
    pub bin_high: f64,
    pub raters: u64,
}

/// Histogram of per-rater B-win fractions, one row per bin.
pub fn histogram_rows(stats: &[DuelStats]) -> Vec<HistogramRow<'_>> {
    stats
        .iter()
        .flat_map(|s| {
            let bins = s.raters.histogram.len() as f64;
            s.raters.histogram.iter().enumerate().map(move |(i, &raters)| HistogramRow {
                dimension: &s.dimension,
                bin_low: i as f64 / bins,
                bin_high: (i + 1) as f64 / bins,
                raters,
            })
        })
        .collect()
}
