//! Free-form tag normalization and per-group tag distinctiveness.
//!
//! A tag is distinctive of a group when its pointwise KL contribution
//! `p(t) ln(p(t) / q(t))` is large, with `p` the group's smoothed tag
//! distribution and `q` the other group's. Significance comes from a 2x2
//! chi-square test on raw counts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stats::{chi_square_2x2, ChiSquare};
use crate::pvalue::PValue;

pub const DEFAULT_STOPWORD_PREFIXES: &str = include_str!("../data/stopword_prefixes.txt");
pub const DEFAULT_DASH_LEXICON: &str = include_str!("../data/dash_lexicon.tsv");

pub const DEFAULT_SMOOTHING: f64 = 0.5;
pub const DEFAULT_MIN_COUNT: u64 = 5;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// One stopword per line; blank lines and `#` comments are skipped.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    content_lines(text).map(|(_, l)| l.trim().to_lowercase()).collect()
}

/// `variant<TAB>canonical` per line; blank lines and `#` comments are skipped.
pub fn parse_lexicon(text: &str) -> Result<BTreeMap<String, String>> {
    content_lines(text)
        .map(|(n, line)| {
            let (variant, canonical) = line
                .split_once('\t')
                .ok_or_else(|| Error::domain(format!("lexicon line {n}: expected `variant<TAB>canonical`")))?;
            let (variant, canonical) = (collapse(variant), collapse(canonical));
            if variant.is_empty() || canonical.is_empty() {
                return Err(Error::domain(format!("lexicon line {n}: empty entry")));
            }
            Ok((variant, canonical))
        })
        .collect()
}

fn collapse(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Splits raw tag text into normalized tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagNormalizer {
    pub stopword_prefixes: BTreeSet<String>,
    pub dash_lexicon: BTreeMap<String, String>,
}

impl Default for TagNormalizer {
    fn default() -> Self {
        TagNormalizer {
            stopword_prefixes: parse_stopwords(DEFAULT_STOPWORD_PREFIXES),
            dash_lexicon: parse_lexicon(DEFAULT_DASH_LEXICON).expect("bundled lexicon is well formed"),
        }
    }
}

impl TagNormalizer {
    pub fn new(stopword_prefixes: BTreeSet<String>, dash_lexicon: BTreeMap<String, String>) -> Self {
        TagNormalizer { stopword_prefixes, dash_lexicon }
    }

    pub fn normalize(&self, raw: &str) -> Vec<String> {
        normalize_tag(raw, &self.stopword_prefixes, &self.dash_lexicon)
    }
}

fn normalize_piece(piece: &str, stopword_prefixes: &BTreeSet<String>, dash_lexicon: &BTreeMap<String, String>) -> String {
    let mut current = collapse(piece);
    // Stripping can expose a lexicon variant and vice versa; a few rounds
    // reach the fixed point for any sane lexicon.
    for _ in 0..8 {
        let mut words: Vec<&str> = current.split(' ').filter(|w| !w.is_empty()).collect();
        while words.first().is_some_and(|w| stopword_prefixes.contains(*w)) {
            words.remove(0);
        }
        let stripped = words.join(" ");
        let next = dash_lexicon.get(&stripped).cloned().unwrap_or(stripped);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// Comma-split, trim, lowercase, drop leading stopwords and map dash variants
/// to their canonical form. Empty pieces are dropped.
pub fn normalize_tag(raw: &str, stopword_prefixes: &BTreeSet<String>, dash_lexicon: &BTreeMap<String, String>) -> Vec<String> {
    raw.split(',')
        .map(|piece| normalize_piece(piece, stopword_prefixes, dash_lexicon))
        .filter(|t| !t.is_empty())
        .collect()
}

/// Tag counts of one group.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TagDistribution {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
    pub smoothing_epsilon: f64,
}

impl Default for TagDistribution {
    fn default() -> Self {
        TagDistribution::new(DEFAULT_SMOOTHING)
    }
}

impl TagDistribution {
    pub fn new(smoothing_epsilon: f64) -> Self {
        TagDistribution { counts: BTreeMap::new(), total: 0, smoothing_epsilon }
    }

    pub fn from_tags<I, S>(tags: I, smoothing_epsilon: f64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut d = TagDistribution::new(smoothing_epsilon);
        for t in tags {
            d.add(t);
        }
        d
    }

    pub fn add(&mut self, tag: impl Into<String>) {
        *self.counts.entry(tag.into()).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn count(&self, tag: &str) -> u64 {
        self.counts.get(tag).copied().unwrap_or(0)
    }

    /// Smoothed probability over a vocabulary of `vocabulary` tags.
    pub fn probability(&self, tag: &str, vocabulary: usize) -> f64 {
        let eps = self.smoothing_epsilon;
        (self.count(tag) as f64 + eps) / (self.total as f64 + eps * vocabulary as f64)
    }
}

/// `p_target * ln(p_target / p_reference)`.
pub fn pointwise_kl(p_target: f64, p_reference: f64) -> Result<f64> {
    for p in [p_target, p_reference] {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain(format!("probability {p} outside (0, 1]; smooth before taking KL")));
        }
    }
    Ok(p_target * libm::log(p_target / p_reference))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistinctiveTag {
    pub tag: String,
    pub count_target: u64,
    pub count_reference: u64,
    pub p_target: f64,
    pub p_reference: f64,
    pub kl: f64,
    pub chi_square: ChiSquare,
    pub stars: String,
}

/// Tags ranked by distinctiveness for each group.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistinctiveTags {
    /// Most typical of group A relative to group B.
    pub a: Vec<DistinctiveTag>,
    /// Most typical of group B relative to group A.
    pub b: Vec<DistinctiveTag>,
}

fn rank_direction(
    kept: &[&String],
    vocabulary_size: usize,
    target: &TagDistribution,
    reference: &TagDistribution,
    top_k: usize,
    yates: bool,
) -> Result<Vec<DistinctiveTag>> {
    let mut rows = kept
        .iter()
        .map(|&tag| {
            let p_target = target.probability(tag, vocabulary_size);
            let p_reference = reference.probability(tag, vocabulary_size);
            let (ct, cr) = (target.count(tag), reference.count(tag));
            // A tag used in every mention of both groups leaves an empty column.
            let chi_square = chi_square_2x2([[ct, target.total - ct], [cr, reference.total - cr]], yates)
                .unwrap_or(ChiSquare { statistic: 0.0, p: PValue::ONE });
            Ok(DistinctiveTag {
                tag: tag.clone(),
                count_target: ct,
                count_reference: cr,
                p_target,
                p_reference,
                kl: pointwise_kl(p_target, p_reference)?,
                stars: chi_square.p.stars().to_string(),
                chi_square,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        y.kl.total_cmp(&x.kl)
            .then((y.count_target + y.count_reference).cmp(&(x.count_target + x.count_reference)))
            .then(x.tag.cmp(&y.tag))
    });
    rows.truncate(top_k);
    Ok(rows)
}

/// The `top_k` most distinctive tags of each group among tags used at least
/// `min_count` times across both groups. Probabilities are smoothed over the
/// full union vocabulary; `yates` applies the continuity correction to the
/// chi-square tests.
pub fn distinctive_tags(
    tags_a: &TagDistribution,
    tags_b: &TagDistribution,
    top_k: usize,
    min_count: u64,
    yates: bool,
) -> Result<DistinctiveTags> {
    if tags_a.total == 0 || tags_b.total == 0 {
        return Err(Error::domain("distinctive tags need tags in both groups"));
    }
    let union: BTreeSet<&String> = tags_a.counts.keys().chain(tags_b.counts.keys()).collect();
    let kept: Vec<&String> = union
        .iter()
        .copied()
        .filter(|t| tags_a.count(t) + tags_b.count(t) >= min_count)
        .collect();
    Ok(DistinctiveTags {
        a: rank_direction(&kept, union.len(), tags_a, tags_b, top_k, yates)?,
        b: rank_direction(&kept, union.len(), tags_b, tags_a, top_k, yates)?,
    })
}
