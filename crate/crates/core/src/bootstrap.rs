//! Percentile bootstrap.
//!
//! Replicate `r` draws from its own generator seeded with `seed + r`, so
//! replicates can be evaluated in any order (or concurrently) and still give
//! the same interval.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::schedule::{replicate_seed, rng_from_seed};
use crate::stats::quantile_sorted;

/// Share of failed replicates above which the bootstrap is rejected.
pub const MAX_DISCARD_FRACTION: f64 = 0.10;

pub const MIN_REPLICATES: usize = 100;

/// Which records are resampled with replacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ResampleUnit {
    /// Resample duels and refit the scores.
    #[default]
    Duel,
    /// Resample items within each group, keeping their fitted scores.
    Item,
}

/// A point estimate with a confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub point: f64,
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn exact(point: f64) -> Self {
        Interval { point, low: point, high: point }
    }

    pub fn excludes(&self, value: f64) -> bool {
        value < self.low || value > self.high
    }

    pub fn contains(&self, value: f64) -> bool {
        !self.excludes(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub confidence: f64,
    pub unit: ResampleUnit,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig { replicates: 1000, seed: 0, confidence: 0.95, unit: ResampleUnit::Duel }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < MIN_REPLICATES {
            return Err(Error::domain(alloc::format!(
                "bootstrap needs at least {MIN_REPLICATES} replicates, got {}",
                self.replicates
            )));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::domain("bootstrap confidence must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Generator for replicate `r`.
    pub fn replicate_rng(&self, r: usize) -> ChaCha8Rng {
        rng_from_seed(replicate_seed(self.seed, r))
    }
}

/// Intervals for a vector of statistics, plus replicate bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSummary {
    pub intervals: Vec<Interval>,
    pub replicates: usize,
    pub discarded: usize,
}

/// Indices of a with-replacement resample of `n` records.
pub fn resample_indices<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Percentile interval of `samples` around `point`. The interval is widened
/// to contain the point estimate when the bootstrap distribution is skewed
/// away from it.
pub fn percentile_interval(point: f64, samples: &mut [f64], confidence: f64) -> Interval {
    if samples.is_empty() {
        return Interval::exact(point);
    }
    samples.sort_by(f64::total_cmp);
    let tail = (1.0 - confidence) / 2.0;
    let low = quantile_sorted(samples, tail);
    let high = quantile_sorted(samples, 1.0 - tail);
    Interval { point, low: low.min(point), high: high.max(point) }
}

/// Turns per-replicate statistic vectors (`None` for a failed replicate) into
/// intervals. Fails when more than [`MAX_DISCARD_FRACTION`] of replicates
/// failed.
pub fn summarize_replicates(
    point: &[f64],
    replicates: Vec<Option<Vec<f64>>>,
    confidence: f64,
) -> Result<BootstrapSummary> {
    let total = replicates.len();
    let kept: Vec<Vec<f64>> = replicates.into_iter().flatten().collect();
    let discarded = total - kept.len();
    if discarded as f64 > MAX_DISCARD_FRACTION * total as f64 {
        return Err(Error::UnstableBootstrap { discarded, replicates: total });
    }
    if let Some(bad) = kept.iter().find(|v| v.len() != point.len()) {
        return Err(Error::domain(alloc::format!(
            "replicate produced {} statistics, expected {}",
            bad.len(),
            point.len()
        )));
    }
    let mut column = Vec::with_capacity(kept.len());
    let intervals = point
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            column.clear();
            column.extend(kept.iter().map(|v| v[i]).filter(|v| v.is_finite()));
            percentile_interval(p, &mut column, confidence)
        })
        .collect();
    Ok(BootstrapSummary { intervals, replicates: total, discarded })
}

/// Bootstrap of a vector-valued statistic where the caller performs the
/// resampling. `replicate` receives the replicate's generator and returns
/// `None` when the statistic cannot be computed on that resample.
pub fn bootstrap_with<F>(point: &[f64], config: &BootstrapConfig, mut replicate: F) -> Result<BootstrapSummary>
where
    F: FnMut(&mut ChaCha8Rng) -> Option<Vec<f64>>,
{
    config.validate()?;
    let samples = (0..config.replicates)
        .map(|r| replicate(&mut config.replicate_rng(r)))
        .collect();
    summarize_replicates(point, samples, config.confidence)
}

/// Percentile bootstrap interval of a scalar statistic over `data`,
/// resampling records with replacement.
pub fn bootstrap_ci<T, F>(data: &[T], mut statistic: F, config: &BootstrapConfig) -> Result<Interval>
where
    T: Clone,
    F: FnMut(&[T]) -> Option<f64>,
{
    if data.is_empty() {
        return Err(Error::domain("bootstrap of an empty sample"));
    }
    let point = statistic(data).ok_or_else(|| Error::domain("statistic undefined on the full sample"))?;
    let mut buffer = Vec::with_capacity(data.len());
    let summary = bootstrap_with(&[point], config, |rng| {
        buffer.clear();
        buffer.extend(resample_indices(data.len(), rng).into_iter().map(|i| data[i].clone()));
        statistic(&buffer).map(|v| alloc::vec![v])
    })?;
    Ok(summary.intervals[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cfg(seed: u64) -> BootstrapConfig {
        BootstrapConfig { replicates: 500, seed, ..BootstrapConfig::default() }
    }

    #[test]
    fn constant_statistic_is_degenerate() {
        let ci = bootstrap_ci(&[1.0, 2.0, 3.0], |_| Some(4.2), &cfg(1)).unwrap();
        assert_eq!(ci, Interval::exact(4.2));
    }

    #[test]
    fn seeded_runs_repeat() {
        let data: Vec<f64> = (0..40).map(|i| (i * 7 % 13) as f64).collect();
        let mean = |xs: &[f64]| Some(xs.iter().sum::<f64>() / xs.len() as f64);
        let a = bootstrap_ci(&data, mean, &cfg(5)).unwrap();
        let b = bootstrap_ci(&data, mean, &cfg(5)).unwrap();
        assert_eq!(a, b);
        assert!(a.low < a.point && a.point < a.high);
    }

    #[test]
    fn rejects_unstable_statistics() {
        let mut calls = 0;
        let flaky = |_: &[f64]| {
            calls += 1;
            if calls % 5 == 0 { None } else { Some(1.0) }
        };
        let err = bootstrap_ci(&[1.0, 2.0], flaky, &cfg(0)).unwrap_err();
        assert!(matches!(err, Error::UnstableBootstrap { .. }));
    }

    #[test]
    fn tolerates_few_failures() {
        let mut calls = 0;
        let flaky = |_: &[f64]| {
            calls += 1;
            if calls % 20 == 0 { None } else { Some(1.0) }
        };
        assert!(bootstrap_ci(&[1.0, 2.0], flaky, &cfg(0)).is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(bootstrap_ci(&[1.0], |_| Some(0.0), &BootstrapConfig { replicates: 99, ..cfg(0) }).is_err());
        assert!(bootstrap_ci::<f64, _>(&[], |_| Some(0.0), &cfg(0)).is_err());
    }

    #[test]
    fn interval_contains_point() {
        let mut samples = vec![5.0, 6.0, 7.0, 8.0];
        let iv = percentile_interval(1.0, &mut samples, 0.95);
        assert_eq!(iv.low, 1.0);
        assert!(iv.high > 7.9);
    }
}
