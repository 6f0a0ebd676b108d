//! Exact and approximate test statistics shared by the analysis modules.
//!
//! Tail probabilities are computed in log space where they can underflow, and
//! returned as [`PValue`]s.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pvalue::PValue;

/// Relative slack used when deciding whether an outcome is "at most as likely"
/// as the observed one; absorbs rounding in the log-pmf.
const PMF_TIE_SLACK: f64 = 1e-7;

/// A correlation coefficient with its two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Correlation {
    pub coefficient: f64,
    pub p: PValue,
}

/// Pearson statistic of a 2x2 contingency table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChiSquare {
    pub statistic: f64,
    pub p: PValue,
}

fn ln_choose(n: u64, k: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = terms.iter().map(|&t| libm::exp(t - max)).sum();
    max + libm::log(sum)
}

/// Exact two-sided binomial test of `k` successes in `n` trials against
/// success probability `p0`.
///
/// The p-value is the total probability of all outcomes no more likely than
/// the observed one, accumulated with log-sum-exp so that `n` in the tens of
/// thousands does not underflow.
pub fn binomial_two_sided(k: u64, n: u64, p0: f64) -> Result<PValue> {
    if n == 0 || k > n {
        return Err(Error::domain(alloc::format!("binomial test needs 0 <= k <= n, n >= 1 (k={k}, n={n})")));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::domain("binomial null probability must lie in (0, 1)"));
    }
    let ln_p = libm::log(p0);
    let ln_q = libm::log1p(-p0);
    let ln_pmf = |j: u64| ln_choose(n, j) + j as f64 * ln_p + (n - j) as f64 * ln_q;

    let observed = ln_pmf(k) + PMF_TIE_SLACK;
    let included: Vec<f64> = (0..=n).map(ln_pmf).filter(|&l| l <= observed).collect();
    Ok(PValue::from_ln(log_sum_exp(&included)))
}

/// Natural log of `erfc(z)` for `z >= 0`, switching to the asymptotic
/// expansion once `erfc` itself underflows.
fn ln_erfc(z: f64) -> f64 {
    // libm's erfc is the fdlibm rational approximation (|error| < 1 ulp).
    let direct = libm::erfc(z);
    if direct > 1e-290 {
        return libm::log(direct);
    }
    let z2 = z * z;
    let inv = 1.0 / (2.0 * z2);
    let series = 1.0 - inv + 3.0 * inv * inv - 15.0 * inv * inv * inv;
    -z2 - libm::log(z) - 0.5 * libm::log(PI) + libm::log(series)
}

/// Upper tail of the chi-square distribution with one degree of freedom.
pub fn chi_square_1df_sf(statistic: f64) -> PValue {
    if statistic <= 0.0 {
        return PValue::ONE;
    }
    PValue::from_ln(ln_erfc(libm::sqrt(statistic / 2.0)))
}

/// Pearson chi-square test of independence on a 2x2 table of counts, rows are
/// groups and columns are (present, absent). `yates` applies the continuity
/// correction.
pub fn chi_square_2x2(table: [[u64; 2]; 2], yates: bool) -> Result<ChiSquare> {
    let [[a, b], [c, d]] = table.map(|row| row.map(|x| x as f64));
    let rows = [a + b, c + d];
    let cols = [a + c, b + d];
    if rows.iter().chain(cols.iter()).any(|&m| m == 0.0) {
        return Err(Error::domain("chi-square table has an empty row or column"));
    }
    let total = a + b + c + d;
    let mut diff = libm::fabs(a * d - b * c);
    if yates {
        diff = (diff - total / 2.0).max(0.0);
    }
    let statistic = total * diff * diff / (rows[0] * rows[1] * cols[0] * cols[1]);
    Ok(ChiSquare { statistic, p: chi_square_1df_sf(statistic) })
}

/// Natural log of the continued fraction in the regularized incomplete beta
/// function (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if libm::fabs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if libm::fabs(delta - 1.0) < EPS {
            break;
        }
    }
    libm::log(h)
}

/// `ln I_x(a, b)`. The caller passes `1 - x` separately so it can be formed
/// without cancellation.
fn ln_regularized_beta(a: f64, b: f64, x: f64, one_minus_x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if one_minus_x <= 0.0 {
        return 0.0;
    }
    let ln_beta = libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b);
    let ln_front = a * libm::log(x) + b * libm::log(one_minus_x) - ln_beta;
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front + beta_continued_fraction(a, b, x) - libm::log(a)
    } else {
        let complement = libm::exp(ln_front + beta_continued_fraction(b, a, one_minus_x) - libm::log(b));
        libm::log1p(-complement)
    }
}

/// Two-sided p-value of the t-test for a correlation coefficient `r` over `n`
/// observations (`n - 2` degrees of freedom).
pub fn correlation_p_value(r: f64, n: usize) -> PValue {
    let df = (n - 2) as f64;
    let r = r.clamp(-1.0, 1.0);
    // t^2 = r^2 df / (1 - r^2), so df / (df + t^2) = 1 - r^2.
    let x = (1.0 - r) * (1.0 + r);
    if x <= 0.0 {
        return PValue::Value(0.0);
    }
    PValue::from_ln(ln_regularized_beta(df / 2.0, 0.5, x, r * r))
}

/// Two-sided p-value of Student's t statistic with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> PValue {
    if !t.is_finite() {
        return PValue::Value(0.0);
    }
    let t2 = t * t;
    PValue::from_ln(ln_regularized_beta(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2)))
}

fn check_pair(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::domain(alloc::format!(
            "correlation inputs differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::domain("correlation needs at least three observations"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::domain("correlation inputs must be finite"));
    }
    Ok(())
}

fn pearson_coefficient(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("correlation of a constant input is undefined"));
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Sample Pearson correlation with a t-approximation p-value.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Correlation> {
    check_pair(xs, ys)?;
    let r = pearson_coefficient(xs, ys)?;
    Ok(Correlation { coefficient: r, p: correlation_p_value(r, xs.len()) })
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rank correlation: Pearson correlation of average ranks, with a
/// t-approximation p-value.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Correlation> {
    check_pair(xs, ys)?;
    let r = pearson_coefficient(&average_ranks(xs), &average_ranks(ys))?;
    Ok(Correlation { coefficient: r, p: correlation_p_value(r, xs.len()) })
}

/// Percentile rank of `value` within `sample` using the midpoint convention
/// `100 * (#below + #equal / 2) / n`.
pub fn percentile_rank(value: f64, sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::domain("percentile rank of an empty sample"));
    }
    let (mut below, mut equal) = (0usize, 0usize);
    for &s in sample {
        if s < value {
            below += 1;
        } else if s == value {
            equal += 1;
        }
    }
    Ok(100.0 * (below as f64 + 0.5 * equal as f64) / sample.len() as f64)
}

/// Linearly interpolated quantile (`q` in `[0, 1]`) of an ascending slice.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = libm::ceil(pos) as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Median of an unsorted sample (mean of the two middle values for even sizes).
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, 0.5)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n - 1 denominator); zero for fewer than two values.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    libm::sqrt(ss / (values.len() - 1) as f64)
}
