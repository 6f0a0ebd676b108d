//! Bradley-Terry choice model: win probabilities, maximum-likelihood fitting
//! and likelihood evaluation.
//!
//! Scores are fit with Hunter's minorization-maximization (MM) iteration
//!
//! ```text
//! s_i <- (W_i + a) / ( sum_{duels d with i} 1 / (s_i + s_opp(d))  +  2a / (s_i + r) )
//! ```
//!
//! where `W_i` is the number of wins of item `i`, `a` the regularization
//! pseudo-count and `r` the score of a virtual reference item that every real
//! item has beaten, and lost to, `a` times. Each sweep is renormalized; the
//! reference score is rescaled with the items so the regularized objective
//! is unchanged by the renormalization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type ItemId = String;

/// Log-scores are kept within `[-LOG_CLAMP, LOG_CLAMP]` so that items whose
/// maximum-likelihood score is 0 or infinite stay representable.
const LOG_CLAMP: f64 = 300.0;

/// Probability that an item with score `score_a` beats one with `score_b`.
pub fn win_probability(score_a: f64, score_b: f64) -> Result<f64> {
    for s in [score_a, score_b] {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::domain(alloc::format!("score must be positive and finite, got {s}")));
        }
    }
    Ok(score_a / (score_a + score_b))
}

/// Items and the multiset of (winner, loser) duels among them.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonGraph {
    items: Vec<ItemId>,
    index: BTreeMap<ItemId, usize>,
    duels: Vec<(usize, usize)>,
}

impl ComparisonGraph {
    pub fn new(items: Vec<ItemId>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, id) in items.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::domain(alloc::format!("duplicate item `{id}`")));
            }
        }
        Ok(ComparisonGraph { items, index, duels: Vec::new() })
    }

    /// Builds a graph from item ids and (winner index, loser index) pairs.
    pub fn with_duels(items: Vec<ItemId>, duels: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut graph = Self::new(items)?;
        for (w, l) in duels {
            graph.push_duel(w, l)?;
        }
        Ok(graph)
    }

    pub fn push_duel(&mut self, winner: usize, loser: usize) -> Result<()> {
        let n = self.items.len();
        if winner >= n || loser >= n {
            return Err(Error::domain(alloc::format!("duel ({winner}, {loser}) references an item outside 0..{n}")));
        }
        if winner == loser {
            return Err(Error::domain(alloc::format!("item `{}` cannot duel itself", self.items[winner])));
        }
        self.duels.push((winner, loser));
        Ok(())
    }

    /// Records a duel by item ids.
    pub fn push_outcome(&mut self, winner: &str, loser: &str) -> Result<()> {
        let w = self.index_of(winner).ok_or_else(|| Error::domain(alloc::format!("unknown item `{winner}`")))?;
        let l = self.index_of(loser).ok_or_else(|| Error::domain(alloc::format!("unknown item `{loser}`")))?;
        self.push_duel(w, l)
    }

    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn duels(&self) -> &[(usize, usize)] {
        &self.duels
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// True when every item can reach every other through "beat" edges, the
    /// condition under which the unregularized maximum-likelihood estimate
    /// exists.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.items.len();
        if n <= 1 {
            return true;
        }
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        for &(w, l) in &self.duels {
            forward[w].push(l);
            backward[l].push(w);
        }
        let reaches_all = |adj: &[Vec<usize>]| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        reaches_all(&forward) && reaches_all(&backward)
    }
}

/// Gauge applied to fitted scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Normalization {
    /// Product of scores is one (log-scores sum to zero).
    #[default]
    GeometricMeanOne,
    /// Scores sum to one.
    SumOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FitConfig {
    pub max_iterations: usize,
    /// Stop once no log-score moves by more than this between sweeps.
    pub tolerance: f64,
    /// Pseudo-wins and pseudo-losses against the virtual reference item.
    pub regularization: f64,
    pub normalization: Normalization,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iterations: 10_000,
            tolerance: 1e-8,
            regularization: 0.1,
            normalization: Normalization::GeometricMeanOne,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("fit tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::domain("fit needs at least one iteration"));
        }
        if !(self.regularization >= 0.0 && self.regularization.is_finite()) {
            return Err(Error::domain("regularization must be a nonnegative finite number"));
        }
        Ok(())
    }
}

/// Fitted scores of one tournament.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreTable {
    pub scores: BTreeMap<ItemId, f64>,
    pub normalization: Normalization,
    /// Unregularized log-likelihood of the duels at the fitted scores.
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    pub regularization: f64,
    /// Score of the virtual reference item, in the same gauge as `scores`.
    pub reference_score: f64,
}

impl ScoreTable {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.scores.get(id).copied()
    }

    pub fn log_score(&self, id: &str) -> Option<f64> {
        self.get(id).map(libm::log)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Copy with every score (and the reference) multiplied by `k`.
    pub fn rescaled(&self, k: f64) -> ScoreTable {
        let mut out = self.clone();
        for v in out.scores.values_mut() {
            *v *= k;
        }
        out.reference_score *= k;
        out
    }
}

fn normalize_log_scores(log_scores: &mut [f64], log_reference: &mut f64, normalization: Normalization) {
    if log_scores.is_empty() {
        return;
    }
    let shift = match normalization {
        Normalization::GeometricMeanOne => log_scores.iter().sum::<f64>() / log_scores.len() as f64,
        Normalization::SumOne => {
            let max = log_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            max + libm::log(log_scores.iter().map(|&l| libm::exp(l - max)).sum::<f64>())
        }
    };
    for l in log_scores.iter_mut() {
        *l = (*l - shift).clamp(-LOG_CLAMP, LOG_CLAMP);
    }
    *log_reference -= shift;
}

/// Log-scores plus the log-score of the virtual reference item.
#[derive(Clone)]
struct State {
    logs: Vec<f64>,
    reference: f64,
}

impl State {
    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.logs.iter().copied().chain(core::iter::once(self.reference))
    }

    fn value(&self, k: usize) -> f64 {
        if k < self.logs.len() { self.logs[k] } else { self.reference }
    }

    fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.logs.iter_mut().chain(core::iter::once(&mut self.reference))
    }

    fn max_change(&self, other: &State) -> f64 {
        self.logs.iter().zip(&other.logs).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max)
    }
}

struct Workspace {
    scores: Vec<f64>,
    denominators: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace { scores: vec![0.0; n], denominators: vec![0.0; n] }
    }
}

struct Problem {
    /// (i, j, duels between i and j) with i < j.
    pairs: Vec<(usize, usize, f64)>,
    wins: Vec<f64>,
    alpha: f64,
    normalization: Normalization,
}

impl Problem {
    /// One simultaneous MM update of every item, then renormalization.
    fn mm_step(&self, from: &State, to: &mut State, work: &mut Workspace) {
        for (s, &l) in work.scores.iter_mut().zip(&from.logs) {
            *s = libm::exp(l);
        }
        work.denominators.iter_mut().for_each(|d| *d = 0.0);
        for &(i, j, c) in &self.pairs {
            let share = c / (work.scores[i] + work.scores[j]);
            work.denominators[i] += share;
            work.denominators[j] += share;
        }
        let reference = libm::exp(from.reference);
        for (i, out) in to.logs.iter_mut().enumerate() {
            let numerator = self.wins[i] + self.alpha;
            let denominator = work.denominators[i] + 2.0 * self.alpha / (work.scores[i] + reference);
            *out = if numerator > 0.0 { libm::log(numerator) - libm::log(denominator) } else { -LOG_CLAMP };
        }
        to.reference = from.reference;
        normalize_log_scores(&mut to.logs, &mut to.reference, self.normalization);
    }

    /// Regularized log-likelihood; invariant under a common shift of all
    /// log-scores including the reference.
    fn objective(&self, x: &State) -> f64 {
        let mut total: f64 = self.wins.iter().zip(&x.logs).map(|(w, l)| if *w > 0.0 { w * l } else { 0.0 }).sum();
        for &(i, j, c) in &self.pairs {
            total -= c * log_sum_exp(x.logs[i], x.logs[j]);
        }
        if self.alpha > 0.0 {
            for &l in &x.logs {
                total += self.alpha * (l + x.reference - 2.0 * log_sum_exp(l, x.reference));
            }
        }
        total
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + libm::log1p(libm::exp(-libm::fabs(a - b)))
}

/// Maximum-likelihood (optionally regularized) Bradley-Terry scores.
///
/// With `regularization == 0` the estimate only exists when the graph is
/// strongly connected; otherwise the iteration runs to `max_iterations` and
/// the table reports `converged == false`.
pub fn fit(graph: &ComparisonGraph, config: &FitConfig) -> Result<ScoreTable> {
    config.validate()?;
    let n = graph.len();
    if n == 0 {
        return Err(Error::DegenerateFit);
    }
    let alpha = config.regularization;
    if alpha == 0.0 {
        if graph.duels.is_empty() {
            return Err(Error::DegenerateFit);
        }
        let mut seen = vec![false; n];
        for &(w, l) in &graph.duels {
            seen[w] = true;
            seen[l] = true;
        }
        let missing: Vec<ItemId> = seen
            .iter()
            .zip(&graph.items)
            .filter(|(s, _)| !**s)
            .map(|(_, id)| id.clone())
            .collect();
        if !missing.is_empty() {
            return Err(Error::UnidentifiableItems(missing));
        }
    }

    let mut wins = vec![0.0f64; n];
    let mut pair_counts: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(w, l) in &graph.duels {
        wins[w] += 1.0;
        *pair_counts.entry((w.min(l), w.max(l))).or_insert(0.0) += 1.0;
    }
    let problem = Problem {
        pairs: pair_counts.into_iter().map(|((i, j), c)| (i, j, c)).collect(),
        wins,
        alpha,
        normalization: config.normalization,
    };

    let mut x = State { logs: vec![0.0; n], reference: 0.0 };
    normalize_log_scores(&mut x.logs, &mut x.reference, config.normalization);
    let mut work = Workspace::new(n);
    let mut converged = false;
    let mut iterations = 0;

    // SQUAREM: two MM steps, a jump along the extrapolated path, and one
    // stabilizing MM step; the plain second step is kept whenever the jump
    // would lower the objective. Convergence is judged on plain MM steps.
    'outer: while iterations < config.max_iterations {
        let mut chain = [x.clone(), x.clone(), x.clone()];
        for k in 1..3 {
            let (done, rest) = chain.split_at_mut(k);
            problem.mm_step(&done[k - 1], &mut rest[0], &mut work);
            iterations += 1;
            if rest[0].max_change(&done[k - 1]) < config.tolerance {
                x = rest[0].clone();
                converged = true;
                break 'outer;
            }
            if iterations >= config.max_iterations {
                x = rest[0].clone();
                break 'outer;
            }
        }
        let [x0, x1, x2] = chain;
        let (mut rr, mut vv) = (0.0, 0.0);
        for (a, (b, c)) in x0.values().zip(x1.values().zip(x2.values())) {
            let r = b - a;
            let v = c - 2.0 * b + a;
            rr += r * r;
            vv += v * v;
        }
        let step = if vv > 0.0 { -libm::sqrt(rr / vv) } else { -1.0 };
        if step >= -1.0 {
            x = x2;
            continue;
        }
        let mut jump = x0.clone();
        for (k, out) in jump.values_mut().enumerate() {
            let (a, b, c) = (x0.value(k), x1.value(k), x2.value(k));
            let r = b - a;
            let v = c - 2.0 * b + a;
            *out = (a - 2.0 * step * r + step * step * v).clamp(-LOG_CLAMP, LOG_CLAMP);
        }
        normalize_log_scores(&mut jump.logs, &mut jump.reference, config.normalization);
        let mut stabilized = x2.clone();
        problem.mm_step(&jump, &mut stabilized, &mut work);
        iterations += 1;
        let better = problem.objective(&stabilized) >= problem.objective(&x2);
        x = if better && stabilized.logs.iter().all(|l| l.is_finite()) { stabilized } else { x2 };
    }
    let State { logs: log_scores, reference: log_reference } = x;
    if alpha == 0.0 && !graph.is_strongly_connected() {
        converged = false;
    }

    let log_likelihood = graph
        .duels
        .iter()
        .map(|&(w, l)| log_win_probability(log_scores[w], log_scores[l]))
        .sum();
    Ok(ScoreTable {
        scores: graph
            .items
            .iter()
            .cloned()
            .zip(log_scores.iter().map(|&l| libm::exp(l)))
            .collect(),
        normalization: config.normalization,
        log_likelihood,
        iterations,
        converged,
        regularization: alpha,
        reference_score: libm::exp(log_reference),
    })
}

/// `ln(s_w / (s_w + s_l))` from log-scores.
fn log_win_probability(log_winner: f64, log_loser: f64) -> f64 {
    let d = log_loser - log_winner;
    if d > 0.0 {
        -(d + libm::log1p(libm::exp(-d)))
    } else {
        -libm::log1p(libm::exp(d))
    }
}

fn graph_log_scores(graph: &ComparisonGraph, scores: &ScoreTable) -> Result<Vec<f64>> {
    // Only items referenced by a duel need a score.
    let mut used = BTreeSet::new();
    for &(w, l) in &graph.duels {
        used.insert(w);
        used.insert(l);
    }
    let mut logs = vec![f64::NAN; graph.len()];
    for i in used {
        let id = &graph.items[i];
        logs[i] = scores.log_score(id).ok_or_else(|| Error::MissingScore(id.clone()))?;
    }
    Ok(logs)
}

/// Sum over duels of the log win probability of the recorded winner.
pub fn log_likelihood(graph: &ComparisonGraph, scores: &ScoreTable) -> Result<f64> {
    let logs = graph_log_scores(graph, scores)?;
    Ok(graph.duels.iter().map(|&(w, l)| log_win_probability(logs[w], logs[l])).sum())
}

/// The objective maximized by [`fit`]: the duel log-likelihood plus, for every
/// item in the graph, `regularization` wins and losses against the reference
/// item.
pub fn regularized_log_likelihood(graph: &ComparisonGraph, scores: &ScoreTable) -> Result<f64> {
    let mut total = log_likelihood(graph, scores)?;
    let alpha = scores.regularization;
    if alpha > 0.0 {
        let log_reference = libm::log(scores.reference_score);
        for id in &graph.items {
            let l = scores.log_score(id).ok_or_else(|| Error::MissingScore(id.clone()))?;
            total += alpha * (log_win_probability(l, log_reference) + log_win_probability(log_reference, l));
        }
    }
    Ok(total)
}

/// Item ids by descending score; equal scores are ordered by ascending id.
pub fn rank_items(scores: &ScoreTable) -> Vec<ItemId> {
    let mut entries: Vec<(&ItemId, f64)> = scores.scores.iter().map(|(k, &v)| (k, v)).collect();
    // BTreeMap iteration is already id-ascending, and the sort is stable.
    entries.sort_by(|a, b| b.1.total_cmp(&a.1));
    entries.into_iter().map(|(k, _)| k.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn ids(names: &[&str]) -> Vec<ItemId> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn unregularized() -> FitConfig {
        FitConfig { regularization: 0.0, ..FitConfig::default() }
    }

    #[test]
    fn win_probability_examples() {
        assert_eq!(win_probability(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(win_probability(3.0, 1.0).unwrap(), 0.75);
        assert!((win_probability(0.9, 0.1).unwrap() - 0.9).abs() < 1e-15);
        assert!(win_probability(0.0, 1.0).is_err());
        assert!(win_probability(1.0, f64::INFINITY).is_err());
        assert!(win_probability(-1.0, 1.0).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(ComparisonGraph::with_duels(ids(&["a", "b"]), [(0, 2)]).is_err());
        assert!(ComparisonGraph::with_duels(ids(&["a", "b"]), [(1, 1)]).is_err());
        assert!(ComparisonGraph::new(ids(&["a", "a"])).is_err());
    }

    #[test]
    fn symmetric_record_gives_equal_scores() {
        let duels = core::iter::repeat_n((0, 1), 5).chain(core::iter::repeat_n((1, 0), 5));
        let graph = ComparisonGraph::with_duels(ids(&["a", "b"]), duels).unwrap();
        let table = fit(&graph, &unregularized()).unwrap();
        assert!(table.converged);
        assert!((table.get("a").unwrap() - table.get("b").unwrap()).abs() < 1e-12);
        assert!((table.get("a").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_item_fit_matches_win_rate() {
        let graph = ComparisonGraph::with_duels(ids(&["a", "b"]), [(0, 1), (0, 1), (0, 1), (1, 0)]).unwrap();
        let table = fit(&graph, &unregularized()).unwrap();
        let p = win_probability(table.get("a").unwrap(), table.get("b").unwrap()).unwrap();
        assert!((p - 0.75).abs() < 1e-6, "p = {p}");
    }

    #[test]
    fn cycle_gives_equal_scores() {
        let graph = ComparisonGraph::with_duels(ids(&["a", "b", "c"]), [(0, 1), (1, 2), (2, 0)]).unwrap();
        let table = fit(&graph, &unregularized()).unwrap();
        for id in ["a", "b", "c"] {
            assert!((table.get(id).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_errors() {
        let empty = ComparisonGraph::new(ids(&["a", "b"])).unwrap();
        assert_eq!(fit(&empty, &unregularized()), Err(Error::DegenerateFit));
        let lonely = ComparisonGraph::with_duels(ids(&["a", "b", "c"]), [(0, 1), (1, 0)]).unwrap();
        assert_eq!(fit(&lonely, &unregularized()), Err(Error::UnidentifiableItems(ids(&["c"]))));
        assert!(fit(&empty, &FitConfig { tolerance: 0.0, ..FitConfig::default() }).is_err());
        assert!(fit(&empty, &FitConfig { max_iterations: 0, ..FitConfig::default() }).is_err());
    }

    #[test]
    fn regularization_scores_unplayed_items() {
        let empty = ComparisonGraph::new(ids(&["a", "b"])).unwrap();
        let table = fit(&empty, &FitConfig::default()).unwrap();
        assert!(table.converged);
        assert!((table.get("a").unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn disconnected_graph_reports_non_convergence() {
        // a always beats b: the unregularized estimate does not exist
        let graph = ComparisonGraph::with_duels(ids(&["a", "b"]), [(0, 1), (0, 1)]).unwrap();
        let config = FitConfig { max_iterations: 500, ..unregularized() };
        let table = fit(&graph, &config).unwrap();
        assert!(!table.converged);
        assert!(table.scores.values().all(|s| s.is_finite() && *s > 0.0));
        assert!(table.get("a").unwrap() > table.get("b").unwrap());
    }

    #[test]
    fn normalizations() {
        let graph = ComparisonGraph::with_duels(ids(&["a", "b", "c"]), [(0, 1), (1, 2), (0, 2), (2, 0), (1, 0)]).unwrap();
        let gm = fit(&graph, &FitConfig::default()).unwrap();
        let product: f64 = gm.scores.values().product();
        assert!((product - 1.0).abs() < 1e-9);
        let sum_cfg = FitConfig { normalization: Normalization::SumOne, ..FitConfig::default() };
        let so = fit(&graph, &sum_cfg).unwrap();
        assert!((so.scores.values().sum::<f64>() - 1.0).abs() < 1e-9);
        // same model, different gauge
        let ratio_gm = gm.get("a").unwrap() / gm.get("c").unwrap();
        let ratio_so = so.get("a").unwrap() / so.get("c").unwrap();
        assert!((ratio_gm - ratio_so).abs() < 1e-6);
        let ll_gm = regularized_log_likelihood(&graph, &gm).unwrap();
        let ll_so = regularized_log_likelihood(&graph, &so).unwrap();
        assert!((ll_gm - ll_so).abs() < 1e-9);
    }

    #[test]
    fn log_likelihood_examples() {
        let table = ScoreTable {
            scores: [("a".to_string(), 3.0), ("b".to_string(), 1.0)].into_iter().collect(),
            normalization: Normalization::GeometricMeanOne,
            log_likelihood: 0.0,
            iterations: 0,
            converged: true,
            regularization: 0.0,
            reference_score: 1.0,
        };
        let none = ComparisonGraph::new(ids(&["a", "b"])).unwrap();
        assert_eq!(log_likelihood(&none, &table).unwrap(), 0.0);
        let two = ComparisonGraph::with_duels(ids(&["a", "b"]), [(0, 1), (0, 1)]).unwrap();
        assert!((log_likelihood(&two, &table).unwrap() - (-0.575364144903562)).abs() < 1e-12);
        let equal = table.rescaled(1.0);
        let mut equal = equal;
        equal.scores.insert("a".to_string(), 1.0);
        let one = ComparisonGraph::with_duels(ids(&["a", "b"]), [(1, 0)]).unwrap();
        assert!((log_likelihood(&one, &equal).unwrap() + core::f64::consts::LN_2).abs() < 1e-12);
        let stranger = ComparisonGraph::with_duels(ids(&["a", "z"]), [(1, 0)]).unwrap();
        assert_eq!(log_likelihood(&stranger, &table), Err(Error::MissingScore("z".to_string())));
    }

    #[test]
    fn ranking() {
        let mk = |pairs: &[(&str, f64)]| ScoreTable {
            scores: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            normalization: Normalization::GeometricMeanOne,
            log_likelihood: 0.0,
            iterations: 0,
            converged: true,
            regularization: 0.0,
            reference_score: 1.0,
        };
        assert_eq!(rank_items(&mk(&[("a", 2.0), ("b", 1.0), ("c", 3.0)])), ids(&["c", "a", "b"]));
        assert_eq!(rank_items(&mk(&[("b", 1.0), ("c", 1.0), ("a", 1.0)])), ids(&["a", "b", "c"]));
        assert_eq!(rank_items(&mk(&[("x", 0.5)])), ids(&["x"]));
    }
}
