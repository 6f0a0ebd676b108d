//! Balanced two-group duel schedules, Kendall's tau, and the rank-recovery
//! simulation used to pick a comparison budget.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::choice::{fit, win_probability, ComparisonGraph, FitConfig, ItemId};
use crate::error::{Error, Result};
use crate::stats;

/// Every pair joins one item of each group, and every item appears in exactly
/// `duels_per_item` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SchedulePlan {
    pub group_a: Vec<ItemId>,
    pub group_b: Vec<ItemId>,
    pub duels_per_item: usize,
    pub pairs: Vec<(ItemId, ItemId)>,
}

/// Deterministic generator for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Index pairs `(a, b)` of a `duels_per_item`-regular bipartite multigraph on
/// `n` + `n` vertices.
///
/// Each round pairs every A item with a distinct B item. Without
/// `distinct_opponents` the rounds are independent uniform permutations, so
/// a pair may repeat. With it, round `r` uses a shifted copy of one random
/// matching with a distinct shift per round, which never repeats a pair.
pub fn balanced_pairs<R: Rng + ?Sized>(
    n: usize,
    duels_per_item: usize,
    distinct_opponents: bool,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    if n == 0 {
        return Err(Error::InfeasibleSchedule("groups are empty".to_string()));
    }
    if duels_per_item == 0 {
        return Err(Error::InfeasibleSchedule("duels_per_item must be at least 1".to_string()));
    }
    if distinct_opponents && duels_per_item > n {
        return Err(Error::InfeasibleSchedule(format!(
            "{duels_per_item} distinct opponents requested but each group has {n} items"
        )));
    }
    let mut pairs = Vec::with_capacity(n * duels_per_item);
    let mut perm: Vec<usize> = (0..n).collect();
    if distinct_opponents {
        perm.shuffle(rng);
        let mut shifts: Vec<usize> = (0..n).collect();
        shifts.shuffle(rng);
        for &shift in &shifts[..duels_per_item] {
            pairs.extend((0..n).map(|a| (a, perm[(a + shift) % n])));
        }
    } else {
        for _ in 0..duels_per_item {
            perm.shuffle(rng);
            pairs.extend(perm.iter().enumerate().map(|(a, &b)| (a, b)));
        }
    }
    Ok(pairs)
}

/// Random balanced schedule between two equally sized groups.
pub fn sample_balanced_duels(
    group_a: &[ItemId],
    group_b: &[ItemId],
    duels_per_item: usize,
    seed: u64,
) -> Result<SchedulePlan> {
    sample_balanced_duels_with(group_a, group_b, duels_per_item, seed, false)
}

pub fn sample_balanced_duels_with(
    group_a: &[ItemId],
    group_b: &[ItemId],
    duels_per_item: usize,
    seed: u64,
    distinct_opponents: bool,
) -> Result<SchedulePlan> {
    if group_a.len() != group_b.len() {
        return Err(Error::SizeMismatch { group_a: group_a.len(), group_b: group_b.len() });
    }
    let mut rng = rng_from_seed(seed);
    let pairs = balanced_pairs(group_a.len(), duels_per_item, distinct_opponents, &mut rng)?;
    Ok(SchedulePlan {
        group_a: group_a.to_vec(),
        group_b: group_b.to_vec(),
        duels_per_item,
        pairs: pairs
            .into_iter()
            .map(|(a, b)| (group_a[a].clone(), group_b[b].clone()))
            .collect(),
    })
}

/// Kendall's tau-b between two paired samples, adjusting for ties in either.
pub fn kendall_tau_b(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::domain("kendall tau inputs differ in length"));
    }
    let n = xs.len();
    let (mut concordant, mut discordant, mut ties_x, mut ties_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = xs[i].partial_cmp(&xs[j]).ok_or_else(|| Error::domain("NaN in kendall tau input"))?;
            let dy = ys[i].partial_cmp(&ys[j]).ok_or_else(|| Error::domain("NaN in kendall tau input"))?;
            use core::cmp::Ordering::Equal;
            match (dx, dy) {
                (Equal, Equal) => {
                    ties_x += 1;
                    ties_y += 1;
                }
                (Equal, _) => ties_x += 1,
                (_, Equal) => ties_y += 1,
                (a, b) if a == b => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let total = (n * n.saturating_sub(1) / 2) as i64;
    let denominator = libm::sqrt(((total - ties_x) * (total - ties_y)) as f64);
    if denominator == 0.0 {
        return Err(Error::domain("kendall tau is undefined for constant input"));
    }
    Ok(((concordant - discordant) as f64 / denominator).clamp(-1.0, 1.0))
}

/// Kendall's tau between two orderings of the same item set.
pub fn kendall_tau(rank_a: &[ItemId], rank_b: &[ItemId]) -> Result<f64> {
    let position = |rank: &[ItemId]| -> Result<BTreeMap<ItemId, f64>> {
        let mut map = BTreeMap::new();
        for (i, id) in rank.iter().enumerate() {
            if map.insert(id.clone(), i as f64).is_some() {
                return Err(Error::domain(format!("item `{id}` ranked twice")));
            }
        }
        Ok(map)
    };
    let pa = position(rank_a)?;
    let pb = position(rank_b)?;
    if pa.len() != pb.len() || pa.keys().ne(pb.keys()) {
        return Err(Error::domain("rankings cover different item sets"));
    }
    let xs: Vec<f64> = pa.values().copied().collect();
    let ys: Vec<f64> = pb.values().copied().collect();
    kendall_tau_b(&xs, &ys)
}

/// Mean and spread of Kendall's tau between true and recovered rankings, per
/// comparison budget.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecoveryCurve {
    pub budgets: Vec<usize>,
    pub mean_tau: Vec<f64>,
    pub std_tau: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
}

impl RecoveryCurve {
    /// Summarizes `taus[b][r]`, the tau of replicate `r` at budget `b`.
    pub fn from_replicates(budgets: &[usize], taus: &[Vec<f64>], seed: u64) -> Self {
        RecoveryCurve {
            budgets: budgets.to_vec(),
            mean_tau: taus.iter().map(|t| stats::mean(t)).collect(),
            std_tau: taus.iter().map(|t| stats::std_dev(t)).collect(),
            replicates: taus.first().map_or(0, Vec::len),
            seed,
        }
    }
}

/// Duels per item implied by a total budget over `n_items_per_group` pairs of items.
pub fn duels_per_item_for_budget(n_items_per_group: usize, budget: usize) -> Result<usize> {
    if n_items_per_group == 0 || budget == 0 || budget % n_items_per_group != 0 {
        return Err(Error::InfeasibleSchedule(format!(
            "budget {budget} cannot be split evenly over {n_items_per_group} items per group"
        )));
    }
    Ok(budget / n_items_per_group)
}

/// Seed of replicate `replicate` in a run seeded with `seed`.
pub fn replicate_seed(seed: u64, replicate: usize) -> u64 {
    seed.wrapping_add(replicate as u64)
}

/// One replicate of the rank-recovery experiment: standard-normal
/// log-qualities for `2 * n_items_per_group` items, a balanced schedule of
/// `budget` duels with outcomes drawn from the model, a fit, and Kendall's
/// tau between true and fitted scores.
pub fn simulate_replicate(
    n_items_per_group: usize,
    budget: usize,
    seed: u64,
    fit_config: &FitConfig,
) -> Result<f64> {
    let k = duels_per_item_for_budget(n_items_per_group, budget)?;
    let n = n_items_per_group;
    let mut rng = rng_from_seed(seed);
    let qualities: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
    let pairs = balanced_pairs(n, k, false, &mut rng)?;
    let ids: Vec<ItemId> = (0..2 * n).map(|i| format!("{i:04}")).collect();
    let mut graph = ComparisonGraph::new(ids)?;
    for (a, b) in pairs {
        let b = n + b;
        let p = win_probability(libm::exp(qualities[a]), libm::exp(qualities[b]))?;
        if rng.random::<f64>() < p {
            graph.push_duel(a, b)?;
        } else {
            graph.push_duel(b, a)?;
        }
    }
    let table = fit(&graph, fit_config)?;
    let estimated: Vec<f64> = graph.items().iter().map(|id| table.scores[id]).collect();
    kendall_tau_b(&qualities, &estimated)
}

/// Runs the rank-recovery experiment for every budget. Replicate `r` uses
/// seed `seed + r` at every budget, so budgets share their latent qualities.
pub fn simulate_rank_recovery(
    n_items_per_group: usize,
    budgets: &[usize],
    replicates: usize,
    seed: u64,
    fit_config: &FitConfig,
) -> Result<RecoveryCurve> {
    if replicates == 0 {
        return Err(Error::domain("at least one replicate is required"));
    }
    for &budget in budgets {
        duels_per_item_for_budget(n_items_per_group, budget)?;
    }
    let taus = budgets
        .iter()
        .map(|&budget| {
            (0..replicates)
                .map(|r| simulate_replicate(n_items_per_group, budget, replicate_seed(seed, r), fit_config))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RecoveryCurve::from_replicates(budgets, &taus, seed))
}
