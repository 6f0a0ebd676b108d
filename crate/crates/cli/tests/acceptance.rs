//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p duelbias --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use duelbias::pipeline;
use duelbias_core::bias::{median_percentile_rank, rank_curve, score_bias_ci, BiasConfig, DuelRecord, Side, Tournament};
use duelbias_core::bootstrap::{BootstrapConfig, ResampleUnit};
use duelbias_core::choice::{fit, win_probability, ComparisonGraph, FitConfig, ItemId};
use duelbias_core::schedule::{balanced_pairs, rng_from_seed};
use duelbias_core::stats::{binomial_two_sided, chi_square_2x2, median, percentile_rank};
use duelbias_core::tags::{distinctive_tags, normalize_tag, TagDistribution, TagNormalizer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn ids(n: usize) -> Vec<ItemId> {
    (0..n).map(|i| format!("i{i}")).collect()
}

// ---------------------------------------------------------------- 1

fn rank_recovery() -> Outcome {
    let budgets = [100, 200, 500, 1000, 2000];
    let start = Instant::now();
    let curve = pipeline::simulate(50, &budgets, 50, 1, &FitConfig::default()).expect("simulation runs");
    let elapsed = start.elapsed();
    let tau_500 = curve.mean_tau[2];
    let inversions: Vec<f64> = curve.mean_tau.windows(2).map(|w| w[0] - w[1]).filter(|d| *d > 0.0).collect();
    let monotone = inversions.len() <= 1 && inversions.iter().all(|d| *d <= 0.02);
    let in_band = (0.75..=0.85).contains(&tau_500);
    let fast = elapsed < Duration::from_secs(60);
    let taus: Vec<String> = curve.mean_tau.iter().map(|t| format!("{t:.3}")).collect();
    Outcome::new(
        in_band && monotone && fast,
        format!(
            "mean tau at N=500 {tau_500:.3} (band [0.75, 0.85]: {}), curve [{}] monotone: {monotone}, {:.1}s",
            if in_band { "in" } else { "out" },
            taus.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 2

fn oracle_ll(log_scores: &[f64], duels: &[(usize, usize)]) -> f64 {
    duels
        .iter()
        .map(|&(w, l)| {
            let (sw, sl) = (log_scores[w].exp(), log_scores[l].exp());
            (sw / (sw + sl)).ln()
        })
        .sum()
}

/// Best log-likelihood on the 0.01 lattice of log-scores with the last item
/// pinned at 0, searched coarse-to-fine (the objective is concave).
fn grid_oracle(n: usize, duels: &[(usize, usize)]) -> f64 {
    let dims = n - 1;
    let mut center = vec![0.0; dims];
    let mut best = f64::NEG_INFINITY;
    for (step, half_width) in [(0.5, 8.0), (0.1, 0.6), (0.01, 0.15)] {
        let k = (half_width / step as f64).round() as i64;
        let side = (2 * k + 1) as usize;
        let mut best_point = center.clone();
        let mut logs = vec![0.0; n];
        for idx in 0..side.pow(dims as u32) {
            let mut rem = idx;
            for d in 0..dims {
                let offset = (rem % side) as i64 - k;
                rem /= side;
                logs[d] = ((center[d] + offset as f64 * step) * 100.0).round() / 100.0;
            }
            let ll = oracle_ll(&logs, duels);
            if ll > best {
                best = ll;
                best_point.copy_from_slice(&logs[..dims]);
            }
        }
        center = best_point;
    }
    best
}

fn mle_oracle() -> Outcome {
    let config = FitConfig { regularization: 0.0, ..FitConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut instances = Vec::new();
    while instances.len() < 200 {
        let n = rng.random_range(2..=4);
        let m = rng.random_range(n..=12);
        let duels: Vec<(usize, usize)> = (0..m)
            .map(|_| {
                let w = rng.random_range(0..n);
                let l = (w + rng.random_range(1..n)) % n;
                (w, l)
            })
            .collect();
        let graph = ComparisonGraph::with_duels(ids(n), duels.iter().copied()).unwrap();
        // the unregularized maximum only exists on strongly connected graphs
        if graph.is_strongly_connected() {
            instances.push((n, duels, graph));
        }
    }
    let worst = instances
        .par_iter()
        .map(|(n, duels, graph)| {
            let table = fit(graph, &config).unwrap();
            (table.log_likelihood - grid_oracle(*n, duels)).abs()
        })
        .reduce(|| 0.0, f64::max);

    let mut worst_pair: f64 = 0.0;
    for (wins, losses) in [(3, 1), (1, 1), (7, 2), (1, 9), (5, 4)] {
        let duels = std::iter::repeat_n((0, 1), wins).chain(std::iter::repeat_n((1, 0), losses));
        let table = fit(&ComparisonGraph::with_duels(ids(2), duels).unwrap(), &config).unwrap();
        let p = win_probability(table.get("i0").unwrap(), table.get("i1").unwrap()).unwrap();
        worst_pair = worst_pair.max((p - wins as f64 / (wins + losses) as f64).abs());
    }
    Outcome::new(
        worst < 1e-3 && worst_pair < 1e-6,
        format!("200 instances, max |LL - grid| {worst:.2e} (tol 1e-3); two-item max |p - win rate| {worst_pair:.2e} (tol 1e-6)"),
    )
}

// ---------------------------------------------------------------- 3

fn choose(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Two-sided p-value by enumeration: outcomes no more likely than `k`, in
/// exact integer arithmetic for p0 = 1/2.
fn enumerate_half(k: u64, n: u64) -> f64 {
    let observed = choose(n, k);
    let mass: u128 = (0..=n).map(|j| choose(n, j)).filter(|&c| c <= observed).sum();
    (mass as f64 / 2f64.powi(n as i32)).min(1.0)
}

fn exact_tests() -> Outcome {
    let mut worst_binom: f64 = 0.0;
    for n in 1..=20 {
        for k in 0..=n {
            let p = binomial_two_sided(k, n, 0.5).unwrap().value();
            worst_binom = worst_binom.max((p - enumerate_half(k, n)).abs());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tail = ChiSquared::new(1.0).unwrap();
    let (mut worst_stat, mut worst_p): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let t = [[rng.random_range(1..500u64), rng.random_range(1..500u64)], [
            rng.random_range(1..500u64),
            rng.random_range(1..500u64),
        ]];
        let [[a, b], [c, d]] = t.map(|r| r.map(|x| x as f64));
        let total = a + b + c + d;
        let expected = |row: f64, col: f64| row * col / total;
        let hand = [(a, a + b, a + c), (b, a + b, b + d), (c, c + d, a + c), (d, c + d, b + d)]
            .iter()
            .map(|&(o, r, k)| (o - expected(r, k)).powi(2) / expected(r, k))
            .sum::<f64>();
        let got = chi_square_2x2(t, false).unwrap();
        worst_stat = worst_stat.max((got.statistic - hand).abs());
        worst_p = worst_p.max((got.p.value() - tail.sf(hand)).abs());
    }
    Outcome::new(
        worst_binom < 1e-12 && worst_stat < 1e-9 && worst_p < 1e-9,
        format!(
            "binomial n<=20 max err {worst_binom:.1e} (tol 1e-12); chi-square 50 tables max stat err {worst_stat:.1e}, p err {worst_p:.1e} (tol 1e-9)"
        ),
    )
}

// ---------------------------------------------------------------- 4

const COVERAGE_ITEMS: usize = 10;
const COVERAGE_DUELS_PER_ITEM: usize = 100;
const COVERAGE_OFFSET: f64 = 0.5;

/// One trial: standard-normal log-qualities with group B shifted by the
/// offset, a balanced design, and a duel bootstrap of the score bias. The
/// truth is the realized mean log-quality difference.
fn coverage_trial(trial: u64) -> bool {
    let n = COVERAGE_ITEMS;
    let mut rng = rng_from_seed(1000 + trial);
    let qa: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let qb: Vec<f64> = (0..n).map(|_| COVERAGE_OFFSET + rng.sample::<f64, _>(StandardNormal)).collect();
    let truth = qb.iter().sum::<f64>() / n as f64 - qa.iter().sum::<f64>() / n as f64;
    let records: Vec<DuelRecord> = balanced_pairs(n, COVERAGE_DUELS_PER_ITEM, false, &mut rng)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(d, (a, b))| {
            let p_a = 1.0 / (1.0 + (qb[b] - qa[a]).exp());
            DuelRecord {
                duel_id: format!("d{d}"),
                category: "c".into(),
                dimension: "x".into(),
                item_a: format!("a{a}"),
                item_b: format!("b{b}"),
                winner: if rng.random::<f64>() < p_a { Side::A } else { Side::B },
                rater_id: String::new(),
            }
        })
        .collect();
    let tournament = Tournament::from_records("c", "x", &records).unwrap();
    let config = BiasConfig {
        bootstrap: BootstrapConfig { replicates: 300, seed: trial, confidence: 0.95, unit: ResampleUnit::Duel },
        ..BiasConfig::default()
    };
    score_bias_ci(&tournament, &config).unwrap().contains(truth)
}

fn bootstrap_coverage() -> Outcome {
    let start = Instant::now();
    let covered = (0..200u64).into_par_iter().filter(|&t| coverage_trial(t)).count();
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(300);
    Outcome::new(
        (180..=198).contains(&covered) && fast,
        format!(
            "{covered}/200 intervals cover the truth (band 90-99%), {COVERAGE_ITEMS} items per group, {COVERAGE_DUELS_PER_ITEM} duels per item, B=300, {:.0}s",
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 5

const CASES: usize = 1000;

fn random_scores(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.random_range(1..40);
    (0..n).map(|_| rng.random_range(-4.0f64..4.0).exp()).collect()
}

fn rank_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grid: Vec<f64> = (0..=100).map(f64::from).collect();
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    let mut fail = |name: &'static str, ok: bool| {
        let entry = failures.entry(name).or_default();
        if !ok {
            *entry += 1;
        }
    };
    for _ in 0..CASES {
        let (a, b) = (random_scores(&mut rng), random_scores(&mut rng));
        let k = rng.random_range(-3.0f64..3.0).exp();
        let (ka, kb): (Vec<f64>, Vec<f64>) = (a.iter().map(|x| x * k).collect(), b.iter().map(|x| x * k).collect());

        let curve = rank_curve(&a, &b, &grid).unwrap();
        let scaled = rank_curve(&ka, &kb, &grid).unwrap();
        let m = median_percentile_rank(&a, &b).unwrap();
        fail("gauge invariance", curve == scaled && (m - median_percentile_rank(&ka, &kb).unwrap()).abs() < 1e-9);

        fail("rank-curve monotonicity", curve.windows(2).all(|w| w[0].1 <= w[1].1));

        let at_50 = curve.iter().find(|p| p.0 == 50.0).unwrap().1;
        fail("median/curve consistency at 50", (at_50 - m).abs() <= 100.0 / a.len() as f64);

        let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let identities = percentile_rank(lo / 2.0, &a).unwrap() == 0.0
            && percentile_rank(hi * 2.0, &a).unwrap() == 100.0
            && {
                let mean_rank = a.iter().map(|&x| percentile_rank(x, &a).unwrap()).sum::<f64>() / a.len() as f64;
                (mean_rank - 50.0).abs() < 1e-9
            }
            && (percentile_rank(median(&a), &a).unwrap() - 50.0).abs() <= 50.0 / a.len() as f64 + 1e-9;
        fail("percentile identities", identities);
    }
    let failed: Vec<String> = failures.iter().filter(|(_, n)| **n > 0).map(|(k, n)| format!("{k}: {n}")).collect();
    Outcome::new(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} properties x {CASES} cases hold", failures.len())
        } else {
            format!("violations: {}", failed.join(", "))
        },
    )
}

// ---------------------------------------------------------------- 6

fn tag_pipeline() -> Outcome {
    let normalizer = TagNormalizer::default();
    let examples = [
        ("Looks tasty", vec!["tasty"]),
        ("mouth watering", vec!["mouth-watering"]),
        ("mouthwatering", vec!["mouth-watering"]),
    ];
    let normalized = examples.iter().all(|(raw, want)| {
        normalize_tag(raw, &normalizer.stopword_prefixes, &normalizer.dash_lexicon) == *want
    });

    // both groups share a vocabulary; group B uses the planted tag four times
    // as often as group A
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let vocabulary: Vec<String> = (0..30).map(|i| format!("tag{i:02}")).collect();
    let raw = |planted_weight: f64, rng: &mut ChaCha8Rng| -> Vec<String> {
        let weights: Vec<f64> = std::iter::once(planted_weight).chain(vocabulary.iter().map(|_| 1.0)).collect();
        let total: f64 = weights.iter().sum();
        (0..3000)
            .map(|_| {
                let mut u = rng.random::<f64>() * total;
                let pick = weights.iter().position(|w| {
                    u -= w;
                    u < 0.0
                });
                match pick.unwrap_or(weights.len() - 1) {
                    0 => "Looks cheesy".to_string(),
                    i => vocabulary[i - 1].clone(),
                }
            })
            .collect()
    };
    let to_dist = |raws: Vec<String>| {
        TagDistribution::from_tags(raws.iter().flat_map(|r| normalizer.normalize(r)), 0.5)
    };
    let a = to_dist(raw(0.5, &mut rng));
    let b = to_dist(raw(2.0, &mut rng));
    let ranked = distinctive_tags(&a, &b, 10, 5, false).unwrap();
    let top = &ranked.b[0];
    let planted_first = top.tag == "cheesy" && top.kl > 0.0 && top.chi_square.p.is_below(1e-3);
    let not_in_a = ranked.a.iter().all(|t| t.tag != "cheesy" || t.kl < 0.0);
    let distinct: BTreeSet<&str> = ranked.b.iter().map(|t| t.tag.as_str()).collect();
    Outcome::new(
        normalized && planted_first && not_in_a && distinct.len() == ranked.b.len(),
        format!(
            "normalization examples {}; top group-B tag `{}` (counts {} vs {}, chi-square p {:.1e})",
            if normalized { "exact" } else { "differ" },
            top.tag,
            top.count_target,
            top.count_reference,
            top.chi_square.p.value()
        ),
    )
}

// ---------------------------------------------------------------- 7

const RELEASED_DATA_ENV: &str = "DUELBIAS_RELEASED_DATA";

fn released_data() -> Option<Outcome> {
    let dir = std::env::var_os(RELEASED_DATA_ENV)?;
    Some(reproduce(std::path::Path::new(&dir)))
}

/// Win fractions, frequency divergence and pooled median percentiles on the
/// released dataset, laid out as items.csv and duels.csv (plus an optional
/// mapping.toml) in one directory.
fn reproduce(dir: &std::path::Path) -> Outcome {
    use duelbias::config::AnalysisConfig;
    use duelbias::input::{parse_duels, parse_items, Input};
    use duelbias::mapping::ColumnMapping;

    let mapping_path = dir.join("mapping.toml");
    let mapping = if mapping_path.exists() { ColumnMapping::load(&mapping_path).unwrap() } else { ColumnMapping::default() };
    let loaded = Input::read(&dir.join("items.csv"))
        .and_then(|i| parse_items(&i, &mapping))
        .and_then(|catalog| {
            let duels = parse_duels(&Input::read(&dir.join("duels.csv"))?, &catalog, &[], &mapping)?;
            Ok((catalog, duels))
        });
    let (catalog, duels) = match loaded {
        Ok(x) => x,
        Err(e) => return Outcome::new(false, format!("could not load {}: {e}", dir.display())),
    };
    let config = AnalysisConfig { seed: Some(1), ..AnalysisConfig::default() };
    let bundle = match pipeline::run_pipeline(&config, &catalog, &duels, None) {
        Ok(b) => b,
        Err(e) => return Outcome::new(false, format!("pipeline failed: {e}")),
    };
    let targets = [("tasty", 61.73, 74.0), ("caloric", 58.46, 66.0), ("healthy", 45.96, 42.0), ("home", 38.08, 27.0)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (dimension, win, percentile) in targets {
        let stats = bundle.duel_stats.iter().find(|d| d.dimension == dimension);
        let report = bundle.bias.iter().find(|r| r.dimension == dimension);
        match (stats, report) {
            (Some(s), Some(r)) => {
                let w = (s.win_fraction.fraction * 10_000.0).round() / 100.0;
                let m = r.median_percentile.point;
                ok &= w == win && (m - percentile).abs() <= 3.0;
                parts.push(format!("{dimension} {w:.2}% / {m:.1}"));
            }
            _ => {
                ok = false;
                parts.push(format!("{dimension} missing"));
            }
        }
    }
    let rho = bundle.frequency.as_ref().and_then(|f| f.spearman.as_ref()).map(|c| c.coefficient);
    ok &= rho.is_some_and(|r| (r - 0.49).abs() <= 0.01);
    Outcome::new(ok, format!("{}; frequency rho {rho:?}", parts.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("1 rank recovery", rank_recovery),
        ("2 MLE oracle equivalence", mle_oracle),
        ("3 exact tests", exact_tests),
        ("4 bootstrap coverage", bootstrap_coverage),
        ("5 rank-statistic invariance", rank_invariance),
        ("6 tag pipeline", tag_pipeline),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = run();
        failed += usize::from(!outcome.pass);
        println!("{} criterion {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    }
    match released_data() {
        Some(outcome) => {
            failed += usize::from(!outcome.pass);
            println!("{} criterion 7 released-data reproduction: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
        }
        None => println!("WAIVED criterion 7 released-data reproduction: set {RELEASED_DATA_ENV} to a directory with the released items.csv and duels.csv"),
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
