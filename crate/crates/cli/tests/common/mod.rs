#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use duelbias_core::schedule::{balanced_pairs, rng_from_seed};
use rand::Rng;

pub struct Fixture {
    pub items: PathBuf,
    pub duels: PathBuf,
    pub tags: PathBuf,
}

/// A synthetic study: for every category, `n` items per group; for every
/// (category, dimension) a balanced tournament with `k` duels per item whose
/// outcomes follow Bradley-Terry with group-B log-scores shifted by the
/// dimension's offset. Both groups share "delicious"; "homemade" is planted
/// on group A and "cheesy" on group B.
pub struct Study<'a> {
    pub categories: &'a [&'a str],
    pub dimensions: &'a [(&'a str, f64)],
    pub n: usize,
    pub k: usize,
    pub seed: u64,
}

impl Study<'_> {
    pub fn write(&self, dir: &Path) -> Fixture {
        let mut rng = rng_from_seed(self.seed);
        let mut items = String::from("item_id,group,category,external_ref\n");
        let mut duels = String::from("duel_id,category,dimension,item_a,item_b,winner,rater_id\n");
        let mut tags = String::from("duel_id,item_id,rater_id,raw_tag\n");
        let mut id = 0;
        for category in self.categories {
            let qa: Vec<f64> = (0..self.n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let qb: Vec<f64> = (0..self.n).map(|_| rng.random_range(-1.0..1.0)).collect();
            for side in ["A", "B"] {
                for i in 0..self.n {
                    writeln!(items, "{category}-{side}{i},{side},{category},").unwrap();
                }
            }
            for (dimension, offset) in self.dimensions {
                for (a, b) in balanced_pairs(self.n, self.k, false, &mut rng).unwrap() {
                    id += 1;
                    let p_b = 1.0 / (1.0 + (qa[a] - qb[b] - offset).exp());
                    let winner = if rng.random::<f64>() < p_b { "B" } else { "A" };
                    let rater = rng.random_range(0..25);
                    writeln!(duels, "d{id},{category},{dimension},{category}-A{a},{category}-B{b},{winner},r{rater}").unwrap();
                    let tag_a = if rng.random::<f64>() < 0.3 { "Seems home made" } else { "Looks delicious" };
                    let tag_b = if rng.random::<f64>() < 0.4 { "very cheesy" } else { "Looks delicious" };
                    writeln!(tags, "d{id},{category}-A{a},r{rater},{tag_a}").unwrap();
                    writeln!(tags, "d{id},{category}-B{b},r{rater},{tag_b}").unwrap();
                }
            }
        }
        let fixture = Fixture { items: dir.join("items.csv"), duels: dir.join("duels.csv"), tags: dir.join("tags.csv") };
        std::fs::write(&fixture.items, items).unwrap();
        std::fs::write(&fixture.duels, duels).unwrap();
        std::fs::write(&fixture.tags, tags).unwrap();
        fixture
    }
}

pub const FOUR_DIMENSIONS: [(&str, f64); 4] = [("tasty", 0.5), ("caloric", 0.4), ("healthy", -0.2), ("home", -0.6)];
