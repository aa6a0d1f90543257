//! Random forest: Gini-split CART trees on bootstrap resamples.
//!
//! Each tree draws n records with replacement, considers floor(sqrt(d))
//! features per node, and grows until leaves are pure or unsplittable
//! (minimum leaf size one). Prediction scores are fraud-vote fractions,
//! always multiples of 1/n_trees; leaf ties resolve to the legit class.

use crate::rng::{derive_seed, seeded_rng, SeedPurpose};
use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

const GAIN_EPSILON: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<Tree>,
    n_features: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Tree {
    nodes: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        fraud: bool,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

pub fn fit(xs: &[f64], n_features: usize, ys: &[bool], n_trees: usize, seed: u64) -> ForestModel {
    assert!(n_trees >= 1);
    let n = ys.len();
    assert_eq!(xs.len(), n * n_features);
    let m_try = ((n_features as f64).sqrt().floor() as usize).max(1);
    let trees = (0..n_trees)
        .map(|t| {
            let mut rng = seeded_rng(derive_seed(seed, SeedPurpose::Tree, t as u64));
            let bootstrap: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            grow_tree(xs, n_features, ys, bootstrap, m_try, &mut rng)
        })
        .collect();
    ForestModel { trees, n_features }
}

fn grow_tree(
    xs: &[f64],
    n_features: usize,
    ys: &[bool],
    bootstrap: Vec<usize>,
    m_try: usize,
    rng: &mut ChaCha12Rng,
) -> Tree {
    let mut nodes = Vec::new();
    nodes.push(Node::Leaf { fraud: false }); // placeholder for the root
    let mut work = vec![(0usize, bootstrap)];

    while let Some((slot, members)) = work.pop() {
        let fraud = members.iter().filter(|&&i| ys[i]).count();
        let legit = members.len() - fraud;
        let majority = fraud > legit; // tie goes to legit

        if fraud == 0 || legit == 0 || members.len() < 2 {
            nodes[slot] = Node::Leaf { fraud: majority };
            continue;
        }
        match best_split(xs, n_features, ys, &members, m_try, rng) {
            None => {
                nodes[slot] = Node::Leaf { fraud: majority };
            }
            Some((feature, threshold)) => {
                let (left_members, right_members): (Vec<usize>, Vec<usize>) = members
                    .into_iter()
                    .partition(|&i| xs[i * n_features + feature] <= threshold);
                let left = nodes.len();
                nodes.push(Node::Leaf { fraud: false });
                let right = nodes.len();
                nodes.push(Node::Leaf { fraud: false });
                nodes[slot] = Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                work.push((left, left_members));
                work.push((right, right_members));
            }
        }
    }
    Tree { nodes }
}

fn gini(fraud: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = fraud as f64 / total as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

/// Best (feature, threshold) by Gini gain over a random feature subset, or
/// `None` when no candidate improves on the parent. Thresholds sit halfway
/// between consecutive distinct values; the first strictly best wins.
fn best_split(
    xs: &[f64],
    n_features: usize,
    ys: &[bool],
    members: &[usize],
    m_try: usize,
    rng: &mut ChaCha12Rng,
) -> Option<(usize, f64)> {
    let n = members.len();
    let total_fraud = members.iter().filter(|&&i| ys[i]).count();
    let parent = gini(total_fraud, n);

    let mut best: Option<(usize, f64)> = None;
    let mut best_gain = GAIN_EPSILON;
    let features = index::sample(rng, n_features, m_try.min(n_features));
    let mut column: Vec<(f64, bool)> = Vec::with_capacity(n);
    for feature in features.iter() {
        column.clear();
        column.extend(
            members
                .iter()
                .map(|&i| (xs[i * n_features + feature], ys[i])),
        );
        column.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut left_fraud = 0usize;
        for i in 1..n {
            if column[i - 1].1 {
                left_fraud += 1;
            }
            if column[i - 1].0 >= column[i].0 {
                continue;
            }
            let left_n = i;
            let right_n = n - i;
            let right_fraud = total_fraud - left_fraud;
            let weighted = (left_n as f64 * gini(left_fraud, left_n)
                + right_n as f64 * gini(right_fraud, right_n))
                / n as f64;
            let gain = parent - weighted;
            if gain > best_gain {
                best_gain = gain;
                best = Some((feature, (column[i - 1].0 + column[i].0) / 2.0));
            }
        }
    }
    best
}

impl ForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Fraction of trees voting fraud — always a multiple of 1/n_trees.
    pub fn score(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n_features);
        let votes = self
            .trees
            .iter()
            .filter(|tree| tree.classify(x))
            .count();
        votes as f64 / self.trees.len() as f64
    }
}

impl Tree {
    fn classify(&self, x: &[f64]) -> bool {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { fraud } => return *fraud,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}
