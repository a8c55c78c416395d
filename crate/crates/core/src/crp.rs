//! Threshold-free clustering of a meaning's words in the style of a Chinese
//! Restaurant Process, plus an average-linkage agglomerative baseline that
//! stops at a similarity threshold.

use std::collections::HashMap;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::align::SimilarityMatrix;
use crate::error::{Error, Result};

/// An assignment of items `0..n` to clusters `0..k`.
///
/// Labels are always numbered by first appearance, so two partitions compare
/// equal exactly when they group the items the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Groups items by equal keys.
    pub fn from_keys<T: Hash + Eq>(keys: &[T]) -> Self {
        let mut map: HashMap<&T, usize> = HashMap::new();
        let labels = keys
            .iter()
            .map(|key| {
                let next = map.len();
                *map.entry(key).or_insert(next)
            })
            .collect();
        Self {
            labels,
            k: map.len(),
        }
    }

    pub fn from_labels(labels: &[usize]) -> Self {
        Self::from_keys(labels)
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            k: n,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, item: usize) -> usize {
        self.labels[item]
    }

    /// Number of clusters.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of items.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Members of each cluster, by label.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Linkage {
    /// Mean similarity to the cluster's members.
    #[default]
    Average,
    /// Highest similarity to any member.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanOrder {
    /// Words in word-list order.
    #[default]
    Sequential,
    /// One seeded permutation, reused for every scan.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrpConfig {
    alpha: f64,
    max_scans: usize,
    pub linkage: Linkage,
    pub order: ScanOrder,
}

impl CrpConfig {
    pub const DEFAULT_ALPHA: f64 = 0.01;
    pub const DEFAULT_MAX_SCANS: usize = 3;

    pub fn new(alpha: f64, max_scans: usize, linkage: Linkage) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if max_scans == 0 {
            return Err(Error::InvalidParameter(
                "at least one scan is required".into(),
            ));
        }
        Ok(Self {
            alpha,
            max_scans,
            linkage,
            order: ScanOrder::Sequential,
        })
    }

    pub fn with_order(mut self, order: ScanOrder) -> Self {
        self.order = order;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_scans(&self) -> usize {
        self.max_scans
    }
}

impl Default for CrpConfig {
    fn default() -> Self {
        Self::new(
            Self::DEFAULT_ALPHA,
            Self::DEFAULT_MAX_SCANS,
            Linkage::Average,
        )
        .expect("valid defaults")
    }
}

/// Partition plus a record of how the scans went.
#[derive(Debug, Clone, PartialEq)]
pub struct CrpOutcome {
    pub partition: Partition,
    /// Words that changed cluster during each performed scan.
    pub reassignments: Vec<usize>,
    /// Whether the last performed scan moved no word.
    pub converged: bool,
}

impl CrpOutcome {
    pub fn scans(&self) -> usize {
        self.reassignments.len()
    }
}

struct Table {
    id: usize,
    members: Vec<usize>,
}

fn affinity(s: &SimilarityMatrix, word: usize, members: &[usize], linkage: Linkage) -> f64 {
    match linkage {
        Linkage::Average => {
            // Mean taken relative to the first value, so a cluster of equal
            // similarities averages to exactly that value and equal clusters tie.
            let first = s.get(word, members[0]);
            let spread: f64 = members[1..].iter().map(|&m| s.get(word, m) - first).sum();
            first + spread / members.len() as f64
        }
        Linkage::Single => members
            .iter()
            .map(|&m| s.get(word, m))
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Clusters the words of `s`. See [`crp_cluster_traced`].
pub fn crp_cluster(s: &SimilarityMatrix, config: &CrpConfig) -> Partition {
    crp_cluster_traced(s, config).partition
}

/// Starts from singletons and repeatedly scans the words. Each word leaves
/// its cluster (an emptied cluster disappears) and its affinity to every
/// remaining cluster is computed with the configured linkage. If the best
/// affinity is below `alpha` the word opens a new cluster, otherwise it joins
/// the best one, the oldest cluster winning ties. Scanning stops after a scan
/// that moves no word, or after `max_scans` scans.
pub fn crp_cluster_traced(s: &SimilarityMatrix, config: &CrpConfig) -> CrpOutcome {
    let n = s.len();
    let mut order: Vec<usize> = (0..n).collect();
    if let ScanOrder::Shuffled(seed) = config.order {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let mut tables: Vec<Table> = (0..n)
        .map(|i| Table {
            id: i,
            members: vec![i],
        })
        .collect();
    let mut seat: Vec<usize> = (0..n).collect();
    let mut next_id = n;
    let mut reassignments = Vec::new();
    let mut converged = false;

    for _ in 0..config.max_scans {
        let mut moved = 0;
        for &w in &order {
            let pos = tables
                .iter()
                .position(|t| t.id == seat[w])
                .expect("every word is seated");
            let table = &mut tables[pos];
            let at = table.members.iter().position(|&m| m == w).unwrap();
            table.members.remove(at);
            let origin = if table.members.is_empty() {
                tables.remove(pos);
                None
            } else {
                Some(seat[w])
            };

            let mut best: Option<(usize, f64)> = None;
            for (i, t) in tables.iter().enumerate() {
                let a = affinity(s, w, &t.members, config.linkage);
                if best.is_none_or(|(_, b)| a > b) {
                    best = Some((i, a));
                }
            }

            let dest = match best {
                Some((i, a)) if a >= config.alpha => {
                    tables[i].members.push(w);
                    Some(tables[i].id)
                }
                _ => {
                    tables.push(Table {
                        id: next_id,
                        members: vec![w],
                    });
                    seat[w] = next_id;
                    next_id += 1;
                    None
                }
            };
            if let Some(id) = dest {
                seat[w] = id;
            }
            if origin != dest {
                moved += 1;
            }
        }
        reassignments.push(moved);
        if moved == 0 {
            converged = true;
            break;
        }
    }

    CrpOutcome {
        partition: Partition::from_labels(&seat),
        reassignments,
        converged,
    }
}

/// Agglomerative average-linkage clustering: merges the two clusters with the
/// highest mean pairwise similarity until that mean drops below `threshold`
/// or one cluster is left.
pub fn flat_cluster_threshold(s: &SimilarityMatrix, threshold: f64) -> Partition {
    let n = s.len();
    // sums[a][b]: total similarity between clusters a and b
    let mut sums: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| s.get(i, j)).collect())
        .collect();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut rep: Vec<usize> = (0..n).collect();
    let mut remaining = n;

    while remaining > 1 {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in (0..n).filter(|&a| active[a]) {
            for b in (a + 1..n).filter(|&b| active[b]) {
                let avg = sums[a][b] / (size[a] * size[b]) as f64;
                if best.is_none_or(|(_, _, v)| avg > v) {
                    best = Some((a, b, avg));
                }
            }
        }
        let (a, b, avg) = best.expect("at least two active clusters");
        if avg < threshold {
            break;
        }
        for c in 0..n {
            if active[c] && c != a && c != b {
                let merged = sums[a][c] + sums[b][c];
                sums[a][c] = merged;
                sums[c][a] = merged;
            }
        }
        size[a] += size[b];
        active[b] = false;
        for r in rep.iter_mut() {
            if *r == b {
                *r = a;
            }
        }
        remaining -= 1;
    }
    Partition::from_labels(&rep)
}
