//! Candidate cluster lists.
//!
//! After the first assignment pass each point records its `k_prime` nearest
//! centroids; every later membership decision considers only that list. The
//! lists are built from the distances the first pass already computed, so
//! construction adds no distance evaluations, `O(k log k')` selection work
//! per point, and `n * k_prime` indices of memory.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lloyd::sq_dist;
use crate::run::{RunConfig, RunResult};

/// Per-point lists of candidate centroid indices, each row ordered by
/// increasing distance at construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateLists {
    n: usize,
    k_prime: usize,
    lists: Vec<u32>,
}

impl CandidateLists {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    /// Candidate centroid indices for point `x`, nearest first.
    #[inline]
    pub fn row(&self, x: usize) -> &[u32] {
        &self.lists[x * self.k_prime..(x + 1) * self.k_prime]
    }

    pub fn contains(&self, x: usize, centroid: u32) -> bool {
        self.row(x).contains(&centroid)
    }
}

/// Heap entry ordered by (distance, index); the max-heap keeps the current
/// worst of the best `k_prime` seen so far.
#[derive(PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Selects each point's `k_prime` nearest centroids from the first-pass
/// distance rows (`n * k` values, row-major). Ties break toward the lower
/// centroid index; each output row is sorted by increasing distance.
pub fn build_ccl(distance_rows: &[f64], k: usize, k_prime: usize) -> Result<CandidateLists> {
    if k == 0 || distance_rows.len() % k != 0 {
        return Err(Error::invalid(format!(
            "distance rows of length {} do not tile into rows of {k}",
            distance_rows.len()
        )));
    }
    if k_prime == 0 || k_prime > k {
        return Err(Error::invalid(format!(
            "k_prime ({k_prime}) must satisfy 1 <= k_prime <= k ({k})"
        )));
    }
    let n = distance_rows.len() / k;
    let mut lists = Vec::with_capacity(n * k_prime);
    let mut heap: BinaryHeap<Entry> = BinaryHeap::with_capacity(k_prime + 1);
    for x in 0..n {
        let row = &distance_rows[x * k..(x + 1) * k];
        heap.clear();
        for (c, &d) in row.iter().enumerate() {
            let entry = Entry(d, c as u32);
            if heap.len() < k_prime {
                heap.push(entry);
            } else if entry < *heap.peek().expect("nonempty") {
                heap.pop();
                heap.push(entry);
            }
        }
        let sorted = std::mem::take(&mut heap).into_sorted_vec();
        lists.extend(sorted.iter().map(|e| e.1));
        heap = BinaryHeap::with_capacity(k_prime + 1);
    }
    Ok(CandidateLists { n, k_prime, lists })
}

/// Lloyd with assignment restricted to each point's candidate list after the
/// first iteration.
pub fn run_lloyd_ccl(ds: &Dataset, cfg: &RunConfig) -> Result<RunResult> {
    if cfg.algorithm != crate::run::Algorithm::LloydCcl {
        return Err(Error::invalid(format!(
            "run_lloyd_ccl called with algorithm {}",
            cfg.algorithm
        )));
    }
    crate::run::run(ds, cfg)
}

/// Triangle-inequality k-means with lower bounds kept only for each point's
/// candidate list.
pub fn run_elkan_ccl(ds: &Dataset, cfg: &RunConfig) -> Result<RunResult> {
    if cfg.algorithm != crate::run::Algorithm::ElkanCcl {
        return Err(Error::invalid(format!(
            "run_elkan_ccl called with algorithm {}",
            cfg.algorithm
        )));
    }
    crate::run::run(ds, cfg)
}

/// Fraction of points whose true nearest final centroid appears in their
/// candidate list. Diagnostic only: the full pass here is not added to the
/// benchmark counters.
pub fn ccl_recall(ds: &Dataset, result: &RunResult, lists: &CandidateLists) -> f64 {
    let n = ds.n();
    let cs = &result.centroids;
    let mut hits = 0usize;
    for x in 0..n {
        let point = ds.point(x);
        let mut best = f64::INFINITY;
        let mut best_c = 0u32;
        for c in 0..cs.k() {
            let d2 = sq_dist(point, cs.centroid(c));
            if d2 < best {
                best = d2;
                best_c = c as u32;
            }
        }
        if lists.contains(x, best_c) {
            hits += 1;
        }
    }
    hits as f64 / n as f64
}
