//! Distance kernel, assignment and update steps, the MSE objective, and the
//! Lloyd runner. The full-assignment pass here is also the brute-force
//! reference the accelerated variants are tested against.

use std::time::Instant;

use crate::ccl::{build_ccl, CandidateLists};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::run::{DistanceCounters, RunConfig, RunResult};
use crate::seeding::CentroidSet;

/// Squared Euclidean distance.
///
/// Panics if the slices differ in length; shape checks belong at the
/// operation boundaries, not in the kernel.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        acc += diff * diff;
    }
    acc
}

/// Per-point cluster membership with per-cluster sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// Cluster index of each point, all in `[0, k)`.
    pub owner: Vec<u32>,
    /// Number of points owned by each cluster; sums to n.
    pub counts: Vec<usize>,
}

impl Assignment {
    pub fn from_owners(owner: Vec<u32>, k: usize) -> Self {
        let mut counts = vec![0usize; k];
        for &o in &owner {
            counts[o as usize] += 1;
        }
        Self { owner, counts }
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }
}

fn check_dims(ds: &Dataset, cs: &CentroidSet) -> Result<()> {
    if ds.d() != cs.d() {
        return Err(Error::DimensionMismatch {
            left: ds.d(),
            right: cs.d(),
        });
    }
    Ok(())
}

/// Assigns every point to its nearest centroid by squared distance, ties
/// broken toward the lowest centroid index. Adds `n*k` point-centroid
/// distance computations to `counters`.
pub fn assign_full(
    ds: &Dataset,
    cs: &CentroidSet,
    counters: &mut DistanceCounters,
) -> Result<Assignment> {
    check_dims(ds, cs)?;
    let owners = full_pass(ds, cs, counters, None);
    Ok(Assignment::from_owners(owners, cs.k()))
}

/// Like [`assign_full`] but also returns the full n x k matrix of squared
/// distances, which the candidate-list construction consumes once.
pub fn assign_full_with_rows(
    ds: &Dataset,
    cs: &CentroidSet,
    counters: &mut DistanceCounters,
) -> Result<(Assignment, Vec<f64>)> {
    check_dims(ds, cs)?;
    let mut rows = vec![0.0; ds.n() * cs.k()];
    let owners = full_pass(ds, cs, counters, Some(&mut rows));
    Ok((Assignment::from_owners(owners, cs.k()), rows))
}

fn full_pass(
    ds: &Dataset,
    cs: &CentroidSet,
    counters: &mut DistanceCounters,
    mut rows: Option<&mut Vec<f64>>,
) -> Vec<u32> {
    let (n, k) = (ds.n(), cs.k());
    let mut owners = vec![0u32; n];
    for x in 0..n {
        let point = ds.point(x);
        let mut best = f64::INFINITY;
        let mut best_c = 0u32;
        for c in 0..k {
            let d2 = sq_dist(point, cs.centroid(c));
            if let Some(rows) = rows.as_deref_mut() {
                rows[x * k + c] = d2;
            }
            if d2 < best {
                best = d2;
                best_c = c as u32;
            }
        }
        owners[x] = best_c;
    }
    counters.point_centroid += (n as u64) * (k as u64);
    owners
}

/// Recomputes each centroid as the mean of its members. Empty clusters keep
/// their previous centroid. `shifts` records the Euclidean distance each
/// centroid moved.
pub fn update_centroids(ds: &Dataset, a: &Assignment, prev: &CentroidSet) -> CentroidSet {
    let (n, d, k) = (ds.n(), ds.d(), prev.k());
    assert_eq!(a.owner.len(), n, "assignment length mismatch");
    assert_eq!(a.counts.len(), k, "cluster count mismatch");

    let mut sums = vec![0.0f64; k * d];
    for (x, &o) in a.owner.iter().enumerate() {
        let point = ds.point(x);
        let row = &mut sums[o as usize * d..(o as usize + 1) * d];
        for (s, v) in row.iter_mut().zip(point) {
            *s += v;
        }
    }
    let mut shifts = vec![0.0f64; k];
    for c in 0..k {
        let row = &mut sums[c * d..(c + 1) * d];
        if a.counts[c] > 0 {
            let inv = 1.0 / a.counts[c] as f64;
            for v in row.iter_mut() {
                *v *= inv;
            }
        } else {
            row.copy_from_slice(prev.centroid(c));
        }
        shifts[c] = sq_dist(row, prev.centroid(c)).sqrt();
    }
    CentroidSet::with_shifts(k, d, sums, shifts)
}

/// Sum of squared distances from each point to its assigned centroid.
///
/// This is an evaluation pass; it does not touch the benchmark counters.
pub fn mse(ds: &Dataset, cs: &CentroidSet, a: &Assignment) -> f64 {
    sse_of(ds, cs, &a.owner)
}

pub(crate) fn sse_of(ds: &Dataset, cs: &CentroidSet, owners: &[u32]) -> f64 {
    owners
        .iter()
        .enumerate()
        .map(|(x, &o)| sq_dist(ds.point(x), cs.centroid(o as usize)))
        .sum()
}

/// Plain Lloyd iteration until the assignments reach a fixed point.
pub fn run_lloyd(ds: &Dataset, cfg: &RunConfig) -> Result<RunResult> {
    if cfg.algorithm != crate::run::Algorithm::Lloyd {
        return Err(Error::invalid(format!(
            "run_lloyd called with algorithm {}",
            cfg.algorithm
        )));
    }
    crate::run::run(ds, cfg)
}

/// Shared engine for Lloyd and its candidate-list variant.
///
/// The first pass always scans all k centroids. When `use_ccl` is set, the
/// squared distances of that pass seed per-point candidate lists of size
/// `cfg.k_prime`, and every later pass assigns within the list only, costing
/// exactly `n * k_prime` distance computations.
pub(crate) fn lloyd_engine(
    ds: &Dataset,
    cfg: &RunConfig,
    initial: CentroidSet,
    use_ccl: bool,
) -> Result<RunResult> {
    let started = Instant::now();
    let (n, k) = (ds.n(), cfg.k);
    let mut counters = DistanceCounters::default();
    let mut cs = initial;

    // First pass: full scan, optionally retaining the distance rows.
    let (mut owners, lists) = if use_ccl {
        let k_prime = cfg.k_prime.expect("validated");
        let mut rows = vec![0.0; n * k];
        let owners = full_pass(ds, &cs, &mut counters, Some(&mut rows));
        let lists = build_ccl(&rows, k, k_prime)?;
        (owners, Some(lists))
    } else {
        (full_pass(ds, &cs, &mut counters, None), None)
    };
    let mut iterations = 1usize;
    let mut trace = vec![sse_of(ds, &cs, &owners)];

    while iterations < cfg.max_iters {
        let assignment = Assignment::from_owners(owners.clone(), k);
        cs = update_centroids(ds, &assignment, &cs);

        let changed = match &lists {
            None => {
                let new_owners = full_pass(ds, &cs, &mut counters, None);
                let changed = new_owners != owners;
                owners = new_owners;
                changed
            }
            Some(lists) => restricted_pass(ds, &cs, lists, &mut owners, &mut counters),
        };
        iterations += 1;
        trace.push(sse_of(ds, &cs, &owners));
        if !changed {
            break;
        }
    }

    let assignment = Assignment::from_owners(owners, k);
    let final_mse = *trace.last().expect("at least one pass");
    Ok(RunResult {
        config: cfg.clone(),
        final_mse,
        iterations,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        counters,
        assignment,
        centroids: cs,
        mse_trace: trace,
        candidate_lists: lists,
    })
}

/// One assignment pass restricted to each point's candidate list. Costs
/// exactly `n * k_prime` distance computations; ties go to the lowest
/// centroid index regardless of list order.
fn restricted_pass(
    ds: &Dataset,
    cs: &CentroidSet,
    lists: &CandidateLists,
    owners: &mut [u32],
    counters: &mut DistanceCounters,
) -> bool {
    let n = ds.n();
    let mut changed = false;
    for (x, owner) in owners.iter_mut().enumerate() {
        let point = ds.point(x);
        let mut best = f64::INFINITY;
        let mut best_c = u32::MAX;
        for &c in lists.row(x) {
            let d2 = sq_dist(point, cs.centroid(c as usize));
            if d2 < best || (d2 == best && c < best_c) {
                best = d2;
                best_c = c;
            }
        }
        if *owner != best_c {
            *owner = best_c;
            changed = true;
        }
    }
    counters.point_centroid += (n as u64) * (lists.k_prime() as u64);
    changed
}
