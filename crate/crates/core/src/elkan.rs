//! Triangle-inequality k-means.
//!
//! The engine keeps, per point, an upper bound on the distance to its
//! assigned centroid and lower bounds on the distances to candidate
//! centroids. Candidates whose lower bound cannot beat the upper bound are
//! skipped without computing a distance; the result is identical to Lloyd's.
//! Bounds live in true metric distances because they are relaxed by centroid
//! shifts, which is only valid arithmetic for a metric.
//!
//! The same engine drives the candidate-list variant, where lower bounds are
//! stored only for each point's candidate list instead of all k centroids.

use std::time::Instant;

use crate::ccl::{build_ccl, CandidateLists};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lloyd::{sq_dist, sse_of, update_centroids, Assignment};
use crate::run::{DistanceCounters, RunConfig, RunResult};
use crate::seeding::CentroidSet;

/// Pairwise centroid distances plus, per centroid, half the distance to its
/// nearest other centroid. A point whose upper bound is at most `s[owner]`
/// cannot move anywhere this iteration.
#[derive(Debug, Clone)]
pub struct CenterSeparation {
    k: usize,
    dist: Vec<f64>,
    /// Half the minimum off-diagonal distance per row; infinite when k = 1.
    pub s: Vec<f64>,
}

impl CenterSeparation {
    /// True metric distance between centroids `a` and `b`.
    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.k + b]
    }
}

/// Computes the symmetric k x k centroid distance matrix and the `s` vector.
/// Adds `k*(k-1)/2` centroid-centroid distance computations to `counters`.
pub fn center_separation(cs: &CentroidSet, counters: &mut DistanceCounters) -> CenterSeparation {
    let k = cs.k();
    let mut dist = vec![0.0f64; k * k];
    for a in 0..k {
        for b in (a + 1)..k {
            let d = sq_dist(cs.centroid(a), cs.centroid(b)).sqrt();
            dist[a * k + b] = d;
            dist[b * k + a] = d;
        }
    }
    counters.center_center += (k * (k - 1) / 2) as u64;
    let mut s = vec![f64::INFINITY; k];
    for a in 0..k {
        for b in 0..k {
            if a != b {
                let d = 0.5 * dist[a * k + b];
                if d < s[a] {
                    s[a] = d;
                }
            }
        }
    }
    CenterSeparation { k, dist, s }
}

/// Triangle-inequality k-means over all k centroids.
pub fn run_elkan(ds: &Dataset, cfg: &RunConfig) -> Result<RunResult> {
    if cfg.algorithm != crate::run::Algorithm::Elkan {
        return Err(Error::invalid(format!(
            "run_elkan called with algorithm {}",
            cfg.algorithm
        )));
    }
    crate::run::run(ds, cfg)
}

#[inline]
fn metric_dist(a: &[f64], b: &[f64], counters: &mut DistanceCounters) -> f64 {
    counters.point_centroid += 1;
    sq_dist(a, b).sqrt()
}

/// Shared engine for the triangle-inequality runs.
///
/// The first pass computes every point-centroid distance exactly, assigning
/// each point to its nearest centroid and initializing all bounds tight.
/// When `use_ccl` is set those same distances also select each point's
/// candidate list, and lower bounds exist only for list members; every later
/// pass considers list members only.
pub(crate) fn elkan_engine(
    ds: &Dataset,
    cfg: &RunConfig,
    initial: CentroidSet,
    use_ccl: bool,
) -> Result<RunResult> {
    let started = Instant::now();
    let (n, k) = (ds.n(), cfg.k);
    let mut counters = DistanceCounters::default();
    let mut cs = initial;

    // Initialization: one full exact pass, bounds start tight.
    let mut rows = vec![0.0f64; n * k];
    let mut owners = vec![0u32; n];
    for x in 0..n {
        let point = ds.point(x);
        let mut best = f64::INFINITY;
        let mut best_c = 0u32;
        for c in 0..k {
            let d = sq_dist(point, cs.centroid(c)).sqrt();
            rows[x * k + c] = d;
            if d < best {
                best = d;
                best_c = c as u32;
            }
        }
        owners[x] = best_c;
    }
    counters.point_centroid += (n as u64) * (k as u64);

    let lists: Option<CandidateLists>;
    let width: usize;
    let mut lower: Vec<f64>;
    let mut owner_pos: Vec<u32>;
    let mut upper: Vec<f64> = (0..n).map(|x| rows[x * k + owners[x] as usize]).collect();
    if use_ccl {
        let k_prime = cfg.k_prime.expect("validated");
        let built = build_ccl(&rows, k, k_prime)?;
        width = k_prime;
        lower = vec![0.0f64; n * k_prime];
        for x in 0..n {
            for (pos, &c) in built.row(x).iter().enumerate() {
                lower[x * k_prime + pos] = rows[x * k + c as usize];
            }
            // The list is sorted by distance with ties toward the lower
            // index, so its head is exactly the assigned centroid.
            debug_assert_eq!(built.row(x)[0], owners[x]);
        }
        owner_pos = vec![0u32; n];
        lists = Some(built);
    } else {
        width = k;
        lower = rows;
        owner_pos = owners.clone();
        lists = None;
    }
    let all_indices: Vec<u32> = (0..k as u32).collect();
    let mut stale = vec![false; n];
    let mut iterations = 1usize;
    let mut trace = vec![sse_of(ds, &cs, &owners)];

    while iterations < cfg.max_iters {
        // Update step: move centroids, then relax bounds by the shifts.
        let assignment = Assignment::from_owners(owners.clone(), k);
        let new_cs = update_centroids(ds, &assignment, &cs);
        let shifts = new_cs.shifts();
        for x in 0..n {
            let row: &[u32] = match &lists {
                Some(l) => l.row(x),
                None => &all_indices,
            };
            let base = x * width;
            for (pos, &c) in row.iter().enumerate() {
                lower[base + pos] = (lower[base + pos] - shifts[c as usize]).max(0.0);
            }
            upper[x] += shifts[owners[x] as usize];
            stale[x] = true;
        }
        cs = new_cs;

        let sep = center_separation(&cs, &mut counters);

        // Assignment pass under bounds.
        let mut changed = false;
        for x in 0..n {
            let mut own = owners[x] as usize;
            if upper[x] <= sep.s[own] {
                continue;
            }
            let point = ds.point(x);
            let row: &[u32] = match &lists {
                Some(l) => l.row(x),
                None => &all_indices,
            };
            let base = x * width;
            for (pos, &cu) in row.iter().enumerate() {
                let c = cu as usize;
                if c == own {
                    continue;
                }
                let half = 0.5 * sep.dist(own, c);
                if !(upper[x] > lower[base + pos] && upper[x] > half) {
                    continue;
                }
                if stale[x] {
                    let d_own = metric_dist(point, cs.centroid(own), &mut counters);
                    upper[x] = d_own;
                    lower[base + owner_pos[x] as usize] = d_own;
                    stale[x] = false;
                }
                let d_own = upper[x];
                if d_own > lower[base + pos] || d_own > half {
                    let d_c = metric_dist(point, cs.centroid(c), &mut counters);
                    lower[base + pos] = d_c;
                    if d_c < d_own || (d_c == d_own && c < own) {
                        owners[x] = cu;
                        owner_pos[x] = pos as u32;
                        own = c;
                        upper[x] = d_c;
                        changed = true;
                    }
                }
            }
        }
        iterations += 1;
        trace.push(sse_of(ds, &cs, &owners));

        #[cfg(debug_assertions)]
        check_bounds_sample(
            ds, &cs, &owners, &upper, &lower, width, lists.as_ref(), &all_indices,
        );

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

/// Debug-build soundness check at the iteration boundary: lower bounds never
/// exceed true distances, the upper bound never undercuts the true distance
/// to the owner. Samples points so large runs stay fast.
#[cfg(debug_assertions)]
#[allow(clippy::too_many_arguments)]
fn check_bounds_sample(
    ds: &Dataset,
    cs: &CentroidSet,
    owners: &[u32],
    upper: &[f64],
    lower: &[f64],
    width: usize,
    lists: Option<&CandidateLists>,
    all_indices: &[u32],
) {
    let n = ds.n();
    let stride = (n / 64).max(1);
    let mut x = 0;
    while x < n {
        let point = ds.point(x);
        let d_own = sq_dist(point, cs.centroid(owners[x] as usize)).sqrt();
        debug_assert!(
            upper[x] >= d_own - 1e-12,
            "upper bound violated at point {x}: u={} d={}",
            upper[x],
            d_own
        );
        let row: &[u32] = match lists {
            Some(l) => l.row(x),
            None => all_indices,
        };
        for (pos, &c) in row.iter().enumerate() {
            let d = sq_dist(point, cs.centroid(c as usize)).sqrt();
            debug_assert!(
                lower[x * width + pos] <= d + 1e-12,
                "lower bound violated at point {x}, centroid {c}: l={} d={}",
                lower[x * width + pos],
                d
            );
        }
        x += stride;
    }
}
