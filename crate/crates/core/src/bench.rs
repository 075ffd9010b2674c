//! Matched-pair benchmarking.
//!
//! A benchmark runs a base algorithm and its candidate-list variant from
//! bitwise-identical initial centroids, then reports wall-clock speedup
//! (T / T'), the percentage increase in MSE (100 * (E' - E) / E, signed),
//! candidate-list recall, and the exact distance counters. Wall times are
//! hardware-dependent; the counters are the reproducible comparison.

use serde::Serialize;

use crate::ccl::ccl_recall;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::run::{run_with_initial, Algorithm, RunConfig, RunResult};
use crate::seeding::{self, Seeding};

/// The scalar fields of a [`RunResult`], as they appear in reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub k: usize,
    pub k_prime: Option<usize>,
    pub seeding: Seeding,
    pub rng_seed: u64,
    pub max_iters: usize,
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub point_centroid_distances: u64,
    pub center_center_distances: u64,
    pub final_mse: f64,
}

impl RunSummary {
    pub fn from_result(res: &RunResult) -> Self {
        Self {
            algorithm: res.config.algorithm,
            k: res.config.k,
            k_prime: res.config.k_prime,
            seeding: res.config.seeding,
            rng_seed: res.config.rng_seed,
            max_iters: res.config.max_iters,
            iterations: res.iterations,
            wall_time_ms: res.wall_time_ms,
            point_centroid_distances: res.counters.point_centroid,
            center_center_distances: res.counters.center_center,
            final_mse: res.final_mse,
        }
    }
}

/// Paired comparison of a base run and its candidate-list counterpart.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub base: RunSummary,
    pub augmented: RunSummary,
    /// Base wall time over augmented wall time.
    pub speedup: f64,
    /// Percentage increase in MSE of the augmented run; negative when the
    /// augmented run found a better optimum.
    pub pim: f64,
    /// Fraction of points whose true nearest final centroid sits in their
    /// candidate list.
    pub ccl_recall: f64,
    /// Base per-iteration point-centroid distances over the augmented run's
    /// post-first-pass per-iteration distances; absent when the augmented
    /// run converged in a single pass.
    pub counter_ratio: Option<f64>,
    pub environment: String,
}

/// Wall-clock speedup T / T'. Both durations must be positive.
pub fn compute_speedup(t_base_ms: f64, t_aug_ms: f64) -> Result<f64> {
    if !(t_base_ms > 0.0) || !(t_aug_ms > 0.0) {
        return Err(Error::invalid(format!(
            "durations must be positive, got {t_base_ms} and {t_aug_ms}"
        )));
    }
    Ok(t_base_ms / t_aug_ms)
}

/// Percentage increase in MSE, `100 * (e_aug - e_base) / e_base`, signed.
///
/// A zero base error is degenerate: it is accepted only when the augmented
/// error is also zero (both runs reached a perfect clustering), reporting 0.
pub fn compute_pim(e_base: f64, e_aug: f64) -> Result<f64> {
    if e_base > 0.0 {
        return Ok(100.0 * (e_aug - e_base) / e_base);
    }
    if e_base == 0.0 && e_aug == 0.0 {
        return Ok(0.0);
    }
    Err(Error::invalid(format!(
        "PIM undefined for base MSE {e_base} (augmented {e_aug})"
    )))
}

fn check_matched(base_cfg: &RunConfig, aug_cfg: &RunConfig) -> Result<()> {
    let expected_aug = base_cfg.algorithm.ccl_variant().ok_or_else(|| {
        Error::invalid(format!(
            "base algorithm must be lloyd or elkan, got {}",
            base_cfg.algorithm
        ))
    })?;
    if aug_cfg.algorithm != expected_aug {
        return Err(Error::invalid(format!(
            "augmented algorithm {} is not the candidate-list variant of {}",
            aug_cfg.algorithm, base_cfg.algorithm
        )));
    }
    if base_cfg.k != aug_cfg.k
        || base_cfg.seeding != aug_cfg.seeding
        || base_cfg.rng_seed != aug_cfg.rng_seed
        || base_cfg.max_iters != aug_cfg.max_iters
    {
        return Err(Error::invalid(
            "base and augmented configs must share k, seeding, rng_seed and max_iters".to_string(),
        ));
    }
    Ok(())
}

/// Runs a matched base/augmented pair from one set of initial centroids.
///
/// Seeding happens once, outside both timed runs; the base run executes
/// first. Speedup and PIM come straight from the two stored results.
pub fn run_benchmark(
    ds: &Dataset,
    base_cfg: &RunConfig,
    aug_cfg: &RunConfig,
) -> Result<BenchReport> {
    check_matched(base_cfg, aug_cfg)?;
    base_cfg.validate(ds)?;
    aug_cfg.validate(ds)?;

    let mut rng = SplitMix64::new(base_cfg.rng_seed);
    let initial = seeding::seed(ds, base_cfg.k, base_cfg.seeding, &mut rng)?;

    let base = run_with_initial(ds, base_cfg, initial.clone())?;
    let augmented = run_with_initial(ds, aug_cfg, initial)?;

    let speedup = compute_speedup(base.wall_time_ms, augmented.wall_time_ms)?;
    let pim = compute_pim(base.final_mse, augmented.final_mse)?;
    let lists = augmented
        .candidate_lists
        .as_ref()
        .expect("candidate-list run always builds lists");
    let recall = ccl_recall(ds, &augmented, lists);
    let counter_ratio = per_iteration_counter_ratio(&base, &augmented);

    Ok(BenchReport {
        base: RunSummary::from_result(&base),
        augmented: RunSummary::from_result(&augmented),
        speedup,
        pim,
        ccl_recall: recall,
        counter_ratio,
        environment: format!(
            "{} {}, single-threaded",
            std::env::consts::OS,
            std::env::consts::ARCH
        ),
    })
}

/// Base per-iteration distance count over the augmented run's post-first
/// per-iteration count, the hardware-independent analogue of speedup.
fn per_iteration_counter_ratio(base: &RunResult, augmented: &RunResult) -> Option<f64> {
    if augmented.iterations < 2 {
        return None;
    }
    let n_k = (augmented.assignment.owner.len() * augmented.config.k) as u64;
    let base_per_iter = base.counters.point_centroid as f64 / base.iterations as f64;
    let aug_post_first = augmented.counters.point_centroid.saturating_sub(n_k) as f64
        / (augmented.iterations - 1) as f64;
    if aug_post_first > 0.0 {
        Some(base_per_iter / aug_post_first)
    } else {
        None
    }
}
