//! Run configuration, run results, and the algorithm dispatcher.

use serde::{Deserialize, Serialize};

use crate::ccl::CandidateLists;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lloyd::Assignment;
use crate::rng::SplitMix64;
use crate::seeding::{self, CentroidSet, Seeding};

/// Iteration cap applied when a run never reaches an assignment fixed point.
pub const DEFAULT_MAX_ITERS: usize = 1000;

/// The four clustering engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    /// Plain Lloyd iteration: full n*k assignment pass every iteration.
    #[serde(rename = "lloyd")]
    Lloyd,
    /// Triangle-inequality k-means: exact, skips distances via bounds.
    #[serde(rename = "elkan")]
    Elkan,
    /// Lloyd restricted to each point's candidate cluster list after the
    /// first iteration.
    #[serde(rename = "lloyd-ccl")]
    LloydCcl,
    /// Triangle-inequality k-means with bounds kept only for candidates.
    #[serde(rename = "elkan-ccl")]
    ElkanCcl,
}

impl Algorithm {
    pub fn uses_ccl(self) -> bool {
        matches!(self, Algorithm::LloydCcl | Algorithm::ElkanCcl)
    }

    /// The candidate-list variant of a base algorithm, if this is a base.
    pub fn ccl_variant(self) -> Option<Algorithm> {
        match self {
            Algorithm::Lloyd => Some(Algorithm::LloydCcl),
            Algorithm::Elkan => Some(Algorithm::ElkanCcl),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lloyd => "lloyd",
            Algorithm::Elkan => "elkan",
            Algorithm::LloydCcl => "lloyd-ccl",
            Algorithm::ElkanCcl => "elkan-ccl",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lloyd" => Ok(Algorithm::Lloyd),
            "elkan" => Ok(Algorithm::Elkan),
            "lloyd-ccl" => Ok(Algorithm::LloydCcl),
            "elkan-ccl" => Ok(Algorithm::ElkanCcl),
            other => Err(Error::invalid(format!(
                "unknown algorithm {other:?} (expected lloyd, elkan, lloyd-ccl or elkan-ccl)"
            ))),
        }
    }
}

/// Everything needed to reproduce a single clustering run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    /// Candidate list size; present exactly for the CCL algorithms.
    pub k_prime: Option<usize>,
    pub seeding: Seeding,
    pub rng_seed: u64,
    pub max_iters: usize,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, k: usize, seeding: Seeding, rng_seed: u64) -> Self {
        Self {
            algorithm,
            k,
            k_prime: None,
            seeding,
            rng_seed,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }

    pub fn with_k_prime(mut self, k_prime: usize) -> Self {
        self.k_prime = Some(k_prime);
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    /// Validates the configuration against a dataset.
    pub fn validate(&self, ds: &Dataset) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.k > ds.n() {
            return Err(Error::invalid(format!(
                "k ({}) exceeds the number of points ({})",
                self.k,
                ds.n()
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be at least 1"));
        }
        match (self.algorithm.uses_ccl(), self.k_prime) {
            (true, None) => Err(Error::invalid(format!(
                "algorithm {} requires k_prime",
                self.algorithm
            ))),
            (true, Some(kp)) if kp == 0 || kp > self.k => Err(Error::invalid(format!(
                "k_prime ({kp}) must satisfy 1 <= k_prime <= k ({})",
                self.k
            ))),
            (false, Some(_)) => Err(Error::invalid(format!(
                "algorithm {} does not take k_prime",
                self.algorithm
            ))),
            _ => Ok(()),
        }
    }
}

/// Exact-distance work performed by a run, kept separately from wall time so
/// comparisons stay hardware independent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCounters {
    /// Point-to-centroid distance evaluations.
    pub point_centroid: u64,
    /// Centroid-to-centroid distance evaluations.
    pub center_center: u64,
}

/// Outcome of one clustering run.
///
/// Deterministic given `(Dataset, RunConfig)` except for `wall_time_ms`.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub config: RunConfig,
    /// Sum of squared point-to-assigned-centroid distances at convergence.
    pub final_mse: f64,
    /// Number of assignment passes, the initial full pass included.
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub counters: DistanceCounters,
    pub assignment: Assignment,
    pub centroids: CentroidSet,
    /// MSE evaluated against the pass's centroids after every assignment
    /// pass; non-increasing for all four algorithms.
    pub mse_trace: Vec<f64>,
    /// The candidate lists built after the first iteration (CCL runs only).
    pub candidate_lists: Option<CandidateLists>,
}

/// Runs the configured algorithm, seeding internally from `cfg.rng_seed`.
pub fn run(ds: &Dataset, cfg: &RunConfig) -> Result<RunResult> {
    cfg.validate(ds)?;
    let mut rng = SplitMix64::new(cfg.rng_seed);
    let initial = seeding::seed(ds, cfg.k, cfg.seeding, &mut rng)?;
    run_with_initial(ds, cfg, initial)
}

/// Runs the configured algorithm from explicit initial centroids.
///
/// `wall_time_ms` covers the clustering itself, not seeding or data loading,
/// so matched pairs started from the same centroids time only algorithm work.
pub fn run_with_initial(ds: &Dataset, cfg: &RunConfig, initial: CentroidSet) -> Result<RunResult> {
    cfg.validate(ds)?;
    if initial.k() != cfg.k {
        return Err(Error::invalid(format!(
            "initial centroid count {} does not match k {}",
            initial.k(),
            cfg.k
        )));
    }
    if initial.d() != ds.d() {
        return Err(Error::DimensionMismatch {
            left: initial.d(),
            right: ds.d(),
        });
    }
    match cfg.algorithm {
        Algorithm::Lloyd => crate::lloyd::lloyd_engine(ds, cfg, initial, false),
        Algorithm::LloydCcl => crate::lloyd::lloyd_engine(ds, cfg, initial, true),
        Algorithm::Elkan => crate::elkan::elkan_engine(ds, cfg, initial, false),
        Algorithm::ElkanCcl => crate::elkan::elkan_engine(ds, cfg, initial, true),
    }
}
