//! Initial centroid selection.
//!
//! Two strategies: uniform sampling without replacement, and k-means++
//! D^2-weighted sampling. Both copy dataset points bit-for-bit into the
//! returned [`CentroidSet`] and are deterministic given the RNG seed.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lloyd::sq_dist;
use crate::rng::SplitMix64;

/// Seed selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Seeding {
    Random,
    Kmeanspp,
}

impl std::fmt::Display for Seeding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Seeding::Random => write!(f, "random"),
            Seeding::Kmeanspp => write!(f, "kmeanspp"),
        }
    }
}

/// A k x d matrix of centroids plus the distance each one moved in the most
/// recent update (zero right after seeding).
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    k: usize,
    d: usize,
    values: Vec<f64>,
    shifts: Vec<f64>,
}

impl CentroidSet {
    pub(crate) fn from_rows(k: usize, d: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), k * d);
        Self {
            k,
            d,
            values,
            shifts: vec![0.0; k],
        }
    }

    pub(crate) fn with_shifts(k: usize, d: usize, values: Vec<f64>, shifts: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), k * d);
        debug_assert_eq!(shifts.len(), k);
        Self {
            k,
            d,
            values,
            shifts,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Coordinates of centroid `c`.
    #[inline]
    pub fn centroid(&self, c: usize) -> &[f64] {
        &self.values[c * self.d..(c + 1) * self.d]
    }

    /// Distance each centroid moved in the last update.
    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }
}

fn check_k(ds: &Dataset, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > ds.n() {
        return Err(Error::invalid(format!(
            "k ({k}) exceeds the number of points ({})",
            ds.n()
        )));
    }
    Ok(())
}

fn gather(ds: &Dataset, indices: &[usize]) -> CentroidSet {
    let d = ds.d();
    let mut values = Vec::with_capacity(indices.len() * d);
    for &i in indices {
        values.extend_from_slice(ds.point(i));
    }
    CentroidSet::from_rows(indices.len(), d, values)
}

/// Picks `k` distinct points uniformly at random as the initial centroids.
pub fn seed_random(ds: &Dataset, k: usize, rng: &mut SplitMix64) -> Result<CentroidSet> {
    check_k(ds, k)?;
    // Partial Fisher-Yates over the index range.
    let mut indices: Vec<usize> = (0..ds.n()).collect();
    for i in 0..k {
        let j = i + rng.below(ds.n() - i);
        indices.swap(i, j);
    }
    indices.truncate(k);
    Ok(gather(ds, &indices))
}

/// k-means++ seeding: first centroid uniform, each later one sampled with
/// probability proportional to its squared distance to the nearest centroid
/// chosen so far.
pub fn seed_kmeanspp(ds: &Dataset, k: usize, rng: &mut SplitMix64) -> Result<CentroidSet> {
    check_k(ds, k)?;
    let first = rng.below(ds.n());
    seed_kmeanspp_from(ds, k, first, rng)
}

/// k-means++ continuation with the first centroid pinned to `first`.
///
/// Useful for reproducing the selection distribution in experiments; the
/// remaining `k - 1` picks follow the ordinary D^2 rule.
pub fn seed_kmeanspp_from(
    ds: &Dataset,
    k: usize,
    first: usize,
    rng: &mut SplitMix64,
) -> Result<CentroidSet> {
    check_k(ds, k)?;
    if first >= ds.n() {
        return Err(Error::invalid(format!(
            "first seed index {first} out of range for {} points",
            ds.n()
        )));
    }
    let n = ds.n();
    let mut chosen = Vec::with_capacity(k);
    let mut is_chosen = vec![false; n];
    chosen.push(first);
    is_chosen[first] = true;

    // Squared distance from each point to its nearest chosen seed.
    let mut min_d2: Vec<f64> = (0..n)
        .map(|i| sq_dist(ds.point(i), ds.point(first)))
        .collect();

    while chosen.len() < k {
        let total: f64 = min_d2.iter().sum();
        let pick = if total > 0.0 {
            // Cumulative-sum inversion on one uniform draw; the strict
            // comparison skips zero-mass points and resolves ties in the
            // running sum to the lowest index.
            let target = rng.next_f64() * total;
            let mut cum = 0.0;
            let mut pick = None;
            let mut last_positive = None;
            for (i, &w) in min_d2.iter().enumerate() {
                if w > 0.0 {
                    last_positive = Some(i);
                }
                cum += w;
                if cum > target {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave target >= cum at the end; fall back to the
            // last point that carried any mass.
            pick.or(last_positive).expect("positive total implies a pick")
        } else {
            // All remaining mass is zero (every unchosen point duplicates a
            // chosen one); fall back to uniform over unchosen indices.
            let unchosen: Vec<usize> = (0..n).filter(|&i| !is_chosen[i]).collect();
            unchosen[rng.below(unchosen.len())]
        };
        chosen.push(pick);
        is_chosen[pick] = true;
        for (i, slot) in min_d2.iter_mut().enumerate() {
            let d2 = sq_dist(ds.point(i), ds.point(pick));
            if d2 < *slot {
                *slot = d2;
            }
        }
    }
    Ok(gather(ds, &chosen))
}

/// Seeds according to `seeding`, consuming draws from `rng`.
pub fn seed(ds: &Dataset, k: usize, seeding: Seeding, rng: &mut SplitMix64) -> Result<CentroidSet> {
    match seeding {
        Seeding::Random => seed_random(ds, k, rng),
        Seeding::Kmeanspp => seed_kmeanspp(ds, k, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::gen_uniform;
    use proptest::prelude::*;

    fn one_d(points: &[f64]) -> Dataset {
        Dataset::from_values(points.len(), 1, points.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_k() {
        let ds = one_d(&[1.0, 2.0]);
        assert!(seed_random(&ds, 0, &mut SplitMix64::new(0)).is_err());
        assert!(seed_random(&ds, 3, &mut SplitMix64::new(0)).is_err());
        assert!(seed_kmeanspp(&ds, 3, &mut SplitMix64::new(0)).is_err());
    }

    #[test]
    fn k_equals_n_is_a_permutation_of_the_dataset() {
        let mut rng = SplitMix64::new(17);
        let ds = gen_uniform(12, 3, 0.0, 1.0, &mut rng).unwrap();
        let cs = seed_random(&ds, 12, &mut rng).unwrap();
        let mut seen = [false; 12];
        for c in 0..12 {
            let row = cs.centroid(c);
            let hit = (0..12).find(|&i| !seen[i] && ds.point(i) == row);
            let hit = hit.expect("centroid must be a dataset point");
            seen[hit] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn k_one_returns_some_dataset_point() {
        let ds = one_d(&[4.0, 8.0, 15.0]);
        let cs = seed_random(&ds, 1, &mut SplitMix64::new(3)).unwrap();
        assert!((0..3).any(|i| ds.point(i) == cs.centroid(0)));
        assert_eq!(cs.shifts(), &[0.0]);
    }

    // Frequency oracle: uniform law over 5 points.
    #[test]
    fn random_seeding_is_uniform_over_points() {
        let ds = one_d(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let mut rng = SplitMix64::new(1234);
        let mut hits = [0usize; 5];
        for _ in 0..10_000 {
            let cs = seed_random(&ds, 1, &mut rng).unwrap();
            hits[cs.centroid(0)[0] as usize] += 1;
        }
        for &h in &hits {
            let freq = h as f64 / 10_000.0;
            assert!((freq - 0.2).abs() <= 0.02, "freq {freq}");
        }
    }

    #[test]
    fn kmeanspp_single_point_dataset() {
        let ds = one_d(&[42.0]);
        let cs = seed_kmeanspp(&ds, 1, &mut SplitMix64::new(0)).unwrap();
        assert_eq!(cs.centroid(0), &[42.0]);
    }

    #[test]
    fn kmeanspp_second_pick_is_forced_when_one_point_carries_all_mass() {
        let ds = one_d(&[0.0, 1000.0]);
        for seed in 0..20 {
            let cs = seed_kmeanspp(&ds, 2, &mut SplitMix64::new(seed)).unwrap();
            let mut got: Vec<f64> = (0..2).map(|c| cs.centroid(c)[0]).collect();
            got.sort_by(f64::total_cmp);
            assert_eq!(got, vec![0.0, 1000.0]);
        }
    }

    // Frequency oracle: with the first seed pinned at 0 on {0, 1, 10}, the
    // second pick follows D^2 weights {1: 1/101, 10: 100/101}. Binomial
    // 3-sigma bound over 10000 trials.
    #[test]
    fn kmeanspp_second_seed_follows_d2_law() {
        let ds = one_d(&[0.0, 1.0, 10.0]);
        let trials = 10_000usize;
        let mut rng = SplitMix64::new(777);
        let mut picked_one = 0usize;
        for _ in 0..trials {
            let cs = seed_kmeanspp_from(&ds, 2, 0, &mut rng).unwrap();
            match cs.centroid(1)[0] {
                v if v == 1.0 => picked_one += 1,
                v if v == 10.0 => {}
                v => panic!("second seed must be 1 or 10, got {v}"),
            }
        }
        let p = 1.0 / 101.0;
        let expected = trials as f64 * p;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        let dev = (picked_one as f64 - expected).abs();
        assert!(
            dev <= 3.0 * sigma,
            "picked 1 {picked_one} times, expected {expected:.1} +/- {:.1}",
            3.0 * sigma
        );
    }

    #[test]
    fn kmeanspp_falls_back_to_uniform_when_all_mass_is_zero() {
        // Two duplicate points plus one distinct: after choosing {0 or 1} and
        // {2}, the remaining duplicate has zero D^2 and must still be picked.
        let ds = one_d(&[5.0, 5.0, 9.0]);
        let cs = seed_kmeanspp(&ds, 3, &mut SplitMix64::new(6)).unwrap();
        let mut got: Vec<f64> = (0..3).map(|c| cs.centroid(c)[0]).collect();
        got.sort_by(f64::total_cmp);
        assert_eq!(got, vec![5.0, 5.0, 9.0]);
    }

    #[test]
    fn kmeanspp_never_duplicates_while_positive_mass_remains() {
        let mut rng = SplitMix64::new(31);
        let ds = gen_uniform(40, 2, 0.0, 1.0, &mut rng).unwrap();
        for seed in 0..50 {
            let cs = seed_kmeanspp(&ds, 10, &mut SplitMix64::new(seed)).unwrap();
            for a in 0..10 {
                for b in (a + 1)..10 {
                    assert_ne!(cs.centroid(a), cs.centroid(b), "seed {seed}: {a} vs {b}");
                }
            }
        }
    }

    proptest! {
        // Every centroid is bitwise equal to some dataset point, for both
        // strategies, and selection is deterministic per seed.
        #[test]
        fn centroids_are_dataset_points(rng_seed in any::<u64>(), n in 1usize..30, kf in 0.0f64..1.0) {
            let mut rng = SplitMix64::new(rng_seed);
            let ds = gen_uniform(n, 2, -5.0, 5.0, &mut rng).unwrap();
            let k = 1 + ((n - 1) as f64 * kf) as usize;
            for seeding in [Seeding::Random, Seeding::Kmeanspp] {
                let a = seed(&ds, k, seeding, &mut SplitMix64::new(rng_seed)).unwrap();
                let b = seed(&ds, k, seeding, &mut SplitMix64::new(rng_seed)).unwrap();
                prop_assert_eq!(a.values(), b.values());
                for c in 0..k {
                    prop_assert!((0..n).any(|i| ds.point(i) == a.centroid(c)));
                }
            }
        }
    }
}
