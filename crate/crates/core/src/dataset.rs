//! Dataset loading and synthetic dataset generation.
//!
//! A [`Dataset`] is an immutable n x d row-major matrix of finite `f64`
//! coordinates. Files are plain UTF-8 text, one point per line, fields
//! separated by commas or runs of whitespace; lines starting with `#` are
//! comments. The generators cover the three synthetic families used by the
//! benchmark suite: uniform hypercube noise, a square grid of Gaussian
//! clusters, and Gaussian clusters placed on a circle.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Field separator handling for [`load_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Per line: split on commas when the line contains one, else whitespace.
    #[default]
    Auto,
    Comma,
    Whitespace,
}

/// An n x d matrix of points, row-major, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    d: usize,
    values: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset from row-major values, validating shape and finiteness.
    pub fn from_values(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::invalid(format!(
                "dataset shape must be at least 1x1, got {n}x{d}"
            )));
        }
        if values.len() != n * d {
            return Err(Error::invalid(format!(
                "expected {} values for a {n}x{d} dataset, got {}",
                n * d,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value {} at point {}, coordinate {}",
                values[pos],
                pos / d,
                pos % d
            )));
        }
        Ok(Self { n, d, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Coordinates of point `i`.
    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }
}

/// Loads a dataset from a text file: one point per line, `#` comments skipped.
///
/// Every data line must carry the same number of numeric fields; violations
/// are reported with the 1-based line number.
pub fn load_matrix(path: impl AsRef<Path>, delimiter: Delimiter) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_matrix(&text, delimiter, &path.display().to_string())
}

fn parse_matrix(text: &str, delimiter: Delimiter, path: &str) -> Result<Dataset> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_string(),
        line,
        message,
    };

    let mut values = Vec::new();
    let mut d = 0usize;
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match delimiter {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Auto => {
                if line.contains(',') {
                    line.split(',').map(str::trim).collect()
                } else {
                    line.split_whitespace().collect()
                }
            }
        };
        if n == 0 {
            d = fields.len();
        } else if fields.len() != d {
            return Err(parse_err(
                line_no,
                format!("expected {} fields, found {}", d, fields.len()),
            ));
        }
        for field in fields {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid number {field:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, format!("non-finite value {field:?}")));
            }
            values.push(v);
        }
        n += 1;
    }
    if n == 0 {
        return Err(parse_err(0, "no data lines in file".to_string()));
    }
    Dataset::from_values(n, d, values)
}

/// Writes a dataset as whitespace-separated text with 17 significant digits,
/// enough for `f64` values to survive a write/load round trip exactly.
pub fn save_matrix(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_matrix(ds))?;
    Ok(())
}

pub(crate) fn format_matrix(ds: &Dataset) -> String {
    let mut out = String::with_capacity(ds.n * ds.d * 24);
    for i in 0..ds.n {
        for (j, v) in ds.point(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
    out
}

/// Uniform random dataset: each coordinate independent in `[lo, hi)`.
pub fn gen_uniform(n: usize, d: usize, lo: f64, hi: f64, rng: &mut SplitMix64) -> Result<Dataset> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("n and d must both be at least 1"));
    }
    if !(lo < hi) {
        return Err(Error::invalid(format!("lo ({lo}) must be below hi ({hi})")));
    }
    let span = hi - lo;
    let values = (0..n * d).map(|_| lo + rng.next_f64() * span).collect();
    Dataset::from_values(n, d, values)
}

/// 2-D grid of Gaussian clusters: `grid`^2 centers at `(i*spacing, j*spacing)`,
/// points handed out round-robin so cluster sizes differ by at most one.
pub fn gen_grid_gaussians(
    n: usize,
    grid: usize,
    spacing: f64,
    sigma: f64,
    rng: &mut SplitMix64,
) -> Result<Dataset> {
    if grid == 0 {
        return Err(Error::invalid("grid side length must be at least 1"));
    }
    let centers = grid * grid;
    if n < centers {
        return Err(Error::invalid(format!(
            "n ({n}) must be at least grid^2 ({centers})"
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !(spacing > 0.0) {
        return Err(Error::invalid(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    let mut values = Vec::with_capacity(n * 2);
    for t in 0..n {
        let c = t % centers;
        let cx = (c / grid) as f64 * spacing;
        let cy = (c % grid) as f64 * spacing;
        values.push(cx + sigma * rng.next_gaussian());
        values.push(cy + sigma * rng.next_gaussian());
    }
    Dataset::from_values(n, 2, values)
}

/// 2-D Gaussian clusters centered at equal angles on a circle of radius `r`.
///
/// Center `j` sits at angle `2*pi*j/k`; noise is Gaussian per coordinate with
/// the given variance. Points are handed out round-robin across the `k`
/// centers, so any remainder goes to the first clusters.
pub fn gen_circle_gaussians(
    n: usize,
    k: usize,
    r: f64,
    variance: f64,
    rng: &mut SplitMix64,
) -> Result<Dataset> {
    if n == 0 || k == 0 {
        return Err(Error::invalid("n and k must both be at least 1"));
    }
    if !(variance >= 0.0) {
        return Err(Error::invalid(format!(
            "variance must be nonnegative, got {variance}"
        )));
    }
    if !r.is_finite() {
        return Err(Error::invalid(format!("radius must be finite, got {r}")));
    }
    let std_dev = variance.sqrt();
    let mut centers = Vec::with_capacity(k * 2);
    for j in 0..k {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
        centers.push(r * angle.cos());
        centers.push(r * angle.sin());
    }
    let mut values = Vec::with_capacity(n * 2);
    for t in 0..n {
        let j = t % k;
        values.push(centers[2 * j] + std_dev * rng.next_gaussian());
        values.push(centers[2 * j + 1] + std_dev * rng.next_gaussian());
    }
    Dataset::from_values(n, 2, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Dataset> {
        parse_matrix(text, Delimiter::Auto, "<test>")
    }

    #[test]
    fn parses_comma_separated_lines() {
        let ds = parse("1,2\n3,4\n").unwrap();
        assert_eq!((ds.n(), ds.d()), (2, 2));
        assert_eq!(ds.values(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn skips_comment_lines() {
        let ds = parse("# hdr\n5 6 7\n").unwrap();
        assert_eq!((ds.n(), ds.d()), (1, 3));
        assert_eq!(ds.values(), &[5.0, 6.0, 7.0]);
    }

    #[test]
    fn ragged_row_is_reported_with_line_number() {
        let err = parse("1 2\n# note\n3 4 5\n").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("expected 2 fields, found 3"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_numeric_field_is_a_parse_error() {
        let err = parse("1 2\n3 oops\n").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("oops"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn textual_nan_and_inf_are_rejected() {
        assert!(parse("1 NaN\n").is_err());
        assert!(parse("inf 2\n").is_err());
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(parse("").is_err());
        assert!(parse("# only comments\n").is_err());
    }

    #[test]
    fn forced_delimiters_behave() {
        let ds = parse_matrix("1, 2\n3, 4\n", Delimiter::Comma, "<t>").unwrap();
        assert_eq!(ds.values(), &[1.0, 2.0, 3.0, 4.0]);
        let ds = parse_matrix("1 2\n3 4\n", Delimiter::Whitespace, "<t>").unwrap();
        assert_eq!(ds.values(), &[1.0, 2.0, 3.0, 4.0]);
        // Forcing whitespace on a comma file must fail on the joined token.
        assert!(parse_matrix("1,2\n", Delimiter::Whitespace, "<t>").is_err());
    }

    #[test]
    fn write_then_load_restores_generated_dataset_exactly() {
        let mut rng = SplitMix64::new(11);
        let ds = gen_uniform(100, 5, -3.5, 9.25, &mut rng).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("roundtrip.txt");
        save_matrix(&ds, &path).unwrap();
        let reloaded = load_matrix(&path, Delimiter::Auto).unwrap();
        assert_eq!(ds, reloaded);
    }

    #[test]
    fn uniform_values_stay_in_range_and_match_table_shape() {
        let mut rng = SplitMix64::new(7);
        let ds = gen_uniform(100_000, 100, 0.0, 1.0, &mut rng).unwrap();
        assert_eq!((ds.n(), ds.d()), (100_000, 100));
        assert!(ds.values().iter().all(|&v| (0.0..1.0).contains(&v)));
    }

    #[test]
    fn uniform_is_deterministic_per_seed() {
        let a = gen_uniform(50, 3, -1.0, 1.0, &mut SplitMix64::new(5)).unwrap();
        let b = gen_uniform(50, 3, -1.0, 1.0, &mut SplitMix64::new(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_rejects_bad_range() {
        assert!(gen_uniform(10, 2, 1.0, 1.0, &mut SplitMix64::new(0)).is_err());
        assert!(gen_uniform(10, 2, 2.0, -2.0, &mut SplitMix64::new(0)).is_err());
    }

    #[test]
    fn grid_produces_balanced_2d_clusters() {
        let mut rng = SplitMix64::new(3);
        let ds = gen_grid_gaussians(100_000, 10, 10.0, 1.0, &mut rng).unwrap();
        assert_eq!((ds.n(), ds.d()), (100_000, 2));
        // Round-robin: each of the 100 centers owns exactly 1000 points.
        let mut sizes = [0usize; 100];
        for t in 0..ds.n() {
            sizes[t % 100] += 1;
        }
        assert!(sizes.iter().all(|&s| s == 1000));
    }

    #[test]
    fn grid_with_vanishing_sigma_collapses_onto_centers() {
        let mut rng = SplitMix64::new(8);
        let ds = gen_grid_gaussians(400, 4, 5.0, 1e-12, &mut rng).unwrap();
        for t in 0..ds.n() {
            let c = t % 16;
            let center = [(c / 4) as f64 * 5.0, (c % 4) as f64 * 5.0];
            let p = ds.point(t);
            let var = (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2);
            assert!(var < 1e-20, "point {t} strayed: {var}");
        }
    }

    // CLT oracle: the sample mean of each cluster must fall within
    // 4*sigma/sqrt(m) of its generating center, m = points per cluster.
    #[test]
    fn grid_cluster_means_pass_clt_check() {
        let (n, g, spacing, sigma) = (20_000, 5, 10.0, 1.0);
        let mut rng = SplitMix64::new(21);
        let ds = gen_grid_gaussians(n, g, spacing, sigma, &mut rng).unwrap();
        let centers = g * g;
        let per_cluster = n / centers;
        let mut sums = vec![[0.0f64; 2]; centers];
        for t in 0..n {
            let p = ds.point(t);
            sums[t % centers][0] += p[0];
            sums[t % centers][1] += p[1];
        }
        let bound = 4.0 * sigma / (per_cluster as f64).sqrt();
        for c in 0..centers {
            let mean = [
                sums[c][0] / per_cluster as f64,
                sums[c][1] / per_cluster as f64,
            ];
            let center = [(c / g) as f64 * spacing, (c % g) as f64 * spacing];
            assert!(
                (mean[0] - center[0]).abs() < bound && (mean[1] - center[1]).abs() < bound,
                "cluster {c}: mean {mean:?} vs center {center:?}"
            );
        }
    }

    #[test]
    fn grid_rejects_too_few_points() {
        assert!(gen_grid_gaussians(99, 10, 10.0, 1.0, &mut SplitMix64::new(0)).is_err());
    }

    #[test]
    fn circle_centers_follow_the_angle_formula() {
        // Zero variance puts every point exactly on its center.
        let ds = gen_circle_gaussians(8, 4, 1.0, 0.0, &mut SplitMix64::new(1)).unwrap();
        let expect = [
            [1.0, 0.0],
            [0.0, 1.0],
            [-1.0, 0.0],
            [0.0, -1.0],
        ];
        for t in 0..8 {
            let p = ds.point(t);
            let e = expect[t % 4];
            assert!((p[0] - e[0]).abs() < 1e-15 && (p[1] - e[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn circle_radius_zero_centers_everything_at_origin() {
        let ds = gen_circle_gaussians(1000, 7, 0.0, 0.25, &mut SplitMix64::new(2)).unwrap();
        assert_eq!((ds.n(), ds.d()), (1000, 2));
        let far = ds
            .values()
            .iter()
            .filter(|v| v.abs() > 4.0 * 0.5)
            .count();
        // std dev 0.5; essentially nothing lands beyond 4 sigma of the origin.
        assert!(far < 5, "{far} coordinates beyond 4 sigma");
    }

    #[test]
    fn circle_cluster_sizes_differ_by_at_most_one() {
        let ds = gen_circle_gaussians(103, 10, 5.0, 0.25, &mut SplitMix64::new(4)).unwrap();
        let mut sizes = [0usize; 10];
        for t in 0..ds.n() {
            sizes[t % 10] += 1;
        }
        let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        assert!(max - min <= 1);
        assert_eq!(sizes.iter().sum::<usize>(), 103);
    }

    #[test]
    fn circle_rejects_negative_variance() {
        assert!(gen_circle_gaussians(10, 2, 1.0, -0.1, &mut SplitMix64::new(0)).is_err());
    }

    #[test]
    fn circle_matches_paper_scale_setup() {
        let mut rng = SplitMix64::new(9);
        let ds = gen_circle_gaussians(100_000, 100, 20.0, 0.25, &mut rng).unwrap();
        assert_eq!((ds.n(), ds.d()), (100_000, 2));
    }

    proptest! {
        // Generators are pure functions of (parameters, seed).
        #[test]
        fn generators_are_deterministic(seed in any::<u64>(), n in 1usize..40, d in 1usize..6) {
            let a = gen_uniform(n, d, 0.0, 2.0, &mut SplitMix64::new(seed)).unwrap();
            let b = gen_uniform(n, d, 0.0, 2.0, &mut SplitMix64::new(seed)).unwrap();
            prop_assert_eq!(a.values(), b.values());
            let k = 1 + n % 5;
            let a = gen_circle_gaussians(n, k, 3.0, 0.5, &mut SplitMix64::new(seed)).unwrap();
            let b = gen_circle_gaussians(n, k, 3.0, 0.5, &mut SplitMix64::new(seed)).unwrap();
            prop_assert_eq!(a.values(), b.values());
        }

        // Text round trip is lossless for arbitrary finite values.
        #[test]
        fn text_round_trip_is_exact(rows in prop::collection::vec(
            prop::collection::vec(-1e12f64..1e12, 3), 1..20)) {
            let n = rows.len();
            let values: Vec<f64> = rows.into_iter().flatten().collect();
            let ds = Dataset::from_values(n, 3, values).unwrap();
            let text = format_matrix(&ds);
            let back = parse_matrix(&text, Delimiter::Auto, "<prop>").unwrap();
            prop_assert_eq!(ds, back);
        }
    }
}
