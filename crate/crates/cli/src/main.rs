//! `kmeans-ccl`: generate datasets, run clustering algorithms, and benchmark
//! matched base/candidate-list pairs, emitting JSON reports.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid configuration or
//! usage, 3 input parse failure.

mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmeans_ccl::{
    gen_circle_gaussians, gen_grid_gaussians, gen_uniform, load_matrix, run_benchmark,
    save_matrix, Algorithm, Dataset, Delimiter, Error as LibError, RunConfig, RunSummary, Seeding,
    SplitMix64,
};
use report::ReportDocument;

#[derive(Parser)]
#[command(
    name = "kmeans-ccl",
    version,
    about = "K-means with per-point candidate cluster lists: dataset generation, runs, and matched benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset file.
    Generate(GenerateArgs),
    /// Run one clustering algorithm and emit a JSON report.
    Run(RunArgs),
    /// Run a base algorithm and its candidate-list variant from the same
    /// seeds and emit a paired JSON report.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Independent uniform coordinates in [lo, hi).
    Uniform,
    /// 2-D grid of Gaussian clusters.
    Grid,
    /// 2-D Gaussian clusters on a circle.
    Circle,
}

#[derive(Args)]
struct GenerateArgs {
    /// Dataset family to generate.
    #[arg(long = "type", value_enum)]
    kind: KindArg,
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Dimensionality (uniform only).
    #[arg(long)]
    d: Option<usize>,
    /// Lower coordinate bound (uniform only, default 0).
    #[arg(long)]
    lo: Option<f64>,
    /// Upper coordinate bound (uniform only, default 1).
    #[arg(long)]
    hi: Option<f64>,
    /// Grid side length (grid only, default 10).
    #[arg(long)]
    grid: Option<usize>,
    /// Distance between adjacent grid centers (grid only, default 10).
    #[arg(long)]
    spacing: Option<f64>,
    /// Gaussian standard deviation per coordinate (grid only, default 1).
    #[arg(long)]
    sigma: Option<f64>,
    /// Number of circle centers (circle only).
    #[arg(long)]
    k: Option<usize>,
    /// Circle radius (circle only).
    #[arg(long)]
    r: Option<f64>,
    /// Gaussian variance per coordinate (circle only, default 0.25).
    #[arg(long)]
    variance: Option<f64>,
    /// RNG seed; equal seeds reproduce the file exactly.
    #[arg(long)]
    seed: u64,
    /// Output file; the dataset streams to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Lloyd,
    Elkan,
    LloydCcl,
    ElkanCcl,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Lloyd => Algorithm::Lloyd,
            AlgoArg::Elkan => Algorithm::Elkan,
            AlgoArg::LloydCcl => Algorithm::LloydCcl,
            AlgoArg::ElkanCcl => Algorithm::ElkanCcl,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeedingArg {
    Random,
    Kmeanspp,
}

impl From<SeedingArg> for Seeding {
    fn from(s: SeedingArg) -> Self {
        match s {
            SeedingArg::Random => Seeding::Random,
            SeedingArg::Kmeanspp => Seeding::Kmeanspp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DelimiterArg {
    Auto,
    Comma,
    Whitespace,
}

impl From<DelimiterArg> for Delimiter {
    fn from(d: DelimiterArg) -> Self {
        match d {
            DelimiterArg::Auto => Delimiter::Auto,
            DelimiterArg::Comma => Delimiter::Comma,
            DelimiterArg::Whitespace => Delimiter::Whitespace,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm to run.
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Dataset file (text, one point per line).
    #[arg(long)]
    data: PathBuf,
    /// Number of clusters.
    #[arg(long)]
    k: usize,
    /// Candidate list size; required for lloyd-ccl and elkan-ccl only.
    #[arg(long = "k-prime")]
    k_prime: Option<usize>,
    /// Initial centroid selection.
    #[arg(long, value_enum, default_value = "random")]
    seeding: SeedingArg,
    /// RNG seed driving all randomness in the run.
    #[arg(long)]
    seed: u64,
    /// Iteration cap when assignments never reach a fixed point.
    #[arg(long = "max-iters", default_value_t = kmeans_ccl::run::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Dataset field separator handling.
    #[arg(long, value_enum, default_value = "auto")]
    delimiter: DelimiterArg,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaseArg {
    Lloyd,
    Elkan,
}

#[derive(Args)]
struct BenchArgs {
    /// Base algorithm; the augmented side is its candidate-list variant.
    #[arg(long, value_enum)]
    base: BaseArg,
    /// Dataset file (text, one point per line).
    #[arg(long)]
    data: PathBuf,
    /// Number of clusters, shared by both runs.
    #[arg(long)]
    k: usize,
    /// Candidate list size for the augmented run.
    #[arg(long = "k-prime")]
    k_prime: usize,
    /// Initial centroid selection, shared by both runs.
    #[arg(long, value_enum, default_value = "random")]
    seeding: SeedingArg,
    /// RNG seed; both runs start from the same centroids.
    #[arg(long)]
    seed: u64,
    /// Iteration cap applied to both runs.
    #[arg(long = "max-iters", default_value_t = kmeans_ccl::run::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Dataset field separator handling.
    #[arg(long, value_enum, default_value = "auto")]
    delimiter: DelimiterArg,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Application errors carrying their process exit code.
enum AppError {
    /// Invalid configuration or flag combination (exit 2).
    Usage(String),
    /// Input data could not be read or parsed (exit 3).
    Input(String),
    /// Everything else (exit 1).
    Internal(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Input(_) => 3,
            AppError::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Input(m) | AppError::Internal(m) => m,
        }
    }
}

/// Library errors raised while configuring or executing a run map to the
/// configuration exit code; anything unexpected is internal.
fn config_err(err: LibError) -> AppError {
    match err {
        LibError::InvalidArgument(_) | LibError::DimensionMismatch { .. } => {
            AppError::Usage(err.to_string())
        }
        LibError::Parse { .. } => AppError::Input(err.to_string()),
        LibError::Io(_) => AppError::Internal(err.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 0 for --help/--version and 2 for usage errors.
        Err(err) => err.exit(),
    };
    let command_echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Run(args) => cmd_run(args, command_echo),
        Command::Bench(args) => cmd_bench(args, command_echo),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

/// Rejects flags that do not belong to the selected dataset family.
fn reject_foreign_flags(kind: KindArg, args: &GenerateArgs) -> Result<(), AppError> {
    let mut foreign: Vec<&str> = Vec::new();
    let mut check = |present: bool, name: &'static str| {
        if present {
            foreign.push(name);
        }
    };
    match kind {
        KindArg::Uniform => {
            check(args.grid.is_some(), "--grid");
            check(args.spacing.is_some(), "--spacing");
            check(args.sigma.is_some(), "--sigma");
            check(args.k.is_some(), "--k");
            check(args.r.is_some(), "--r");
            check(args.variance.is_some(), "--variance");
        }
        KindArg::Grid => {
            check(args.d.is_some(), "--d");
            check(args.lo.is_some(), "--lo");
            check(args.hi.is_some(), "--hi");
            check(args.k.is_some(), "--k");
            check(args.r.is_some(), "--r");
            check(args.variance.is_some(), "--variance");
        }
        KindArg::Circle => {
            check(args.d.is_some(), "--d");
            check(args.lo.is_some(), "--lo");
            check(args.hi.is_some(), "--hi");
            check(args.grid.is_some(), "--grid");
            check(args.spacing.is_some(), "--spacing");
            check(args.sigma.is_some(), "--sigma");
        }
    }
    if foreign.is_empty() {
        Ok(())
    } else {
        Err(AppError::Usage(format!(
            "{} do(es) not apply to --type {}",
            foreign.join(", "),
            match kind {
                KindArg::Uniform => "uniform",
                KindArg::Grid => "grid",
                KindArg::Circle => "circle",
            }
        )))
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), AppError> {
    reject_foreign_flags(args.kind, &args)?;
    let mut rng = SplitMix64::new(args.seed);
    let ds: Dataset = match args.kind {
        KindArg::Uniform => {
            let d = args
                .d
                .ok_or_else(|| AppError::Usage("--type uniform requires --d".to_string()))?;
            let lo = args.lo.unwrap_or(0.0);
            let hi = args.hi.unwrap_or(1.0);
            gen_uniform(args.n, d, lo, hi, &mut rng).map_err(config_err)?
        }
        KindArg::Grid => {
            let grid = args.grid.unwrap_or(10);
            let spacing = args.spacing.unwrap_or(10.0);
            let sigma = args.sigma.unwrap_or(1.0);
            gen_grid_gaussians(args.n, grid, spacing, sigma, &mut rng).map_err(config_err)?
        }
        KindArg::Circle => {
            let k = args
                .k
                .ok_or_else(|| AppError::Usage("--type circle requires --k".to_string()))?;
            let r = args
                .r
                .ok_or_else(|| AppError::Usage("--type circle requires --r".to_string()))?;
            let variance = args.variance.unwrap_or(0.25);
            gen_circle_gaussians(args.n, k, r, variance, &mut rng).map_err(config_err)?
        }
    };
    let note = format!("n={} d={} seed={}", ds.n(), ds.d(), args.seed);
    match &args.out {
        Some(path) => {
            save_matrix(&ds, path)
                .map_err(|e| AppError::Internal(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote {} ({note})", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for x in 0..ds.n() {
                let line: Vec<String> =
                    ds.point(x).iter().map(|v| format!("{v:.16e}")).collect();
                writeln!(stdout, "{}", line.join(" "))
                    .map_err(|e| AppError::Internal(e.to_string()))?;
            }
            eprintln!("{note}");
        }
    }
    Ok(())
}

fn load_dataset(path: &PathBuf, delimiter: DelimiterArg) -> Result<Dataset, AppError> {
    load_matrix(path, delimiter.into()).map_err(|err| match err {
        // A missing or unreadable dataset is an input failure, like a
        // malformed one.
        LibError::Io(e) => AppError::Input(format!("cannot read {}: {e}", path.display())),
        LibError::Parse { .. } => AppError::Input(err.to_string()),
        other => AppError::Input(other.to_string()),
    })
}

fn check_k_prime_usage(algorithm: Algorithm, k_prime: Option<usize>) -> Result<(), AppError> {
    match (algorithm.uses_ccl(), k_prime) {
        (true, None) => Err(AppError::Usage(format!(
            "--k-prime is required for --algo {algorithm}"
        ))),
        (false, Some(_)) => Err(AppError::Usage(format!(
            "--k-prime does not apply to --algo {algorithm}"
        ))),
        _ => Ok(()),
    }
}

fn emit_report(doc: &ReportDocument, out: Option<&PathBuf>) -> Result<(), AppError> {
    let json = doc.to_json().map_err(AppError::Internal)?;
    match out {
        Some(path) => fs::write(path, json)
            .map_err(|e| AppError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn cmd_run(args: RunArgs, command_echo: String) -> Result<(), AppError> {
    let algorithm: Algorithm = args.algo.into();
    check_k_prime_usage(algorithm, args.k_prime)?;
    let ds = load_dataset(&args.data, args.delimiter)?;
    let mut cfg = RunConfig::new(algorithm, args.k, args.seeding.into(), args.seed)
        .with_max_iters(args.max_iters);
    if let Some(kp) = args.k_prime {
        cfg = cfg.with_k_prime(kp);
    }
    let result = kmeans_ccl::run(&ds, &cfg).map_err(config_err)?;
    let doc = ReportDocument::for_run(command_echo, RunSummary::from_result(&result));
    emit_report(&doc, args.out.as_ref())
}

fn cmd_bench(args: BenchArgs, command_echo: String) -> Result<(), AppError> {
    let base_algorithm = match args.base {
        BaseArg::Lloyd => Algorithm::Lloyd,
        BaseArg::Elkan => Algorithm::Elkan,
    };
    let aug_algorithm = base_algorithm
        .ccl_variant()
        .expect("lloyd and elkan both have candidate-list variants");
    let ds = load_dataset(&args.data, args.delimiter)?;
    let base_cfg = RunConfig::new(base_algorithm, args.k, args.seeding.into(), args.seed)
        .with_max_iters(args.max_iters);
    let aug_cfg = RunConfig::new(aug_algorithm, args.k, args.seeding.into(), args.seed)
        .with_max_iters(args.max_iters)
        .with_k_prime(args.k_prime);
    let report = run_benchmark(&ds, &base_cfg, &aug_cfg).map_err(config_err)?;
    let doc = ReportDocument::for_bench(command_echo, report);
    emit_report(&doc, args.out.as_ref())
}
