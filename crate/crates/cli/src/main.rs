//! `fixed-kmeans`: fixed-size clustering, seating plans and benchmarks.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fixed_kmeans::bench::{run_bench, BenchConfig};
use fixed_kmeans::kmeans::{DEFAULT_MAX_ITER, DEFAULT_SEED};
use fixed_kmeans::seatplan::{PlanConfig, DEFAULT_RESTARTS as SEATPLAN_RESTARTS};
use fixed_kmeans::{cluster_multi_restart, io, plan, Error, RunConfig, SizeSpec};

#[derive(Parser)]
#[command(
    name = "fixed-kmeans",
    version,
    about = "k-means with fixed cluster sizes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a point file into clusters of the given sizes.
    Cluster(ClusterArgs),
    /// Seat guests at tables from a dissimilarity matrix.
    Seatplan(SeatplanArgs),
    /// Time the clustering loop on synthetic Gaussian mixtures.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Shared {
    /// Random seed. Overrides FIXED_KMEANS_SEED.
    #[arg(long, env = "FIXED_KMEANS_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Draw the seed from OS entropy instead (it is recorded in the output).
    #[arg(long, conflicts_with = "seed")]
    random_seed: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Output directory.
    #[arg(long, default_value = "fixed-kmeans-out")]
    out: PathBuf,
}

impl Shared {
    fn seed(&self) -> u64 {
        if self.random_seed {
            rand::random()
        } else {
            self.seed
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    /// One point per line; comma and/or whitespace separated; `#` comments.
    points: PathBuf,
    /// Cluster sizes, e.g. 4,4,5,6,3. Must sum to the number of points.
    #[arg(long)]
    sizes: SizeSpec,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct SeatplanArgs {
    /// CSV with a header row of guest names and one labelled row per guest.
    matrix: PathBuf,
    /// Table sizes, e.g. 4,4,5,6,3.
    #[arg(long)]
    sizes: SizeSpec,
    #[arg(long, default_value_t = SEATPLAN_RESTARTS)]
    restarts: usize,
    /// Keep MDS components with eigenvalue above this fraction of the largest.
    #[arg(long, default_value_t = fixed_kmeans::mds::DEFAULT_TOL)]
    mds_tol: f64,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizesMode {
    /// k clusters whose sizes differ by at most one.
    Balanced,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "balanced")]
    sizes_mode: SizesMode,
    /// Dataset sizes to time.
    #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Number of clusters (capped at n).
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[command(flatten)]
    shared: Shared,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Io(_)) { 1 } else { 2 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Errors not already carrying a location get the input file as prefix.
fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::Parse { .. } | Error::Io(_) => e.into(),
        other => Failure {
            message: format!("{}: {other}", path.display()),
            ..other.into()
        },
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .and_then(|_| std::fs::write(dir.join(name), contents))
        .map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", dir.join(name).display()),
        })
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn run_config(shared: &Shared, restarts: usize) -> Result<RunConfig, Failure> {
    if restarts == 0 {
        return Err(Failure::input("--restarts must be at least 1"));
    }
    if shared.max_iter == 0 {
        return Err(Failure::input("--max-iter must be at least 1"));
    }
    Ok(RunConfig::default()
        .with_seed(shared.seed())
        .with_restarts(restarts)
        .with_max_iter(shared.max_iter))
}

fn cmd_cluster(args: &ClusterArgs) -> Result<(), Failure> {
    let config = run_config(&args.shared, args.restarts)?;
    let points = io::read_points(&args.points)?;
    let result =
        cluster_multi_restart(&points, &args.sizes, &config).map_err(in_file(&args.points))?;

    let input = args.points.display().to_string();
    let summary = output::ClusterSummary::new(&input, points.dim(), &args.sizes, &result);
    let out = &args.shared.out;
    write_file(out, "partition.csv", &output::partition_csv(&result))?;
    write_file(out, "centroids.csv", &output::centroids_csv(&result))?;
    write_file(out, "summary.json", &to_json(&summary))?;
    println!(
        "n {} k {} mse {} iterations {} converged {} restarts {} seed {}",
        summary.n,
        summary.k,
        summary.mse,
        summary.iterations,
        summary.converged,
        summary.restarts,
        summary.seed
    );
    Ok(())
}

fn cmd_seatplan(args: &SeatplanArgs) -> Result<(), Failure> {
    let run = run_config(&args.shared, args.restarts)?;
    let (guests, matrix) = io::read_matrix_csv(&args.matrix)?;
    let config = PlanConfig {
        run,
        mds_tol: args.mds_tol,
    };
    let seating = plan(&matrix, &guests, &args.sizes, &config).map_err(in_file(&args.matrix))?;
    if seating.discarded_negative > 0.0 {
        eprintln!(
            "note: matrix is not Euclidean; MDS discarded negative eigenvalue mass {}",
            seating.discarded_negative
        );
    }
    let input = args.matrix.display().to_string();
    let text = output::plan_text(&seating);
    let out = &args.shared.out;
    write_file(out, "plan.txt", &text)?;
    write_file(
        out,
        "plan.json",
        &to_json(&output::PlanOut::new(&input, &args.sizes, &seating)),
    )?;
    print!("{text}");
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let SizesMode::Balanced = args.sizes_mode;
    if args.n.is_empty() || args.n.contains(&0) {
        return Err(Failure::input("--n values must be positive"));
    }
    if args.dim == 0 || args.k == 0 {
        return Err(Failure::input("--dim and --k must be positive"));
    }
    let config = run_config(&args.shared, args.restarts)?;
    let bench = BenchConfig {
        sizes: args.n.clone(),
        dim: args.dim,
        clusters: args.k,
        seed: config.seed,
        max_iter: config.max_iter,
        restarts: config.restarts,
        ..BenchConfig::default()
    };
    let report = run_bench(&bench)?;
    write_file(
        &args.shared.out,
        "bench.json",
        &to_json(&output::BenchOut::new(args.dim, bench.seed, &report)),
    )?;
    print!("{}", output::bench_table(&report));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Seatplan(a) => cmd_seatplan(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
