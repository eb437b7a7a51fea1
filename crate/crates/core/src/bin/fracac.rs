use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fracac::experiment::{run_and_write, Experiment, ExperimentConfig, OutputFormat};
use fracac::Error;

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Bounds,
    Multiplicity,
    ZeroScaling,
    All,
}

/// Energy bounds, constrained minima and critical-pair counts for the
/// fractional Allen-Cahn energy on an interval.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Fractional orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.75")]
    s: Vec<f64>,
    /// Interface widths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    eps: Vec<f64>,
    /// Test-family degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 256)]
    cells: usize,
    /// Random sphere samples per bound.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    grad_tol: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, value_enum, default_value = "all")]
    experiment: Which,
    /// Interval endpoints `a,b`.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0], allow_hyphen_values = true)]
    domain: Vec<f64>,
    /// Sampled members used as descent starts.
    #[arg(long, default_value_t = 8)]
    member_seeds: usize,
    /// Random descent starts.
    #[arg(long, default_value_t = 4)]
    random_seeds: usize,
    #[arg(long, default_value_t = 20_000)]
    max_iters: usize,
    /// Write 0 in the runtime column so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.domain.len() != 2 {
        eprintln!("error: --domain takes exactly two values a,b");
        return ExitCode::from(2);
    }
    let cfg = ExperimentConfig {
        s_list: args.s,
        eps_list: args.eps,
        k_list: args.k,
        num_cells: args.cells,
        sample_count: args.samples,
        seed: args.seed,
        grad_tol: args.grad_tol,
        output_path: args.out,
        format: match args.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        domain: (args.domain[0], args.domain[1]),
        member_seeds: args.member_seeds,
        random_seeds: args.random_seeds,
        max_iters: args.max_iters,
        timing: !args.no_timing,
    };
    let experiment = match args.experiment {
        Which::Bounds => Experiment::Bounds,
        Which::Multiplicity => Experiment::Multiplicity,
        Which::ZeroScaling => Experiment::ZeroScaling,
        Which::All => Experiment::All,
    };
    match run_and_write(&cfg, experiment) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config { .. } | Error::InvalidParameter(_) | Error::InvalidGrid(_) => 2,
                Error::Io(_) => 1,
                _ => 3,
            })
        }
    }
}
