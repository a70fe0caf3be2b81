//! `oscillab`: batch front end over the core library.
//!
//! Exit codes: 0 success, 1 domain error (positive entropy, invalid map,
//! budget...), 2 usage or configuration error. Domain errors print a
//! single-line JSON diagnostic on stderr. Every run writes a manifest next
//! to its outputs; `rerun` re-executes a manifest's config.

mod config;
mod manifest;
mod plot;
mod runs;
mod seqio;

use clap::{Args, Parser, Subcommand};
use oscillab_core::Error;

use config::RunConfig;

#[derive(Parser)]
#[command(name = "oscillab", version, about = "Oscillating-sequence laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (0 = library default); OSCILLAB_THREADS supplies the
    /// default. Numeric outputs are identical at any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory that receives outputs and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out_dir: String,
}

#[derive(Args, Clone)]
struct SamplerArgs {
    /// Polynomial order to test.
    #[arg(long)]
    order: usize,
    /// Threshold for the consistency verdict.
    #[arg(long, default_value_t = 0.05)]
    tau: f64,
    /// Random phases drawn per grid length.
    #[arg(long, default_value_t = 128)]
    samples: usize,
    /// Denominator of the exhaustive rational coefficient grid
    /// (0 picks the order-based default).
    #[arg(long, default_value_t = 0)]
    grid_den: u64,
    /// Seed for the random phase stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a weight sequence and write it as CSV or OSCS1 binary.
    Gen {
        /// Generator spec as a JSON file, or inline JSON.
        #[arg(long)]
        spec: String,
        /// Output file; `.bin` selects the binary format.
        #[arg(long)]
        out: String,
    },
    /// Weighted exponential sums over a length grid.
    Sum {
        /// Sequence source: data file (.csv/.bin) or generator JSON.
        #[arg(long)]
        seq: String,
        /// Ascending phase coefficients, comma separated ("p/q" or decimal).
        #[arg(long)]
        phase: String,
        /// Single length (mutually exclusive with --grid).
        #[arg(long, short = 'n')]
        n: Option<usize>,
        /// Geometric length grid "start,factor,count".
        #[arg(long)]
        grid: Option<String>,
        /// Phase arithmetic backend.
        #[arg(long, default_value = "exact")]
        backend: String,
        #[arg(long, default_value = "sums.csv")]
        out: String,
        /// Optional SVG log-log plot of |value| vs N.
        #[arg(long)]
        plot: Option<String>,
    },
    /// Empirical oscillation-order report.
    Oscillate {
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// Geometric length grid "start,factor,count".
        #[arg(long)]
        grid: String,
        #[arg(long, default_value = "oscillation.json")]
        out: String,
        #[arg(long)]
        plot: Option<String>,
    },
    /// Verify the residue decomposition, twist, and reconstruction
    /// identities at a prime modulus.
    PoVerify {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        phase: String,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, default_value = "po-verify.json")]
        out: String,
    },
    /// Order reports for a sequence and all its stride-a subsequences.
    Subseq {
        #[arg(long)]
        seq: String,
        /// Subsequence stride (>= 2).
        #[arg(long)]
        stride: usize,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long)]
        grid: String,
        #[arg(long, default_value = "subseq.json")]
        out: String,
    },
    /// Certify an affine map: quasi-unipotence of the map and its doubled
    /// automorphism, or the positive-entropy diagnosis.
    MapAnalyze {
        /// Map description (JSON file).
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "certificate.json")]
        out: String,
    },
    /// Weighted multiple ergodic averages over a scenario's length grid.
    ErgAvg {
        /// Scenario bundle (JSON file).
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value = "erg-avg.csv")]
        out: String,
        #[arg(long)]
        plot: Option<String>,
    },
    /// Exact phase-reduction crosscheck report for a scenario.
    Reduce {
        #[arg(long)]
        scenario: String,
        /// Values of m checked per residue.
        #[arg(long, default_value_t = 200)]
        m_count: u64,
        #[arg(long, default_value = "reduction.json")]
        out: String,
    },
    /// Uniformity norm of a sequence over Z_N.
    Gowers {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        k: u32,
        /// brute, fourier, or auto.
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, default_value = "gowers.json")]
        out: String,
    },
    /// Re-execute the configuration recorded in a run manifest.
    Rerun {
        #[arg(long)]
        manifest: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("OSCILLAB_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }

    let config = match build_config(cli.command) {
        Ok(c) => c,
        Err(e) => fail(&e),
    };
    match runs::execute(&config, &cli.out_dir) {
        Ok(()) => {}
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ! {
    eprintln!(
        "{}",
        serde_json::json!({ "error": e.kind(), "message": e.to_string() })
    );
    std::process::exit(if e.is_usage() { 2 } else { 1 });
}

fn build_config(command: Command) -> Result<RunConfig, Error> {
    Ok(match command {
        Command::Gen { spec, out } => RunConfig::Gen { spec, out },
        Command::Sum {
            seq,
            phase,
            n,
            grid,
            backend,
            out,
            plot,
        } => {
            let grid = config::resolve_grid(n, grid.as_deref())?;
            RunConfig::Sum {
                seq,
                phase,
                grid,
                backend,
                out,
                plot,
            }
        }
        Command::Oscillate {
            seq,
            sampler,
            grid,
            out,
            plot,
        } => RunConfig::Oscillate {
            seq,
            order: sampler.order,
            tau: sampler.tau,
            samples: sampler.samples,
            grid_den: sampler.grid_den,
            seed: sampler.seed,
            grid: config::parse_geometric_grid(&grid)?,
            out,
            plot,
        },
        Command::PoVerify {
            seq,
            prime,
            phase,
            n,
            out,
        } => RunConfig::PoVerify {
            seq,
            prime,
            phase,
            n,
            out,
        },
        Command::Subseq {
            seq,
            stride,
            sampler,
            grid,
            out,
        } => RunConfig::Subseq {
            seq,
            stride,
            order: sampler.order,
            tau: sampler.tau,
            samples: sampler.samples,
            grid_den: sampler.grid_den,
            seed: sampler.seed,
            grid: config::parse_geometric_grid(&grid)?,
            out,
        },
        Command::MapAnalyze { map, out } => RunConfig::MapAnalyze { map, out },
        Command::ErgAvg {
            scenario,
            out,
            plot,
        } => RunConfig::ErgAvg {
            scenario,
            out,
            plot,
        },
        Command::Reduce {
            scenario,
            m_count,
            out,
        } => RunConfig::Reduce {
            scenario,
            m_count,
            out,
        },
        Command::Gowers {
            seq,
            k,
            method,
            n,
            out,
        } => RunConfig::Gowers {
            seq,
            k,
            method,
            n,
            out,
        },
        Command::Rerun { manifest } => {
            let recorded = manifest::read_manifest(&manifest)?;
            recorded.config
        }
    })
}
