//! Command-line front end: test-bed generation, per-method solving,
//! simulation sweeps, and gap reporting.
//!
//! Exit codes: 0 on success, 2 for usage errors (unknown names, malformed
//! files, no-op method/deployment combinations), 3 for numeric diagnostics
//! (grid or search-bound trips, simulations stopped by the replication
//! ceiling before reaching target precision), 1 for plain I/O failures.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lotlab::commands::{self, expand_selection};
use lotlab::method::{Method, SolveContext};
use lotlab::report::Pivot;
use lotlab::sim::REPLICATION_CEILING;
use lotlab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "lotlab",
    version,
    about = "Stochastic lot-sizing policy laboratory",
    long_about = "Computes replenishment policies for non-stationary stochastic demand \
                  (exact dynamic program, two dynamic heuristics, a static order-quantity \
                  plan, and two order-up-to plans), simulates them under common random \
                  numbers, and aggregates optimality gaps."
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolveKnobs {
    /// Inventory-grid resolution of the dynamic program.
    #[arg(long, default_value_t = 1.0)]
    grid_step: f64,
    /// Segment count for the piecewise-linear cycle costing.
    #[arg(long, default_value_t = lotlab::static_dynamic::DEFAULT_SEGMENTS)]
    segments: usize,
    /// Candidate paths kept per node in the static schedule search.
    #[arg(long, default_value_t = lotlab::static_rq::DEFAULT_TOP_K)]
    top_k: usize,
    /// Directory for on-disk stationary-table caching.
    #[arg(long)]
    table_cache: Option<PathBuf>,
}

impl SolveKnobs {
    fn context(&self) -> Result<SolveContext> {
        let mut ctx = SolveContext::new()
            .with_grid_step(self.grid_step)?
            .with_segments(self.segments)?
            .with_top_k(self.top_k)?;
        if let Some(dir) = &self.table_cache {
            ctx = ctx.with_stationary_cache_dir(dir.clone());
        }
        Ok(ctx)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the 216-instance benchmark manifest.
    Generate {
        /// Manifest path to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute one method's policy for every instance in a manifest.
    Solve {
        /// Instance manifest to read.
        #[arg(long)]
        manifest: PathBuf,
        /// Method name: sdp, ask, bol, soxvar, tar, or ros.
        #[arg(long)]
        method: String,
        /// Policy file to write.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        knobs: SolveKnobs,
    },
    /// Simulate methods against a manifest under common random numbers.
    Simulate {
        /// Instance manifest to read.
        #[arg(long)]
        manifest: PathBuf,
        /// Comma-separated methods, or 'all'.
        #[arg(long, default_value = "all")]
        method: String,
        /// Comma-separated deployments (conventional, replanning), or 'all'.
        /// 'all' skips the no-op re-planned reorder-level combinations.
        #[arg(long, default_value = "conventional")]
        deployment: String,
        /// Stream seed shared by every policy (common random numbers).
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Replication cap per simulation.
        #[arg(long, default_value_t = REPLICATION_CEILING)]
        ceiling: usize,
        /// Results file to write (tab-separated).
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        knobs: SolveKnobs,
    },
    /// Aggregate a results file into an optimality-gap table.
    Report {
        /// Results file from `simulate`.
        #[arg(long)]
        results: PathBuf,
        /// Grouping: pattern, cv, setup_cost, penalty_cost, or all.
        #[arg(long, default_value = "all")]
        pivot: String,
        /// Report file to write; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append per-column boxplot statistics.
        #[arg(long)]
        boxplot: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the pool can only be configured once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match execute(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Format(_) => 2,
        Error::GridTooSmall(_) | Error::SearchBounds(_) | Error::TableCoverage { .. } => 3,
        Error::Io(_) => 1,
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Generate { out } => {
            let count = commands::cmd_generate(&out)?;
            println!("wrote {count} instances to {}", out.display());
            Ok(0)
        }
        Command::Solve {
            manifest,
            method,
            out,
            knobs,
        } => {
            let method: Method = method.parse()?;
            let ctx = knobs.context()?;
            let count = commands::cmd_solve(&manifest, method, &out, &ctx)?;
            println!("solved {method} for {count} instances into {}", out.display());
            Ok(0)
        }
        Command::Simulate {
            manifest,
            method,
            deployment,
            seed,
            ceiling,
            out,
            knobs,
        } => {
            let selection = expand_selection(&method, &deployment)?;
            let ctx = knobs.context()?;
            let summary =
                commands::cmd_simulate(&manifest, &selection, seed, ceiling, &out, &ctx)?;
            println!("wrote {} result rows to {}", summary.rows, out.display());
            if summary.precision_shortfalls > 0 {
                eprintln!(
                    "warning: {} rows hit the replication ceiling before reaching \
                     target precision",
                    summary.precision_shortfalls
                );
                return Ok(3);
            }
            Ok(0)
        }
        Command::Report {
            results,
            pivot,
            out,
            boxplot,
        } => {
            let pivot: Pivot = pivot.parse()?;
            let text = commands::cmd_report(&results, pivot, out.as_deref(), boxplot)?;
            match out {
                Some(path) => println!("wrote report to {}", path.display()),
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}
