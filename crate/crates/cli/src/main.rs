//! `tessera` command-line front end.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "tessera",
    version,
    about = "Weighted-region shortest paths on square grids"
)]
struct Cli {
    /// Worker threads for batch commands (default: available parallelism).
    #[arg(long, global = true, env = "TESSERA_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shortest path on the 8-neighbour grid graph.
    SolveGrid(IoArgs),
    /// Steiner-point reference solution of the continuous problem.
    SolveRef {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Solve at exactly `--level` instead of refining up to it.
        #[arg(long)]
        fixed: bool,
        /// Also write the per-cell breakdown CSV of the solution.
        #[arg(long, value_name = "PATH")]
        breakdown: Option<String>,
    },
    /// Grid path assembled from the level-set components of the reference path.
    LemmaPath {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 0.414213562)]
        a: f64,
        /// Also write per-cell certificates as CSV.
        #[arg(long, value_name = "PATH")]
        certificates: Option<String>,
    },
    /// Grid-to-reference ratio report for one instance (CSV).
    Ratio {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 0.414213562)]
        a: f64,
    },
    /// Ratio reports for every instance of a manifest or a random suite.
    Sweep {
        /// Manifest listing one instance path per line (relative to the manifest).
        #[arg(long = "in", value_name = "PATH", required_unless_present = "random")]
        manifest: Option<String>,
        /// Generate this many random instances instead of reading a manifest.
        #[arg(long, value_name = "COUNT", conflicts_with = "manifest")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 0.414213562)]
        a: f64,
    },
    /// Search weight assignments for the largest grid-to-reference ratio.
    SearchWorst {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Comma-separated weights.
        #[arg(long, value_delimiter = ',', default_value = "1,100")]
        palette: Vec<f64>,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the maximizing instance (.wrp).
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 0.414213562)]
        a: f64,
    },
    /// SVG picture of an instance with optional paths.
    Render {
        #[command(flatten)]
        io: IoArgs,
        /// Grid path JSON to draw in black.
        #[arg(long, value_name = "PATH")]
        grid: Option<String>,
        /// Reference solution or polyline JSON to draw in red.
        #[arg(long = "ref", value_name = "PATH")]
        reference: Option<String>,
        #[arg(long, default_value_t = 40)]
        cell_px: u32,
    },
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Instance file (.wrp text or JSON).
    #[arg(long = "in", value_name = "PATH")]
    input: String,
    /// Output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Args, Debug, Clone, Copy)]
struct OracleArgs {
    /// Finest Steiner refinement level.
    #[arg(long, default_value_t = 5, env = "TESSERA_LEVEL")]
    level: u32,
    #[arg(long, default_value_t = 1e-4)]
    rel_tol: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(2)
        }
    }
}
