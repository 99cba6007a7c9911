use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use digitlab_cli::{run, Command, Format, RunConfig, Status};

/// Binary digits of square roots and the counting bounds built on them.
#[derive(Debug, Parser)]
#[command(name = "digitlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Radicand d (not a perfect square).
    #[arg(long, global = true, default_value_t = 2)]
    radicand: u64,

    /// Number of fractional bits N.
    #[arg(long, global = true, default_value_t = 10_000)]
    bits: u64,

    #[arg(
        long,
        global = true,
        env = "DIGITLAB_CACHE",
        default_value = ".digitlab-cache"
    )]
    cache_dir: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,

    /// Use the packed convolution for r(n) above the naive threshold.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    fast: bool,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Fail instead of expanding digits that are not already cached.
    #[arg(long, global = true)]
    no_compute: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print the fractional digits of √d.
    Digits,
    /// Run the exact identity suite and seeded random properties.
    Verify {
        #[arg(long, default_value_t = digitlab_core::suite::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Dump r(n) as CSV.
        #[arg(long)]
        dump_r: Option<PathBuf>,
        /// Dump T(R) as CSV.
        #[arg(long)]
        dump_t: Option<PathBuf>,
    },
    /// Check every inequality family for 1 ≤ N ≤ bits.
    Bounds {
        #[arg(long = "m", value_delimiter = ',', default_values_t = digitlab_core::suite::INTERVAL_COUNTS)]
        interval_counts: Vec<u64>,
    },
    /// Interval upper bound at N = bits.
    Intervals {
        #[arg(long = "m", value_delimiter = ',', default_values_t = digitlab_core::suite::INTERVAL_COUNTS)]
        interval_counts: Vec<u64>,
        /// Explicit breakpoints 0 = b0 < b1 < ... < bm = N.
        #[arg(long, value_delimiter = ',')]
        breakpoints: Option<Vec<u64>>,
    },
    /// Parity split bounds for every N up to bits/2.
    Parity,
    /// Check the 0100 forcing pattern of √2 against √18.
    Forcing,
    /// Tabulate nz(N)/√N against the proven curves.
    Ratio {
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<u64>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match &cli.command {
        Cmd::Digits => Command::Digits,
        Cmd::Verify { .. } => Command::Verify,
        Cmd::Bounds { .. } => Command::Bounds,
        Cmd::Intervals { .. } => Command::Intervals,
        Cmd::Parity => Command::Parity,
        Cmd::Forcing => Command::Forcing,
        Cmd::Ratio { .. } => Command::Ratio,
    };
    let mut cfg = RunConfig::new(command, cli.radicand, cli.bits, cli.cache_dir);
    cfg.format = match cli.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    cfg.fast = cli.fast;
    cfg.out = cli.out;
    cfg.no_compute = cli.no_compute;
    match cli.command {
        Cmd::Verify {
            seed,
            cases,
            dump_r,
            dump_t,
        } => {
            cfg.seed = seed;
            cfg.cases = cases;
            cfg.dump_r = dump_r;
            cfg.dump_t = dump_t;
        }
        Cmd::Bounds { interval_counts } => cfg.interval_counts = interval_counts,
        Cmd::Intervals {
            interval_counts,
            breakpoints,
        } => {
            cfg.interval_counts = interval_counts;
            cfg.breakpoints = breakpoints;
        }
        Cmd::Ratio { n_list } => cfg.n_list = n_list,
        _ => {}
    }

    match run(&cfg) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("digitlab: {e}");
            ExitCode::from(Status::Error as u8)
        }
    }
}
