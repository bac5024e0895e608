use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use matchsat::EncodeFlags;
use matchsat_cli::commands::{self, EXIT_ERROR};

#[derive(Parser)]
#[command(
    name = "matchsat",
    about = "CNF encoding, solving and exhaustive validation for the matching decision problem",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FlagArgs {
    /// Also express the adjacency rule through the index mapping
    #[arg(long)]
    embed_bfc: bool,
    /// Restrict index domains using count feasibility
    #[arg(long)]
    tighten_ranges: bool,
    /// Drop the per-edge uniqueness clauses (derivable from the successor
    /// restriction)
    #[arg(long)]
    no_redundant: bool,
}

impl FlagArgs {
    fn to_flags(&self) -> EncodeFlags {
        EncodeFlags {
            embed_bfc: self.embed_bfc,
            tighten_ranges: self.tighten_ranges,
            include_redundant: !self.no_redundant,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Encode an instance as DIMACS CNF on standard output
    Encode {
        graph: PathBuf,
        /// Matching size threshold (at least 2)
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Encode, solve, decode and verify one instance (exit 10 SAT, 20 UNSAT)
    Solve {
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        flags: FlagArgs,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
        /// Step budget (decisions + propagations); exceeding it exits 40
        #[arg(long)]
        budget: Option<u64>,
        /// Include wall-clock timing (makes output non-deterministic)
        #[arg(long)]
        timing: bool,
    },
    /// Solve for every K from 2 to m and report the largest satisfiable K
    Sweep {
        graph: PathBuf,
        #[command(flatten)]
        flags: FlagArgs,
        /// Compare the largest satisfiable K against the exhaustive oracle
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the exhaustive corpus against the oracle (exit 30 on discrepancy)
    Corpus {
        /// Vertex bound for exhaustive generation
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        /// Comma-separated thresholds instead of the full 2..=m range
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<u32>>,
        /// Sweep all eight encoder flag combinations
        #[arg(long)]
        all_flags: bool,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Sweep all edge orderings for graphs up to this many vertices
        #[arg(long, default_value_t = 4)]
        ordering_max_n: u32,
        /// Write the full JSON report here (defaults to discrepancies.json
        /// when a disagreement is found)
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Per-family clause counts, variable counts and the structure report
    Stats {
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        flags: FlagArgs,
        #[arg(long)]
        json: bool,
        /// Compare against a stored expected report (exit 2 on mismatch)
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Exhaustive maximum matching for a graph
    Oracle {
        graph: PathBuf,
        /// Also answer whether a matching of this size exists
        #[arg(long)]
        k: Option<u32>,
    },
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Encode { graph, k, flags } => commands::cmd_encode(&graph, k, flags.to_flags()),
        Command::Solve {
            graph,
            k,
            flags,
            json,
            budget,
            timing,
        } => commands::cmd_solve(&graph, k, flags.to_flags(), json, budget, timing),
        Command::Sweep {
            graph,
            flags,
            check,
            json,
        } => commands::cmd_sweep(&graph, flags.to_flags(), check, json),
        Command::Corpus {
            max_n,
            k,
            all_flags,
            workers,
            ordering_max_n,
            report,
            json,
            timing,
        } => commands::cmd_corpus(
            max_n,
            k,
            all_flags,
            workers,
            ordering_max_n,
            report,
            json,
            timing,
        ),
        Command::Stats {
            graph,
            k,
            flags,
            json,
            golden,
        } => commands::cmd_stats(&graph, k, flags.to_flags(), json, golden.as_deref()),
        Command::Oracle { graph, k } => commands::cmd_oracle(&graph, k),
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (encode | head, etc.).
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_ERROR,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
