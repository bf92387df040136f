use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

mod commands;
mod seedfile;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit status 2.
    Input(String),
}

/// A finished command: text lines, the same content as JSON, and whether its checks held.
pub struct Report {
    pub text: Vec<String>,
    pub json: Value,
    pub ok: bool,
}

#[derive(Parser)]
#[command(name = "cluster", version, about = "Exact computations with cluster algebras")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed along a sequence of directions (1-based).
    Mutate {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long = "at", required = true, value_delimiter = ',')]
        at: Vec<usize>,
        /// Write the mutated seed to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the exchange graph of a seed breadth first.
    Explore {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_nodes: usize,
        /// Write every seed found as seed_NNNN.json into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Rank 2 cluster variables for B = [[0, b], [-c, 0]].
    Rank2 {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        c: u32,
        /// List the cluster variables.
        #[arg(long)]
        list: bool,
        /// How many variables to list when the sequence is not periodic.
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Periodicity of the Y-system on an r x s grid.
    Ysystem {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Pentagram map: y-parameters of a random polygon, or conserved class sums.
    Pentagram {
        #[arg(long)]
        n: usize,
        /// Print the class sums of perfect matchings of the torus graph.
        #[arg(long)]
        invariants: bool,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
    },
    /// Compatible Poisson structures of a seed.
    Poisson {
        #[arg(long)]
        seed: PathBuf,
    },
    /// Quantum mutation along a sequence of directions (1-based).
    Quantum {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long = "at", value_delimiter = ',')]
        at: Vec<usize>,
    },
    /// Markov triples with entries up to a bound.
    Markov {
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Triangulations of an n-gon as seeds of the Grassmannian Gr(2, n).
    Gr2 {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Run the identity battery.
    Verify {
        /// Criterion numbers to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Smaller random sweeps.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        rng_seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn dispatch(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Mutate { seed, at, out } => commands::mutate(&seed, &at, out.as_deref()),
        Command::Explore { seed, max_nodes, dump } => commands::explore(&seed, max_nodes, dump.as_deref()),
        Command::Rank2 { b, c, list, count } => commands::rank2(b, c, list, count),
        Command::Ysystem { r, s } => commands::ysystem(r, s),
        Command::Pentagram { n, invariants, steps, rng_seed } => commands::pentagram(n, invariants, steps, rng_seed),
        Command::Poisson { seed } => commands::poisson(&seed),
        Command::Quantum { seed, at } => commands::quantum(&seed, &at),
        Command::Markov { bound } => commands::markov(bound),
        Command::Gr2 { n } => commands::gr2(n),
        Command::Verify { only, quick, rng_seed, jobs } => commands::verify(&only, quick, rng_seed, jobs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                for line in &report.text {
                    println!("{line}");
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
