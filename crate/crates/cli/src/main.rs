//! `permatch`: count derangements, permutations and perfect matchings on
//! graphs, build the standard families, run the injection, and check the
//! counting inequalities.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 usage or
//! parameter error, 3 unreadable or malformed file.

mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use permatch::Error;

#[derive(Parser)]
#[command(name = "permatch", version, about = "Exact (d/p) counting on small graphs")]
struct Cli {
    /// Worker threads for parallel scans and permanents. Never changes results.
    #[arg(long, global = true, env = "PERMATCH_THREADS")]
    threads: Option<usize>,

    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count derangements, permutations, perfect matchings or their ratio.
    Count {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        what: What,
    },
    /// Write one of the standard graphs to a file.
    Construct {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Output path; a `.json` extension selects the JSON format.
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply the derangement injection at a vertex, or invert it.
    Inject {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        vertex: usize,
        /// Images of 0, 1, … separated by commas.
        #[arg(long)]
        perm: String,
        #[arg(long)]
        invert: bool,
    },
    /// Check one inequality or identity on a graph.
    Verify {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long, required_unless_present = "k")]
        input: Option<PathBuf>,
        /// Layer size, for the blowup check.
        #[arg(long, requires = "l")]
        k: Option<usize>,
        /// Layer count, for the blowup check.
        #[arg(long, requires = "k")]
        l: Option<usize>,
    },
    /// Scan a family of graphs and record every ratio.
    Scan {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record file; `.jsonl` selects JSON lines, anything else CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo estimate of the mean ratio on random graphs.
    Mc {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        n: usize,
        /// Edge probability, as a decimal or a fraction such as `1/2`.
        #[arg(long, value_parser = commands::parse_probability)]
        q: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact expected derangement and permutation counts with `m` arcs.
    Expect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum What {
    Derangements,
    Permutations,
    Matchings,
    Ratio,
    FixedPoints,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Cycle,
    Complete,
    CompleteBipartite,
    Blowup,
    Thm2h,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Theorem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "6")]
    Six,
    Injection,
    Blowup,
    Subpermanent,
    Corollary,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Digraphs,
    Bipartite,
    SampledUndirected,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Model {
    Graph,
    Digraph,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Counterexample(_) => 1,
        Error::Io(_) | Error::Syntax { .. } | Error::Json(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("the global pool is configured once");
    }
    let result = match cli.command {
        Command::Count { input, what } => commands::count(&input, what),
        Command::Construct { kind, n, k, l, out } => commands::construct(kind, n, k, l, &out),
        Command::Inject { input, vertex, perm, invert } => commands::inject(&input, vertex, &perm, invert),
        Command::Verify { theorem, input, k, l } => commands::verify(theorem, input.as_deref(), k, l),
        Command::Scan { family, n, samples, seed, out } => commands::scan(family, n, samples, seed, &out),
        Command::Mc { model, n, q, samples, seed } => commands::mc(model, n, q, samples, seed),
        Command::Expect { n, m } => commands::expect(n, m),
    };
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.violated { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
