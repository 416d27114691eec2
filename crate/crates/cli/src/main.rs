//! `borderlab`: exact interim-feasibility, revenue, Khintchine, Chow-polytope
//! and reduction computations from the command line.
//!
//! Every command prints one JSON report to stdout. Exit status is 0 on
//! success (including infeasible verdicts), 1 when the input is rejected or a
//! self-check fails, and 2 on usage errors.

mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{error_report, run_report, Inputs};

#[derive(Parser)]
#[command(
    name = "borderlab",
    version,
    about = "Exact computations on Bayesian mechanisms and Chow parameters"
)]
struct Cli {
    /// Cap on enumerated objects (profiles, subsets, hypercube points).
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Cap on variables × constraints of a single LP.
    #[arg(long, global = true)]
    lp_cap: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "BORDERLAB_THREADS", default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FeasibleMethod {
    Lp,
    Border,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RevenueMethod {
    Lp,
    Myerson,
}

#[derive(Args)]
pub struct EnvArg {
    /// Environment JSON file, or `-` for stdin.
    #[arg(long)]
    env: String,
}

#[derive(Args)]
pub struct WeightsArg {
    /// Rational list such as `[1, 1/2]`; `@file` or `-` to read it.
    #[arg(long, allow_hyphen_values = true)]
    weights: String,
}

#[derive(Args)]
pub struct GraphArgs {
    /// Graph JSON file, or `-` for stdin.
    #[arg(long)]
    graph: String,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an interim allocation rule is feasible.
    Feasible {
        #[command(flatten)]
        env: EnvArg,
        /// Interim rule `[[...], ...]` or reduced form `{"y": ..., "q": ...}`.
        #[arg(long)]
        rule: String,
        #[arg(long, value_enum, default_value = "lp")]
        method: FeasibleMethod,
    },
    /// Optimal expected revenue over BIC and IIR mechanisms.
    Optrev {
        #[command(flatten)]
        env: EnvArg,
        #[arg(long, value_enum, default_value = "lp")]
        method: RevenueMethod,
    },
    /// Optimal expected welfare.
    Optwel {
        #[command(flatten)]
        env: EnvArg,
    },
    /// Khintchine constant K(a) = E|x·a|.
    Khintchine {
        #[command(flatten)]
        weights: WeightsArg,
        /// Also report the Khintchine inequality bounds.
        #[arg(long)]
        bounds: bool,
    },
    /// Optimal public-project revenue for two-point stakes.
    PpRev {
        #[command(flatten)]
        weights: WeightsArg,
    },
    /// Audit the halfspace public-project mechanism.
    PpAudit {
        #[command(flatten)]
        weights: WeightsArg,
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<String>,
    },
    /// Chow parameters and the Chow polytope.
    #[command(subcommand)]
    Chow(ChowCommand),
    /// Counting-reduction gadgets.
    #[command(subcommand)]
    Reduce(ReduceCommand),
}

#[derive(Subcommand)]
pub enum ChowCommand {
    /// Chow vector of a bounded function given as 2^n values.
    Compute {
        #[arg(long, allow_hyphen_values = true)]
        function: String,
    },
    /// Maximize a·c over the Chow polytope.
    Opt {
        #[command(flatten)]
        weights: WeightsArg,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        offset: String,
    },
    /// Decide membership in the Chow polytope.
    Member {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Test whether a Chow vector is a vertex.
    Vertex {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Translate (Pr[E], Pr[E|X_1], ...) to a Chow vector and test it.
    FromConditionals {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Majority's Chow sum and its extremality.
    Majority {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
pub enum ReduceCommand {
    /// Count balanced partitions through Khintchine constants.
    Partition {
        #[arg(long)]
        w: String,
    },
    /// Recover directed s–t connection probability from the matching gadget.
    Stconn {
        #[command(flatten)]
        graph: GraphArgs,
        /// Blue multiplicity; defaults to the smallest admissible value.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check the component-count identity on an undirected graph.
    Matroid {
        #[command(flatten)]
        graph: GraphArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Feasible { .. } => "feasible",
            Command::Optrev { .. } => "optrev",
            Command::Optwel { .. } => "optwel",
            Command::Khintchine { .. } => "khintchine",
            Command::PpRev { .. } => "pp-rev",
            Command::PpAudit { .. } => "pp-audit",
            Command::Chow(c) => match c {
                ChowCommand::Compute { .. } => "chow compute",
                ChowCommand::Opt { .. } => "chow opt",
                ChowCommand::Member { .. } => "chow member",
                ChowCommand::Vertex { .. } => "chow vertex",
                ChowCommand::FromConditionals { .. } => "chow from-conditionals",
                ChowCommand::Majority { .. } => "chow majority",
            },
            Command::Reduce(r) => match r {
                ReduceCommand::Partition { .. } => "reduce partition",
                ReduceCommand::Stconn { .. } => "reduce stconn",
                ReduceCommand::Matroid { .. } => "reduce matroid",
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.cap {
        borderlab::limits::set_enumeration_cap(cap);
    }
    if let Some(cap) = cli.lp_cap {
        borderlab::limits::set_lp_cap(cap);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("borderlab: thread pool: {e}");
    }

    let name = cli.command.name();
    let mut inputs = Inputs::default();
    let start = Instant::now();
    match commands::run(cli.command, &mut inputs) {
        Ok(results) => {
            let failed = results.identity_failed;
            let elapsed = start.elapsed().as_millis() as u64;
            println!("{:#}", run_report(name, inputs.digest(), results, elapsed));
            if failed {
                eprintln!("borderlab: a self-check failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            println!("{:#}", error_report(name, &e));
            eprintln!("borderlab: {e}");
            ExitCode::from(1)
        }
    }
}
