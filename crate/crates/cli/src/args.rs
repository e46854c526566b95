use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::Protocol;

#[derive(Debug, Parser)]
#[command(
    name = "kshot",
    version,
    about = "k-shot broadcasting in radio networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a schedule or policy on a graph file.
    Simulate(SimulateArgs),
    /// Synthesize a slow graph for a protocol and replay it.
    Adversary(AdversaryArgs),
    /// Run a protocol over a graph corpus and write CSV.
    Sweep(SweepArgs),
    /// Check geometry, schedule validity or a trace's shot budget.
    Verify(VerifyArgs),
    /// Write a schedule file.
    Schedule(ScheduleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct HorizonArg {
    /// Step limit. Defaults to 8·n².
    #[arg(long, env = "KSHOT_HORIZON")]
    pub horizon: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Graph file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Protocol::Kshot, conflicts_with_all = ["schedule", "policy"])]
    pub protocol: Protocol,
    /// Schedule file to run instead of a generated schedule.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Built-in adaptive policy to run instead of a schedule.
    #[arg(long, conflicts_with = "schedule")]
    pub policy: Option<String>,
    #[command(flatten)]
    pub horizon: HorizonArg,
    /// Trace output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdversaryKind {
    /// Chain against an oblivious schedule.
    Oblivious,
    /// Layered graph against an adaptive policy.
    Adaptive,
    /// Chain refinement against an adaptive 1-shot policy.
    #[value(name = "appendix-1shot")]
    OneShotChain,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    #[arg(value_enum)]
    pub kind: AdversaryKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Schedule for the oblivious adversary.
    #[arg(long, value_enum, default_value_t = Protocol::Kshot)]
    pub protocol: Protocol,
    /// Schedule file for the oblivious adversary; sets n.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Built-in policy for the adaptive adversaries.
    #[arg(long, default_value = "rr-echo")]
    pub policy: String,
    /// Source label of the oblivious chain.
    #[arg(long, default_value_t = 1)]
    pub source: usize,
    #[command(flatten)]
    pub horizon: HorizonArg,
    /// Directory for `graph.txt` and `certificate.txt`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Protocol::Kshot)]
    pub protocol: Protocol,
    #[arg(long, default_value_t = 30)]
    pub random: usize,
    #[arg(long, default_value_t = 10)]
    pub chains: usize,
    #[arg(long, default_value_t = 10)]
    pub adversarial: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub horizon: HorizonArg,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-(n,k) summary CSV.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub target: VerifyTarget,
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Incidence properties of the lines over a prime p.
    Geometry {
        #[arg(long)]
        p: usize,
    },
    /// Every node transmits alone within k appearances of any wake step.
    Validity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        horizon: HorizonArg,
    },
    /// Shot counts of a trace file.
    Budgets {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Protocol::Kshot)]
    pub protocol: Protocol,
    /// Write one period of transmission sets as well as the descriptor.
    #[arg(long)]
    pub materialize: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
