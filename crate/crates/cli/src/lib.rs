//! Command-line harness: simulation runs, adversarial certificates, sweeps
//! and property checks, all with deterministic text and CSV output.

pub mod args;
pub mod commands;
pub mod corpus;
pub mod record;
pub mod sweep;

use clap::ValueEnum;
use kshot_core::protocols::Schedule;

/// The oblivious schedules the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum)]
pub enum Protocol {
    /// Oblivious k-Shot: line steps multiplexed with Round-Robin.
    Kshot,
    /// Plain Round-Robin over the grid.
    Rr,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Kshot => "kshot",
            Protocol::Rr => "rr",
        }
    }

    pub fn schedule(self, n: usize, k: usize) -> Schedule {
        match self {
            Protocol::Kshot => Schedule::oblivious_kshot(n, k),
            Protocol::Rr => Schedule::round_robin(n),
        }
    }
}

/// Explicit horizon if given, else `8·n²`.
pub fn horizon_or_default(horizon: Option<usize>, n: usize) -> usize {
    horizon.unwrap_or_else(|| kshot_core::default_horizon(n))
}
