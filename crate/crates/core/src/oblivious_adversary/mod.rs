//! Worst-case chains for oblivious k-shot schedules.
//!
//! Everything here reads a schedule through an [`AppearanceIndex`] built up
//! to a fixed horizon. Bounds that a schedule fails to meet are reported as
//! findings: they show the schedule does not broadcast on every graph.

mod chain;
mod conflict;
mod stats;

pub use chain::{
    build_adversarial_chain, build_extension, chain_delay_formula, ChainAdversary,
    ChainCertificate, Extension, ObliviousFinding, Replay, Segment, SeqWithGaps,
};
pub use conflict::{
    conflict_graph, conflict_witness_network, max_delay_node, peel_conflicting, sink_starved,
    ConflictSetup, MaxDelay, PeelOutcome, ShotGraph,
};
pub use stats::AppearanceIndex;
