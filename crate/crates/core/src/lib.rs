//! A deterministic laboratory for k-shot broadcasting in synchronous radio
//! networks of unknown topology.
//!
//! The crate is split along the life of an experiment:
//!
//! - [`topology`]: directed networks, chains, the layered family, random corpora
//!   and the line-based graph file format.
//! - [`radio`]: the collision radio model. Oblivious and adaptive runs, traces,
//!   histories, the progress metric and runtime monitors.
//! - [`protocols`]: finite-geometry lines over a prime grid, Round-Robin, the
//!   multiplexed Oblivious k-Shot schedule, validity checks and the built-in
//!   adaptive policies.
//! - [`oblivious_adversary`]: schedule statistics and the chain synthesizer that
//!   forces any oblivious k-shot schedule to spend `Ω(n²/k)` steps.
//! - [`adaptive_adversary`]: incoming views, transmission trees, the layered
//!   construction and the direct 1-shot chain refinement.
//!
//! Labels are `1..=n`. Step 0 is the moment the source holds the message and
//! transmissions happen at steps `1, 2, ...`.

pub mod adaptive_adversary;
pub mod error;
pub mod oblivious_adversary;
pub mod protocols;
pub mod radio;
pub mod topology;

pub use error::{Error, Result};

/// A node label in `1..=n`.
pub type Label = usize;

/// A global step index. Step 0 precedes every transmission.
pub type Step = usize;

/// Horizon used when the caller does not pick one: `8·n²` steps.
pub fn default_horizon(n: usize) -> Step {
    8 * n.max(1) * n.max(1)
}
