//! The synchronous collision radio model.
//!
//! One step: every transmitter sends to all its out-neighbors at once; a
//! listening node hears a message iff exactly one in-neighbor transmitted.
//! Nodes cannot tell a collision from silence, and a transmitter hears nothing.

mod adaptive;
mod model;
mod oblivious;
mod progress;
mod resolve;
mod trace;

pub use adaptive::{
    decide_checked, run_adaptive, run_adaptive_with, source_message, AdaptiveSim, AdaptiveStep,
    Policy,
};
pub use model::{Action, History, Incoming, Message, OwnAction, Payload, Reception, ViewEvent};
pub use oblivious::{run_oblivious, run_oblivious_with, RunOptions, TransmissionSchedule};
pub use progress::{
    active_set, long_active_flags, progress_curve, short_active_violations, MonitorEvent,
    ProgressCurve,
};
pub use resolve::resolve_step;
pub use trace::{
    parse_trace_shots, verify_shot_budget, verify_shot_counts, BudgetReport, SimTrace, StepRecord,
};
