use crate::radio::SimTrace;
use crate::topology::Network;
use crate::{Label, Step};

/// Progress counters per step, derived from the wake map alone.
///
/// `progress(t) = (#informed − 1) + #done`, where a node is done once it and
/// all its out-neighbors are informed. The source is not counted as
/// receiving, so a completed broadcast scores exactly `2n − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressCurve {
    informed: Vec<usize>,
    done: Vec<usize>,
}

impl ProgressCurve {
    pub fn from_trace(trace: &SimTrace, network: &Network) -> Self {
        let last = trace.completed_at.unwrap_or(trace.steps_run);
        let n = network.n();

        let mut by_step: Vec<Vec<Label>> = vec![Vec::new(); last + 1];
        for v in network.labels() {
            if let Some(w) = trace.wake[v - 1] {
                if w <= last {
                    by_step[w].push(v);
                }
            }
        }

        let mut uninformed_out: Vec<usize> = network
            .labels()
            .map(|v| network.out_neighbors(v).len())
            .collect();
        let mut is_informed = vec![false; n];
        let mut informed = Vec::with_capacity(last + 1);
        let mut done = Vec::with_capacity(last + 1);
        let (mut informed_now, mut done_now) = (0, 0);
        for wakers in &by_step {
            for &v in wakers {
                is_informed[v - 1] = true;
                informed_now += 1;
                if uninformed_out[v - 1] == 0 {
                    done_now += 1;
                }
                for &u in network.in_neighbors(v) {
                    uninformed_out[u - 1] -= 1;
                    if uninformed_out[u - 1] == 0 && is_informed[u - 1] {
                        done_now += 1;
                    }
                }
            }
            informed.push(informed_now);
            done.push(done_now);
        }
        Self { informed, done }
    }

    /// Last step covered by the curve.
    pub fn last_step(&self) -> Step {
        self.informed.len() - 1
    }

    fn at(&self, t: Step) -> usize {
        t.min(self.last_step())
    }

    pub fn value(&self, t: Step) -> usize {
        let t = self.at(t);
        self.informed[t] + self.done[t] - 1
    }

    pub fn informed(&self, t: Step) -> usize {
        self.informed[self.at(t)]
    }

    /// Size of the active set: informed nodes with an uninformed out-neighbor.
    pub fn active(&self, t: Step) -> usize {
        let t = self.at(t);
        self.informed[t] - self.done[t]
    }

    pub fn values(&self) -> Vec<usize> {
        (0..=self.last_step()).map(|t| self.value(t)).collect()
    }

    pub fn peak_active(&self) -> usize {
        (0..=self.last_step())
            .map(|t| self.active(t))
            .max()
            .unwrap_or(0)
    }
}

pub fn progress_curve(trace: &SimTrace, network: &Network) -> ProgressCurve {
    ProgressCurve::from_trace(trace, network)
}

/// Informed nodes with at least one uninformed out-neighbor after step `t`.
pub fn active_set(trace: &SimTrace, network: &Network, t: Step) -> Vec<Label> {
    let informed = |v: Label| trace.wake[v - 1].is_some_and(|w| w <= t);
    network
        .labels()
        .filter(|&v| informed(v) && network.out_neighbors(v).iter().any(|&u| !informed(u)))
        .collect()
}

/// A window where the short-active-set progress rule did not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorEvent {
    pub stage_start: Step,
    pub active: usize,
    pub window_end: Step,
    pub gained: usize,
    pub required: usize,
}

/// Checks, at every stage boundary where `1 ≤ |F| ≤ k/2`, that the progress
/// over the next `2|F|` stages is at least `|F|`, unless the broadcast
/// completes inside that window.
pub fn short_active_violations(
    curve: &ProgressCurve,
    completed_at: Option<Step>,
    stage_len: Step,
    k: usize,
) -> Vec<MonitorEvent> {
    let mut out = Vec::new();
    let end = completed_at.unwrap_or(curve.last_step());
    let mut start = 0;
    while start < end {
        let f = curve.active(start);
        if f >= 1 && 2 * f <= k {
            let window_end = start + 2 * f * stage_len;
            let finished_inside = completed_at.is_some_and(|c| c <= window_end);
            let gained = curve.value(window_end) - curve.value(start);
            let observed_fully = window_end <= curve.last_step();
            if !finished_inside && observed_fully && gained < f {
                out.push(MonitorEvent {
                    stage_start: start,
                    active: f,
                    window_end,
                    gained,
                    required: f,
                });
            }
        }
        start += stage_len;
    }
    out
}

/// Flags stage boundaries where `|F| > k/2` and the progress over the next
/// `pass_len` steps falls short of `k/2`. Completion inside the window clears
/// the flag.
pub fn long_active_flags(
    curve: &ProgressCurve,
    completed_at: Option<Step>,
    stage_len: Step,
    pass_len: Step,
    k: usize,
) -> Vec<MonitorEvent> {
    let mut out = Vec::new();
    let end = completed_at.unwrap_or(curve.last_step());
    let required = k.div_ceil(2);
    let mut start = 0;
    while start < end {
        let f = curve.active(start);
        if 2 * f > k {
            let window_end = start + pass_len;
            let finished_inside = completed_at.is_some_and(|c| c <= window_end);
            let gained = curve.value(window_end) - curve.value(start);
            if !finished_inside && window_end <= curve.last_step() && gained < required {
                out.push(MonitorEvent {
                    stage_start: start,
                    active: f,
                    window_end,
                    gained,
                    required,
                });
            }
        }
        start += stage_len;
    }
    out
}
