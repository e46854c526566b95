use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::radio::resolve::Resolver;
use crate::topology::Network;
use crate::{Label, Step};

/// Everything that happened in one step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepRecord {
    pub step: Step,
    pub transmitters: Vec<Label>,
    /// `(receiver, sender)` pairs, ascending by receiver.
    pub delivered: Vec<(Label, Label)>,
    pub collisions: Vec<Label>,
    /// Adaptive runs only: transmit requests refused by the shot budget.
    pub suppressed: Vec<Label>,
}

/// Outcome of one simulated run.
///
/// Vectors indexed by node are stored at `v - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTrace {
    pub n: usize,
    pub k: usize,
    pub horizon: Step,
    /// Per-step records; empty when the run was made without recording.
    pub records: Vec<StepRecord>,
    /// Step at which each node first held the source message.
    pub wake: Vec<Option<Step>>,
    pub shots_used: Vec<usize>,
    pub completed_at: Option<Step>,
    /// Last step the engine executed.
    pub steps_run: Step,
}

impl SimTrace {
    pub fn wake_of(&self, v: Label) -> Option<Step> {
        self.wake[v - 1]
    }

    pub fn shots_of(&self, v: Label) -> usize {
        self.shots_used[v - 1]
    }

    pub fn max_shots(&self) -> usize {
        self.shots_used.iter().copied().max().unwrap_or(0)
    }

    pub fn informed_count(&self) -> usize {
        self.wake.iter().flatten().count()
    }

    pub fn total_transmissions(&self) -> usize {
        self.shots_used.iter().sum()
    }

    /// Canonical text form.
    ///
    /// ```text
    /// step <t> tx=<list> delivered=<v:u,...> collisions=<list>
    /// wake <v>=<t|none>
    /// shots <v>=<c>
    /// completed_at=<t|none>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(
                out,
                "step {} tx={} delivered={} collisions={}",
                r.step,
                join(&r.transmitters),
                r.delivered
                    .iter()
                    .map(|(v, u)| format!("{v}:{u}"))
                    .collect::<Vec<_>>()
                    .join(","),
                join(&r.collisions)
            );
            if !r.suppressed.is_empty() {
                let _ = write!(out, " suppressed={}", join(&r.suppressed));
            }
            out.push('\n');
        }
        for (i, w) in self.wake.iter().enumerate() {
            match w {
                Some(t) => {
                    let _ = writeln!(out, "wake {}={t}", i + 1);
                }
                None => {
                    let _ = writeln!(out, "wake {}=none", i + 1);
                }
            }
        }
        for (i, c) in self.shots_used.iter().enumerate() {
            let _ = writeln!(out, "shots {}={c}", i + 1);
        }
        match self.completed_at {
            Some(t) => {
                let _ = writeln!(out, "completed_at={t}");
            }
            None => out.push_str("completed_at=none\n"),
        }
        out
    }

    /// Replays every recorded step against the collision rule and checks the
    /// wake map: each wake step is a step where exactly one in-neighbor
    /// transmitted, transmitters never receive, and collisions are only
    /// reported for listening nodes with two or more transmitting in-neighbors.
    pub fn replay_check(&self, network: &Network) -> std::result::Result<(), String> {
        if self.records.is_empty() && self.steps_run > 0 {
            return Err("trace was recorded without step records".into());
        }
        let mut resolver = Resolver::new(network.n());
        let mut first_delivery: Vec<Option<Step>> = vec![None; network.n()];
        first_delivery[network.source() - 1] = Some(0);
        for r in &self.records {
            resolver
                .resolve(network, &r.transmitters)
                .map_err(|e| e.to_string())?;
            let mut delivered = Vec::new();
            let mut collisions = Vec::new();
            for &w in resolver.touched() {
                match resolver.outcome(w) {
                    crate::radio::Reception::Delivered(u) => delivered.push((w, u)),
                    crate::radio::Reception::Collision => collisions.push(w),
                    crate::radio::Reception::Silence => {}
                }
            }
            if delivered != r.delivered {
                return Err(format!("step {}: deliveries disagree with replay", r.step));
            }
            if collisions != r.collisions {
                return Err(format!("step {}: collisions disagree with replay", r.step));
            }
            for &u in &r.transmitters {
                if delivered.iter().any(|&(v, _)| v == u) {
                    return Err(format!("step {}: transmitter {u} received", r.step));
                }
            }
            for &(v, _) in &delivered {
                let slot = &mut first_delivery[v - 1];
                if slot.is_none() {
                    *slot = Some(r.step);
                }
            }
        }
        // Oblivious deliveries always carry the message; adaptive ones may
        // not, so a wake may come later than the first delivery but must
        // coincide with some delivery step.
        for v in network.labels() {
            match (self.wake[v - 1], first_delivery[v - 1]) {
                (None, _) => {}
                (Some(w), Some(d)) if w >= d => {
                    if w != 0
                        && !self
                            .records
                            .iter()
                            .any(|r| r.step == w && r.delivered.iter().any(|&(x, _)| x == v))
                    {
                        return Err(format!("node {v} woke at {w} without a delivery"));
                    }
                }
                (Some(w), _) => {
                    return Err(format!("node {v} woke at {w} before any delivery"));
                }
            }
        }
        Ok(())
    }
}

fn join(labels: &[Label]) -> String {
    labels
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Result of a shot-budget audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetReport {
    pub ok: bool,
    /// Smallest label that exceeded the budget, with its shot count.
    pub first_violation: Option<(Label, usize)>,
}

pub fn verify_shot_budget(trace: &SimTrace, k: usize) -> BudgetReport {
    verify_shot_counts(&trace.shots_used, k)
}

/// Budget check over bare per-node counts, e.g. read back from a trace file.
pub fn verify_shot_counts(shots: &[usize], k: usize) -> BudgetReport {
    let first_violation = shots
        .iter()
        .enumerate()
        .find(|(_, &c)| c > k)
        .map(|(i, &c)| (i + 1, c));
    BudgetReport {
        ok: first_violation.is_none(),
        first_violation,
    }
}

/// Reads the `shots <v>=<c>` footer lines of a trace file.
pub fn parse_trace_shots(text: &str) -> Result<Vec<usize>> {
    let mut shots: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix("shots ") else {
            continue;
        };
        let (v, c) = rest
            .split_once('=')
            .ok_or_else(|| Error::format(idx + 1, "expected shots <v>=<c>"))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::format(idx + 1, format!("bad label `{v}`")))?;
        let c: usize = c
            .trim()
            .parse()
            .map_err(|_| Error::format(idx + 1, format!("bad count `{c}`")))?;
        if v == 0 {
            return Err(Error::format(idx + 1, "label 0"));
        }
        shots.push((v, c));
    }
    let n = shots.iter().map(|&(v, _)| v).max().unwrap_or(0);
    let mut out = vec![0; n];
    for (v, c) in shots {
        out[v - 1] = c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forged(shots: Vec<usize>) -> SimTrace {
        let n = shots.len();
        SimTrace {
            n,
            k: 1,
            horizon: 10,
            records: Vec::new(),
            wake: vec![Some(0); n],
            shots_used: shots,
            completed_at: Some(0),
            steps_run: 0,
        }
    }

    #[test]
    fn budget_violations() {
        let t = forged(vec![1, 3, 2]);
        assert_eq!(
            verify_shot_budget(&t, 2),
            BudgetReport {
                ok: false,
                first_violation: Some((2, 3))
            }
        );
        assert!(verify_shot_budget(&t, 3).ok);
        let zero = forged(vec![0, 1]);
        assert_eq!(verify_shot_budget(&zero, 0).first_violation, Some((2, 1)));
        assert!(verify_shot_budget(&forged(vec![0, 0]), 0).ok);
    }

    #[test]
    fn shots_footer_round_trip() {
        let t = forged(vec![1, 0, 2]);
        assert_eq!(parse_trace_shots(&t.to_text()).unwrap(), vec![1, 0, 2]);
        assert!(parse_trace_shots("shots 0=1").is_err());
    }
}
