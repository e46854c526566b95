use crate::error::{Error, Result};
use crate::radio::resolve::Resolver;
use crate::radio::{Reception, SimTrace, StepRecord};
use crate::topology::Network;
use crate::{Label, Step};

/// A sequence of transmission sets `T_1, T_2, ...`.
pub trait TransmissionSchedule: Send + Sync {
    /// Writes the members of `T_t` (ascending) into `out`, which arrives empty.
    fn members(&self, t: Step, out: &mut Vec<Label>);
}

/// Knobs shared by oblivious and adaptive runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub horizon: Step,
    /// Keep per-step records. Sweeps switch this off to save memory.
    pub record_steps: bool,
}

impl RunOptions {
    pub fn new(horizon: Step) -> Self {
        Self {
            horizon,
            record_steps: true,
        }
    }

    pub fn summary_only(horizon: Step) -> Self {
        Self {
            horizon,
            record_steps: false,
        }
    }
}

/// Runs an oblivious k-shot protocol: once informed at step `w`, a node
/// transmits at its first `k` appearances in the schedule strictly after `w`.
/// Only informed nodes transmit. Stops as soon as every node is informed.
pub fn run_oblivious<S>(
    network: &Network,
    schedule: &S,
    k: usize,
    horizon: Step,
) -> Result<SimTrace>
where
    S: TransmissionSchedule + ?Sized,
{
    run_oblivious_with(network, schedule, k, RunOptions::new(horizon))
}

pub fn run_oblivious_with<S>(
    network: &Network,
    schedule: &S,
    k: usize,
    opts: RunOptions,
) -> Result<SimTrace>
where
    S: TransmissionSchedule + ?Sized,
{
    let n = network.n();
    let mut wake: Vec<Option<Step>> = vec![None; n];
    wake[network.source() - 1] = Some(0);
    let mut informed = 1;
    let mut appearances = vec![0usize; n];
    let mut shots = vec![0usize; n];
    let mut records = Vec::new();
    let mut resolver = Resolver::new(n);
    let mut set = Vec::new();
    let mut tx = Vec::new();
    let mut completed_at = (informed == n).then_some(0);
    let mut steps_run = 0;

    if completed_at.is_none() {
        for t in 1..=opts.horizon {
            steps_run = t;
            set.clear();
            tx.clear();
            schedule.members(t, &mut set);
            for &v in &set {
                if !network.contains(v) {
                    return Err(Error::InvalidNode(v));
                }
                match wake[v - 1] {
                    Some(w) if w < t => {
                        appearances[v - 1] += 1;
                        if appearances[v - 1] <= k {
                            shots[v - 1] += 1;
                            tx.push(v);
                        }
                    }
                    _ => {}
                }
            }
            resolver.resolve(network, &tx)?;
            let mut record = opts.record_steps.then(|| StepRecord {
                step: t,
                transmitters: tx.clone(),
                ..StepRecord::default()
            });
            for &w in resolver.touched() {
                match resolver.outcome(w) {
                    Reception::Delivered(u) => {
                        if wake[w - 1].is_none() {
                            wake[w - 1] = Some(t);
                            informed += 1;
                        }
                        if let Some(r) = record.as_mut() {
                            r.delivered.push((w, u));
                        }
                    }
                    Reception::Collision => {
                        if let Some(r) = record.as_mut() {
                            r.collisions.push(w);
                        }
                    }
                    Reception::Silence => {}
                }
            }
            if let Some(r) = record {
                records.push(r);
            }
            if informed == n {
                completed_at = Some(t);
                break;
            }
        }
    }

    Ok(SimTrace {
        n,
        k,
        horizon: opts.horizon,
        records,
        wake,
        shots_used: shots,
        completed_at,
        steps_run,
    })
}

/// Explicit schedule backed by a vector, repeated with its length as period.
/// Handy for hand-built cases.
impl TransmissionSchedule for Vec<Vec<Label>> {
    fn members(&self, t: Step, out: &mut Vec<Label>) {
        if self.is_empty() {
            return;
        }
        out.extend_from_slice(&self[(t - 1) % self.len()]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_chain;

    #[test]
    fn single_node_completes_immediately() {
        let g = build_chain(&[1]).unwrap();
        let t = run_oblivious(&g, &vec![vec![1]], 1, 10).unwrap();
        assert_eq!(t.completed_at, Some(0));
        assert_eq!(t.total_transmissions(), 0);
    }

    #[test]
    fn two_chain_round_robin() {
        let g = build_chain(&[1, 2]).unwrap();
        let rr = vec![vec![1], vec![2]];
        let t = run_oblivious(&g, &rr, 1, 10).unwrap();
        assert_eq!(t.wake, vec![Some(0), Some(1)]);
        assert_eq!(t.completed_at, Some(1));
    }

    #[test]
    fn budget_is_first_k_appearances_after_wake() {
        // 1 -> 2 -> 3, node 1 scheduled every step but 2 only at steps 1, 3, 5.
        let g = build_chain(&[1, 2, 3]).unwrap();
        let sched = vec![vec![1, 2], vec![1]];
        let t = run_oblivious(&g, &sched, 2, 20).unwrap();
        // node 2 wakes at 1, so its appearance at step 1 does not count.
        assert_eq!(t.wake, vec![Some(0), Some(1), Some(3)]);
        assert_eq!(t.shots_of(1), 2);
        assert_eq!(t.shots_of(2), 1);
    }

    #[test]
    fn horizon_exceeded_is_not_an_error() {
        let g = build_chain(&[1, 2, 3]).unwrap();
        let t = run_oblivious(&g, &vec![vec![2]], 1, 5).unwrap();
        assert_eq!(t.completed_at, None);
        assert_eq!(t.steps_run, 5);
        assert_eq!(t.informed_count(), 1);
    }

    #[test]
    fn collisions_block_and_recorded() {
        let g = Network::new(4, 1, [(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        let sched = vec![vec![1], vec![2, 3], vec![2], vec![3]];
        let t = run_oblivious(&g, &sched, 1, 40).unwrap();
        assert_eq!(t.records[1].collisions, vec![4]);
        // both 2 and 3 used their single shot at step 2; 4 is never informed.
        assert_eq!(t.completed_at, None);
        assert!(t.replay_check(&g).is_ok());
    }
}
