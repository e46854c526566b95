use crate::protocols::Schedule;
use crate::radio::TransmissionSchedule;
use crate::{Label, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub n: usize,
    pub k: usize,
    pub horizon: Step,
    pub passed: bool,
    /// First `(node, wake step)` whose next `k` appearances never isolate it.
    pub counterexample: Option<(Label, Step)>,
}

/// Checks that the Oblivious k-Shot schedule for `(n, k)` lets every node
/// transmit alone at least once, whatever step in `0..horizon` it wakes at.
pub fn verify_validity(n: usize, k: usize, horizon: Step) -> ValidityReport {
    verify_schedule_validity(&Schedule::oblivious_kshot(n, k), k, horizon)
}

/// The same check for any schedule: for each node `v` and wake step `t` in
/// `0..horizon`, one of the first `k` appearances of `v` strictly after `t`
/// must be a step whose transmission set is exactly `{v}`.
pub fn verify_schedule_validity(schedule: &Schedule, k: usize, horizon: Step) -> ValidityReport {
    let n = schedule.n();
    let limit = horizon + k.max(1) * schedule.period();
    // appearances[v-1] = (step, alone?) in increasing step order.
    let mut appearances: Vec<Vec<(Step, bool)>> = vec![Vec::new(); n];
    let mut set = Vec::new();
    for t in 1..=limit {
        set.clear();
        schedule.members(t, &mut set);
        let alone = set.len() == 1;
        for &v in &set {
            appearances[v - 1].push((t, alone));
        }
    }

    let mut counterexample = None;
    'nodes: for v in 1..=n {
        let apps = &appearances[v - 1];
        if apps.is_empty() || k == 0 {
            counterexample = Some((v, 0));
            break;
        }
        let mut prefix = Vec::with_capacity(apps.len() + 1);
        prefix.push(0usize);
        for &(_, alone) in apps {
            prefix.push(prefix.last().unwrap() + usize::from(alone));
        }
        for j in 0..apps.len() {
            let earliest_wake = if j == 0 { 0 } else { apps[j - 1].0 };
            if earliest_wake >= horizon {
                break;
            }
            let end = (j + k).min(apps.len());
            if prefix[end] - prefix[j] == 0 {
                counterexample = Some((v, earliest_wake));
                break 'nodes;
            }
        }
    }

    ValidityReport {
        n,
        k,
        horizon,
        passed: counterexample.is_none(),
        counterexample,
    }
}
