use crate::error::{Error, Result};
use crate::radio::TransmissionSchedule;
use crate::{Label, Step};

/// Every appearance of every label in `T_1..=T_horizon`, per label in step
/// order. All schedule statistics are answered from this table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppearanceIndex {
    horizon: Step,
    steps: Vec<Vec<Step>>,
}

impl AppearanceIndex {
    pub fn build<S: TransmissionSchedule + ?Sized>(schedule: &S, n: usize, horizon: Step) -> Self {
        let mut steps = vec![Vec::new(); n];
        let mut set = Vec::new();
        for t in 1..=horizon {
            set.clear();
            schedule.members(t, &mut set);
            for &v in &set {
                if (1..=n).contains(&v) {
                    steps[v - 1].push(t);
                }
            }
        }
        Self { horizon, steps }
    }

    pub fn n(&self) -> usize {
        self.steps.len()
    }

    pub fn horizon(&self) -> Step {
        self.horizon
    }

    fn check(&self, v: Label) -> Result<()> {
        if v == 0 || v > self.n() {
            Err(Error::InvalidNode(v))
        } else {
            Ok(())
        }
    }

    /// Appearances of `v` in `T_1..=T_horizon`.
    pub fn appearances(&self, v: Label) -> Result<&[Step]> {
        self.check(v)?;
        Ok(&self.steps[v - 1])
    }

    /// Appearances of `v` strictly after `t`.
    pub fn after(&self, v: Label, t: Step) -> Result<&[Step]> {
        let all = self.appearances(v)?;
        Ok(&all[all.partition_point(|&s| s <= t)..])
    }

    /// `shots(v, T) = min(k, #appearances of v after T)`.
    pub fn shots_after(&self, v: Label, t: Step, k: usize) -> Result<usize> {
        Ok(self.after(v, t)?.len().min(k))
    }

    /// `t_i(v, T)`: the `i`-th appearance of `v` after `T` (1-based), for
    /// `i ≤ shots(v, T)`.
    pub fn t_at(&self, v: Label, i: usize, t: Step, k: usize) -> Result<Step> {
        let after = self.after(v, t)?;
        let available = after.len().min(k);
        if i == 0 || i > available {
            return Err(Error::NotEnoughShots {
                node: v,
                after: t,
                requested: i,
                available,
            });
        }
        Ok(after[i - 1])
    }

    /// `t_{≤i}(v, T)`: `t_i` when `i ≤ shots(v, T)`, else `t_{shots(v,T)}`.
    pub fn t_leq(&self, v: Label, i: usize, t: Step, k: usize) -> Result<Step> {
        let after = self.after(v, t)?;
        let shots = after.len().min(k);
        if shots == 0 {
            return Err(Error::ProtocolIncomplete {
                node: v,
                after: t,
                horizon: self.horizon,
            });
        }
        Ok(after[i.clamp(1, shots) - 1])
    }

    /// `t_1(S, T)`: the step of the last set in the earliest occurrence of
    /// `seq` as a subsequence of `T_{T+1}, T_{T+2}, ...`.
    pub fn first_occurrence(&self, seq: &[Label], t: Step) -> Result<Step> {
        if seq.is_empty() {
            return Err(Error::InvalidChain(
                "empty sequence has no occurrence".into(),
            ));
        }
        let mut at = t;
        for &v in seq {
            at = *self.after(v, at)?.first().ok_or(Error::NoOccurrence {
                after: t,
                horizon: self.horizon,
            })?;
        }
        Ok(at)
    }
}
