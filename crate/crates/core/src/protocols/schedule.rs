use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::protocols::geometry::{grid_prime, line_members};
use crate::radio::TransmissionSchedule;
use crate::{Label, Step};

/// How a schedule was generated. Generated schedules serialize as this.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScheduleDescriptor {
    RoundRobin {
        n: usize,
    },
    ObliviousKShot {
        n: usize,
        k: usize,
    },
    /// Oblivious k-Shot interleave with a caller-chosen Round-Robin block
    /// length instead of `⌈p/(k−2)⌉`.
    Multiplexed {
        n: usize,
        k: usize,
        block: usize,
    },
    Explicit,
}

impl fmt::Display for ScheduleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleDescriptor::RoundRobin { n } => write!(f, "round_robin n={n}"),
            ScheduleDescriptor::ObliviousKShot { n, k } => write!(f, "oblivious_kshot n={n} k={k}"),
            ScheduleDescriptor::Multiplexed { n, k, block } => {
                write!(f, "multiplexed n={n} k={k} K={block}")
            }
            ScheduleDescriptor::Explicit => f.write_str("explicit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Layout {
    RoundRobin {
        p: usize,
    },
    Multiplexed {
        p: usize,
        block: usize,
        /// Members of every line, indexed `a·p + b`.
        lines: Arc<Vec<Vec<Label>>>,
    },
    Explicit {
        sets: Arc<Vec<Vec<Label>>>,
    },
}

/// Which procedure a step of a generated schedule belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Line-Transmit step using `L_{a,b}`.
    Line {
        direction: usize,
        offset: usize,
    },
    /// Round-Robin step number `index` (0-based, counted across blocks),
    /// granting label `(index mod p²) + 1`.
    RoundRobin {
        index: usize,
    },
    Explicit,
}

/// An eventually periodic sequence of transmission sets over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    descriptor: ScheduleDescriptor,
    layout: Layout,
    period: Step,
    round_robin_fallback: bool,
}

impl Schedule {
    /// Nodes `1, 2, ..., p²` transmit alone in turn; unassigned labels give
    /// empty steps.
    pub fn round_robin(n: usize) -> Self {
        let p = grid_prime(n);
        Self {
            n,
            descriptor: ScheduleDescriptor::RoundRobin { n },
            layout: Layout::RoundRobin { p },
            period: p * p,
            round_robin_fallback: false,
        }
    }

    /// Oblivious k-Shot: one Line-Transmit step followed by `K = ⌈p/(k−2)⌉`
    /// Round-Robin steps, repeated. For `k < 3` the formula is undefined and
    /// plain Round-Robin is used instead (flagged by
    /// [`Schedule::is_round_robin_fallback`]).
    pub fn oblivious_kshot(n: usize, k: usize) -> Self {
        if k < 3 {
            let mut s = Self::round_robin(n);
            s.descriptor = ScheduleDescriptor::ObliviousKShot { n, k };
            s.round_robin_fallback = true;
            return s;
        }
        let p = grid_prime(n);
        let mut s = Self::multiplexed(n, k, p.div_ceil(k - 2));
        s.descriptor = ScheduleDescriptor::ObliviousKShot { n, k };
        s
    }

    /// The Oblivious k-Shot interleave with an arbitrary block length `K ≥ 1`.
    pub fn multiplexed(n: usize, k: usize, block: usize) -> Self {
        let block = block.max(1);
        let p = grid_prime(n);
        let lines = (0..=p)
            .flat_map(|a| (0..p).map(move |b| (a, b)))
            .map(|(a, b)| line_members(a, b, p, n).expect("valid parameters").members)
            .collect();
        let line_cycle = p * (p + 1);
        let rr_blocks = (p * p) / gcd(p * p, block);
        let blocks = lcm(line_cycle, rr_blocks);
        Self {
            n,
            descriptor: ScheduleDescriptor::Multiplexed { n, k, block },
            layout: Layout::Multiplexed {
                p,
                block,
                lines: Arc::new(lines),
            },
            period: blocks * (block + 1),
            round_robin_fallback: false,
        }
    }

    /// A schedule given by one period of transmission sets.
    pub fn explicit(n: usize, sets: Vec<Vec<Label>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidSchedule(
                "explicit schedule needs at least one step".into(),
            ));
        }
        let mut clean = Vec::with_capacity(sets.len());
        for mut set in sets {
            set.sort_unstable();
            set.dedup();
            if let Some(&v) = set.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::InvalidLabel { label: v, max: n });
            }
            clean.push(set);
        }
        let period = clean.len();
        Ok(Self {
            n,
            descriptor: ScheduleDescriptor::Explicit,
            layout: Layout::Explicit {
                sets: Arc::new(clean),
            },
            period,
            round_robin_fallback: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn descriptor(&self) -> &ScheduleDescriptor {
        &self.descriptor
    }

    /// `set(t + period) = set(t)` for every `t ≥ 1`.
    pub fn period(&self) -> Step {
        self.period
    }

    pub fn is_round_robin_fallback(&self) -> bool {
        self.round_robin_fallback
    }

    pub fn grid_prime(&self) -> Option<usize> {
        match &self.layout {
            Layout::RoundRobin { p } | Layout::Multiplexed { p, .. } => Some(*p),
            Layout::Explicit { .. } => None,
        }
    }

    /// Round-Robin steps after each Line-Transmit step (`K`).
    pub fn block(&self) -> Option<usize> {
        match &self.layout {
            Layout::Multiplexed { block, .. } => Some(*block),
            _ => None,
        }
    }

    /// Global steps in one stage: `p` line steps with their Round-Robin
    /// blocks, `p·(K+1)`.
    pub fn stage_len(&self) -> Option<Step> {
        match &self.layout {
            Layout::Multiplexed { p, block, .. } => Some(p * (block + 1)),
            _ => None,
        }
    }

    /// Global steps needed for one full Round-Robin pass over `p²` labels.
    pub fn round_robin_pass_len(&self) -> Option<Step> {
        match &self.layout {
            Layout::RoundRobin { p } => Some(p * p),
            Layout::Multiplexed { p, block, .. } => Some((p * p * (block + 1)).div_ceil(*block)),
            Layout::Explicit { .. } => None,
        }
    }

    pub fn slot(&self, t: Step) -> Slot {
        debug_assert!(t >= 1);
        match &self.layout {
            Layout::RoundRobin { .. } => Slot::RoundRobin { index: t - 1 },
            Layout::Multiplexed { p, block, .. } => {
                let b = (t - 1) / (block + 1);
                let pos = (t - 1) % (block + 1);
                if pos == 0 {
                    let line = b % (p * (p + 1));
                    Slot::Line {
                        direction: line / p,
                        offset: line % p,
                    }
                } else {
                    Slot::RoundRobin {
                        index: b * block + pos - 1,
                    }
                }
            }
            Layout::Explicit { .. } => Slot::Explicit,
        }
    }

    /// Members of `T_t`, ascending.
    pub fn set(&self, t: Step) -> Vec<Label> {
        let mut out = Vec::new();
        self.members(t, &mut out);
        out
    }

    /// The first period of transmission sets.
    pub fn materialize(&self) -> Vec<Vec<Label>> {
        (1..=self.period).map(|t| self.set(t)).collect()
    }
}

impl TransmissionSchedule for Schedule {
    fn members(&self, t: Step, out: &mut Vec<Label>) {
        debug_assert!(t >= 1, "steps start at 1");
        match &self.layout {
            Layout::RoundRobin { p } => {
                let v = (t - 1) % (p * p) + 1;
                if v <= self.n {
                    out.push(v);
                }
            }
            Layout::Multiplexed { p, lines, .. } => match self.slot(t) {
                Slot::Line { direction, offset } => {
                    out.extend_from_slice(&lines[direction * p + offset]);
                }
                Slot::RoundRobin { index } => {
                    let v = index % (p * p) + 1;
                    if v <= self.n {
                        out.push(v);
                    }
                }
                Slot::Explicit => unreachable!(),
            },
            Layout::Explicit { sets } => {
                out.extend_from_slice(&sets[(t - 1) % sets.len()]);
            }
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
