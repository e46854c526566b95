//! Built-in adaptive policies.
//!
//! The adaptive engine and both adaptive adversaries take any [`Policy`]; the
//! ones here are the in-process set used by the harness and the tests.

use crate::error::{Error, Result};
use crate::protocols::Schedule;
use crate::radio::{Action, History, Incoming, Policy};
use crate::{Label, Step};

/// An oblivious schedule run through the adaptive interface: an informed
/// node transmits at its first `k` appearances strictly after its wake step.
#[derive(Debug, Clone)]
pub struct ObliviousPolicy {
    schedule: Schedule,
    k: usize,
}

impl ObliviousPolicy {
    pub fn new(schedule: Schedule, k: usize) -> Self {
        Self { schedule, k }
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }
}

impl Policy for ObliviousPolicy {
    fn name(&self) -> String {
        format!("oblivious[{}]", self.schedule.descriptor())
    }

    fn decide(&self, v: Label, t: Step, history: &History) -> Action {
        let scheduled = history.informed_at().is_some_and(|w| w < t)
            && history.transmissions() < self.k
            && self.schedule.set(t).binary_search(&v).is_ok();
        if scheduled {
            Action::Transmit
        } else {
            Action::Receive
        }
    }
}

/// Node `v` transmits once, at the first step `t` after its wake step with
/// `t ≡ v (mod n)`. Collision-free on every graph, so a correct 1-shot policy.
#[derive(Debug, Clone, Copy)]
pub struct RoundRobinEcho {
    n: usize,
}

impl RoundRobinEcho {
    pub fn new(n: usize) -> Self {
        Self { n: n.max(1) }
    }
}

impl Policy for RoundRobinEcho {
    fn name(&self) -> String {
        format!("rr-echo[n={}]", self.n)
    }

    fn decide(&self, v: Label, t: Step, history: &History) -> Action {
        match history.informed_at() {
            Some(w) if w < t && history.transmissions() == 0 && (t - 1) % self.n + 1 == v => {
                Action::Transmit
            }
            _ => Action::Receive,
        }
    }
}

/// An informed node transmits whenever it heard nothing in the previous
/// step, up to `k` times. Ignores its id, so two nodes sharing a view
/// always collide: not a correct broadcasting policy.
#[derive(Debug, Clone, Copy)]
pub struct FirstSilence {
    k: usize,
}

impl FirstSilence {
    pub fn new(k: usize) -> Self {
        Self { k }
    }
}

impl Policy for FirstSilence {
    fn name(&self) -> String {
        "first-silence".into()
    }

    fn decide(&self, _: Label, t: Step, history: &History) -> Action {
        let informed = history.informed_at().is_some_and(|w| w < t);
        let quiet = !matches!(history.last_incoming(), Some(Incoming::Received(_)));
        if informed && quiet && history.transmissions() < self.k {
            Action::Transmit
        } else {
            Action::Receive
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Never;

impl Policy for Never {
    fn name(&self) -> String {
        "never".into()
    }

    fn decide(&self, _: Label, _: Step, _: &History) -> Action {
        Action::Receive
    }
}

/// View-independent policy: label `v` transmits at round `t` iff bit `t`
/// of its codeword is set. Codewords are the length-`h` binary strings with
/// at most `k` ones, in colex order of their one-positions, where `h` is the
/// smallest length giving at least `n` of them. Its transmission trees have
/// the minimum possible height; it is not a broadcasting protocol.
#[derive(Debug, Clone)]
pub struct CodewordPolicy {
    k: usize,
    length: usize,
    codewords: Vec<Vec<bool>>,
}

impl CodewordPolicy {
    pub fn new(n: usize, k: usize) -> Self {
        let length = counting_height(n, k);
        let mut codewords: Vec<Vec<bool>> = Vec::with_capacity(n);
        'weights: for ones in 0..=k.min(length) {
            for combo in combinations(length, ones) {
                if codewords.len() == n {
                    break 'weights;
                }
                let mut word = vec![false; length];
                for i in combo {
                    word[i] = true;
                }
                codewords.push(word);
            }
        }
        Self {
            k,
            length,
            codewords,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

impl Policy for CodewordPolicy {
    fn name(&self) -> String {
        format!("codeword[k={} h={}]", self.k, self.length)
    }

    fn decide(&self, v: Label, t: Step, _: &History) -> Action {
        let bit = self
            .codewords
            .get(v.wrapping_sub(1))
            .and_then(|w| w.get(t.wrapping_sub(1)))
            .copied()
            .unwrap_or(false);
        if bit {
            Action::Transmit
        } else {
            Action::Receive
        }
    }
}

/// Smallest `h` with `Σ_{i=0}^{k} C(h, i) ≥ a`.
pub fn counting_height(a: usize, k: usize) -> usize {
    (0..)
        .find(|&h| {
            let mut total = 0u128;
            let mut c = 1u128;
            for i in 0..=k.min(h) {
                total += c;
                c = c * (h - i) as u128 / (i + 1) as u128;
            }
            total >= a as u128
        })
        .expect("counts grow without bound")
}

/// `ones`-subsets of `0..len`, ordered by their largest element, then the
/// next largest, and so on.
fn combinations(len: usize, ones: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, ones: usize, out: &mut Vec<Vec<usize>>) {
        if ones == 0 {
            out.push(Vec::new());
            return;
        }
        for top in ones - 1..len {
            let mut smaller = Vec::new();
            rec(top, ones - 1, &mut smaller);
            for mut c in smaller {
                c.push(top);
                out.push(c);
            }
        }
    }
    let mut out = Vec::new();
    rec(len, ones, &mut out);
    out
}

/// Names accepted by [`builtin_policy`].
pub const POLICY_NAMES: &[&str] = &[
    "rr-echo",
    "oblivious-rr",
    "oblivious-kshot",
    "first-silence",
    "never",
    "codeword",
];

/// Looks a built-in policy up by name, parameterized for `n` nodes and
/// budget `k`.
pub fn builtin_policy(name: &str, n: usize, k: usize) -> Result<Box<dyn Policy>> {
    Ok(match name {
        "rr-echo" => Box::new(RoundRobinEcho::new(n)),
        "oblivious-rr" => Box::new(ObliviousPolicy::new(Schedule::round_robin(n), k)),
        "oblivious-kshot" => Box::new(ObliviousPolicy::new(Schedule::oblivious_kshot(n, k), k)),
        "first-silence" => Box::new(FirstSilence::new(k)),
        "never" => Box::new(Never),
        "codeword" => Box::new(CodewordPolicy::new(n, k)),
        other => {
            return Err(Error::Policy(format!(
                "unknown policy `{other}`; expected one of {}",
                POLICY_NAMES.join(", ")
            )))
        }
    })
}

/// The built-in policies that broadcast correctly on every `n`-node graph
/// within budget `k`. For `k < 3` the k-shot schedule is Round-Robin, so it
/// is listed once.
pub fn correct_policies(n: usize, k: usize) -> Vec<Box<dyn Policy>> {
    let mut out: Vec<Box<dyn Policy>> = vec![
        Box::new(RoundRobinEcho::new(n)),
        Box::new(ObliviousPolicy::new(Schedule::round_robin(n), k)),
    ];
    if k >= 3 {
        out.push(Box::new(ObliviousPolicy::new(
            Schedule::oblivious_kshot(n, k),
            k,
        )));
    }
    out
}
