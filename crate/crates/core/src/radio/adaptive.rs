use std::sync::Arc;

use crate::error::{Error, Result};
use crate::radio::resolve::Resolver;
use crate::radio::{
    Action, History, Incoming, Message, OwnAction, Payload, Reception, RunOptions, SimTrace,
    StepRecord,
};
use crate::topology::Network;
use crate::{Label, Step};

/// An adaptive protocol `π(v, t, H_{t−1}(v)) ∈ {receive, transmit}`.
///
/// Implementations must be pure functions of their arguments; the engine
/// evaluates every decision twice and rejects disagreement.
pub trait Policy: Send + Sync {
    fn name(&self) -> String;
    fn decide(&self, v: Label, t: Step, history: &History) -> Action;
}

impl<P: Policy + ?Sized> Policy for &P {
    fn name(&self) -> String {
        (**self).name()
    }

    fn decide(&self, v: Label, t: Step, history: &History) -> Action {
        (**self).decide(v, t, history)
    }
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn decide(&self, v: Label, t: Step, history: &History) -> Action {
        (**self).decide(v, t, history)
    }
}

/// Evaluates `π` twice and fails if the two answers differ.
pub fn decide_checked<P: Policy + ?Sized>(
    policy: &P,
    v: Label,
    t: Step,
    history: &History,
) -> Result<Action> {
    let first = policy.decide(v, t, history);
    let second = policy.decide(v, t, history);
    if first != second {
        return Err(Error::Policy(format!(
            "{} is nondeterministic for node {v} at step {t}",
            policy.name()
        )));
    }
    Ok(first)
}

/// The source message used by every adaptive run.
pub fn source_message() -> Arc<[u8]> {
    Arc::from(&b"m"[..])
}

/// What happened in one adaptive step.
#[derive(Debug, Clone)]
pub struct AdaptiveStep {
    pub step: Step,
    /// Messages `(v, H_{t−1}(v))` sent this step, ascending by sender.
    pub sent: Vec<Message>,
    pub suppressed: Vec<Label>,
    pub delivered: Vec<(Label, Label)>,
    pub collisions: Vec<Label>,
}

/// Step-by-step adaptive simulation over a network, optionally restricted
/// to a subset of participating nodes (the others neither act nor listen).
pub struct AdaptiveSim<'a, P: Policy + ?Sized> {
    network: &'a Network,
    policy: &'a P,
    k: usize,
    participants: Vec<Label>,
    histories: Vec<History>,
    shots: Vec<usize>,
    wake: Vec<Option<Step>>,
    informed: usize,
    t: Step,
    resolver: Resolver,
}

impl<'a, P: Policy + ?Sized> AdaptiveSim<'a, P> {
    pub fn new(network: &'a Network, policy: &'a P, k: usize) -> Self {
        Self::restricted(network, policy, k, network.labels().collect())
    }

    /// Only `participants` are simulated; everyone else stays silent and deaf.
    pub fn restricted(
        network: &'a Network,
        policy: &'a P,
        k: usize,
        mut participants: Vec<Label>,
    ) -> Self {
        participants.sort_unstable();
        participants.dedup();
        let n = network.n();
        let mut histories = vec![History::empty(); n];
        histories[network.source() - 1] = History::with_message(source_message());
        let mut wake = vec![None; n];
        wake[network.source() - 1] = Some(0);
        Self {
            network,
            policy,
            k,
            participants,
            histories,
            shots: vec![0; n],
            wake,
            informed: 1,
            t: 0,
            resolver: Resolver::new(n),
        }
    }

    pub fn history(&self, v: Label) -> &History {
        &self.histories[v - 1]
    }

    pub fn elapsed(&self) -> Step {
        self.t
    }

    pub fn informed(&self) -> usize {
        self.informed
    }

    pub fn wake(&self) -> &[Option<Step>] {
        &self.wake
    }

    pub fn shots(&self) -> &[usize] {
        &self.shots
    }

    /// Executes step `t + 1`.
    pub fn step(&mut self) -> Result<AdaptiveStep> {
        let t = self.t + 1;
        let mut sent = Vec::new();
        let mut suppressed = Vec::new();
        let mut tx = Vec::new();
        for &v in &self.participants {
            let h = &self.histories[v - 1];
            if decide_checked(self.policy, v, t, h)? == Action::Transmit {
                if self.shots[v - 1] < self.k {
                    tx.push(v);
                    sent.push(Message {
                        sender: v,
                        payload: Payload::View(Arc::new(h.clone())),
                    });
                } else {
                    suppressed.push(v);
                }
            }
        }
        self.resolver.resolve(self.network, &tx)?;
        let mut delivered = Vec::new();
        let mut collisions = Vec::new();
        for &w in self.resolver.touched() {
            match self.resolver.outcome(w) {
                Reception::Delivered(u) => delivered.push((w, u)),
                Reception::Collision => collisions.push(w),
                Reception::Silence => {}
            }
        }
        for &v in &tx {
            self.shots[v - 1] += 1;
        }
        for &v in &self.participants {
            let own = if self.resolver.is_transmitting(v) {
                OwnAction::Transmitted
            } else {
                OwnAction::Silent
            };
            let incoming = match self.resolver.outcome(v) {
                Reception::Delivered(u) => {
                    let idx = tx.binary_search(&u).expect("sender transmitted");
                    Incoming::Received(sent[idx].clone())
                }
                _ => Incoming::Nothing,
            };
            let h = &mut self.histories[v - 1];
            h.record(own, incoming);
            if self.wake[v - 1].is_none() && h.holds_message() {
                self.wake[v - 1] = Some(t);
                self.informed += 1;
            }
        }
        self.t = t;
        Ok(AdaptiveStep {
            step: t,
            sent,
            suppressed,
            delivered,
            collisions,
        })
    }
}

/// Runs an adaptive k-shot protocol until every node holds the message or
/// the horizon passes. Transmit requests beyond the budget are suppressed.
pub fn run_adaptive<P: Policy + ?Sized>(
    network: &Network,
    policy: &P,
    k: usize,
    horizon: Step,
) -> Result<SimTrace> {
    run_adaptive_with(network, policy, k, RunOptions::new(horizon))
}

pub fn run_adaptive_with<P: Policy + ?Sized>(
    network: &Network,
    policy: &P,
    k: usize,
    opts: RunOptions,
) -> Result<SimTrace> {
    let n = network.n();
    let mut sim = AdaptiveSim::new(network, policy, k);
    let mut records = Vec::new();
    let mut completed_at = (n == 1).then_some(0);
    while completed_at.is_none() && sim.elapsed() < opts.horizon {
        let s = sim.step()?;
        if opts.record_steps {
            records.push(StepRecord {
                step: s.step,
                transmitters: s.sent.iter().map(|m| m.sender).collect(),
                delivered: s.delivered,
                collisions: s.collisions,
                suppressed: s.suppressed,
            });
        }
        if sim.informed() == n {
            completed_at = Some(s.step);
        }
    }
    Ok(SimTrace {
        n,
        k,
        horizon: opts.horizon,
        records,
        wake: sim.wake.clone(),
        shots_used: sim.shots.clone(),
        completed_at,
        steps_run: sim.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_chain;

    struct Never;
    impl Policy for Never {
        fn name(&self) -> String {
            "never".into()
        }
        fn decide(&self, _: Label, _: Step, _: &History) -> Action {
            Action::Receive
        }
    }

    /// Source transmits at step 1; others echo once right after first delivery.
    struct Echo;
    impl Policy for Echo {
        fn name(&self) -> String {
            "echo".into()
        }
        fn decide(&self, _: Label, t: Step, h: &History) -> Action {
            match h.informed_at() {
                Some(w) if t == w + 1 && h.transmissions() == 0 => Action::Transmit,
                _ => Action::Receive,
            }
        }
    }

    struct Always;
    impl Policy for Always {
        fn name(&self) -> String {
            "always".into()
        }
        fn decide(&self, _: Label, _: Step, _: &History) -> Action {
            Action::Transmit
        }
    }

    struct Flaky(std::sync::atomic::AtomicUsize);
    impl Policy for Flaky {
        fn name(&self) -> String {
            "flaky".into()
        }
        fn decide(&self, _: Label, _: Step, _: &History) -> Action {
            let c = self.0.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
            if c.is_multiple_of(2) {
                Action::Transmit
            } else {
                Action::Receive
            }
        }
    }

    #[test]
    fn never_completes_only_singleton() {
        let g = build_chain(&[1]).unwrap();
        assert_eq!(
            run_adaptive(&g, &Never, 1, 10).unwrap().completed_at,
            Some(0)
        );
        let g = build_chain(&[1, 2]).unwrap();
        assert_eq!(run_adaptive(&g, &Never, 1, 10).unwrap().completed_at, None);
    }

    #[test]
    fn echo_chain_of_three() {
        let g = build_chain(&[1, 2, 3]).unwrap();
        let t = run_adaptive(&g, &Echo, 1, 10).unwrap();
        assert_eq!(t.completed_at, Some(2));
        assert_eq!(t.wake, vec![Some(0), Some(1), Some(2)]);
        assert!(t.replay_check(&g).is_ok());
    }

    #[test]
    fn budget_suppression_recorded_as_silent() {
        let g = build_chain(&[1, 2]).unwrap();
        let mut sim = AdaptiveSim::new(&g, &Always, 1);
        let first = sim.step().unwrap();
        assert_eq!(first.sent.len(), 2);
        let second = sim.step().unwrap();
        assert!(second.sent.is_empty());
        assert_eq!(second.suppressed, vec![1, 2]);
        let h = sim.history(1);
        assert_eq!(h.events()[1].own, OwnAction::Silent);
        assert_eq!(h.transmissions(), 1);
        // both transmitted at step 1, so node 2 heard nothing (half-duplex).
        assert_eq!(sim.history(2).events()[0].incoming, Incoming::Nothing);
        assert_eq!(sim.informed(), 1);
    }

    #[test]
    fn nondeterminism_detected() {
        let g = build_chain(&[1, 2]).unwrap();
        let flaky = Flaky(Default::default());
        assert!(matches!(
            run_adaptive(&g, &flaky, 1, 10),
            Err(Error::Policy(_))
        ));
    }

    #[test]
    fn delivered_message_is_sender_view() {
        let g = build_chain(&[1, 2, 3]).unwrap();
        let mut sim = AdaptiveSim::new(&g, &Echo, 1);
        sim.step().unwrap();
        let s2 = sim.step().unwrap();
        assert_eq!(s2.sent.len(), 1);
        let Payload::View(view) = &s2.sent[0].payload else {
            panic!("adaptive payloads are views")
        };
        assert_eq!(**view, {
            let mut h = History::empty();
            h.record(
                OwnAction::Silent,
                sim.history(2).events()[0].incoming.clone(),
            );
            h
        });
        assert_eq!(sim.history(3).informed_at(), Some(2));
    }
}
