use crate::adaptive_adversary::{incoming_view_sequence, IncomingViewSeq};
use crate::error::{Error, Result};
use crate::oblivious_adversary::{conflict_witness_network, ChainCertificate, Segment};
use crate::radio::{
    decide_checked, run_adaptive_with, Action, History, OwnAction, Policy, RunOptions,
};
use crate::topology::{Chain, Network};
use crate::{Label, Step};

/// One node appended to the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementStage {
    pub stage: usize,
    pub node: Label,
    /// Round at which `node` makes its single transmission.
    pub reached: Step,
    /// `T + (number of candidates)`, with `T` the previous `reached`.
    pub bound: Step,
}

impl RefinementStage {
    pub fn bound_holds(&self) -> bool {
        self.reached >= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub certificate: ChainCertificate,
    pub stages: Vec<RefinementStage>,
}

/// Two candidates fed by the same chain transmit in the same round. Both
/// attached to the end of `prefix` and feeding `sink`, they collide there on
/// their only shot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionWitness {
    pub prefix: Chain,
    pub first: Label,
    pub second: Label,
    pub sink: Label,
    pub step: Step,
    pub network: Network,
    /// Whether a replay confirmed that `sink` is never informed.
    pub starved: bool,
}

/// A candidate that never relays: it stays silent for the whole horizon or
/// spends its shot before the message reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StallWitness {
    pub prefix: Chain,
    pub node: Label,
    /// Its only transmission, if any.
    pub step: Option<Step>,
    pub network: Network,
    pub horizon: Step,
    /// Whether a replay confirmed that the broadcast does not finish.
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefinementOutcome {
    Certified(Refinement),
    Collision(CollisionWitness),
    Stall(StallWitness),
}

impl RefinementOutcome {
    /// The certified refinement, or the witness turned into an error.
    pub fn into_result(self) -> Result<Refinement> {
        match self {
            RefinementOutcome::Certified(r) => Ok(r),
            RefinementOutcome::Collision(w) => Err(Error::PolicyCollision {
                first: w.first,
                second: w.second,
                sink: w.sink,
                step: w.step,
            }),
            RefinementOutcome::Stall(w) => Err(Error::PolicyStalls {
                node: w.node,
                horizon: w.horizon,
            }),
        }
    }
}

/// `n(n − 1)/2 − 1`, the delay a correct 1-shot policy cannot beat on the
/// refined chain (for `n ≥ 3`).
pub fn one_shot_chain_bound(n: usize) -> Step {
    (n * n.saturating_sub(1) / 2).saturating_sub(1)
}

/// Round of `v`'s single transmission when it only ever hears `views`.
fn first_transmit<P: Policy + ?Sized>(
    v: Label,
    views: &IncomingViewSeq,
    policy: &P,
    horizon: Step,
) -> Result<Option<Step>> {
    let mut h = History::empty();
    for r in 1..=horizon {
        if decide_checked(policy, v, r, &h)? == Action::Transmit {
            return Ok(Some(r));
        }
        h.record(OwnAction::Silent, views.at(r).clone());
    }
    Ok(None)
}

fn views_after(
    chain: &[Label],
    n: usize,
    policy: &dyn Policy,
    horizon: Step,
) -> Result<IncomingViewSeq> {
    let prefix: Vec<Vec<Label>> = chain.iter().map(|&v| vec![v]).collect();
    incoming_view_sequence(&prefix, n, policy, 1, horizon)
}

/// Grows a chain from label 1 against a deterministic 1-shot policy. Each
/// stage keeps the candidate whose transmission comes last under the view
/// the chain's end produces; the last two labels close the chain. A policy
/// that makes two candidates transmit together, or lets one waste its shot,
/// yields a witness graph on which it fails.
pub fn build_1shot_chain_refinement<P: Policy>(
    n: usize,
    policy: &P,
    horizon: Step,
) -> Result<RefinementOutcome> {
    if n < 3 {
        return Err(Error::InvalidChain(format!("need n ≥ 3, got {n}")));
    }
    let mut chain: Vec<Label> = vec![1];
    let mut free: Vec<Label> = (2..=n).collect();

    let source_views = views_after(&chain, n, policy, horizon)?;
    let Some(mut t) = source_views.first_delivery() else {
        return stall(&chain, 1, None, &free, n, policy, horizon);
    };
    let mut segments = vec![Segment {
        index: 0,
        reached: t,
        labels: vec![1],
    }];
    let mut stages = Vec::new();

    loop {
        let views = views_after(&chain, n, policy, horizon)?;
        let mut timed: Vec<(Label, Option<Step>)> = Vec::with_capacity(free.len());
        for &w in &free {
            timed.push((w, first_transmit(w, &views, policy, horizon)?));
        }
        if let Some(&(w, f)) = timed.iter().find(|(_, f)| f.is_none_or(|f| f <= t)) {
            return stall(&chain, w, f, &free, n, policy, horizon);
        }
        let mut by_round: Vec<(Step, Label)> =
            timed.iter().map(|&(w, f)| (f.unwrap(), w)).collect();
        by_round.sort_unstable();

        if free.len() == 2 {
            // Either order informs the last label after `t`; put the later
            // transmitter first so the replay runs longer.
            let (early, late) = (by_round[0].1, by_round[1].1);
            let tail = vec![late, early];
            chain.extend(&tail);
            let certificate = ChainCertificate {
                n,
                k: 1,
                chain: Chain::new(chain)?,
                segments,
                tail,
                claimed_delay: t + 1,
            };
            return Ok(RefinementOutcome::Certified(Refinement {
                certificate,
                stages,
            }));
        }

        if let Some(pair) = by_round.windows(2).find(|p| p[0].0 == p[1].0) {
            let (step, first, second) = (pair[0].0, pair[0].1, pair[1].1);
            let sink = *free
                .iter()
                .find(|&&v| v != first && v != second)
                .expect("at least three candidates");
            let prefix = Chain::new(chain)?;
            let network = conflict_witness_network(&prefix, &[first, second], sink, n)?;
            let trace = run_adaptive_with(&network, policy, 1, RunOptions::summary_only(horizon))?;
            return Ok(RefinementOutcome::Collision(CollisionWitness {
                prefix,
                first,
                second,
                sink,
                step,
                network,
                starved: trace.wake_of(sink).is_none(),
            }));
        }

        let (reached, node) = *by_round.last().expect("candidates are nonempty");
        let stage = stages.len() + 1;
        stages.push(RefinementStage {
            stage,
            node,
            reached,
            bound: t + free.len(),
        });
        segments.push(Segment {
            index: stage,
            reached,
            labels: vec![node],
        });
        chain.push(node);
        free.retain(|&v| v != node);
        t = reached;
    }
}

fn stall(
    chain: &[Label],
    node: Label,
    step: Option<Step>,
    free: &[Label],
    n: usize,
    policy: &dyn Policy,
    horizon: Step,
) -> Result<RefinementOutcome> {
    let mut labels = chain.to_vec();
    if !labels.contains(&node) {
        labels.push(node);
    }
    labels.extend(free.iter().filter(|&&v| v != node));
    let full = Chain::new(labels)?;
    let network = crate::topology::build_chain_in(full.labels(), n)?;
    let trace = run_adaptive_with(&network, policy, 1, RunOptions::summary_only(horizon))?;
    Ok(RefinementOutcome::Stall(StallWitness {
        prefix: Chain::new(chain.to_vec())?,
        node,
        step,
        network,
        horizon,
        confirmed: trace.completed_at.is_none(),
    }))
}
