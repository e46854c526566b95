use crate::error::Result;
use crate::radio::{decide_checked, Action, AdaptiveSim, History, Incoming, OwnAction, Policy};
use crate::topology::{LayeredSpec, Network};
use crate::{Label, Step};

/// What a node fed only by `feeders` hears in rounds `1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncomingViewSeq {
    events: Vec<Incoming>,
}

impl IncomingViewSeq {
    pub fn from_events(events: Vec<Incoming>) -> Self {
        Self { events }
    }

    /// Number of rounds covered.
    pub fn rounds(&self) -> Step {
        self.events.len()
    }

    /// `H_t`, or `Nothing` past the simulated rounds.
    pub fn at(&self, t: Step) -> &Incoming {
        const NOTHING: &Incoming = &Incoming::Nothing;
        self.events.get(t.wrapping_sub(1)).unwrap_or(NOTHING)
    }

    pub fn events(&self) -> &[Incoming] {
        &self.events
    }

    /// First round with a delivery.
    pub fn first_delivery(&self) -> Option<Step> {
        self.events
            .iter()
            .position(|e| matches!(e, Incoming::Received(_)))
            .map(|i| i + 1)
    }
}

/// Simulates `participants` on `network` for `rounds` rounds. Round `t`
/// yields `Received(w, H_{t−1}(w))` iff `w` is the only one of `feeders`
/// that transmits, and `Nothing` otherwise.
pub fn incoming_views<P: Policy + ?Sized>(
    network: &Network,
    participants: &[Label],
    feeders: &[Label],
    policy: &P,
    k: usize,
    rounds: Step,
) -> Result<IncomingViewSeq> {
    let mut sim = AdaptiveSim::restricted(network, policy, k, participants.to_vec());
    let mut events = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let step = sim.step()?;
        let mut from_feeders = step.sent.iter().filter(|m| feeders.contains(&m.sender));
        let event = match (from_feeders.next(), from_feeders.next()) {
            (Some(m), None) => Incoming::Received(m.clone()),
            _ => Incoming::Nothing,
        };
        events.push(event);
    }
    Ok(IncomingViewSeq { events })
}

/// The incoming views of the layer after `prefix`: the prefix layers are
/// simulated on their own edges and the deepest one feeds the candidates.
pub fn incoming_view_sequence<P: Policy + ?Sized>(
    prefix: &[Vec<Label>],
    n: usize,
    policy: &P,
    k: usize,
    rounds: Step,
) -> Result<IncomingViewSeq> {
    let source = prefix
        .first()
        .and_then(|l| l.first())
        .copied()
        .ok_or_else(|| crate::Error::InvalidLayering("empty prefix".into()))?;
    let edges = prefix.windows(2).flat_map(|pair| {
        let (from, to) = (&pair[0], &pair[1]);
        from.iter()
            .flat_map(move |&u| to.iter().map(move |&v| (u, v)))
    });
    let network = Network::new(n, source, edges)?;
    let participants: Vec<Label> = prefix.iter().flatten().copied().collect();
    let feeders = prefix.last().expect("prefix is nonempty");
    incoming_views(&network, &participants, feeders, policy, k, rounds)
}

/// Same as [`incoming_view_sequence`] for the first layers of a full spec.
pub fn layered_prefix_views<P: Policy + ?Sized>(
    spec: &LayeredSpec,
    layers: usize,
    policy: &P,
    k: usize,
    rounds: Step,
) -> Result<IncomingViewSeq> {
    incoming_view_sequence(&spec.layers()[..layers], spec.n(), policy, k, rounds)
}

/// Outcome of asking a candidate what it does in round `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateAction {
    pub action: Action,
    /// The policy asked to transmit but the budget was spent.
    pub budget_exhausted: bool,
}

/// A candidate's private view: the shared incoming view, except that
/// rounds where it transmitted read `Nothing` (a transmitter cannot hear).
pub fn candidate_history(own: &[OwnAction], views: &IncomingViewSeq) -> History {
    let mut h = History::empty();
    for (i, &a) in own.iter().enumerate() {
        let incoming = match a {
            OwnAction::Transmitted => Incoming::Nothing,
            OwnAction::Silent => views.at(i + 1).clone(),
        };
        h.record(a, incoming);
    }
    h
}

/// The action of candidate `v` in round `t`, replaying its own choices in
/// rounds `1..t` under the shared views. Budget handling matches the engine.
pub fn candidate_action<P: Policy + ?Sized>(
    v: Label,
    t: Step,
    views: &IncomingViewSeq,
    policy: &P,
    k: usize,
) -> Result<CandidateAction> {
    let mut h = History::empty();
    for r in 1..=t {
        let wants = decide_checked(policy, v, r, &h)? == Action::Transmit;
        let allowed = wants && h.transmissions() < k;
        if r == t {
            return Ok(CandidateAction {
                action: if allowed {
                    Action::Transmit
                } else {
                    Action::Receive
                },
                budget_exhausted: wants && !allowed,
            });
        }
        if allowed {
            h.record(OwnAction::Transmitted, Incoming::Nothing);
        } else {
            h.record(OwnAction::Silent, views.at(r).clone());
        }
    }
    unreachable!("rounds start at 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{FirstSilence, RoundRobinEcho};
    use crate::radio::Payload;

    #[test]
    fn source_alone_first_round() {
        let views = incoming_view_sequence(&[vec![1]], 5, &RoundRobinEcho::new(5), 1, 6).unwrap();
        match views.at(1) {
            Incoming::Received(m) => {
                assert_eq!(m.sender, 1);
                assert!(m.carries_source());
                assert!(matches!(&m.payload, Payload::View(h) if h.is_empty()));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(views.first_delivery(), Some(1));
        assert!(views.events()[1..].iter().all(|e| *e == Incoming::Nothing));
    }

    #[test]
    fn twin_transmitters_read_as_nothing() {
        // both of {2,3} hear the source at 1 and echo at 2 together
        let prefix = vec![vec![1], vec![2, 3]];
        let views = incoming_view_sequence(&prefix, 5, &FirstSilence::new(1), 1, 5).unwrap();
        assert!(views.events().iter().all(|e| *e == Incoming::Nothing));
    }

    #[test]
    fn views_ignore_unassigned_ids() {
        let p = RoundRobinEcho::new(8);
        let a = incoming_view_sequence(&[vec![1], vec![2, 5]], 8, &p, 1, 40).unwrap();
        let b = incoming_view_sequence(&[vec![1], vec![2, 5]], 8, &p, 1, 40).unwrap();
        assert_eq!(a, b);
        // layer {2,5}: node 2 alone at 2, node 5 alone at 5
        assert_eq!(a.first_delivery(), Some(2));
        assert!(matches!(a.at(5), Incoming::Received(m) if m.sender == 5));
    }

    #[test]
    fn candidate_actions_and_budget() {
        let views = incoming_view_sequence(&[vec![1]], 6, &RoundRobinEcho::new(6), 1, 20).unwrap();
        let p = RoundRobinEcho::new(6);
        assert_eq!(
            candidate_action(4, 1, &views, &p, 1).unwrap().action,
            Action::Receive
        );
        assert_eq!(
            candidate_action(4, 4, &views, &p, 1).unwrap().action,
            Action::Transmit
        );
        assert_eq!(
            candidate_action(4, 10, &views, &p, 1).unwrap().action,
            Action::Receive
        );

        struct Always;
        impl Policy for Always {
            fn name(&self) -> String {
                "always".into()
            }
            fn decide(&self, _: Label, _: Step, _: &History) -> Action {
                Action::Transmit
            }
        }
        let first = candidate_action(3, 1, &views, &Always, 1).unwrap();
        assert_eq!(first.action, Action::Transmit);
        let second = candidate_action(3, 2, &views, &Always, 1).unwrap();
        assert_eq!(second.action, Action::Receive);
        assert!(second.budget_exhausted);
    }
}
