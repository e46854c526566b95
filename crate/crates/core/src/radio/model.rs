use std::sync::Arc;

use crate::{Label, Step};

/// What a node decides to do in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Receive,
    Transmit,
}

/// What a node actually did in one step, as recorded in its own view.
/// A transmit request refused by the shot budget is recorded as `Silent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OwnAction {
    Silent,
    Transmitted,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Payload {
    /// The source message `m` itself (oblivious runs).
    Source(Arc<[u8]>),
    /// The sender's full view up to the previous step (adaptive runs).
    View(Arc<History>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message {
    pub sender: Label,
    pub payload: Payload,
}

impl Message {
    /// Whether the message lets the receiver learn the source message.
    pub fn carries_source(&self) -> bool {
        match &self.payload {
            Payload::Source(_) => true,
            Payload::View(h) => h.holds_message(),
        }
    }
}

/// The incoming half of a view event. Collisions and silence are the same
/// value: nodes cannot detect collisions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Incoming {
    Nothing,
    Received(Message),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ViewEvent {
    pub step: Step,
    pub own: OwnAction,
    pub incoming: Incoming,
}

/// A node's view `H_t(v)`: its initial input and one event per elapsed step.
///
/// The step at which the node first learned the source message and its
/// transmission count are derived while events are appended, so policies can
/// read them without walking nested views.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    initial: Option<Arc<[u8]>>,
    events: Vec<ViewEvent>,
    informed_at: Option<Step>,
    transmissions: usize,
}

impl History {
    /// `H_0(v) = (∅, ⊥)`.
    pub fn empty() -> Self {
        Self {
            initial: None,
            events: Vec::new(),
            informed_at: None,
            transmissions: 0,
        }
    }

    /// `H_0(s) = (∅, m)`.
    pub fn with_message(m: Arc<[u8]>) -> Self {
        Self {
            initial: Some(m),
            events: Vec::new(),
            informed_at: Some(0),
            transmissions: 0,
        }
    }

    /// Appends the event of the next step.
    pub fn record(&mut self, own: OwnAction, incoming: Incoming) {
        let step = self.events.len() + 1;
        if own == OwnAction::Transmitted {
            self.transmissions += 1;
        }
        if self.informed_at.is_none() {
            if let Incoming::Received(msg) = &incoming {
                if msg.carries_source() {
                    self.informed_at = Some(step);
                }
            }
        }
        self.events.push(ViewEvent {
            step,
            own,
            incoming,
        });
    }

    pub fn initial(&self) -> Option<&Arc<[u8]>> {
        self.initial.as_ref()
    }

    pub fn events(&self) -> &[ViewEvent] {
        &self.events
    }

    /// Number of elapsed steps `t` in `H_t`.
    pub fn len(&self) -> Step {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn holds_message(&self) -> bool {
        self.informed_at.is_some()
    }

    pub fn informed_at(&self) -> Option<Step> {
        self.informed_at
    }

    pub fn transmissions(&self) -> usize {
        self.transmissions
    }

    pub fn last_incoming(&self) -> Option<&Incoming> {
        self.events.last().map(|e| &e.incoming)
    }
}

/// Per-node result of resolving one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reception {
    /// Exactly one in-neighbor transmitted and the node was listening.
    Delivered(Label),
    /// Two or more in-neighbors transmitted while the node was listening.
    Collision,
    /// No in-neighbor transmitted, or the node was itself transmitting.
    Silence,
}

impl Reception {
    /// The incoming value the node observes; collisions look like silence.
    pub fn is_nothing(&self) -> bool {
        !matches!(self, Reception::Delivered(_))
    }
}
