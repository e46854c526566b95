use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::oblivious_adversary::AppearanceIndex;
use crate::radio::{run_oblivious, TransmissionSchedule};
use crate::topology::{Chain, Network};
use crate::{Label, Step};

/// The node of `Q` that, informed at `T`, makes its last transmission
/// latest, with the bound `T + |Q| − 1` any correct schedule must meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxDelay {
    pub node: Label,
    /// `t_{≤k}(node, T)`.
    pub value: Step,
    pub bound: Step,
    pub bound_holds: bool,
}

/// Maximizer of `t_{≤k}(w, T)` over `w ∈ Q`, smallest label on ties.
pub fn max_delay_node(index: &AppearanceIndex, q: &[Label], t: Step, k: usize) -> Result<MaxDelay> {
    if q.is_empty() {
        return Err(Error::InvalidChain("empty candidate set".into()));
    }
    let mut best: Option<(Label, Step)> = None;
    for &w in q {
        let value = index.t_leq(w, k, t, k)?;
        best = match best {
            Some((b, bv)) if bv > value || (bv == value && b < w) => Some((b, bv)),
            _ => Some((w, value)),
        };
    }
    let (node, value) = best.expect("q is nonempty");
    let bound = t + q.len() - 1;
    Ok(MaxDelay {
        node,
        value,
        bound,
        bound_holds: value >= bound,
    })
}

/// Bipartite graph between nodes and the steps at which they transmit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShotGraph {
    pub nodes: Vec<Label>,
    pub steps: Vec<Step>,
    pub edges: Vec<(Label, Step)>,
}

/// The graph peeled to show that some node of `Q` transmits late:
/// `A = Q ∖ {v_t}` with `v_t` the largest label of `Q`, `B` the steps in
/// `(T, L]` at which a node of `A` informed at `T` would transmit, where
/// `L = max_{u∈A} t_{≤k}(u, T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictSetup {
    pub excluded: Label,
    pub last_step: Step,
    pub graph: ShotGraph,
}

pub fn conflict_graph(
    index: &AppearanceIndex,
    q: &[Label],
    t: Step,
    k: usize,
) -> Result<ConflictSetup> {
    let excluded = *q
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidChain("empty candidate set".into()))?;
    let mut nodes: Vec<Label> = q.iter().copied().filter(|&v| v != excluded).collect();
    nodes.sort_unstable();
    let mut last_step = t;
    for &u in &nodes {
        last_step = last_step.max(index.t_leq(u, k, t, k)?);
    }
    let mut edges = Vec::new();
    for &u in &nodes {
        let shots = index.shots_after(u, t, k)?;
        for &s in &index.after(u, t)?[..shots] {
            if s <= last_step {
                edges.push((u, s));
            }
        }
    }
    let mut steps: Vec<Step> = edges.iter().map(|&(_, s)| s).collect();
    steps.sort_unstable();
    steps.dedup();
    Ok(ConflictSetup {
        excluded,
        last_step,
        graph: ShotGraph {
            nodes,
            steps,
            edges,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeelOutcome {
    /// Every node was removed; `(step, node)` in removal order, one distinct
    /// step per node.
    Certified(Vec<(Step, Label)>),
    /// No step of degree one remains. The rest is a conflicting subgraph:
    /// each remaining node keeps all its steps and each remaining step is
    /// shared by at least two remaining nodes.
    Stuck {
        removed: Vec<(Step, Label)>,
        conflict: ShotGraph,
    },
}

impl PeelOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, PeelOutcome::Certified(_))
    }
}

/// Repeatedly removes the earliest step of degree one together with its
/// only node.
pub fn peel_conflicting(graph: &ShotGraph) -> PeelOutcome {
    let mut node_steps: BTreeMap<Label, Vec<Step>> =
        graph.nodes.iter().map(|&v| (v, Vec::new())).collect();
    let mut step_nodes: BTreeMap<Step, Vec<Label>> =
        graph.steps.iter().map(|&s| (s, Vec::new())).collect();
    for &(v, s) in &graph.edges {
        node_steps.entry(v).or_default().push(s);
        step_nodes.entry(s).or_default().push(v);
    }

    let mut removed = Vec::new();
    while !node_steps.is_empty() {
        let pick = step_nodes
            .iter()
            .find(|(_, vs)| vs.len() == 1)
            .map(|(&s, vs)| (s, vs[0]));
        let Some((s, v)) = pick else {
            break;
        };
        step_nodes.remove(&s);
        for other in node_steps.remove(&v).unwrap_or_default() {
            if let Some(vs) = step_nodes.get_mut(&other) {
                vs.retain(|&u| u != v);
            }
        }
        removed.push((s, v));
    }

    if node_steps.is_empty() {
        return PeelOutcome::Certified(removed);
    }
    let steps: Vec<Step> = step_nodes
        .iter()
        .filter(|(_, vs)| vs.len() >= 2)
        .map(|(&s, _)| s)
        .collect();
    let edges = node_steps
        .iter()
        .flat_map(|(&v, ss)| ss.iter().map(move |&s| (v, s)))
        .collect();
    PeelOutcome::Stuck {
        removed,
        conflict: ShotGraph {
            nodes: node_steps.into_keys().collect(),
            steps,
            edges,
        },
    }
}

/// The collision graph behind a stuck peel: the chain `prefix`, whose last
/// node feeds every node of `conflict`, all of which feed `sink`. Labels of
/// `1..=n` not yet placed hang off `sink` as a path.
pub fn conflict_witness_network(
    prefix: &Chain,
    conflict: &[Label],
    sink: Label,
    n: usize,
) -> Result<Network> {
    let mut edges: Vec<(Label, Label)> = prefix.labels().windows(2).map(|w| (w[0], w[1])).collect();
    for &u in conflict {
        edges.push((prefix.last(), u));
        edges.push((u, sink));
    }
    let mut placed = vec![false; n];
    for &v in prefix.labels().iter().chain(conflict).chain([&sink]) {
        if v == 0 || v > n {
            return Err(Error::InvalidNode(v));
        }
        placed[v - 1] = true;
    }
    let mut last = sink;
    for v in (1..=n).filter(|&v| !placed[v - 1]) {
        edges.push((last, v));
        last = v;
    }
    Network::new(n, prefix.first(), edges)
}

/// Whether `sink` stays uninformed for the whole horizon on `network`.
pub fn sink_starved<S: TransmissionSchedule + ?Sized>(
    network: &Network,
    schedule: &S,
    k: usize,
    sink: Label,
    horizon: Step,
) -> Result<bool> {
    let trace = run_oblivious(network, schedule, k, horizon)?;
    Ok(trace.wake_of(sink).is_none())
}
