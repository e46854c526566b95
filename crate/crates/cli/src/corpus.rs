use kshot_core::oblivious_adversary::{build_adversarial_chain, AppearanceIndex};
use kshot_core::protocols::Schedule;
use kshot_core::topology::{build_chain, random_chain_order, random_reachable_digraph, Network};
use kshot_core::Step;

/// Graph families a sweep draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphKind {
    /// Synthesized against the schedule under test, one per source label.
    Adversarial,
    Chain,
    Random,
}

impl GraphKind {
    pub fn prefix(self) -> &'static str {
        match self {
            GraphKind::Adversarial => "adv",
            GraphKind::Chain => "chain",
            GraphKind::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub index: usize,
}

impl GraphSpec {
    pub fn id(&self) -> String {
        format!("{}-{:04}", self.kind.prefix(), self.index)
    }
}

/// How many graphs of each family to generate per `(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSize {
    pub random: usize,
    pub chains: usize,
    pub adversarial: usize,
}

impl CorpusSize {
    pub fn total(&self) -> usize {
        self.random + self.chains + self.adversarial
    }

    pub fn specs(&self) -> Vec<GraphSpec> {
        let kinds = [
            (GraphKind::Adversarial, self.adversarial),
            (GraphKind::Chain, self.chains),
            (GraphKind::Random, self.random),
        ];
        kinds
            .into_iter()
            .flat_map(|(kind, count)| (0..count).map(move |index| GraphSpec { kind, index }))
            .collect()
    }
}

/// Seed of the `index`-th graph drawn from `base`.
pub fn graph_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

/// Builds one corpus graph. Adversarial chains start at label
/// `index mod n + 1` and are synthesized against `schedule` with an
/// appearance index of `horizon` steps.
pub fn build_graph(
    spec: GraphSpec,
    n: usize,
    k: usize,
    schedule: &Schedule,
    seed: u64,
    horizon: Step,
) -> kshot_core::Result<Network> {
    match spec.kind {
        GraphKind::Random => Ok(random_reachable_digraph(n, graph_seed(seed, spec.index))),
        GraphKind::Chain => build_chain(&random_chain_order(n, graph_seed(seed, spec.index))),
        GraphKind::Adversarial => {
            let index = AppearanceIndex::build(schedule, n, horizon);
            let adv = build_adversarial_chain(&index, k, spec.index % n + 1)?;
            adv.certificate.network()
        }
    }
}
