use std::fmt::Write as _;

use crate::adaptive_adversary::{build_transmission_tree, deepest_pair, incoming_view_sequence};
use crate::error::{Error, Result};
use crate::oblivious_adversary::Replay;
use crate::radio::{run_adaptive_with, Policy, RunOptions};
use crate::topology::{build_layered, LayeredSpec, Network};
use crate::{Label, Step};

/// The pair placed in one two-node layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerChoice {
    /// 1-based layer number (the source layer is 1).
    pub layer: usize,
    pub pair: (Label, Label),
    /// Round before which the pair never transmits alone: the height of the
    /// tree it was drawn from.
    pub round: Step,
    /// `round` minus the largest earlier `round`, floored at zero. These sum
    /// to the claimed delay.
    pub increment: Step,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredCertificate {
    pub n: usize,
    pub k: usize,
    pub policy: String,
    pub spec: LayeredSpec,
    pub choices: Vec<LayerChoice>,
    pub claimed_delay: Step,
}

impl LayeredCertificate {
    pub fn network(&self) -> Result<Network> {
        build_layered(&self.spec)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# layered certificate n={} k={} policy={}\n",
            self.n, self.k, self.policy
        );
        for c in &self.choices {
            let _ = writeln!(
                out,
                "layer i={} pair={},{} height={} round={}",
                c.layer, c.pair.0, c.pair.1, c.increment, c.round
            );
        }
        let last = self.spec.layers().last().expect("layers are nonempty");
        let labels: Vec<String> = last.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "final layer={}", labels.join(","));
        let _ = writeln!(out, "claimed_delay={}", self.claimed_delay);
        out
    }

    pub fn replay<P: Policy + ?Sized>(&self, policy: &P, horizon: Step) -> Result<Replay> {
        let net = self.network()?;
        let trace = run_adaptive_with(&net, policy, self.k, RunOptions::summary_only(horizon))?;
        Ok(Replay {
            claimed: self.claimed_delay,
            completed_at: trace.completed_at,
        })
    }
}

/// `(n − 4)·n^{1/k} / 8`.
pub fn layered_delay_floor(n: usize, k: usize) -> f64 {
    (n as f64 - 4.0) * (n as f64).powf(1.0 / k.max(1) as f64) / 8.0
}

/// Assigns ids to the layered family one two-node layer at a time: each
/// layer takes the deepest pair of the transmission tree over the ids still
/// free, under the views the assigned prefix produces. The source is label 1
/// and the last layer takes what remains.
pub fn build_adversarial_layered<P: Policy + ?Sized>(
    n: usize,
    k: usize,
    policy: &P,
    depth_cap: usize,
) -> Result<LayeredCertificate> {
    if n < 3 {
        return Err(Error::InvalidLayering(format!("need n ≥ 3, got {n}")));
    }
    let layer_count = LayeredSpec::layer_count(n);
    let mut layers: Vec<Vec<Label>> = vec![vec![1]];
    let mut free: Vec<Label> = (2..=n).collect();
    let mut choices = Vec::new();
    let mut latest = 0;

    for layer in 2..layer_count {
        let views = incoming_view_sequence(&layers, n, policy, k, depth_cap)?;
        let tree = build_transmission_tree(&free, &views, policy, k, depth_cap)?;
        if let Some(f) = tree.findings.into_iter().next() {
            return Err(f.into_error());
        }
        let tree = crate::adaptive_adversary::TransmissionTree {
            findings: Vec::new(),
            ..tree
        };
        let (a, b, depth) = deepest_pair(&tree)?;
        let round = depth + 1;
        choices.push(LayerChoice {
            layer,
            pair: (a, b),
            round,
            increment: round.saturating_sub(latest),
        });
        latest = latest.max(round);
        free.retain(|&v| v != a && v != b);
        layers.push(vec![a, b]);
    }
    layers.push(free);

    let spec = LayeredSpec::new(layers)?;
    Ok(LayeredCertificate {
        n,
        k,
        policy: policy.name(),
        spec,
        choices,
        claimed_delay: latest.max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{FirstSilence, Never, RoundRobinEcho};

    #[test]
    fn rr_echo_layered_replays() {
        for (n, k) in [(6, 1), (9, 1), (10, 2)] {
            let p = RoundRobinEcho::new(n);
            let cert = build_adversarial_layered(n, k, &p, crate::default_horizon(n)).unwrap();
            assert_eq!(cert.spec.n(), n);
            let sum: usize = cert.choices.iter().map(|c| c.increment).sum();
            assert_eq!(sum.max(1), cert.claimed_delay);
            let r = cert.replay(&p, crate::default_horizon(n)).unwrap();
            assert!(r.passed(), "n={n} {r:?}");
            assert!(cert.claimed_delay as f64 >= layered_delay_floor(n, k));
        }
    }

    #[test]
    fn broken_policies_are_reported() {
        assert!(matches!(
            build_adversarial_layered(6, 1, &Never, 50),
            Err(Error::PolicyNeverSeparates { .. })
        ));
        // ignores ids, so the free ids never split
        assert!(matches!(
            build_adversarial_layered(6, 1, &FirstSilence::new(1), 50),
            Err(Error::PolicyBudgetDeadlock { .. }) | Err(Error::PolicyNeverSeparates { .. })
        ));
    }

    #[test]
    fn text_format() {
        let p = RoundRobinEcho::new(5);
        let cert = build_adversarial_layered(5, 1, &p, 200).unwrap();
        let text = cert.to_text();
        assert!(text.contains("layer i=2 pair="));
        assert!(text.ends_with(&format!("claimed_delay={}\n", cert.claimed_delay)));
    }
}
