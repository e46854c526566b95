use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::oblivious_adversary::{max_delay_node, AppearanceIndex, MaxDelay};
use crate::radio::{
    run_adaptive_with, run_oblivious_with, Policy, RunOptions, TransmissionSchedule,
};
use crate::topology::{build_chain_in, Chain, Network};
use crate::{Label, Step};

/// A sequence whose entries may be the empty symbol `ε` (`None`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeqWithGaps {
    pub entries: Vec<Option<Label>>,
}

impl SeqWithGaps {
    pub fn effective(&self) -> Vec<Label> {
        self.entries.iter().flatten().copied().collect()
    }
}

impl std::fmt::Display for SeqWithGaps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| e.map_or_else(|| "ε".to_string(), |v| v.to_string()))
            .collect();
        write!(f, "⟨{}⟩", parts.join(" "))
    }
}

/// One extension step of the chain synthesizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    /// `w_1..w_k`, each the latest-transmitting node of what remains.
    pub witnesses: Vec<MaxDelay>,
    pub seq: SeqWithGaps,
    /// `M_1..M_k`.
    pub maxima: Vec<Step>,
    /// `t(R, T)`, from the schedule.
    pub reached: Step,
    /// `T + n − |S| − k`.
    pub bound: Step,
}

impl Extension {
    pub fn bound_holds(&self) -> bool {
        self.reached >= self.bound
    }
}

/// Builds the extension `R` of `prefix`, where `t` is the first occurrence
/// of `prefix`. Needs at least `k + 1` labels of `1..=n` outside the prefix.
pub fn build_extension(
    index: &AppearanceIndex,
    prefix: &Chain,
    t: Step,
    k: usize,
) -> Result<Extension> {
    let n = index.n();
    let mut q: Vec<Label> = (1..=n).filter(|v| !prefix.contains(*v)).collect();
    if k == 0 || q.len() < k + 1 {
        return Err(Error::InvalidChain(format!(
            "extension needs k+1 = {} free labels, {} remain",
            k + 1,
            q.len()
        )));
    }
    let bound = (t + q.len()).saturating_sub(k);

    let mut witnesses = Vec::with_capacity(k);
    for _ in 0..k {
        let m = max_delay_node(index, &q, t, k)?;
        q.retain(|&v| v != m.node);
        witnesses.push(m);
    }

    let mut pool: Vec<Label> = witnesses.iter().map(|m| m.node).collect();
    pool.sort_unstable();
    let mut entries = Vec::with_capacity(k);
    let mut maxima = Vec::with_capacity(k);
    let mut best_so_far: Option<Step> = None;
    for i in 1..=k {
        let mut arg: Option<(Label, Step)> = None;
        for &v in &pool {
            let value = index.t_leq(v, i, t, k)?;
            if arg.is_none_or(|(_, best)| value > best) {
                arg = Some((v, value));
            }
        }
        let Some((v, m_i)) = arg else {
            // every witness already used
            maxima.push(0);
            entries.push(None);
            continue;
        };
        maxima.push(m_i);
        if best_so_far.is_some_and(|b| m_i <= b) {
            entries.push(None);
        } else {
            entries.push(Some(v));
            pool.retain(|&u| u != v);
            best_so_far = Some(m_i);
        }
    }
    let seq = SeqWithGaps { entries };
    let reached = index.first_occurrence(&seq.effective(), t)?;
    Ok(Extension {
        witnesses,
        seq,
        maxima,
        reached,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub index: usize,
    /// Step at which the last node of the chain so far first transmits.
    pub reached: Step,
    pub labels: Vec<Label>,
}

/// A chain whose broadcast cannot finish before `claimed_delay`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCertificate {
    pub n: usize,
    pub k: usize,
    pub chain: Chain,
    /// Segment 0 is the source alone; `reached` strictly increases.
    pub segments: Vec<Segment>,
    /// Leftover labels appended one per hop.
    pub tail: Vec<Label>,
    pub claimed_delay: Step,
}

impl ChainCertificate {
    pub fn network(&self) -> Result<Network> {
        build_chain_in(self.chain.labels(), self.n)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# chain certificate n={} k={}\n", self.n, self.k);
        for s in &self.segments {
            let _ = writeln!(
                out,
                "segment j={} T={} labels={}",
                s.index,
                s.reached,
                join(&s.labels)
            );
        }
        if !self.tail.is_empty() {
            let _ = writeln!(out, "tail labels={}", join(&self.tail));
        }
        let _ = writeln!(out, "claimed_delay={}", self.claimed_delay);
        out
    }

    /// Replays the schedule on the chain and compares with the claim.
    pub fn replay<S: TransmissionSchedule + ?Sized>(
        &self,
        schedule: &S,
        horizon: Step,
    ) -> Result<Replay> {
        let net = self.network()?;
        let trace = run_oblivious_with(&net, schedule, self.k, RunOptions::summary_only(horizon))?;
        Ok(Replay {
            claimed: self.claimed_delay,
            completed_at: trace.completed_at,
        })
    }

    /// Replays an adaptive policy on the chain.
    pub fn replay_adaptive<P: Policy + ?Sized>(&self, policy: &P, horizon: Step) -> Result<Replay> {
        let net = self.network()?;
        let trace = run_adaptive_with(&net, policy, self.k, RunOptions::summary_only(horizon))?;
        Ok(Replay {
            claimed: self.claimed_delay,
            completed_at: trace.completed_at,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Replay {
    pub claimed: Step,
    pub completed_at: Option<Step>,
}

impl Replay {
    pub fn passed(&self) -> bool {
        self.completed_at.is_some_and(|c| c >= self.claimed)
    }
}

fn join(labels: &[Label]) -> String {
    labels
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// A bound the schedule failed to meet. Correct broadcasting schedules
/// never produce one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObliviousFinding {
    LateNodeMissing {
        segment: usize,
        witness: MaxDelay,
    },
    ShortExtension {
        segment: usize,
        reached: Step,
        bound: Step,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainAdversary {
    pub certificate: ChainCertificate,
    pub extensions: Vec<Extension>,
    pub findings: Vec<ObliviousFinding>,
}

/// `1 + Σ_{j=1}^{⌊n/k⌋} (n − jk)`.
pub fn chain_delay_formula(n: usize, k: usize) -> Step {
    1 + (1..=n / k.max(1)).map(|j| n - j * k).sum::<usize>()
}

/// Synthesizes a chain over `1..=n` starting at `source` that delays the
/// schedule's broadcast: extend by `build_extension` while at least `k + 1`
/// labels are free, then append the rest.
pub fn build_adversarial_chain(
    index: &AppearanceIndex,
    k: usize,
    source: Label,
) -> Result<ChainAdversary> {
    let n = index.n();
    if source == 0 || source > n {
        return Err(Error::InvalidNode(source));
    }
    if k == 0 {
        return Err(Error::InvalidChain("k must be at least 1".into()));
    }
    let mut chain = Chain::single(source)?;
    let mut t = index.t_leq(source, 1, 0, 1)?;
    let mut segments = vec![Segment {
        index: 0,
        reached: t,
        labels: vec![source],
    }];
    let mut extensions = Vec::new();
    let mut findings = Vec::new();

    while n - chain.len() > k {
        let ext = build_extension(index, &chain, t, k)?;
        let segment = segments.len();
        for w in ext.witnesses.iter().filter(|w| !w.bound_holds) {
            findings.push(ObliviousFinding::LateNodeMissing {
                segment,
                witness: w.clone(),
            });
        }
        if !ext.bound_holds() {
            findings.push(ObliviousFinding::ShortExtension {
                segment,
                reached: ext.reached,
                bound: ext.bound,
            });
        }
        let labels = ext.seq.effective();
        chain = chain.concat(&Chain::new(labels.clone())?)?;
        t = ext.reached;
        segments.push(Segment {
            index: segment,
            reached: t,
            labels,
        });
        extensions.push(ext);
    }

    let tail: Vec<Label> = (1..=n).filter(|v| !chain.contains(*v)).collect();
    if !tail.is_empty() {
        chain = chain.concat(&Chain::new(tail.clone())?)?;
    }
    let claimed_delay = if n == 1 { 0 } else { t + tail.len() - 1 };
    Ok(ChainAdversary {
        certificate: ChainCertificate {
            n,
            k,
            chain,
            segments,
            tail,
            claimed_delay,
        },
        extensions,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::Schedule;

    #[test]
    fn formula_values() {
        assert_eq!(chain_delay_formula(12, 3), 19);
        assert_eq!(chain_delay_formula(12, 1), 1 + 66);
        assert_eq!(chain_delay_formula(12, 4), 13);
    }

    #[test]
    fn k1_extension_is_single_witness() {
        let s = Schedule::round_robin(6);
        let idx = AppearanceIndex::build(&s, 6, 400);
        let prefix = Chain::single(1).unwrap();
        let ext = build_extension(&idx, &prefix, 1, 1).unwrap();
        assert_eq!(ext.seq.entries, vec![Some(ext.witnesses[0].node)]);
        assert_eq!(ext.reached, ext.witnesses[0].value);
    }

    #[test]
    fn round_robin_n6_k2_meets_bound() {
        let s = Schedule::round_robin(6);
        let idx = AppearanceIndex::build(&s, 6, 400);
        let ext = build_extension(&idx, &Chain::single(1).unwrap(), 1, 2).unwrap();
        assert_eq!(ext.bound, 1 + 6 - 1 - 2);
        assert!(ext.reached >= 4);
        assert_eq!(ext.reached, *ext.maxima.iter().max().unwrap());
    }

    #[test]
    fn dominant_first_witness_gives_gaps() {
        // node 2 speaks late twice, node 3 speaks early twice
        let sets = vec![
            vec![1],
            vec![3],
            vec![3],
            vec![],
            vec![2],
            vec![],
            vec![2],
            vec![4],
        ];
        let idx = AppearanceIndex::build(&sets, 4, 8);
        let ext = build_extension(&idx, &Chain::single(1).unwrap(), 1, 2).unwrap();
        assert_eq!(ext.witnesses[0].node, 4);
        // M_1 = 8 from node 4; node 2's second shot (7) does not beat it
        assert_eq!(ext.seq.entries, vec![Some(4), None]);
        assert_eq!(ext.seq.effective(), vec![4]);
        assert_eq!(ext.seq.to_string(), "⟨4 ε⟩");
    }

    #[test]
    fn chain_certificate_replays() {
        for k in 1..=4 {
            let s = Schedule::oblivious_kshot(12, k);
            let idx = AppearanceIndex::build(&s, 12, crate::default_horizon(12));
            let adv = build_adversarial_chain(&idx, k, 1).unwrap();
            let cert = &adv.certificate;
            assert!(adv.findings.is_empty(), "{:?}", adv.findings);
            assert_eq!(cert.chain.len(), 12);
            assert!(cert
                .segments
                .windows(2)
                .all(|w| w[0].reached < w[1].reached));
            let replay = cert.replay(&s, 2 * idx.horizon()).unwrap();
            assert!(replay.passed(), "k={k} {replay:?}");
            assert!(cert
                .to_text()
                .ends_with(&format!("claimed_delay={}\n", cert.claimed_delay)));
        }
    }

    #[test]
    fn singleton_chain() {
        let s = Schedule::round_robin(1);
        let idx = AppearanceIndex::build(&s, 1, 8);
        let adv = build_adversarial_chain(&idx, 1, 1).unwrap();
        assert_eq!(adv.certificate.claimed_delay, 0);
        assert!(adv.certificate.replay(&s, 8).unwrap().passed());
    }
}
