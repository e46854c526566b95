use anyhow::{ensure, Context};
use rayon::prelude::*;

use crate::corpus::{build_graph, CorpusSize};
use crate::record::{measure, RunRecord};
use crate::{horizon_or_default, Protocol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub protocol: Protocol,
    pub corpus: CorpusSize,
    pub seed: u64,
    /// `None` means `8·n²` for each `n`.
    pub horizon: Option<usize>,
    pub jobs: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(self.jobs >= 1, "--jobs must be at least 1");
        ensure!(self.horizon != Some(0), "horizon must be positive");
        for &n in &self.ns {
            ensure!(n >= 1, "n values must be positive");
            for &k in &self.ks {
                ensure!(k >= 1 && k <= n, "need 1 ≤ k ≤ n, got n={n} k={k}");
            }
        }
        Ok(())
    }

    /// Comment lines for the CSV header.
    pub fn header(&self) -> Vec<String> {
        let list = |v: &[usize]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        vec![
            format!("kshot {}", env!("CARGO_PKG_VERSION")),
            format!(
                "protocol={} n={} k={}",
                self.protocol.name(),
                list(&self.ns),
                list(&self.ks)
            ),
            format!(
                "seed={} random={} chains={} adversarial={}",
                self.seed, self.corpus.random, self.corpus.chains, self.corpus.adversarial
            ),
            match self.horizon {
                Some(h) => format!("horizon={h}"),
                None => "horizon=8n^2".to_string(),
            },
        ]
    }
}

/// Runs every `(n, k, graph)` combination on a pool of `jobs` threads and
/// returns the records sorted by `(n, k, graph_id)`.
pub fn run_sweep(config: &SweepConfig) -> anyhow::Result<Vec<RunRecord>> {
    config.validate()?;
    let specs = config.corpus.specs();
    let mut tasks = Vec::new();
    for &n in &config.ns {
        for &k in &config.ks {
            for &spec in &specs {
                tasks.push((n, k, spec));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()?;
    let results: Vec<anyhow::Result<RunRecord>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(n, k, spec)| {
                let horizon = horizon_or_default(config.horizon, n);
                let schedule = config.protocol.schedule(n, k);
                let id = spec.id();
                let g = build_graph(spec, n, k, &schedule, config.seed, horizon)
                    .with_context(|| format!("building {id} for n={n} k={k}"))?;
                let (record, _) = measure(
                    &g,
                    &schedule,
                    config.protocol.name(),
                    &id,
                    k,
                    horizon,
                    false,
                )?;
                Ok(record)
            })
            .collect()
    });
    let mut records = results.into_iter().collect::<anyhow::Result<Vec<_>>>()?;
    records.sort_by(|a, b| (a.n, a.k, &a.graph_id).cmp(&(b.n, b.k, &b.graph_id)));
    Ok(records)
}
