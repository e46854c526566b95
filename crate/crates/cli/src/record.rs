use std::io::Write;

use kshot_core::protocols::Schedule;
use kshot_core::radio::{
    long_active_flags, progress_curve, run_oblivious_with, short_active_violations,
    verify_shot_budget, RunOptions, SimTrace,
};
use kshot_core::topology::Network;
use kshot_core::Step;

pub const CSV_COLUMNS: [&str; 8] = [
    "n",
    "k",
    "protocol",
    "graph_id",
    "steps",
    "max_shots",
    "peak_active",
    "flags",
];

/// One engine run, as written to a sweep CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub n: usize,
    pub k: usize,
    pub protocol: String,
    pub graph_id: String,
    pub steps: Option<Step>,
    pub max_shots: usize,
    pub peak_active: usize,
    /// Short-active-set windows without the required progress.
    pub monitor_violations: usize,
    pub flags: Vec<String>,
}

impl RunRecord {
    fn fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.k.to_string(),
            self.protocol.clone(),
            self.graph_id.clone(),
            self.steps
                .map_or_else(|| "none".to_string(), |s| s.to_string()),
            self.max_shots.to_string(),
            self.peak_active.to_string(),
            self.flags.join(";"),
        ]
    }

    /// Completed, within budget and no monitor violation. `fallback` and the
    /// advisory `long=` flag do not count.
    pub fn is_clean(&self) -> bool {
        self.flags
            .iter()
            .all(|f| f == "fallback" || f.starts_with("long="))
    }
}

/// Runs `schedule` on `network` and summarizes the trace.
///
/// Flags: `incomplete`; `budget`; `below-ecc` when the run finished faster
/// than the source's eccentricity allows; `monitor=<c>` for short-active
/// windows without progress; `long=<c>` for long-active windows that fell
/// short of `k/2` within one Round-Robin pass (advisory); `fallback` when the
/// k-shot schedule degenerated to Round-Robin.
pub fn measure(
    network: &Network,
    schedule: &Schedule,
    protocol: &str,
    graph_id: &str,
    k: usize,
    horizon: Step,
    record_steps: bool,
) -> kshot_core::Result<(RunRecord, SimTrace)> {
    let opts = RunOptions {
        horizon,
        record_steps,
    };
    let trace = run_oblivious_with(network, schedule, k, opts)?;
    let record = record_of(network, &trace, protocol, graph_id, Some(schedule));
    Ok((record, trace))
}

/// Summarizes a finished trace. The progress monitors run only for a
/// schedule with stages.
pub fn record_of(
    network: &Network,
    trace: &SimTrace,
    protocol: &str,
    graph_id: &str,
    schedule: Option<&Schedule>,
) -> RunRecord {
    let stage_len = schedule.and_then(Schedule::stage_len);
    let k = trace.k;
    let curve = progress_curve(trace, network);
    let mut flags = Vec::new();
    if trace.completed_at.is_none() {
        flags.push("incomplete".to_string());
    }
    if !verify_shot_budget(trace, k).ok {
        flags.push("budget".to_string());
    }
    if trace
        .completed_at
        .is_some_and(|s| s < network.eccentricity())
    {
        flags.push("below-ecc".to_string());
    }
    let monitor_violations = match stage_len {
        Some(len) => short_active_violations(&curve, trace.completed_at, len, k).len(),
        None => 0,
    };
    if monitor_violations > 0 {
        flags.push(format!("monitor={monitor_violations}"));
    }
    if let (Some(len), Some(pass)) = (stage_len, schedule.and_then(Schedule::round_robin_pass_len))
    {
        let long = long_active_flags(&curve, trace.completed_at, len, pass, k).len();
        if long > 0 {
            flags.push(format!("long={long}"));
        }
    }
    if schedule.is_some_and(Schedule::is_round_robin_fallback) {
        flags.push("fallback".to_string());
    }
    RunRecord {
        n: network.n(),
        k,
        protocol: protocol.to_string(),
        graph_id: graph_id.to_string(),
        steps: trace.completed_at,
        max_shots: trace.max_shots(),
        peak_active: curve.peak_active(),
        monitor_violations,
        flags,
    }
}

/// Writes `# ` header comments, the column row and one row per record.
pub fn write_csv<W: Write>(out: W, header: &[String], records: &[RunRecord]) -> anyhow::Result<()> {
    let mut out = out;
    for line in header {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Per-`(n, k)` aggregate of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub k: usize,
    pub runs: usize,
    pub incomplete: usize,
    pub max_steps: Step,
    /// `max(steps)·k / n²` over the whole corpus.
    pub tradeoff: f64,
    /// The same over graphs whose id starts with `adv`, if any.
    pub adversarial_tradeoff: Option<f64>,
    pub monitor_violations: usize,
}

pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(usize, usize)> = records.iter().map(|r| (r.n, r.k)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(n, k)| {
            let rows: Vec<&RunRecord> = records.iter().filter(|r| (r.n, r.k) == (n, k)).collect();
            let scale = |s: Step| s as f64 * k as f64 / (n * n) as f64;
            let max_steps = rows.iter().filter_map(|r| r.steps).max().unwrap_or(0);
            let adv_max = rows
                .iter()
                .filter(|r| r.graph_id.starts_with("adv"))
                .filter_map(|r| r.steps)
                .max();
            SummaryRow {
                n,
                k,
                runs: rows.len(),
                incomplete: rows.iter().filter(|r| r.steps.is_none()).count(),
                max_steps,
                tradeoff: scale(max_steps),
                adversarial_tradeoff: adv_max.map(scale),
                monitor_violations: rows.iter().map(|r| r.monitor_violations).sum(),
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "k",
        "runs",
        "incomplete",
        "max_steps",
        "tradeoff",
        "adv_tradeoff",
        "monitor_violations",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.runs.to_string(),
            r.incomplete.to_string(),
            r.max_steps.to_string(),
            format!("{:.4}", r.tradeoff),
            r.adversarial_tradeoff
                .map_or_else(String::new, |t| format!("{t:.4}")),
            r.monitor_violations.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use kshot_core::topology::{build_chain, Network};

    #[test]
    fn singleton_takes_zero_steps() {
        let g = Network::new(1, 1, []).unwrap();
        let (r, _) = measure(&g, &Schedule::round_robin(1), "rr", "single", 1, 10, true).unwrap();
        assert_eq!(r.steps, Some(0));
        assert!(r.is_clean());
    }

    #[test]
    fn chain_of_three_round_robin() {
        let g = build_chain(&[1, 2, 3]).unwrap();
        let s = Schedule::round_robin(3);
        let p = s.grid_prime().unwrap();
        let (r, trace) = measure(&g, &s, "rr", "c3", 1, 100, true).unwrap();
        assert!(r.steps.unwrap() <= 2 * p * p);
        let (_, again) = measure(&g, &s, "rr", "c3", 1, 100, true).unwrap();
        assert_eq!(trace.to_text(), again.to_text());
    }

    #[test]
    fn empty_csv_has_header() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["seed=1".into()], &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# seed=1\nn,k,protocol,graph_id,steps,max_shots,peak_active,flags\n"
        );
    }
}
