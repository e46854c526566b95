use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use kshot_core::adaptive_adversary::{
    build_1shot_chain_refinement, build_adversarial_layered, layered_delay_floor,
    one_shot_chain_bound, RefinementOutcome,
};
use kshot_core::oblivious_adversary::{
    build_adversarial_chain, chain_delay_formula, AppearanceIndex, ObliviousFinding, Replay,
};
use kshot_core::protocols::{
    builtin_policy, load_schedule, save_schedule, schedule_to_string, verify_line_properties,
    verify_validity,
};
use kshot_core::radio::{parse_trace_shots, run_adaptive_with, verify_shot_counts, RunOptions};
use kshot_core::topology::{load_network, network_to_string, Network};
use kshot_core::Error;

use crate::args::{
    AdversaryArgs, AdversaryKind, Cli, Command, ScheduleArgs, SimulateArgs, SweepArgs, VerifyArgs,
    VerifyTarget,
};
use crate::corpus::CorpusSize;
use crate::horizon_or_default;
use crate::record::{measure, record_of, summarize, write_csv, write_summary};
use crate::sweep::{run_sweep, SweepConfig};

/// Runs a parsed command. `Ok(false)` means a check failed or a finding was
/// reported; errors are reserved for bad input.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<bool> {
    match cli.command {
        Command::Simulate(a) => simulate(a, out),
        Command::Adversary(a) => adversary(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Schedule(a) => schedule(a, out),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn simulate(args: SimulateArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let g =
        load_network(&args.graph).with_context(|| format!("reading {}", args.graph.display()))?;
    let n = g.n();
    let k = args.k;
    let horizon = horizon_or_default(args.horizon.horizon, n);
    let graph_id = args
        .graph
        .file_stem()
        .map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned());

    let (record, trace) = if let Some(name) = &args.policy {
        let policy = builtin_policy(name, n, k)?;
        let trace = run_adaptive_with(&g, &policy, k, RunOptions::new(horizon))?;
        (record_of(&g, &trace, name, &graph_id, None), trace)
    } else {
        let schedule = match &args.schedule {
            Some(path) => {
                load_schedule(path).with_context(|| format!("reading {}", path.display()))?
            }
            None => args.protocol.schedule(n, k),
        };
        if schedule.n() != n {
            bail!("schedule covers n={} but the graph has n={n}", schedule.n());
        }
        let name = if args.schedule.is_some() {
            "file"
        } else {
            args.protocol.name()
        };
        measure(&g, &schedule, name, &graph_id, k, horizon, true)?
    };

    if let Some(path) = &args.out {
        fs::write(path, trace.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    write_csv(&mut *out, &[], std::slice::from_ref(&record))?;
    Ok(record.is_clean())
}

fn write_artifacts(dir: Option<&Path>, graph: &Network, certificate: &str) -> anyhow::Result<()> {
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("graph.txt"), network_to_string(graph))?;
        fs::write(dir.join("certificate.txt"), certificate)?;
    }
    Ok(())
}

fn report_replay(out: &mut dyn Write, r: &Replay) -> anyhow::Result<bool> {
    let completed = r
        .completed_at
        .map_or_else(|| "none".to_string(), |c| c.to_string());
    writeln!(
        out,
        "replay: {} claimed_delay={} completed_at={completed}",
        verdict(r.passed()),
        r.claimed
    )?;
    Ok(r.passed())
}

/// Policy defects surface as findings rather than errors.
fn is_finding(e: &Error) -> bool {
    matches!(
        e,
        Error::PolicyNeverSeparates { .. }
            | Error::PolicyBudgetDeadlock { .. }
            | Error::PolicyCollision { .. }
            | Error::PolicyStalls { .. }
    )
}

pub fn adversary(args: AdversaryArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let dir = args.out.as_deref();
    match args.kind {
        AdversaryKind::Oblivious => {
            let schedule = match (&args.schedule, args.n) {
                (Some(path), _) => load_schedule(path)?,
                (None, Some(n)) => args.protocol.schedule(n, args.k),
                (None, None) => bail!("--n or --schedule is required"),
            };
            let n = schedule.n();
            let horizon = horizon_or_default(args.horizon.horizon, n);
            let index = AppearanceIndex::build(&schedule, n, horizon);
            let adv = build_adversarial_chain(&index, args.k, args.source)?;
            let cert = &adv.certificate;
            out.write_all(cert.to_text().as_bytes())?;
            writeln!(out, "reference_sum={}", chain_delay_formula(n, args.k))?;
            for f in &adv.findings {
                match f {
                    ObliviousFinding::LateNodeMissing { segment, witness } => writeln!(
                        out,
                        "finding: segment {segment}: node {} transmits by {} < bound {}",
                        witness.node, witness.value, witness.bound
                    )?,
                    ObliviousFinding::ShortExtension {
                        segment,
                        reached,
                        bound,
                    } => writeln!(
                        out,
                        "finding: segment {segment}: extension reaches {reached} < bound {bound}"
                    )?,
                }
            }
            let net = cert.network()?;
            write_artifacts(dir, &net, &cert.to_text())?;
            let passed = report_replay(out, &cert.replay(&schedule, horizon)?)?;
            Ok(passed && adv.findings.is_empty())
        }
        AdversaryKind::Adaptive => {
            let n = args.n.context("--n is required")?;
            let horizon = horizon_or_default(args.horizon.horizon, n);
            let policy = builtin_policy(&args.policy, n, args.k)?;
            let cert = match build_adversarial_layered(n, args.k, &policy, horizon) {
                Ok(c) => c,
                Err(e) if is_finding(&e) => {
                    writeln!(out, "finding: {e}")?;
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            out.write_all(cert.to_text().as_bytes())?;
            writeln!(out, "floor={:.3}", layered_delay_floor(n, args.k))?;
            write_artifacts(dir, &cert.network()?, &cert.to_text())?;
            report_replay(out, &cert.replay(&policy, horizon)?)
        }
        AdversaryKind::OneShotChain => {
            let n = args.n.context("--n is required")?;
            let horizon = horizon_or_default(args.horizon.horizon, n);
            let policy = builtin_policy(&args.policy, n, 1)?;
            match build_1shot_chain_refinement(n, &policy, horizon)? {
                RefinementOutcome::Certified(r) => {
                    let mut text = r.certificate.to_text();
                    for s in &r.stages {
                        text.push_str(&format!(
                            "# stage i={} node={} T={} bound={}\n",
                            s.stage, s.node, s.reached, s.bound
                        ));
                    }
                    out.write_all(text.as_bytes())?;
                    writeln!(out, "reference_bound={}", one_shot_chain_bound(n))?;
                    write_artifacts(dir, &r.certificate.network()?, &text)?;
                    let passed =
                        report_replay(out, &r.certificate.replay_adaptive(&policy, horizon)?)?;
                    Ok(passed && r.stages.iter().all(|s| s.bound_holds()))
                }
                RefinementOutcome::Collision(w) => {
                    writeln!(
                        out,
                        "finding: nodes {} and {} both transmit at step {}; sink {} starved={}",
                        w.first, w.second, w.step, w.sink, w.starved
                    )?;
                    write_artifacts(dir, &w.network, "")?;
                    Ok(false)
                }
                RefinementOutcome::Stall(w) => {
                    let step = w.step.map_or_else(|| "none".to_string(), |s| s.to_string());
                    writeln!(
                        out,
                        "finding: node {} never relays (only transmission: {step}); incomplete={}",
                        w.node, w.confirmed
                    )?;
                    write_artifacts(dir, &w.network, "")?;
                    Ok(false)
                }
            }
        }
    }
}

pub fn sweep(args: SweepArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let config = SweepConfig {
        ns: args.n,
        ks: args.k,
        protocol: args.protocol,
        corpus: CorpusSize {
            random: args.random,
            chains: args.chains,
            adversarial: args.adversarial,
        },
        seed: args.seed,
        horizon: args.horizon.horizon,
        jobs: args.jobs,
    };
    let records = run_sweep(&config)?;
    match &args.out {
        Some(path) => write_csv(fs::File::create(path)?, &config.header(), &records)?,
        None => write_csv(&mut *out, &config.header(), &records)?,
    }
    let rows = summarize(&records);
    match &args.summary {
        Some(path) => write_summary(fs::File::create(path)?, &rows)?,
        None if args.out.is_some() => write_summary(&mut *out, &rows)?,
        None => {}
    }
    Ok(records.iter().all(|r| r.is_clean()))
}

pub fn verify(args: VerifyArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    match args.target {
        VerifyTarget::Geometry { p } => {
            let report = verify_line_properties(p)?;
            writeln!(out, "geometry p={p} lines={}", report.line_count)?;
            for c in &report.properties {
                if c.detail.is_empty() {
                    writeln!(out, "{} {}", verdict(c.passed), c.name)?;
                } else {
                    writeln!(out, "{} {}: {}", verdict(c.passed), c.name, c.detail)?;
                }
            }
            let ok = report.all_passed() && report.line_count == p * (p + 1);
            writeln!(out, "{}", verdict(ok))?;
            Ok(ok)
        }
        VerifyTarget::Validity { n, k, horizon } => {
            let horizon = horizon_or_default(horizon.horizon, n);
            let r = verify_validity(n, k, horizon);
            match r.counterexample {
                Some((v, t)) => writeln!(
                    out,
                    "FAIL validity n={n} k={k} horizon={horizon}: node {v} woken at {t} never transmits alone"
                )?,
                None => writeln!(out, "PASS validity n={n} k={k} horizon={horizon}")?,
            }
            Ok(r.passed)
        }
        VerifyTarget::Budgets { trace, k } => {
            let text = fs::read_to_string(&trace)
                .with_context(|| format!("reading {}", trace.display()))?;
            let shots = parse_trace_shots(&text)?;
            let r = verify_shot_counts(&shots, k);
            match r.first_violation {
                Some((v, c)) => writeln!(out, "FAIL budget k={k}: node {v} used {c} shots")?,
                None => writeln!(out, "PASS budget k={k} nodes={}", shots.len())?,
            }
            Ok(r.ok)
        }
    }
}

pub fn schedule(args: ScheduleArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let s = args.protocol.schedule(args.n, args.k);
    match &args.out {
        Some(path) => save_schedule(&s, path, args.materialize)?,
        None => out.write_all(schedule_to_string(&s, args.materialize).as_bytes())?,
    }
    Ok(true)
}
