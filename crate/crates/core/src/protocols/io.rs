//! Schedule files.
//!
//! ```text
//! schedule n=4 period=4 kind=explicit
//! t=1: 1
//! t=2: 2,3
//! t=3:
//! t=4: 4
//! ```
//!
//! Generated schedules use `kind=descriptor`, a `descriptor <...>` line such
//! as `descriptor oblivious_kshot n=25 k=3`, and optionally the materialized
//! first period, which is checked against the descriptor on load.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::protocols::{Schedule, ScheduleDescriptor};
use crate::topology::{key_value, strip_comment};
use crate::Label;

pub fn schedule_to_string(schedule: &Schedule, with_body: bool) -> String {
    let kind = match schedule.descriptor() {
        ScheduleDescriptor::Explicit => "explicit",
        _ => "descriptor",
    };
    let mut out = format!(
        "schedule n={} period={} kind={kind}\n",
        schedule.n(),
        schedule.period()
    );
    let explicit = kind == "explicit";
    if !explicit {
        let _ = writeln!(out, "descriptor {}", schedule.descriptor());
    }
    if explicit || with_body {
        for (i, set) in schedule.materialize().iter().enumerate() {
            let list = set
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(out, "t={}: {list}", i + 1);
        }
    }
    out
}

/// Builds a generated schedule from `round_robin n=<n>`,
/// `oblivious_kshot n=<n> k=<k>` or `multiplexed n=<n> k=<k> K=<K>`.
pub fn parse_descriptor(text: &str) -> Result<Schedule> {
    parse_descriptor_at(text, 1)
}

fn parse_descriptor_at(text: &str, line: usize) -> Result<Schedule> {
    let mut words = text.split_whitespace();
    let schedule = match words.next() {
        Some("round_robin") => {
            Schedule::round_robin(positive(key_value(words.next(), "n", line)?, line)?)
        }
        Some("oblivious_kshot") => {
            let n = positive(key_value(words.next(), "n", line)?, line)?;
            let k = positive(key_value(words.next(), "k", line)?, line)?;
            Schedule::oblivious_kshot(n, k)
        }
        Some("multiplexed") => {
            let n = positive(key_value(words.next(), "n", line)?, line)?;
            let k = positive(key_value(words.next(), "k", line)?, line)?;
            let block = positive(key_value(words.next(), "K", line)?, line)?;
            Schedule::multiplexed(n, k, block)
        }
        Some(other) => {
            return Err(Error::format(
                line,
                format!("unknown schedule kind `{other}`"),
            ));
        }
        None => return Err(Error::format(line, "empty descriptor")),
    };
    if words.next().is_some() {
        return Err(Error::format(line, "trailing tokens after descriptor"));
    }
    Ok(schedule)
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut generated: Option<Schedule> = None;
    let mut body: Vec<Vec<Label>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("schedule ") {
            if header.is_some() {
                return Err(Error::format(line_no, "second schedule header"));
            }
            let mut words = rest.split_whitespace();
            let n = positive(key_value(words.next(), "n", line_no)?, line_no)?;
            let period = positive(key_value(words.next(), "period", line_no)?, line_no)?;
            let explicit = match words.next() {
                Some("kind=explicit") => true,
                Some("kind=descriptor") => false,
                other => {
                    return Err(Error::format(
                        line_no,
                        format!("expected kind=explicit|descriptor, got {other:?}"),
                    ))
                }
            };
            header = Some((n, period, explicit));
            continue;
        }
        let Some((n, _, explicit)) = header else {
            return Err(Error::format(line_no, "content before schedule header"));
        };
        if let Some(rest) = line.strip_prefix("descriptor ") {
            if explicit {
                return Err(Error::format(line_no, "descriptor in an explicit schedule"));
            }
            let s = parse_descriptor_at(rest, line_no)?;
            if s.n() != n {
                return Err(Error::format(line_no, "descriptor n disagrees with header"));
            }
            generated = Some(s);
            continue;
        }
        if let Some(rest) = line.strip_prefix("t=") {
            let (t, list) = rest
                .split_once(':')
                .ok_or_else(|| Error::format(line_no, "expected t=<t>: <labels>"))?;
            let t: usize = t
                .trim()
                .parse()
                .map_err(|_| Error::format(line_no, format!("bad step `{t}`")))?;
            if t != body.len() + 1 {
                return Err(Error::format(
                    line_no,
                    format!("expected step {}, got {t}", body.len() + 1),
                ));
            }
            let mut set = Vec::new();
            for tok in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let v: Label = tok
                    .parse()
                    .map_err(|_| Error::format(line_no, format!("bad label `{tok}`")))?;
                if v == 0 || v > n {
                    return Err(Error::format(
                        line_no,
                        format!("label {v} is outside 1..={n}"),
                    ));
                }
                set.push(v);
            }
            body.push(set);
            continue;
        }
        return Err(Error::format(
            line_no,
            format!("unrecognized line `{line}`"),
        ));
    }

    let (n, period, explicit) =
        header.ok_or_else(|| Error::format(0, "missing schedule header"))?;
    if explicit {
        if body.len() != period {
            return Err(Error::format(
                last_line,
                format!(
                    "explicit schedule lists {} steps, header says {period}",
                    body.len()
                ),
            ));
        }
        return Schedule::explicit(n, body).map_err(|e| Error::format(last_line, e.to_string()));
    }
    let schedule = generated
        .ok_or_else(|| Error::format(last_line, "descriptor schedule without descriptor"))?;
    if schedule.period() != period {
        return Err(Error::format(
            last_line,
            "header period disagrees with descriptor",
        ));
    }
    if !body.is_empty() {
        if body.len() != period {
            return Err(Error::format(
                last_line,
                "materialized body must cover one period",
            ));
        }
        for (i, mut set) in body.into_iter().enumerate() {
            set.sort_unstable();
            if set != schedule.set(i + 1) {
                return Err(Error::format(
                    last_line,
                    format!("materialized step {} disagrees with descriptor", i + 1),
                ));
            }
        }
    }
    Ok(schedule)
}

pub fn save_schedule(schedule: &Schedule, path: impl AsRef<Path>, with_body: bool) -> Result<()> {
    std::fs::write(path, schedule_to_string(schedule, with_body))?;
    Ok(())
}

/// Loads a schedule file, or a bare descriptor line.
pub fn load_schedule(path: impl AsRef<Path>) -> Result<Schedule> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with("schedule ") {
        parse_schedule(&text)
    } else {
        parse_descriptor(strip_comment(text.trim()))
    }
}

fn positive(v: usize, line: usize) -> Result<usize> {
    if v == 0 {
        Err(Error::format(line, "value must be positive"))
    } else {
        Ok(v)
    }
}
