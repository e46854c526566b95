//! Line-based graph files.
//!
//! ```text
//! # optional comments
//! graph n=4 source=1
//! edge 1 2
//! edge 2 3
//! ```
//!
//! Edges are written in lexicographic `(u, v)` order. On load, every
//! structural problem is reported with its 1-based line number.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::topology::Network;
use crate::Label;

pub fn network_to_string(g: &Network) -> String {
    let mut out = format!("graph n={} source={}\n", g.n(), g.source());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    out
}

pub fn parse_network(text: &str) -> Result<Network> {
    let mut header: Option<(usize, Label, usize)> = None;
    let mut edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("graph") => {
                if header.is_some() {
                    return Err(Error::format(line_no, "second graph header"));
                }
                let n = key_value(words.next(), "n", line_no)?;
                let source = key_value(words.next(), "source", line_no)?;
                if words.next().is_some() {
                    return Err(Error::format(line_no, "trailing tokens after header"));
                }
                if n == 0 {
                    return Err(Error::format(line_no, "n must be at least 1"));
                }
                check(source, n, line_no)?;
                header = Some((n, source, line_no));
            }
            Some("edge") => {
                let Some((n, _, _)) = header else {
                    return Err(Error::format(line_no, "edge before graph header"));
                };
                let u = number(words.next(), line_no)?;
                let v = number(words.next(), line_no)?;
                if words.next().is_some() {
                    return Err(Error::format(line_no, "trailing tokens after edge"));
                }
                check(u, n, line_no)?;
                check(v, n, line_no)?;
                if u == v {
                    return Err(Error::format(line_no, format!("self-loop on {u}")));
                }
                if !edges.insert((u, v)) {
                    return Err(Error::format(line_no, format!("duplicate edge {u} {v}")));
                }
            }
            Some(other) => {
                return Err(Error::format(
                    line_no,
                    format!("unknown directive `{other}`"),
                ));
            }
            None => unreachable!("empty lines are skipped"),
        }
    }
    let (n, source, line_no) = header.ok_or_else(|| Error::format(0, "missing graph header"))?;
    Network::new(n, source, edges).map_err(|e| Error::format(line_no, e.to_string()))
}

pub fn save_network(g: &Network, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, network_to_string(g))?;
    Ok(())
}

pub fn load_network(path: impl AsRef<Path>) -> Result<Network> {
    parse_network(&std::fs::read_to_string(path)?)
}

pub(crate) fn strip_comment(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

fn check(v: Label, n: usize, line: usize) -> Result<()> {
    if v == 0 || v > n {
        Err(Error::format(line, format!("label {v} is outside 1..={n}")))
    } else {
        Ok(())
    }
}

fn number(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::format(line, "missing number"))?;
    tok.parse()
        .map_err(|_| Error::format(line, format!("`{tok}` is not a number")))
}

pub(crate) fn key_value(tok: Option<&str>, key: &str, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::format(line, format!("missing {key}=")))?;
    let value = tok
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::format(line, format!("expected {key}=<value>, got `{tok}`")))?;
    value
        .parse()
        .map_err(|_| Error::format(line, format!("`{value}` is not a number")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::random_reachable_digraph;

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = random_reachable_digraph(15, 4);
        save_network(&g, &path).unwrap();
        assert_eq!(load_network(&path).unwrap(), g);
    }

    #[test]
    fn canonical_text() {
        let g = Network::new(3, 2, [(3, 1), (2, 3), (2, 1)]).unwrap();
        assert_eq!(
            network_to_string(&g),
            "graph n=3 source=2\nedge 2 1\nedge 2 3\nedge 3 1\n"
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_network("# hi\n\ngraph n=2 source=1 # trailing\nedge 1 2\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn format_errors_carry_line_numbers() {
        let dup = parse_network("graph n=3 source=1\nedge 1 2\nedge 1 2\n");
        assert_eq!(
            dup,
            Err(Error::Format {
                line: 3,
                message: "duplicate edge 1 2".into()
            })
        );
        let zero = parse_network("graph n=3 source=1\nedge 0 2\n");
        assert!(matches!(zero, Err(Error::Format { line: 2, .. })));
        let missing = parse_network("edge 1 2\n");
        assert!(matches!(missing, Err(Error::Format { line: 1, .. })));
        let junk = parse_network("graph n=3 source=1\nvertex 4\n");
        assert!(matches!(junk, Err(Error::Format { line: 2, .. })));
        assert!(parse_network("").is_err());
    }
}
