//! Text formats. All vertex numbers in files are 1-based.
//!
//! Edge list: first non-comment line `n m`, then `m` lines `u v`.
//! Hints: lines `center source target`, one per mapped vertex.
//! Lines starting with `#` and blank lines are ignored everywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::canon::VertexMapping;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line: usize, s: &str, want: usize) -> Result<Vec<usize>> {
    let out: Vec<usize> = s
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected a non-negative integer, got {t:?}"),
            })
        })
        .collect::<Result<_>>()?;
    if out.len() != want {
        return Err(Error::Parse {
            line,
            msg: format!("expected {want} fields, got {}", out.len()),
        });
    }
    Ok(out)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing \"n m\" header".into(),
    })?;
    let h = numbers(hl, header, 2)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::with_capacity(m);
    for (k, l) in lines {
        let e = numbers(k, l, 2)?;
        edges.push((e[0], e[1]));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: hl,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edge_list(n, &edges)
}

pub fn format_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        writeln!(s, "{} {}", u + 1, v + 1).unwrap();
    }
    s
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    std::fs::write(path, format_edge_list(g))?;
    Ok(())
}

/// Per-center partial maps, 0-based. Centers without lines are absent.
pub fn parse_hints(text: &str, n: usize) -> Result<BTreeMap<usize, VertexMapping>> {
    let mut raw: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (k, l) in content_lines(text) {
        let t = numbers(k, l, 3)?;
        for &x in &t {
            if x == 0 || x > n {
                return Err(Error::Parse {
                    line: k,
                    msg: format!("vertex {x} outside 1..={n}"),
                });
            }
        }
        raw.entry(t[0] - 1).or_default().push((t[1] - 1, t[2] - 1));
    }
    raw.into_iter()
        .map(|(c, pairs)| Ok((c, VertexMapping::new(pairs)?)))
        .collect()
}

pub fn read_hints(path: &Path, n: usize) -> Result<BTreeMap<usize, VertexMapping>> {
    parse_hints(&std::fs::read_to_string(path)?, n)
}

/// A permutation as `n` whitespace-separated 1-based images; returned
/// 0-based.
pub fn parse_permutation(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(n);
    for (k, l) in content_lines(text) {
        for t in l.split_whitespace() {
            let x: usize = t.parse().map_err(|_| Error::Parse {
                line: k,
                msg: format!("expected a vertex, got {t:?}"),
            })?;
            if x == 0 || x > n {
                return Err(Error::Parse {
                    line: k,
                    msg: format!("vertex {x} outside 1..={n}"),
                });
            }
            out.push(x - 1);
        }
    }
    let mut seen = vec![false; n];
    if out.len() != n || out.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected a permutation of 1..={n}"),
        });
    }
    Ok(out)
}
