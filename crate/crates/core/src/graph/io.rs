//! Edge-list text format.
//!
//! ```text
//! # comment
//! n=4
//! 0 1
//! 1 2
//! w 2 1.5
//! ```
//!
//! One pair per line, `#` starts a comment, `n=<int>` fixes the vertex count,
//! `w v c` assigns cost `c` to vertex `v`. Directed files read pairs as
//! `tail head`. Tokens that are not all integers are treated as labels and
//! mapped to dense ids in order of first appearance.

use super::{DirectedGraph, Graph, NodeWeightedGraph};
use crate::error::{DsgError, Result};
use std::collections::HashMap;
use std::fmt::Write;

/// Parsed contents of an edge-list file.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
    /// Per-vertex costs, present when the file has any `w` line (missing
    /// vertices default to 1).
    pub costs: Option<Vec<f64>>,
    /// External labels, present when the file used non-integer tokens.
    pub labels: Option<Vec<String>>,
}

enum Line<'a> {
    Pair(&'a str, &'a str),
    Cost(&'a str, f64),
}

fn perr(line: usize, reason: impl Into<String>) -> DsgError {
    DsgError::Parse {
        line,
        reason: reason.into(),
    }
}

pub fn parse_edge_list<'a>(text: &'a str) -> Result<EdgeList> {
    let mut header_n = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("n=") {
            if header_n.is_some() || !lines.is_empty() {
                return Err(perr(
                    lineno,
                    "header `n=` must appear once, before any edge",
                ));
            }
            header_n = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|e| perr(lineno, format!("bad vertex count: {e}")))?,
            );
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks.as_slice() {
            ["w", v, c] => {
                let c: f64 = c
                    .parse()
                    .map_err(|e| perr(lineno, format!("bad cost `{c}`: {e}")))?;
                lines.push((lineno, Line::Cost(v, c)));
            }
            [u, v] => lines.push((lineno, Line::Pair(u, v))),
            _ => {
                return Err(perr(
                    lineno,
                    format!("expected `u v` or `w v c`, got `{body}`"),
                ))
            }
        }
    }

    let tokens = || {
        lines.iter().flat_map(|(_, l)| match l {
            Line::Pair(u, v) => vec![*u, *v],
            Line::Cost(v, _) => vec![*v],
        })
    };
    let numeric = tokens().all(|t| t.parse::<usize>().is_ok());
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut id_of = |tok: &'a str| -> usize {
        if numeric {
            tok.parse().expect("checked numeric")
        } else {
            *ids.entry(tok).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            })
        }
    };
    let mut pairs = Vec::new();
    let mut cost_lines = Vec::new();
    for (lineno, l) in &lines {
        match l {
            Line::Pair(u, v) => pairs.push((id_of(u), id_of(v), *lineno)),
            Line::Cost(v, c) => cost_lines.push((id_of(v), *c, *lineno)),
        }
    }
    let seen = pairs
        .iter()
        .flat_map(|&(u, v, _)| [u, v])
        .chain(cost_lines.iter().map(|&(v, _, _)| v))
        .max()
        .map_or(0, |m| m + 1)
        .max(labels.len());
    let n = match header_n {
        Some(h) if h < seen => {
            return Err(perr(
                1,
                format!("header declares n={h} but vertex ids reach {}", seen - 1),
            ))
        }
        Some(h) => h,
        None => seen,
    };
    let costs = if cost_lines.is_empty() {
        None
    } else {
        let mut c = vec![1.0; n];
        for (v, cost, lineno) in cost_lines {
            if !(cost.is_finite() && cost >= 1.0) {
                return Err(perr(lineno, format!("cost {cost} must be finite and >= 1")));
            }
            c[v] = cost;
        }
        Some(c)
    };
    let labels = if numeric {
        None
    } else {
        labels.extend((labels.len()..n).map(|v| v.to_string()));
        Some(labels)
    };
    Ok(EdgeList {
        n,
        pairs: pairs.into_iter().map(|(u, v, _)| (u, v)).collect(),
        costs,
        labels,
    })
}

impl EdgeList {
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(self.n, &self.pairs)
    }

    /// Graph with the file's costs, or unit costs when none were given.
    pub fn to_weighted(&self) -> Result<NodeWeightedGraph> {
        let g = self.to_graph()?;
        match &self.costs {
            Some(c) => NodeWeightedGraph::new(g, c.clone()),
            None => Ok(NodeWeightedGraph::unit(g)),
        }
    }

    pub fn to_directed(&self) -> Result<DirectedGraph> {
        DirectedGraph::new(self.n, &self.pairs)
    }
}

fn name(labels: Option<&[String]>, v: usize) -> String {
    labels.map_or_else(|| v.to_string(), |l| l[v].clone())
}

fn write_pairs(
    n: usize,
    pairs: impl Iterator<Item = (usize, usize)>,
    costs: Option<&[f64]>,
    labels: Option<&[String]>,
) -> String {
    let mut out = format!("n={n}\n");
    for (u, v) in pairs {
        let _ = writeln!(out, "{} {}", name(labels, u), name(labels, v));
    }
    if let Some(c) = costs {
        for (v, cost) in c.iter().enumerate() {
            let _ = writeln!(out, "w {} {}", name(labels, v), cost);
        }
    }
    out
}

/// Canonical text: header, edges `u < v` in lexicographic order, then costs.
pub fn write_graph(g: &Graph, costs: Option<&[f64]>, labels: Option<&[String]>) -> String {
    write_pairs(g.n(), g.edges(), costs, labels)
}

pub fn write_weighted(g: &NodeWeightedGraph, labels: Option<&[String]>) -> String {
    write_graph(g.graph(), Some(g.costs()), labels)
}

pub fn write_directed(g: &DirectedGraph, labels: Option<&[String]>) -> String {
    write_pairs(g.n(), g.arcs(), None, labels)
}

pub fn read_graph_file(path: &std::path::Path) -> Result<EdgeList> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}
