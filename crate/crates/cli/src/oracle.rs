//! Exact optima for the harness, cached by a hash of the canonical edge list.

use crate::error::CliResult;
use dsg_core::graph::io::{write_directed, write_graph, write_weighted};
use dsg_core::graph::{DirectedGraph, Graph, NodeWeightedGraph};
use dsg_core::oracle::{
    exact_directed_bruteforce, exact_dsg_flow, exact_weighted_bruteforce, BRUTE_FORCE_LIMIT,
    DIRECTED_BRUTE_FORCE_LIMIT,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// A loaded input graph, interpreted for the chosen algorithm.
#[derive(Debug, Clone)]
pub enum InputGraph {
    Undirected(Graph),
    Weighted(NodeWeightedGraph),
    Directed(DirectedGraph),
}

impl InputGraph {
    pub fn n(&self) -> usize {
        match self {
            InputGraph::Undirected(g) => g.n(),
            InputGraph::Weighted(g) => g.n(),
            InputGraph::Directed(g) => g.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            InputGraph::Undirected(g) => g.m(),
            InputGraph::Weighted(g) => g.graph().m(),
            InputGraph::Directed(g) => g.m(),
        }
    }

    fn canonical(&self) -> String {
        match self {
            InputGraph::Undirected(g) => format!("undirected\n{}", write_graph(g, None, None)),
            InputGraph::Weighted(g) => format!("weighted\n{}", write_weighted(g, None)),
            InputGraph::Directed(g) => format!("directed\n{}", write_directed(g, None)),
        }
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub lambda_star: f64,
    /// Exact `edges/size` for undirected inputs.
    pub rational: Option<(u64, u64)>,
    pub size: usize,
}

/// Exact optimum, or `None` when the input is too large for the exhaustive
/// weighted and directed searches.
pub fn exact_optimum(g: &InputGraph) -> CliResult<Option<Optimum>> {
    Ok(match g {
        InputGraph::Undirected(g) => {
            let (set, d) = exact_dsg_flow(g)?;
            Some(Optimum {
                lambda_star: d.value(),
                rational: Some((d.edges, d.size)),
                size: set.len(),
            })
        }
        InputGraph::Weighted(g) if g.n() <= BRUTE_FORCE_LIMIT => {
            let (set, d) = exact_weighted_bruteforce(g)?;
            Some(Optimum {
                lambda_star: d,
                rational: None,
                size: set.len(),
            })
        }
        InputGraph::Directed(g) if g.n() <= DIRECTED_BRUTE_FORCE_LIMIT => {
            let (s, t, d) = exact_directed_bruteforce(g)?;
            Some(Optimum {
                lambda_star: d.value(),
                rational: None,
                size: s.len() + t.len(),
            })
        }
        _ => None,
    })
}

/// Optima keyed by graph hash, optionally persisted as JSON.
#[derive(Debug, Default)]
pub struct OracleCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, Option<Optimum>>,
    dirty: bool,
}

impl OracleCache {
    pub fn open(path: Option<&Path>) -> CliResult<Self> {
        let entries = match path {
            Some(p) if p.exists() => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            _ => BTreeMap::new(),
        };
        Ok(OracleCache {
            path: path.map(Path::to_path_buf),
            entries,
            dirty: false,
        })
    }

    pub fn get(&mut self, g: &InputGraph) -> CliResult<Option<Optimum>> {
        let key = g.hash();
        if let Some(hit) = self.entries.get(&key) {
            log::debug!("oracle cache hit for {key}");
            return Ok(hit.clone());
        }
        let opt = exact_optimum(g)?;
        self.entries.insert(key, opt.clone());
        self.dirty = true;
        Ok(opt)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn save(&mut self) -> CliResult<()> {
        if let (Some(p), true) = (&self.path, self.dirty) {
            std::fs::write(p, serde_json::to_string_pretty(&self.entries)?)?;
            self.dirty = false;
        }
        Ok(())
    }
}
