use super::membership;
use crate::error::{DsgError, Result};
use std::cmp::Ordering as CmpOrdering;

/// Simple directed graph. Antiparallel arcs are allowed, repeated arcs are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    m: usize,
}

impl DirectedGraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(u, v) in arcs {
            if u == v {
                return Err(DsgError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(DsgError::VertexOutOfRange { vertex: w, n });
                }
            }
            out[u].push(v);
            inc[v].push(u);
        }
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(DsgError::DuplicateEdge(u, w[0]));
            }
        }
        inc.iter_mut().for_each(|l| l.sort_unstable());
        Ok(DirectedGraph {
            out,
            inc,
            m: arcs.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    /// `|E(S, T)|`: arcs leaving `S` and entering `T`.
    pub fn arcs_between(&self, s: &[usize], t: &[usize]) -> Result<u64> {
        membership(self.n(), s)?;
        let tm = membership(self.n(), t)?;
        Ok(s.iter()
            .map(|&u| self.out[u].iter().filter(|&&v| tm[v]).count() as u64)
            .sum())
    }

    /// Exact `|E(S, T)| / sqrt(|S| |T|)`.
    pub fn directed_density(&self, s: &[usize], t: &[usize]) -> Result<DirectedDensity> {
        let e = self.arcs_between(s, t)?;
        Ok(DirectedDensity {
            arcs: e,
            s: s.len() as u64,
            t: t.len() as u64,
        })
    }
}

/// `arcs / sqrt(s t)`, compared exactly through the squares.
#[derive(Debug, Clone, Copy)]
pub struct DirectedDensity {
    pub arcs: u64,
    pub s: u64,
    pub t: u64,
}

impl DirectedDensity {
    pub fn value(&self) -> f64 {
        self.arcs as f64 / ((self.s * self.t) as f64).sqrt()
    }
}

impl PartialEq for DirectedDensity {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == CmpOrdering::Equal
    }
}

impl Eq for DirectedDensity {}

impl PartialOrd for DirectedDensity {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for DirectedDensity {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        let a = (self.arcs as u128).pow(2) * (other.s * other.t) as u128;
        let b = (other.arcs as u128).pow(2) * (self.s * self.t) as u128;
        a.cmp(&b)
    }
}
