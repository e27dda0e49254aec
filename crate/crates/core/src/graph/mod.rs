//! Graph types, orderings and exact density arithmetic.

mod directed;
mod generate;
pub mod io;
mod weighted;

pub use directed::{DirectedDensity, DirectedGraph};
pub use generate::{
    gnp, planted_dense, planted_directed, uniform_costs, PlantedDirected, PlantedGraph,
};
pub use weighted::NodeWeightedGraph;

use crate::error::{DsgError, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering as CmpOrdering;

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Build a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(DsgError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(DsgError::VertexOutOfRange { vertex: w, n });
                }
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(DsgError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Complete graph, handy in tests and examples.
    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, &edges).expect("complete graph is simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Membership mask for a validated, nonempty set of distinct vertices.
    pub fn membership(&self, set: &[usize]) -> Result<Vec<bool>> {
        membership(self.n(), set)
    }

    /// Number of edges with both endpoints in `set`.
    pub fn induced_edges(&self, set: &[usize]) -> Result<u64> {
        let mask = self.membership(set)?;
        Ok(self.induced_edges_masked(set, &mask))
    }

    pub(crate) fn induced_edges_masked(&self, set: &[usize], mask: &[bool]) -> u64 {
        let twice: usize = set
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&u| mask[u]).count())
            .sum();
        (twice / 2) as u64
    }

    /// Exact density `|E(S)| / |S|`.
    pub fn density(&self, set: &[usize]) -> Result<Density> {
        let e = self.induced_edges(set)?;
        Ok(Density::new(e, set.len() as u64))
    }
}

pub(crate) fn membership(n: usize, set: &[usize]) -> Result<Vec<bool>> {
    if set.is_empty() {
        return Err(DsgError::EmptySet);
    }
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(DsgError::VertexOutOfRange { vertex: v, n });
        }
        if mask[v] {
            return Err(DsgError::InvalidParameter {
                name: "set",
                reason: format!("vertex {v} listed twice"),
            });
        }
        mask[v] = true;
    }
    Ok(mask)
}

/// Exact ratio `edges / size`. Comparison is by cross-multiplication, so
/// `2/4 == 1/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Density {
    pub edges: u64,
    pub size: u64,
}

impl Density {
    /// Panics if `size == 0`.
    pub fn new(edges: u64, size: u64) -> Self {
        assert!(size > 0, "density of an empty set");
        Density { edges, size }
    }

    pub fn zero() -> Self {
        Density { edges: 0, size: 1 }
    }

    pub fn value(&self) -> f64 {
        self.edges as f64 / self.size as f64
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == CmpOrdering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        (self.edges as u128 * other.size as u128).cmp(&(other.edges as u128 * self.size as u128))
    }
}

impl std::fmt::Display for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.edges, self.size)
    }
}

/// A permutation of `0..n`; `order()[i]` is the vertex at position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Ordering {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl Ordering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(DsgError::InvalidOrdering(format!(
                    "entry {v} at position {i} is out of range or repeated"
                )));
            }
            position[v] = i;
        }
        Ok(Ordering { order, position })
    }

    pub fn identity(n: usize) -> Self {
        Ordering {
            order: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    /// Vertices sorted by score, largest first, ties broken by ascending id.
    pub fn by_scores_desc(scores: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| {
            scores[b]
                .partial_cmp(&scores[a])
                .unwrap_or(CmpOrdering::Equal)
                .then(a.cmp(&b))
        });
        let mut position = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        Ordering { order, position }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }
}

impl TryFrom<Vec<usize>> for Ordering {
    type Error = DsgError;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Ordering::new(v)
    }
}

impl From<Ordering> for Vec<usize> {
    fn from(o: Ordering) -> Self {
        o.order
    }
}

/// `q(σ)_v`: number of neighbours of `v` placed before `v` in `σ`.
pub fn peel_counts(g: &Graph, sigma: &Ordering) -> Result<Vec<u64>> {
    check_len(g.n(), sigma)?;
    Ok((0..g.n())
        .map(|v| backward_degree(g.neighbors(v), sigma.positions(), v))
        .collect())
}

/// Count of `neighbors` positioned before `v`.
pub(crate) fn backward_degree(neighbors: &[usize], position: &[usize], v: usize) -> u64 {
    let pv = position[v];
    neighbors.iter().filter(|&&u| position[u] < pv).count() as u64
}

pub(crate) fn check_len(n: usize, sigma: &Ordering) -> Result<()> {
    if sigma.len() != n {
        return Err(DsgError::InvalidOrdering(format!(
            "ordering has {} entries for a graph on {n} vertices",
            sigma.len()
        )));
    }
    Ok(())
}

/// Densest prefix of `σ`, exact. Ties go to the shorter prefix.
pub fn best_prefix(g: &Graph, sigma: &Ordering) -> Result<(Vec<usize>, Density)> {
    let q = peel_counts(g, sigma)?;
    if g.n() == 0 {
        return Err(DsgError::EmptySet);
    }
    let mut best = (1, Density::new(q[sigma.order()[0]], 1));
    let mut edges = 0;
    for (i, &v) in sigma.order().iter().enumerate() {
        edges += q[v];
        let d = Density::new(edges, i as u64 + 1);
        if d > best.1 {
            best = (i + 1, d);
        }
    }
    Ok((sigma.order()[..best.0].to_vec(), best.1))
}

/// `⟨p, q(σ)⟩`.
pub fn ordering_cost(g: &Graph, p: &[f64], sigma: &Ordering) -> Result<f64> {
    let q = peel_counts(g, sigma)?;
    Ok(p.iter().zip(&q).map(|(a, &b)| a * b as f64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles_bridged() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(3, &[(1, 1)]), Err(DsgError::SelfLoop(1)));
        assert_eq!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(DsgError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(DsgError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn densities_of_small_graphs() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.density(&[0, 1, 2, 3]).unwrap(), Density::new(3, 2));
        let g = two_triangles_bridged();
        assert_eq!(g.density(&[0, 1, 2, 3, 4, 5]).unwrap(), Density::new(7, 6));
        assert_eq!(g.density(&[0, 1, 2]).unwrap().value(), 1.0);
        assert_eq!(g.density(&[]), Err(DsgError::EmptySet));
    }

    #[test]
    fn density_comparison_is_exact() {
        assert_eq!(Density::new(2, 4), Density::new(1, 2));
        assert!(Density::new(7, 6) > Density::new(1, 1));
        assert!(Density::new(9, 5) > Density::new(7, 4));
    }

    #[test]
    fn peel_counts_on_path() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sigma = Ordering::new(vec![1, 0, 2]).unwrap();
        assert_eq!(peel_counts(&g, &sigma).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn ordering_validation_and_ties() {
        assert!(Ordering::new(vec![0, 0]).is_err());
        assert!(Ordering::new(vec![0, 2]).is_err());
        let o = Ordering::by_scores_desc(&[1.0, 3.0, 1.0, 3.0]);
        assert_eq!(o.order(), &[1, 3, 0, 2]);
        assert_eq!(o.position(0), 2);
    }

    #[test]
    fn best_prefix_prefers_shorter_on_ties() {
        let g = two_triangles_bridged();
        let (s, d) = best_prefix(&g, &Ordering::identity(6)).unwrap();
        assert_eq!(d, Density::new(7, 6));
        assert_eq!(s.len(), 6);
        // Two disjoint triangles: both prefixes of size 3 and 6 have density 1.
        let h = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let (s, d) = best_prefix(&h, &Ordering::identity(6)).unwrap();
        assert_eq!((s, d), (vec![0, 1, 2], Density::new(1, 1)));
    }

    #[test]
    fn ordering_serde_roundtrip() {
        let o = Ordering::new(vec![2, 0, 1]).unwrap();
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(s, "[2,0,1]");
        assert_eq!(serde_json::from_str::<Ordering>(&s).unwrap(), o);
        assert!(serde_json::from_str::<Ordering>("[0,0]").is_err());
    }
}
