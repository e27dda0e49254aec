use super::{membership, Graph};
use crate::error::{invalid, Result};

/// Undirected graph with a public cost `c_v >= 1` on every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeightedGraph {
    graph: Graph,
    costs: Vec<f64>,
    c_max: f64,
}

impl NodeWeightedGraph {
    pub fn new(graph: Graph, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != graph.n() {
            return Err(invalid(
                "costs",
                format!("{} costs for {} vertices", costs.len(), graph.n()),
            ));
        }
        if let Some((v, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c >= 1.0))
        {
            return Err(invalid(
                "costs",
                format!("cost of vertex {v} is {c}, expected a finite value >= 1"),
            ));
        }
        let c_max = costs.iter().copied().fold(1.0, f64::max);
        Ok(NodeWeightedGraph {
            graph,
            costs,
            c_max,
        })
    }

    pub fn unit(graph: Graph) -> Self {
        let costs = vec![1.0; graph.n()];
        NodeWeightedGraph {
            graph,
            costs,
            c_max: 1.0,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn cost_of(&self, set: &[usize]) -> Result<f64> {
        membership(self.n(), set)?;
        Ok(set.iter().map(|&v| self.costs[v]).sum())
    }

    /// `|E(S)| / c(S)`.
    pub fn weighted_density(&self, set: &[usize]) -> Result<f64> {
        let e = self.graph.induced_edges(set)?;
        Ok(e as f64 / set.iter().map(|&v| self.costs[v]).sum::<f64>())
    }
}
