use crate::error::{DsgError, Result};
use crate::graph::Ordering;
use serde::{Deserialize, Serialize};

/// A curator-published value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Ordering(Ordering),
    /// Sorted vertex ids.
    Set(Vec<usize>),
    Scalar(f64),
    Scalars(Vec<f64>),
    Index(usize),
}

/// Public messages, readable by every node and by the curator.
#[derive(Debug, Clone, Default)]
pub struct BulletinBoard {
    messages: Vec<(String, Payload)>,
    keep_history: bool,
}

impl BulletinBoard {
    pub(crate) fn new(keep_history: bool) -> Self {
        BulletinBoard {
            messages: Vec::new(),
            keep_history,
        }
    }

    pub(crate) fn post(&mut self, label: &str, payload: Payload) {
        if !self.keep_history {
            if let Some(slot) = self.messages.iter_mut().find(|(l, _)| l == label) {
                slot.1 = payload;
                return;
            }
        }
        self.messages.push((label.to_string(), payload));
    }

    /// Most recent message under `label`.
    pub fn latest(&self, label: &str) -> Option<&Payload> {
        self.messages
            .iter()
            .rev()
            .find(|(l, _)| l == label)
            .map(|(_, p)| p)
    }

    pub fn ordering(&self, label: &str) -> Option<&Ordering> {
        match self.latest(label) {
            Some(Payload::Ordering(o)) => Some(o),
            _ => None,
        }
    }

    pub fn set(&self, label: &str) -> Option<&[usize]> {
        match self.latest(label) {
            Some(Payload::Set(s)) => Some(s),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }
}

/// What one node can see while answering a query.
///
/// There is no path from a view to the private graph:
///
/// ```compile_fail
/// fn peek(view: &dsg_core::ledp::NodeView<'_>) -> usize {
///     view.graph().m()
/// }
/// ```
pub struct NodeView<'a> {
    node: usize,
    adjacency: &'a [usize],
    board: &'a BulletinBoard,
}

impl<'a> NodeView<'a> {
    pub(crate) fn new(node: usize, adjacency: &'a [usize], board: &'a BulletinBoard) -> Self {
        NodeView {
            node,
            adjacency,
            board,
        }
    }

    pub fn id(&self) -> usize {
        self.node
    }

    /// This node's own adjacency list, sorted.
    pub fn neighbors(&self) -> &'a [usize] {
        self.adjacency
    }

    pub fn degree(&self) -> usize {
        self.adjacency.len()
    }

    pub fn board(&self) -> &'a BulletinBoard {
        self.board
    }

    /// Adjacency of `other`; only a node's own list is in view.
    pub fn adjacency_of(&self, other: usize) -> Result<&'a [usize]> {
        if other == self.node {
            Ok(self.adjacency)
        } else {
            Err(DsgError::BoundaryViolation {
                node: self.node,
                other,
            })
        }
    }

    /// Number of neighbours inside a published sorted set.
    pub fn degree_into(&self, set: &[usize]) -> usize {
        self.adjacency
            .iter()
            .filter(|u| set.binary_search(u).is_ok())
            .count()
    }
}
