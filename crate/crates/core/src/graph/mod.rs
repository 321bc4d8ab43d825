//! Network topology, spanning trees and node partitions.
//!
//! Node IDs are dense integers `0..n`. Edges are stored with their endpoints
//! normalized so that `u < v`; the position of an edge in [`Graph::edges`] is
//! its [`EdgeId`] and matches the line order of the graph file format.

mod io;
mod partition;
mod tree;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{parse_graph, parse_partition, write_graph, write_partition, ParseError};
pub use partition::{validate_partition, Partition, PartitionError, PartitionReport, PartViolation};
pub use tree::{bfs_tree, RootedTree, TreeEdge};

pub type NodeId = usize;
pub type EdgeId = usize;
pub type PartId = usize;
pub type Weight = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge {edge} references node {node}, but n = {n}")]
    NodeOutOfRange { edge: usize, node: NodeId, n: usize },
    #[error("edge {edge} is a self-loop on node {node}")]
    SelfLoop { edge: usize, node: NodeId },
    #[error("edge {edge} duplicates edge {first} between {u} and {v}")]
    ParallelEdge { edge: usize, first: usize, u: NodeId, v: NodeId },
    #[error("graph is disconnected: node {unreachable} is unreachable from node {from}")]
    Disconnected { from: NodeId, unreachable: NodeId },
    #[error("node {node} is out of range (n = {n})")]
    BadNode { node: NodeId, n: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Option<Weight>,
}

impl Edge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(NodeId, EdgeId)>>,
    index: HashMap<(NodeId, NodeId), EdgeId>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and unknown nodes.
    /// Connectivity is not required here; consumers that need it check it.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId, Option<Weight>)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut stored = Vec::new();
        let mut index = HashMap::new();
        let mut adj = vec![Vec::new(); n];
        for (i, (a, b, weight)) in edges.into_iter().enumerate() {
            for node in [a, b] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { edge: i, node, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { edge: i, node: a });
            }
            let (u, v) = (a.min(b), a.max(b));
            if let Some(&first) = index.get(&(u, v)) {
                return Err(GraphError::ParallelEdge { edge: i, first, u, v });
            }
            index.insert((u, v), i);
            adj[u].push((v, i));
            adj[v].push((u, i));
            stored.push(Edge { u, v, weight });
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges: stored, adj, index })
    }

    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self, GraphError> {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, None)))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Neighbors of `v` in ascending ID order, paired with the connecting edge.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn are_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.edge_between(a, b).is_some()
    }

    pub fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::BadNode { node: v, n: self.n })
        }
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0);
            for &(y, _) in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn check_connected(&self) -> Result<(), GraphError> {
        match self.bfs_distances(0).iter().position(Option::is_none) {
            Some(unreachable) => Err(GraphError::Disconnected { from: 0, unreachable }),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.check_connected().is_ok()
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_some())
    }

    pub fn has_distinct_weights(&self) -> bool {
        let mut weights: Vec<_> = self.edges.iter().map(|e| e.weight).collect();
        weights.sort_unstable();
        weights.windows(2).all(|w| w[0] != w[1]) && self.is_weighted()
    }
}

/// A graph together with the spanning tree and partition the shortcut
/// machinery works on.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub tree: RootedTree,
    pub partition: Partition,
}

impl Instance {
    pub fn new(graph: Graph, tree: RootedTree, partition: Partition) -> Self {
        assert_eq!(graph.node_count(), tree.node_count(), "tree does not match graph");
        assert_eq!(graph.node_count(), partition.node_count(), "partition does not match graph");
        Self { graph, tree, partition }
    }

    /// BFS tree from `root` plus the given partition.
    pub fn with_bfs_tree(graph: Graph, root: NodeId, partition: Partition) -> Result<Self, GraphError> {
        let tree = bfs_tree(&graph, root)?;
        Ok(Self::new(graph, tree, partition))
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Depth of the spanning tree.
    pub fn depth(&self) -> u32 {
        self.tree.max_depth()
    }

    pub fn part_count(&self) -> usize {
        self.partition.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_parallel_edges() {
        assert!(matches!(Graph::unweighted(2, [(1, 1)]), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(
            Graph::unweighted(3, [(0, 1), (1, 0)]),
            Err(GraphError::ParallelEdge { edge: 1, first: 0, .. })
        ));
        assert!(matches!(Graph::unweighted(2, [(0, 2)]), Err(GraphError::NodeOutOfRange { .. })));
        assert_eq!(Graph::unweighted(0, []), Err(GraphError::Empty));
    }

    #[test]
    fn adjacency_is_sorted_and_indexed() {
        let g = Graph::unweighted(4, [(3, 0), (0, 1), (2, 0)]).unwrap();
        let ns: Vec<_> = g.neighbors(0).iter().map(|&(v, _)| v).collect();
        assert_eq!(ns, vec![1, 2, 3]);
        assert_eq!(g.edge_between(0, 3), Some(0));
        assert_eq!(g.edge(0), &Edge { u: 0, v: 3, weight: None });
        assert!(g.is_connected());
    }

    #[test]
    fn detects_disconnection() {
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.check_connected(), Err(GraphError::Disconnected { from: 0, unreachable: 2 }));
    }

    #[test]
    fn distinct_weights() {
        let g = Graph::new(3, [(0, 1, Some(1)), (1, 2, Some(2)), (0, 2, Some(3))]).unwrap();
        assert!(g.has_distinct_weights());
        let g = Graph::new(3, [(0, 1, Some(1)), (1, 2, Some(1))]).unwrap();
        assert!(!g.has_distinct_weights());
    }
}
