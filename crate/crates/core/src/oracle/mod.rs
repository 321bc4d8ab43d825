//! Centralized reference computations for cross-checking the distributed
//! algorithms. Nothing here calls into `construction`, `routing` or the
//! quality measurements of `shortcut`; components are labelled with a plain
//! DFS and trees are walked through parent pointers only.

mod exhaustive;

use std::collections::BTreeSet;

use petgraph::algo::min_spanning_tree;
use petgraph::data::Element;
use petgraph::graph::UnGraph;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{write_graph, write_partition, EdgeId, Graph, Instance, NodeId, PartId, RootedTree, TreeEdge, Weight};

pub use exhaustive::{exhaustive_best_shortcut, Certificate, ParetoPoint, SearchLimits};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive search: {tree_edges} tree edges, {parts} parts (limits {max_edges}, {max_parts})")]
    TooLarge { tree_edges: usize, parts: usize, max_edges: usize, max_parts: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0} has no weight")]
    MissingWeight(EdgeId),
}

/// Hex SHA-256 of the graph file, partition file and root.
pub fn instance_hash(instance: &Instance) -> String {
    let mut h = Sha256::new();
    h.update(write_graph(&instance.graph).as_bytes());
    h.update(write_partition(&instance.partition).as_bytes());
    h.update(instance.tree.root().to_le_bytes());
    hex::encode(h.finalize())
}

/// Components of `(V, edges)` by iterative DFS; returns one label per node.
pub fn component_labels(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if label[y] == usize::MAX {
                    label[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Number of components of `(V, H_i)` that contain a node of `members`.
pub fn block_count(tree: &RootedTree, members: &[NodeId], h: impl IntoIterator<Item = TreeEdge>) -> usize {
    let edges = h.into_iter().map(|e| (e.0, tree.parent(e.0).expect("tree edge")));
    let label = component_labels(tree.node_count(), edges);
    members.iter().map(|&v| label[v]).collect::<BTreeSet<_>>().len()
}

/// Per tree edge (indexed by child node), the number of parts whose edge set
/// contains it.
pub fn assignment_load(n: usize, parts: &[BTreeSet<TreeEdge>]) -> Vec<usize> {
    let mut load = vec![0; n];
    for h in parts {
        for e in h {
            load[e.0] += 1;
        }
    }
    load
}

/// For every tree edge (indexed by child node; the root's slot stays empty)
/// the parts it can see: a node `v` is seen by `e` when `v` is in `e`'s
/// subtree and no edge strictly between `e` and `v` is in `unusable`.
pub fn replay_visibility(tree: &RootedTree, labels: &[Option<PartId>], unusable: &BTreeSet<TreeEdge>) -> Vec<BTreeSet<PartId>> {
    let mut seen = vec![BTreeSet::new(); tree.node_count()];
    for (v, label) in labels.iter().enumerate() {
        let Some(i) = *label else { continue };
        let mut x = v;
        while let Some(p) = tree.parent(x) {
            seen[x].insert(i);
            if unusable.contains(&TreeEdge(x)) {
                break;
            }
            x = p;
        }
    }
    seen
}

/// Sequential replay of the bottom-up core: an edge becomes unusable when
/// `too_many(count)` holds for the number of `counted` parts it sees through
/// usable edges. Returns the unusable set and, for usable edges, the
/// assignment of every labelled part visible through usable edges.
pub fn reference_core(
    tree: &RootedTree,
    labels: &[Option<PartId>],
    counted: impl Fn(PartId) -> bool,
    too_many: impl Fn(usize) -> bool,
) -> (BTreeSet<TreeEdge>, Vec<BTreeSet<PartId>>) {
    let n = tree.node_count();
    let mut unusable = BTreeSet::new();
    let counted_labels: Vec<Option<PartId>> = labels.iter().map(|l| l.filter(|&i| counted(i))).collect();
    // deepest first, so every child edge is settled before its parent edge
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(tree.depth(v)));
    let mut upward: Vec<BTreeSet<PartId>> = vec![BTreeSet::new(); n];
    for &v in &order {
        let mut set: BTreeSet<PartId> = counted_labels[v].into_iter().collect();
        for &c in tree.children(v) {
            if !unusable.contains(&TreeEdge(c)) {
                set.extend(upward[c].iter().copied());
            }
        }
        if tree.parent(v).is_some() && too_many(set.len()) {
            unusable.insert(TreeEdge(v));
        }
        upward[v] = set;
    }
    let mut visible = replay_visibility(tree, labels, &unusable);
    for e in &unusable {
        visible[e.0].clear();
    }
    (unusable, visible)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mst {
    pub edges: BTreeSet<EdgeId>,
    pub weight: Weight,
}

/// Kruskal via petgraph, with ties broken by `(weight, min endpoint, max endpoint)`.
pub fn kruskal(graph: &Graph) -> Result<Mst, OracleError> {
    let mut g: UnGraph<(), (Weight, NodeId, NodeId, EdgeId)> = UnGraph::with_capacity(graph.node_count(), graph.edge_count());
    for _ in 0..graph.node_count() {
        g.add_node(());
    }
    for (id, e) in graph.edges().iter().enumerate() {
        let w = e.weight.ok_or(OracleError::MissingWeight(id))?;
        g.add_edge((e.u as u32).into(), (e.v as u32).into(), (w, e.u.min(e.v), e.u.max(e.v), id));
    }
    let mut edges = BTreeSet::new();
    let mut weight = 0;
    for el in min_spanning_tree(&g) {
        if let Element::Edge { weight: (w, _, _, id), .. } = el {
            edges.insert(id);
            weight += w;
        }
    }
    if edges.len() + 1 != graph.node_count() {
        return Err(OracleError::Disconnected);
    }
    Ok(Mst { edges, weight })
}
