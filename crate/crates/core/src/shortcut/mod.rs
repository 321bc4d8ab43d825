//! Tree-restricted shortcuts and their quality measures.

mod quality;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, PartId, RootedTree, TreeEdge};

pub use quality::{block_components, measure_congestion, measure_dilation, measure_quality, CongestionReport, QualityReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShortcutError {
    #[error("edge {edge} is not a tree edge")]
    NotTreeEdge { edge: EdgeId },
    #[error("node {0} has no parent edge")]
    NoParentEdge(usize),
    #[error("part {part} does not exist ({count} parts)")]
    UnknownPart { part: PartId, count: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Per-part sets `H_i` of tree edges. Tree edges are named by their child
/// endpoint, so every stored edge is a tree edge by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortcut {
    node_count: usize,
    root: usize,
    parts: Vec<BTreeSet<TreeEdge>>,
}

impl Shortcut {
    pub fn empty(tree: &RootedTree, part_count: usize) -> Self {
        Self { node_count: tree.node_count(), root: tree.root(), parts: vec![BTreeSet::new(); part_count] }
    }

    /// Builds a shortcut from per-part tree-edge lists.
    pub fn from_tree_edges(tree: &RootedTree, parts: Vec<Vec<TreeEdge>>) -> Result<Self, ShortcutError> {
        let mut s = Self::empty(tree, parts.len());
        for (i, edges) in parts.into_iter().enumerate() {
            for e in edges {
                s.insert(i, e)?;
            }
        }
        Ok(s)
    }

    /// Builds a shortcut from per-part graph edge indices; rejects non-tree edges.
    pub fn from_graph_edges(graph: &Graph, tree: &RootedTree, parts: &[Vec<EdgeId>]) -> Result<Self, ShortcutError> {
        let mut s = Self::empty(tree, parts.len());
        for (i, edges) in parts.iter().enumerate() {
            for &e in edges {
                s.insert_graph_edge(graph, tree, i, e)?;
            }
        }
        Ok(s)
    }

    pub fn insert(&mut self, part: PartId, edge: TreeEdge) -> Result<(), ShortcutError> {
        self.check_part(part)?;
        if edge.child() >= self.node_count || edge.child() == self.root {
            return Err(ShortcutError::NoParentEdge(edge.child()));
        }
        self.parts[part].insert(edge);
        Ok(())
    }

    pub fn insert_graph_edge(&mut self, graph: &Graph, tree: &RootedTree, part: PartId, edge: EdgeId) -> Result<(), ShortcutError> {
        if edge >= graph.edge_count() {
            return Err(ShortcutError::NotTreeEdge { edge });
        }
        let e = graph.edge(edge);
        let te = tree.tree_edge(e.u, e.v).ok_or(ShortcutError::NotTreeEdge { edge })?;
        self.insert(part, te)
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self, part: PartId) -> &BTreeSet<TreeEdge> {
        &self.parts[part]
    }

    pub fn contains(&self, part: PartId, edge: TreeEdge) -> bool {
        self.parts[part].contains(&edge)
    }

    pub fn check_part(&self, part: PartId) -> Result<(), ShortcutError> {
        if part < self.parts.len() {
            Ok(())
        } else {
            Err(ShortcutError::UnknownPart { part, count: self.parts.len() })
        }
    }

    /// Per-part union with another shortcut over the same tree and partition.
    pub fn union(&self, other: &Shortcut) -> Shortcut {
        assert_eq!(self.parts.len(), other.parts.len(), "shortcuts over different partitions");
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a.union(b).copied().collect()).collect();
        Shortcut { parts, ..self.clone() }
    }

    /// Replaces `H_part` with the other shortcut's edges for that part.
    pub fn adopt(&mut self, other: &Shortcut, part: PartId) {
        self.parts[part] = other.parts[part].clone();
    }

    /// One line per part: the graph edge indices of `H_i`, ascending.
    pub fn to_text(&self, tree: &RootedTree) -> String {
        let mut out = String::new();
        for part in &self.parts {
            let mut ids: Vec<EdgeId> = part.iter().map(|e| tree.parent_edge(e.child()).expect("non-root child")).collect();
            ids.sort_unstable();
            let line: Vec<String> = ids.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", line.join(" ")).expect("String write");
        }
        out
    }

    /// Parses [`Shortcut::to_text`] output; the line count must equal `part_count`.
    pub fn from_text(text: &str, graph: &Graph, tree: &RootedTree, part_count: usize) -> Result<Self, ShortcutError> {
        let lines: Vec<&str> = text.lines().collect();
        let lines = match lines.last() {
            Some(l) if l.trim().is_empty() && lines.len() > part_count => &lines[..lines.len() - 1],
            _ => &lines[..],
        };
        if lines.len() != part_count {
            return Err(ShortcutError::Syntax { line: lines.len(), message: format!("expected {part_count} part lines") });
        }
        let mut parts = Vec::with_capacity(part_count);
        for (i, line) in lines.iter().enumerate() {
            let ids = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<EdgeId>()
                        .map_err(|_| ShortcutError::Syntax { line: i + 1, message: format!("invalid edge index `{t}`") })
                })
                .collect::<Result<Vec<_>, _>>()?;
            parts.push(ids);
        }
        Self::from_graph_edges(graph, tree, &parts)
    }
}
