//! Exact Pareto frontier of `(c, b)` over all tree-restricted shortcuts of a
//! tiny instance, where `c` counts shortcut-subgraph assignment.
//!
//! Every subset of tree edges is tried for every part. Blocks never increase
//! when edges are added, so for a fixed `b` only the inclusion-minimal
//! subsets reaching `b` matter, and loads are monotone too. The minimum `c`
//! per `b` then comes from a backtracking search over one minimal subset per
//! part.


use serde::{Deserialize, Serialize};

use crate::graph::{Instance, NodeId, TreeEdge};

use super::{block_count, OracleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_tree_edges: usize,
    pub max_parts: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_tree_edges: 14, max_parts: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub c: usize,
    pub b: usize,
    /// Per part, the child endpoints of the witness tree edges.
    pub witness: Vec<Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub instance_hash: String,
    /// Sorted by increasing `b` (and so strictly decreasing `c`).
    pub pareto: Vec<ParetoPoint>,
}

impl Certificate {
    /// Smallest certified congestion for block parameter `b`.
    pub fn min_c(&self, b: usize) -> Option<usize> {
        self.pareto.iter().filter(|p| p.b <= b).map(|p| p.c).min()
    }
}

pub fn exhaustive_best_shortcut(instance: &Instance, limits: SearchLimits) -> Result<Certificate, OracleError> {
    let tree = &instance.tree;
    let edges: Vec<TreeEdge> = tree.edges().collect();
    let m = edges.len();
    let parts = instance.partition.parts();
    if m > limits.max_tree_edges || parts.len() > limits.max_parts {
        return Err(OracleError::TooLarge {
            tree_edges: m,
            parts: parts.len(),
            max_edges: limits.max_tree_edges,
            max_parts: limits.max_parts,
        });
    }
    let masks = 1usize << m;
    let subset = |mask: usize| (0..m).filter(move |k| mask >> k & 1 == 1).map(|k| edges[k]);
    let blocks: Vec<Vec<usize>> = parts
        .iter()
        .map(|members| (0..masks).map(|mask| block_count(tree, members, subset(mask))).collect())
        .collect();
    let b_max = parts.iter().map(Vec::len).max().unwrap_or(1);

    let mut pareto: Vec<ParetoPoint> = Vec::new();
    for b in 1..=b_max {
        let minimal: Vec<Vec<usize>> = blocks
            .iter()
            .map(|bl| {
                (0..masks)
                    .filter(|&mask| bl[mask] <= b && (0..m).all(|k| mask >> k & 1 == 0 || bl[mask & !(1 << k)] > b))
                    .collect()
            })
            .collect();
        let mut search = Search { m, minimal: &minimal, best: parts.len() + 1, best_choice: Vec::new(), choice: Vec::new() };
        search.go(0, &mut vec![0; m]);
        let c = search.best;
        if pareto.last().is_none_or(|p| c < p.c) {
            let witness = search
                .best_choice
                .iter()
                .map(|&mask| subset(mask).map(|e| e.0).collect())
                .collect();
            pareto.push(ParetoPoint { c, b, witness });
        }
    }
    Ok(Certificate { instance_hash: super::instance_hash(instance), pareto })
}

struct Search<'a> {
    m: usize,
    minimal: &'a [Vec<usize>],
    best: usize,
    best_choice: Vec<usize>,
    choice: Vec<usize>,
}

impl Search<'_> {
    fn go(&mut self, part: usize, load: &mut [usize]) {
        let current = load.iter().copied().max().unwrap_or(0);
        if current >= self.best {
            return;
        }
        if part == self.minimal.len() {
            self.best = current;
            self.best_choice = self.choice.clone();
            return;
        }
        for &mask in &self.minimal[part] {
            for k in 0..self.m {
                load[k] += mask >> k & 1;
            }
            self.choice.push(mask);
            self.go(part + 1, load);
            self.choice.pop();
            for k in 0..self.m {
                load[k] -= mask >> k & 1;
            }
        }
    }
}
