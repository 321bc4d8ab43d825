use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use super::{Graph, NodeId, PartId};

/// Disjoint, individually connected node sets. Nodes may belong to no part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Vec<NodeId>>,
    part_of: Vec<Option<PartId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartViolation {
    Empty { part: PartId },
    NodeOutOfRange { part: PartId, node: NodeId },
    Overlap { part: PartId, node: NodeId, other: PartId },
    Disconnected { part: PartId },
}

impl PartViolation {
    pub fn part(&self) -> PartId {
        match *self {
            Self::Empty { part }
            | Self::NodeOutOfRange { part, .. }
            | Self::Overlap { part, .. }
            | Self::Disconnected { part } => part,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub violations: Vec<PartViolation>,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violating_parts(&self) -> Vec<PartId> {
        let mut parts: Vec<_> = self.violations.iter().map(PartViolation::part).collect();
        parts.sort_unstable();
        parts.dedup();
        parts
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid partition: {violations:?}")]
pub struct PartitionError {
    pub violations: Vec<PartViolation>,
}

/// Checks that every part is non-empty, in range, disjoint from the others
/// and induces a connected subgraph.
pub fn validate_partition(graph: &Graph, parts: &[Vec<NodeId>]) -> PartitionReport {
    let n = graph.node_count();
    let mut owner: Vec<Option<PartId>> = vec![None; n];
    let mut violations = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            violations.push(PartViolation::Empty { part: i });
            continue;
        }
        let mut in_range = true;
        for &v in part {
            if v >= n {
                violations.push(PartViolation::NodeOutOfRange { part: i, node: v });
                in_range = false;
                continue;
            }
            match owner[v] {
                Some(other) => violations.push(PartViolation::Overlap { part: i, node: v, other }),
                None => owner[v] = Some(i),
            }
        }
        if in_range && !induces_connected(graph, part) {
            violations.push(PartViolation::Disconnected { part: i });
        }
    }
    PartitionReport { violations }
}

fn induces_connected(graph: &Graph, part: &[NodeId]) -> bool {
    let mut member = vec![false; graph.node_count()];
    for &v in part {
        member[v] = true;
    }
    let mut seen = vec![false; graph.node_count()];
    let mut queue = VecDeque::from([part[0]]);
    seen[part[0]] = true;
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        for &(y, _) in graph.neighbors(x) {
            if member[y] && !seen[y] {
                seen[y] = true;
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    let mut distinct = part.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    reached == distinct.len()
}

impl Partition {
    pub fn new(graph: &Graph, parts: Vec<Vec<NodeId>>) -> Result<Self, PartitionError> {
        let report = validate_partition(graph, &parts);
        if !report.is_valid() {
            return Err(PartitionError { violations: report.violations });
        }
        let mut part_of = vec![None; graph.node_count()];
        let parts: Vec<Vec<NodeId>> = parts
            .into_iter()
            .enumerate()
            .map(|(i, mut p)| {
                p.sort_unstable();
                for &v in &p {
                    part_of[v] = Some(i);
                }
                p
            })
            .collect();
        Ok(Self { parts, part_of })
    }

    /// Every node in its own part, part ID = node ID.
    pub fn singletons(n: usize) -> Self {
        Self { parts: (0..n).map(|v| vec![v]).collect(), part_of: (0..n).map(Some).collect() }
    }

    /// Groups nodes by label; dense part IDs follow ascending label order.
    pub fn from_labels(graph: &Graph, labels: &[Option<usize>]) -> Result<Self, PartitionError> {
        let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for (v, label) in labels.iter().enumerate() {
            if let Some(l) = label {
                groups.entry(*l).or_default().push(v);
            }
        }
        Self::new(graph, groups.into_values().collect())
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.part_of.len()
    }

    pub fn parts(&self) -> &[Vec<NodeId>] {
        &self.parts
    }

    pub fn part(&self, i: PartId) -> &[NodeId] {
        &self.parts[i]
    }

    pub fn part_of(&self, v: NodeId) -> Option<PartId> {
        self.part_of[v]
    }

    pub fn labels(&self) -> &[Option<PartId>] {
        &self.part_of
    }
}
