//! Per-part communication over a shortcut.
//!
//! Each part's block components (components of `(V, H_i)` meeting `P_i`)
//! form one subtree family of load at most the shortcut congestion. A
//! superstep is one exchange round over all graph edges followed by an
//! aggregate inside every block (convergecast to the block root, then
//! broadcast back), so one superstep costs at most `2(D + c) + 1` rounds.
//! Operations run a fixed number of supersteps derived from the block bound.
//!
//! Operations are sequences of engine runs. Between runs the driver only
//! moves each node's own output into that node's next input; the traces are
//! concatenated.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use crate::congest::{EngineConfig, RoundTrace};
use crate::graph::{Instance, NodeId, PartId, TreeEdge};
use crate::shortcut::Shortcut;

use super::{exchange, multi_broadcast, multi_convergecast, AggOp, Packet, RoutingError, Subtree, SubtreeFamily};

#[derive(Debug, Clone)]
pub struct Leaders {
    /// Leader as known by each part node.
    pub per_node: Vec<Option<NodeId>>,
    pub trace: RoundTrace,
}

impl Leaders {
    /// Leader per part, read from the part's first node.
    pub fn per_part(&self, instance: &Instance) -> Vec<Option<NodeId>> {
        instance.partition.parts().iter().map(|p| self.per_node[p[0]]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PartAggregate {
    /// Aggregate as held by each part's leader node.
    pub per_part: Vec<Option<u64>>,
    pub trace: RoundTrace,
}

#[derive(Debug, Clone)]
pub struct PartMessages {
    pub per_node: Vec<Option<u64>>,
    pub trace: RoundTrace,
}

#[derive(Debug, Clone)]
pub struct BlockVerdicts {
    /// Whether each part node considers its part good.
    pub per_node: Vec<Option<bool>>,
    pub good: Vec<bool>,
    pub trace: RoundTrace,
}

/// BFS over a part's supergraph: level of each node's block and, at the
/// block's link node, the neighbor in the parent block.
struct SuperBfs {
    level: Vec<Option<usize>>,
    link: Vec<Option<NodeId>>,
    uplink: Vec<Option<NodeId>>,
}

pub struct ShortcutRouter<'a> {
    instance: &'a Instance,
    config: EngineConfig,
    family: SubtreeFamily,
    block_of: Vec<Option<usize>>,
}

impl<'a> ShortcutRouter<'a> {
    pub fn new(instance: &'a Instance, shortcut: &Shortcut, config: &EngineConfig) -> Result<Self, RoutingError> {
        let tree = &instance.tree;
        let partition = &instance.partition;
        let mut subtrees = Vec::new();
        let mut block_of = vec![None; instance.node_count()];
        for (i, part) in partition.parts().iter().enumerate() {
            let edges: Vec<TreeEdge> = shortcut.edges(i).iter().copied().collect();
            let mut index: HashMap<NodeId, usize> = HashMap::new();
            let mut nodes = Vec::new();
            for &e in &edges {
                for x in [e.child(), tree.parent(e.child()).expect("non-root")] {
                    index.entry(x).or_insert_with(|| {
                        nodes.push(x);
                        nodes.len() - 1
                    });
                }
            }
            let mut uf = UnionFind::<usize>::new(nodes.len());
            for &e in &edges {
                uf.union(index[&e.child()], index[&tree.parent(e.child()).expect("non-root")]);
            }
            let mut by_component: HashMap<usize, usize> = HashMap::new();
            for &v in part {
                let component = index.get(&v).map(|&k| uf.find(k));
                let block = match component {
                    None => {
                        subtrees.push(Subtree { key: i, root: v, edges: Vec::new() });
                        subtrees.len() - 1
                    }
                    Some(c) => *by_component.entry(c).or_insert_with(|| {
                        let members: Vec<NodeId> = nodes.iter().copied().filter(|&x| uf.find(index[&x]) == c).collect();
                        let root = *members.iter().min_by_key(|&&x| (tree.depth(x), x)).expect("non-empty component");
                        let block_edges = edges.iter().copied().filter(|e| uf.find(index[&e.child()]) == c).collect();
                        subtrees.push(Subtree { key: i, root, edges: block_edges });
                        subtrees.len() - 1
                    }),
                };
                block_of[v] = Some(block);
            }
        }
        let family = SubtreeFamily::new(tree, subtrees, u32::MAX)?;
        Ok(Self { instance, config: config.clone(), family, block_of })
    }

    /// Maximum number of blocks sharing a tree edge; at most the shortcut congestion.
    pub fn congestion(&self) -> u32 {
        self.family.load()
    }

    pub fn family(&self) -> &SubtreeFamily {
        &self.family
    }

    pub fn block_of(&self, v: NodeId) -> Option<usize> {
        self.block_of[v]
    }

    fn part_of(&self, v: NodeId) -> Option<PartId> {
        self.instance.partition.part_of(v)
    }

    fn trace(&self) -> RoundTrace {
        let budget = self.config.wire_format(self.instance.node_count()).budget;
        RoundTrace::empty(budget, self.config.log_messages)
    }

    /// Aggregates the part nodes' values inside every block; each part node
    /// receives its block's result. Takes at most `2(D + c)` rounds.
    pub fn block_aggregate(&self, values: &[Option<u64>], op: AggOp) -> Result<(Vec<Option<u64>>, RoundTrace), RoutingError> {
        let inst = self.instance;
        let up = multi_convergecast(
            &inst.graph,
            &inst.tree,
            &self.family,
            |i, v| if self.part_of(v) == Some(self.family.subtree(i).key) { values[v] } else { None },
            op,
            &self.config,
        )?;
        let down = multi_broadcast(&inst.graph, &inst.tree, &self.family, |i| up.results[i], &self.config)?;
        let mut trace = up.trace;
        trace.then(&down.trace);
        let result = (0..inst.node_count()).map(|v| self.block_of[v].and_then(|b| down.received[v][&b])).collect();
        Ok((result, trace))
    }

    fn exchange(&self, outgoing: Vec<Vec<(NodeId, Packet)>>, trace: &mut RoundTrace) -> Result<Vec<Vec<(NodeId, Packet)>>, RoutingError> {
        let (received, t) = exchange(&self.instance.graph, outgoing, &self.config)?;
        trace.then(&t);
        Ok(received)
    }

    fn to_all_neighbors(&self, v: NodeId, p: Packet) -> Vec<(NodeId, Packet)> {
        self.instance.graph.neighbors(v).iter().map(|&(w, _)| (w, p)).collect()
    }

    /// `steps` supersteps in which block values spread to neighboring blocks
    /// with the same label and are combined with `op`.
    fn flood(
        &self,
        labels: &[Option<usize>],
        mut state: Vec<Option<u64>>,
        steps: usize,
        op: AggOp,
        trace: &mut RoundTrace,
    ) -> Result<Vec<Option<u64>>, RoutingError> {
        let n = self.instance.node_count();
        for _ in 0..steps {
            let outgoing = (0..n)
                .map(|v| match (labels[v], state[v]) {
                    (Some(label), Some(x)) => self.to_all_neighbors(v, Packet { label, value: Some(x) }),
                    _ => Vec::new(),
                })
                .collect();
            let received = self.exchange(outgoing, trace)?;
            let merged: Vec<Option<u64>> = (0..n)
                .map(|v| {
                    received[v]
                        .iter()
                        .filter(|(_, p)| labels[v] == Some(p.label))
                        .fold(state[v], |acc, (_, p)| op.combine(acc, p.value))
                })
                .collect();
            let (next, t) = self.block_aggregate(&merged, op)?;
            trace.then(&t);
            state = next;
        }
        Ok(state)
    }

    fn part_labels(&self) -> Vec<Option<usize>> {
        (0..self.instance.node_count()).map(|v| self.part_of(v)).collect()
    }

    /// Builds BFS trees over the supergraph from the blocks with `is_root`,
    /// through neighboring blocks with equal labels, for `steps` supersteps.
    fn super_bfs(
        &self,
        labels: &[Option<usize>],
        in_root: &[bool],
        steps: usize,
        trace: &mut RoundTrace,
    ) -> Result<SuperBfs, RoutingError> {
        let n = self.instance.node_count();
        let mut level: Vec<Option<usize>> = (0..n).map(|v| (labels[v].is_some() && in_root[v]).then_some(0)).collect();
        let mut link = vec![None; n];
        let mut uplink = vec![None; n];
        for k in 1..=steps {
            let outgoing = (0..n)
                .map(|v| match (labels[v], level[v]) {
                    (Some(label), Some(_)) => self.to_all_neighbors(v, Packet { label, value: None }),
                    _ => Vec::new(),
                })
                .collect();
            let received = self.exchange(outgoing, trace)?;
            let mut sender = vec![None; n];
            let candidate: Vec<Option<u64>> = (0..n)
                .map(|v| {
                    if level[v].is_some() || labels[v].is_none() {
                        return None;
                    }
                    sender[v] = received[v].iter().filter(|(_, p)| labels[v] == Some(p.label)).map(|&(w, _)| w).min();
                    sender[v].map(|_| v as u64)
                })
                .collect();
            let (chosen, t) = self.block_aggregate(&candidate, AggOp::Min)?;
            trace.then(&t);
            for v in 0..n {
                if level[v].is_none() {
                    if let Some(l) = chosen[v] {
                        level[v] = Some(k);
                        link[v] = Some(l as NodeId);
                        if l as NodeId == v {
                            uplink[v] = sender[v];
                        }
                    }
                }
            }
        }
        Ok(SuperBfs { level, link, uplink })
    }

    /// Aggregates `values` up the BFS trees, deepest level first; every node
    /// of a level-0 block ends with its tree's total.
    fn super_convergecast(
        &self,
        labels: &[Option<usize>],
        bfs: &SuperBfs,
        values: &[Option<u64>],
        depth: usize,
        op: AggOp,
        trace: &mut RoundTrace,
    ) -> Result<Vec<Option<u64>>, RoutingError> {
        let n = self.instance.node_count();
        let mut extra: Vec<Option<u64>> = vec![None; n];
        for level in (1..=depth).rev() {
            let inputs: Vec<Option<u64>> = (0..n).map(|v| op.combine(values[v], extra[v])).collect();
            let (agg, t) = self.block_aggregate(&inputs, op)?;
            trace.then(&t);
            let outgoing = (0..n)
                .map(|v| match (bfs.level[v], bfs.uplink[v], labels[v], agg[v]) {
                    (Some(l), Some(up), Some(label), Some(x)) if l == level && bfs.link[v] == Some(v) => {
                        vec![(up, Packet { label, value: Some(x) })]
                    }
                    _ => Vec::new(),
                })
                .collect();
            let received = self.exchange(outgoing, trace)?;
            for v in 0..n {
                for (_, p) in &received[v] {
                    if labels[v] == Some(p.label) {
                        extra[v] = op.combine(extra[v], p.value);
                    }
                }
            }
        }
        let inputs: Vec<Option<u64>> = (0..n).map(|v| op.combine(values[v], extra[v])).collect();
        let (agg, t) = self.block_aggregate(&inputs, op)?;
        trace.then(&t);
        Ok((0..n).map(|v| if bfs.level[v] == Some(0) { agg[v] } else { None }).collect())
    }

    /// Every part agrees on the smallest node ID in the part, assuming at
    /// most `b` blocks per part: one block aggregate, then `b - 1` supersteps.
    /// At most `b(2(D + c) + 1)` rounds.
    pub fn elect_leaders(&self, b: usize) -> Result<Leaders, RoutingError> {
        if b == 0 {
            return Err(RoutingError::ZeroBlockBound);
        }
        let n = self.instance.node_count();
        let mut trace = self.trace();
        let own: Vec<Option<u64>> = (0..n).map(|v| self.part_of(v).map(|_| v as u64)).collect();
        let (block_leader, t) = self.block_aggregate(&own, AggOp::Min)?;
        trace.then(&t);
        let labels = self.part_labels();
        let leader = self.flood(&labels, block_leader, b - 1, AggOp::Min, &mut trace)?;
        Ok(Leaders { per_node: leader.into_iter().map(|x| x.map(|l| l as NodeId)).collect(), trace })
    }

    /// Delivers each leader's message to every node of its part.
    /// At most `b(2(D + c) + 1)` rounds.
    pub fn part_broadcast(&self, b: usize, leaders: &[Option<NodeId>], messages: &[Option<u64>]) -> Result<PartMessages, RoutingError> {
        if b == 0 {
            return Err(RoutingError::ZeroBlockBound);
        }
        let n = self.instance.node_count();
        let mut trace = self.trace();
        let init: Vec<Option<u64>> = (0..n).map(|v| if leaders[v] == Some(v) { messages[v] } else { None }).collect();
        let (state, t) = self.block_aggregate(&init, AggOp::Min)?;
        trace.then(&t);
        let labels = self.part_labels();
        let per_node = self.flood(&labels, state, b - 1, AggOp::Min, &mut trace)?;
        Ok(PartMessages { per_node, trace })
    }

    /// Aggregates the part nodes' values at each part's leader along a BFS
    /// tree of the supergraph rooted at the leader's block.
    /// At most `2b(2(D + c) + 1)` rounds.
    pub fn part_convergecast(
        &self,
        b: usize,
        leaders: &[Option<NodeId>],
        values: &[Option<u64>],
        op: AggOp,
    ) -> Result<PartAggregate, RoutingError> {
        if b == 0 {
            return Err(RoutingError::ZeroBlockBound);
        }
        let n = self.instance.node_count();
        let mut trace = self.trace();
        let flag: Vec<Option<u64>> = (0..n).map(|v| (leaders[v] == Some(v)).then_some(1)).collect();
        let (in_root, t) = self.block_aggregate(&flag, AggOp::Max)?;
        trace.then(&t);
        let in_root: Vec<bool> = in_root.iter().map(Option::is_some).collect();
        let labels = self.part_labels();
        let bfs = self.super_bfs(&labels, &in_root, b - 1, &mut trace)?;
        let totals = self.super_convergecast(&labels, &bfs, values, b - 1, op, &mut trace)?;
        let per_part = self
            .instance
            .partition
            .parts()
            .iter()
            .map(|part| part.iter().find(|&&v| leaders[v] == Some(v)).and_then(|&l| totals[l]))
            .collect();
        Ok(PartAggregate { per_part, trace })
    }

    /// Finds the parts with at most `b_limit` blocks. Blocks flood the
    /// smallest block-leader ID for `b_limit - 1` supersteps, grow BFS trees
    /// from the blocks holding their own ID, and count blocks up each tree;
    /// a node with a part neighbor in another tree, or outside every tree,
    /// pushes its tree's count over the limit. At most
    /// `4 b_limit (2(D + c) + 1) + 1` rounds.
    pub fn count_blocks(&self, b_limit: usize) -> Result<BlockVerdicts, RoutingError> {
        if b_limit == 0 {
            return Err(RoutingError::ZeroBlockBound);
        }
        let n = self.instance.node_count();
        let steps = b_limit - 1;
        let over = b_limit as u64 + 1;
        let mut trace = self.trace();
        let own: Vec<Option<u64>> = (0..n).map(|v| self.part_of(v).map(|_| v as u64)).collect();
        let (block_leader, t) = self.block_aggregate(&own, AggOp::Min)?;
        trace.then(&t);
        let part_labels = self.part_labels();
        let lead = self.flood(&part_labels, block_leader.clone(), steps, AggOp::Min, &mut trace)?;
        let lead_labels: Vec<Option<usize>> = lead.iter().map(|x| x.map(|l| l as usize)).collect();
        let in_root: Vec<bool> = (0..n).map(|v| lead[v].is_some() && lead[v] == block_leader[v]).collect();
        let bfs = self.super_bfs(&lead_labels, &in_root, steps, &mut trace)?;

        let outgoing = (0..n)
            .map(|v| match part_labels[v] {
                Some(part) => {
                    let mine = if bfs.level[v].is_some() { lead[v] } else { None };
                    self.to_all_neighbors(v, Packet { label: part, value: mine })
                }
                None => Vec::new(),
            })
            .collect();
        let received = self.exchange(outgoing, &mut trace)?;
        let contribution: Vec<Option<u64>> = (0..n)
            .map(|v| {
                part_labels[v]?;
                let conflict = bfs.level[v].is_none()
                    || received[v].iter().any(|(_, p)| part_labels[v] == Some(p.label) && p.value != lead[v]);
                let counter = u64::from(block_leader[v] == Some(v as u64));
                Some((counter + if conflict { over } else { 0 }).min(over))
            })
            .collect();
        let totals =
            self.super_convergecast(&lead_labels, &bfs, &contribution, steps, AggOp::SumCapped(over), &mut trace)?;
        let verdict: Vec<Option<u64>> = totals.iter().map(|t| t.map(|x| u64::from(x <= b_limit as u64))).collect();
        let verdict = self.flood(&lead_labels, verdict, steps, AggOp::Min, &mut trace)?;
        let per_node: Vec<Option<bool>> = (0..n)
            .map(|v| part_labels[v].map(|_| bfs.level[v].is_some() && verdict[v] == Some(1)))
            .collect();
        let good = self.instance.partition.parts().iter().map(|part| per_node[part[0]] == Some(true)).collect();
        Ok(BlockVerdicts { per_node, good, trace })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, Partition};

    fn path_instance(n: usize, parts: Vec<Vec<NodeId>>) -> Instance {
        let g = Graph::unweighted(n, (0..n - 1).map(|v| (v, v + 1))).unwrap();
        let p = Partition::new(&g, parts).unwrap();
        Instance::with_bfs_tree(g, 0, p).unwrap()
    }

    #[test]
    fn single_node_part_leads_itself() {
        let inst = path_instance(3, vec![vec![1]]);
        let s = Shortcut::empty(&inst.tree, 1);
        let r = ShortcutRouter::new(&inst, &s, &EngineConfig::default()).unwrap();
        let l = r.elect_leaders(1).unwrap();
        assert_eq!(l.per_node, vec![None, Some(1), None]);
    }

    #[test]
    fn path_part_without_shortcut_needs_one_superstep_per_block() {
        // part 2..=6 with H empty: 5 singleton blocks in a line
        let inst = path_instance(8, vec![vec![2, 3, 4, 5, 6]]);
        let s = Shortcut::empty(&inst.tree, 1);
        let r = ShortcutRouter::new(&inst, &s, &EngineConfig::default()).unwrap();
        let l = r.elect_leaders(5).unwrap();
        assert!(inst.partition.part(0).iter().all(|&v| l.per_node[v] == Some(2)));
        let short = r.elect_leaders(4).unwrap();
        assert_eq!(short.per_node[6], Some(3));

        let leaders = l.per_node.clone();
        let ones: Vec<Option<u64>> = (0..8).map(|v| inst.partition.part_of(v).map(|_| 1)).collect();
        let count = r.part_convergecast(5, &leaders, &ones, AggOp::Sum).unwrap();
        assert_eq!(count.per_part, vec![Some(5)]);
        let msg: Vec<Option<u64>> = (0..8).map(|v| (v == 2).then_some(42)).collect();
        let b = r.part_broadcast(5, &leaders, &msg).unwrap();
        assert!(inst.partition.part(0).iter().all(|&v| b.per_node[v] == Some(42)));

        assert_eq!(r.count_blocks(5).unwrap().good, vec![true]);
        assert_eq!(r.count_blocks(4).unwrap().good, vec![false]);
        assert_eq!(r.count_blocks(3).unwrap().good, vec![false]);
    }

    #[test]
    fn whole_tree_shortcut_is_one_block() {
        let inst = path_instance(6, vec![(0..6).collect()]);
        let s = Shortcut::from_tree_edges(&inst.tree, vec![inst.tree.edges().collect()]).unwrap();
        let r = ShortcutRouter::new(&inst, &s, &EngineConfig::default()).unwrap();
        assert_eq!(r.count_blocks(1).unwrap().good, vec![true]);
        assert_eq!(r.elect_leaders(1).unwrap().per_node, vec![Some(0); 6]);
    }
}
