//! Convergecast and broadcast on many subtrees of `T` at once.
//!
//! Every tree edge carries one message per round. A node forwards, among the
//! messages that are ready, the one whose subtree has the shallowest root,
//! ties broken by the smaller key. A subtree rooted at `v` never shares `v`'s
//! parent edge, so at a child's edge every subtree that also uses the
//! parent's edge ranks no lower than it does at the parent's edge; this gives
//! the `h_v + i` crossing bound and `D + c` rounds overall.

use std::collections::HashMap;

use crate::congest::{run, Ctx, EngineConfig, NodeProgram, RoundTrace};
use crate::graph::{Graph, NodeId, RootedTree, TreeEdge};

use super::{AggOp, Packet, RoutingError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtree {
    /// Identifies the subtree on the wire; subtrees sharing an edge need distinct keys.
    pub key: usize,
    pub root: NodeId,
    pub edges: Vec<TreeEdge>,
}

/// A validated family of connected subtrees of `T` with bounded edge load.
#[derive(Debug, Clone)]
pub struct SubtreeFamily {
    subtrees: Vec<Subtree>,
    /// Per node `v`: subtrees containing `v`'s parent edge, in priority order.
    up: Vec<Vec<usize>>,
    /// Per node: subtrees rooted there.
    rooted: Vec<Vec<usize>>,
    load: u32,
}

impl SubtreeFamily {
    pub fn new(tree: &RootedTree, subtrees: Vec<Subtree>, declared_load: u32) -> Result<Self, RoutingError> {
        let n = tree.node_count();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut rooted: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, s) in subtrees.iter().enumerate() {
            if s.root >= n {
                return Err(RoutingError::BadSubtree { index: i, reason: format!("root {} out of range", s.root) });
            }
            if s.key >= n.max(2) {
                return Err(RoutingError::BadSubtree { index: i, reason: format!("key {} does not fit a node ID", s.key) });
            }
            let mut members = HashMap::new();
            members.insert(s.root, ());
            for e in &s.edges {
                if e.child() >= n || e.child() == tree.root() {
                    return Err(RoutingError::BadSubtree { index: i, reason: format!("{e:?} is not a tree edge") });
                }
                members.insert(e.child(), ());
            }
            if members.len() != s.edges.len() + 1 {
                return Err(RoutingError::BadSubtree { index: i, reason: "repeated edge or edge above the root".into() });
            }
            for e in &s.edges {
                let p = tree.parent(e.child()).expect("non-root");
                if !members.contains_key(&p) || e.child() == s.root {
                    return Err(RoutingError::BadSubtree { index: i, reason: format!("{e:?} is not connected below the root") });
                }
                up[e.child()].push(i);
            }
            rooted[s.root].push(i);
        }
        let mut load = 0;
        for (v, list) in up.iter_mut().enumerate() {
            list.sort_by_key(|&i| (tree.depth(subtrees[i].root), subtrees[i].key));
            if list.windows(2).any(|w| subtrees[w[0]].key == subtrees[w[1]].key) {
                return Err(RoutingError::DuplicateKey { node: v });
            }
            load = load.max(list.len() as u32);
        }
        if load > declared_load {
            return Err(RoutingError::LoadExceeded { load, declared: declared_load });
        }
        Ok(Self { subtrees, up, rooted, load })
    }

    pub fn len(&self) -> usize {
        self.subtrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subtrees.is_empty()
    }

    pub fn subtrees(&self) -> &[Subtree] {
        &self.subtrees
    }

    pub fn subtree(&self, i: usize) -> &Subtree {
        &self.subtrees[i]
    }

    /// Maximum number of subtrees sharing one tree edge.
    pub fn load(&self) -> u32 {
        self.load
    }

    /// Subtrees using `v`'s parent edge, highest priority first.
    pub fn through_parent_edge(&self, v: NodeId) -> &[usize] {
        &self.up[v]
    }

    /// Subtrees containing `v`.
    pub fn containing(&self, v: NodeId) -> impl Iterator<Item = usize> + '_ {
        self.rooted[v].iter().chain(&self.up[v]).copied()
    }
}

/// One message crossing `node`'s parent edge for subtree `subtree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub node: NodeId,
    pub subtree: usize,
    pub round: u64,
}

#[derive(Debug, Clone)]
pub struct Convergecast {
    /// Aggregate per subtree, as held by the subtree root.
    pub results: Vec<Option<u64>>,
    pub crossings: Vec<Crossing>,
    pub trace: RoundTrace,
}

#[derive(Debug, Clone)]
struct UpNode {
    parent: Option<NodeId>,
    up: Vec<usize>,
    keys: Vec<usize>,
    sent: usize,
    sent_mask: Vec<bool>,
    acc: HashMap<usize, Option<u64>>,
    pending: HashMap<usize, usize>,
    from_child: HashMap<(NodeId, usize), usize>,
    rooted: Vec<usize>,
    op: AggOp,
    crossings: Vec<(usize, u64)>,
}

impl UpNode {
    fn emit(&mut self, ctx: &mut Ctx<'_, Packet>) {
        let Some(parent) = self.parent else { return };
        let ready = (0..self.up.len()).find(|&k| !self.sent_mask[k] && self.pending[&self.up[k]] == 0);
        if let Some(k) = ready {
            let idx = self.up[k];
            ctx.send(parent, Packet { label: self.keys[k], value: self.acc[&idx] });
            self.sent_mask[k] = true;
            self.sent += 1;
            self.crossings.push((idx, ctx.round() + 1));
        }
    }
}

impl NodeProgram for UpNode {
    type Msg = Packet;
    type Output = (Vec<(usize, Option<u64>)>, Vec<(usize, u64)>);

    fn init(&mut self, ctx: &mut Ctx<'_, Packet>) {
        self.emit(ctx);
    }

    fn step(&mut self, ctx: &mut Ctx<'_, Packet>, inbox: &[(NodeId, Packet)]) {
        for &(from, ref p) in inbox {
            let idx = self.from_child[&(from, p.label)];
            let acc = self.acc.get_mut(&idx).expect("member subtree");
            *acc = self.op.combine(*acc, p.value);
            *self.pending.get_mut(&idx).expect("member subtree") -= 1;
        }
        self.emit(ctx);
    }

    fn halted(&self) -> bool {
        self.sent == self.up.len() && self.rooted.iter().all(|i| self.pending[i] == 0)
    }

    fn output(&self) -> Self::Output {
        (self.rooted.iter().map(|&i| (i, self.acc[&i])).collect(), self.crossings.clone())
    }
}

/// Aggregates `value(subtree, node)` over the nodes of every subtree towards
/// its root. Takes at most `D + load` rounds.
pub fn multi_convergecast(
    graph: &Graph,
    tree: &RootedTree,
    family: &SubtreeFamily,
    value: impl Fn(usize, NodeId) -> Option<u64>,
    op: AggOp,
    config: &EngineConfig,
) -> Result<Convergecast, RoutingError> {
    let n = tree.node_count();
    let programs: Vec<UpNode> = (0..n)
        .map(|v| {
            let mut acc = HashMap::new();
            let mut pending = HashMap::new();
            for i in family.containing(v) {
                acc.insert(i, value(i, v));
                pending.insert(i, 0usize);
            }
            let mut from_child = HashMap::new();
            for &u in tree.children(v) {
                for &i in family.through_parent_edge(u) {
                    from_child.insert((u, family.subtree(i).key), i);
                    *pending.get_mut(&i).expect("child edge subtree contains v") += 1;
                }
            }
            let up = family.through_parent_edge(v).to_vec();
            UpNode {
                parent: tree.parent(v),
                keys: up.iter().map(|&i| family.subtree(i).key).collect(),
                sent: 0,
                sent_mask: vec![false; up.len()],
                up,
                acc,
                pending,
                from_child,
                rooted: family.rooted[v].clone(),
                op,
                crossings: Vec::new(),
            }
        })
        .collect();
    let out = run(graph, programs, config)?;
    let mut results = vec![None; family.len()];
    let mut crossings = Vec::new();
    for (v, (roots, sent)) in out.outputs.into_iter().enumerate() {
        for (i, x) in roots {
            results[i] = x;
        }
        crossings.extend(sent.into_iter().map(|(subtree, round)| Crossing { node: v, subtree, round }));
    }
    Ok(Convergecast { results, crossings, trace: out.trace })
}

#[derive(Debug, Clone)]
pub struct Broadcast {
    /// Per node: the message of every subtree containing it.
    pub received: Vec<HashMap<usize, Option<u64>>>,
    pub trace: RoundTrace,
}

#[derive(Debug, Clone)]
struct DownNode {
    /// Per child: subtrees on that child's edge in priority order, and how many were sent.
    down: Vec<(NodeId, Vec<(usize, usize)>, Vec<bool>)>,
    from_parent: HashMap<usize, usize>,
    known: HashMap<usize, Option<u64>>,
    expected: usize,
}

impl DownNode {
    fn emit(&mut self, ctx: &mut Ctx<'_, Packet>) {
        for (child, list, sent) in &mut self.down {
            let ready = (0..list.len()).find(|&k| !sent[k] && self.known.contains_key(&list[k].0));
            if let Some(k) = ready {
                let (idx, key) = list[k];
                ctx.send(*child, Packet { label: key, value: self.known[&idx] });
                sent[k] = true;
            }
        }
    }
}

impl NodeProgram for DownNode {
    type Msg = Packet;
    type Output = HashMap<usize, Option<u64>>;

    fn init(&mut self, ctx: &mut Ctx<'_, Packet>) {
        self.emit(ctx);
    }

    fn step(&mut self, ctx: &mut Ctx<'_, Packet>, inbox: &[(NodeId, Packet)]) {
        for (_, p) in inbox {
            let idx = self.from_parent[&p.label];
            self.known.insert(idx, p.value);
        }
        self.emit(ctx);
    }

    fn halted(&self) -> bool {
        self.known.len() == self.expected && self.down.iter().all(|(_, _, sent)| sent.iter().all(|&s| s))
    }

    fn output(&self) -> Self::Output {
        self.known.clone()
    }
}

/// Delivers `message(subtree)` from every subtree root to all its nodes,
/// with the same priority rule as [`multi_convergecast`].
pub fn multi_broadcast(
    graph: &Graph,
    tree: &RootedTree,
    family: &SubtreeFamily,
    message: impl Fn(usize) -> Option<u64>,
    config: &EngineConfig,
) -> Result<Broadcast, RoutingError> {
    let n = tree.node_count();
    let programs: Vec<DownNode> = (0..n)
        .map(|v| {
            let down = tree
                .children(v)
                .iter()
                .map(|&u| {
                    let list: Vec<(usize, usize)> =
                        family.through_parent_edge(u).iter().map(|&i| (i, family.subtree(i).key)).collect();
                    let sent = vec![false; list.len()];
                    (u, list, sent)
                })
                .collect();
            let from_parent = family.through_parent_edge(v).iter().map(|&i| (family.subtree(i).key, i)).collect();
            let known = family.rooted[v].iter().map(|&i| (i, message(i))).collect();
            DownNode { down, from_parent, known, expected: family.rooted[v].len() + family.up[v].len() }
        })
        .collect();
    let out = run(graph, programs, config)?;
    Ok(Broadcast { received: out.outputs, trace: out.trace })
}
