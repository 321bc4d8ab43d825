//! Small reference protocols: flooding, echo over a rooted tree, and
//! distributed BFS-tree construction.

use crate::graph::{NodeId, RootedTree};

use super::engine::{Ctx, NodeProgram};
use super::wire::{BitReader, BitWriter, Wire, WireError};

/// Floods a token from `source`; each node outputs the round it first heard it.
#[derive(Debug, Clone)]
pub struct Flood {
    source: bool,
    heard: Option<u64>,
}

impl Flood {
    pub fn programs(n: usize, source: NodeId) -> Vec<Self> {
        (0..n).map(|v| Self { source: v == source, heard: None }).collect()
    }
}

impl NodeProgram for Flood {
    type Msg = ();
    type Output = Option<u64>;

    fn init(&mut self, ctx: &mut Ctx<'_, ()>) {
        if self.source {
            self.heard = Some(0);
            let ns: Vec<_> = ctx.neighbors().collect();
            for v in ns {
                ctx.send(v, ());
            }
        }
    }

    fn step(&mut self, ctx: &mut Ctx<'_, ()>, inbox: &[(NodeId, ())]) {
        if self.heard.is_none() && !inbox.is_empty() {
            self.heard = Some(ctx.round());
            let ns: Vec<_> = ctx.neighbors().filter(|v| inbox.iter().all(|(s, _)| s != v)).collect();
            for v in ns {
                ctx.send(v, ());
            }
        }
    }

    fn halted(&self) -> bool {
        self.heard.is_some()
    }

    fn output(&self) -> Option<u64> {
        self.heard
    }
}

/// A count value of up to `2 * id_bits` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Count(pub u64);

impl Wire for Count {
    fn encode(&self, w: &mut BitWriter) -> Result<(), WireError> {
        w.put_value(self.0)
    }

    fn decode(r: &mut BitReader<'_>) -> Result<Self, WireError> {
        Ok(Count(r.take_value()?))
    }
}

/// Convergecast of per-node values to the root followed by a broadcast of
/// the sum; every node outputs the total.
#[derive(Debug, Clone)]
pub struct Echo {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    partial: u64,
    reported: usize,
    total: Option<u64>,
}

impl Echo {
    pub fn programs(tree: &RootedTree, values: &[u64]) -> Vec<Self> {
        (0..tree.node_count())
            .map(|v| Self {
                parent: tree.parent(v),
                children: tree.children(v).to_vec(),
                partial: values[v],
                reported: 0,
                total: None,
            })
            .collect()
    }

    fn settle(&mut self, ctx: &mut Ctx<'_, Count>) {
        if self.reported < self.children.len() {
            return;
        }
        match self.parent {
            Some(p) => ctx.send(p, Count(self.partial)),
            None => self.finish(ctx, self.partial),
        }
    }

    fn finish(&mut self, ctx: &mut Ctx<'_, Count>, total: u64) {
        self.total = Some(total);
        for &c in &self.children {
            ctx.send(c, Count(total));
        }
    }
}

impl NodeProgram for Echo {
    type Msg = Count;
    type Output = Option<u64>;

    fn init(&mut self, ctx: &mut Ctx<'_, Count>) {
        self.settle(ctx);
    }

    fn step(&mut self, ctx: &mut Ctx<'_, Count>, inbox: &[(NodeId, Count)]) {
        for &(from, Count(x)) in inbox {
            if Some(from) == self.parent {
                self.finish(ctx, x);
                return;
            }
            self.partial += x;
            self.reported += 1;
        }
        if !inbox.is_empty() {
            self.settle(ctx);
        }
    }

    fn halted(&self) -> bool {
        self.total.is_some()
    }

    fn output(&self) -> Option<u64> {
        self.total
    }
}

/// Distributed BFS: each node adopts the smallest-ID neighbor among those it
/// first hears from, matching the centralized tie-break.
#[derive(Debug, Clone)]
pub struct BfsBuild {
    source: bool,
    joined: Option<(Option<NodeId>, u64)>,
}

impl BfsBuild {
    pub fn programs(n: usize, source: NodeId) -> Vec<Self> {
        (0..n).map(|v| Self { source: v == source, joined: None }).collect()
    }
}

impl NodeProgram for BfsBuild {
    type Msg = ();
    /// `(parent, distance)`.
    type Output = Option<(Option<NodeId>, u64)>;

    fn init(&mut self, ctx: &mut Ctx<'_, ()>) {
        if self.source {
            self.joined = Some((None, 0));
            let ns: Vec<_> = ctx.neighbors().collect();
            for v in ns {
                ctx.send(v, ());
            }
        }
    }

    fn step(&mut self, ctx: &mut Ctx<'_, ()>, inbox: &[(NodeId, ())]) {
        if self.joined.is_some() || inbox.is_empty() {
            return;
        }
        self.joined = Some((Some(inbox[0].0), ctx.round()));
        let ns: Vec<_> = ctx.neighbors().collect();
        for v in ns {
            ctx.send(v, ());
        }
    }

    fn halted(&self) -> bool {
        self.joined.is_some()
    }

    fn output(&self) -> Self::Output {
        self.joined
    }
}
