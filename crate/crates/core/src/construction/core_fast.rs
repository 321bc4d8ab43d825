//! Randomized core. Phase 1 runs the bottom-up sweep on active parts only
//! (each part active with probability `p = min(1, gamma ln n / 2c)`, drawn
//! from the part's shared stream) and marks an edge unusable once at least
//! `4cp` active IDs reach it. Phase 2 starts at a common step and routes
//! every remaining part's ID up to the first unusable edge, smallest ID
//! first; `Done` markers tell parents when a child's stream has ended.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use crate::congest::{run, Ctx, EngineConfig, NodeProgram, SharedRandomness};
use crate::graph::{Instance, NodeId, PartId};

use super::core_common::{assemble, participating_part, Assignment, ChildLink, CoreMsg, CoreOutcome, NodeView};
use super::ConstructionError;

pub const DEFAULT_GAMMA: f64 = 12.0;

/// `(p, clamped)` for the given network size, congestion guess and gamma.
pub fn activation_probability(node_count: usize, c: u32, gamma: f64) -> (f64, bool) {
    let p = gamma * (node_count as f64).ln() / (2.0 * c as f64);
    if p >= 1.0 || p <= 0.0 {
        (1.0, true)
    } else {
        (p, false)
    }
}

/// Whether `part` is active this run; identical at every node of the part.
pub fn is_active(randomness: &SharedRandomness, part: PartId, p: f64) -> bool {
    p >= 1.0 || randomness.part_rng(part).gen_bool(p)
}

#[derive(Debug, Clone)]
struct FastNode {
    part: Option<PartId>,
    active: bool,
    parent: Option<NodeId>,
    start: u64,
    phase2: u64,
    threshold: f64,
    links: HashMap<NodeId, ChildLink>,
    sampled: Vec<CoreMsg>,
    sampled_sent: usize,
    unusable: bool,
    // phase 2
    seen: BTreeSet<PartId>,
    pending: BTreeSet<PartId>,
    done_sent: bool,
    finished: bool,
}

impl FastNode {
    fn act(&mut self, ctx: &mut Ctx<'_, CoreMsg>, inbox: &[(NodeId, CoreMsg)]) {
        let round = ctx.round();
        for &(from, msg) in inbox {
            let link = self.links.get_mut(&from).expect("messages come from children");
            match msg {
                CoreMsg::Id(i) if round <= self.phase2 => {
                    link.ids.insert(i);
                }
                CoreMsg::Id(i) => {
                    if self.seen.insert(i) {
                        self.pending.insert(i);
                    }
                    link.ids.insert(i);
                }
                CoreMsg::Unusable => link.unusable = true,
                CoreMsg::Done => link.done = true,
            }
        }
        if round < self.phase2 {
            self.sweep(ctx, round);
        } else {
            if round == self.phase2 {
                for link in self.links.values_mut() {
                    link.ids.clear();
                }
                self.seen = self.part.into_iter().collect();
                self.pending = self.seen.clone();
            }
            self.route(ctx);
        }
    }

    fn sweep(&mut self, ctx: &mut Ctx<'_, CoreMsg>, round: u64) {
        let Some(parent) = self.parent else { return };
        if round < self.start {
            return;
        }
        if round == self.start {
            let mut list: BTreeSet<PartId> = self.part.filter(|_| self.active).into_iter().collect();
            for link in self.links.values() {
                list.extend(&link.ids);
            }
            if list.len() as f64 >= self.threshold {
                self.unusable = true;
                self.sampled = vec![CoreMsg::Unusable];
            } else {
                self.sampled = list.into_iter().map(CoreMsg::Id).collect();
            }
        }
        if let Some(&msg) = self.sampled.get(self.sampled_sent) {
            ctx.send(parent, msg);
            self.sampled_sent += 1;
        }
    }

    fn route(&mut self, ctx: &mut Ctx<'_, CoreMsg>) {
        let children_done = self.links.values().all(|l| l.unusable || l.done);
        match self.parent {
            Some(parent) if !self.unusable => {
                if let Some(i) = self.pending.pop_first() {
                    ctx.send(parent, CoreMsg::Id(i));
                } else if children_done && !self.done_sent {
                    ctx.send(parent, CoreMsg::Done);
                    self.done_sent = true;
                    self.finished = true;
                }
            }
            _ => self.finished = children_done,
        }
    }
}

impl NodeProgram for FastNode {
    type Msg = CoreMsg;
    type Output = NodeView;

    fn init(&mut self, ctx: &mut Ctx<'_, CoreMsg>) {
        self.act(ctx, &[]);
    }

    fn step(&mut self, ctx: &mut Ctx<'_, CoreMsg>, inbox: &[(NodeId, CoreMsg)]) {
        self.act(ctx, inbox);
    }

    fn halted(&self) -> bool {
        self.finished
    }

    fn output(&self) -> NodeView {
        let mut children: Vec<(NodeId, Assignment)> = self
            .links
            .iter()
            .map(|(&u, l)| {
                let a = if l.unusable { Assignment::Unusable } else { Assignment::Parts(l.ids.iter().copied().collect()) };
                (u, a)
            })
            .collect();
        children.sort_by_key(|&(u, _)| u);
        let parent = self.parent.map(|_| {
            if self.unusable {
                Assignment::Unusable
            } else {
                Assignment::Parts(self.seen.iter().copied().collect())
            }
        });
        NodeView { parent, children }
    }
}

/// Runs the randomized core for the parts flagged in `remaining`.
pub fn core_fast(
    instance: &Instance,
    c: u32,
    gamma: f64,
    randomness: &SharedRandomness,
    remaining: &[bool],
    config: &EngineConfig,
) -> Result<CoreOutcome, ConstructionError> {
    if c == 0 {
        return Err(ConstructionError::InvalidParams("c must be at least 1".into()));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(ConstructionError::InvalidParams("gamma must be positive".into()));
    }
    let tree = &instance.tree;
    let (p, exact_counting) = activation_probability(instance.node_count(), c, gamma);
    let threshold = 4.0 * c as f64 * p;
    // at most ceil(threshold) - 1 IDs are sent over a usable edge, plus one spare step
    let window = threshold.ceil() as u64;
    let depth = tree.max_depth() as u64;
    let phase2 = depth * window;
    let active: Vec<bool> = (0..instance.part_count()).map(|i| remaining[i] && is_active(randomness, i, p)).collect();
    let programs = (0..instance.node_count())
        .map(|v| {
            let part = participating_part(instance, remaining, v);
            FastNode {
                part,
                active: part.is_some_and(|i| active[i]),
                parent: tree.parent(v),
                start: (depth - tree.depth(v) as u64) * window,
                phase2,
                threshold,
                links: tree.children(v).iter().map(|&u| (u, ChildLink::default())).collect(),
                sampled: Vec::new(),
                sampled_sent: 0,
                unusable: false,
                seen: BTreeSet::new(),
                pending: BTreeSet::new(),
                done_sent: false,
                finished: false,
            }
        })
        .collect();
    let out = run(&instance.graph, programs, config)?;
    let (shortcut, unusable) = assemble(instance, &out.outputs);
    Ok(CoreOutcome { shortcut, unusable, views: out.outputs, trace: out.trace, p, exact_counting })
}
