//! Deterministic core: bottom-up, each node collects the part IDs its parent
//! edge can see and claims the edge for them unless there are more than `2c`.
//!
//! Schedule: depth level `d` owns the window of `2c + 1` steps starting at
//! step `(D - d)(2c + 1)`; a node sends its at most `2c` IDs serially, one
//! per step, so the children's lists are complete when the parent's window
//! opens. The run takes at most `D (2c + 1)` rounds.

use std::collections::{BTreeSet, HashMap};

use crate::congest::{run, Ctx, EngineConfig, NodeProgram};
use crate::graph::{Instance, NodeId, PartId};

use super::core_common::{assemble, participating_part, Assignment, ChildLink, CoreMsg, CoreOutcome, NodeView};
use super::ConstructionError;

#[derive(Debug, Clone)]
struct SlowNode {
    part: Option<PartId>,
    parent: Option<NodeId>,
    start: u64,
    cutoff: usize,
    links: HashMap<NodeId, ChildLink>,
    status: Option<Assignment>,
    queue: Vec<CoreMsg>,
    sent: usize,
    done: bool,
}

impl SlowNode {
    fn act(&mut self, ctx: &mut Ctx<'_, CoreMsg>, inbox: &[(NodeId, CoreMsg)]) {
        for &(from, msg) in inbox {
            let link = self.links.get_mut(&from).expect("messages come from children");
            match msg {
                CoreMsg::Id(i) => {
                    link.ids.insert(i);
                }
                CoreMsg::Unusable => link.unusable = true,
                CoreMsg::Done => {}
            }
        }
        let round = ctx.round();
        if round < self.start {
            return;
        }
        let Some(parent) = self.parent else {
            self.done = true;
            return;
        };
        if round == self.start {
            let mut list: BTreeSet<PartId> = self.part.into_iter().collect();
            for link in self.links.values() {
                list.extend(&link.ids);
            }
            if list.len() > self.cutoff {
                self.status = Some(Assignment::Unusable);
                self.queue = vec![CoreMsg::Unusable];
            } else {
                self.queue = list.iter().map(|&i| CoreMsg::Id(i)).collect();
                self.status = Some(Assignment::Parts(list.into_iter().collect()));
            }
        }
        if let Some(&msg) = self.queue.get(self.sent) {
            ctx.send(parent, msg);
            self.sent += 1;
        }
        self.done = self.sent == self.queue.len();
    }
}

impl NodeProgram for SlowNode {
    type Msg = CoreMsg;
    type Output = NodeView;

    fn init(&mut self, ctx: &mut Ctx<'_, CoreMsg>) {
        self.act(ctx, &[]);
    }

    fn step(&mut self, ctx: &mut Ctx<'_, CoreMsg>, inbox: &[(NodeId, CoreMsg)]) {
        self.act(ctx, inbox);
    }

    fn halted(&self) -> bool {
        self.done
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
        NodeView { parent: self.status.clone(), children }
    }
}

/// Runs the deterministic core for the parts flagged in `remaining`; other
/// parts behave as if their nodes belonged to no part.
pub fn core_slow(instance: &Instance, c: u32, remaining: &[bool], config: &EngineConfig) -> Result<CoreOutcome, ConstructionError> {
    if c == 0 {
        return Err(ConstructionError::InvalidParams("c must be at least 1".into()));
    }
    let tree = &instance.tree;
    let depth = tree.max_depth() as u64;
    let window = 2 * c as u64 + 1;
    let programs = (0..instance.node_count())
        .map(|v| {
            let start = match tree.parent(v) {
                Some(_) => (depth - tree.depth(v) as u64) * window,
                // the root only listens; the last child message arrives in round D * window - 1
                None => (depth * window).saturating_sub(1),
            };
            SlowNode {
                part: participating_part(instance, remaining, v),
                parent: tree.parent(v),
                start,
                cutoff: 2 * c as usize,
                links: tree.children(v).iter().map(|&u| (u, ChildLink::default())).collect(),
                status: None,
                queue: Vec::new(),
                sent: 0,
                done: false,
            }
        })
        .collect();
    let out = run(&instance.graph, programs, config)?;
    let (shortcut, unusable) = assemble(instance, &out.outputs);
    Ok(CoreOutcome { shortcut, unusable, views: out.outputs, trace: out.trace, p: 1.0, exact_counting: true })
}
