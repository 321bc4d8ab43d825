use std::collections::BTreeSet;

use serde::Serialize;

use crate::congest::wire::{BitReader, BitWriter};
use crate::congest::{RoundTrace, Wire, WireError};
use crate::graph::{Instance, NodeId, PartId, TreeEdge};
use crate::shortcut::Shortcut;

/// What a node knows about one incident tree edge after a core run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assignment {
    Unusable,
    Parts(Vec<PartId>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeView {
    /// `None` at the root.
    pub parent: Option<Assignment>,
    pub children: Vec<(NodeId, Assignment)>,
}

#[derive(Debug, Clone)]
pub struct CoreOutcome {
    pub shortcut: Shortcut,
    pub unusable: Vec<TreeEdge>,
    pub views: Vec<NodeView>,
    pub trace: RoundTrace,
    /// Activation probability; 1 for the deterministic variant.
    pub p: f64,
    /// Set when the activation probability was clamped to 1.
    pub exact_counting: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoreMsg {
    Id(PartId),
    Unusable,
    Done,
}

impl Wire for CoreMsg {
    fn encode(&self, w: &mut BitWriter) -> Result<(), WireError> {
        match *self {
            CoreMsg::Id(i) => {
                w.put(0, 2)?;
                w.put_id(i)
            }
            CoreMsg::Unusable => w.put(1, 2),
            CoreMsg::Done => w.put(2, 2),
        }
    }

    fn decode(r: &mut BitReader<'_>) -> Result<Self, WireError> {
        match r.take(2)? {
            0 => Ok(CoreMsg::Id(r.take_id()?)),
            1 => Ok(CoreMsg::Unusable),
            2 => Ok(CoreMsg::Done),
            t => Err(WireError::BadTag(t)),
        }
    }
}

/// Per-child record of what arrived over the child's edge.
#[derive(Debug, Clone, Default)]
pub(crate) struct ChildLink {
    pub ids: BTreeSet<PartId>,
    pub unusable: bool,
    pub done: bool,
}

/// Part of `v` if that part takes part in this run.
pub(crate) fn participating_part(instance: &Instance, remaining: &[bool], v: NodeId) -> Option<PartId> {
    instance.partition.part_of(v).filter(|&i| remaining[i])
}

pub(crate) fn assemble(instance: &Instance, views: &[NodeView]) -> (Shortcut, Vec<TreeEdge>) {
    let mut shortcut = Shortcut::empty(&instance.tree, instance.part_count());
    let mut unusable = Vec::new();
    for (v, view) in views.iter().enumerate() {
        match &view.parent {
            Some(Assignment::Parts(ids)) => {
                for &i in ids {
                    shortcut.insert(i, TreeEdge(v)).expect("parent edge of a non-root node");
                }
            }
            Some(Assignment::Unusable) => unusable.push(TreeEdge(v)),
            None => {}
        }
    }
    (shortcut, unusable)
}

/// Every part takes part.
pub fn all_parts(instance: &Instance) -> Vec<bool> {
    vec![true; instance.part_count()]
}
