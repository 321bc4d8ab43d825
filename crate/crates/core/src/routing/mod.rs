//! Routing on tree-restricted shortcuts: multi-subtree convergecast and
//! broadcast, and the per-part operations built from them.

mod exchange;
mod parts;
mod tree_cast;

use thiserror::Error;

use crate::congest::wire::{BitReader, BitWriter};
use crate::congest::{SimError, Wire, WireError};
use crate::graph::NodeId;

pub use exchange::exchange;
pub use parts::{BlockVerdicts, Leaders, PartAggregate, PartMessages, ShortcutRouter};
pub use tree_cast::{multi_broadcast, multi_convergecast, Broadcast, Convergecast, Crossing, Subtree, SubtreeFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    #[error("subtree {index}: {reason}")]
    BadSubtree { index: usize, reason: String },
    #[error("two subtrees with the same key share the parent edge of node {node}")]
    DuplicateKey { node: NodeId },
    #[error("edge load {load} exceeds the declared {declared}")]
    LoadExceeded { load: u32, declared: u32 },
    #[error("block bound must be at least 1")]
    ZeroBlockBound,
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Associative, commutative aggregation over optional values; `None` is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggOp {
    Min,
    Max,
    Sum,
    /// Sum saturating at the given cap.
    SumCapped(u64),
}

impl AggOp {
    pub fn combine(self, a: Option<u64>, b: Option<u64>) -> Option<u64> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(match self {
                AggOp::Min => a.min(b),
                AggOp::Max => a.max(b),
                AggOp::Sum => a.saturating_add(b),
                AggOp::SumCapped(cap) => a.saturating_add(b).min(cap),
            }),
        }
    }
}

/// The routing message: a label (subtree key or group ID) and an optional value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packet {
    pub label: usize,
    pub value: Option<u64>,
}

impl Wire for Packet {
    fn encode(&self, w: &mut BitWriter) -> Result<(), WireError> {
        w.put_id(self.label)?;
        w.put_bool(self.value.is_some())?;
        if let Some(x) = self.value {
            w.put_value(x)?;
        }
        Ok(())
    }

    fn decode(r: &mut BitReader<'_>) -> Result<Self, WireError> {
        let label = r.take_id()?;
        let value = if r.take_bool()? { Some(r.take_value()?) } else { None };
        Ok(Packet { label, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congest::wire::{decode, encode, WireFormat};

    #[test]
    fn packet_fits_the_default_budget() {
        let f = WireFormat::new(1000, 4);
        let p = Packet { label: 999, value: Some(f.max_value()) };
        let m = encode(&p, f).unwrap();
        assert!(m.bit_len() <= f.budget);
        assert_eq!(decode::<Packet>(&m, f).unwrap(), p);
        let q = Packet { label: 0, value: None };
        assert_eq!(decode::<Packet>(&encode(&q, f).unwrap(), f).unwrap(), q);
    }

    #[test]
    fn identity_and_caps() {
        assert_eq!(AggOp::Min.combine(None, Some(3)), Some(3));
        assert_eq!(AggOp::Sum.combine(Some(2), Some(3)), Some(5));
        assert_eq!(AggOp::SumCapped(4).combine(Some(2), Some(3)), Some(4));
        assert_eq!(AggOp::Max.combine(None, None), None);
    }
}
