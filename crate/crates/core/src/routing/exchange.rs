use crate::congest::{run, Ctx, EngineConfig, NodeProgram, RoundTrace};
use crate::graph::{Graph, NodeId};

use super::{Packet, RoutingError};

#[derive(Debug, Clone)]
struct Exchange {
    outgoing: Vec<(NodeId, Packet)>,
    waiting: bool,
    received: Vec<(NodeId, Packet)>,
}

impl NodeProgram for Exchange {
    type Msg = Packet;
    type Output = Vec<(NodeId, Packet)>;

    fn init(&mut self, ctx: &mut Ctx<'_, Packet>) {
        for (to, p) in self.outgoing.drain(..) {
            ctx.send(to, p);
        }
    }

    fn step(&mut self, _: &mut Ctx<'_, Packet>, inbox: &[(NodeId, Packet)]) {
        self.received = inbox.to_vec();
        self.waiting = false;
    }

    fn halted(&self) -> bool {
        !self.waiting
    }

    fn output(&self) -> Self::Output {
        self.received.clone()
    }
}

/// One round in which every node sends its listed packets to neighbors.
/// Nodes with neighbors wait one round for incoming packets.
pub fn exchange(
    graph: &Graph,
    outgoing: Vec<Vec<(NodeId, Packet)>>,
    config: &EngineConfig,
) -> Result<(Vec<Vec<(NodeId, Packet)>>, RoundTrace), RoutingError> {
    let programs = outgoing
        .into_iter()
        .enumerate()
        .map(|(v, out)| Exchange { outgoing: out, waiting: graph.degree(v) > 0, received: Vec::new() })
        .collect();
    let out = run(graph, programs, config)?;
    Ok((out.outputs, out.trace))
}
