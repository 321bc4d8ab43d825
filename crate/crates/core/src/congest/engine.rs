//! Lockstep execution of per-node programs.
//!
//! Timing: `init` runs at step 0; a message emitted at step `r` crosses its
//! edge in round `r + 1` and is handed to the receiver's `step` for that
//! round. The run ends once every node has halted; `rounds_elapsed` is the
//! last round executed. Messages addressed to a node that has already halted
//! are dropped.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, NodeId};

use super::trace::RoundTrace;
use super::wire::{self, Message, Wire, WireError, WireFormat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("round {round}: node {from} sent {bits} bits to {to}, budget is {budget}")]
    BudgetExceeded { round: u64, from: NodeId, to: NodeId, bits: u32, budget: u32 },
    #[error("round {round}: node {from} sent more than one message to {to}")]
    DuplicateSend { round: u64, from: NodeId, to: NodeId },
    #[error("round {round}: node {from} sent to non-neighbor {to}")]
    NotNeighbor { round: u64, from: NodeId, to: NodeId },
    #[error("round {round}: node {from} failed to encode a message: {source}")]
    Encode { round: u64, from: NodeId, source: WireError },
    #[error("round {round}: node {to} failed to decode a message from {from}: {source}")]
    Decode { round: u64, from: NodeId, to: NodeId, source: WireError },
    #[error("round limit {round_limit} reached before all nodes halted")]
    Timeout { round_limit: u64 },
    #[error("expected {expected} programs, got {got}")]
    ProgramCount { expected: usize, got: usize },
    #[error("round {round}: node {node} is not a deterministic function of its state and inbox")]
    ReplayMismatch { round: u64, node: NodeId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Steps nodes of a round concurrently; the trace is identical to
    /// [`ExecMode::Sequential`].
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Message budget multiplier: `B = kappa * max(1, ceil(log2 n))`.
    pub kappa: u32,
    pub round_limit: u64,
    pub log_messages: bool,
    /// Seed for the per-node private PRNG streams.
    pub seed: u64,
    pub mode: ExecMode,
}

pub const DEFAULT_KAPPA: u32 = 4;

impl Default for EngineConfig {
    fn default() -> Self {
        Self { kappa: DEFAULT_KAPPA, round_limit: 1 << 24, log_messages: false, seed: 0, mode: ExecMode::Sequential }
    }
}

impl EngineConfig {
    pub fn with_log(mut self, log: bool) -> Self {
        self.log_messages = log;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_round_limit(mut self, limit: u64) -> Self {
        self.round_limit = limit;
        self
    }

    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn wire_format(&self, node_count: usize) -> WireFormat {
        WireFormat::new(node_count, self.kappa)
    }
}

/// What a node sees while handling one step.
pub struct Ctx<'a, M> {
    node: NodeId,
    round: u64,
    neighbors: &'a [(NodeId, EdgeId)],
    outbox: &'a mut Vec<(NodeId, M)>,
    rng: &'a mut ChaCha8Rng,
}

impl<'a, M> Ctx<'a, M> {
    pub fn id(&self) -> NodeId {
        self.node
    }

    /// 0 during `init`; `r` while handling the inbox of round `r`.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn neighbors(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors.iter().map(|&(v, _)| v)
    }

    /// Queues `msg` for transmission to `to` in the next round.
    pub fn send(&mut self, to: NodeId, msg: M) {
        self.outbox.push((to, msg));
    }

    /// This node's private random stream.
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        self.rng
    }
}

/// Per-node protocol logic.
pub trait NodeProgram {
    type Msg: Wire;
    type Output;

    fn init(&mut self, ctx: &mut Ctx<'_, Self::Msg>);
    /// `inbox` holds the messages of the current round, sorted by sender.
    fn step(&mut self, ctx: &mut Ctx<'_, Self::Msg>, inbox: &[(NodeId, Self::Msg)]);
    fn halted(&self) -> bool;
    fn output(&self) -> Self::Output;
}

#[derive(Debug, Clone)]
pub struct RunOutcome<O> {
    pub outputs: Vec<O>,
    pub trace: RoundTrace,
}

struct Slot<P: NodeProgram> {
    program: P,
    rng: ChaCha8Rng,
    inbox: Vec<(NodeId, P::Msg)>,
    outbox: Vec<(NodeId, P::Msg)>,
}

type Replay<P> = dyn Fn(&P, &ChaCha8Rng, NodeId, u64, &[(NodeId, EdgeId)], &[(NodeId, <P as NodeProgram>::Msg)]) -> Vec<(NodeId, <P as NodeProgram>::Msg)>
    + Sync;

/// Runs one program per node until all halt or `round_limit` is reached.
pub fn run<P>(graph: &Graph, programs: Vec<P>, config: &EngineConfig) -> Result<RunOutcome<P::Output>, SimError>
where
    P: NodeProgram + Send,
    P::Msg: Send,
{
    execute(graph, programs, config, None)
}

/// Like [`run`], but before every step the node's state is snapshotted and
/// the step is replayed from the snapshot; any divergence in the emitted
/// messages is reported as [`SimError::ReplayMismatch`].
pub fn run_audited<P>(graph: &Graph, programs: Vec<P>, config: &EngineConfig) -> Result<RunOutcome<P::Output>, SimError>
where
    P: NodeProgram + Clone + Send + Sync,
    P::Msg: Send + Sync,
{
    let replay = |program: &P, rng: &ChaCha8Rng, node, round, neighbors: &[(NodeId, EdgeId)], inbox: &[(NodeId, P::Msg)]| {
        let mut program = program.clone();
        let mut rng = rng.clone();
        let mut outbox = Vec::new();
        let mut ctx = Ctx { node, round, neighbors, outbox: &mut outbox, rng: &mut rng };
        program.step(&mut ctx, inbox);
        outbox
    };
    execute(graph, programs, &config.clone().with_mode(ExecMode::Sequential), Some(&replay))
}

fn execute<P>(
    graph: &Graph,
    programs: Vec<P>,
    config: &EngineConfig,
    replay: Option<&Replay<P>>,
) -> Result<RunOutcome<P::Output>, SimError>
where
    P: NodeProgram + Send,
    P::Msg: Send,
{
    let n = graph.node_count();
    if programs.len() != n {
        return Err(SimError::ProgramCount { expected: n, got: programs.len() });
    }
    let format = config.wire_format(n);
    let mut trace = RoundTrace::new(format.budget, config.log_messages);
    let mut slots: Vec<Slot<P>> = programs
        .into_iter()
        .enumerate()
        .map(|(v, program)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(v as u64);
            Slot { program, rng, inbox: Vec::new(), outbox: Vec::new() }
        })
        .collect();

    for (v, slot) in slots.iter_mut().enumerate() {
        let mut ctx = Ctx { node: v, round: 0, neighbors: graph.neighbors(v), outbox: &mut slot.outbox, rng: &mut slot.rng };
        slot.program.init(&mut ctx);
    }
    let mut wires = transmit(graph, &mut slots, format, 1, &mut trace)?;

    let mut round = 0u64;
    while slots.iter().any(|s| !s.program.halted()) {
        if round == config.round_limit {
            return Err(SimError::Timeout { round_limit: config.round_limit });
        }
        round += 1;
        deliver(&mut slots, &mut wires, format, round)?;

        let step = |v: NodeId, slot: &mut Slot<P>| -> Option<Vec<(NodeId, P::Msg)>> {
            if slot.program.halted() {
                slot.inbox.clear();
                return None;
            }
            let neighbors = graph.neighbors(v);
            let expected = replay.map(|r| r(&slot.program, &slot.rng, v, round, neighbors, &slot.inbox));
            let mut ctx = Ctx { node: v, round, neighbors, outbox: &mut slot.outbox, rng: &mut slot.rng };
            slot.program.step(&mut ctx, &slot.inbox);
            slot.inbox.clear();
            expected
        };
        match config.mode {
            ExecMode::Parallel if replay.is_none() => {
                slots.par_iter_mut().enumerate().for_each(|(v, slot)| {
                    step(v, slot);
                });
            }
            _ => {
                for (v, slot) in slots.iter_mut().enumerate() {
                    if let Some(expected) = step(v, slot) {
                        if !same_messages(&expected, &slot.outbox, format) {
                            return Err(SimError::ReplayMismatch { round, node: v });
                        }
                    }
                }
            }
        }
        wires = transmit(graph, &mut slots, format, round + 1, &mut trace)?;
    }
    trace.rounds_elapsed = round;
    let outputs = slots.iter().map(|s| s.program.output()).collect();
    Ok(RunOutcome { outputs, trace })
}

fn same_messages<M: Wire>(a: &[(NodeId, M)], b: &[(NodeId, M)], format: WireFormat) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|((ta, ma), (tb, mb))| {
            ta == tb && wire::encode(ma, format).ok() == wire::encode(mb, format).ok()
        })
}

/// Validates and encodes every queued send; returns `(from, to, bits)` in
/// sender order.
fn transmit<P: NodeProgram>(
    graph: &Graph,
    slots: &mut [Slot<P>],
    format: WireFormat,
    round: u64,
    trace: &mut RoundTrace,
) -> Result<Vec<(NodeId, NodeId, Message)>, SimError> {
    let mut wires = Vec::new();
    for (from, slot) in slots.iter_mut().enumerate() {
        if slot.outbox.is_empty() {
            continue;
        }
        let mut targets: Vec<NodeId> = Vec::with_capacity(slot.outbox.len());
        for (to, msg) in slot.outbox.drain(..) {
            if !graph.are_adjacent(from, to) {
                return Err(SimError::NotNeighbor { round, from, to });
            }
            if targets.contains(&to) {
                return Err(SimError::DuplicateSend { round, from, to });
            }
            targets.push(to);
            let encoded = wire::encode(&msg, format).map_err(|source| SimError::Encode { round, from, source })?;
            let bits = encoded.bit_len();
            if bits > format.budget {
                return Err(SimError::BudgetExceeded { round, from, to, bits, budget: format.budget });
            }
            trace.record(round, from, to, &encoded);
            wires.push((from, to, encoded));
        }
    }
    Ok(wires)
}

fn deliver<P: NodeProgram>(
    slots: &mut [Slot<P>],
    wires: &mut Vec<(NodeId, NodeId, Message)>,
    format: WireFormat,
    round: u64,
) -> Result<(), SimError> {
    for (from, to, encoded) in wires.drain(..) {
        if slots[to].program.halted() {
            continue;
        }
        let msg = wire::decode(&encoded, format).map_err(|source| SimError::Decode { round, from, to, source })?;
        slots[to].inbox.push((from, msg));
    }
    Ok(())
}
