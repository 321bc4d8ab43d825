//! Shared randomness: a root-held seed broadcast down the tree, from which
//! every node derives identical per-part streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::graph::{Graph, NodeId, PartId, RootedTree};

use super::engine::{run, Ctx, EngineConfig, NodeProgram, SimError};
use super::trace::RoundTrace;
use super::wire::{BitReader, BitWriter, Wire, WireError};

pub const SEED_BYTES: usize = 32;
pub const SEED_BITS: u32 = (SEED_BYTES * 8) as u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SharedRandomness {
    seed: [u8; SEED_BYTES],
}

impl SharedRandomness {
    pub fn new(seed: [u8; SEED_BYTES]) -> Self {
        Self { seed }
    }

    /// Expands a 64-bit experiment seed into a full seed.
    pub fn from_u64(seed: u64) -> Self {
        Self::new(Sha256::digest(seed.to_le_bytes()).into())
    }

    pub fn seed(&self) -> &[u8; SEED_BYTES] {
        &self.seed
    }

    /// Stream shared by all nodes of `part`.
    pub fn part_rng(&self, part: PartId) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.seed);
        rng.set_stream(part as u64);
        rng
    }

    /// Independent randomness for a sub-protocol, e.g. one iteration of a loop.
    pub fn derive(&self, label: &str, index: u64) -> Self {
        let mut h = Sha256::new();
        h.update(self.seed);
        h.update(label.as_bytes());
        h.update(index.to_le_bytes());
        Self::new(h.finalize().into())
    }

    fn bit(&self, i: u32) -> u64 {
        ((self.seed[(i / 8) as usize] >> (i % 8)) & 1) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Chunk(u64, u32);

impl Wire for Chunk {
    fn encode(&self, w: &mut BitWriter) -> Result<(), WireError> {
        w.put(self.0, self.1)
    }

    fn decode(r: &mut BitReader<'_>) -> Result<Self, WireError> {
        let width = r.remaining();
        Ok(Chunk(r.take(width)?, width))
    }
}

#[derive(Debug, Clone)]
struct SeedRelay {
    children: Vec<NodeId>,
    chunk_bits: u32,
    chunks: Vec<Chunk>,
    total: usize,
    forwarded: usize,
}

impl SeedRelay {
    fn forward(&mut self, ctx: &mut Ctx<'_, Chunk>) {
        if let Some(chunk) = self.chunks.get(self.forwarded) {
            for &c in &self.children {
                ctx.send(c, chunk.clone());
            }
            self.forwarded += 1;
        }
    }
}

impl NodeProgram for SeedRelay {
    type Msg = Chunk;
    type Output = Option<SharedRandomness>;

    fn init(&mut self, ctx: &mut Ctx<'_, Chunk>) {
        self.forward(ctx);
    }

    fn step(&mut self, ctx: &mut Ctx<'_, Chunk>, inbox: &[(NodeId, Chunk)]) {
        // At most one message per round: from the parent.
        for (_, chunk) in inbox {
            self.chunks.push(chunk.clone());
        }
        self.forward(ctx);
    }

    fn halted(&self) -> bool {
        self.forwarded == self.total || (self.children.is_empty() && self.chunks.len() == self.total)
    }

    fn output(&self) -> Option<SharedRandomness> {
        if self.chunks.len() != self.total {
            return None;
        }
        let mut seed = [0u8; SEED_BYTES];
        let mut i = 0u32;
        for Chunk(bits, width) in &self.chunks {
            for k in 0..*width {
                seed[(i / 8) as usize] |= (((bits >> k) & 1) as u8) << (i % 8);
                i += 1;
            }
        }
        debug_assert_eq!(i, SEED_BITS, "chunk width {}", self.chunk_bits);
        Some(SharedRandomness::new(seed))
    }
}

/// Pipelined broadcast of the root's seed: chunk `k` leaves the root at step
/// `k` and reaches depth `d` in round `k + d`, so the run takes
/// `D + ceil(seed_bits / B) - 1` rounds.
pub fn distribute_seed(
    graph: &Graph,
    tree: &RootedTree,
    seed: SharedRandomness,
    config: &EngineConfig,
) -> Result<(Vec<SharedRandomness>, RoundTrace), SimError> {
    let format = config.wire_format(graph.node_count());
    let chunk_bits = format.budget.min(64);
    let chunks: Vec<Chunk> = (0..SEED_BITS)
        .step_by(chunk_bits as usize)
        .map(|start| {
            let width = chunk_bits.min(SEED_BITS - start);
            let bits = (0..width).fold(0u64, |acc, k| acc | (seed.bit(start + k) << k));
            Chunk(bits, width)
        })
        .collect();
    let total = chunks.len();
    let programs = (0..graph.node_count())
        .map(|v| SeedRelay {
            children: tree.children(v).to_vec(),
            chunk_bits,
            chunks: if v == tree.root() { chunks.clone() } else { Vec::new() },
            total,
            forwarded: 0,
        })
        .collect();
    let out = run(graph, programs, config)?;
    let seeds = out.outputs.into_iter().map(|s| s.expect("every node receives every chunk")).collect();
    Ok((seeds, out.trace))
}
