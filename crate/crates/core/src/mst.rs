//! Boruvka MST on top of shortcut routing.
//!
//! Each phase builds a shortcut for the current partition with the doubling
//! wrapper (warm-started from the previous phase's guesses), elects leaders,
//! finds every part's minimum outgoing edge, and flips a head/tail coin per
//! part from shared randomness. Tails whose edge points into a head merge
//! into it and take the head's label. Labels are node IDs, so they fit in
//! one packet label.
//!
//! Edge weights are compared through their rank in `(weight, min endpoint,
//! max endpoint)` order; a rank is below `m < n^2` and fits a packet value.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::congest::{distribute_seed, programs::BfsBuild, programs::Echo, run, EngineConfig, RoundTrace, SharedRandomness, SimError};
use crate::construction::{find_shortcut_doubling, ConstructionError, FindParams, DEFAULT_GAMMA};
use crate::graph::{EdgeId, Graph, GraphError, Instance, NodeId, Partition, PartitionError, RootedTree, Weight};
use crate::routing::{exchange, AggOp, Packet, RoutingError, ShortcutRouter};

#[derive(Debug, Error)]
pub enum MstError {
    #[error("edge {0} has no weight")]
    Unweighted(EdgeId),
    #[error("edges {0} and {1} have the same weight; enable perturbation to break ties")]
    TiedWeights(EdgeId, EdgeId),
    #[error("no single part after {0} phases")]
    PhaseLimit(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Total order on edges by `(weight, min endpoint, max endpoint)`.
#[derive(Debug, Clone)]
pub struct EdgeKeys {
    rank: Vec<u64>,
    by_rank: Vec<EdgeId>,
}

impl EdgeKeys {
    /// Without `perturb`, equal weights are rejected.
    pub fn new(graph: &Graph, perturb: bool) -> Result<Self, MstError> {
        let mut keyed = Vec::with_capacity(graph.edge_count());
        for (id, e) in graph.edges().iter().enumerate() {
            let w = e.weight.ok_or(MstError::Unweighted(id))?;
            keyed.push(((w, e.u.min(e.v), e.u.max(e.v)), id));
        }
        keyed.sort_unstable();
        if !perturb {
            if let Some(pair) = keyed.windows(2).find(|p| p[0].0 .0 == p[1].0 .0) {
                return Err(MstError::TiedWeights(pair[0].1, pair[1].1));
            }
        }
        let by_rank: Vec<EdgeId> = keyed.iter().map(|&(_, id)| id).collect();
        let mut rank = vec![0; by_rank.len()];
        for (r, &id) in by_rank.iter().enumerate() {
            rank[id] = r as u64;
        }
        Ok(Self { rank, by_rank })
    }

    pub fn rank(&self, e: EdgeId) -> u64 {
        self.rank[e]
    }

    pub fn edge(&self, rank: u64) -> EdgeId {
        self.by_rank[rank as usize]
    }
}

#[derive(Debug, Clone)]
pub struct MinOutgoing {
    /// Minimum outgoing edge of each part; `None` when the part has none.
    pub per_part: Vec<Option<EdgeId>>,
    /// The same, as learned by each part node.
    pub per_node: Vec<Option<EdgeId>>,
    /// Label of every neighbor, from the initial exchange.
    pub neighbor_labels: Vec<Vec<(NodeId, usize)>>,
    pub trace: RoundTrace,
}

/// Each node learns its neighbors' labels, the part's minimum over its
/// nodes' outgoing edges reaches the leader by convergecast and goes back
/// out by broadcast. `labels` must agree exactly within parts; `b` bounds the
/// shortcut's blocks per part.
pub fn min_outgoing_edge(
    instance: &Instance,
    router: &ShortcutRouter<'_>,
    b: usize,
    leaders: &[Option<NodeId>],
    labels: &[usize],
    keys: &EdgeKeys,
    config: &EngineConfig,
) -> Result<MinOutgoing, MstError> {
    let graph = &instance.graph;
    let n = graph.node_count();
    let outgoing = (0..n)
        .map(|v| graph.neighbors(v).iter().map(|&(w, _)| (w, Packet { label: labels[v], value: None })).collect())
        .collect();
    let (received, mut trace) = exchange(graph, outgoing, config)?;
    let neighbor_labels: Vec<Vec<(NodeId, usize)>> =
        received.into_iter().map(|r| r.into_iter().map(|(w, p)| (w, p.label)).collect()).collect();
    let local: Vec<Option<u64>> = (0..n)
        .map(|v| {
            neighbor_labels[v]
                .iter()
                .filter(|&&(_, l)| l != labels[v])
                .map(|&(w, _)| keys.rank(graph.edge_between(v, w).expect("neighbor")))
                .min()
        })
        .collect();
    let agg = router.part_convergecast(b, leaders, &local, AggOp::Min)?;
    trace.then(&agg.trace);
    let mut at_leader = vec![None; n];
    for (i, part) in instance.partition.parts().iter().enumerate() {
        if let Some(&l) = part.iter().find(|&&v| leaders[v] == Some(v)) {
            at_leader[l] = agg.per_part[i];
        }
    }
    let cast = router.part_broadcast(b, leaders, &at_leader)?;
    trace.then(&cast.trace);
    Ok(MinOutgoing {
        per_part: agg.per_part.iter().map(|r| r.map(|r| keys.edge(r))).collect(),
        per_node: cast.per_node.iter().map(|r| r.map(|r| keys.edge(r))).collect(),
        neighbor_labels,
        trace,
    })
}

#[derive(Debug, Clone)]
pub struct MstParams {
    pub seed: u64,
    pub gamma: f64,
    /// Break weight ties by endpoint IDs instead of rejecting them.
    pub perturb: bool,
    /// Defaults to `8 ceil(log2 n)` (at least 1).
    pub max_phases: Option<usize>,
    pub engine: EngineConfig,
}

impl Default for MstParams {
    fn default() -> Self {
        Self { seed: 0, gamma: DEFAULT_GAMMA, perturb: false, max_phases: None, engine: EngineConfig::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseStats {
    pub phase: usize,
    pub parts: usize,
    pub c: u32,
    pub b: u32,
    pub rounds: u64,
    /// Merges accepted this phase.
    #[serde(skip)]
    pub merges: Vec<Merge>,
    /// Node labels at the start of the phase.
    #[serde(skip)]
    pub labels: Vec<usize>,
}

/// A tail part joining a head part over the tail's minimum outgoing edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Merge {
    pub edge: EdgeId,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone)]
pub struct MstOutcome {
    pub edges: BTreeSet<EdgeId>,
    pub weight: Weight,
    /// Per node, whether each incident edge (in adjacency order) is in the tree.
    pub node_bits: Vec<Vec<bool>>,
    /// Total weight as computed by each node.
    pub node_weight: Vec<Weight>,
    pub phases: usize,
    pub stats: Vec<PhaseStats>,
    pub trace: RoundTrace,
}

pub fn default_max_phases(n: usize) -> usize {
    (8 * crate::congest::wire::ceil_log2(n as u64) as usize).max(1)
}

pub fn boruvka_mst(graph: &Graph, params: &MstParams) -> Result<MstOutcome, MstError> {
    let cfg = &params.engine;
    let n = graph.node_count();
    let keys = EdgeKeys::new(graph, params.perturb)?;
    graph.check_connected()?;
    let mut trace = RoundTrace::empty(cfg.wire_format(n).budget, cfg.log_messages);

    let bfs = run(graph, BfsBuild::programs(n, 0), cfg)?;
    trace.then(&bfs.trace);
    let parents = bfs.outputs.iter().map(|o| o.and_then(|(p, _)| p)).collect();
    let tree = RootedTree::from_parents(graph, 0, parents)?;
    let (seeds, t) = distribute_seed(graph, &tree, SharedRandomness::from_u64(params.seed), cfg)?;
    trace.then(&t);
    let shared = seeds[0];

    let limit = params.max_phases.unwrap_or_else(|| default_max_phases(n));
    let mut labels: Vec<usize> = (0..n).collect();
    let mut in_mst: Vec<Vec<bool>> = (0..n).map(|v| vec![false; graph.degree(v)]).collect();
    let (mut c, mut b) = (1u32, 1u32);
    let mut stats = Vec::new();
    let mut phase = 0;
    loop {
        if phase == limit {
            return Err(MstError::PhaseLimit(phase));
        }
        phase += 1;
        let before = trace.rounds_elapsed;
        let partition = Partition::from_labels(graph, &labels.iter().copied().map(Some).collect::<Vec<_>>())?;
        let parts = partition.len();
        let instance = Instance::new(graph.clone(), tree.clone(), partition);
        let found = find_shortcut_doubling(
            &instance,
            FindParams { c, b, gamma: params.gamma, max_iterations: None },
            shared.derive("phase", phase as u64),
            cfg,
        )?;
        trace.then(&found.trace);
        (c, b) = (found.c, found.b);
        let route_b = 3 * b as usize;
        let router = ShortcutRouter::new(&instance, &found.shortcut, cfg)?;
        let leaders = router.elect_leaders(route_b)?;
        trace.then(&leaders.trace);
        let mo = min_outgoing_edge(&instance, &router, route_b, &leaders.per_node, &labels, &keys, cfg)?;
        trace.then(&mo.trace);
        let start_labels = labels.clone();
        if mo.per_node.iter().all(Option::is_none) {
            stats.push(PhaseStats { phase, parts, c, b, rounds: trace.rounds_elapsed - before, merges: Vec::new(), labels: start_labels });
            break;
        }

        let coins = shared.derive("coin", phase as u64);
        let is_head = |label: usize| coins.part_rng(label).gen_bool(0.5);
        // the tail endpoint of an accepted edge becomes the relabel source
        let mut source = vec![None; n];
        let mut new_label = vec![None; n];
        let mut notify: Vec<Vec<(NodeId, Packet)>> = vec![Vec::new(); n];
        let mut merges = Vec::new();
        for v in 0..n {
            let Some(e) = mo.per_node[v] else { continue };
            let edge = graph.edge(e);
            if edge.u != v && edge.v != v {
                continue;
            }
            let w = edge.other(v);
            let wl = mo.neighbor_labels[v].iter().find(|&&(x, _)| x == w).map(|&(_, l)| l).expect("neighbor label");
            if !is_head(labels[v]) && is_head(wl) {
                source[v] = Some(v);
                new_label[v] = Some(wl as u64);
                notify[v].push((w, Packet { label: labels[v], value: Some(keys.rank(e)) }));
                mark(graph, &mut in_mst, v, w);
                merges.push(Merge { edge: e, tail: labels[v], head: wl });
            }
        }
        let (received, t) = exchange(graph, notify, cfg)?;
        trace.then(&t);
        for (w, got) in received.iter().enumerate() {
            for &(v, _) in got {
                mark(graph, &mut in_mst, w, v);
            }
        }
        let relabel = router.part_broadcast(route_b, &source, &new_label)?;
        trace.then(&relabel.trace);
        for v in 0..n {
            if let Some(l) = relabel.per_node[v] {
                labels[v] = l as usize;
            }
        }
        merges.sort_unstable_by_key(|m| m.edge);
        stats.push(PhaseStats { phase, parts, c, b, rounds: trace.rounds_elapsed - before, merges, labels: start_labels });
    }

    // each edge's weight is counted at its smaller endpoint
    let contribution: Vec<Weight> = (0..n)
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .zip(&in_mst[v])
                .filter(|&(&(w, _), &bit)| bit && v < w)
                .map(|(&(_, e), _)| graph.edge(e).weight.expect("weighted"))
                .sum()
        })
        .collect();
    let (node_weight, t) = tree_sum(graph, &tree, &contribution, cfg)?;
    trace.then(&t);
    let edges: BTreeSet<EdgeId> = (0..n)
        .flat_map(|v| graph.neighbors(v).iter().zip(&in_mst[v]).filter(|(_, &bit)| bit).map(|(&(_, e), _)| e))
        .collect();
    let weight = edges.iter().map(|&e| graph.edge(e).weight.expect("weighted")).sum();
    Ok(MstOutcome { edges, weight, node_bits: in_mst, node_weight, phases: phase, stats, trace })
}

fn mark(graph: &Graph, bits: &mut [Vec<bool>], v: NodeId, w: NodeId) {
    let k = graph.neighbors(v).iter().position(|&(x, _)| x == w).expect("adjacent");
    bits[v][k] = true;
}

/// Whole-tree sum of 64-bit values, one echo per `id_bits`-wide digit so
/// every partial sum fits a message value.
fn tree_sum(graph: &Graph, tree: &RootedTree, values: &[u64], cfg: &EngineConfig) -> Result<(Vec<u64>, RoundTrace), MstError> {
    let n = graph.node_count();
    let d = cfg.wire_format(n).id_bits;
    let mask = (1u64 << d) - 1;
    let mut trace = RoundTrace::empty(cfg.wire_format(n).budget, cfg.log_messages);
    let mut totals = vec![0u64; n];
    for digit in 0..u64::BITS.div_ceil(d) {
        let shift = digit * d;
        let part: Vec<u64> = values.iter().map(|&x| x >> shift & mask).collect();
        let out = run(graph, Echo::programs(tree, &part), cfg)?;
        trace.then(&out.trace);
        for (v, total) in out.outputs.iter().enumerate() {
            totals[v] = totals[v].wrapping_add(total.expect("echo completes") << shift);
        }
    }
    Ok((totals, trace))
}
