//! Seeded instance generators.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{write_graph, write_partition, Graph, GraphError, Instance, NodeId, Partition, PartitionError, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    Path { n: usize },
    /// Center 0 and leaves `1..=leaves`.
    Star { leaves: usize },
    /// Node `r * cols + c` at row `r`, column `c`.
    Grid { rows: usize, cols: usize },
    /// Grid with wrap-around edges; both sides at least 3.
    Torus { rows: usize, cols: usize },
    /// Stacked triangulation: start from a triangle and repeatedly insert a
    /// node into a uniformly chosen face.
    RandomPlanarTriangulation { n: usize },
    /// Random recursive tree plus `chords` extra edges between random non-adjacent pairs.
    RandomTreePlusChords { n: usize, chords: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scheme {
    Singletons,
    /// One part per grid row; a path is a single row.
    Rows,
    /// Voronoi cells of multi-source BFS from `k` random centers.
    BfsBalls { k: usize },
    /// `k` parts grown from random centers by attaching random frontier nodes.
    RandomConnected { k: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    #[default]
    Unit,
    /// A random permutation of `1..=m`.
    UniformDistinct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub partition: Scheme,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub weights: WeightScheme,
    /// Defaults to node 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<NodeId>,
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("infeasible spec: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub partition: Partition,
    pub root: NodeId,
}

impl Generated {
    /// Attaches the BFS tree from the suggested root.
    pub fn instance(self) -> Instance {
        Instance::with_bfs_tree(self.graph, self.root, self.partition).expect("generated graphs are connected")
    }

    /// Graph file, a blank line, then the partition file.
    pub fn to_text(&self) -> String {
        format!("{}\n{}", write_graph(&self.graph), write_partition(&self.partition))
    }
}

impl InstanceSpec {
    pub fn new(family: Family, partition: Scheme, seed: u64) -> Self {
        Self { family, partition, seed, weights: WeightScheme::Unit, root: None }
    }

    pub fn with_weights(mut self, weights: WeightScheme) -> Self {
        self.weights = weights;
        self
    }
}

fn stream(seed: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose);
    rng
}

pub fn generate(spec: &InstanceSpec) -> Result<Generated, GenerateError> {
    let (n, edges) = topology(&spec.family, &mut stream(spec.seed, 0))?;
    let weights: Vec<Option<Weight>> = match spec.weights {
        WeightScheme::Unit => vec![Some(1); edges.len()],
        WeightScheme::UniformDistinct => {
            let mut w: Vec<Weight> = (1..=edges.len() as Weight).collect();
            w.shuffle(&mut stream(spec.seed, 2));
            w.into_iter().map(Some).collect()
        }
    };
    let graph = Graph::new(n, edges.iter().zip(weights).map(|(&(u, v), w)| (u, v, w)))?;
    graph.check_connected()?;
    let root = spec.root.unwrap_or(0);
    graph.check_node(root)?;
    let parts = partition(&spec.family, &spec.partition, &graph, &mut stream(spec.seed, 1))?;
    let partition = Partition::new(&graph, parts)?;
    Ok(Generated { graph, partition, root })
}

fn grid_edges(rows: usize, cols: usize, wrap: bool) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            } else if wrap {
                edges.push((r * cols, v));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            } else if wrap {
                edges.push((c, v));
            }
        }
    }
    edges
}

fn topology(family: &Family, rng: &mut ChaCha8Rng) -> Result<(usize, Vec<(NodeId, NodeId)>), GenerateError> {
    let infeasible = |m: &str| Err(GenerateError::Infeasible(m.to_string()));
    Ok(match *family {
        Family::Path { n } => {
            if n == 0 {
                return infeasible("path needs at least one node");
            }
            (n, (1..n).map(|v| (v - 1, v)).collect())
        }
        Family::Star { leaves } => (leaves + 1, (1..=leaves).map(|v| (0, v)).collect()),
        Family::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return infeasible("grid sides must be positive");
            }
            (rows * cols, grid_edges(rows, cols, false))
        }
        Family::Torus { rows, cols } => {
            if rows < 3 || cols < 3 {
                return infeasible("torus sides must be at least 3");
            }
            (rows * cols, grid_edges(rows, cols, true))
        }
        Family::RandomPlanarTriangulation { n } => {
            if n < 3 {
                return infeasible("triangulation needs at least 3 nodes");
            }
            let mut edges = vec![(0, 1), (1, 2), (0, 2)];
            // both sides of the initial triangle are faces
            let mut faces = vec![[0, 1, 2], [0, 1, 2]];
            for k in 3..n {
                let f = rng.gen_range(0..faces.len());
                let [a, b, c] = faces.swap_remove(f);
                edges.extend([(a, k), (b, k), (c, k)]);
                faces.extend([[a, b, k], [b, c, k], [a, c, k]]);
            }
            (n, edges)
        }
        Family::RandomTreePlusChords { n, chords } => {
            if n == 0 {
                return infeasible("tree needs at least one node");
            }
            let mut present: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
            let mut edges = Vec::new();
            for v in 1..n {
                let u = rng.gen_range(0..v);
                present.insert((u, v));
                edges.push((u, v));
            }
            let free = n * (n - 1) / 2 - edges.len();
            if chords > free {
                return infeasible("more chords than non-adjacent pairs");
            }
            while edges.len() < n - 1 + chords {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                let e = (a.min(b), a.max(b));
                if a != b && present.insert(e) {
                    edges.push(e);
                }
            }
            (n, edges)
        }
    })
}

fn partition(family: &Family, scheme: &Scheme, graph: &Graph, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<NodeId>>, GenerateError> {
    let n = graph.node_count();
    let check_k = |k: usize| {
        if k == 0 || k > n {
            Err(GenerateError::Infeasible(format!("{k} parts on {n} nodes")))
        } else {
            Ok(())
        }
    };
    Ok(match *scheme {
        Scheme::Singletons => (0..n).map(|v| vec![v]).collect(),
        Scheme::Rows => match *family {
            Family::Grid { rows, cols } | Family::Torus { rows, cols } => {
                (0..rows).map(|r| (r * cols..(r + 1) * cols).collect()).collect()
            }
            Family::Path { n } => vec![(0..n).collect()],
            _ => return Err(GenerateError::Infeasible("rows need a grid, torus or path".into())),
        },
        Scheme::BfsBalls { k } => {
            check_k(k)?;
            let centers = (0..n).choose_multiple(rng, k);
            let mut owner = vec![None; n];
            let mut queue = VecDeque::new();
            for (i, &c) in centers.iter().enumerate() {
                owner[c] = Some(i);
                queue.push_back(c);
            }
            while let Some(x) = queue.pop_front() {
                for &(y, _) in graph.neighbors(x) {
                    if owner[y].is_none() {
                        owner[y] = owner[x];
                        queue.push_back(y);
                    }
                }
            }
            group(&owner, k)
        }
        Scheme::RandomConnected { k } => {
            check_k(k)?;
            let centers = (0..n).choose_multiple(rng, k);
            let mut owner = vec![None; n];
            for (i, &c) in centers.iter().enumerate() {
                owner[c] = Some(i);
            }
            let mut frontier: Vec<(NodeId, NodeId)> =
                centers.iter().flat_map(|&c| graph.neighbors(c).iter().map(move |&(y, _)| (c, y))).collect();
            while !frontier.is_empty() {
                let (x, y) = frontier.swap_remove(rng.gen_range(0..frontier.len()));
                if owner[y].is_some() {
                    continue;
                }
                owner[y] = owner[x];
                frontier.extend(graph.neighbors(y).iter().filter(|&&(z, _)| owner[z].is_none()).map(|&(z, _)| (y, z)));
            }
            group(&owner, k)
        }
    })
}

fn group(owner: &[Option<usize>], k: usize) -> Vec<Vec<NodeId>> {
    let mut parts = vec![Vec::new(); k];
    for (v, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            parts[*i].push(v);
        }
    }
    parts
}
