use std::collections::{HashMap, VecDeque};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{Instance, NodeId, PartId};

use super::{Shortcut, ShortcutError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongestionReport {
    /// Indexed by graph edge: number of parts `i` with the edge in `G[P_i] + H_i`.
    pub per_edge_load: Vec<u32>,
    pub congestion: u32,
    /// Indexed by graph edge: number of parts `i` with the edge in `H_i`.
    pub per_edge_shortcut_load: Vec<u32>,
    pub shortcut_congestion: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QualityReport {
    /// Counts use of an edge in `G[P_i] + H_i`.
    pub congestion: u32,
    /// Counts only membership in `H_i`.
    pub shortcut_congestion: u32,
    pub block_parameter: usize,
    pub dilation: u32,
    pub per_part_blocks: Vec<usize>,
    pub per_part_dilation: Vec<u32>,
    pub per_edge_load: Vec<u32>,
    pub per_edge_shortcut_load: Vec<u32>,
}

pub fn measure_congestion(instance: &Instance, shortcut: &Shortcut) -> CongestionReport {
    let graph = &instance.graph;
    let tree = &instance.tree;
    let partition = &instance.partition;
    let m = graph.edge_count();
    let mut load = vec![0u32; m];
    let mut h_load = vec![0u32; m];
    let mut in_h = vec![false; m];
    for i in 0..shortcut.part_count() {
        let h_edges: Vec<usize> = shortcut.edges(i).iter().map(|e| tree.parent_edge(e.child()).expect("non-root")).collect();
        for &e in &h_edges {
            in_h[e] = true;
            h_load[e] += 1;
            load[e] += 1;
        }
        if let Some(part) = partition.parts().get(i) {
            for &v in part {
                for &(w, e) in graph.neighbors(v) {
                    if v < w && partition.part_of(w) == Some(i) && !in_h[e] {
                        load[e] += 1;
                    }
                }
            }
        }
        for &e in &h_edges {
            in_h[e] = false;
        }
    }
    CongestionReport {
        congestion: load.iter().copied().max().unwrap_or(0),
        shortcut_congestion: h_load.iter().copied().max().unwrap_or(0),
        per_edge_load: load,
        per_edge_shortcut_load: h_load,
    }
}

/// Number of connected components of `(V, H_part)` containing a node of `P_part`.
pub fn block_components(instance: &Instance, shortcut: &Shortcut, part: PartId) -> Result<usize, ShortcutError> {
    shortcut.check_part(part)?;
    if part >= instance.partition.len() {
        return Err(ShortcutError::UnknownPart { part, count: instance.partition.len() });
    }
    let tree = &instance.tree;
    let mut local: HashMap<NodeId, usize> = HashMap::new();
    let members = instance.partition.part(part);
    for &v in members {
        let k = local.len();
        local.entry(v).or_insert(k);
    }
    let edges: Vec<(NodeId, NodeId)> = shortcut
        .edges(part)
        .iter()
        .map(|e| (e.child(), tree.parent(e.child()).expect("non-root")))
        .collect();
    for &(a, b) in &edges {
        for x in [a, b] {
            let k = local.len();
            local.entry(x).or_insert(k);
        }
    }
    let mut uf = UnionFind::<usize>::new(local.len());
    for &(a, b) in &edges {
        uf.union(local[&a], local[&b]);
    }
    let mut roots: Vec<usize> = members.iter().map(|v| uf.find(local[v])).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}

/// Diameter of `G[P_i] + H_i` for every part, measured on the connected
/// component that contains `P_i`.
pub fn measure_dilation(instance: &Instance, shortcut: &Shortcut) -> Vec<u32> {
    (0..instance.partition.len()).into_par_iter().map(|i| part_diameter(instance, shortcut, i)).collect()
}

fn part_diameter(instance: &Instance, shortcut: &Shortcut, part: PartId) -> u32 {
    let graph = &instance.graph;
    let tree = &instance.tree;
    let partition = &instance.partition;
    let mut local: HashMap<NodeId, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut index = |v: NodeId, nodes: &mut Vec<NodeId>| -> usize {
        *local.entry(v).or_insert_with(|| {
            nodes.push(v);
            nodes.len() - 1
        })
    };
    let mut edges = Vec::new();
    for &v in partition.part(part) {
        let a = index(v, &mut nodes);
        for &(w, _) in graph.neighbors(v) {
            if v < w && partition.part_of(w) == Some(part) {
                let b = index(w, &mut nodes);
                edges.push((a, b));
            }
        }
    }
    for e in shortcut.edges(part) {
        let a = index(e.child(), &mut nodes);
        let b = index(tree.parent(e.child()).expect("non-root"), &mut nodes);
        edges.push((a, b));
    }
    let mut adj = vec![Vec::new(); nodes.len()];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let component = bfs(&adj, 0);
    let sources: Vec<usize> = (0..nodes.len()).filter(|&x| component[x].is_some()).collect();
    sources.iter().map(|&s| bfs(&adj, s).into_iter().flatten().max().unwrap_or(0)).max().unwrap_or(0)
}

fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].expect("queued nodes have a distance");
        for &y in &adj[x] {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn measure_quality(instance: &Instance, shortcut: &Shortcut) -> QualityReport {
    let congestion = measure_congestion(instance, shortcut);
    let per_part_blocks: Vec<usize> = (0..instance.partition.len())
        .map(|i| block_components(instance, shortcut, i).expect("part in range"))
        .collect();
    let per_part_dilation = measure_dilation(instance, shortcut);
    QualityReport {
        congestion: congestion.congestion,
        shortcut_congestion: congestion.shortcut_congestion,
        block_parameter: per_part_blocks.iter().copied().max().unwrap_or(0),
        dilation: per_part_dilation.iter().copied().max().unwrap_or(0),
        per_part_blocks,
        per_part_dilation,
        per_edge_load: congestion.per_edge_load,
        per_edge_shortcut_load: congestion.per_edge_shortcut_load,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, Partition, TreeEdge};

    fn path_instance(n: usize, parts: Vec<Vec<NodeId>>) -> Instance {
        let g = Graph::unweighted(n, (0..n - 1).map(|v| (v, v + 1))).unwrap();
        let p = Partition::new(&g, parts).unwrap();
        Instance::with_bfs_tree(g, 0, p).unwrap()
    }

    #[test]
    fn empty_shortcut_on_singletons_has_zero_load() {
        let inst = path_instance(4, (0..4).map(|v| vec![v]).collect());
        let s = Shortcut::empty(&inst.tree, 4);
        let q = measure_quality(&inst, &s);
        assert_eq!(q.congestion, 0);
        assert_eq!(q.block_parameter, 1);
        assert_eq!(q.dilation, 0);
    }

    #[test]
    fn whole_tree_single_part() {
        let inst = path_instance(5, vec![(0..5).collect()]);
        let s = Shortcut::from_tree_edges(&inst.tree, vec![inst.tree.edges().collect()]).unwrap();
        let q = measure_quality(&inst, &s);
        assert_eq!(q.congestion, 1);
        assert!(q.per_edge_load.iter().all(|&l| l == 1));
        assert_eq!(q.per_part_blocks, vec![1]);
        assert_eq!(q.dilation, 4);
    }

    #[test]
    fn rootward_paths_stack_on_top_edge() {
        let inst = path_instance(4, vec![vec![1], vec![2], vec![3]]);
        let to_root = |v: usize| (1..=v).map(TreeEdge).collect::<Vec<_>>();
        let s = Shortcut::from_tree_edges(&inst.tree, vec![to_root(1), to_root(2), to_root(3)]).unwrap();
        let c = measure_congestion(&inst, &s);
        let top = inst.graph.edge_between(0, 1).unwrap();
        assert_eq!(c.per_edge_load[top], 3);
        assert_eq!(c.congestion, 3);
        assert_eq!(c.shortcut_congestion, 3);
    }

    #[test]
    fn intra_part_edges_count_for_definitional_congestion_only() {
        let inst = path_instance(4, vec![vec![0, 1, 2, 3]]);
        let s = Shortcut::empty(&inst.tree, 1);
        let c = measure_congestion(&inst, &s);
        assert_eq!(c.congestion, 1);
        assert_eq!(c.shortcut_congestion, 0);
        let q = measure_quality(&inst, &s);
        assert_eq!(q.per_part_blocks, vec![4]);
        assert_eq!(q.dilation, 3);
    }

    #[test]
    fn blocks_ignore_components_away_from_the_part() {
        // path 0..7, part {2, 5}; H = {(1,2)}, {(4,5)}, {(6,7)}
        let inst = path_instance(8, vec![vec![2, 3, 4, 5]]);
        let s = Shortcut::from_tree_edges(&inst.tree, vec![vec![TreeEdge(2), TreeEdge(5), TreeEdge(7)]]).unwrap();
        assert_eq!(block_components(&inst, &s, 0).unwrap(), 3);
        assert!(block_components(&inst, &s, 1).is_err());
        // the (6,7) component is not reachable from the part
        assert_eq!(measure_dilation(&inst, &s), vec![4]);
    }
}
