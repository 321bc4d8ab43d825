use serde::{Deserialize, Serialize};

use super::{EdgeId, Graph, GraphError, NodeId};

/// A tree edge, identified by its lower (child) endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeEdge(pub NodeId);

impl TreeEdge {
    pub fn child(self) -> NodeId {
        self.0
    }
}

/// Rooted spanning tree with parent links, depths and heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    parent_edge: Vec<Option<EdgeId>>,
    children: Vec<Vec<NodeId>>,
    depth: Vec<u32>,
    height: Vec<u32>,
    /// Nodes sorted by (depth, id).
    order: Vec<NodeId>,
}

/// BFS tree of `graph` rooted at `root`. Among several shortest-path parents
/// the one with the smallest ID is chosen.
pub fn bfs_tree(graph: &Graph, root: NodeId) -> Result<RootedTree, GraphError> {
    graph.check_node(root)?;
    let dist = graph.bfs_distances(root);
    if let Some(unreachable) = dist.iter().position(Option::is_none) {
        return Err(GraphError::Disconnected { from: root, unreachable });
    }
    let parent = (0..graph.node_count())
        .map(|v| {
            let dv = dist[v].unwrap_or(0);
            if v == root {
                return None;
            }
            graph
                .neighbors(v)
                .iter()
                .map(|&(u, _)| u)
                .find(|&u| dist[u] == Some(dv - 1))
        })
        .collect();
    RootedTree::from_parents(graph, root, parent)
}

impl RootedTree {
    /// Assembles a tree from parent pointers, validating that it spans the
    /// graph and uses only graph edges.
    pub fn from_parents(graph: &Graph, root: NodeId, parent: Vec<Option<NodeId>>) -> Result<Self, GraphError> {
        let n = graph.node_count();
        graph.check_node(root)?;
        if parent.len() != n {
            return Err(GraphError::InvalidTree(format!("{} parent entries for {} nodes", parent.len(), n)));
        }
        if parent[root].is_some() {
            return Err(GraphError::InvalidTree("root has a parent".into()));
        }
        let mut children = vec![Vec::new(); n];
        let mut parent_edge = vec![None; n];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if v != root => {
                    return Err(GraphError::InvalidTree(format!("node {v} has no parent")));
                }
                None => {}
                Some(p) => {
                    let e = graph
                        .edge_between(v, p)
                        .ok_or_else(|| GraphError::InvalidTree(format!("tree edge ({v}, {p}) is not a graph edge")))?;
                    parent_edge[v] = Some(e);
                    children[p].push(v);
                }
            }
        }
        let mut depth = vec![u32::MAX; n];
        depth[root] = 0;
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &c in &children[x] {
                depth[c] = depth[x] + 1;
                order.push(c);
            }
        }
        if order.len() != n {
            return Err(GraphError::InvalidTree("parent pointers contain a cycle or do not span".into()));
        }
        order.sort_by_key(|&v| (depth[v], v));
        let mut height = vec![0u32; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                height[p] = height[p].max(height[v] + 1);
            }
        }
        Ok(Self { root, parent, parent_edge, children, depth, height, order })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    /// Graph edge ID of `v`'s parent edge.
    pub fn parent_edge(&self, v: NodeId) -> Option<EdgeId> {
        self.parent_edge[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v]
    }

    /// Distance from `v` to the farthest leaf of its subtree.
    pub fn height(&self, v: NodeId) -> u32 {
        self.height[v]
    }

    /// Depth of the deepest node (D).
    pub fn max_depth(&self) -> u32 {
        self.height[self.root]
    }

    /// Nodes in (depth, id) order; reverse it for bottom-up sweeps.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// All `n - 1` tree edges, ordered by child ID.
    pub fn edges(&self) -> impl Iterator<Item = TreeEdge> + '_ {
        (0..self.node_count()).filter(|&v| v != self.root).map(TreeEdge)
    }

    pub fn edge_count(&self) -> usize {
        self.node_count() - 1
    }

    /// The tree edge joining `a` and `b`, if they are parent and child.
    pub fn tree_edge(&self, a: NodeId, b: NodeId) -> Option<TreeEdge> {
        if self.parent.get(a).copied().flatten() == Some(b) {
            Some(TreeEdge(a))
        } else if self.parent.get(b).copied().flatten() == Some(a) {
            Some(TreeEdge(b))
        } else {
            None
        }
    }

    /// `(child, parent)` endpoints of a tree edge.
    pub fn endpoints(&self, e: TreeEdge) -> (NodeId, NodeId) {
        (e.0, self.parent[e.0].expect("tree edge child has a parent"))
    }

    pub fn is_tree_edge(&self, e: TreeEdge) -> bool {
        e.0 < self.node_count() && e.0 != self.root
    }

    /// Whether `a` is an ancestor of `b` (every node is its own ancestor).
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let mut x = b;
        loop {
            if x == a {
                return true;
            }
            if self.depth[x] <= self.depth[a] {
                return false;
            }
            match self.parent[x] {
                Some(p) => x = p,
                None => return false,
            }
        }
    }
}
