//! Weighted rooted trees with root-distance bookkeeping.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} is out of range for a tree with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({u}, {v}) has negative length {len}")]
    NegativeLength { u: usize, v: usize, len: f64 },
    #[error("edge ({u}, {v}) has non-finite length")]
    NonFiniteLength { u: usize, v: usize },
    #[error("edges contain a cycle through vertex {vertex}")]
    Cycle { vertex: usize },
    #[error("graph is disconnected: vertex {vertex} is unreachable from the root")]
    Disconnected { vertex: usize },
}

/// A rooted tree with nonnegative edge lengths.
///
/// Children are kept in the order their edges appear in the input, so the
/// depth-first leaf order is a deterministic function of the edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    edge_len: Vec<f64>,
    droot: Vec<f64>,
    depth: Vec<usize>,
}

impl RootedTree {
    /// Builds the tree from an undirected edge list `(u, v, len)`.
    pub fn new(n: usize, edges: &[(usize, usize, f64)], root: usize) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if root >= n {
            return Err(TreeError::VertexOutOfRange { vertex: root, n });
        }
        let mut adj: Vec<Vec<(usize, f64, usize)>> = vec![Vec::new(); n];
        for (idx, &(u, v, len)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::VertexOutOfRange { vertex: w, n });
                }
            }
            if !len.is_finite() {
                return Err(TreeError::NonFiniteLength { u, v });
            }
            if len < 0.0 {
                return Err(TreeError::NegativeLength { u, v, len });
            }
            adj[u].push((v, len, idx));
            adj[v].push((u, len, idx));
        }

        let mut parent = vec![None; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut children = vec![Vec::new(); n];
        let mut edge_len = vec![0.0; n];
        let mut droot = vec![0.0; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &(w, len, idx) in &adj[u] {
                if idx == parent_edge[u] {
                    continue;
                }
                if seen[w] {
                    return Err(TreeError::Cycle { vertex: w });
                }
                seen[w] = true;
                parent[w] = Some(u);
                parent_edge[w] = idx;
                edge_len[w] = len;
                droot[w] = droot[u] + len;
                depth[w] = depth[u] + 1;
                children[u].push(w);
                stack.push(w);
            }
        }
        if let Some(vertex) = seen.iter().position(|&s| !s) {
            return Err(TreeError::Disconnected { vertex });
        }
        Ok(Self { root, parent, children, edge_len, droot, depth })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, u: usize) -> Option<usize> {
        self.parent[u]
    }

    pub fn children(&self, u: usize) -> &[usize] {
        &self.children[u]
    }

    /// Length of the edge `(parent(u), u)`; zero for the root.
    pub fn edge_len(&self, u: usize) -> f64 {
        self.edge_len[u]
    }

    pub fn droot(&self, u: usize) -> f64 {
        self.droot[u]
    }

    pub fn depth(&self, u: usize) -> usize {
        self.depth[u]
    }

    pub fn is_leaf(&self, u: usize) -> bool {
        self.children[u].is_empty()
    }

    /// Sum of all edge lengths.
    pub fn total_length(&self) -> f64 {
        self.edge_len.iter().sum()
    }

    /// Cost of the tree path between `u` and `v`, one of which must be an
    /// ancestor of the other. Ancestry is not checked.
    #[inline]
    pub fn path_cost(&self, u: usize, v: usize) -> f64 {
        (self.droot[u] - self.droot[v]).abs()
    }

    /// Vertices in depth-first preorder, children visited in stored order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            order.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        order
    }

    /// Vertices ordered so that every child precedes its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = self.preorder();
        order.reverse();
        order
    }

    /// Leaves in the order a depth-first traversal first reaches them.
    pub fn leaves_dfs_order(&self) -> Vec<usize> {
        self.preorder().into_iter().filter(|&u| self.is_leaf(u)).collect()
    }

    /// Lowest common ancestor of every consecutive pair in `leaves`.
    ///
    /// Each pair is resolved by lifting the deeper vertex to the other's depth
    /// and then walking both up in lockstep. When `leaves` is in DFS order the
    /// walks climb every edge at most twice overall.
    pub fn consecutive_leaf_lcas(&self, leaves: &[usize]) -> Vec<usize> {
        leaves.windows(2).map(|w| self.lca_by_walking(w[0], w[1])).collect()
    }

    fn lca_by_walking(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root has a parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root has a parent");
        }
        while a != b {
            a = self.parent[a].expect("non-root has a parent");
            b = self.parent[b].expect("non-root has a parent");
        }
        a
    }

    /// The vertices on the path from the root down to `u`, inclusive.
    pub fn root_path(&self, u: usize) -> Vec<usize> {
        let mut path = vec![u];
        let mut v = u;
        while let Some(p) = self.parent[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> RootedTree {
        RootedTree::new(3, &[(0, 1, 2.0), (0, 2, 3.0)], 0).unwrap()
    }

    fn chain() -> RootedTree {
        RootedTree::new(3, &[(0, 1, 4.0), (1, 2, 1.0)], 0).unwrap()
    }

    fn caterpillar() -> RootedTree {
        RootedTree::new(5, &[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (0, 4, 1.0)], 0).unwrap()
    }

    #[test]
    fn droot_values() {
        let single = RootedTree::new(1, &[], 0).unwrap();
        assert_eq!(single.droot(0), 0.0);
        let s = star();
        assert_eq!((s.droot(0), s.droot(1), s.droot(2)), (0.0, 2.0, 3.0));
        let c = chain();
        assert_eq!((c.droot(0), c.droot(1), c.droot(2)), (0.0, 4.0, 5.0));
        assert_eq!(c.depth(2), 2);
    }

    #[test]
    fn path_costs() {
        assert_eq!(star().path_cost(0, 2), 3.0);
        assert_eq!(chain().path_cost(1, 1), 0.0);
        assert_eq!(chain().path_cost(1, 2), 1.0);
    }

    #[test]
    fn leaf_orders() {
        assert_eq!(star().leaves_dfs_order(), vec![1, 2]);
        assert_eq!(chain().leaves_dfs_order(), vec![2]);
        assert_eq!(RootedTree::new(1, &[], 0).unwrap().leaves_dfs_order(), vec![0]);
        assert_eq!(caterpillar().leaves_dfs_order(), vec![2, 3, 4]);
    }

    #[test]
    fn consecutive_lcas() {
        let s = star();
        assert_eq!(s.consecutive_leaf_lcas(&s.leaves_dfs_order()), vec![0]);
        let c = chain();
        assert!(c.consecutive_leaf_lcas(&c.leaves_dfs_order()).is_empty());
        let cat = caterpillar();
        assert_eq!(cat.consecutive_leaf_lcas(&cat.leaves_dfs_order()), vec![1, 0]);
    }

    #[test]
    fn edge_direction_is_irrelevant() {
        let t = RootedTree::new(3, &[(1, 0, 2.0), (2, 0, 3.0)], 0).unwrap();
        assert_eq!(t.children(0), &[1, 2]);
        assert_eq!(t.parent(2), Some(0));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(RootedTree::new(0, &[], 0), Err(TreeError::Empty));
        assert!(matches!(RootedTree::new(3, &[(0, 1, 1.0)], 0), Err(TreeError::Disconnected { vertex: 2 })));
        assert!(matches!(
            RootedTree::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], 0),
            Err(TreeError::Cycle { .. })
        ));
        assert!(matches!(RootedTree::new(2, &[(0, 1, 1.0), (0, 1, 1.0)], 0), Err(TreeError::Cycle { .. })));
        assert!(matches!(RootedTree::new(2, &[(0, 0, 1.0)], 0), Err(TreeError::Cycle { vertex: 0 })));
        assert!(matches!(RootedTree::new(2, &[(0, 1, -1.0)], 0), Err(TreeError::NegativeLength { .. })));
        assert!(matches!(RootedTree::new(2, &[(0, 5, 1.0)], 0), Err(TreeError::VertexOutOfRange { vertex: 5, .. })));
    }
}
