//! Rooted trees: representation, validation, subtree weights and traversal.
//!
//! Vertex ids are `0..n`. Every non-root vertex has exactly one parent and
//! children are kept in ascending id order, which fixes the traversal order
//! used everywhere else in the crate.

mod generate;
mod io;

pub use generate::{complete_tary_vertices, generate_tree, generate_tree_capped, GenerateError, TreeKind, DEFAULT_MAX_VERTICES};
pub use io::{parse_tree, serialize_tree, TreeFormat};

use std::collections::BTreeSet;

use thiserror::Error;

/// Errors produced while building or parsing a tree.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
    #[error("tree must have at least one vertex")]
    Empty,
    #[error("declared n = {declared} but {found} parent entries were given")]
    ParentCount { declared: usize, found: usize },
    #[error("no root: every vertex has a parent (unrooted input is rejected)")]
    NoRoot,
    #[error("vertices {first} and {second} both lack a parent (disconnected forest)")]
    MultipleRoots { first: usize, second: usize },
    #[error("declared root {declared} does not match parentless vertex {actual}")]
    RootMismatch { declared: usize, actual: usize },
    #[error("vertex {vertex}: parent id {parent} out of range [0, {n})")]
    ParentOutOfRange { vertex: usize, parent: i64, n: usize },
    #[error("root id {root} out of range [0, {n})")]
    RootOutOfRange { root: i64, n: usize },
    #[error("vertex {vertex} is its own parent")]
    SelfLoop { vertex: usize },
    #[error("cycle through vertex {vertex}: it never reaches the root")]
    Cycle { vertex: usize },
}

/// An immutable rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl RootedTree {
    /// Builds a tree from a parent array, checking that it encodes exactly
    /// one connected, acyclic rooted tree.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut root = None;
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None => match root {
                    None => root = Some(v),
                    Some(first) => return Err(TreeError::MultipleRoots { first, second: v }),
                },
                Some(p) if p >= n => {
                    return Err(TreeError::ParentOutOfRange { vertex: v, parent: p as i64, n })
                }
                Some(p) if p == v => return Err(TreeError::SelfLoop { vertex: v }),
                Some(_) => {}
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;

        // 0 = unvisited, 1 = on the current walk, 2 = known to reach the root.
        let mut state = vec![0u8; n];
        state[root] = 2;
        let mut walk = Vec::new();
        for start in 0..n {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = parent[v].expect("only the root lacks a parent");
            }
            if state[v] == 1 {
                return Err(TreeError::Cycle { vertex: v });
            }
            for u in walk.drain(..) {
                state[u] = 2;
            }
        }

        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        Ok(RootedTree { root, parent, children })
    }

    /// Same as [`RootedTree::from_parents`] but also checks a declared root.
    pub fn from_parents_with_root(parent: Vec<Option<usize>>, root: usize) -> Result<Self, TreeError> {
        let n = parent.len();
        if n > 0 && root >= n {
            return Err(TreeError::RootOutOfRange { root: root as i64, n });
        }
        let tree = Self::from_parents(parent)?;
        if tree.root != root {
            return Err(TreeError::RootMismatch { declared: root, actual: tree.root });
        }
        Ok(tree)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.children.iter().filter(|c| c.is_empty()).count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }

    /// Maximum vertex degree Δ. Zero for the single-vertex tree.
    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as `(child, parent)` pairs, in ascending child order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (v, p)))
    }

    /// Neighbours of `v`: the parent first (if any), then the children.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent[v].into_iter().chain(self.children[v].iter().copied())
    }

    /// Post-order: each subtree is listed completely before its root, children
    /// in ascending id order, the root last.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n());
        let mut stack = vec![(self.root, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            if let Some(&c) = self.children[v].get(next) {
                top.1 += 1;
                stack.push((c, 0));
            } else {
                order.push(v);
                stack.pop();
            }
        }
        order
    }

    /// Subtree weights, distinct weights, weight index and depth.
    pub fn weights(&self) -> WeightTable {
        WeightTable::new(self)
    }
}

/// Convenience free function mirroring [`RootedTree::postorder`].
pub fn postorder(tree: &RootedTree) -> Vec<usize> {
    tree.postorder()
}

/// Convenience free function mirroring [`RootedTree::weights`].
pub fn subtree_weights(tree: &RootedTree) -> WeightTable {
    WeightTable::new(tree)
}

/// Subtree sizes of a rooted tree together with the derived weight index
/// (number of distinct subtree sizes) and depth (nodes on the longest
/// root-to-leaf path).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    pub weight: Vec<usize>,
    pub distinct_weights: Vec<usize>,
    pub eta: usize,
    pub depth: usize,
}

impl WeightTable {
    fn new(tree: &RootedTree) -> Self {
        let n = tree.n();
        let mut weight = vec![1usize; n];
        // height[v] = nodes on the longest downward path starting at v
        let mut height = vec![1usize; n];
        for v in tree.postorder() {
            if let Some(p) = tree.parent(v) {
                weight[p] += weight[v];
                height[p] = height[p].max(height[v] + 1);
            }
        }
        let distinct: BTreeSet<usize> = weight.iter().copied().collect();
        let distinct_weights: Vec<usize> = distinct.into_iter().collect();
        WeightTable {
            eta: distinct_weights.len(),
            depth: height[tree.root()],
            weight,
            distinct_weights,
        }
    }
}

/// A subset of the vertices of some tree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet {
    members: BTreeSet<usize>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.members.insert(v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<usize> {
        self.members.last().copied()
    }

    /// Membership as a dense boolean mask of length `n`. Members `>= n` are ignored.
    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.members.range(..n) {
            mask[*v] = true;
        }
        mask
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        mask.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet { members: iter.into_iter().collect() }
    }
}

/// Number of edges with exactly one endpoint in the set given by `mask`.
pub fn edge_boundary(tree: &RootedTree, mask: &[bool]) -> usize {
    tree.edges().filter(|&(c, p)| mask[c] != mask[p]).count()
}

/// Number of vertices outside `mask` adjacent to at least one vertex inside it.
pub fn vertex_boundary(tree: &RootedTree, mask: &[bool]) -> usize {
    (0..tree.n()).filter(|&v| !mask[v] && tree.neighbors(v).any(|u| mask[u])).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary3() -> RootedTree {
        RootedTree::from_parents(vec![None, Some(0), Some(0), Some(1), Some(1), Some(2), Some(2)]).unwrap()
    }

    #[test]
    fn postorder_examples() {
        let path = RootedTree::from_parents(vec![None, Some(0), Some(1)]).unwrap();
        assert_eq!(path.postorder(), vec![2, 1, 0]);
        assert_eq!(binary3().postorder(), vec![3, 4, 1, 5, 6, 2, 0]);
        let star = RootedTree::from_parents(vec![None, Some(0), Some(0), Some(0), Some(0)]).unwrap();
        assert_eq!(postorder(&star), vec![1, 2, 3, 4, 0]);
    }

    #[test]
    fn postorder_respects_non_zero_root() {
        let t = RootedTree::from_parents(vec![Some(2), Some(2), None]).unwrap();
        assert_eq!(t.postorder(), vec![0, 1, 2]);
    }

    #[test]
    fn weights_of_small_trees() {
        let n = 6usize;
        let path = RootedTree::from_parents((0..n).map(|v| v.checked_sub(1)).collect()).unwrap();
        let w = path.weights();
        assert_eq!(w.weight, vec![6, 5, 4, 3, 2, 1]);
        assert_eq!((w.eta, w.depth), (6, 6));

        let star = RootedTree::from_parents((0..n).map(|v| if v == 0 { None } else { Some(0) }).collect()).unwrap();
        let w = subtree_weights(&star);
        assert_eq!(w.distinct_weights, vec![1, 6]);
        assert_eq!((w.eta, w.depth), (2, 2));

        let w = binary3().weights();
        assert_eq!(w.weight, vec![7, 3, 3, 1, 1, 1, 1]);
        assert_eq!((w.eta, w.depth), (3, 3));
    }

    #[test]
    fn degrees() {
        assert_eq!(binary3().max_degree(), 3);
        assert_eq!(RootedTree::from_parents(vec![None]).unwrap().max_degree(), 0);
        assert_eq!(binary3().leaf_count(), 4);
    }

    #[test]
    fn rejects_bad_parent_arrays() {
        assert_eq!(RootedTree::from_parents(vec![]), Err(TreeError::Empty));
        assert_eq!(
            RootedTree::from_parents(vec![None, None]),
            Err(TreeError::MultipleRoots { first: 0, second: 1 })
        );
        assert_eq!(RootedTree::from_parents(vec![Some(1), Some(0)]), Err(TreeError::NoRoot));
        assert_eq!(
            RootedTree::from_parents(vec![None, Some(2), Some(1)]),
            Err(TreeError::Cycle { vertex: 1 })
        );
        assert_eq!(RootedTree::from_parents(vec![None, Some(1)]), Err(TreeError::SelfLoop { vertex: 1 }));
        assert!(matches!(
            RootedTree::from_parents(vec![None, Some(7)]),
            Err(TreeError::ParentOutOfRange { vertex: 1, .. })
        ));
        assert_eq!(
            RootedTree::from_parents_with_root(vec![None, Some(0)], 1),
            Err(TreeError::RootMismatch { declared: 1, actual: 0 })
        );
    }

    #[test]
    fn boundaries_by_definition() {
        let t = binary3();
        let s = VertexSet::from_iter([1, 3, 4]);
        let mask = s.to_mask(7);
        assert_eq!(edge_boundary(&t, &mask), 1);
        assert_eq!(vertex_boundary(&t, &mask), 1);
        let leaves = VertexSet::from_iter([3, 5]).to_mask(7);
        assert_eq!(edge_boundary(&t, &leaves), 2);
        assert_eq!(vertex_boundary(&t, &leaves), 2);
    }
}
