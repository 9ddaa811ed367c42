//! Deterministic tree generators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::RootedTree;

/// Upper limit on generated vertex counts unless the caller picks another.
pub const DEFAULT_MAX_VERTICES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeKind {
    /// Params `t >= 2`, `d >= 1`; ids in breadth-first order.
    CompleteTary,
    /// Param `n >= 1`; rooted at the end vertex 0.
    Path,
    /// Param `n >= 1`; rooted at the centre 0.
    Star,
    /// Params `spine >= 1`, `legs >= 0`: a path of `spine` vertices, each
    /// carrying `legs` pendant leaves, rooted at spine end 0.
    Caterpillar,
    /// Param `n >= 1`; vertex `k` attaches to a uniform earlier vertex.
    RandomRecursive,
    /// Param `n >= 1`; uniform labelled tree via a Prüfer sequence, rooted at 0.
    RandomPrufer,
}

impl TreeKind {
    pub const ALL: [TreeKind; 6] = [
        TreeKind::CompleteTary,
        TreeKind::Path,
        TreeKind::Star,
        TreeKind::Caterpillar,
        TreeKind::RandomRecursive,
        TreeKind::RandomPrufer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TreeKind::CompleteTary => "complete_tary",
            TreeKind::Path => "path",
            TreeKind::Star => "star",
            TreeKind::Caterpillar => "caterpillar",
            TreeKind::RandomRecursive => "random_recursive",
            TreeKind::RandomPrufer => "random_prufer",
        }
    }

    fn param_names(self) -> &'static [&'static str] {
        match self {
            TreeKind::CompleteTary => &["t", "d"],
            TreeKind::Caterpillar => &["spine", "legs"],
            _ => &["n"],
        }
    }
}

impl fmt::Display for TreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TreeKind {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.replace('-', "_");
        TreeKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| GenerateError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("unknown tree kind {0:?}")]
    UnknownKind(String),
    #[error("{kind}: missing parameter {name:?}")]
    MissingParam { kind: TreeKind, name: &'static str },
    #[error("{kind}: unknown parameter {name:?}")]
    UnknownParam { kind: TreeKind, name: String },
    #[error("{kind}: invalid parameter {name} = {value} ({reason})")]
    InvalidParam { kind: TreeKind, name: &'static str, value: u64, reason: &'static str },
    #[error("{kind}: vertex count exceeds the maximum of {max}")]
    TooLarge { kind: TreeKind, max: usize },
}

/// Generates a tree with the default vertex limit.
pub fn generate_tree(kind: TreeKind, params: &BTreeMap<String, u64>, seed: u64) -> Result<RootedTree, GenerateError> {
    generate_tree_capped(kind, params, seed, DEFAULT_MAX_VERTICES)
}

/// Generates a tree of the given kind. Output is a pure function of the
/// arguments; the seed is ignored by the non-random kinds.
pub fn generate_tree_capped(
    kind: TreeKind,
    params: &BTreeMap<String, u64>,
    seed: u64,
    max_vertices: usize,
) -> Result<RootedTree, GenerateError> {
    if let Some(name) = params.keys().find(|k| !kind.param_names().contains(&k.as_str())) {
        return Err(GenerateError::UnknownParam { kind, name: name.clone() });
    }
    let get = |name: &'static str| params.get(name).copied().ok_or(GenerateError::MissingParam { kind, name });
    let too_large = GenerateError::TooLarge { kind, max: max_vertices };
    let vertex_count = |name: &'static str| -> Result<usize, GenerateError> {
        let n = get(name)?;
        if n == 0 {
            return Err(GenerateError::InvalidParam { kind, name, value: n, reason: "must be at least 1" });
        }
        usize::try_from(n).ok().filter(|&n| n <= max_vertices).ok_or(too_large.clone())
    };

    let parents = match kind {
        TreeKind::CompleteTary => {
            let t = get("t")?;
            let d = get("d")?;
            if t < 2 {
                return Err(GenerateError::InvalidParam { kind, name: "t", value: t, reason: "must be at least 2" });
            }
            if d < 1 {
                return Err(GenerateError::InvalidParam { kind, name: "d", value: d, reason: "must be at least 1" });
            }
            let n = complete_tary_size(t, d).filter(|&n| n <= max_vertices as u64).ok_or(too_large)?;
            let t = t as usize;
            (0..n as usize).map(|v| v.checked_sub(1).map(|u| u / t)).collect()
        }
        TreeKind::Path => (0..vertex_count("n")?).map(|v| v.checked_sub(1)).collect(),
        TreeKind::Star => (0..vertex_count("n")?).map(|v| (v > 0).then_some(0)).collect(),
        TreeKind::Caterpillar => {
            let spine = vertex_count("spine")?;
            let legs = get("legs")?;
            let n = legs
                .checked_add(1)
                .and_then(|per| per.checked_mul(spine as u64))
                .filter(|&n| n <= max_vertices as u64)
                .ok_or(too_large)? as usize;
            let legs = legs as usize;
            (0..n)
                .map(|v| if v < spine { v.checked_sub(1) } else { Some((v - spine) / legs) })
                .collect()
        }
        TreeKind::RandomRecursive => {
            let n = vertex_count("n")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|v| (v > 0).then(|| rng.gen_range(0..v))).collect()
        }
        TreeKind::RandomPrufer => {
            let n = vertex_count("n")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let code: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
            root_at_zero(n, &prufer_edges(n, &code))
        }
    };
    Ok(RootedTree::from_parents(parents).expect("generators produce valid trees"))
}

/// Vertex count `(t^d - 1) / (t - 1)` of the complete t-ary tree of depth `d`.
pub fn complete_tary_vertices(t: usize, d: usize) -> Option<usize> {
    complete_tary_size(t as u64, d as u64).and_then(|n| usize::try_from(n).ok())
}

fn complete_tary_size(t: u64, d: u64) -> Option<u64> {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for i in 0..d {
        total = total.checked_add(level)?;
        if i + 1 < d {
            level = level.checked_mul(t)?;
        }
    }
    Some(total)
}

/// Decodes a Prüfer sequence over `0..n` into the edge list of a labelled tree.
fn prufer_edges(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = leaves.pop_first().expect("a tree always has a leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let a = leaves.pop_first().expect("two leaves remain");
    let b = leaves.pop_first().expect("two leaves remain");
    edges.push((a, b));
    edges
}

fn root_at_zero(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                queue.push_back(u);
            }
        }
    }
    parent
}
