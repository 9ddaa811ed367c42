//! Exact edge and vertex isoperimetric profiles of a tree.
//!
//! `b_e(i)` is the fewest edges leaving any `i`-vertex set, `b_v(i)` the
//! fewest outside vertices adjacent to one. Both are computed by a bottom-up
//! subtree merge. Each vertex carries a table indexed by (number of selected
//! vertices in its subtree, state of the vertex) holding the minimum boundary
//! cost realised strictly inside the subtree; children are folded in one at a
//! time in ascending id order with table sizes bounded by the merged subtree
//! size, so the total work is quadratic in `n`.
//!
//! [`brute_force_profiles`] evaluates the definitions over all `2^n` subsets
//! and is kept independent of the DP so the two can be cross-checked.

use serde::Serialize;
use thiserror::Error;

use crate::tree::{edge_boundary, vertex_boundary, RootedTree, VertexSet};

pub const DEFAULT_DP_CAP: usize = 50_000;
pub const DEFAULT_ORACLE_LIMIT: usize = 20;
/// Witness reconstruction keeps every merge's choice table, which costs
/// memory proportional to the sum of subtree sizes (quadratic on a path).
pub const DEFAULT_WITNESS_CAP: usize = 4_096;
/// Exhaustive enumeration never goes past this many vertices.
pub const MAX_ORACLE_LIMIT: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("tree has {n} vertices, above the configured cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("subset size {i} out of range [1, {n}]")]
    SizeOutOfRange { i: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Edge,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileConfig {
    pub dp_cap: usize,
    pub oracle_limit: usize,
    pub witness_cap: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig { dp_cap: DEFAULT_DP_CAP, oracle_limit: DEFAULT_ORACLE_LIMIT, witness_cap: DEFAULT_WITNESS_CAP }
    }
}

/// Both profiles of one tree plus their peaks.
///
/// `edge_values[i - 1]` holds `b_e(i)` for `i = 1..=n` (likewise for vertices).
/// Argpeaks are the smallest 1-based size attaining the peak.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoProfile {
    pub n: usize,
    #[serde(rename = "edge")]
    pub edge_values: Vec<usize>,
    #[serde(rename = "vertex")]
    pub vertex_values: Vec<usize>,
    pub edge_peak: usize,
    pub vertex_peak: usize,
    pub edge_argpeak: usize,
    pub vertex_argpeak: usize,
}

impl IsoProfile {
    pub fn from_values(edge_values: Vec<usize>, vertex_values: Vec<usize>) -> Self {
        assert_eq!(edge_values.len(), vertex_values.len());
        let (edge_peak, edge_argpeak) = peaks(&edge_values);
        let (vertex_peak, vertex_argpeak) = peaks(&vertex_values);
        IsoProfile { n: edge_values.len(), edge_values, vertex_values, edge_peak, vertex_peak, edge_argpeak, vertex_argpeak }
    }

    /// `b_e(i)`, 1-based.
    pub fn edge(&self, i: usize) -> usize {
        self.edge_values[i - 1]
    }

    /// `b_v(i)`, 1-based.
    pub fn vertex(&self, i: usize) -> usize {
        self.vertex_values[i - 1]
    }
}

/// Peak value and the smallest 1-based index attaining it.
///
/// Panics on an empty slice; profiles always have `n >= 1` entries.
pub fn peaks(profile: &[usize]) -> (usize, usize) {
    assert!(!profile.is_empty(), "peaks of an empty profile");
    let mut best = (profile[0], 1);
    for (idx, &v) in profile.iter().enumerate().skip(1) {
        if v > best.0 {
            best = (v, idx + 1);
        }
    }
    best
}

pub fn iso_profile(tree: &RootedTree, config: &ProfileConfig) -> Result<IsoProfile, ProfileError> {
    let edge = edge_profile_with(tree, config)?;
    let vertex = vertex_profile_with(tree, config)?;
    Ok(IsoProfile::from_values(edge, vertex))
}

pub fn edge_profile(tree: &RootedTree) -> Result<Vec<usize>, ProfileError> {
    edge_profile_with(tree, &ProfileConfig::default())
}

pub fn edge_profile_with(tree: &RootedTree, config: &ProfileConfig) -> Result<Vec<usize>, ProfileError> {
    check_cap(tree.n(), config.dp_cap)?;
    Ok(run::<EdgeRules>(tree, false).profile())
}

pub fn vertex_profile(tree: &RootedTree) -> Result<Vec<usize>, ProfileError> {
    vertex_profile_with(tree, &ProfileConfig::default())
}

pub fn vertex_profile_with(tree: &RootedTree, config: &ProfileConfig) -> Result<Vec<usize>, ProfileError> {
    check_cap(tree.n(), config.dp_cap)?;
    Ok(run::<VertexRules>(tree, false).profile())
}

/// A set of size `i` attaining `b_e(i)` or `b_v(i)`, reconstructed from the DP.
pub fn witness_subset(tree: &RootedTree, i: usize, mode: Mode) -> Result<VertexSet, ProfileError> {
    witness_subset_with(tree, i, mode, &ProfileConfig::default())
}

pub fn witness_subset_with(
    tree: &RootedTree,
    i: usize,
    mode: Mode,
    config: &ProfileConfig,
) -> Result<VertexSet, ProfileError> {
    let n = tree.n();
    if i == 0 || i > n {
        return Err(ProfileError::SizeOutOfRange { i, n });
    }
    check_cap(n, config.dp_cap.min(config.witness_cap))?;
    Ok(match mode {
        Mode::Edge => run::<EdgeRules>(tree, true).witness(tree, i),
        Mode::Vertex => run::<VertexRules>(tree, true).witness(tree, i),
    })
}

fn check_cap(n: usize, cap: usize) -> Result<(), ProfileError> {
    if n > cap {
        Err(ProfileError::TooLarge { n, cap })
    } else {
        Ok(())
    }
}

/// Per-vertex state machine of one DP flavour.
trait Rules {
    const STATES: usize;
    /// State of a vertex selected into the set.
    const IN: usize;
    /// State of an unselected vertex before any child is merged.
    const OUT_FRESH: usize;
    /// Merging a child in state `child` under a parent in state `parent`:
    /// the parent's new state and the boundary cost the new edge adds.
    fn combine(parent: usize, child: usize) -> (usize, u32);
}

struct EdgeRules;

impl EdgeRules {
    const IN: usize = 0;
    const OUT: usize = 1;
}

impl Rules for EdgeRules {
    const STATES: usize = 2;
    const IN: usize = EdgeRules::IN;
    const OUT_FRESH: usize = EdgeRules::OUT;

    fn combine(parent: usize, child: usize) -> (usize, u32) {
        (parent, u32::from(parent != child))
    }
}

struct VertexRules;

impl VertexRules {
    const IN: usize = 0;
    /// Outside the set and already adjacent to it; its unit cost is paid.
    const OUT_TOUCHED: usize = 1;
    /// Outside the set with no selected neighbour seen so far.
    const OUT_UNTOUCHED: usize = 2;
}

impl Rules for VertexRules {
    const STATES: usize = 3;
    const IN: usize = VertexRules::IN;
    const OUT_FRESH: usize = VertexRules::OUT_UNTOUCHED;

    fn combine(parent: usize, child: usize) -> (usize, u32) {
        match (parent, child) {
            (VertexRules::IN, VertexRules::OUT_UNTOUCHED) => (parent, 1),
            (VertexRules::OUT_UNTOUCHED, VertexRules::IN) => (VertexRules::OUT_TOUCHED, 1),
            _ => (parent, 0),
        }
    }
}

/// DP table over `(count, state)`; `None` marks unreachable cells.
struct Table<R> {
    cells: Vec<Option<u32>>,
    _rules: std::marker::PhantomData<R>,
}

impl<R: Rules> Table<R> {
    fn leaf() -> Self {
        let mut cells = vec![None; 2 * R::STATES];
        cells[R::OUT_FRESH] = Some(0);
        cells[R::STATES + R::IN] = Some(0);
        Table { cells, _rules: std::marker::PhantomData }
    }

    /// Largest selected count the table covers.
    fn max_count(&self) -> usize {
        self.cells.len() / R::STATES - 1
    }

    fn get(&self, j: usize, s: usize) -> Option<u32> {
        self.cells[j * R::STATES + s]
    }
}

/// How a merged cell was reached: parent state before the merge, plus the
/// child's count and state.
#[derive(Clone, Copy, Default)]
struct Choice {
    child_count: u32,
    prev_state: u8,
    child_state: u8,
}

/// Folds `child` into `parent`. Ties keep the first candidate in the order
/// (parent count, parent state, child count, child state), all ascending.
fn merge<R: Rules>(parent: &Table<R>, child: &Table<R>, record: Option<&mut Vec<Choice>>) -> Table<R> {
    let states = R::STATES;
    let pa = parent.max_count();
    let ch = child.max_count();
    let mut cells = vec![None; (pa + ch + 1) * states];
    let mut choices = record;
    if let Some(rec) = choices.as_deref_mut() {
        rec.clear();
        rec.resize(cells.len(), Choice::default());
    }
    for j1 in 0..=pa {
        for p in 0..states {
            let Some(base) = parent.get(j1, p) else { continue };
            for j2 in 0..=ch {
                for c in 0..states {
                    let Some(sub) = child.get(j2, c) else { continue };
                    let (np, cost) = R::combine(p, c);
                    let total = base + sub + cost;
                    let idx = (j1 + j2) * states + np;
                    if cells[idx].is_none_or(|cur| total < cur) {
                        cells[idx] = Some(total);
                        if let Some(rec) = choices.as_deref_mut() {
                            rec[idx] = Choice { child_count: j2 as u32, prev_state: p as u8, child_state: c as u8 };
                        }
                    }
                }
            }
        }
    }
    Table { cells, _rules: std::marker::PhantomData }
}

struct DpRun<R> {
    root_table: Table<R>,
    /// `choices[v][m]` records the merge of the `m`-th child of `v`.
    choices: Vec<Vec<Vec<Choice>>>,
}

fn run<R: Rules>(tree: &RootedTree, record: bool) -> DpRun<R> {
    let n = tree.n();
    let mut tables: Vec<Option<Table<R>>> = std::iter::repeat_with(|| None).take(n).collect();
    let mut choices: Vec<Vec<Vec<Choice>>> = if record { vec![Vec::new(); n] } else { Vec::new() };
    for v in tree.postorder() {
        let mut acc = Table::<R>::leaf();
        for &c in tree.children(v) {
            let child = tables[c].take().expect("children precede parents in post-order");
            acc = if record {
                let mut rec = Vec::new();
                let merged = merge(&acc, &child, Some(&mut rec));
                choices[v].push(rec);
                merged
            } else {
                merge(&acc, &child, None)
            };
        }
        tables[v] = Some(acc);
    }
    let root_table = tables[tree.root()].take().expect("root table computed");
    DpRun { root_table, choices }
}

impl<R: Rules> DpRun<R> {
    fn best_state(&self, j: usize) -> (usize, u32) {
        (0..R::STATES)
            .filter_map(|s| self.root_table.get(j, s).map(|cost| (s, cost)))
            .min_by_key(|&(s, cost)| (cost, s))
            .expect("every count 0..=n is reachable at the root")
    }

    fn profile(&self) -> Vec<usize> {
        (1..=self.root_table.max_count()).map(|j| self.best_state(j).1 as usize).collect()
    }

    fn witness(&self, tree: &RootedTree, i: usize) -> VertexSet {
        let mut set = VertexSet::new();
        let mut stack = vec![(tree.root(), i, self.best_state(i).0)];
        while let Some((v, mut j, mut s)) = stack.pop() {
            for (m, &c) in tree.children(v).iter().enumerate().rev() {
                let choice = self.choices[v][m][j * R::STATES + s];
                let cj = choice.child_count as usize;
                stack.push((c, cj, choice.child_state as usize));
                j -= cj;
                s = choice.prev_state as usize;
            }
            debug_assert_eq!(j, usize::from(s == R::IN));
            if s == R::IN {
                set.insert(v);
            }
        }
        set
    }
}

/// Both profiles by exhaustive enumeration of all subsets.
pub fn brute_force_profiles(tree: &RootedTree, limit: usize) -> Result<(Vec<usize>, Vec<usize>), ProfileError> {
    let n = tree.n();
    check_cap(n, limit.min(MAX_ORACLE_LIMIT))?;
    let edges: Vec<(usize, usize)> = tree.edges().collect();
    let mut adjacency = vec![0u64; n];
    for &(c, p) in &edges {
        adjacency[c] |= 1 << p;
        adjacency[p] |= 1 << c;
    }
    let mut edge = vec![usize::MAX; n + 1];
    let mut vertex = vec![usize::MAX; n + 1];
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        let cut = edges.iter().filter(|&&(c, p)| ((mask >> c) ^ (mask >> p)) & 1 == 1).count();
        let mut reach = 0u64;
        let mut rest = mask;
        while rest != 0 {
            reach |= adjacency[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        let touched = (reach & !mask).count_ones() as usize;
        edge[size] = edge[size].min(cut);
        vertex[size] = vertex[size].min(touched);
    }
    Ok((edge.split_off(1), vertex.split_off(1)))
}

/// Boundary of `set` under the given mode, straight from the definition.
pub fn boundary_size(tree: &RootedTree, set: &VertexSet, mode: Mode) -> usize {
    let mask = set.to_mask(tree.n());
    match mode {
        Mode::Edge => edge_boundary(tree, &mask),
        Mode::Vertex => vertex_boundary(tree, &mask),
    }
}
