//! Bounds on isoperimetric values of rooted trees.
//!
//! Contents: the signed flux labelling of boundary edges and its
//! conservation law, exact binomial counting bound on the number of sizes
//! with a small edge boundary, the smallest `k` that bound certifies, the
//! closed-form lower bounds, post-order prefix upper bounds and the peak
//! sandwich `b_e >= b_v >= b_e / Δ`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::profile::IsoProfile;
use crate::tree::{RootedTree, VertexSet, WeightTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("vertex {vertex} is not in the tree (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// Signed subtree-weight labelling for a vertex set `S`.
///
/// The root term is `n` when the root is in `S`, else 0. An edge
/// `(child, parent)` carries 0 unless it crosses `S`, in which case it carries
/// `+w(child)` when the child is in `S` and `-w(child)` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxAssignment {
    pub root_value: i64,
    /// Keyed by `(child, parent)`.
    pub edge_values: BTreeMap<(usize, usize), i64>,
    pub subset: VertexSet,
}

impl FluxAssignment {
    pub fn total(&self) -> i64 {
        self.root_value + self.edge_values.values().sum::<i64>()
    }
}

pub fn flux_assignment(tree: &RootedTree, subset: &VertexSet, weights: &WeightTable) -> Result<FluxAssignment, BoundsError> {
    let n = tree.n();
    if let Some(v) = subset.max().filter(|&v| v >= n) {
        return Err(BoundsError::VertexOutOfRange { vertex: v, n });
    }
    let root_value = if subset.contains(tree.root()) { weights.weight[tree.root()] as i64 } else { 0 };
    let edge_values = tree
        .edges()
        .map(|(child, parent)| {
            let inside = subset.contains(child);
            let value = if inside == subset.contains(parent) {
                0
            } else if inside {
                weights.weight[child] as i64
            } else {
                -(weights.weight[child] as i64)
            };
            ((child, parent), value)
        })
        .collect();
    Ok(FluxAssignment { root_value, edge_values, subset: subset.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FluxVerdict {
    pub sum: i64,
    pub expected: i64,
    pub pass: bool,
}

/// Checks that the flux labelling of `subset` sums to `|subset|`.
pub fn check_flux_lemma(tree: &RootedTree, subset: &VertexSet) -> Result<FluxVerdict, BoundsError> {
    let flux = flux_assignment(tree, subset, &tree.weights())?;
    let sum = flux.total();
    let expected = subset.len() as i64;
    Ok(FluxVerdict { sum, expected, pass: sum == expected })
}

/// Exact `C(a, b)`; zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    // acc = C(a - b + i, i) after step i; each division is exact.
    for i in 1..=b {
        acc *= a - b + i;
        acc /= i;
    }
    BigInt::from(acc)
}

/// `2 * C(2 * eta + k, k)`: an upper bound on how many sizes `i` can have
/// `b_e(i) <= k` in a tree of weight index `eta`.
pub fn theorem1_bound(eta: u64, k: u64) -> BigInt {
    binomial(2 * eta + k, k) * 2u32
}

/// Number of sizes `i` in `1..=n` with `b_e(i) <= k`.
pub fn ell(edge_profile: &[usize], k: usize) -> usize {
    edge_profile.iter().filter(|&&b| b <= k).count()
}

/// Smallest `k >= 0` with `2 * C(2 * eta + k, k) >= n`; a lower bound on the
/// edge isoperimetric peak.
pub fn p_lower_bound(n: u64, eta: u64) -> u64 {
    assert!(eta >= 1, "weight index is at least 1");
    let target = BigInt::from(n);
    // C(2η + k, k) = C(2η + k - 1, k - 1) * (2η + k) / k
    let mut choose = BigInt::one();
    let mut k = 0u64;
    while choose.clone() * 2u32 < target {
        k += 1;
        choose = choose * (2 * eta + k) / k;
    }
    k
}

/// Closed-form lower bounds with `c1 = 1/e`, `c2 = 2e`:
/// `b_e >= (1/e) * eta * (n^(1/(2 eta)) - 2e)` clamped at zero, `b_v >= b_e / delta`.
/// Informational; the exact certified bound is [`p_lower_bound`].
pub fn corollary3_bound(n: u128, eta: u64, delta: u64) -> (f64, f64) {
    let e = std::f64::consts::E;
    let root = ((n as f64).ln() / (2.0 * eta as f64)).exp();
    let be = (eta as f64 / e * (root - 2.0 * e)).max(0.0);
    (be, be / delta.max(1) as f64)
}

/// Boundaries of the post-order prefixes `S_1 ⊂ S_2 ⊂ ... ⊂ S_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixBounds {
    pub edge_ub: Vec<usize>,
    pub vertex_ub: Vec<usize>,
    /// `(Δ - 1) * d`, saturating at zero.
    pub edge_ceiling: usize,
    /// `d`.
    pub vertex_ceiling: usize,
}

impl PrefixBounds {
    pub fn edge_max(&self) -> usize {
        self.edge_ub.iter().copied().max().unwrap_or(0)
    }

    pub fn vertex_max(&self) -> usize {
        self.vertex_ub.iter().copied().max().unwrap_or(0)
    }

    pub fn edge_ceiling_holds(&self) -> bool {
        self.edge_max() <= self.edge_ceiling
    }

    pub fn vertex_ceiling_holds(&self) -> bool {
        self.vertex_max() <= self.vertex_ceiling
    }

    /// Sizes `i` (1-based) whose prefix boundaries undercut the exact profile.
    /// Always empty for a correct profile.
    pub fn dominance_violations(&self, profile: &IsoProfile) -> Vec<usize> {
        (0..self.edge_ub.len())
            .filter(|&i| self.edge_ub[i] < profile.edge_values[i] || self.vertex_ub[i] < profile.vertex_values[i])
            .map(|i| i + 1)
            .collect()
    }
}

pub fn prefix_upper_bounds(tree: &RootedTree) -> PrefixBounds {
    let n = tree.n();
    let mut in_set = vec![false; n];
    // selected neighbours of each vertex
    let mut touching = vec![0usize; n];
    let mut cut = 0usize;
    let mut touched = 0usize;
    let mut edge_ub = Vec::with_capacity(n);
    let mut vertex_ub = Vec::with_capacity(n);
    for v in tree.postorder() {
        if touching[v] > 0 {
            touched -= 1;
        }
        in_set[v] = true;
        for u in tree.neighbors(v) {
            if in_set[u] {
                cut -= 1;
            } else {
                cut += 1;
                if touching[u] == 0 {
                    touched += 1;
                }
            }
            touching[u] += 1;
        }
        edge_ub.push(cut);
        vertex_ub.push(touched);
    }
    let depth = tree.weights().depth;
    PrefixBounds {
        edge_ub,
        vertex_ub,
        edge_ceiling: tree.max_degree().saturating_sub(1) * depth,
        vertex_ceiling: depth,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SandwichVerdict {
    pub edge_peak: usize,
    pub vertex_peak: usize,
    pub delta: usize,
    pub pass: bool,
}

/// `edge_peak >= vertex_peak` and `delta * vertex_peak >= edge_peak`.
pub fn sandwich_check(profile: &IsoProfile, delta: usize) -> SandwichVerdict {
    let (e, v) = (profile.edge_peak, profile.vertex_peak);
    SandwichVerdict { edge_peak: e, vertex_peak: v, delta, pass: e >= v && delta * v >= e }
}

/// Upper bounds stated for complete t-ary trees of depth d: the tighter
/// `(t - 1) d` and the `t d` the prefix construction gives, plus `b_v <= d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TaryUpperBounds {
    pub t: usize,
    pub d: usize,
    pub edge_tight: usize,
    pub edge_loose: usize,
    pub vertex: usize,
}

pub fn tary_upper_bounds(t: usize, d: usize) -> TaryUpperBounds {
    TaryUpperBounds { t, d, edge_tight: (t - 1) * d, edge_loose: t * d, vertex: d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{brute_force_profiles, iso_profile, ProfileConfig};
    use crate::tree::{generate_tree, TreeKind};

    fn gen(kind: TreeKind, kv: &[(&str, u64)]) -> RootedTree {
        let params = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        generate_tree(kind, &params, 0).unwrap()
    }

    fn binary3() -> RootedTree {
        gen(TreeKind::CompleteTary, &[("t", 2), ("d", 3)])
    }

    #[test]
    fn flux_on_a_path() {
        let t = gen(TreeKind::Path, &[("n", 3)]);
        let w = t.weights();
        let f = flux_assignment(&t, &VertexSet::from_iter([1]), &w).unwrap();
        assert_eq!(f.root_value, 0);
        assert_eq!(f.edge_values[&(1, 0)], 2);
        assert_eq!(f.edge_values[&(2, 1)], -1);
        assert_eq!(f.total(), 1);

        let empty = flux_assignment(&t, &VertexSet::new(), &w).unwrap();
        assert!(empty.edge_values.values().all(|&x| x == 0));
        assert_eq!(empty.total(), 0);

        let all = flux_assignment(&t, &VertexSet::from_iter(0..3), &w).unwrap();
        assert_eq!(all.root_value, 3);
        assert_eq!(all.total(), 3);

        assert_eq!(
            flux_assignment(&t, &VertexSet::from_iter([0, 3]), &w),
            Err(BoundsError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn flux_lemma_examples() {
        let t = gen(TreeKind::Path, &[("n", 3)]);
        assert_eq!(
            check_flux_lemma(&t, &VertexSet::from_iter([1])).unwrap(),
            FluxVerdict { sum: 1, expected: 1, pass: true }
        );
        let v = check_flux_lemma(&binary3(), &VertexSet::from_iter([1, 3, 4])).unwrap();
        assert_eq!((v.sum, v.expected, v.pass), (3, 3, true));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 2), BigInt::from(28));
        assert_eq!(binomial(22, 2), BigInt::from(231));
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(17, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn binomial_identities_up_to_64() {
        for a in 0..=64u64 {
            for b in 0..=a {
                assert_eq!(binomial(a, b), binomial(a, a - b));
                if a > 0 && b > 0 {
                    assert_eq!(binomial(a, b), binomial(a - 1, b - 1) + binomial(a - 1, b));
                }
            }
        }
    }

    #[test]
    fn theorem_values() {
        assert_eq!(theorem1_bound(3, 2), BigInt::from(56));
        assert_eq!(theorem1_bound(1, 0), BigInt::from(2));
        assert_eq!(theorem1_bound(10, 3), BigInt::from(3542));
    }

    #[test]
    fn ell_values() {
        let prof = [1, 2, 1, 1, 2, 1, 0];
        assert_eq!(ell(&prof, 1), 5);
        assert_eq!(ell(&prof, 0), 1);
        assert_eq!(ell(&prof, 2), 7);
    }

    #[test]
    fn p_values() {
        assert_eq!(p_lower_bound(7, 3), 1);
        assert_eq!(p_lower_bound(2, 1), 0);
        assert_eq!(p_lower_bound(1, 1), 0);
        assert_eq!(p_lower_bound(1023, 10), 3);
        // cross-check against the direct definition
        for n in 1..300u64 {
            for eta in 1..6u64 {
                let p = p_lower_bound(n, eta);
                assert!(theorem1_bound(eta, p) >= BigInt::from(n));
                if p > 0 {
                    assert!(theorem1_bound(eta, p - 1) < BigInt::from(n));
                }
            }
        }
    }

    #[test]
    fn corollary3_values() {
        let (be, bv) = corollary3_bound(1023, 10, 3);
        assert_eq!((be, bv), (0.0, 0.0));
        let (be, bv) = corollary3_bound(4u128.pow(40), 2, 3);
        let e = std::f64::consts::E;
        let expected = 2.0 / e * (2f64.powi(20) - 2.0 * e);
        assert!((be - expected).abs() <= 1e-9 * expected, "{be} vs {expected}");
        assert!((bv - expected / 3.0).abs() <= 1e-9 * expected);
        // n^(1/2η) <= 2e clamps to zero
        assert_eq!(corollary3_bound(1000, 50, 2).0, 0.0);
    }

    #[test]
    fn prefix_examples() {
        let path = gen(TreeKind::Path, &[("n", 6)]);
        assert_eq!(prefix_upper_bounds(&path).edge_ub, vec![1, 1, 1, 1, 1, 0]);
        let b = prefix_upper_bounds(&binary3());
        // S_6 is every vertex but the root, so both root edges are cut.
        assert_eq!(b.edge_ub, vec![1, 2, 1, 2, 3, 2, 0]);
        assert_eq!(b.vertex_ub, vec![1, 1, 1, 2, 2, 1, 0]);
        assert_eq!((b.edge_ceiling, b.vertex_ceiling), (6, 3));
        assert!(b.edge_ceiling_holds() && b.vertex_ceiling_holds());
        let star = prefix_upper_bounds(&gen(TreeKind::Star, &[("n", 6)]));
        assert_eq!(star.edge_ub, vec![1, 2, 3, 4, 5, 0]);
    }

    #[test]
    fn prefix_matches_definition() {
        let t = gen(TreeKind::RandomRecursive, &[("n", 40)]);
        let b = prefix_upper_bounds(&t);
        let order = t.postorder();
        for i in 1..=t.n() {
            let mask = VertexSet::from_iter(order[..i].iter().copied()).to_mask(t.n());
            assert_eq!(b.edge_ub[i - 1], crate::tree::edge_boundary(&t, &mask));
            assert_eq!(b.vertex_ub[i - 1], crate::tree::vertex_boundary(&t, &mask));
        }
    }

    #[test]
    fn sandwich_examples() {
        let t = binary3();
        let (e, v) = brute_force_profiles(&t, 20).unwrap();
        let prof = IsoProfile::from_values(e, v);
        assert_eq!(sandwich_check(&prof, 3), SandwichVerdict { edge_peak: 2, vertex_peak: 1, delta: 3, pass: true });
        let path = iso_profile(&gen(TreeKind::Path, &[("n", 4)]), &ProfileConfig::default()).unwrap();
        assert!(sandwich_check(&path, 2).pass);
        let single = iso_profile(&gen(TreeKind::Path, &[("n", 1)]), &ProfileConfig::default()).unwrap();
        assert!(sandwich_check(&single, 0).pass);
    }
}
