//! Per-tree reports, the verification suite and output emission.

use std::collections::{BTreeMap, VecDeque};
use std::io::{self, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    check_flux_lemma, corollary3_bound, ell, p_lower_bound, prefix_upper_bounds, sandwich_check, tary_upper_bounds,
    theorem1_bound, TaryUpperBounds,
};
use crate::profile::{brute_force_profiles, iso_profile, IsoProfile, ProfileConfig, ProfileError};
use crate::tree::{generate_tree_capped, RootedTree, TreeKind, VertexSet};

/// Absolute slack for the floating-point closed-form comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_FLUX_SAMPLES: usize = 32;

/// Lower bounds on layout and decomposition parameters read off the profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParameterBounds {
    pub pathwidth_lb: usize,
    pub bandwidth_lb: usize,
    pub cutwidth_lb: usize,
    pub treewidth_lb: usize,
    pub carvingwidth_lb: usize,
    pub wirelength_lb: u64,
    pub thinness_lb: usize,
}

/// Derives the parameter lower bounds.
///
/// Treewidth and carving-width use `max_j min_{ceil(j/2) <= i <= j} b_v(i)`,
/// evaluated with a sliding-window minimum since both window ends only move
/// right.
pub fn derived_parameter_bounds(profile: &IsoProfile, delta: usize) -> ParameterBounds {
    let values = &profile.vertex_values;
    let mut window: VecDeque<usize> = VecDeque::new();
    let mut best = 0usize;
    for j in 1..=values.len() {
        let idx = j - 1;
        while window.back().is_some_and(|&b| values[b] >= values[idx]) {
            window.pop_back();
        }
        window.push_back(idx);
        let lo = j.div_ceil(2) - 1;
        while window.front().is_some_and(|&f| f < lo) {
            window.pop_front();
        }
        best = best.max(values[*window.front().expect("window holds idx")]);
    }
    ParameterBounds {
        pathwidth_lb: profile.vertex_peak,
        bandwidth_lb: profile.vertex_peak,
        cutwidth_lb: profile.edge_peak,
        treewidth_lb: best.saturating_sub(1),
        carvingwidth_lb: best,
        wirelength_lb: profile.edge_values.iter().map(|&b| b as u64).sum(),
        thinness_lb: if delta == 0 { 0 } else { profile.vertex_peak.div_ceil(delta) },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeDescriptor {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, u64>>,
    pub n: usize,
    pub depth: usize,
    pub delta: usize,
    pub eta: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileSummary {
    pub edge_peak: usize,
    pub vertex_peak: usize,
    pub edge_argpeak: usize,
    pub vertex_argpeak: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Row {
    pub k: usize,
    pub ell: usize,
    /// Decimal string; the value outgrows fixed-width integers.
    pub bound: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsSection {
    pub eta: usize,
    pub depth: usize,
    pub delta: usize,
    pub p: u64,
    pub theorem1: Vec<Theorem1Row>,
    pub prefix_edge_max: usize,
    pub prefix_vertex_max: usize,
    pub prefix_edge_ceiling: usize,
    pub prefix_vertex_ceiling: usize,
    pub corollary3_be_lb: f64,
    pub corollary3_bv_lb: f64,
    pub sandwich_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tary: Option<TaryUpperBounds>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: &'static str,
    pub inequality: &'static str,
    /// Mandatory verdicts gate the exit status; the rest are findings.
    pub mandatory: bool,
    pub pass: bool,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub tree: TreeDescriptor,
    pub profile: ProfileSummary,
    pub bounds: BoundsSection,
    pub derived: ParameterBounds,
    pub flux_seed: u64,
    pub flux_samples: usize,
    pub verdicts: Vec<Verdict>,
}

impl BoundsReport {
    pub fn mandatory_pass(&self) -> bool {
        self.verdicts.iter().filter(|v| v.mandatory).all(|v| v.pass)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

/// Where a tree came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSource {
    File(String),
    Generated { kind: TreeKind, params: BTreeMap<String, u64>, seed: u64 },
}

impl TreeSource {
    pub fn describe(&self) -> String {
        match self {
            TreeSource::File(path) => path.clone(),
            TreeSource::Generated { kind, params, seed } => {
                let mut s = kind.to_string();
                for (k, v) in params {
                    s.push_str(&format!(" {k}={v}"));
                }
                if matches!(kind, TreeKind::RandomRecursive | TreeKind::RandomPrufer) {
                    s.push_str(&format!(" seed={seed}"));
                }
                s
            }
        }
    }

    /// `(t, d)` when the source is a complete t-ary generator.
    fn tary(&self) -> Option<(usize, usize)> {
        match self {
            TreeSource::Generated { kind: TreeKind::CompleteTary, params, .. } => {
                Some((*params.get("t")? as usize, *params.get("d")? as usize))
            }
            _ => None,
        }
    }
}

/// One entry of the suite: a tree, or the reason it could not be obtained.
#[derive(Debug, Clone)]
pub struct SuiteInput {
    pub source: TreeSource,
    pub tree: Result<RootedTree, String>,
}

impl SuiteInput {
    pub fn generated(kind: TreeKind, params: BTreeMap<String, u64>, seed: u64, max_vertices: usize) -> Self {
        let tree = generate_tree_capped(kind, &params, seed, max_vertices).map_err(|e| e.to_string());
        SuiteInput { source: TreeSource::Generated { kind, params, seed }, tree }
    }
}

fn gen_params(kv: &[(&str, u64)]) -> BTreeMap<String, u64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Every path, star, caterpillar `(spine, legs)` and complete t-ary tree with
/// at most `max_n` vertices.
pub fn structured_inputs(max_n: usize) -> Vec<SuiteInput> {
    let cap = max_n.max(1);
    let mut inputs = Vec::new();
    for n in 1..=max_n as u64 {
        inputs.push(SuiteInput::generated(TreeKind::Path, gen_params(&[("n", n)]), 0, cap));
        inputs.push(SuiteInput::generated(TreeKind::Star, gen_params(&[("n", n)]), 0, cap));
    }
    for spine in 1..=max_n as u64 {
        for legs in 0..max_n as u64 {
            if spine * (legs + 1) <= max_n as u64 {
                inputs.push(SuiteInput::generated(TreeKind::Caterpillar, gen_params(&[("spine", spine), ("legs", legs)]), 0, cap));
            }
        }
    }
    for t in 2..=max_n.max(2) {
        for d in 1.. {
            match crate::tree::complete_tary_vertices(t, d) {
                Some(n) if n <= max_n => {
                    // depth 1 is the single vertex for every t
                    if d > 1 || t == 2 {
                        inputs.push(SuiteInput::generated(
                            TreeKind::CompleteTary,
                            gen_params(&[("t", t as u64), ("d", d as u64)]),
                            0,
                            cap,
                        ));
                    }
                }
                _ => break,
            }
        }
    }
    inputs
}

/// `count` random trees with `1..=max_n` vertices, alternating between the
/// recursive and Prüfer generators, all derived from `seed`.
pub fn random_inputs(count: usize, max_n: usize, seed: u64) -> Vec<SuiteInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let kind = if i % 2 == 0 { TreeKind::RandomRecursive } else { TreeKind::RandomPrufer };
            let n = rng.gen_range(1..=max_n.max(1)) as u64;
            let tree_seed = rng.gen::<u64>();
            SuiteInput::generated(kind, gen_params(&[("n", n)]), tree_seed, max_n.max(1))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub profile: ProfileConfig,
    /// Largest `k` tabulated for the counting bound; `None` means up to the edge peak.
    pub k_max: Option<usize>,
    pub seed: u64,
    pub flux_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { profile: ProfileConfig::default(), k_max: None, seed: 0, flux_samples: DEFAULT_FLUX_SAMPLES }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SuiteEntry {
    Report(Box<BoundsReport>),
    Error { source: String, error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub seed: u64,
    pub entries: Vec<SuiteEntry>,
    pub exit_code: i32,
}

/// Seed for the flux samples of the `index`-th tree in a suite.
pub fn flux_seed(suite_seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = suite_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniformly sized random subsets of `0..n`.
pub fn random_subsets(n: usize, count: usize, seed: u64) -> Vec<VertexSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    (0..count)
        .map(|_| {
            let size = rng.gen_range(0..=n);
            let (chosen, _) = ids.partial_shuffle(&mut rng, size);
            chosen.iter().copied().collect()
        })
        .collect()
}

fn verdict(name: &'static str, inequality: &'static str, mandatory: bool, pass: bool, details: String) -> Verdict {
    Verdict { name, inequality, mandatory, pass, details }
}

/// Runs every check on one tree.
pub fn analyze_tree(
    tree: &RootedTree,
    source: &TreeSource,
    options: &SuiteOptions,
    flux_seed: u64,
) -> Result<BoundsReport, ProfileError> {
    let n = tree.n();
    let weights = tree.weights();
    let delta = tree.max_degree();
    let profile = iso_profile(tree, &options.profile)?;
    let mut verdicts = Vec::new();

    if n <= options.profile.oracle_limit {
        let (edge, vertex) = brute_force_profiles(tree, options.profile.oracle_limit)?;
        let mismatches = (0..n)
            .filter(|&i| edge[i] != profile.edge_values[i] || vertex[i] != profile.vertex_values[i])
            .map(|i| i + 1)
            .collect::<Vec<_>>();
        verdicts.push(verdict(
            "oracle_equivalence",
            "DP profiles = exhaustive minima over all subsets",
            true,
            mismatches.is_empty(),
            format!("mismatched sizes: {mismatches:?}"),
        ));
    }

    let subsets = random_subsets(n, options.flux_samples, flux_seed);
    let failures: Vec<String> = subsets
        .iter()
        .filter_map(|s| {
            let v = check_flux_lemma(tree, s).expect("sampled ids are in range");
            (!v.pass).then(|| format!("|S|={} sum={}", v.expected, v.sum))
        })
        .collect();
    verdicts.push(verdict(
        "flux_conservation",
        "f(r) + sum_e f(e) = |S|",
        true,
        failures.is_empty(),
        format!("{} samples, {} failures {:?}", subsets.len(), failures.len(), failures),
    ));

    let k_top = options.k_max.map_or(profile.edge_peak, |k| k.min(profile.edge_peak));
    let mut theorem1 = Vec::with_capacity(k_top + 1);
    let mut violated = Vec::new();
    for k in 0..=k_top {
        let count = ell(&profile.edge_values, k);
        let bound = theorem1_bound(weights.eta as u64, k as u64);
        if num_bigint::BigInt::from(count) > bound {
            violated.push(k);
        }
        theorem1.push(Theorem1Row { k, ell: count, bound: bound.to_string() });
    }
    verdicts.push(verdict(
        "theorem1",
        "ell(k) <= 2 * C(2*eta + k, k)",
        true,
        violated.is_empty(),
        format!("k = 0..={k_top}, violations at {violated:?}"),
    ));

    let p = p_lower_bound(n as u64, weights.eta as u64);
    verdicts.push(verdict(
        "p_lower_bound",
        "b_e >= p = min{k : 2 * C(2*eta + k, k) >= n}",
        true,
        p as usize <= profile.edge_peak,
        format!("p = {p}, b_e = {}", profile.edge_peak),
    ));

    let sandwich = sandwich_check(&profile, delta);
    verdicts.push(verdict(
        "sandwich",
        "b_e >= b_v >= b_e / delta",
        true,
        sandwich.pass,
        format!("b_e = {}, b_v = {}, delta = {}", sandwich.edge_peak, sandwich.vertex_peak, delta),
    ));

    let prefix = prefix_upper_bounds(tree);
    let undercut = prefix.dominance_violations(&profile);
    verdicts.push(verdict(
        "prefix_dominance",
        "|delta(S_i)| >= b_e(i) and |phi(S_i)| >= b_v(i)",
        true,
        undercut.is_empty(),
        format!("violations at sizes {undercut:?}"),
    ));
    verdicts.push(verdict(
        "prefix_edge_ceiling",
        "|delta(S_i)| <= (delta - 1) * d",
        false,
        prefix.edge_ceiling_holds(),
        format!("max = {}, ceiling = {}", prefix.edge_max(), prefix.edge_ceiling),
    ));
    verdicts.push(verdict(
        "prefix_vertex_ceiling",
        "|phi(S_i)| <= d",
        false,
        prefix.vertex_ceiling_holds(),
        format!("max = {}, ceiling = {}", prefix.vertex_max(), prefix.vertex_ceiling),
    ));

    let (be_lb, bv_lb) = corollary3_bound(n as u128, weights.eta as u64, delta as u64);
    verdicts.push(verdict(
        "corollary3",
        "b_e >= (1/e) * eta * (n^(1/(2 eta)) - 2e) and b_v >= that / delta",
        false,
        profile.edge_peak as f64 + FLOAT_TOLERANCE >= be_lb && profile.vertex_peak as f64 + FLOAT_TOLERANCE >= bv_lb,
        format!("be_lb = {be_lb}, bv_lb = {bv_lb}"),
    ));

    let tary = source.tary().map(|(t, d)| tary_upper_bounds(t, d));
    if let Some(ub) = tary {
        verdicts.push(verdict(
            "tary_edge_upper",
            "b_e <= t * d",
            false,
            profile.edge_peak <= ub.edge_loose,
            format!("b_e = {}, t*d = {}", profile.edge_peak, ub.edge_loose),
        ));
        verdicts.push(verdict(
            "tary_edge_upper_tight",
            "b_e <= (t - 1) * d",
            false,
            profile.edge_peak <= ub.edge_tight,
            format!("b_e = {}, (t-1)*d = {}", profile.edge_peak, ub.edge_tight),
        ));
        verdicts.push(verdict(
            "tary_vertex_upper",
            "b_v <= d",
            false,
            profile.vertex_peak <= ub.vertex,
            format!("b_v = {}, d = {}", profile.vertex_peak, ub.vertex),
        ));
    }

    let (kind, params) = match source {
        TreeSource::Generated { kind, params, .. } => (Some(kind.to_string()), Some(params.clone())),
        TreeSource::File(_) => (None, None),
    };
    Ok(BoundsReport {
        tree: TreeDescriptor { source: source.describe(), kind, params, n, depth: weights.depth, delta, eta: weights.eta },
        profile: ProfileSummary {
            edge_peak: profile.edge_peak,
            vertex_peak: profile.vertex_peak,
            edge_argpeak: profile.edge_argpeak,
            vertex_argpeak: profile.vertex_argpeak,
        },
        bounds: BoundsSection {
            eta: weights.eta,
            depth: weights.depth,
            delta,
            p,
            theorem1,
            prefix_edge_max: prefix.edge_max(),
            prefix_vertex_max: prefix.vertex_max(),
            prefix_edge_ceiling: prefix.edge_ceiling,
            prefix_vertex_ceiling: prefix.vertex_ceiling,
            corollary3_be_lb: be_lb,
            corollary3_bv_lb: bv_lb,
            sandwich_pass: sandwich.pass,
            tary,
        },
        derived: derived_parameter_bounds(&profile, delta),
        flux_seed,
        flux_samples: subsets.len(),
        verdicts,
    })
}

/// Runs [`analyze_tree`] over every input. Trees are processed in parallel;
/// entries come back in input order.
///
/// Exit code: 2 if any input failed to load or exceeded a cap, else 1 if any
/// mandatory verdict failed, else 0.
pub fn verify_suite(inputs: &[SuiteInput], options: &SuiteOptions) -> SuiteOutcome {
    let entries: Vec<SuiteEntry> = inputs
        .par_iter()
        .enumerate()
        .map(|(index, input)| {
            let source = input.source.describe();
            let tree = match &input.tree {
                Ok(tree) => tree,
                Err(error) => return SuiteEntry::Error { source, error: error.clone() },
            };
            match analyze_tree(tree, &input.source, options, flux_seed(options.seed, index as u64)) {
                Ok(report) => SuiteEntry::Report(Box::new(report)),
                Err(e) => SuiteEntry::Error { source, error: e.to_string() },
            }
        })
        .collect();
    let errored = entries.iter().any(|e| matches!(e, SuiteEntry::Error { .. }));
    let failed = entries.iter().any(|e| matches!(e, SuiteEntry::Report(r) if !r.mandatory_pass()));
    let exit_code = if errored {
        2
    } else if failed {
        1
    } else {
        0
    };
    SuiteOutcome { seed: options.seed, entries, exit_code }
}

/// One row of the complete-tree sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: usize,
    pub d: usize,
    pub n: usize,
    pub eta: usize,
    pub be_peak: usize,
    pub bv_peak: usize,
    pub p: u64,
    pub be_over_d: f64,
    pub bv_sqrt_t_over_d: f64,
    pub tary_edge_tight: usize,
    pub tary_edge_loose: usize,
    pub theorem1_pass: bool,
    pub sandwich_pass: bool,
}

pub const SWEEP_MAX_VERTICES: usize = 50_000;

/// `(t, d)` pairs of the sweep: binary depths 2..=13, and t in {3, 4, 5, 9}
/// for every depth from 2 keeping `n <= 50 000`.
pub fn sweep_shapes() -> Vec<(usize, usize)> {
    let mut shapes: Vec<(usize, usize)> = (2..=13).map(|d| (2, d)).collect();
    for t in [3usize, 4, 5, 9] {
        let mut d = 2;
        while crate::tree::complete_tary_vertices(t, d).is_some_and(|n| n <= SWEEP_MAX_VERTICES) {
            shapes.push((t, d));
            d += 1;
        }
    }
    shapes
}

pub fn sweep_row(t: usize, d: usize, config: &ProfileConfig) -> Result<SweepRow, ProfileError> {
    let params = BTreeMap::from([("t".to_string(), t as u64), ("d".to_string(), d as u64)]);
    let tree = generate_tree_capped(TreeKind::CompleteTary, &params, 0, config.dp_cap)
        .map_err(|_| ProfileError::TooLarge { n: crate::tree::complete_tary_vertices(t, d).unwrap_or(usize::MAX), cap: config.dp_cap })?;
    let n = tree.n();
    let weights = tree.weights();
    let profile = iso_profile(&tree, config)?;
    let eta = weights.eta as u64;
    let theorem1_pass = (0..=profile.edge_peak)
        .all(|k| num_bigint::BigInt::from(ell(&profile.edge_values, k)) <= theorem1_bound(eta, k as u64));
    let ub = tary_upper_bounds(t, d);
    Ok(SweepRow {
        t,
        d,
        n,
        eta: weights.eta,
        be_peak: profile.edge_peak,
        bv_peak: profile.vertex_peak,
        p: p_lower_bound(n as u64, eta),
        be_over_d: profile.edge_peak as f64 / d as f64,
        bv_sqrt_t_over_d: profile.vertex_peak as f64 * (t as f64).sqrt() / d as f64,
        tary_edge_tight: ub.edge_tight,
        tary_edge_loose: ub.edge_loose,
        theorem1_pass,
        sandwich_pass: sandwich_check(&profile, tree.max_degree()).pass,
    })
}

pub fn paper_tables(config: &ProfileConfig) -> Result<Vec<SweepRow>, ProfileError> {
    sweep_shapes().into_par_iter().map(|(t, d)| sweep_row(t, d, config)).collect()
}

/// Binary-tree trend over the sweep rows with `t = 2` and `d >= 4`:
/// `p <= b_e <= 2d`, `b_v <= d`, and `b_e / d` never drops by more than one
/// unit of peak (`1 / d`) from one depth to the next.
pub fn binary_trend_verdict(rows: &[SweepRow]) -> Verdict {
    let binary: Vec<&SweepRow> = rows.iter().filter(|r| r.t == 2 && r.d >= 4).collect();
    let mut problems = Vec::new();
    for r in &binary {
        if r.p as usize > r.be_peak || r.be_peak > 2 * r.d {
            problems.push(format!("d={}: p={} b_e={} not in [p, 2d]", r.d, r.p, r.be_peak));
        }
        if r.bv_peak > r.d {
            problems.push(format!("d={}: b_v={} > d", r.d, r.bv_peak));
        }
    }
    for pair in binary.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b.be_over_d + 1.0 / a.d as f64 + FLOAT_TOLERANCE < a.be_over_d {
            problems.push(format!("b_e/d drops from {} (d={}) to {} (d={})", a.be_over_d, a.d, b.be_over_d, b.d));
        }
    }
    verdict(
        "binary_trend",
        "p <= b_e(T_d) <= 2d, b_v(T_d) <= d, b_e/d nondecreasing within one step",
        true,
        !binary.is_empty() && problems.is_empty(),
        format!("{} depths checked; {problems:?}", binary.len()),
    )
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

fn csv_bytes<S: Serialize>(rows: impl IntoIterator<Item = S>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("csv rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}

fn json_bytes<S: Serialize + ?Sized>(value: &S) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

#[derive(Serialize)]
struct ProfileCsvRow {
    i: usize,
    b_e: usize,
    b_v: usize,
}

pub fn render_profile(profile: &IsoProfile, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => csv_bytes((0..profile.n).map(|k| ProfileCsvRow {
            i: k + 1,
            b_e: profile.edge_values[k],
            b_v: profile.vertex_values[k],
        })),
        OutputFormat::Json => {
            let mut out = serde_json::to_vec(profile).expect("profile serializes");
            out.push(b'\n');
            out
        }
    }
}

#[derive(Serialize)]
struct ReportCsvRow<'a> {
    source: &'a str,
    n: Option<usize>,
    depth: Option<usize>,
    delta: Option<usize>,
    eta: Option<usize>,
    edge_peak: Option<usize>,
    vertex_peak: Option<usize>,
    p: Option<u64>,
    prefix_edge_max: Option<usize>,
    prefix_vertex_max: Option<usize>,
    corollary3_be_lb: Option<f64>,
    pathwidth_lb: Option<usize>,
    bandwidth_lb: Option<usize>,
    cutwidth_lb: Option<usize>,
    treewidth_lb: Option<usize>,
    carvingwidth_lb: Option<usize>,
    wirelength_lb: Option<u64>,
    thinness_lb: Option<usize>,
    mandatory_pass: bool,
    failed: String,
    error: &'a str,
}

/// Suite output: JSON `{"seed":…, "exit_code":…, "entries":[…]}` or one CSV row per tree.
pub fn render_suite(outcome: &SuiteOutcome, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Json => json_bytes(outcome),
        OutputFormat::Csv => csv_bytes(outcome.entries.iter().map(|entry| match entry {
            SuiteEntry::Report(r) => ReportCsvRow {
                source: &r.tree.source,
                n: Some(r.tree.n),
                depth: Some(r.tree.depth),
                delta: Some(r.tree.delta),
                eta: Some(r.tree.eta),
                edge_peak: Some(r.profile.edge_peak),
                vertex_peak: Some(r.profile.vertex_peak),
                p: Some(r.bounds.p),
                prefix_edge_max: Some(r.bounds.prefix_edge_max),
                prefix_vertex_max: Some(r.bounds.prefix_vertex_max),
                corollary3_be_lb: Some(r.bounds.corollary3_be_lb),
                pathwidth_lb: Some(r.derived.pathwidth_lb),
                bandwidth_lb: Some(r.derived.bandwidth_lb),
                cutwidth_lb: Some(r.derived.cutwidth_lb),
                treewidth_lb: Some(r.derived.treewidth_lb),
                carvingwidth_lb: Some(r.derived.carvingwidth_lb),
                wirelength_lb: Some(r.derived.wirelength_lb),
                thinness_lb: Some(r.derived.thinness_lb),
                mandatory_pass: r.mandatory_pass(),
                failed: r.verdicts.iter().filter(|v| !v.pass).map(|v| v.name).collect::<Vec<_>>().join(" "),
                error: "",
            },
            SuiteEntry::Error { source, error } => ReportCsvRow {
                source,
                n: None,
                depth: None,
                delta: None,
                eta: None,
                edge_peak: None,
                vertex_peak: None,
                p: None,
                prefix_edge_max: None,
                prefix_vertex_max: None,
                corollary3_be_lb: None,
                pathwidth_lb: None,
                bandwidth_lb: None,
                cutwidth_lb: None,
                treewidth_lb: None,
                carvingwidth_lb: None,
                wirelength_lb: None,
                thinness_lb: None,
                mandatory_pass: false,
                failed: String::new(),
                error,
            },
        })),
    }
}

pub fn render_report(report: &BoundsReport, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Json => json_bytes(report),
        OutputFormat::Csv => {
            let outcome = SuiteOutcome {
                seed: 0,
                entries: vec![SuiteEntry::Report(Box::new(report.clone()))],
                exit_code: 0,
            };
            render_suite(&outcome, OutputFormat::Csv)
        }
    }
}

pub fn render_sweep(rows: &[SweepRow], format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => csv_bytes(rows),
        OutputFormat::Json => json_bytes(rows),
    }
}

/// Writes to `destination`, or standard output when `None`.
pub fn emit(bytes: &[u8], destination: Option<&Path>) -> io::Result<()> {
    match destination {
        Some(path) => std::fs::write(path, bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::generate_tree;

    fn gen(kind: TreeKind, kv: &[(&str, u64)]) -> (RootedTree, TreeSource) {
        let params: BTreeMap<String, u64> = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let tree = generate_tree(kind, &params, 0).unwrap();
        (tree, TreeSource::Generated { kind, params, seed: 0 })
    }

    #[test]
    fn derived_binary3() {
        let prof = IsoProfile::from_values(vec![1, 2, 1, 1, 2, 1, 0], vec![1, 1, 1, 1, 1, 1, 0]);
        let d = derived_parameter_bounds(&prof, 3);
        assert_eq!(
            d,
            ParameterBounds {
                pathwidth_lb: 1,
                bandwidth_lb: 1,
                cutwidth_lb: 2,
                treewidth_lb: 0,
                carvingwidth_lb: 1,
                wirelength_lb: 8,
                thinness_lb: 1
            }
        );
    }

    #[test]
    fn derived_path_and_single() {
        let prof = IsoProfile::from_values(vec![1, 1, 1, 0], vec![1, 1, 1, 0]);
        let d = derived_parameter_bounds(&prof, 2);
        assert_eq!((d.pathwidth_lb, d.cutwidth_lb, d.wirelength_lb, d.thinness_lb), (1, 1, 3, 1));
        let single = IsoProfile::from_values(vec![0], vec![0]);
        let d = derived_parameter_bounds(&single, 0);
        assert_eq!(d.pathwidth_lb + d.cutwidth_lb + d.treewidth_lb + d.carvingwidth_lb + d.thinness_lb, 0);
        assert_eq!(d.wirelength_lb, 0);
    }

    #[test]
    fn window_minimum_matches_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..40);
            let v: Vec<usize> = (0..n).map(|_| rng.gen_range(0..6)).collect();
            let prof = IsoProfile::from_values(vec![0; n], v.clone());
            let direct = (1..=n).map(|j| (j.div_ceil(2)..=j).map(|i| v[i - 1]).min().unwrap()).max().unwrap();
            assert_eq!(derived_parameter_bounds(&prof, 1).carvingwidth_lb, direct);
        }
    }

    #[test]
    fn binary3_report_passes() {
        let (tree, source) = gen(TreeKind::CompleteTary, &[("t", 2), ("d", 3)]);
        let r = analyze_tree(&tree, &source, &SuiteOptions::default(), 11).unwrap();
        assert!(r.mandatory_pass(), "{:#?}", r.verdicts);
        assert_eq!(r.bounds.p, 1);
        assert_eq!(r.bounds.theorem1.len(), 3);
        assert_eq!(r.bounds.theorem1[1], Theorem1Row { k: 1, ell: 5, bound: "14".into() });
        assert_eq!(r.derived.wirelength_lb, 8);
        assert!(r.verdict("oracle_equivalence").unwrap().pass);
        assert!(r.bounds.tary.is_some());
        assert_eq!(r.tree.source, "complete_tary d=3 t=2");
    }

    #[test]
    fn k_max_truncates_table() {
        let (tree, source) = gen(TreeKind::Star, &[("n", 9)]);
        let opts = SuiteOptions { k_max: Some(1), ..SuiteOptions::default() };
        let r = analyze_tree(&tree, &source, &opts, 0).unwrap();
        assert_eq!(r.bounds.theorem1.len(), 2);
    }

    #[test]
    fn suite_exit_codes() {
        let (tree, source) = gen(TreeKind::Path, &[("n", 5)]);
        let good = SuiteInput { source, tree: Ok(tree) };
        let bad = SuiteInput { source: TreeSource::File("broken.json".into()), tree: Err("json: eof".into()) };
        let opts = SuiteOptions::default();
        assert_eq!(verify_suite(std::slice::from_ref(&good), &opts).exit_code, 0);
        let out = verify_suite(&[good.clone(), bad], &opts);
        assert_eq!(out.exit_code, 2);
        assert!(matches!(&out.entries[1], SuiteEntry::Error { source, .. } if source == "broken.json"));
        let capped = SuiteOptions { profile: ProfileConfig { dp_cap: 3, ..ProfileConfig::default() }, ..opts };
        assert_eq!(verify_suite(&[good], &capped).exit_code, 2);
    }

    #[test]
    fn profile_renderings() {
        let prof = IsoProfile::from_values(vec![1, 2, 1, 1, 2, 1, 0], vec![1, 1, 1, 1, 1, 1, 0]);
        let csv = String::from_utf8(render_profile(&prof, OutputFormat::Csv)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "i,b_e,b_v");
        assert_eq!(lines.len(), 8);
        assert_eq!(lines[2], "2,2,1");
        let json: serde_json::Value = serde_json::from_slice(&render_profile(&prof, OutputFormat::Json)).unwrap();
        assert_eq!(json["edge_peak"], 2);
        assert_eq!(json["edge"], serde_json::json!([1, 2, 1, 1, 2, 1, 0]));
        assert_eq!(json["vertex_argpeak"], 1);
    }

    #[test]
    fn report_json_fields() {
        let (tree, source) = gen(TreeKind::CompleteTary, &[("t", 2), ("d", 3)]);
        let r = analyze_tree(&tree, &source, &SuiteOptions::default(), 0).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&render_report(&r, OutputFormat::Json)).unwrap();
        for key in [
            "eta",
            "depth",
            "delta",
            "p",
            "theorem1",
            "prefix_edge_max",
            "prefix_vertex_max",
            "corollary3_be_lb",
            "sandwich_pass",
        ] {
            assert!(v["bounds"].get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["bounds"]["theorem1"][2]["bound"], "56");
        assert_eq!(v["derived"]["wirelength_lb"], 8);
        let csv = String::from_utf8(render_report(&r, OutputFormat::Csv)).unwrap();
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn emit_to_missing_directory_fails() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("no/such/dir/out.csv");
        assert!(emit(b"x", Some(&path)).is_err());
        let ok = dir.path().join("out.csv");
        emit(b"x", Some(&ok)).unwrap();
        assert_eq!(std::fs::read(ok).unwrap(), b"x");
    }

    #[test]
    fn sweep_shapes_cover_requested_range() {
        let shapes = sweep_shapes();
        assert_eq!(shapes.iter().filter(|s| s.0 == 2).count(), 12);
        assert!(shapes.contains(&(3, 10)) && !shapes.contains(&(3, 11)));
        assert!(shapes.contains(&(9, 5)) && !shapes.contains(&(9, 6)));
    }

    #[test]
    fn random_subsets_are_seeded() {
        let a = random_subsets(20, 5, 4);
        assert_eq!(a, random_subsets(20, 5, 4));
        assert!(a.iter().all(|s| s.iter().all(|v| v < 20)));
        assert_ne!(flux_seed(0, 0), flux_seed(0, 1));
    }
}
