//! Independent checks for the exact pipeline: walk counts by dynamic
//! programming over the edge list, brute-force isomorphism, main-eigenvector
//! counts from a floating-point eigendecomposition, seeded random sampling,
//! isomorphism-class enumeration and reconstruction sweeps.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical;
use crate::graph::{Graph, VertexSet};
use crate::linalg::{self, ExactMatrix};
use crate::par;
use crate::reconstruct::{self, ReconstructionInput, ReconstructionResult, UndeterminedReason};
use crate::walk::{self, WalkMatrix};

/// Projection norm above which an eigenspace counts as main.
pub const EIGEN_TOL: f64 = 1e-7;
/// Relative gap below which two computed eigenvalues are the same eigenvalue.
const CLUSTER_TOL: f64 = 1e-6;
pub const BRUTE_FORCE_MAX: usize = 10;
pub const CLASSES_MAX: usize = 7;
pub const REALIZATIONS_MAX: usize = 16;
pub const DEFAULT_SEED: u64 = 0x5EED_2025;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} is limited to {max} vertices, got {n}")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("walk matrix entries exceed 127 bits")]
    EntryOverflow,
}

fn check_size(what: &'static str, n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        Err(OracleError::TooLarge { what, n, max })
    } else {
        Ok(())
    }
}

/// `counts[v][k]`: walks of length `k` from `v` ending in `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCountTable {
    pub counts: Vec<Vec<BigInt>>,
}

impl WalkCountTable {
    pub fn get(&self, v: usize, k: usize) -> &BigInt {
        &self.counts[v][k]
    }
}

pub fn count_walks(g: &Graph, s: &VertexSet, max_k: usize) -> WalkCountTable {
    let n = g.order();
    let edges = g.edges();
    let mut counts: Vec<Vec<BigInt>> = vec![Vec::with_capacity(max_k + 1); n];
    let mut cur: Vec<BigInt> = (0..n).map(|v| BigInt::from(u8::from(s.contains(v)))).collect();
    for k in 0..=max_k {
        for (row, c) in counts.iter_mut().zip(&cur) {
            row.push(c.clone());
        }
        if k == max_k {
            break;
        }
        let mut next = vec![BigInt::zero(); n];
        for &(u, v) in &edges {
            next[u] += &cur[v];
            next[v] += &cur[u];
        }
        cur = next;
    }
    WalkCountTable { counts }
}

fn bitmasks(g: &Graph) -> Vec<u32> {
    (0..g.order()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect()
}

struct IsoSearch {
    a1: Vec<u32>,
    a2: Vec<u32>,
    key1: Vec<(u32, bool)>,
    key2: Vec<(u32, bool)>,
    order: Vec<usize>,
    map: Vec<usize>,
}

impl IsoSearch {
    fn extend(&mut self, depth: usize, used: u32) -> bool {
        let n = self.order.len();
        if depth == n {
            return true;
        }
        let v = self.order[depth];
        for t in 0..n {
            if used >> t & 1 == 1 || self.key1[v] != self.key2[t] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| (self.a1[v] >> u & 1) == (self.a2[t] >> self.map[u] & 1));
            if consistent {
                self.map[v] = t;
                if self.extend(depth + 1, used | 1 << t) {
                    return true;
                }
            }
        }
        false
    }
}

/// Some isomorphism `g1 -> g2` (as `perm[v]` = image of `v`), or `None`.
pub fn brute_force_isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>, OracleError> {
    brute_force_set_isomorphic(g1, &VertexSet::all(g1.order()), g2, &VertexSet::all(g2.order()))
}

/// Some isomorphism `g1 -> g2` carrying `s1` onto `s2`, or `None`.
pub fn brute_force_set_isomorphic(
    g1: &Graph,
    s1: &VertexSet,
    g2: &Graph,
    s2: &VertexSet,
) -> Result<Option<Vec<usize>>, OracleError> {
    let n = g1.order();
    check_size("brute-force isomorphism", n.max(g2.order()), BRUTE_FORCE_MAX)?;
    if n != g2.order() || g1.edge_count() != g2.edge_count() || s1.len() != s2.len() {
        return Ok(None);
    }
    let (a1, a2) = (bitmasks(g1), bitmasks(g2));
    let key = |a: &[u32], s: &VertexSet| -> Vec<(u32, bool)> {
        (0..n).map(|v| (a[v].count_ones(), s.contains(v))).collect()
    };
    let (key1, key2) = (key(&a1, s1), key(&a2, s2));
    let (mut k1s, mut k2s) = (key1.clone(), key2.clone());
    k1s.sort_unstable();
    k2s.sort_unstable();
    if k1s != k2s {
        return Ok(None);
    }
    // each next vertex has the most neighbours among those already placed
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u32;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((a1[v] & placed).count_ones(), a1[v].count_ones(), usize::MAX - v))
            .expect("unplaced vertex");
        placed |= 1 << v;
        order.push(v);
    }
    let mut search = IsoSearch { a1, a2, key1, key2, order, map: vec![0; n] };
    Ok(search.extend(0, 0).then_some(search.map))
}

/// Number of eigenspaces of `A` onto which `e_S` has a projection of norm above `tol`.
pub fn main_eigen_count(g: &Graph, s: &VertexSet, tol: f64) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let a: DMatrix<f64> = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let eig = SymmetricEigen::new(a);
    let e: DVector<f64> = DVector::from_fn(n, |i, _| if s.contains(i) { 1.0 } else { 0.0 });
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut count = 0;
    let mut start = 0;
    for end in 1..=n {
        let split = end == n || {
            let (lo, hi) = (eig.eigenvalues[idx[end - 1]], eig.eigenvalues[idx[end]]);
            hi - lo > CLUSTER_TOL * lo.abs().max(1.0)
        };
        if split {
            let norm2: f64 = idx[start..end].iter().map(|&k| eig.eigenvectors.column(k).dot(&e).powi(2)).sum();
            if norm2.sqrt() > tol {
                count += 1;
            }
            start = end;
        }
    }
    count
}

/// The main-eigenspace count agrees with the exact rank of `W^S`.
pub fn float_eigencheck(g: &Graph, s: &VertexSet, tol: f64) -> bool {
    match walk::walk_matrix(g, s) {
        Ok(w) => main_eigen_count(g, s, tol) == linalg::rank(w.matrix()),
        Err(_) => false,
    }
}

/// Generator for trial `trial` of a run seeded with `seed`: xoshiro256++ seeded
/// through SplitMix64 from `seed ^ (trial * 0x9E3779B97F4A7C15)`.
pub fn trial_rng(seed: u64, trial: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Fair coin flips drawn 64 at a time, least significant bit first.
pub struct Bits<'a, R: RngCore> {
    rng: &'a mut R,
    word: u64,
    left: u32,
}

impl<'a, R: RngCore> Bits<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Bits { rng, word: 0, left: 0 }
    }

    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        b
    }
}

/// `G(n, 1/2)`: one fair bit per pair `(i, j)`, `i < j`, in lexicographic order.
pub fn random_graph<R: RngCore>(n: usize, rng: &mut R) -> Graph {
    let mut bits = Bits::new(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if bits.next_bit() {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("distinct pairs")
}

/// Uniform non-empty subset of `{0, ..., n-1}`.
pub fn random_set<R: RngCore>(n: usize, rng: &mut R) -> VertexSet {
    loop {
        let mut bits = Bits::new(rng);
        let members: Vec<usize> = (0..n).filter(|_| bits.next_bit()).collect();
        if !members.is_empty() {
            return VertexSet::from_members(n, &members).expect("members in range");
        }
    }
}

/// Uniform integer in `0..bound` by rejection.
pub fn below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Uniform permutation by Fisher-Yates.
pub fn random_permutation<R: RngCore>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        p.swap(i, j);
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankStats {
    pub n: usize,
    pub trials: usize,
    pub full_rank_count: usize,
    pub rank_histogram: BTreeMap<usize, usize>,
    pub seed: u64,
    pub random_set: bool,
}

impl RankStats {
    pub fn full_rank_fraction(&self) -> f64 {
        self.full_rank_count as f64 / self.trials as f64
    }

    /// One record per occupied rank bucket.
    pub fn json_lines(&self) -> Vec<String> {
        self.rank_histogram
            .iter()
            .map(|(rank, count)| {
                serde_json::json!({
                    "n": self.n,
                    "seed": self.seed,
                    "random_set": self.random_set,
                    "rank": rank,
                    "count": count,
                })
                .to_string()
            })
            .collect()
    }
}

/// Rank distribution of `W^V` over `trials` samples of `G(n, 1/2)`.
pub fn rank_statistics(n: usize, trials: usize, seed: u64) -> RankStats {
    rank_statistics_with(n, trials, seed, false)
}

/// As [`rank_statistics`]; with `random_set` each trial also draws a uniform non-empty `S`.
pub fn rank_statistics_with(n: usize, trials: usize, seed: u64, random_set: bool) -> RankStats {
    assert!(n >= 1 && trials >= 1);
    let ranks = par::map_range(trials, |t| sample_rank(n, seed, t as u64, random_set));
    collect_stats(n, trials, seed, random_set, &ranks)
}

/// Single-threaded [`rank_statistics_with`]; same output.
pub fn rank_statistics_seq(n: usize, trials: usize, seed: u64, random_set: bool) -> RankStats {
    assert!(n >= 1 && trials >= 1);
    let ranks = par::map_range_seq(trials, |t| sample_rank(n, seed, t as u64, random_set));
    collect_stats(n, trials, seed, random_set, &ranks)
}

fn sample_rank(n: usize, seed: u64, trial: u64, with_random_set: bool) -> usize {
    let mut rng = trial_rng(seed, trial);
    let g = random_graph(n, &mut rng);
    let s = if with_random_set { random_set(n, &mut rng) } else { VertexSet::all(n) };
    linalg::rank(walk::walk_matrix(&g, &s).expect("non-empty set").matrix())
}

fn collect_stats(n: usize, trials: usize, seed: u64, random_set: bool, ranks: &[usize]) -> RankStats {
    let mut rank_histogram = BTreeMap::new();
    for &r in ranks {
        *rank_histogram.entry(r).or_insert(0) += 1;
    }
    let full_rank_count = rank_histogram.get(&n).copied().unwrap_or(0);
    RankStats { n, trials, full_rank_count, rank_histogram, seed, random_set }
}

/// Canonical code: the largest upper-triangle bit string over all vertex
/// orders that sort vertices by the invariant (degree, neighbour degrees).
/// Two graphs get the same code iff they are isomorphic.
pub fn canonical_code(g: &Graph) -> u64 {
    canonical_order(g).0
}

fn canonical_order(g: &Graph) -> (u64, Vec<usize>) {
    let n = g.order();
    assert!(n * n.saturating_sub(1) / 2 <= 64, "canonical code needs n <= 11");
    let adj = bitmasks(g);
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let keys: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = g.neighbors(v).iter().map(|&u| deg[u]).collect();
            nd.sort_unstable_by(|a, b| b.cmp(a));
            (deg[v], nd)
        })
        .collect();
    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by(|&a, &b| keys[b].cmp(&keys[a]));
    let slot_key: Vec<&(u32, Vec<u32>)> = sorted.iter().map(|&v| &keys[v]).collect();
    let total = n * n.saturating_sub(1) / 2;
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut ord = Vec::with_capacity(n);
    canon_search(&adj, &keys, &slot_key, total, 0, 0, &mut ord, &mut best);
    let (code, ord) = best.expect("at least one order");
    (code, ord)
}

#[allow(clippy::too_many_arguments)]
fn canon_search(
    adj: &[u32],
    keys: &[(u32, Vec<u32>)],
    slot_key: &[&(u32, Vec<u32>)],
    total: usize,
    prefix: u64,
    used: u32,
    ord: &mut Vec<usize>,
    best: &mut Option<(u64, Vec<usize>)>,
) {
    let q = ord.len();
    let n = adj.len();
    if q == n {
        if best.as_ref().is_none_or(|(b, _)| prefix > *b) {
            *best = Some((prefix, ord.clone()));
        }
        return;
    }
    for v in 0..n {
        if used >> v & 1 == 1 || &keys[v] != slot_key[q] {
            continue;
        }
        // bits (0,q), (1,q), ..., (q-1,q) follow all bits among earlier positions
        let mut code = prefix;
        for &u in ord.iter() {
            code = code << 1 | u64::from(adj[u] >> v & 1);
        }
        let len = q * (q + 1) / 2;
        if let Some((b, _)) = best {
            let best_prefix = if len == 0 { 0 } else { *b >> (total - len) };
            if code < best_prefix {
                continue;
            }
        }
        ord.push(v);
        canon_search(adj, keys, slot_key, total, code, used | 1 << v, ord, best);
        ord.pop();
    }
}

/// Relabels `g` into its canonical order.
pub fn canonical_graph(g: &Graph) -> Graph {
    let (_, ord) = canonical_order(g);
    g.relabel(&canonical::invert(&ord))
}

/// One representative per isomorphism class of graphs on `n` vertices, in
/// canonical labelling, sorted by canonical code.
pub fn graph_classes(n: usize) -> Result<Vec<Graph>, OracleError> {
    check_size("class enumeration", n, CLASSES_MAX)?;
    if n == 0 {
        return Ok(vec![Graph::empty(0)]);
    }
    let mut classes = vec![Graph::empty(1)];
    for k in 2..=n {
        let extended: Vec<Vec<(u64, Graph)>> = par::map(&classes, |g| {
            (0u32..1 << (k - 1))
                .map(|mask| {
                    let mut edges = g.edges();
                    edges.extend((0..k - 1).filter(|&u| mask >> u & 1 == 1).map(|u| (u, k - 1)));
                    let h = Graph::from_edges(k, &edges).expect("simple extension");
                    (canonical_code(&h), h)
                })
                .collect()
        });
        let mut by_code: BTreeMap<u64, Graph> = BTreeMap::new();
        for (code, h) in extended.into_iter().flatten() {
            by_code.entry(code).or_insert(h);
        }
        classes = by_code.into_values().map(|h| canonical_graph(&h)).collect();
    }
    Ok(classes)
}

/// Every graph whose walk matrix for `w`'s set is exactly `w`, up to `limit` of them.
pub fn realizations(w: &WalkMatrix, limit: usize) -> Result<Vec<Graph>, OracleError> {
    let n = w.order();
    check_size("realization search", n, REALIZATIONS_MAX)?;
    let entries: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            w.matrix()
                .row(i)
                .iter()
                .map(|x| x.to_integer().to_i128().ok_or(OracleError::EntryOverflow))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    // row v of A: sum over neighbours u of W[u][k] equals W[v][k+1], k < n-1
    let candidates: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            let target: Vec<i128> = entries[v][1..].to_vec();
            let mut out = Vec::new();
            let others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
            subset_sums(&entries, &others, 0, vec![0; n - 1], &target, 0, &mut out);
            out
        })
        .collect();
    let mut found = Vec::new();
    let mut rows = vec![0u32; n];
    assemble(&candidates, 0, &mut rows, limit, &mut found);
    Ok(found
        .into_iter()
        .map(|rows| {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|v| (v + 1..n).map(move |u| (v, u)))
                .filter(|&(v, u)| rows[v] >> u & 1 == 1)
                .collect();
            Graph::from_edges(n, &edges).expect("symmetric rows")
        })
        .filter(|g| walk::walk_matrix(g, w.set()).is_ok_and(|w2| &w2 == w))
        .collect())
}

fn subset_sums(
    entries: &[Vec<i128>],
    others: &[usize],
    idx: usize,
    acc: Vec<i128>,
    target: &[i128],
    mask: u32,
    out: &mut Vec<u32>,
) {
    if idx == others.len() {
        if acc == target {
            out.push(mask);
        }
        return;
    }
    let u = others[idx];
    subset_sums(entries, others, idx + 1, acc.clone(), target, mask, out);
    let with: Vec<i128> = acc.iter().zip(&entries[u]).map(|(a, b)| a + b).collect();
    if with.iter().zip(target).all(|(a, t)| a <= t) {
        subset_sums(entries, others, idx + 1, with, target, mask | 1 << u, out);
    }
}

fn assemble(candidates: &[Vec<u32>], v: usize, rows: &mut Vec<u32>, limit: usize, found: &mut Vec<Vec<u32>>) {
    if found.len() >= limit {
        return;
    }
    let n = candidates.len();
    if v == n {
        found.push(rows.clone());
        return;
    }
    let low = (1u32 << v) - 1;
    let required = (0..v).filter(|&u| rows[u] >> v & 1 == 1).fold(0u32, |m, u| m | 1 << u);
    for &c in &candidates[v] {
        if c & low == required {
            rows[v] = c;
            assemble(candidates, v + 1, rows, limit, found);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripRecord {
    pub graph6: String,
    pub set: Vec<usize>,
    pub rank: usize,
    pub outcome: String,
    pub ok: bool,
    /// Whether the two graphs of a pair are isomorphic.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair_isomorphic: Option<bool>,
    /// Other classes in the sweep with the same lex form of `W^V`.
    pub walk_equivalent_classes: usize,
}

/// Reconstructs `(g, s)` from its walk matrix and checks the outcome:
/// `Unique(g)` at rank `n-1` or more, `g` among the candidates at rank `n-2`,
/// `RankTooLow` below. The edge count is supplied when `s` is not `V`.
pub fn roundtrip_one(g: &Graph, s: &VertexSet) -> RoundtripRecord {
    let n = g.order();
    let w = walk::walk_matrix(g, s).expect("non-empty set");
    let rank = linalg::rank(w.matrix());
    let hint = (!s.is_all()).then(|| g.edge_count());
    let result = reconstruct::reconstruct(&ReconstructionInput { w, edge_count_hint: hint });
    let ok = if rank + 1 >= n {
        result == ReconstructionResult::Unique(g.clone())
    } else if rank + 2 == n {
        result.graphs().contains(&g)
    } else {
        result == ReconstructionResult::Undetermined(UndeterminedReason::RankTooLow)
    };
    let pair_isomorphic = match &result {
        ReconstructionResult::Pair(a, b) if n <= BRUTE_FORCE_MAX => {
            brute_force_isomorphic(a, b).ok().map(|p| p.is_some())
        }
        _ => None,
    };
    RoundtripRecord {
        graph6: g.to_graph6(),
        set: s.one_based(),
        rank,
        outcome: result.to_json().status,
        ok,
        pair_isomorphic,
        walk_equivalent_classes: 0,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankClassSummary {
    pub classes: usize,
    pub ok: usize,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub n: usize,
    pub classes: usize,
    pub by_rank: BTreeMap<usize, RankClassSummary>,
    pub failures: Vec<String>,
    pub records: Vec<RoundtripRecord>,
}

impl RoundtripReport {
    pub fn json_lines(&self) -> Vec<String> {
        self.records.iter().map(|r| serde_json::to_string(r).expect("serializable")).collect()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "classes": self.classes,
            "by_rank": self.by_rank,
            "failures": self.failures,
        })
    }
}

/// Reconstruction from `W^V` over every isomorphism class on `n` vertices.
pub fn exhaustive_roundtrip(n: usize) -> Result<RoundtripReport, OracleError> {
    let classes = graph_classes(n)?;
    let v = VertexSet::all(n);
    let mut records = par::map(&classes, |g| roundtrip_one(g, &v));
    let lex: Vec<ExactMatrix> = par::map(&classes, |g| {
        canonical::lex_form(&walk::walk_matrix(g, &v).expect("non-empty")).matrix
    });
    let mut groups: HashMap<&ExactMatrix, usize> = HashMap::new();
    for m in &lex {
        *groups.entry(m).or_insert(0) += 1;
    }
    for (rec, m) in records.iter_mut().zip(&lex) {
        rec.walk_equivalent_classes = groups[m] - 1;
    }
    let mut by_rank: BTreeMap<usize, RankClassSummary> = BTreeMap::new();
    for rec in &records {
        let entry = by_rank.entry(rec.rank).or_default();
        entry.classes += 1;
        entry.ok += usize::from(rec.ok);
        entry.pairs += usize::from(rec.outcome == "pair");
    }
    let failures = records.iter().filter(|r| !r.ok).map(|r| r.graph6.clone()).collect();
    Ok(RoundtripReport { n, classes: classes.len(), by_rank, failures, records })
}
