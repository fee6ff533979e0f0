//! Exhaustive configuration-graph oracle: enumeration of all non-crossing
//! spanning trees of an instance and exact BFS distances under each flip
//! model.
//!
//! Trees are packed into bitset keys over the canonical edge list, so the
//! default cap of `n = 10` (246675 trees) stays comfortably in memory. BFS
//! frontiers may expand in parallel; all published results are independent
//! of the thread count.

use crate::exec;
use crate::flip::FlipModel;
use crate::tree::{ConvexInstance, Edge, Tree};
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

/// Keys are bitsets over the `n(n-1)/2` canonical edges; a `u64` covers every
/// instance up to the hard limit below.
pub const HARD_CAP: usize = 11;

/// Default size cap for enumeration and distances.
pub const DEFAULT_CAP: usize = 10;

/// Default size cap for full diameter computations.
pub const DEFAULT_DIAMETER_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance size {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("instance size must be at least 3, got {0}")]
    TooSmall(usize),
    #[error("trees live on different instances")]
    InstanceMismatch,
}

/// A tree packed as a bitset over the canonical edges of its instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeKey(pub u64);

/// Canonical index of an edge: pairs sorted lexicographically.
fn edge_index(n: usize, e: Edge) -> usize {
    let a = e.a();
    a * n - a * (a + 1) / 2 + (e.b() - a - 1)
}

fn edge_list(n: usize) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            edges.push(Edge::new(a, b));
        }
    }
    edges
}

pub fn tree_key(tree: &Tree) -> TreeKey {
    let n = tree.n();
    let mut bits = 0u64;
    for &e in tree.edges() {
        bits |= 1 << edge_index(n, e);
    }
    TreeKey(bits)
}

pub fn tree_from_key(instance: ConvexInstance, key: TreeKey) -> Tree {
    let n = instance.n();
    let edges = edge_list(n)
        .into_iter()
        .filter(|&e| key.0 >> edge_index(n, e) & 1 == 1)
        .collect();
    Tree::new(instance, edges).expect("key encodes a valid tree")
}

/// Per-instance tables: the canonical edge list and, for every edge, the
/// bitmask of edges crossing it.
struct EdgeTables {
    n: usize,
    edges: Vec<Edge>,
    cross_mask: Vec<u64>,
}

impl EdgeTables {
    fn new(n: usize) -> Self {
        let edges = edge_list(n);
        let m = edges.len();
        let mut cross_mask = vec![0u64; m];
        for i in 0..m {
            for j in 0..m {
                if crate::tree::crossing(edges[i], edges[j]) {
                    cross_mask[i] |= 1 << j;
                }
            }
        }
        Self { n, edges, cross_mask }
    }

    /// Keys one flip away under the model, deduplicated and sorted.
    fn neighbor_keys(&self, key: u64, model: FlipModel) -> Vec<u64> {
        debug_assert!(self.n <= HARD_CAP);
        let mut out = Vec::new();
        let present: Vec<usize> =
            (0..self.edges.len()).filter(|&i| key >> i & 1 == 1).collect();
        for &r in &present {
            let remove = self.edges[r];
            let rest = key & !(1 << r);
            // Two-color the cut left by the removal.
            let mut mark = [false; 16];
            let mut stack = vec![remove.a()];
            mark[remove.a()] = true;
            while let Some(v) = stack.pop() {
                for &i in &present {
                    if i == r {
                        continue;
                    }
                    let e = self.edges[i];
                    if e.has_endpoint(v) {
                        let w = e.other(v);
                        if !mark[w] {
                            mark[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            for (a, &add) in self.edges.iter().enumerate() {
                if key >> a & 1 == 1 || mark[add.a()] == mark[add.b()] {
                    continue;
                }
                if self.cross_mask[a] & rest != 0 {
                    continue;
                }
                match model {
                    FlipModel::Flip => {}
                    FlipModel::NonCrossingFlip => {
                        if self.cross_mask[a] >> r & 1 == 1 {
                            continue;
                        }
                    }
                    FlipModel::Rotation => {
                        if !remove.shares_endpoint(add) {
                            continue;
                        }
                    }
                }
                out.push(rest | 1 << a);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn check_size(n: usize, cap: usize) -> Result<(), OracleError> {
    if n < 3 {
        return Err(OracleError::TooSmall(n));
    }
    if n > cap.min(HARD_CAP) {
        return Err(OracleError::CapExceeded { n, cap: cap.min(HARD_CAP) });
    }
    Ok(())
}

/// All non-crossing spanning trees of an `n`-point instance, reached by flip
/// BFS from the hull path, in increasing key order.
pub fn enumerate_keys(n: usize, cap: usize) -> Result<Vec<u64>, OracleError> {
    check_size(n, cap)?;
    let tables = EdgeTables::new(n);
    let start = tree_key(&Tree::hull_path(ConvexInstance::new(n))).0;
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(start);
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let batches = exec::map_batch(&frontier, |&k| tables.neighbor_keys(k, FlipModel::Flip));
        let mut next = Vec::new();
        for batch in batches {
            for k in batch {
                if seen.insert(k) {
                    next.push(k);
                }
            }
        }
        frontier = next;
    }
    let mut keys: Vec<u64> = seen.into_iter().collect();
    keys.sort_unstable();
    Ok(keys)
}

/// Enumerates every tree exactly once, in deterministic (sorted key) order.
pub fn enumerate_trees(n: usize, cap: usize) -> Result<Vec<Tree>, OracleError> {
    let instance = ConvexInstance::new(n);
    Ok(enumerate_keys(n, cap)?
        .into_iter()
        .map(|k| tree_from_key(instance, TreeKey(k)))
        .collect())
}

/// The closed-form count `C(3n-3, n-1) / (2n-1)` of non-crossing spanning
/// trees on `n` points in convex position.
pub fn tree_count_closed_form(n: usize) -> u128 {
    binomial(3 * n as u128 - 3, n as u128 - 1) / (2 * n as u128 - 1)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The trees one model-step away from `tree`, deduplicated, in key order.
pub fn neighbors(tree: &Tree, model: FlipModel) -> Vec<Tree> {
    let n = tree.n();
    assert!(n <= HARD_CAP, "neighbor generation is capped at {HARD_CAP} points");
    let tables = EdgeTables::new(n);
    let instance = tree.instance();
    tables
        .neighbor_keys(tree_key(tree).0, model)
        .into_iter()
        .map(|k| tree_from_key(instance, TreeKey(k)))
        .collect()
}

/// Exact BFS distance between two trees in the configuration graph of the
/// model. For non-crossing flips the adjacency is directed (the reverse of a
/// non-crossing flip need not be non-crossing), so the BFS follows forward
/// steps from `t1`. `None` means unreachable.
pub fn flip_distance(
    t1: &Tree,
    t2: &Tree,
    model: FlipModel,
    cap: usize,
) -> Result<Option<u32>, OracleError> {
    if t1.n() != t2.n() {
        return Err(OracleError::InstanceMismatch);
    }
    let n = t1.n();
    check_size(n, cap)?;
    let tables = EdgeTables::new(n);
    let (start, goal) = (tree_key(t1).0, tree_key(t2).0);
    if start == goal {
        return Ok(Some(0));
    }
    let mut dist: HashMap<u64, u32> = HashMap::new();
    dist.insert(start, 0);
    let mut frontier = vec![start];
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let batches = exec::map_batch(&frontier, |&k| tables.neighbor_keys(k, model));
        let mut next = Vec::new();
        for batch in batches {
            for k in batch {
                if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(k) {
                    slot.insert(level);
                    if k == goal {
                        return Ok(Some(level));
                    }
                    next.push(k);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// The maximum of `flip_distance` over all ordered pairs of trees. `None`
/// when some pair is unreachable.
pub fn diameter(n: usize, model: FlipModel, cap: usize) -> Result<Option<u32>, OracleError> {
    check_size(n, cap)?;
    let tables = EdgeTables::new(n);
    let keys = enumerate_keys(n, cap)?;
    let index: HashMap<u64, u32> =
        keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
    let adjacency: Vec<Vec<u32>> = exec::map_batch(&keys, |&k| {
        tables.neighbor_keys(k, model).into_iter().map(|m| index[&m]).collect()
    });
    let total = keys.len();
    let eccentricities = exec::map_batch(&keys, |&k| {
        let mut dist = vec![u32::MAX; total];
        let mut frontier = vec![index[&k]];
        dist[frontier[0] as usize] = 0;
        let mut reached = 1usize;
        let mut ecc = 0;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &v in &frontier {
                let d = dist[v as usize] + 1;
                for &w in &adjacency[v as usize] {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = d;
                        ecc = d;
                        reached += 1;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        if reached == total {
            Some(ecc)
        } else {
            None
        }
    });
    let mut best = 0;
    for e in eccentricities {
        match e {
            Some(v) => best = best.max(v),
            None => return Ok(None),
        }
    }
    Ok(Some(best))
}

/// Summary record for a batch of oracle queries on one instance and model.
#[derive(Clone, Debug)]
pub struct ConfigGraphStats {
    pub n: usize,
    pub model: FlipModel,
    pub tree_count: u128,
    pub queried_distances: BTreeMap<(TreeKey, TreeKey), Option<u32>>,
}

impl ConfigGraphStats {
    pub fn new(n: usize, model: FlipModel, cap: usize) -> Result<Self, OracleError> {
        let tree_count = enumerate_keys(n, cap)?.len() as u128;
        debug_assert_eq!(tree_count, tree_count_closed_form(n));
        Ok(Self { n, model, tree_count, queried_distances: BTreeMap::new() })
    }

    pub fn record(&mut self, t1: &Tree, t2: &Tree, distance: Option<u32>) {
        self.queried_distances.insert((tree_key(t1), tree_key(t2)), distance);
    }
}
