//! Cyclic-order combinatorics of convex point sets: edges, the crossing
//! predicate, non-crossing spanning trees, holes and symmetric differences.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A set of points in convex position, identified with the indices `0..n` in
/// cyclic order. Convex position makes crossing a pure cyclic-order question,
/// so no coordinates are stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConvexInstance {
    n: usize,
}

impl ConvexInstance {
    /// Creates an instance with `n >= 1` points.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "instance needs at least one point");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The cyclic successor of a point.
    pub fn next(&self, v: usize) -> usize {
        debug_assert!(v < self.n);
        if v + 1 == self.n {
            0
        } else {
            v + 1
        }
    }

    /// True if the pair joins cyclically consecutive points.
    pub fn is_border(&self, e: Edge) -> bool {
        e.b - e.a == 1 || (e.a == 0 && e.b + 1 == self.n)
    }

    /// All pairs of consecutive points, in increasing order of the lower
    /// index (the wrap pair `{n-1, 0}` comes last).
    pub fn hull_pairs(&self) -> Vec<Edge> {
        match self.n {
            0 | 1 => Vec::new(),
            2 => vec![Edge::new(0, 1)],
            n => (0..n).map(|i| Edge::new(i, (i + 1) % n)).collect(),
        }
    }

    pub fn check_edge(&self, e: Edge) -> Result<(), TreeError> {
        if e.b >= self.n {
            Err(TreeError::IndexOutOfRange { index: e.b, n: self.n })
        } else {
            Ok(())
        }
    }

    /// The crossing predicate for two edges of this instance.
    pub fn crossing(&self, e1: Edge, e2: Edge) -> bool {
        debug_assert!(e1.b < self.n && e2.b < self.n);
        crossing(e1, e2)
    }
}

/// An unordered pair of point indices, stored canonically with `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Edge {
    a: usize,
    b: usize,
}

impl Edge {
    pub fn new(x: usize, y: usize) -> Self {
        assert_ne!(x, y, "edge endpoints must differ");
        if x < y {
            Self { a: x, b: y }
        } else {
            Self { a: y, b: x }
        }
    }

    pub fn try_new(x: usize, y: usize) -> Result<Self, TreeError> {
        if x == y {
            Err(TreeError::DegenerateEdge(x))
        } else {
            Ok(Self::new(x, y))
        }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn endpoints(&self) -> [usize; 2] {
        [self.a, self.b]
    }

    pub fn has_endpoint(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint other than `v`.
    pub fn other(&self, v: usize) -> usize {
        debug_assert!(self.has_endpoint(v));
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn shares_endpoint(&self, other: Edge) -> bool {
        self.has_endpoint(other.a) || self.has_endpoint(other.b)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl From<Edge> for (usize, usize) {
    fn from(e: Edge) -> Self {
        (e.a, e.b)
    }
}

impl TryFrom<(usize, usize)> for Edge {
    type Error = TreeError;

    fn try_from((x, y): (usize, usize)) -> Result<Self, Self::Error> {
        Edge::try_new(x, y)
    }
}

/// Two straight edges of a convex point set cross exactly when their four
/// endpoints are distinct and interleave in the cyclic order, i.e. exactly
/// one endpoint of the second edge lies strictly between the endpoints of
/// the first. With canonical `a < b` this needs no knowledge of `n`.
pub fn crossing(e1: Edge, e2: Edge) -> bool {
    if e1.shares_endpoint(e2) {
        return false;
    }
    let inside = |x: usize| e1.a < x && x < e1.b;
    inside(e2.a) != inside(e2.b)
}

/// A pair of consecutive points `(low, low+1 mod n)` that is not an edge of
/// the tree it was computed for.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hole {
    low: usize,
}

impl Hole {
    pub fn new(low: usize) -> Self {
        Self { low }
    }

    pub fn low(&self) -> usize {
        self.low
    }

    pub fn high(&self, instance: ConvexInstance) -> usize {
        instance.next(self.low)
    }

    /// The border edge that would fill this hole.
    pub fn edge(&self, instance: ConvexInstance) -> Edge {
        Edge::new(self.low, self.high(instance))
    }
}

impl fmt::Debug for Hole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hole@{}", self.low)
    }
}

/// Diagnostics for edge sets that fail to be non-crossing spanning trees.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("point index {index} out of range for an instance of {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("trees live on instances of different sizes ({0} vs {1})")]
    InstanceMismatch(usize, usize),
    #[error("edge endpoints must differ (both are {0})")]
    DegenerateEdge(usize),
    #[error("a spanning tree on this instance has {expected} edges, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edges {0} and {1} cross")]
    HasCrossing(Edge, Edge),
    #[error("edge set contains a cycle through points {0:?}")]
    HasCycle(Vec<usize>),
    #[error("edge set does not span all points; one component is {0:?}")]
    NotSpanning(Vec<usize>),
}

/// A non-crossing spanning tree: `n - 1` pairwise non-crossing edges forming
/// a spanning tree of the instance. Trees are immutable values; flips produce
/// new trees.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    n: usize,
    edges: Vec<Edge>,
}

impl Tree {
    /// Validates an edge set and returns a tree, or the first violated
    /// property with a witness.
    pub fn new(instance: ConvexInstance, mut edges: Vec<Edge>) -> Result<Self, TreeError> {
        let n = instance.n();
        for &e in &edges {
            instance.check_edge(e)?;
        }
        if edges.len() + 1 != n {
            return Err(TreeError::WrongEdgeCount { expected: n - 1, found: edges.len() });
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(TreeError::DuplicateEdge(w[0]));
            }
        }
        for (i, &e1) in edges.iter().enumerate() {
            for &e2 in &edges[i + 1..] {
                if crossing(e1, e2) {
                    return Err(TreeError::HasCrossing(e1, e2));
                }
            }
        }
        // Union-find; the first edge joining an already-connected pair
        // witnesses a cycle.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for (i, &e) in edges.iter().enumerate() {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra == rb {
                let partial = Tree { n, edges: edges[..i].to_vec() };
                let mut cycle = partial.path_between(e.a, e.b);
                cycle.push(e.a);
                return Err(TreeError::HasCycle(cycle));
            }
            parent[ra] = rb;
        }
        let root0 = find(&mut parent, 0);
        let component: Vec<usize> = (0..n).filter(|&v| find(&mut parent, v) == root0).collect();
        if component.len() != n {
            return Err(TreeError::NotSpanning(component));
        }
        Ok(Self { n, edges })
    }

    /// The path along the hull: edges `(i, i+1)` for `i < n - 1`.
    pub fn hull_path(instance: ConvexInstance) -> Self {
        let n = instance.n();
        let edges = (0..n.saturating_sub(1)).map(|i| Edge::new(i, i + 1)).collect();
        Self { n, edges }
    }

    pub fn instance(&self) -> ConvexInstance {
        ConvexInstance::new(self.n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_border(&self, e: Edge) -> bool {
        self.instance().is_border(e)
    }

    pub fn chords(&self) -> impl Iterator<Item = Edge> + '_ {
        let instance = self.instance();
        self.edges.iter().copied().filter(move |&e| !instance.is_border(e))
    }

    pub fn border_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let instance = self.instance();
        self.edges.iter().copied().filter(move |&e| instance.is_border(e))
    }

    pub fn chord_count(&self) -> usize {
        self.chords().count()
    }

    /// True if the tree consists of border edges only.
    pub fn is_hull_path(&self) -> bool {
        self.chords().next().is_none()
    }

    /// Consecutive pairs that are not edges, sorted by lower index.
    pub fn holes(&self) -> Vec<Hole> {
        let instance = self.instance();
        instance
            .hull_pairs()
            .into_iter()
            .filter(|&p| !self.contains(p))
            .map(|p| {
                // The wrap pair (0, n-1) is the hole at n-1.
                if p.a == 0 && p.b + 1 == self.n && self.n > 2 {
                    Hole::new(p.b)
                } else {
                    Hole::new(p.a)
                }
            })
            .collect()
    }

    pub fn is_hole(&self, h: Hole) -> bool {
        h.low < self.n && self.n >= 2 && !self.contains(h.edge(self.instance()))
    }

    /// The tree with `remove` swapped for `add`. No validation; callers go
    /// through `flip::apply_step` unless validity is already established.
    pub(crate) fn with_step(&self, remove: Edge, add: Edge) -> Self {
        let mut edges: Vec<Edge> = self.edges.iter().copied().filter(|&e| e != remove).collect();
        let pos = edges.binary_search(&add).unwrap_err();
        edges.insert(pos, add);
        Self { n: self.n, edges }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }

    /// The unique path between two points, as a vertex list from `u` to `v`.
    pub fn path_between(&self, u: usize, v: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        prev[u] = u;
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Edges on the unique cycle of `self + extra`, excluding `extra` itself.
    pub fn cycle_with(&self, extra: Edge) -> Vec<Edge> {
        let path = self.path_between(extra.a, extra.b);
        path.windows(2).map(|w| Edge::new(w[0], w[1])).collect()
    }

    /// Restriction to a contiguous cyclic arc, remapped to a fresh instance
    /// `0..arc.len()` preserving order. Only meaningful when the restriction
    /// is spanning on the arc (e.g. the side of a chord of the tree).
    pub fn restrict_to_arc(&self, arc: &[usize]) -> Result<Tree, TreeError> {
        let mut index = vec![usize::MAX; self.n];
        for (local, &global) in arc.iter().enumerate() {
            index[global] = local;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.a] != usize::MAX && index[e.b] != usize::MAX)
            .map(|e| Edge::new(index[e.a], index[e.b]))
            .collect();
        Tree::new(ConvexInstance::new(arc.len()), edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree(n={}, {:?})", self.n, self.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeRepr { n: self.n, edges: self.edges.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = TreeRepr::deserialize(d)?;
        if repr.n == 0 {
            return Err(serde::de::Error::custom("instance needs at least one point"));
        }
        Tree::new(ConvexInstance::new(repr.n), repr.edges).map_err(serde::de::Error::custom)
    }
}

/// The edges each tree has and the other lacks. Both lists have the same
/// length `delta`, the standard lower bound on any flip sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricDifference {
    pub only_in_first: Vec<Edge>,
    pub only_in_second: Vec<Edge>,
}

impl SymmetricDifference {
    pub fn delta(&self) -> usize {
        debug_assert_eq!(self.only_in_first.len(), self.only_in_second.len());
        self.only_in_first.len()
    }
}

/// Splits the edge sets of two trees on the same instance.
pub fn symmetric_difference(t1: &Tree, t2: &Tree) -> Result<SymmetricDifference, TreeError> {
    if t1.n() != t2.n() {
        return Err(TreeError::InstanceMismatch(t1.n(), t2.n()));
    }
    let only_in_first = t1.edges().iter().copied().filter(|&e| !t2.contains(e)).collect();
    let only_in_second = t2.edges().iter().copied().filter(|&e| !t1.contains(e)).collect();
    Ok(SymmetricDifference { only_in_first, only_in_second })
}

/// Chords present in both trees, in lexicographic order.
pub fn common_chords(t1: &Tree, t2: &Tree) -> Vec<Edge> {
    t1.chords().filter(|&e| t2.contains(e)).collect()
}

/// A nice pair has identical border edges and no common chord. Every pair of
/// consecutive points is then either a common border edge or a common hole.
pub fn is_nice_pair(t1: &Tree, t2: &Tree) -> bool {
    t1.n() == t2.n()
        && common_chords(t1, t2).is_empty()
        && t1.border_edges().eq(t2.border_edges())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(n: usize, edges: &[(usize, usize)]) -> Tree {
        Tree::new(
            ConvexInstance::new(n),
            edges.iter().map(|&(a, b)| Edge::new(a, b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn crossing_quadrilateral_diagonals() {
        let inst = ConvexInstance::new(4);
        assert!(inst.crossing(Edge::new(0, 2), Edge::new(1, 3)));
        assert!(!inst.crossing(Edge::new(0, 2), Edge::new(0, 1)));
        // Symmetry.
        assert!(inst.crossing(Edge::new(1, 3), Edge::new(0, 2)));
    }

    #[test]
    fn crossing_nc_gadget_pair() {
        // Four-point gadget: the single differing pair of edges crosses.
        let inst = ConvexInstance::new(4);
        assert!(inst.crossing(Edge::new(0, 2), Edge::new(1, 3)));
    }

    #[test]
    fn validate_nc_gadget_t1() {
        assert!(Tree::new(
            ConvexInstance::new(4),
            vec![Edge::new(0, 3), Edge::new(1, 2), Edge::new(0, 2)],
        )
        .is_ok());
    }

    #[test]
    fn validate_crossing_pair_rejected() {
        let err = Tree::new(
            ConvexInstance::new(4),
            vec![Edge::new(0, 2), Edge::new(1, 3), Edge::new(0, 1)],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::HasCrossing(Edge::new(0, 2), Edge::new(1, 3)));
    }

    #[test]
    fn validate_triangle_path() {
        assert!(Tree::new(ConvexInstance::new(3), vec![Edge::new(0, 1), Edge::new(1, 2)]).is_ok());
    }

    #[test]
    fn validate_cycle_and_disconnected() {
        let err = Tree::new(
            ConvexInstance::new(4),
            vec![Edge::new(0, 1), Edge::new(1, 2), Edge::new(0, 2)],
        )
        .unwrap_err();
        assert!(matches!(err, TreeError::HasCycle(_)));
    }

    #[test]
    fn holes_of_figure_tree() {
        // Six points, edges v3v4, v1v2, v5v6 (borders) and v1v4, v1v5 (chords)
        // with v1..v6 = 0..5: three holes.
        let t = tree(6, &[(2, 3), (0, 1), (4, 5), (0, 3), (0, 4)]);
        let holes = t.holes();
        assert_eq!(holes, vec![Hole::new(1), Hole::new(3), Hole::new(5)]);
        assert_eq!(holes.len(), t.chord_count() + 1);
    }

    #[test]
    fn holes_of_hull_path() {
        let t = Tree::hull_path(ConvexInstance::new(7));
        assert_eq!(t.holes(), vec![Hole::new(6)]);
    }

    #[test]
    fn holes_of_nc_gadget() {
        let t = tree(4, &[(0, 3), (1, 2), (0, 2)]);
        assert_eq!(t.holes(), vec![Hole::new(0), Hole::new(2)]);
    }

    #[test]
    fn symmetric_difference_counts() {
        let t1 = tree(4, &[(0, 3), (1, 2), (0, 2)]);
        let t2 = tree(4, &[(0, 3), (1, 2), (1, 3)]);
        let diff = symmetric_difference(&t1, &t2).unwrap();
        assert_eq!(diff.delta(), 1);
        assert_eq!(symmetric_difference(&t1, &t1).unwrap().delta(), 0);
        assert_eq!(
            symmetric_difference(&t2, &t1).unwrap().delta(),
            symmetric_difference(&t1, &t2).unwrap().delta()
        );
    }

    #[test]
    fn json_round_trip_is_sorted() {
        let t = tree(4, &[(1, 2), (0, 3), (0, 2)]);
        let json = t.to_json();
        assert_eq!(json, r#"{"n":4,"edges":[[0,2],[0,3],[1,2]]}"#);
        assert_eq!(Tree::from_json(&json).unwrap(), t);
    }

    #[test]
    fn json_rejects_invalid() {
        assert!(Tree::from_json(r#"{"n":4,"edges":[[0,2],[1,3],[0,1]]}"#).is_err());
        assert!(Tree::from_json(r#"{"n":0,"edges":[]}"#).is_err());
        assert!(Tree::from_json(r#"{"n":4,"edges":[[0,0],[1,2],[2,3]]}"#).is_err());
    }
}
