//! Structural views of trees and tree pairs: sides of chords, faces and the
//! hole/face bijection, border paths, good/very-good side classification and
//! the search for an extremal side of a nice pair.

use crate::exact;
use crate::tree::{is_nice_pair, Edge, Hole, Tree};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("edge {0} is not a chord of the tree")]
    NotAChord(Edge),
    #[error("pair {0:?} is not a hole of the tree")]
    NotAHole(Hole),
    #[error("side of {0} contains no chord of the tree")]
    NoChordInSide(Edge),
    #[error("trees do not form a nice pair (common chord or differing border edges)")]
    NotNicePair,
    #[error("tree has no chord")]
    NoChord,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Which of the two arcs delimited by a chord a side takes: the one starting
/// at the lower endpoint or the one starting at the higher endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideOrientation {
    FromLow,
    FromHigh,
}

/// Which tree of a pair owns a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    First,
    Second,
}

impl Owner {
    pub fn flipped(self) -> Owner {
        match self {
            Owner::First => Owner::Second,
            Owner::Second => Owner::First,
        }
    }
}

/// A side of a chord: the closed cyclic interval of points on one side,
/// including both chord endpoints. Stored as the arc `start, start+1, ...`
/// of `len` points (mod `n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Side {
    chord: Edge,
    start: usize,
    len: usize,
}

impl Side {
    /// The arc running from the lower chord endpoint up to the higher one.
    pub fn low_arc(chord: Edge, n: usize) -> Self {
        debug_assert!(chord.b() < n);
        Self { chord, start: chord.a(), len: chord.b() - chord.a() + 1 }
    }

    /// The complementary arc, from the higher endpoint around to the lower.
    pub fn high_arc(chord: Edge, n: usize) -> Self {
        Self { chord, start: chord.b(), len: n - (chord.b() - chord.a()) + 1 }
    }

    pub fn from_orientation(chord: Edge, n: usize, orientation: SideOrientation) -> Self {
        match orientation {
            SideOrientation::FromLow => Self::low_arc(chord, n),
            SideOrientation::FromHigh => Self::high_arc(chord, n),
        }
    }

    pub fn chord(&self) -> Edge {
        self.chord
    }

    pub fn arc_start(&self) -> usize {
        self.start
    }

    pub fn arc_len(&self) -> usize {
        self.len
    }

    fn offset(&self, v: usize, n: usize) -> usize {
        (v + n - self.start) % n
    }

    /// Both chord endpoints count as part of the side.
    pub fn contains(&self, v: usize, n: usize) -> bool {
        self.offset(v, n) < self.len
    }

    /// Strictly between the chord endpoints along the arc.
    pub fn interior_contains(&self, v: usize, n: usize) -> bool {
        let o = self.offset(v, n);
        0 < o && o + 1 < self.len
    }

    pub fn contains_edge(&self, e: Edge, n: usize) -> bool {
        self.contains(e.a(), n) && self.contains(e.b(), n)
    }

    pub fn contains_hole(&self, h: Hole, n: usize) -> bool {
        self.contains(h.low(), n) && self.contains((h.low() + 1) % n, n)
    }

    pub fn points(&self, n: usize) -> Vec<usize> {
        (0..self.len).map(|i| (self.start + i) % n).collect()
    }

    /// Point at a given arc offset.
    pub fn point_at(&self, offset: usize, n: usize) -> usize {
        debug_assert!(offset < self.len);
        (self.start + offset) % n
    }

    /// True if this side's point set is a strict subset of `other`'s.
    pub fn strictly_inside(&self, other: &Side, n: usize) -> bool {
        self.len < other.len && other.offset(self.start, n) + self.len <= other.len
    }

    /// A point is *inside* this side for the pair `(v, w)` if `v` lies in the
    /// side and either `v` is not a chord endpoint or `w` lies in the side
    /// too. The degree of a side counts such endpoint instances over the
    /// chords of the other tree.
    pub fn point_inside_for(&self, v: usize, w: usize, n: usize) -> bool {
        self.contains(v, n) && (!self.chord.has_endpoint(v) || self.contains(w, n))
    }
}

/// The arc of `chord` contained in `parent`, when both chord endpoints lie in
/// the parent side.
pub fn sub_side_within(n: usize, chord: Edge, parent: &Side) -> Option<Side> {
    if !parent.contains_edge(chord, n) {
        return None;
    }
    let oa = parent.offset(chord.a(), n);
    let ob = parent.offset(chord.b(), n);
    let (lo, hi) = if oa < ob { (oa, ob) } else { (ob, oa) };
    Some(Side { chord, start: parent.point_at(lo, n), len: hi - lo + 1 })
}

/// The requested side of a chord of the tree.
pub fn side_of(tree: &Tree, chord: Edge, orientation: SideOrientation) -> Result<Side, AnalysisError> {
    if !tree.contains(chord) || tree.is_border(chord) {
        return Err(AnalysisError::NotAChord(chord));
    }
    Ok(Side::from_orientation(chord, tree.n(), orientation))
}

/// Both sides of a chord of the tree, low arc first.
pub fn sides_of(tree: &Tree, chord: Edge) -> Result<(Side, Side), AnalysisError> {
    Ok((
        side_of(tree, chord, SideOrientation::FromLow)?,
        side_of(tree, chord, SideOrientation::FromHigh)?,
    ))
}

/// Holes of the tree lying in the side (both endpoints in the arc), sorted.
pub fn holes_in_side(tree: &Tree, side: &Side) -> Vec<Hole> {
    let n = tree.n();
    tree.holes().into_iter().filter(|&h| side.contains_hole(h, n)).collect()
}

/// Chords of the tree with both endpoints in the side, including the defining
/// chord when present.
pub fn chords_in_side(tree: &Tree, side: &Side) -> Vec<Edge> {
    let n = tree.n();
    tree.chords().filter(|&c| side.contains_edge(c, n)).collect()
}

/// The degree of a side in another tree: endpoint instances of the other
/// tree's chords that are inside the side, counted with multiplicity.
pub fn degree_of_side(side: &Side, other: &Tree) -> usize {
    let n = other.n();
    let mut degree = 0;
    for c in other.chords() {
        if side.point_inside_for(c.a(), c.b(), n) {
            degree += 1;
        }
        if side.point_inside_for(c.b(), c.a(), n) {
            degree += 1;
        }
    }
    degree
}

/// A bounded face of the plane graph obtained from the tree by filling every
/// hole. Each face carries exactly one hole on its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub hole: Hole,
    pub boundary_chords: Vec<Edge>,
    pub boundary_border_edges: Vec<Edge>,
}

/// The face containing a hole, computed by planar face traversal of the tree
/// plus all hole edges, with the rotation system given by the cyclic order.
pub fn face_of_hole(tree: &Tree, hole: Hole) -> Result<Face, AnalysisError> {
    if !tree.is_hole(hole) {
        return Err(AnalysisError::NotAHole(hole));
    }
    let n = tree.n();
    let instance = tree.instance();
    // Tree edges plus all holes filled: the hull cycle plus the chords.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in instance.hull_pairs() {
        adj[p.a()].push(p.b());
        adj[p.b()].push(p.a());
    }
    for c in tree.chords() {
        adj[c.a()].push(c.b());
        adj[c.b()].push(c.a());
    }
    for (v, nbrs) in adj.iter_mut().enumerate() {
        nbrs.sort_unstable_by_key(|&w| (w + n - v) % n);
        nbrs.dedup();
    }
    // Walk the bounded face incident to the hole edge: from (u -> v), continue
    // with the neighbor of v cyclically before u in the rotation at v.
    let start = (hole.low(), hole.high(instance));
    let mut boundary = Vec::new();
    let (mut u, mut v) = start;
    loop {
        boundary.push(Edge::new(u, v));
        let nbrs = &adj[v];
        let i = nbrs.iter().position(|&w| w == u).expect("half-edge endpoint is a neighbor");
        let w = nbrs[(i + nbrs.len() - 1) % nbrs.len()];
        u = v;
        v = w;
        if (u, v) == start {
            break;
        }
        if boundary.len() > 2 * n + 2 {
            return Err(AnalysisError::Invariant("face traversal did not close".into()));
        }
    }
    let hole_edge = hole.edge(instance);
    let mut boundary_chords: Vec<Edge> = boundary
        .iter()
        .copied()
        .filter(|&e| !instance.is_border(e) && tree.contains(e))
        .collect();
    let mut boundary_border_edges: Vec<Edge> = boundary
        .iter()
        .copied()
        .filter(|&e| e != hole_edge && instance.is_border(e) && tree.contains(e))
        .collect();
    boundary_chords.sort_unstable();
    boundary_chords.dedup();
    boundary_border_edges.sort_unstable();
    boundary_border_edges.dedup();
    Ok(Face { hole, boundary_chords, boundary_border_edges })
}

/// A maximal run of consecutive border edges, possibly a single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BorderPath {
    start: usize,
    len: usize,
}

impl BorderPath {
    pub fn start(&self) -> usize {
        self.start
    }

    /// Number of points on the path (a single point has length 1).
    pub fn point_count(&self) -> usize {
        self.len
    }

    pub fn points(&self, n: usize) -> Vec<usize> {
        (0..self.len).map(|i| (self.start + i) % n).collect()
    }

    pub fn contains_point(&self, v: usize, n: usize) -> bool {
        (v + n - self.start) % n < self.len
    }

    pub fn end(&self, n: usize) -> usize {
        (self.start + self.len - 1) % n
    }

    /// The two holes this path is incident to (shares a point with), assuming
    /// the tree is not a single border path.
    pub fn incident_holes(&self, n: usize) -> [Hole; 2] {
        [Hole::new((self.start + n - 1) % n), Hole::new(self.end(n))]
    }

    /// All points in the side and no endpoint of the side's chord on the path.
    pub fn internal_to(&self, side: &Side, n: usize) -> bool {
        self.points(n).iter().all(|&p| side.contains(p, n))
            && !self.contains_point(side.chord().a(), n)
            && !self.contains_point(side.chord().b(), n)
    }
}

/// The border paths of a tree, sorted by start point. Every point lies on
/// exactly one path; a tree that is a single border path yields one path
/// covering all points.
pub fn border_paths(tree: &Tree) -> Vec<BorderPath> {
    let n = tree.n();
    let has_border = |i: usize| tree.contains(Edge::new(i, (i + 1) % n));
    if n < 3 || (0..n).all(has_border) {
        return vec![BorderPath { start: 0, len: n }];
    }
    let mut paths = Vec::new();
    for s in 0..n {
        // A path starts where the incoming pair is missing.
        if has_border((s + n - 1) % n) {
            continue;
        }
        let mut len = 1;
        while has_border((s + len - 1) % n) {
            len += 1;
        }
        paths.push(BorderPath { start: s, len });
    }
    paths.sort_unstable_by_key(|p| p.start);
    paths
}

/// Endpoint instances of the other tree's chords lying on the path.
pub fn incident_chord_endpoints(path: &BorderPath, other: &Tree) -> usize {
    let n = other.n();
    other
        .chords()
        .map(|c| {
            usize::from(path.contains_point(c.a(), n)) + usize::from(path.contains_point(c.b(), n))
        })
        .sum()
}

/// A hole of the side that also lies in a side of the other tree strictly
/// contained in this one.
pub fn is_bad_hole(side: &Side, hole: Hole, other: &Tree) -> bool {
    let n = other.n();
    if !side.contains_hole(hole, n) {
        return false;
    }
    other.chords().any(|c| {
        sub_side_within(n, c, side)
            .filter(|sub| sub.len < side.len)
            .is_some_and(|sub| sub.contains_hole(hole, n))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideClass {
    Plain,
    Good,
    VeryGood,
}

/// Classification of one side against the other tree: `k` is the number of
/// holes in the side, `degree` its degree in the other tree, and the side is
/// good exactly when it has no bad holes, very good when additionally the
/// degree is at most `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideReport {
    pub k: usize,
    pub degree: usize,
    pub bad_holes: Vec<Hole>,
    pub classification: SideClass,
}

pub fn classify_side(tree: &Tree, side: &Side, other: &Tree) -> SideReport {
    let holes = holes_in_side(tree, side);
    let k = holes.len();
    let degree = degree_of_side(side, other);
    let bad_holes: Vec<Hole> =
        holes.into_iter().filter(|&h| is_bad_hole(side, h, other)).collect();
    let classification = if !bad_holes.is_empty() {
        SideClass::Plain
    } else if degree <= k {
        SideClass::VeryGood
    } else {
        SideClass::Good
    };
    SideReport { k, degree, bad_holes, classification }
}

/// Chords of a non-crossing tree restricted to a side form a laminar family
/// of cyclic intervals; an inclusion-minimal chord is one whose sub-side
/// contains no other chord's sub-side. Its sub-side contains exactly one
/// hole. Ties resolve to the lexicographically smallest chord.
pub fn inclusion_minimal_chord(tree: &Tree, side: &Side) -> Result<Edge, AnalysisError> {
    let n = tree.n();
    let chords = chords_in_side(tree, side);
    if chords.is_empty() {
        return Err(AnalysisError::NoChordInSide(side.chord()));
    }
    let subs: Vec<Side> = chords
        .iter()
        .map(|&c| sub_side_within(n, c, side).expect("chord lies in the side"))
        .collect();
    if cfg!(debug_assertions) {
        for (i, a) in subs.iter().enumerate() {
            for b in subs.iter().skip(i + 1) {
                let nested = a.strictly_inside(b, n)
                    || b.strictly_inside(a, n)
                    || a.chord() == b.chord();
                let disjoint = !a.points(n).iter().any(|&p| {
                    b.interior_contains(p, n)
                        || (b.contains(p, n) && a.interior_contains(p, n))
                });
                debug_assert!(nested || disjoint, "chord sides must be laminar");
            }
        }
    }
    let minimal = subs
        .iter()
        .enumerate()
        .filter(|(i, a)| {
            !subs
                .iter()
                .enumerate()
                .any(|(j, b)| j != *i && b.strictly_inside(a, n))
        })
        .map(|(i, _)| chords[i])
        .min()
        .expect("nonempty chord list has a minimal element");
    Ok(minimal)
}

/// Searches a nice pair for an extremal side: one whose degree in the other
/// tree fits the `2 + √2` budget while every side of the other tree strictly
/// inside it exceeds the budget. The descent starts from the first tree's
/// lexicographically smallest chord and, among qualifying sub-sides, takes
/// the one with the smallest arc start.
pub fn find_extremal_side(t1: &Tree, t2: &Tree) -> Result<(Owner, Side), AnalysisError> {
    if !is_nice_pair(t1, t2) {
        return Err(AnalysisError::NotNicePair);
    }
    if t1.is_hull_path() || t2.is_hull_path() {
        return Err(AnalysisError::NoChord);
    }
    let n = t1.n();
    let by_owner = |o: Owner| match o {
        Owner::First => (t1, t2),
        Owner::Second => (t2, t1),
    };
    let fits = |side: &Side, own: &Tree, other: &Tree| {
        exact::fits_degree_budget(degree_of_side(side, other), holes_in_side(own, side).len())
    };

    let first_chord = t1.chords().min().expect("tree has a chord");
    let mut owner = Owner::First;
    let mut side = {
        let (own, other) = by_owner(owner);
        let (low, high) = (Side::low_arc(first_chord, n), Side::high_arc(first_chord, n));
        if fits(&low, own, other) {
            low
        } else if fits(&high, own, other) {
            high
        } else {
            return Err(AnalysisError::Invariant(
                "no side of the starting chord fits the degree budget".into(),
            ));
        }
    };

    loop {
        let (own, other) = by_owner(owner);
        let next = other
            .chords()
            .filter_map(|c| sub_side_within(n, c, &side))
            .filter(|sub| sub.arc_len() < side.arc_len())
            .filter(|sub| fits(sub, other, own))
            .min_by_key(|sub| sub.arc_start());
        match next {
            Some(sub) => {
                side = sub;
                owner = owner.flipped();
            }
            None => break,
        }
    }

    // Re-check extremality by definition before returning.
    let (own, other) = by_owner(owner);
    if !fits(&side, own, other) {
        return Err(AnalysisError::Invariant("extremal side exceeds its degree budget".into()));
    }
    let violating = other
        .chords()
        .filter_map(|c| sub_side_within(n, c, &side))
        .filter(|sub| sub.arc_len() < side.arc_len())
        .any(|sub| fits(&sub, other, own));
    if violating {
        return Err(AnalysisError::Invariant(
            "a strictly smaller opposing side still fits the degree budget".into(),
        ));
    }
    Ok((owner, side))
}
