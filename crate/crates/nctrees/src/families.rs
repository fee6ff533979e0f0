//! Generators for the lower-bound families and the classic ten-point
//! example.
//!
//! Each family glues `k` copies of a small base gadget along shared points:
//! the two designated points of copy `i` become the first and last points of
//! copy `i+1`, whose remaining points are inserted into the hull arc between
//! them. Consecutive copies alternate orientation, so every copy induces the
//! base gadget up to reflection and the shared pairs become the `k - 1`
//! common chords of the glued trees.

use crate::flip::{FlipModel, FlipSequence, FlipStep};
use crate::oracle::{self, OracleError};
use crate::tree::{ConvexInstance, Edge, Tree, TreeError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family parameter k must be at least 1")]
    KTooSmall,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A base gadget: its points in cyclic order (the first and last play the
/// gluing roles for the *next* copy), its two trees as index pairs into that
/// order, and which of its points the next copy attaches to.
#[derive(Clone, Copy, Debug)]
pub struct GadgetSpec {
    pub base_order: &'static [&'static str],
    pub t1_edges: &'static [(usize, usize)],
    pub t1p_edges: &'static [(usize, usize)],
    /// Index of the point that becomes the next copy's first point.
    pub glue_first: usize,
    /// Index of the point that becomes the next copy's last point.
    pub glue_last: usize,
}

/// Four-point gadget for non-crossing flips: one differing, crossing pair of
/// chords.
pub const NC_GADGET: GadgetSpec = GadgetSpec {
    base_order: &["v1", "v3", "v4", "v2"],
    t1_edges: &[(0, 3), (1, 2), (0, 2)],
    t1p_edges: &[(0, 3), (1, 2), (1, 3)],
    glue_first: 1,
    glue_last: 2,
};

/// Eight-point gadget for flips: three chords on each side, pairwise
/// crossing.
pub const FLIP_GADGET: GadgetSpec = GadgetSpec {
    base_order: &["v1", "v3", "v4", "v7", "v8", "v6", "v5", "v2"],
    t1_edges: &[(0, 7), (1, 2), (5, 6), (3, 4), (1, 4), (0, 4), (0, 5)],
    t1p_edges: &[(0, 7), (1, 2), (5, 6), (3, 4), (2, 7), (2, 6), (3, 6)],
    glue_first: 4,
    glue_last: 3,
};

/// The flip gadget with one chord reattached, used for rotations.
pub const ROTATION_GADGET: GadgetSpec = GadgetSpec {
    base_order: &["v1", "v3", "v4", "v7", "v8", "v6", "v5", "v2"],
    t1_edges: &[(0, 7), (1, 2), (5, 6), (3, 4), (1, 4), (1, 5), (0, 5)],
    t1p_edges: &[(0, 7), (1, 2), (5, 6), (3, 4), (2, 7), (2, 6), (3, 6)],
    glue_first: 4,
    glue_last: 3,
};

/// A flip step in gadget-label coordinates: endpoints of the removed edge,
/// endpoints of the added edge.
pub type LabelStep = ((usize, usize), (usize, usize));

/// Per-copy steps of the five-flip route through the flip gadget.
const FLIP_GADGET_UPPER_STEPS: &[LabelStep] = &[
    ((5, 0), (7, 6)),
    ((1, 4), (2, 3)),
    ((0, 4), (2, 6)),
    ((7, 6), (7, 2)),
    ((2, 3), (6, 3)),
];

/// A glued family instance: the two trees plus, for each copy, the global
/// index of every gadget point.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub t1: Tree,
    pub t2: Tree,
    pub copy_maps: Vec<Vec<usize>>,
}

pub fn build_family(gadget: &GadgetSpec, k: usize) -> Result<FamilyInstance, FamilyError> {
    if k < 1 {
        return Err(FamilyError::KTooSmall);
    }
    let m = gadget.base_order.len();
    type Pid = (usize, usize); // (copy, label index)
    let mut order: Vec<Pid> = (0..m).map(|i| (1, i)).collect();
    let mut maps: Vec<Vec<Pid>> = vec![(0..m).map(|i| (1, i)).collect()];
    for copy in 2..=k {
        let prev = maps.last().expect("previous copy exists");
        let first_anchor = prev[gadget.glue_first];
        let last_anchor = prev[gadget.glue_last];
        let pa = order.iter().position(|&p| p == first_anchor).expect("anchor present");
        let pb = order.iter().position(|&p| p == last_anchor).expect("anchor present");
        let interior: Vec<Pid> = (1..m - 1).map(|i| (copy, i)).collect();
        if pa + 1 == pb {
            // First anchor comes first clockwise: interior reads forward.
            for (offset, &pid) in interior.iter().enumerate() {
                order.insert(pa + 1 + offset, pid);
            }
        } else if pb + 1 == pa {
            // Last anchor comes first: the copy sits mirrored.
            for (offset, &pid) in interior.iter().rev().enumerate() {
                order.insert(pb + 1 + offset, pid);
            }
        } else {
            return Err(FamilyError::Internal("gluing anchors are not adjacent".into()));
        }
        let mut map = vec![(0, 0); m];
        map[0] = first_anchor;
        map[m - 1] = last_anchor;
        for (i, &pid) in interior.iter().enumerate() {
            map[i + 1] = pid;
        }
        maps.push(map);
    }
    let index: HashMap<Pid, usize> =
        order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let copy_maps: Vec<Vec<usize>> =
        maps.iter().map(|map| map.iter().map(|p| index[p]).collect()).collect();
    let instance = ConvexInstance::new(order.len());
    let collect = |edges: &[(usize, usize)]| -> Vec<Edge> {
        let mut out: Vec<Edge> = copy_maps
            .iter()
            .flat_map(|map| edges.iter().map(move |&(i, j)| Edge::new(map[i], map[j])))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    let t1 = Tree::new(instance, collect(gadget.t1_edges))?;
    let t2 = Tree::new(instance, collect(gadget.t1p_edges))?;
    Ok(FamilyInstance { t1, t2, copy_maps })
}

/// `k` glued copies of the non-crossing gadget: `2k + 2` points, symmetric
/// difference `k`, minimal non-crossing flip sequences of length `2k`.
pub fn nc_family(k: usize) -> Result<(Tree, Tree), FamilyError> {
    build_family(&NC_GADGET, k).map(|f| (f.t1, f.t2))
}

/// `k` glued copies of the flip gadget: `6k + 2` points, symmetric
/// difference `3k`, minimal flip sequences of length `5k`.
pub fn flip_family(k: usize) -> Result<(Tree, Tree), FamilyError> {
    build_family(&FLIP_GADGET, k).map(|f| (f.t1, f.t2))
}

/// `k` glued copies of the rotation gadget: `6k + 2` points, symmetric
/// difference `3k`, minimal rotation sequences of length `7k`.
pub fn rotation_family(k: usize) -> Result<(Tree, Tree), FamilyError> {
    build_family(&ROTATION_GADGET, k).map(|f| (f.t1, f.t2))
}

/// Replays the five-flip gadget route in every copy of the flip family,
/// giving a `5k`-step sequence from the first tree to the second.
pub fn flip_family_upper_sequence(k: usize) -> Result<FlipSequence, FamilyError> {
    let family = build_family(&FLIP_GADGET, k)?;
    let steps = replay_per_copy(&family.copy_maps, FLIP_GADGET_UPPER_STEPS);
    Ok(FlipSequence::new(FlipModel::Flip, family.t1, steps))
}

/// A shortest rotation route through the rotation gadget, extracted from the
/// configuration-graph oracle by a deterministic greedy descent.
pub fn rotation_gadget_upper_steps() -> Result<Vec<LabelStep>, FamilyError> {
    let (t1, t2) = rotation_family(1)?;
    let steps = shortest_model_route(&t1, &t2, FlipModel::Rotation)?;
    Ok(steps
        .iter()
        .map(|s| ((s.remove.a(), s.remove.b()), (s.add.a(), s.add.b())))
        .collect())
}

/// Replays a shortest rotation route in every copy of the rotation family,
/// giving a `7k`-step rotation sequence.
pub fn rotation_family_upper_sequence(k: usize) -> Result<FlipSequence, FamilyError> {
    let base = rotation_gadget_upper_steps()?;
    let family = build_family(&ROTATION_GADGET, k)?;
    let steps = replay_per_copy(&family.copy_maps, &base);
    Ok(FlipSequence::new(FlipModel::Rotation, family.t1, steps))
}

fn replay_per_copy(
    copy_maps: &[Vec<usize>],
    steps: &[LabelStep],
) -> Vec<FlipStep> {
    copy_maps
        .iter()
        .flat_map(|map| {
            steps.iter().map(move |&((r0, r1), (a0, a1))| {
                FlipStep::new(Edge::new(map[r0], map[r1]), Edge::new(map[a0], map[a1]))
            })
        })
        .collect()
}

/// A shortest route between two trees under a model, chosen deterministically
/// (lexicographically smallest successor key at every step).
fn shortest_model_route(
    t1: &Tree,
    t2: &Tree,
    model: FlipModel,
) -> Result<Vec<FlipStep>, FamilyError> {
    let goal = oracle::tree_key(t2);
    // Distances to the goal; the model relations used here are symmetric.
    let mut dist: HashMap<u64, u32> = HashMap::new();
    dist.insert(goal.0, 0);
    let mut frontier = vec![t2.clone()];
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for t in &frontier {
            for nb in oracle::neighbors(t, model) {
                let key = oracle::tree_key(&nb).0;
                if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(key) {
                    slot.insert(level);
                    next.push(nb);
                }
            }
        }
        frontier = next;
    }
    let mut cur = t1.clone();
    let mut steps = Vec::new();
    let mut remaining = *dist
        .get(&oracle::tree_key(&cur).0)
        .ok_or_else(|| FamilyError::Internal("target unreachable under the model".into()))?;
    while remaining > 0 {
        let next = oracle::neighbors(&cur, model)
            .into_iter()
            .filter(|nb| dist.get(&oracle::tree_key(nb).0) == Some(&(remaining - 1)))
            .min_by_key(|nb| oracle::tree_key(nb).0)
            .ok_or_else(|| FamilyError::Internal("no descent neighbor".into()))?;
        let removed = cur
            .edges()
            .iter()
            .copied()
            .find(|&e| !next.contains(e))
            .ok_or_else(|| FamilyError::Internal("neighbor differs in no edge".into()))?;
        let added = next
            .edges()
            .iter()
            .copied()
            .find(|&e| !cur.contains(e))
            .ok_or_else(|| FamilyError::Internal("neighbor adds no edge".into()))?;
        steps.push(FlipStep::new(removed, added));
        cur = next;
        remaining -= 1;
    }
    Ok(steps)
}

/// The classic ten-point pair of interleaved double stars: symmetric
/// difference 7, minimal flip sequences of length 10.
pub fn hernando_example() -> (Tree, Tree) {
    let instance = ConvexInstance::new(10);
    let t1 = Tree::new(
        instance,
        vec![
            Edge::new(0, 1),
            Edge::new(5, 6),
            Edge::new(0, 2),
            Edge::new(0, 3),
            Edge::new(0, 4),
            Edge::new(0, 5),
            Edge::new(5, 9),
            Edge::new(5, 8),
            Edge::new(5, 7),
        ],
    )
    .expect("black double star is a valid tree");
    let t2 = Tree::new(
        instance,
        vec![
            Edge::new(0, 1),
            Edge::new(5, 6),
            Edge::new(2, 6),
            Edge::new(3, 6),
            Edge::new(4, 6),
            Edge::new(1, 9),
            Edge::new(1, 8),
            Edge::new(1, 7),
            Edge::new(1, 6),
        ],
    )
    .expect("red double star is a valid tree");
    (t1, t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flip::verify_sequence;
    use crate::tree::{common_chords, symmetric_difference};

    #[test]
    fn nc_family_golden_edges() {
        let (t1, t2) = nc_family(1).unwrap();
        assert_eq!(t1.edges(), &[Edge::new(0, 2), Edge::new(0, 3), Edge::new(1, 2)]);
        assert_eq!(t2.edges(), &[Edge::new(0, 3), Edge::new(1, 2), Edge::new(1, 3)]);
        let (t1, t2) = nc_family(2).unwrap();
        assert_eq!(
            t1.edges(),
            &[
                Edge::new(0, 4),
                Edge::new(0, 5),
                Edge::new(1, 3),
                Edge::new(1, 4),
                Edge::new(2, 3),
            ]
        );
        assert_eq!(
            t2.edges(),
            &[
                Edge::new(0, 5),
                Edge::new(1, 4),
                Edge::new(1, 5),
                Edge::new(2, 3),
                Edge::new(2, 4),
            ]
        );
    }

    #[test]
    fn flip_family_golden_edges() {
        let (t1, t2) = flip_family(1).unwrap();
        assert_eq!(
            t1.edges(),
            &[
                Edge::new(0, 4),
                Edge::new(0, 5),
                Edge::new(0, 7),
                Edge::new(1, 2),
                Edge::new(1, 4),
                Edge::new(3, 4),
                Edge::new(5, 6),
            ]
        );
        assert_eq!(
            t2.edges(),
            &[
                Edge::new(0, 7),
                Edge::new(1, 2),
                Edge::new(2, 6),
                Edge::new(2, 7),
                Edge::new(3, 4),
                Edge::new(3, 6),
                Edge::new(5, 6),
            ]
        );
        // k = 2: fourteen points, the shared pair of copy one is the chord
        // (3, 10), and copy two occupies the mirrored pocket between them.
        let (t1, t2) = flip_family(2).unwrap();
        assert_eq!(t1.n(), 14);
        assert_eq!(
            t1.edges(),
            &[
                Edge::new(0, 10),
                Edge::new(0, 11),
                Edge::new(0, 13),
                Edge::new(1, 2),
                Edge::new(1, 10),
                Edge::new(3, 10),
                Edge::new(4, 5),
                Edge::new(5, 10),
                Edge::new(6, 7),
                Edge::new(6, 9),
                Edge::new(6, 10),
                Edge::new(8, 9),
                Edge::new(11, 12),
            ]
        );
        assert_eq!(
            t2.edges(),
            &[
                Edge::new(0, 13),
                Edge::new(1, 2),
                Edge::new(2, 12),
                Edge::new(2, 13),
                Edge::new(3, 8),
                Edge::new(3, 10),
                Edge::new(3, 12),
                Edge::new(4, 5),
                Edge::new(4, 7),
                Edge::new(4, 8),
                Edge::new(6, 7),
                Edge::new(8, 9),
                Edge::new(11, 12),
            ]
        );
    }

    #[test]
    fn family_invariants_hold() {
        for k in 1..=6 {
            let (t1, t2) = nc_family(k).unwrap();
            assert_eq!(t1.n(), 2 * k + 2);
            assert_eq!(symmetric_difference(&t1, &t2).unwrap().delta(), k);
            assert_eq!(common_chords(&t1, &t2).len(), k - 1);

            let (t1, t2) = flip_family(k).unwrap();
            assert_eq!(t1.n(), 6 * k + 2);
            assert_eq!(symmetric_difference(&t1, &t2).unwrap().delta(), 3 * k);
            assert_eq!(common_chords(&t1, &t2).len(), k - 1);

            let (t1, t2) = rotation_family(k).unwrap();
            assert_eq!(t1.n(), 6 * k + 2);
            assert_eq!(symmetric_difference(&t1, &t2).unwrap().delta(), 3 * k);
            assert_eq!(common_chords(&t1, &t2).len(), k - 1);
        }
        assert!(matches!(nc_family(0), Err(FamilyError::KTooSmall)));
    }

    /// Every copy induces the base gadget up to rotation and reflection of
    /// the cyclic order.
    #[test]
    fn copies_induce_the_base_gadget() {
        for (gadget, k) in [(&NC_GADGET, 4), (&FLIP_GADGET, 3), (&ROTATION_GADGET, 3)] {
            let family = build_family(gadget, k).unwrap();
            let m = gadget.base_order.len();
            for map in &family.copy_maps {
                let mut points = map.clone();
                points.sort_unstable();
                let rank: HashMap<usize, usize> =
                    points.iter().enumerate().map(|(r, &p)| (p, r)).collect();
                let induce = |tree: &Tree| -> Vec<(usize, usize)> {
                    let mut edges: Vec<(usize, usize)> = tree
                        .edges()
                        .iter()
                        .filter(|e| rank.contains_key(&e.a()) && rank.contains_key(&e.b()))
                        .map(|e| {
                            let (x, y) = (rank[&e.a()], rank[&e.b()]);
                            (x.min(y), x.max(y))
                        })
                        .collect();
                    edges.sort_unstable();
                    edges
                };
                let matches_base = |induced: &[(usize, usize)], base: &[(usize, usize)]| {
                    // All rotations and reflections of the base edge list.
                    (0..m).any(|shift| {
                        [false, true].into_iter().any(|reflect| {
                            let map_pt = |p: usize| {
                                let q = if reflect { m - 1 - p } else { p };
                                (q + shift) % m
                            };
                            let mut image: Vec<(usize, usize)> = base
                                .iter()
                                .map(|&(i, j)| {
                                    let (x, y) = (map_pt(i), map_pt(j));
                                    (x.min(y), x.max(y))
                                })
                                .collect();
                            image.sort_unstable();
                            image == induced
                        })
                    })
                };
                assert!(matches_base(&induce(&family.t1), gadget.t1_edges));
                assert!(matches_base(&induce(&family.t2), gadget.t1p_edges));
            }
        }
    }

    #[test]
    fn flip_family_upper_sequence_verifies() {
        for k in 1..=3 {
            let (_, t2) = flip_family(k).unwrap();
            let seq = flip_family_upper_sequence(k).unwrap();
            assert_eq!(seq.len(), 5 * k);
            assert!(verify_sequence(&seq, &t2).is_ok());
        }
    }

    #[test]
    fn rotation_family_upper_sequence_verifies() {
        for k in 1..=2 {
            let (_, t2) = rotation_family(k).unwrap();
            let seq = rotation_family_upper_sequence(k).unwrap();
            assert_eq!(seq.len(), 7 * k);
            assert_eq!(seq.model, FlipModel::Rotation);
            assert!(verify_sequence(&seq, &t2).is_ok());
        }
    }

    /// A seven-step flip route through the rotation gadget that pivots on an
    /// endpoint in all but its fourth step.
    #[test]
    fn rotation_gadget_seven_step_flip_route() {
        let (t1, t2) = rotation_family(1).unwrap();
        let steps = [
            ((0, 5), (0, 6)),
            ((1, 5), (1, 6)),
            ((1, 6), (4, 6)),
            ((1, 4), (2, 6)),
            ((4, 6), (3, 6)),
            ((0, 6), (0, 2)),
            ((0, 2), (2, 7)),
        ]
        .map(|((r0, r1), (a0, a1))| FlipStep::new(Edge::new(r0, r1), Edge::new(a0, a1)));
        let seq = FlipSequence::new(FlipModel::Flip, t1, steps.to_vec());
        assert!(verify_sequence(&seq, &t2).is_ok());
    }

    #[test]
    fn hernando_pair_shape() {
        let (t1, t2) = hernando_example();
        assert_eq!(t1.n(), 10);
        let diff = symmetric_difference(&t1, &t2).unwrap();
        assert_eq!(diff.delta(), 7);
        let shared: Vec<Edge> =
            t1.edges().iter().copied().filter(|&e| t2.contains(e)).collect();
        assert_eq!(shared, vec![Edge::new(0, 1), Edge::new(5, 6)]);
        assert!(shared.iter().all(|&e| t1.is_border(e)));
    }
}
