//! Constructive transformations between non-crossing spanning trees.
//!
//! [`transform`] produces a flip sequence whose length is certified, in exact
//! integer arithmetic, to stay within the `(22 + √2)/12 ≈ 1.95` multiple of
//! the symmetric difference. The pipeline: align border edges, split at
//! common chords and recurse on both sides, and on the resulting nice pair
//! repeatedly pick an extremal side, fill its bad holes, remove extra
//! crossings until it is very good, and match all of its chords.
//!
//! Two baselines complement it: [`transform_border_projection`] builds a
//! non-crossing flip sequence of length at most `2δ` by projecting chords
//! onto the border, and [`matroid_exchange`] produces the abstract exchange
//! sequence of length exactly `δ` whose intermediate trees are spanning but
//! may cross.

use crate::analysis::{
    border_paths, classify_side, face_of_hole, find_extremal_side, holes_in_side,
    inclusion_minimal_chord, is_bad_hole, sub_side_within, AnalysisError, BorderPath, Owner, Side,
    SideClass,
};
use crate::exact;
use crate::flip::{apply_step, verify_sequence, FlipModel, FlipSequence, FlipStep};
use crate::tree::{
    common_chords, crossing, is_nice_pair, symmetric_difference, Edge, Hole, Tree, TreeError,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("trees live on different instances")]
    InstanceMismatch,
    #[error("trees do not form a nice pair")]
    NotNicePair,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("side is not very good with respect to the other tree")]
    NotVeryGood,
    #[error("length certification failed: {len} flips for symmetric difference {delta}")]
    CertificationFailed { len: usize, delta: usize },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("internal invariant violated in {context}: {detail}")]
    Invariant { context: &'static str, detail: String },
}

fn invariant(context: &'static str, detail: impl Into<String>) -> TransformError {
    TransformError::Invariant { context, detail: detail.into() }
}

/// Flips applied to the source tree and flips applied to the target tree.
/// The stitched sequence runs the forward steps and then the inverted
/// backward steps in reverse order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BilateralLog {
    pub forward_steps: Vec<FlipStep>,
    pub backward_steps: Vec<FlipStep>,
}

impl BilateralLog {
    pub fn stitch(&self, model: FlipModel, start: &Tree) -> FlipSequence {
        let mut steps = self.forward_steps.clone();
        steps.extend(self.backward_steps.iter().rev().map(|s| s.inverted()));
        FlipSequence::new(model, start.clone(), steps)
    }

    pub fn len(&self) -> usize {
        self.forward_steps.len() + self.backward_steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward_steps.is_empty() && self.backward_steps.is_empty()
    }
}

/// A verified flip sequence together with its certification data. Every
/// value returned by [`transform`] has `bound_ok = true`; a bound violation
/// is reported as an error instead.
#[derive(Clone, Debug)]
pub struct CertifiedTransformation {
    pub sequence: FlipSequence,
    pub delta: usize,
    pub bound_ok: bool,
}

/// Produces a verified flip sequence from `t1` to `t2` with certified length
/// at most `(22 + √2)/12` times the symmetric difference.
pub fn transform(t1: &Tree, t2: &Tree) -> Result<CertifiedTransformation, TransformError> {
    if t1.n() != t2.n() {
        return Err(TransformError::InstanceMismatch);
    }
    let delta = symmetric_difference(t1, t2)?.delta();
    let mut engine = Engine::new(t1.clone(), t2.clone());
    engine.run()?;
    let log = BilateralLog { forward_steps: engine.forward, backward_steps: engine.backward };
    let sequence = log.stitch(FlipModel::Flip, t1);
    verify_sequence(&sequence, t2)
        .map_err(|e| invariant("transform", format!("emitted sequence failed verification: {e}")))?;
    if !exact::fits_length_bound(sequence.len(), delta) {
        return Err(TransformError::CertificationFailed { len: sequence.len(), delta });
    }
    Ok(CertifiedTransformation { sequence, delta, bound_ok: true })
}

/// Fills one bad hole of a side of `t1` (with respect to `t2`): the first
/// step removes a face chord of the hole in `t1` different from the side's
/// chord, the second removes a chord of `t2` inside the side. Both add the
/// hole's border edge, so the pair stays nice with one bad hole fewer.
pub fn fill_bad_hole(
    t1: &Tree,
    t2: &Tree,
    side: &Side,
    hole: Hole,
) -> Result<(FlipStep, FlipStep), TransformError> {
    if !is_nice_pair(t1, t2) {
        return Err(TransformError::NotNicePair);
    }
    let n = t1.n();
    if holes_in_side(t1, side).len() < 2 {
        return Err(TransformError::Precondition("side must contain at least two holes"));
    }
    if !is_bad_hole(side, hole, t2) {
        return Err(TransformError::Precondition("hole is not a bad hole of the side"));
    }
    let add = hole.edge(t1.instance());
    let own_face = face_of_hole(t1, hole)?;
    let s_remove = own_face
        .boundary_chords
        .iter()
        .copied()
        .find(|&c| c != side.chord())
        .ok_or_else(|| invariant("fill_bad_hole", "only the side chord borders the hole's face"))?;
    let other_face = face_of_hole(t2, hole)?;
    let o_remove = other_face
        .boundary_chords
        .iter()
        .copied()
        .find(|&c| side.contains_edge(c, n))
        .ok_or_else(|| invariant("fill_bad_hole", "no face chord of the other tree inside the side"))?;
    Ok((FlipStep::new(s_remove, add), FlipStep::new(o_remove, add)))
}

/// For a good but not very good side of `t1`, fills a hole outside the side
/// in both trees; the `t2` step removes a chord crossing the side's chord,
/// decreasing the side's degree by one while keeping the pair nice.
pub fn remove_extra_crossing(
    t1: &Tree,
    t2: &Tree,
    side: &Side,
) -> Result<(FlipStep, FlipStep), TransformError> {
    if !is_nice_pair(t1, t2) {
        return Err(TransformError::NotNicePair);
    }
    let n = t1.n();
    let report = classify_side(t1, side, t2);
    match report.classification {
        SideClass::Plain => return Err(TransformError::Precondition("side still has bad holes")),
        SideClass::VeryGood => {
            return Err(TransformError::Precondition("side is already very good"))
        }
        SideClass::Good => {}
    }
    let crossing_chords: Vec<Edge> =
        t2.chords().filter(|&c| crossing(c, side.chord())).collect();
    for h in t1.holes() {
        if side.contains_hole(h, n) {
            continue;
        }
        let other_face = face_of_hole(t2, h)?;
        let Some(o_remove) = other_face
            .boundary_chords
            .iter()
            .copied()
            .find(|c| crossing_chords.contains(c))
        else {
            continue;
        };
        let own_face = face_of_hole(t1, h)?;
        if own_face.boundary_chords.contains(&side.chord()) {
            continue;
        }
        let s_remove = *own_face
            .boundary_chords
            .first()
            .ok_or_else(|| invariant("remove_extra_crossing", "hole face has no chord"))?;
        let add = h.edge(t1.instance());
        return Ok((FlipStep::new(s_remove, add), FlipStep::new(o_remove, add)));
    }
    Err(invariant("remove_extra_crossing", "no usable hole outside the side"))
}

/// Matches all chords of a very good side of `t1` with chords of `t2`, so
/// that afterwards the two trees agree on the side. Returns the per-tree
/// flip logs and the number of matched chord pairs; the total number of
/// flips satisfies `3·len <= 5·k`.
pub fn match_very_good_side(
    t1: &Tree,
    t2: &Tree,
    side: &Side,
) -> Result<(BilateralLog, usize), TransformError> {
    if !is_nice_pair(t1, t2) {
        return Err(TransformError::NotNicePair);
    }
    let k = holes_in_side(t1, side).len();
    let mut engine = Engine::new(t1.clone(), t2.clone());
    engine.match_side(Owner::First, *side)?;
    let log = BilateralLog { forward_steps: engine.forward, backward_steps: engine.backward };
    if !exact::fits_match_budget(log.len(), k) {
        return Err(invariant(
            "match_very_good_side",
            format!("{} flips exceed the budget for {k} chords", log.len()),
        ));
    }
    Ok((log, k))
}

/// The abstract exchange baseline: exactly `δ` steps, every intermediate
/// edge set a spanning tree, crossings permitted.
pub fn matroid_exchange(t1: &Tree, t2: &Tree) -> Result<Vec<FlipStep>, TransformError> {
    if t1.n() != t2.n() {
        return Err(TransformError::InstanceMismatch);
    }
    let mut cur = t1.clone();
    let mut steps = Vec::new();
    loop {
        let diff = symmetric_difference(&cur, t2)?;
        if diff.delta() == 0 {
            return Ok(steps);
        }
        let remove = diff.only_in_first[0];
        let mark = component_marks(&cur, remove);
        let add = diff
            .only_in_second
            .iter()
            .copied()
            .find(|f| mark[f.a()] != mark[f.b()])
            .ok_or_else(|| invariant("matroid_exchange", "no exchange partner bridges the cut"))?;
        steps.push(FlipStep::new(remove, add));
        cur = cur.with_step(remove, add);
    }
}

/// Marks the component of `remove.a()` in `tree - remove`.
fn component_marks(tree: &Tree, remove: Edge) -> Vec<bool> {
    let mut adj = vec![Vec::new(); tree.n()];
    for &e in tree.edges() {
        if e != remove {
            adj[e.a()].push(e.b());
            adj[e.b()].push(e.a());
        }
    }
    let mut mark = vec![false; tree.n()];
    let mut stack = vec![remove.a()];
    mark[remove.a()] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !mark[w] {
                mark[w] = true;
                stack.push(w);
            }
        }
    }
    mark
}

/// Builds a non-crossing flip sequence from `t1` to `t2` of length at most
/// `2δ`: split at common chords, align differing border edges, then flatten
/// the remaining chords of both trees onto the border and replay the target
/// tree's flattening backwards.
pub fn transform_border_projection(
    t1: &Tree,
    t2: &Tree,
) -> Result<FlipSequence, TransformError> {
    if t1.n() != t2.n() {
        return Err(TransformError::InstanceMismatch);
    }
    let delta = symmetric_difference(t1, t2)?.delta();
    let mut engine = Engine::new(t1.clone(), t2.clone());
    engine.run_border_projection()?;
    let log = BilateralLog { forward_steps: engine.forward, backward_steps: engine.backward };
    let sequence = log.stitch(FlipModel::NonCrossingFlip, t1);
    verify_sequence(&sequence, t2).map_err(|e| {
        invariant("transform_border_projection", format!("sequence failed verification: {e}"))
    })?;
    if sequence.len() > 2 * delta {
        return Err(invariant(
            "transform_border_projection",
            format!("{} flips exceed 2·{delta}", sequence.len()),
        ));
    }
    Ok(sequence)
}

/// Working state: the two trees evolve toward each other; flips on the first
/// are logged forward, flips on the second backward.
struct Engine {
    t1: Tree,
    t2: Tree,
    forward: Vec<FlipStep>,
    backward: Vec<FlipStep>,
}

impl Engine {
    fn new(t1: Tree, t2: Tree) -> Self {
        Self { t1, t2, forward: Vec::new(), backward: Vec::new() }
    }

    fn tree(&self, which: Owner) -> &Tree {
        match which {
            Owner::First => &self.t1,
            Owner::Second => &self.t2,
        }
    }

    /// The side-owning tree first, the opposite tree second.
    fn oriented(&self, owner: Owner) -> (&Tree, &Tree) {
        match owner {
            Owner::First => (&self.t1, &self.t2),
            Owner::Second => (&self.t2, &self.t1),
        }
    }

    fn apply(&mut self, which: Owner, step: FlipStep) -> Result<(), TransformError> {
        let tree = self.tree(which);
        let next = apply_step(tree, step, FlipModel::Flip)
            .map_err(|e| invariant("apply", format!("{step} on {which:?} tree: {e}")))?;
        match which {
            Owner::First => {
                self.t1 = next;
                self.forward.push(step);
            }
            Owner::Second => {
                self.t2 = next;
                self.backward.push(step);
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), TransformError> {
        let budget = 4 * self.t1.n() + 16;
        for _ in 0..budget {
            if self.t1 == self.t2 {
                return Ok(());
            }
            if self.t1.is_hull_path() || self.t2.is_hull_path() {
                self.align_one_border()?;
                continue;
            }
            if let Some(&e) = common_chords(&self.t1, &self.t2).first() {
                self.split_at(e, false)?;
                continue;
            }
            if self.t1.border_edges().ne(self.t2.border_edges()) {
                self.align_one_border()?;
                continue;
            }
            self.extremal_round()?;
        }
        Err(invariant("transform", "round budget exhausted"))
    }

    /// Adds the smallest mismatched border edge to the tree missing it,
    /// removing an edge of the cycle that is not in the other tree (a chord
    /// when one exists).
    fn align_one_border(&mut self) -> Result<(), TransformError> {
        let instance = self.t1.instance();
        for p in instance.hull_pairs() {
            let in1 = self.t1.contains(p);
            let in2 = self.t2.contains(p);
            if in1 == in2 {
                continue;
            }
            let missing = if in1 { Owner::Second } else { Owner::First };
            let tree = self.tree(missing);
            let other = self.tree(missing.flipped());
            let mut removable: Vec<Edge> =
                tree.cycle_with(p).into_iter().filter(|&c| !other.contains(c)).collect();
            removable.sort_unstable();
            let remove = removable
                .iter()
                .copied()
                .find(|&c| !instance.is_border(c))
                .or_else(|| removable.first().copied())
                .ok_or_else(|| invariant("align", "cycle is contained in the other tree"))?;
            return self.apply(missing, FlipStep::new(remove, p));
        }
        Err(invariant("align", "no mismatched border edge"))
    }

    /// Recurses on both sides of a common chord; the side arcs remap to
    /// fresh instances, and the sub-logs lift back edge by edge.
    fn split_at(&mut self, e: Edge, border_projection: bool) -> Result<(), TransformError> {
        let n = self.t1.n();
        for side in [Side::low_arc(e, n), Side::high_arc(e, n)] {
            let arc = side.points(n);
            let sub1 = self
                .t1
                .restrict_to_arc(&arc)
                .map_err(|err| invariant("split", format!("restriction invalid: {err}")))?;
            let sub2 = self
                .t2
                .restrict_to_arc(&arc)
                .map_err(|err| invariant("split", format!("restriction invalid: {err}")))?;
            if sub1 == sub2 {
                continue;
            }
            let mut sub = Engine::new(sub1, sub2);
            if border_projection {
                sub.run_border_projection()?;
            } else {
                sub.run()?;
            }
            for step in sub.forward {
                self.apply(Owner::First, lift_step(step, &arc))?;
            }
            for step in sub.backward {
                self.apply(Owner::Second, lift_step(step, &arc))?;
            }
        }
        if self.t1 != self.t2 {
            return Err(invariant("split", "trees disagree after recursing on both sides"));
        }
        Ok(())
    }

    /// One round on a nice pair: pick an extremal side, fill its bad holes,
    /// remove extra crossings until it is very good, then match all of its
    /// chords.
    fn extremal_round(&mut self) -> Result<(), TransformError> {
        let (owner, side) = find_extremal_side(&self.t1, &self.t2)?;
        // The extremal side admits only a bounded fraction of bad holes.
        if cfg!(debug_assertions) {
            let (own, other) = self.oriented(owner);
            let holes = holes_in_side(own, &side);
            let bad = holes.iter().filter(|&&h| is_bad_hole(&side, h, other)).count();
            debug_assert!(exact::fits_bad_hole_budget(bad, holes.len()));
        }
        loop {
            let (own, other) = self.oriented(owner);
            let Some(hole) = holes_in_side(own, &side)
                .into_iter()
                .find(|&h| is_bad_hole(&side, h, other))
            else {
                break;
            };
            let (s_step, o_step) = fill_bad_hole(own, other, &side, hole)?;
            self.apply(owner, s_step)?;
            self.apply(owner.flipped(), o_step)?;
            debug_assert!(is_nice_pair(&self.t1, &self.t2));
        }
        loop {
            let (own, other) = self.oriented(owner);
            let report = classify_side(own, &side, other);
            if report.degree <= report.k {
                break;
            }
            let (s_step, o_step) = remove_extra_crossing(own, other, &side)?;
            self.apply(owner, s_step)?;
            self.apply(owner.flipped(), o_step)?;
            debug_assert!(is_nice_pair(&self.t1, &self.t2));
        }
        self.match_side(owner, side)
    }

    /// Matches all chords of a very good side so the trees agree on it.
    /// After one agreement round on an inclusion-minimal sub-side, the
    /// matched chord is common; the interior of the matched sub-side is
    /// contracted away and the matching continues on the remainder.
    fn match_side(&mut self, owner: Owner, side: Side) -> Result<(), TransformError> {
        let n = self.t1.n();
        {
            let (own, other) = self.oriented(owner);
            let report = classify_side(own, &side, other);
            if report.classification != SideClass::VeryGood {
                return Err(TransformError::NotVeryGood);
            }
        }
        let e = side.chord();
        let e_prime = self.agreement_round(owner, &side)?;
        if e_prime == e || !self.tree(owner).contains(e) {
            return Ok(());
        }
        let a_prime = sub_side_within(n, e_prime, &side)
            .ok_or_else(|| invariant("match", "matched chord left the side"))?;
        // The complement of the matched sub-side: everything but its
        // interior. The matched chord becomes a border edge there.
        let comp = if a_prime.arc_start() == e_prime.a() {
            Side::high_arc(e_prime, n)
        } else {
            Side::low_arc(e_prime, n)
        };
        let arc = comp.points(n);
        let mut local = vec![usize::MAX; n];
        for (i, &g) in arc.iter().enumerate() {
            local[g] = i;
        }
        let sub1 = self
            .t1
            .restrict_to_arc(&arc)
            .map_err(|err| invariant("match", format!("contraction invalid: {err}")))?;
        let sub2 = self
            .t2
            .restrict_to_arc(&arc)
            .map_err(|err| invariant("match", format!("contraction invalid: {err}")))?;
        let e_local = Edge::new(local[e.a()], local[e.b()]);
        let witness = side
            .points(n)
            .into_iter()
            .find(|&p| local[p] != usize::MAX && !e.has_endpoint(p))
            .ok_or_else(|| invariant("match", "side remnant has no interior point"))?;
        let m = arc.len();
        let low = Side::low_arc(e_local, m);
        let sub_side =
            if low.contains(local[witness], m) { low } else { Side::high_arc(e_local, m) };
        let mut sub = Engine::new(sub1, sub2);
        sub.match_side(owner, sub_side)?;
        for step in sub.forward {
            self.apply(Owner::First, lift_step(step, &arc))?;
        }
        for step in sub.backward {
            self.apply(Owner::Second, lift_step(step, &arc))?;
        }
        Ok(())
    }

    /// One agreement round: find the inclusion-minimal chord of the side,
    /// fill holes of the side until at most one opposing chord reaches into
    /// the minimal sub-side, then create the minimal chord in the other tree
    /// with a single flip. Returns the chord the trees now share.
    fn agreement_round(&mut self, owner: Owner, side: &Side) -> Result<Edge, TransformError> {
        let n = self.t1.n();
        let e = side.chord();
        let (e_prime, a_prime) = {
            let (own, _) = self.oriented(owner);
            let ep = inclusion_minimal_chord(own, side)?;
            let ap = sub_side_within(n, ep, side)
                .ok_or_else(|| invariant("agree", "minimal chord outside the side"))?;
            (ep, ap)
        };
        let hole = {
            let (own, _) = self.oriented(owner);
            let holes = holes_in_side(own, &a_prime);
            if holes.len() != 1 {
                return Err(invariant("agree", "minimal sub-side must contain exactly one hole"));
            }
            holes[0]
        };
        loop {
            let (_, other) = self.oriented(owner);
            let instances: Vec<(Edge, usize)> = other
                .chords()
                .flat_map(|c| {
                    c.endpoints()
                        .into_iter()
                        .filter(|&v| a_prime.interior_contains(v, n))
                        .map(move |v| (c, v))
                })
                .collect();
            let d = instances.len();
            if d > 3 {
                return Err(invariant("agree", "minimal sub-side has degree above three"));
            }
            if d <= 1 {
                let remove = if d == 1 {
                    let g = instances[0].0;
                    let face = face_of_hole(other, hole)?;
                    if !face.boundary_chords.contains(&g) {
                        return Err(invariant("agree", "reaching chord not on the hole's face"));
                    }
                    g
                } else {
                    // Prefer a chord crossing the side's chord: removing it
                    // pays for the matched hole in the degree accounting.
                    // Only a side of degree zero has none on this face.
                    let face = face_of_hole(other, hole)?;
                    face.boundary_chords
                        .iter()
                        .copied()
                        .find(|&c| crossing(c, e))
                        .or_else(|| face.boundary_chords.first().copied())
                        .ok_or_else(|| invariant("agree", "hole's face has no chord"))?
                };
                self.apply(owner.flipped(), FlipStep::new(remove, e_prime))?;
                return Ok(e_prime);
            }
            // d = 2 or 3: operate along a border path holding reaching
            // chords, filling the hole at its far end in both trees.
            let (own, other) = self.oriented(owner);
            let incident: Vec<BorderPath> = border_paths(own)
                .into_iter()
                .filter(|p| p.incident_holes(n).contains(&hole))
                .collect();
            let on_path = |p: &BorderPath| {
                instances.iter().filter(|(_, v)| p.contains_point(*v, n)).count()
            };
            if incident.iter().map(on_path).sum::<usize>() != d {
                return Err(invariant("agree", "reaching chord away from the hole's paths"));
            }
            let path = if d == 2 && incident.iter().any(|p| on_path(p) == 2) {
                let p = *incident.iter().find(|p| on_path(p) == 2).expect("checked");
                if !p.internal_to(side, n) {
                    return Err(invariant("agree", "doubly-hit path is not internal"));
                }
                p
            } else {
                incident
                    .iter()
                    .copied()
                    .filter(|p| {
                        on_path(p) == 1
                            && p.internal_to(side, n)
                            && incident_chord_count(p, other, n) == 1
                    })
                    .min_by_key(|p| p.start())
                    .ok_or_else(|| invariant("agree", "no internal single-chord path"))?
            };
            let far_hole = {
                let [h1, h2] = path.incident_holes(n);
                if h1 == hole {
                    h2
                } else {
                    h1
                }
            };
            if far_hole == hole || !side.contains_hole(far_hole, n) {
                return Err(invariant("agree", "operating hole left the side"));
            }
            let other_face = face_of_hole(other, far_hole)?;
            let o_remove = other_face
                .boundary_chords
                .iter()
                .copied()
                .find(|c| instances.iter().any(|(ic, v)| ic == c && path.contains_point(*v, n)))
                .ok_or_else(|| invariant("agree", "path chord not on the far hole's face"))?;
            let add = far_hole.edge(self.t1.instance());
            self.apply(owner.flipped(), FlipStep::new(o_remove, add))?;
            let (own, _) = self.oriented(owner);
            let own_face = face_of_hole(own, far_hole)?;
            let s_remove = own_face
                .boundary_chords
                .iter()
                .copied()
                .find(|&c| c != e && c != e_prime)
                .or_else(|| own_face.boundary_chords.iter().copied().find(|&c| c == e))
                .ok_or_else(|| invariant("agree", "no chord fills the far hole"))?;
            self.apply(owner, FlipStep::new(s_remove, add))?;
        }
    }

    /// Border-projection pipeline under the non-crossing model: split at
    /// common chords, align border edges, then flatten both trees onto the
    /// same border path.
    fn run_border_projection(&mut self) -> Result<(), TransformError> {
        if self.t1 == self.t2 {
            return Ok(());
        }
        if let Some(&e) = common_chords(&self.t1, &self.t2).first() {
            return self.split_at(e, true);
        }
        while self.t1.border_edges().ne(self.t2.border_edges()) {
            self.align_one_border()?;
        }
        if self.t1 == self.t2 {
            return Ok(());
        }
        // Both trees now have the same border edges, hence the same holes.
        // Fill every hole but the last in both; each fill removes a chord.
        let holes = self.t1.holes();
        debug_assert_eq!(holes, self.t2.holes());
        for &h in &holes[..holes.len() - 1] {
            for which in [Owner::First, Owner::Second] {
                let tree = self.tree(which);
                let add = h.edge(tree.instance());
                let remove = tree
                    .cycle_with(add)
                    .into_iter()
                    .filter(|&c| !tree.is_border(c))
                    .min()
                    .ok_or_else(|| invariant("flatten", "hole cycle without a chord"))?;
                self.apply(which, FlipStep::new(remove, add))?;
            }
        }
        if self.t1 != self.t2 {
            return Err(invariant("flatten", "trees disagree after flattening"));
        }
        Ok(())
    }
}

fn lift_step(step: FlipStep, arc: &[usize]) -> FlipStep {
    let lift = |e: Edge| Edge::new(arc[e.a()], arc[e.b()]);
    FlipStep::new(lift(step.remove), lift(step.add))
}

/// Distinct chords of `other` sharing at least one point with the path.
fn incident_chord_count(path: &BorderPath, other: &Tree, n: usize) -> usize {
    other
        .chords()
        .filter(|c| path.contains_point(c.a(), n) || path.contains_point(c.b(), n))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{side_of, SideOrientation};
    use crate::tree::ConvexInstance;

    fn tree(n: usize, edges: &[(usize, usize)]) -> Tree {
        Tree::new(
            ConvexInstance::new(n),
            edges.iter().map(|&(a, b)| Edge::new(a, b)).collect(),
        )
        .unwrap()
    }

    fn step(r: (usize, usize), a: (usize, usize)) -> FlipStep {
        FlipStep::new(Edge::new(r.0, r.1), Edge::new(a.0, a.1))
    }

    #[test]
    fn transform_identity_is_empty() {
        let t = tree(6, &[(2, 3), (0, 1), (4, 5), (0, 3), (0, 4)]);
        let cert = transform(&t, &t).unwrap();
        assert!(cert.sequence.is_empty());
        assert_eq!(cert.delta, 0);
        assert!(cert.bound_ok);
    }

    #[test]
    fn transform_gadget_pair_is_tight() {
        let t1 = tree(8, &[(0, 7), (1, 2), (5, 6), (3, 4), (1, 4), (0, 4), (0, 5)]);
        let t2 = tree(8, &[(0, 7), (1, 2), (5, 6), (3, 4), (2, 7), (2, 6), (3, 6)]);
        let cert = transform(&t1, &t2).unwrap();
        assert_eq!(cert.delta, 3);
        // floor(3c) = 5 and no shorter sequence exists.
        assert_eq!(cert.sequence.len(), 5);
        assert!(verify_sequence(&cert.sequence, &t2).is_ok());
    }

    #[test]
    fn fill_bad_hole_matches_expected_steps() {
        let t1 = tree(8, &[(0, 1), (2, 3), (0, 2), (0, 4), (4, 5), (5, 6), (0, 7)]);
        let t2 = tree(8, &[(0, 1), (2, 3), (1, 3), (3, 6), (4, 5), (5, 6), (0, 7)]);
        let side = side_of(&t1, Edge::new(0, 4), SideOrientation::FromLow).unwrap();
        let (s1, s2) = fill_bad_hole(&t1, &t2, &side, Hole::new(1)).unwrap();
        assert_eq!(s1, step((0, 2), (1, 2)));
        assert_eq!(s2, step((1, 3), (1, 2)));
        let t1b = apply_step(&t1, s1, FlipModel::Flip).unwrap();
        let t2b = apply_step(&t2, s2, FlipModel::Flip).unwrap();
        assert!(is_nice_pair(&t1b, &t2b));
        assert!(!is_bad_hole(&side, Hole::new(1), &t2b));
        // The good hole survives.
        assert!(t1b.is_hole(Hole::new(3)) && t2b.is_hole(Hole::new(3)));
    }

    #[test]
    fn fill_bad_hole_rejects_good_holes() {
        let t1 = tree(8, &[(0, 1), (2, 3), (0, 2), (0, 4), (4, 5), (5, 6), (0, 7)]);
        let t2 = tree(8, &[(0, 1), (2, 3), (1, 3), (3, 6), (4, 5), (5, 6), (0, 7)]);
        let side = side_of(&t1, Edge::new(0, 4), SideOrientation::FromLow).unwrap();
        assert!(matches!(
            fill_bad_hole(&t1, &t2, &side, Hole::new(3)),
            Err(TransformError::Precondition(_))
        ));
    }

    #[test]
    fn remove_extra_crossing_decrements_degree() {
        let t1 = tree(9, &[(0, 1), (2, 3), (4, 5), (6, 7), (0, 8), (0, 2), (0, 4), (4, 6)]);
        let t2 = tree(9, &[(0, 1), (2, 3), (4, 5), (6, 7), (0, 8), (1, 7), (2, 6), (3, 5)]);
        let side = side_of(&t1, Edge::new(0, 4), SideOrientation::FromLow).unwrap();
        let before = classify_side(&t1, &side, &t2);
        let (s1, s2) = remove_extra_crossing(&t1, &t2, &side).unwrap();
        assert_eq!(s1, step((4, 6), (5, 6)));
        assert_eq!(s2, step((2, 6), (5, 6)));
        let t1b = apply_step(&t1, s1, FlipModel::Flip).unwrap();
        let t2b = apply_step(&t2, s2, FlipModel::Flip).unwrap();
        assert!(is_nice_pair(&t1b, &t2b));
        let after = classify_side(&t1b, &side, &t2b);
        assert_eq!(after.degree, before.degree - 1);
        assert_eq!(after.k, before.k);
    }

    #[test]
    fn match_tight_side_uses_five_flips() {
        // A very good side with three holes that cannot be matched with
        // fewer than five flips.
        let t1 = tree(8, &[(1, 2), (3, 4), (0, 4), (1, 4), (0, 5), (5, 6), (0, 7)]);
        let t2 = tree(8, &[(1, 2), (3, 4), (5, 6), (0, 7), (3, 6), (3, 7), (2, 7)]);
        assert!(is_nice_pair(&t1, &t2));
        let side = side_of(&t1, Edge::new(0, 5), SideOrientation::FromLow).unwrap();
        let report = classify_side(&t1, &side, &t2);
        assert_eq!((report.k, report.degree), (3, 3));
        assert_eq!(report.classification, SideClass::VeryGood);
        let (log, matched) = match_very_good_side(&t1, &t2, &side).unwrap();
        assert_eq!(matched, 3);
        assert_eq!(log.len(), 5);
        // Afterwards the trees agree everywhere: the side was the whole
        // difference.
        let mut a = t1.clone();
        for &s in &log.forward_steps {
            a = apply_step(&a, s, FlipModel::Flip).unwrap();
        }
        let mut b = t2.clone();
        for &s in &log.backward_steps {
            b = apply_step(&b, s, FlipModel::Flip).unwrap();
        }
        assert_eq!(a, b);
        let stitched = log.stitch(FlipModel::Flip, &t1);
        assert!(verify_sequence(&stitched, &t2).is_ok());
    }

    #[test]
    fn match_single_chord_side_uses_one_flip() {
        // k = 1 with one crossing chord: one flip creates the side chord in
        // the other tree.
        let t1 = tree(6, &[(0, 1), (0, 2), (2, 3), (3, 4), (4, 5)]);
        let t2 = tree(6, &[(0, 1), (1, 3), (2, 3), (3, 4), (4, 5)]);
        assert!(is_nice_pair(&t1, &t2));
        let side = side_of(&t1, Edge::new(0, 2), SideOrientation::FromLow).unwrap();
        let report = classify_side(&t1, &side, &t2);
        assert_eq!((report.k, report.degree), (1, 1));
        let (log, matched) = match_very_good_side(&t1, &t2, &side).unwrap();
        assert_eq!(matched, 1);
        assert_eq!(log.len(), 1);
    }

    #[test]
    fn match_degree_zero_side_uses_one_flip() {
        // k = 1 and nothing crosses the chord: still a single flip, removing
        // a chord of the hole's face in the other tree.
        let t1 = tree(6, &[(0, 1), (0, 2), (2, 3), (3, 4), (4, 5)]);
        let t2 = tree(6, &[(0, 1), (0, 4), (2, 3), (3, 4), (4, 5)]);
        assert!(is_nice_pair(&t1, &t2));
        let side = side_of(&t1, Edge::new(0, 2), SideOrientation::FromLow).unwrap();
        let report = classify_side(&t1, &side, &t2);
        assert_eq!((report.k, report.degree), (1, 0));
        let (log, matched) = match_very_good_side(&t1, &t2, &side).unwrap();
        assert_eq!(matched, 1);
        assert_eq!(log.len(), 1);
        assert_eq!(log.backward_steps, vec![step((0, 4), (0, 2))]);
    }

    #[test]
    fn matroid_exchange_runs_in_delta_steps() {
        let t1 = tree(8, &[(0, 7), (1, 2), (5, 6), (3, 4), (1, 4), (0, 4), (0, 5)]);
        let t2 = tree(8, &[(0, 7), (1, 2), (5, 6), (3, 4), (2, 7), (2, 6), (3, 6)]);
        let steps = matroid_exchange(&t1, &t2).unwrap();
        assert_eq!(steps.len(), 3);
        assert!(matroid_exchange(&t1, &t1).unwrap().is_empty());
    }

    #[test]
    fn border_projection_on_small_gadget() {
        let t1 = tree(4, &[(0, 3), (1, 2), (0, 2)]);
        let t2 = tree(4, &[(0, 3), (1, 2), (1, 3)]);
        let seq = transform_border_projection(&t1, &t2).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.model, FlipModel::NonCrossingFlip);
        assert!(verify_sequence(&seq, &t2).is_ok());
        assert!(transform_border_projection(&t1, &t1).unwrap().is_empty());
    }
}
