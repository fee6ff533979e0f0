//! The three flip relations and flip sequences.
//!
//! A *flip* removes one edge and adds another so that the result is again a
//! non-crossing spanning tree. The added edge may cross the removed one (the
//! two never coexist); only the resulting tree must be non-crossing. A
//! *non-crossing flip* additionally requires the added edge to cross nothing
//! in the pre-tree, and a *rotation* requires the two edges to share an
//! endpoint.

use crate::tree::{crossing, Edge, Tree, TreeError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlipModel {
    #[serde(rename = "flip")]
    Flip,
    #[serde(rename = "ncflip")]
    NonCrossingFlip,
    #[serde(rename = "rotation")]
    Rotation,
}

impl fmt::Display for FlipModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FlipModel::Flip => "flip",
            FlipModel::NonCrossingFlip => "ncflip",
            FlipModel::Rotation => "rotation",
        };
        f.write_str(s)
    }
}

/// One flip: remove an edge, add another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlipStep {
    pub remove: Edge,
    pub add: Edge,
}

impl FlipStep {
    pub fn new(remove: Edge, add: Edge) -> Self {
        Self { remove, add }
    }

    /// The step undoing this one.
    pub fn inverted(&self) -> Self {
        Self { remove: self.add, add: self.remove }
    }
}

impl fmt::Display for FlipStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~> {}", self.remove, self.add)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("edge to remove {0} is not in the tree")]
    EdgeNotPresent(Edge),
    #[error("edge to add {0} is already in the tree")]
    EdgeAlreadyPresent(Edge),
    #[error("removing {remove} and adding {add} leaves the graph disconnected")]
    ResultDisconnected { remove: Edge, add: Edge },
    #[error("added edge {add} crosses tree edge {crossed}")]
    ResultHasCrossing { add: Edge, crossed: Edge },
    #[error("non-crossing flip violation: added edge {add} crosses removed edge {removed}")]
    CrossingAddition { add: Edge, removed: Edge },
    #[error("rotation violation: {remove} and {add} share no endpoint")]
    NoSharedEndpoint { remove: Edge, add: Edge },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Applies one step under a model, validating against the pre-tree only.
pub fn apply_step(tree: &Tree, step: FlipStep, model: FlipModel) -> Result<Tree, StepError> {
    let instance = tree.instance();
    instance.check_edge(step.remove)?;
    instance.check_edge(step.add)?;
    if !tree.contains(step.remove) {
        return Err(StepError::EdgeNotPresent(step.remove));
    }
    if tree.contains(step.add) {
        return Err(StepError::EdgeAlreadyPresent(step.add));
    }
    // Spanning: the added edge must bridge the cut left by the removal.
    let survivors: Vec<Edge> = tree.edges().iter().copied().filter(|&e| e != step.remove).collect();
    let mut mark = vec![false; tree.n()];
    let mut stack = vec![step.remove.a()];
    mark[step.remove.a()] = true;
    let mut adj = vec![Vec::new(); tree.n()];
    for e in &survivors {
        adj[e.a()].push(e.b());
        adj[e.b()].push(e.a());
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !mark[w] {
                mark[w] = true;
                stack.push(w);
            }
        }
    }
    if mark[step.add.a()] == mark[step.add.b()] {
        return Err(StepError::ResultDisconnected { remove: step.remove, add: step.add });
    }
    for &e in &survivors {
        if crossing(step.add, e) {
            return Err(StepError::ResultHasCrossing { add: step.add, crossed: e });
        }
    }
    match model {
        FlipModel::Flip => {}
        FlipModel::NonCrossingFlip => {
            if crossing(step.add, step.remove) {
                return Err(StepError::CrossingAddition { add: step.add, removed: step.remove });
            }
        }
        FlipModel::Rotation => {
            if !step.remove.shares_endpoint(step.add) {
                return Err(StepError::NoSharedEndpoint { remove: step.remove, add: step.add });
            }
        }
    }
    Ok(tree.with_step(step.remove, step.add))
}

/// A flip sequence under a model, starting from a concrete tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSequence {
    pub model: FlipModel,
    pub start: Tree,
    pub steps: Vec<FlipStep>,
}

impl FlipSequence {
    pub fn new(model: FlipModel, start: Tree, steps: Vec<FlipStep>) -> Self {
        Self { model, start, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies all steps, validating each one, and returns the final tree.
    pub fn apply(&self) -> Result<Tree, SequenceFailure> {
        let mut cur = self.start.clone();
        for (i, &step) in self.steps.iter().enumerate() {
            match apply_step(&cur, step, self.model) {
                Ok(next) => cur = next,
                Err(e) => {
                    return Err(SequenceFailure {
                        step_index: Some(i),
                        tree: cur,
                        kind: SequenceFailureKind::Step(e),
                    })
                }
            }
        }
        Ok(cur)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }
}

/// First-failure diagnostics for sequence verification. The intermediate tree
/// just before the failing step is attached; `step_index` is `None` when
/// every step validated but the final tree differs from the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFailure {
    pub step_index: Option<usize>,
    pub tree: Tree,
    pub kind: SequenceFailureKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceFailureKind {
    InstanceMismatch,
    Step(StepError),
    FinalMismatch,
}

impl fmt::Display for SequenceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.kind, self.step_index) {
            (SequenceFailureKind::InstanceMismatch, _) => {
                write!(f, "sequence and target live on different instances")
            }
            (SequenceFailureKind::Step(e), Some(i)) => write!(f, "step {i} invalid: {e}"),
            (SequenceFailureKind::FinalMismatch, _) => {
                write!(f, "all steps valid but the final tree differs from the target")
            }
            (SequenceFailureKind::Step(e), None) => write!(f, "invalid step: {e}"),
        }
    }
}

/// True iff every step is model-valid and the final tree equals `target`.
pub fn verify_sequence(seq: &FlipSequence, target: &Tree) -> Result<(), SequenceFailure> {
    if seq.start.n() != target.n() {
        return Err(SequenceFailure {
            step_index: None,
            tree: seq.start.clone(),
            kind: SequenceFailureKind::InstanceMismatch,
        });
    }
    let last = seq.apply()?;
    if &last != target {
        return Err(SequenceFailure {
            step_index: None,
            tree: last,
            kind: SequenceFailureKind::FinalMismatch,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvertError {
    #[error("non-crossing flip sequences are not invertible in general")]
    NotInvertible,
    #[error("sequence is not valid, cannot invert: {0}")]
    InvalidSequence(String),
}

/// Reverses a sequence step by step. Flip and rotation are symmetric
/// relations, so the result runs from the final tree back to the start; the
/// reverse of a non-crossing flip need not be non-crossing, so that model is
/// rejected.
pub fn invert_sequence(seq: &FlipSequence) -> Result<FlipSequence, InvertError> {
    if seq.model == FlipModel::NonCrossingFlip {
        return Err(InvertError::NotInvertible);
    }
    let end = seq.apply().map_err(|e| InvertError::InvalidSequence(e.to_string()))?;
    let steps = seq.steps.iter().rev().map(|s| s.inverted()).collect();
    Ok(FlipSequence::new(seq.model, end, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
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

    // Eight-point gadget pair with three pairwise-crossing differing chords.
    fn gadget_pair() -> (Tree, Tree) {
        let t1 = tree(8, &[(0, 7), (1, 2), (5, 6), (3, 4), (1, 4), (0, 4), (0, 5)]);
        let t2 = tree(8, &[(0, 7), (1, 2), (5, 6), (3, 4), (2, 7), (2, 6), (3, 6)]);
        (t1, t2)
    }

    #[test]
    fn apply_first_gadget_step() {
        let (t1, _) = gadget_pair();
        let next = apply_step(&t1, step((0, 5), (6, 7)), FlipModel::Flip).unwrap();
        assert!(next.contains(Edge::new(6, 7)));
        assert!(!next.contains(Edge::new(0, 5)));
    }

    #[test]
    fn apply_rotation_shares_endpoint() {
        // Rotation gadget: first listed rotation pivots around a point.
        let t1 = tree(8, &[(0, 7), (1, 2), (5, 6), (3, 4), (1, 4), (1, 5), (0, 5)]);
        let next = apply_step(&t1, step((0, 5), (0, 6)), FlipModel::Rotation).unwrap();
        assert!(next.contains(Edge::new(0, 6)));
        // The same swap is a valid flip but no rotation.
        assert!(apply_step(&t1, step((0, 5), (6, 7)), FlipModel::Flip).is_ok());
        assert_eq!(
            apply_step(&t1, step((0, 5), (6, 7)), FlipModel::Rotation),
            Err(StepError::NoSharedEndpoint { remove: Edge::new(0, 5), add: Edge::new(6, 7) })
        );
    }

    #[test]
    fn apply_rejects_readding_present_edge() {
        let (t1, _) = gadget_pair();
        assert_eq!(
            apply_step(&t1, step((1, 2), (1, 2)), FlipModel::Flip),
            Err(StepError::EdgeAlreadyPresent(Edge::new(1, 2)))
        );
    }

    #[test]
    fn gadget_five_flip_sequence_verifies() {
        let (t1, t2) = gadget_pair();
        let seq = FlipSequence::new(
            FlipModel::Flip,
            t1,
            vec![
                step((0, 5), (6, 7)),
                step((1, 4), (2, 3)),
                step((0, 4), (2, 6)),
                step((6, 7), (2, 7)),
                step((2, 3), (3, 6)),
            ],
        );
        assert!(verify_sequence(&seq, &t2).is_ok());
        assert_eq!(seq.len(), 5);
    }

    #[test]
    fn empty_sequence_verifies_against_start() {
        let (t1, _) = gadget_pair();
        let seq = FlipSequence::new(FlipModel::Flip, t1.clone(), vec![]);
        assert!(verify_sequence(&seq, &t1).is_ok());
    }

    #[test]
    fn verify_reports_first_failure() {
        let (t1, t2) = gadget_pair();
        let seq = FlipSequence::new(
            FlipModel::Flip,
            t1.clone(),
            vec![step((0, 5), (6, 7)), step((0, 5), (2, 3))],
        );
        let fail = verify_sequence(&seq, &t2).unwrap_err();
        assert_eq!(fail.step_index, Some(1));
        assert!(matches!(fail.kind, SequenceFailureKind::Step(StepError::EdgeNotPresent(_))));
    }

    #[test]
    fn invert_round_trips() {
        let (t1, t2) = gadget_pair();
        let seq = FlipSequence::new(
            FlipModel::Flip,
            t1.clone(),
            vec![
                step((0, 5), (6, 7)),
                step((1, 4), (2, 3)),
                step((0, 4), (2, 6)),
                step((6, 7), (2, 7)),
                step((2, 3), (3, 6)),
            ],
        );
        let inv = invert_sequence(&seq).unwrap();
        assert_eq!(inv.start, t2);
        assert!(verify_sequence(&inv, &t1).is_ok());
    }

    #[test]
    fn invert_single_step() {
        let (t1, _) = gadget_pair();
        let seq =
            FlipSequence::new(FlipModel::Flip, t1.clone(), vec![step((0, 5), (6, 7))]);
        let inv = invert_sequence(&seq).unwrap();
        assert_eq!(inv.steps, vec![step((6, 7), (0, 5))]);
        assert!(verify_sequence(&inv, &t1).is_ok());
    }

    #[test]
    fn invert_rejects_noncrossing_model() {
        let (t1, _) = gadget_pair();
        let seq = FlipSequence::new(FlipModel::NonCrossingFlip, t1, vec![]);
        assert_eq!(invert_sequence(&seq), Err(InvertError::NotInvertible));
    }

    #[test]
    fn sequence_json_shape() {
        let (t1, _) = gadget_pair();
        let seq = FlipSequence::new(FlipModel::Flip, t1, vec![step((0, 5), (6, 7))]);
        let json = seq.to_json();
        assert!(json.starts_with(r#"{"model":"flip","start":{"n":8,"#));
        assert!(json.contains(r#""steps":[{"remove":[0,5],"add":[6,7]}]"#));
        assert_eq!(FlipSequence::from_json(&json).unwrap(), seq);
    }
}
