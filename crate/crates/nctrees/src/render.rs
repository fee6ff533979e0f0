//! Deterministic SVG rendering of trees and flip sequences: points on a
//! circle, edges as straight segments, six-decimal coordinates so identical
//! inputs produce identical bytes.

use crate::flip::{FlipSequence, SequenceFailure};
use crate::tree::{Edge, Tree};
use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub point_radius: f64,
    pub tree1_color: String,
    pub tree2_color: String,
    pub highlight_color: String,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            width: 480,
            height: 480,
            point_radius: 4.0,
            tree1_color: "#000000".into(),
            tree2_color: "#cc2222".into(),
            highlight_color: "#2255cc".into(),
        }
    }
}

impl RenderSpec {
    fn point(&self, i: usize, n: usize) -> (f64, f64) {
        let theta = std::f64::consts::TAU * i as f64 / n as f64;
        let r = 0.42 * f64::from(self.width.min(self.height));
        let cx = f64::from(self.width) / 2.0;
        let cy = f64::from(self.height) / 2.0;
        (cx + r * theta.cos(), cy - r * theta.sin())
    }
}

fn push_edge(out: &mut String, spec: &RenderSpec, n: usize, e: Edge, color: &str, extra: &str) {
    let (x1, y1) = spec.point(e.a(), n);
    let (x2, y2) = spec.point(e.b(), n);
    writeln!(
        out,
        r#"  <line x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}" stroke="{color}"{extra}/>"#
    )
    .expect("writing to string cannot fail");
}

/// Renders one frame: the first tree in the primary color, an optional
/// second tree overlaid in the secondary color, and an optional flip
/// highlight (removed edge dashed, added edge bold).
pub fn render_frame(
    spec: &RenderSpec,
    t1: &Tree,
    t2: Option<&Tree>,
    highlight: Option<(Edge, Edge)>,
) -> String {
    let n = t1.n();
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    )
    .expect("writing to string cannot fail");
    writeln!(out, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##)
        .expect("writing to string cannot fail");
    for &e in t1.edges() {
        push_edge(&mut out, spec, n, e, &spec.tree1_color, r#" stroke-width="1.5""#);
    }
    if let Some(t2) = t2 {
        for &e in t2.edges() {
            push_edge(
                &mut out,
                spec,
                n,
                e,
                &spec.tree2_color,
                r#" stroke-width="1.5" stroke-opacity="0.75""#,
            );
        }
    }
    if let Some((removed, added)) = highlight {
        push_edge(
            &mut out,
            spec,
            n,
            removed,
            &spec.highlight_color,
            r#" stroke-width="1.5" stroke-dasharray="6 4""#,
        );
        push_edge(&mut out, spec, n, added, &spec.highlight_color, r#" stroke-width="3""#);
    }
    for i in 0..n {
        let (x, y) = spec.point(i, n);
        writeln!(
            out,
            r##"  <circle cx="{x:.6}" cy="{y:.6}" r="{}" fill="#000000"/>"##,
            spec.point_radius
        )
        .expect("writing to string cannot fail");
    }
    out.push_str("</svg>\n");
    out
}

/// Renders a sequence as one frame per tree: the start tree first, then one
/// frame per step with the step highlighted.
pub fn render_sequence(
    spec: &RenderSpec,
    seq: &FlipSequence,
) -> Result<Vec<String>, SequenceFailure> {
    let mut frames = vec![render_frame(spec, &seq.start, None, None)];
    let mut cur = seq.start.clone();
    for (i, &step) in seq.steps.iter().enumerate() {
        let partial = FlipSequence::new(seq.model, cur.clone(), vec![step]);
        cur = partial.apply().map_err(|mut f| {
            f.step_index = Some(i);
            f
        })?;
        frames.push(render_frame(spec, &cur, None, Some((step.remove, step.add))));
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flip::{FlipModel, FlipStep};
    use crate::tree::ConvexInstance;

    fn tree(n: usize, edges: &[(usize, usize)]) -> Tree {
        Tree::new(
            ConvexInstance::new(n),
            edges.iter().map(|&(a, b)| Edge::new(a, b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn frames_are_deterministic() {
        let t = tree(4, &[(0, 3), (1, 2), (0, 2)]);
        let spec = RenderSpec::default();
        assert_eq!(render_frame(&spec, &t, None, None), render_frame(&spec, &t, None, None));
        assert_eq!(render_frame(&spec, &t, None, None).matches("<line").count(), 3);
    }

    #[test]
    fn triangle_frame_golden_bytes() {
        let t = tree(3, &[(0, 1), (1, 2)]);
        let golden = "\
<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">
  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>
  <line x1=\"441.600000\" y1=\"240.000000\" x2=\"139.200000\" y2=\"65.409279\" stroke=\"#000000\" stroke-width=\"1.5\"/>
  <line x1=\"139.200000\" y1=\"65.409279\" x2=\"139.200000\" y2=\"414.590721\" stroke=\"#000000\" stroke-width=\"1.5\"/>
  <circle cx=\"441.600000\" cy=\"240.000000\" r=\"4\" fill=\"#000000\"/>
  <circle cx=\"139.200000\" cy=\"65.409279\" r=\"4\" fill=\"#000000\"/>
  <circle cx=\"139.200000\" cy=\"414.590721\" r=\"4\" fill=\"#000000\"/>
</svg>
";
        assert_eq!(render_frame(&RenderSpec::default(), &t, None, None), golden);
    }

    #[test]
    fn sequence_renders_steps_plus_one_frames() {
        let t = tree(4, &[(0, 3), (1, 2), (0, 2)]);
        let seq = FlipSequence::new(
            FlipModel::Flip,
            t,
            vec![FlipStep::new(Edge::new(0, 2), Edge::new(1, 3))],
        );
        let frames = render_sequence(&RenderSpec::default(), &seq).unwrap();
        assert_eq!(frames.len(), 2);
        assert!(frames[1].contains("stroke-dasharray"));
    }

    #[test]
    fn empty_sequence_is_a_single_frame() {
        let t = tree(4, &[(0, 3), (1, 2), (0, 2)]);
        let seq = FlipSequence::new(FlipModel::Flip, t, vec![]);
        assert_eq!(render_sequence(&RenderSpec::default(), &seq).unwrap().len(), 1);
    }
}
