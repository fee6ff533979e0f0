//! Flip sequences between non-crossing spanning trees of points in convex
//! position.
//!
//! A convex point set is represented purely combinatorially by its size `n`;
//! points are the indices `0..n` in cyclic order. The crate provides
//!
//! * the basic combinatorics (edges, the crossing predicate, trees, holes,
//!   symmetric differences) in [`tree`],
//! * the three flip relations (flip, non-crossing flip, rotation) together
//!   with sequence application, verification and inversion in [`flip`],
//! * structural views of a tree pair (sides, faces, border paths, side
//!   classification and extremal-side search) in [`analysis`],
//! * a constructive transformation producing a flip sequence of certified
//!   length between any two trees, plus a `2δ` non-crossing baseline and the
//!   abstract matroid-exchange baseline, in [`transform`],
//! * an exhaustive configuration-graph oracle (enumeration, exact BFS
//!   distances, diameters) in [`oracle`],
//! * generators for the lower-bound families and the classic ten-point
//!   example in [`families`],
//! * SVG rendering of trees and sequences in [`render`].
//!
//! All certified comparisons against the irrational thresholds `2 + √2` and
//! `(22 + √2)/12` are decided in exact integer arithmetic ([`exact`]); floats
//! appear only in display output.
//!
//! ```
//! use nctrees::families;
//! use nctrees::flip::{verify_sequence, FlipModel};
//! use nctrees::oracle;
//! use nctrees::transform::transform;
//!
//! // The eight-point gadget pair needs five flips although only three
//! // edges differ; the certified transformation attains that optimum.
//! let (t1, t2) = families::flip_family(1).unwrap();
//! let cert = transform(&t1, &t2).unwrap();
//! assert_eq!((cert.delta, cert.sequence.len()), (3, 5));
//! assert!(verify_sequence(&cert.sequence, &t2).is_ok());
//!
//! let distance = oracle::flip_distance(&t1, &t2, FlipModel::Flip, 10).unwrap();
//! assert_eq!(distance, Some(5));
//! ```

pub mod analysis;
pub mod exact;
pub mod exec;
pub mod families;
pub mod flip;
pub mod oracle;
pub mod render;
pub mod sampling;
pub mod transform;
pub mod tree;

pub use analysis::{Face, Owner, Side, SideClass, SideOrientation, SideReport};
pub use flip::{FlipModel, FlipSequence, FlipStep};
pub use transform::{BilateralLog, CertifiedTransformation};
pub use tree::{ConvexInstance, Edge, Hole, SymmetricDifference, Tree};
