//! Seeded random trees and pairs, generated by random walks in the flip
//! graph starting from the hull path.

use crate::tree::{crossing, ConvexInstance, Edge, Tree};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible generator; the same seed yields the same trees on every
/// platform.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A tree obtained from the hull path by `steps` random flips.
pub fn random_tree(instance: ConvexInstance, steps: usize, rng: &mut impl Rng) -> Tree {
    let mut tree = Tree::hull_path(instance);
    for _ in 0..steps {
        if let Some(next) = random_flip(&tree, rng) {
            tree = next;
        }
    }
    tree
}

/// Two independently sampled trees on the same instance.
pub fn random_pair(instance: ConvexInstance, steps: usize, rng: &mut impl Rng) -> (Tree, Tree) {
    let a = random_tree(instance, steps, rng);
    let b = random_tree(instance, steps, rng);
    (a, b)
}

/// One random valid flip: sample candidate edges until one crosses at most
/// one tree edge, then remove a suitable edge of the created cycle.
fn random_flip(tree: &Tree, rng: &mut impl Rng) -> Option<Tree> {
    let n = tree.n();
    if n < 4 {
        return None;
    }
    for _ in 0..64 {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let add = Edge::new(a, b);
        if tree.contains(add) {
            continue;
        }
        let crossed: Vec<Edge> =
            tree.edges().iter().copied().filter(|&e| crossing(add, e)).collect();
        if crossed.len() > 1 {
            continue;
        }
        let cycle = tree.cycle_with(add);
        let remove = if let [single] = crossed[..] {
            // The crossing edge must leave; it has to sit on the cycle.
            if !cycle.contains(&single) {
                continue;
            }
            single
        } else {
            cycle[rng.gen_range(0..cycle.len())]
        };
        return Some(tree.with_step(remove, add));
    }
    None
}
