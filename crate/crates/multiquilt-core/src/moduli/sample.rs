//! Random admissible metrics.
//!
//! Lengths are drawn on the dyadic grid `k / 8` so that sums and differences of a few of them
//! are exact in `f64`; structural comparisons of glued surfaces rely on that.

use alloc::vec;

use rand::Rng;

use super::{Length, MetricTree};
use crate::trees::RibbonTree;

const GRID: f64 = 8.0;

fn dyadic<R: Rng + ?Sized>(rng: &mut R, lo: u32, hi: u32) -> f64 {
    f64::from(rng.gen_range(lo..=hi)) / GRID
}

/// An admissible metric on `tree` with all lengths positive and finite.
///
/// Edges above the colored layer get lengths in `[1/8, 4]`, edges between uncolored vertices
/// below the layer get lengths in `[1/8, 1]`, and the edges entering colored vertices take up
/// the difference to a common colored depth in `[8, 9]`.
pub fn random_admissible<R: Rng + ?Sized>(tree: &RibbonTree, rng: &mut R) -> MetricTree {
    let n = tree.vertex_count();
    let target = dyadic(rng, 64, 72);
    let mut depth = vec![0.0; n];
    let mut lengths = vec![Length::Finite(0.0); n.saturating_sub(1)];
    for c in 1..n {
        let p = tree.parent(c).expect("non-root");
        let len = if tree.is_colored(c) {
            target - depth[p]
        } else if tree.is_below_colored_layer(c) {
            dyadic(rng, 1, 8)
        } else {
            dyadic(rng, 1, 32)
        };
        depth[c] = depth[p] + len;
        lengths[c - 1] = Length::Finite(len);
    }
    MetricTree::new(tree.clone(), lengths).expect("lengths are positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{enumerate_strata, TreeKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=5 {
            for t in enumerate_strata(d, TreeKind::Colored).unwrap() {
                let mt = random_admissible(&t, &mut rng);
                assert!(mt.is_admissible());
                assert!(mt.lengths().iter().all(|l| l.finite().unwrap() > 0.0));
            }
        }
    }
}
