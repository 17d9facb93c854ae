//! Structural invariants of trees, metric trees and surfaces on random inputs.

use multiquilt_core::moduli::{random_admissible, Length};
use multiquilt_core::surfaces::{fold_quilted_strip, surface_from_colored_tree};
use multiquilt_core::trees::{
    contractions, cut_edge, enumerate_strata, graft, RibbonTree, TreeKind,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pick(seed: u64, d: usize, kind: TreeKind) -> (RibbonTree, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = enumerate_strata(d, kind)
        .unwrap()
        .choose(&mut rng)
        .unwrap()
        .clone();
    (t, rng)
}

fn finite_sum(lengths: &[Length]) -> f64 {
    lengths.iter().map(|l| l.finite().unwrap()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cutting_then_grafting_restores_the_tree(seed in any::<u64>(), d in 2usize..=5, colored in any::<bool>()) {
        let kind = if colored { TreeKind::Colored } else { TreeKind::Uncolored };
        let (t, _) = pick(seed, d, kind);
        for e in t.edges() {
            let cut = cut_edge(&t, e).unwrap();
            prop_assert_eq!(cut.lower.d() + cut.upper.d() - 1, d);
            prop_assert_eq!(&graft(&cut.lower, cut.leaf, &cut.upper).unwrap(), &t);
        }
    }

    #[test]
    fn contractions_raise_the_dimension_by_one(seed in any::<u64>(), d in 2usize..=5) {
        let (t, _) = pick(seed, d, TreeKind::Colored);
        for c in contractions(&t) {
            prop_assert!(c.is_valid(TreeKind::Colored));
            prop_assert_eq!(c.stratum_dim(), t.stratum_dim() + 1);
        }
    }

    #[test]
    fn metric_cut_keeps_every_other_length(seed in any::<u64>(), d in 2usize..=5) {
        let (t, mut rng) = pick(seed, d, TreeKind::Colored);
        let mt = random_admissible(&t, &mut rng);
        prop_assert!(mt.is_admissible());
        let total = finite_sum(mt.lengths());
        for e in t.edges() {
            let (lower, upper, _) = mt.cut(e).unwrap();
            let cut = mt.length(e).unwrap().finite().unwrap();
            let rest = finite_sum(lower.lengths()) + finite_sum(upper.lengths());
            prop_assert!((rest + cut - total).abs() < 1e-9);
        }
    }

    #[test]
    fn forgetting_colors_gives_a_stable_tree(seed in any::<u64>(), d in 2usize..=5) {
        let (t, mut rng) = pick(seed, d, TreeKind::Colored);
        let mt = random_admissible(&t, &mut rng);
        let f = mt.forget_colors().unwrap();
        prop_assert_eq!(f.tree().d(), d);
        prop_assert!(f.tree().is_valid(TreeKind::Uncolored));
    }

    #[test]
    fn folding_is_an_involution(n in 1usize..8, s in -10.0f64..10.0, k in 0u32..=64) {
        // Dyadic t so that 1 − (1 − t) = t exactly.
        let t = f64::from(k) / 64.0;
        let fold = fold_quilted_strip(n);
        for m in 1..=n {
            let (s1, t1) = fold.apply(m, s, t);
            prop_assert_eq!(fold.apply(m, s1, t1), (s, t));
        }
    }

    #[test]
    fn identifications_match_arcs_of_equal_length(seed in any::<u64>(), d in 2usize..=4) {
        let (t, mut rng) = pick(seed, d, TreeKind::Colored);
        let surface = surface_from_colored_tree(&random_admissible(&t, &mut rng)).unwrap();
        for id in surface.identifications() {
            if id.a.length().is_finite() {
                prop_assert!((id.a.length() - id.b.length()).abs() < 1e-9);
                let (x, y) = (id.map(id.a.lo), id.map(id.a.hi));
                prop_assert!(((x - y).abs() - id.a.length()).abs() < 1e-9);
                prop_assert_eq!(id.reversed().map(x), id.a.lo);
            }
        }
    }
}
