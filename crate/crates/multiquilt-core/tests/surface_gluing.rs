//! Gluing metric trees and gluing their surfaces give the same quilted surface.

use multiquilt_core::moduli::{
    glue_type1, glue_type2, random_admissible, type2_lengths, GluingParameter,
};
use multiquilt_core::surfaces::{
    surface_from_colored_tree, surface_from_layer_base, surface_from_tree, truncate_and_identify,
    QuiltSurface, SeamKind, SEAM_HIGH, SEAM_LOW,
};
use multiquilt_core::trees::{compositions, enumerate_strata, RibbonTree, TreeKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pick(rng: &mut ChaCha8Rng, d: usize, kind: TreeKind) -> RibbonTree {
    enumerate_strata(d, kind)
        .unwrap()
        .choose(rng)
        .unwrap()
        .clone()
}

fn type1_case(rng: &mut ChaCha8Rng, d: usize) -> (QuiltSurface, QuiltSurface) {
    let e = rng.gen_range(2..=d);
    let i = rng.gen_range(0..=d - e);
    let r1 = random_admissible(&pick(rng, d - e + 1, TreeKind::Colored), rng);
    let r2 = random_admissible(&pick(rng, e, TreeKind::Uncolored), rng);
    let nu = f64::from(rng.gen_range(16..=64u32)) / 8.0;
    let glued = glue_type1(&r1, &r2, i, GluingParameter::from_length(nu).unwrap()).unwrap();
    let direct = surface_from_colored_tree(&glued).unwrap().canonical();
    let a = surface_from_colored_tree(&r1).unwrap();
    let b = surface_from_tree(&r2).unwrap();
    let spliced = truncate_and_identify(&a, i + 1, &b, 0, nu / 2.0)
        .unwrap()
        .canonical();
    (direct, spliced)
}

fn type2_case(rng: &mut ChaCha8Rng, d: usize) -> (QuiltSurface, QuiltSurface) {
    let comps: Vec<Vec<usize>> = compositions(d)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .collect();
    let parts_shape = comps.choose(rng).unwrap().clone();
    let r0 = random_admissible(&pick(rng, parts_shape.len(), TreeKind::Uncolored), rng);
    let parts: Vec<_> = parts_shape
        .iter()
        .map(|&s| random_admissible(&pick(rng, s, TreeKind::Colored), rng))
        .collect();
    let g = GluingParameter::from_length(f64::from(rng.gen_range(120..=160u32)) / 8.0).unwrap();
    let glued = glue_type2(&r0, &parts, g).unwrap();
    let direct = surface_from_colored_tree(&glued).unwrap().canonical();
    let nus = type2_lengths(&r0, &parts, g).unwrap();
    let mut s = surface_from_layer_base(&r0).unwrap();
    for j in (0..parts.len()).rev() {
        assert!(nus[j] >= 2.0);
        let b = surface_from_colored_tree(&parts[j]).unwrap();
        s = truncate_and_identify(&s, j + 1, &b, 0, nus[j] / 2.0).unwrap();
    }
    (direct, s.canonical())
}

#[test]
fn type1_gluing_commutes_with_thickening() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 2..=5 {
        for _ in 0..100 {
            let (direct, spliced) = type1_case(&mut rng, d);
            assert_eq!(direct, spliced);
        }
    }
}

#[test]
fn type2_gluing_commutes_with_thickening() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in 2..=5 {
        for _ in 0..100 {
            let (direct, spliced) = type2_case(&mut rng, d);
            assert_eq!(direct, spliced);
        }
    }
}

#[test]
fn type1_seam_stays_on_the_quilted_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let e = 2;
        let r1 = random_admissible(&pick(&mut rng, 2, TreeKind::Colored), &mut rng);
        let r2 = random_admissible(&pick(&mut rng, e, TreeKind::Uncolored), &mut rng);
        let a = surface_from_colored_tree(&r1).unwrap();
        let b = surface_from_tree(&r2).unwrap();
        let glued = truncate_and_identify(&a, 1, &b, 0, 10.0).unwrap();
        let from_b = a.rects().len()..glued.rects().len();
        assert!(glued.seams().iter().all(|s| !from_b.contains(&s.rect)));
    }
}

#[test]
fn type2_with_two_parts_has_two_branches() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for d in 2..=5 {
        for _ in 0..10 {
            let (direct, _) = type2_case(&mut rng, d);
            let parts = direct.seam_count(SeamKind::Branch);
            assert!(parts >= 2);
        }
    }
    let r0 = random_admissible(&pick(&mut rng, 2, TreeKind::Uncolored), &mut rng);
    let top = enumerate_strata(1, TreeKind::Colored).unwrap()[0].clone();
    let p = random_admissible(&top, &mut rng);
    let glued = glue_type2(
        &r0,
        &[p.clone(), p],
        GluingParameter::from_length(5.0).unwrap(),
    )
    .unwrap();
    let s = surface_from_colored_tree(&glued).unwrap().canonical();
    assert_eq!(s.seam_count(SeamKind::Branch), 2);
}

#[test]
fn glued_neck_is_thin_and_ends_have_unit_width_seams() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for d in 2..=5 {
        let (_, spliced) = type1_case(&mut rng, d);
        for end in spliced.ends() {
            assert!(spliced.rects()[end.rect].thin);
        }
        for seam in spliced.seams() {
            for &(s, t) in &seam.points {
                if s.is_infinite() {
                    assert!(t == SEAM_LOW || t == SEAM_HIGH);
                }
            }
        }
    }
}
