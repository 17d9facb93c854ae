//! Decay, pregluing, gluing and probe estimates on the flat model.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use multiquilt_core::numerics::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coeffs(list: &[(i32, f64)]) -> BTreeMap<i32, Complex64> {
    list.iter()
        .map(|&(k, c)| (k, Complex64::new(c, 0.0)))
        .collect()
}

fn pieces(pb: &StripProblem, n_t: usize) -> (DiscreteMap, DiscreteMap) {
    let u1 = solve_piece(
        pb,
        Grid::square(-2.0, 8.0, n_t).unwrap(),
        PieceSide::Left,
        0.5,
        1e-12,
    )
    .unwrap();
    let u2 = solve_piece(
        pb,
        Grid::square(-8.0, 2.0, n_t).unwrap(),
        PieceSide::Right,
        0.5,
        1e-12,
    )
    .unwrap();
    (u1, u2)
}

#[test]
fn fitted_decay_rate_matches_the_slowest_mode() {
    for alpha in [PI / 4.0, PI / 2.0] {
        let g = Grid::square(-4.0, 4.0, 33).unwrap();
        let u = exact_modes(alpha, &coeffs(&[(0, 1.0)]), g).unwrap();
        let p = energy_profile(&u, (-3.0, 3.0)).unwrap();
        let exact = 2.0 * alpha.min(PI - alpha);
        assert!(
            (p.kappa / exact - 1.0).abs() < 0.05,
            "{} vs {exact}",
            p.kappa
        );
        assert!(check_convexity(&p) >= 0.95 * p.kappa * p.kappa);
    }
}

#[test]
fn two_mode_energy_is_quantized() {
    let alpha = PI / 4.0;
    let g = Grid::square(-4.0, 4.0, 33).unwrap();
    let u = exact_modes(alpha, &coeffs(&[(0, 1.0), (-1, 0.3)]), g).unwrap();
    let kappa = 2.0 * mode_rate(alpha, 0);
    for t in [1.0, 2.0, 3.0] {
        let (et, bound) = check_quantization(&u, kappa, t).unwrap();
        assert!(et <= 1.05 * bound);
    }
    let p = energy_profile(&u, (-3.0, 3.0)).unwrap();
    assert!(check_convexity(&p) >= 0.95 * p.kappa * p.kappa);
}

#[test]
fn pregluing_error_decays_at_half_the_mode_rate() {
    let pb = StripProblem::new(PI / 2.0, Hamiltonian::zero(), 4.0).unwrap();
    let (u1, u2) = pieces(&pb, 9);
    let eps: Vec<f64> = [6.0, 8.0, 10.0, 12.0]
        .iter()
        .map(|&r| {
            let u = preglue(&u1, &u2, r, PreglueType::Type3, 1e-3).unwrap();
            lp_norm_cells(&residual(&pb, &u).unwrap(), 4.0)
        })
        .collect();
    assert!(eps.windows(2).all(|w| w[1] < w[0]));
    let slope = (eps[3].ln() - eps[0].ln()) / 6.0;
    let lambda = mode_rate(pb.alpha(), 0);
    assert!((slope / (-lambda / 2.0) - 1.0).abs() < 0.15, "{slope}");
}

#[test]
fn right_inverse_bound_is_uniform_in_the_gluing_length() {
    let pb = StripProblem::new(PI / 2.0, Hamiltonian::cubic(0.05), 4.0).unwrap();
    let (u1, u2) = pieces(&pb, 9);
    let bounds: Vec<f64> = [8.0, 10.0, 12.0]
        .iter()
        .map(|&r| {
            let (_, rep) = glue_pieces(&pb, &u1, &u2, r, 1e-3, 1e-10).unwrap();
            assert!(rep.ift_holds);
            assert!(*rep.residuals.last().unwrap() < 1e-10);
            rep.c_hat
        })
        .collect();
    let (lo, hi) = bounds
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    assert!(hi / lo < 1.2, "{bounds:?}");
}

#[test]
fn quadratic_constant_is_stable_in_the_strip_length() {
    let pb = StripProblem::new(PI / 2.0, Hamiltonian::cubic(0.05), 4.0).unwrap();
    let c: Vec<f64> = [8.0, 16.0]
        .iter()
        .map(|&s| {
            let u = DiscreteMap::zero(Grid::square(-s, s, 9).unwrap());
            quadratic_probe(&pb, &u, 20, 0.1, 3).unwrap().c_hat
        })
        .collect();
    assert!((c[0] / c[1] - 1.0).abs() < 0.1);
}

#[test]
fn surjectivity_probe_flags_but_tolerates_large_perturbations() {
    let pb = StripProblem::new(PI / 2.0, Hamiltonian::cubic(0.05), 4.0).unwrap();
    let (u1, u2) = pieces(&pb, 9);
    let broken = BrokenPair { u1, u2 };
    let rep = surjectivity_probe(&pb, &broken, &[6.0], 1.0, 3, 2, 1e-11).unwrap();
    assert!(rep.passed);
    if rep.outliers > 0 {
        assert!(!rep.warnings.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cutoff_is_monotone(a in -2.0f64..1.0, b in -2.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(cutoff(lo) >= cutoff(hi));
        prop_assert!((0.0..=1.0).contains(&cutoff(a)));
    }

    #[test]
    fn half_turn_preserves_the_residual_norm(seed in any::<u64>(), alpha in 0.2f64..2.9) {
        let pb = StripProblem::new(alpha, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(-1.0, 1.0, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = DiscreteMap::from_params(g, &pb, &(0..g.m() * g.n_s()).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
        // The turned map solves the problem with the lines swapped, i.e. rotated by −α.
        let turned = u.half_turn();
        let rot = Complex64::from_polar(1.0, -alpha);
        let values = turned.values().iter().map(|z| z * rot).collect();
        let turned = DiscreteMap::from_values(*turned.grid(), values).unwrap();
        let swapped = StripProblem::new(PI - alpha, Hamiltonian::zero(), 4.0).unwrap();
        let a = lp_norm_cells(&residual(&pb, &u).unwrap(), 4.0);
        let b = lp_norm_cells(&residual(&swapped, &turned).unwrap(), 4.0);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn linearization_is_the_derivative(seed in any::<u64>()) {
        let pb = StripProblem::new(1.1, Hamiltonian::cubic(0.05), 4.0).unwrap();
        let g = Grid::square(-0.5, 0.5, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut random = || DiscreteMap::from_params(g, &pb, &(0..g.m() * g.n_s()).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
        let (u, v) = (random(), random());
        let dv = apply_linearization(&pb, &u, &v).unwrap();
        let h = 1e-4;
        let up = residual(&pb, &u.add(&v.scaled(h)).unwrap()).unwrap();
        let um = residual(&pb, &u.add(&v.scaled(-h)).unwrap()).unwrap();
        let fd = up.difference(&um);
        let err = fd.values().iter().zip(dv.values()).map(|(a, b)| (a / (2.0 * h) - b).norm_sqr()).sum::<f64>().sqrt();
        let norm = dv.values().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-6 * norm);
    }
}
