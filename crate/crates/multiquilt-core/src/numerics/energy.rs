//! Energy density, the transverse energy `f(s)` and exponential decay.

use alloc::vec::Vec;

use super::{DiscreteMap, NumericsError};

/// Columns with `f` below this value make the decay fit meaningless.
pub const DEGENERATE_F: f64 = 1e-14;

/// Energy data of a map and a decay-rate fit over a window.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyProfile {
    /// Node positions.
    pub s: Vec<f64>,
    /// `f(s) = ½ ∫ |∂_t u|² dt` per column.
    pub f: Vec<f64>,
    /// `e = |∂_s u|²` per cell, cell-major like a residual field.
    pub e: Vec<f64>,
    /// `Σ h_s h_t e`.
    pub energy: f64,
    /// Fitted rate `κ̂ = |d log f / ds|`.
    pub kappa: f64,
    /// Column range `[lo, hi]` of the fit window.
    pub window: (usize, usize),
}

/// `f` of every column.
fn transverse_energy(u: &DiscreteMap) -> Vec<f64> {
    let g = u.grid();
    let ht = g.h_t();
    (0..g.n_s())
        .map(|j| {
            let c = u.column(j);
            0.5 * c
                .windows(2)
                .map(|w| ((w[1] - w[0]) / ht).norm_sqr() * ht)
                .sum::<f64>()
        })
        .collect()
}

/// Cell energy densities.
pub(crate) fn energy_density(u: &DiscreteMap) -> Vec<f64> {
    let g = u.grid();
    let hs = g.h_s();
    let mut e = Vec::with_capacity((g.n_s() - 1) * (g.n_t() - 1));
    for j in 0..g.n_s() - 1 {
        for q in 0..g.n_t() - 1 {
            let (ds, _, _) = super::operator::cell_parts(u, j, q);
            e.push((ds / (2.0 * hs)).norm_sqr());
        }
    }
    e
}

/// Energy of the cells lying in `[a, b]`.
pub(crate) fn energy_between(u: &DiscreteMap, a: f64, b: f64) -> f64 {
    let g = u.grid();
    let e = energy_density(u);
    let nc = g.n_t() - 1;
    let mut total = 0.0;
    for j in 0..g.n_s() - 1 {
        if g.s(j) >= a - 1e-9 && g.s(j + 1) <= b + 1e-9 {
            total += e[j * nc..(j + 1) * nc].iter().sum::<f64>();
        }
    }
    total * g.h_s() * g.h_t()
}

pub(crate) fn total_energy(u: &DiscreteMap) -> f64 {
    let g = u.grid();
    energy_density(u).iter().sum::<f64>() * g.h_s() * g.h_t()
}

/// Energy profile with `κ̂` fitted on the nodes in `[a, b]`, which must stay one node away from
/// both ends of the grid.
pub fn energy_profile(u: &DiscreteMap, window: (f64, f64)) -> Result<EnergyProfile, NumericsError> {
    let g = u.grid();
    let (a, b) = window;
    let lo = libm::ceil((a - g.s_min()) / g.h_s() - 1e-9);
    let hi = libm::floor((b - g.s_min()) / g.h_s() + 1e-9);
    if !(lo >= 1.0) || !(hi <= (g.n_s() - 2) as f64) || hi - lo < 2.0 {
        return Err(NumericsError::WindowOutsideGrid);
    }
    let (lo, hi) = (lo as usize, hi as usize);
    let f = transverse_energy(u);
    if f[lo - 1..=hi + 1].iter().any(|&x| !(x >= DEGENERATE_F)) {
        return Err(NumericsError::DegenerateFit);
    }
    let s: Vec<f64> = (0..g.n_s()).map(|j| g.s(j)).collect();
    let n = (hi - lo + 1) as f64;
    let mx = s[lo..=hi].iter().sum::<f64>() / n;
    let my = f[lo..=hi].iter().map(|x| libm::log(*x)).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for j in lo..=hi {
        let dx = s[j] - mx;
        sxy += dx * (libm::log(f[j]) - my);
        sxx += dx * dx;
    }
    let e = energy_density(u);
    let energy = e.iter().sum::<f64>() * g.h_s() * g.h_t();
    Ok(EnergyProfile {
        s,
        f,
        e,
        energy,
        kappa: libm::fabs(sxy / sxx),
        window: (lo, hi),
    })
}

/// Minimum of `f̈ / f` over the fit window, by second differences.
pub fn check_convexity(profile: &EnergyProfile) -> f64 {
    let h = profile.s[1] - profile.s[0];
    let f = &profile.f;
    (profile.window.0..=profile.window.1)
        .map(|j| (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h * f[j]))
        .fold(f64::INFINITY, f64::min)
}

/// `(E(T), e^{−κT} E(0))`, where `E(T)` is the energy on `[s_min + T, s_max − T]`.
pub fn check_quantization(
    u: &DiscreteMap,
    kappa: f64,
    t: f64,
) -> Result<(f64, f64), NumericsError> {
    let g = u.grid();
    if !(t >= 0.0) || 2.0 * t >= g.s_max() - g.s_min() {
        return Err(NumericsError::WindowOutsideGrid);
    }
    let e0 = energy_between(u, g.s_min(), g.s_max());
    let et = energy_between(u, g.s_min() + t, g.s_max() - t);
    Ok((et, libm::exp(-kappa * t) * e0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{exact_modes, mode_rate, Complex64, Grid};
    use alloc::collections::BTreeMap;
    use core::f64::consts::PI;

    fn modes(list: &[(i32, f64)]) -> BTreeMap<i32, Complex64> {
        list.iter()
            .map(|&(k, c)| (k, Complex64::new(c, 0.0)))
            .collect()
    }

    #[test]
    fn single_mode_convexity_is_four_lambda_squared() {
        let g = Grid::square(-3.0, 3.0, 33).unwrap();
        let alpha = PI / 3.0;
        let u = exact_modes(alpha, &modes(&[(-1, 1.0)]), g).unwrap();
        let p = energy_profile(&u, (-2.0, 2.0)).unwrap();
        let lambda = mode_rate(alpha, -1);
        assert!((p.kappa / (2.0 * lambda.abs()) - 1.0).abs() < 0.01);
        let ratio = check_convexity(&p) / (4.0 * lambda * lambda);
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
    }

    #[test]
    fn slowest_mode_at_quarter_turn() {
        let g = Grid::square(-3.0, 3.0, 33).unwrap();
        let u = exact_modes(PI / 2.0, &modes(&[(0, 1.0)]), g).unwrap();
        let p = energy_profile(&u, (-2.0, 2.0)).unwrap();
        assert!((p.kappa / PI - 1.0).abs() < 0.02, "{}", p.kappa);
    }

    #[test]
    fn zero_map_is_degenerate() {
        let g = Grid::square(-3.0, 3.0, 9).unwrap();
        let u = DiscreteMap::zero(g);
        assert_eq!(
            energy_profile(&u, (-2.0, 2.0)),
            Err(NumericsError::DegenerateFit)
        );
        assert_eq!(
            energy_profile(&u, (-3.0, 2.0)),
            Err(NumericsError::WindowOutsideGrid)
        );
    }

    #[test]
    fn quantization_for_two_modes() {
        let g = Grid::square(-3.0, 3.0, 33).unwrap();
        let alpha = PI / 4.0;
        let u = exact_modes(alpha, &modes(&[(0, 1.0), (-1, 0.5)]), g).unwrap();
        let kappa = 2.0 * mode_rate(alpha, 0);
        for t in [1.0, 2.0] {
            let (et, bound) = check_quantization(&u, kappa, t).unwrap();
            assert!(et <= bound * 1.05, "{et} {bound}");
        }
    }
}
