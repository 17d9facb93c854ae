//! Separable solutions of the linear problem (`H = 0`).
//!
//! On the continuous strip, `u(z) = Σ c_k e^{λ_k z}` with `λ_k = α + kπ` and real `c_k` solves
//! `∂_s u + i ∂_t u = 0` with `u(s, 0) ∈ ℝ` and `u(s, 1) ∈ e^{iα}ℝ`. The box scheme has exact
//! discrete analogues `E_k^{s/h_s} e^{iθ_k q}` with `θ_k = λ_k h_t` and
//! `E_k = (1 + μ tan(θ_k/2)) / (1 − μ tan(θ_k/2))`, `μ = h_s/h_t`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{Complex64, DiscreteMap, Grid, NumericsError, StripProblem};

/// `λ_k = α + kπ`.
pub fn mode_rate(alpha: f64, k: i32) -> f64 {
    alpha + k as f64 * PI
}

fn check_coeffs(coeffs: &BTreeMap<i32, Complex64>) -> Result<(), NumericsError> {
    if coeffs.is_empty() {
        return Err(NumericsError::EmptyCoefficients);
    }
    if let Some((&k, _)) = coeffs.iter().find(|(_, c)| c.im != 0.0) {
        return Err(NumericsError::NonRealCoefficient(k));
    }
    Ok(())
}

/// Samples of the exact solution `Σ c_k e^{λ_k (s + it)}`.
pub fn exact_modes(
    alpha: f64,
    coeffs: &BTreeMap<i32, Complex64>,
    grid: Grid,
) -> Result<DiscreteMap, NumericsError> {
    check_coeffs(coeffs)?;
    Ok(DiscreteMap::from_fn(grid, |s, t| {
        coeffs
            .iter()
            .map(|(&k, c)| c * (Complex64::new(s, t) * mode_rate(alpha, k)).exp())
            .sum()
    }))
}

/// `(θ_k, E_k)` for the grid spacing.
pub fn discrete_mode_factor(alpha: f64, k: i32, grid: &Grid) -> (f64, f64) {
    let theta = mode_rate(alpha, k) * grid.h_t();
    let tau = libm::tan(theta / 2.0) * grid.h_s() / grid.h_t();
    (theta, (1.0 + tau) / (1.0 - tau))
}

/// The exact discrete solution `Σ c_k E_k^{s/h_s} e^{iθ_k q}`; `s_min` must be a multiple of
/// `h_s`.
pub fn discrete_modes(
    alpha: f64,
    coeffs: &BTreeMap<i32, Complex64>,
    grid: Grid,
) -> Result<DiscreteMap, NumericsError> {
    check_coeffs(coeffs)?;
    let offset = grid.s_min() / grid.h_s();
    if libm::fabs(offset - libm::round(offset)) > 1e-9 {
        return Err(NumericsError::GridMisaligned);
    }
    let j0 = libm::round(offset) as i32;
    let mut u = DiscreteMap::zero(grid);
    for (&k, c) in coeffs {
        let (theta, e) = discrete_mode_factor(alpha, k, &grid);
        for j in 0..grid.n_s() {
            let amp = c.re * powi(e, j0 + j as i32);
            for q in 0..grid.n_t() {
                let z = u.get(j, q) + Complex64::from_polar(amp, theta * q as f64);
                u.set(j, q, z);
            }
        }
    }
    Ok(u)
}

fn powi(x: f64, n: i32) -> f64 {
    let mut r = 1.0;
    let b = if n >= 0 { x } else { 1.0 / x };
    for _ in 0..n.unsigned_abs() {
        r *= b;
    }
    r
}

/// The discrete modes of one column as a basis of the `m` real column parameters.
///
/// Modes with `k < 0` decay as `s` increases (`|E_k| < 1`), the others grow.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeBasis {
    m: usize,
    ks: Vec<i32>,
    /// Row-major inverse of the matrix whose columns are the mode parameter vectors.
    inverse: Vec<f64>,
}

impl ModeBasis {
    pub fn new(problem: &StripProblem, grid: &Grid) -> Result<ModeBasis, NumericsError> {
        let n = grid.n_t();
        let m = grid.m();
        let half = (n - 1) as i32;
        let ks: Vec<i32> = (-half..half).collect();
        let mut a = vec![0.0; m * m];
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        let mut params = vec![0.0; m];
        for (c, &k) in ks.iter().enumerate() {
            let theta = mode_rate(problem.alpha(), k) * grid.h_t();
            for (q, z) in col.iter_mut().enumerate() {
                *z = Complex64::from_polar(1.0, theta * q as f64);
            }
            problem.column_params(&col, &mut params);
            for r in 0..m {
                a[r * m + c] = params[r];
            }
        }
        let inverse = invert(&a, m).ok_or(NumericsError::ModeBasisSingular)?;
        Ok(ModeBasis { m, ks, inverse })
    }

    pub fn modes(&self) -> &[i32] {
        &self.ks
    }

    /// Coefficients of a column parameter vector in the mode basis.
    pub fn coefficients(&self, params: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|r| {
                (0..self.m)
                    .map(|c| self.inverse[r * self.m + c] * params[c])
                    .sum()
            })
            .collect()
    }

    /// Rows of the coefficient map for the modes decaying (`true`) or growing (`false`) in `s`.
    pub fn rows(&self, decaying: bool) -> Vec<Vec<f64>> {
        self.ks
            .iter()
            .enumerate()
            .filter(|(_, &k)| (k < 0) == decaying)
            .map(|(r, _)| self.inverse[r * self.m..(r + 1) * self.m].to_vec())
            .collect()
    }
}

/// Gauss–Jordan inversion with partial pivoting.
fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0f64, |x, y| x.max(libm::fabs(*y)));
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| libm::fabs(a[i * n + c]).total_cmp(&libm::fabs(a[j * n + c])))?;
        if libm::fabs(a[p * n + c]) <= 1e-12 * scale {
            return None;
        }
        for k in 0..n {
            a.swap(c * n + k, p * n + k);
            inv.swap(c * n + k, p * n + k);
        }
        let d = a[c * n + c];
        for k in 0..n {
            a[c * n + k] /= d;
            inv[c * n + k] /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r * n + c];
                if f != 0.0 {
                    for k in 0..n {
                        a[r * n + k] -= f * a[c * n + k];
                        inv[r * n + k] -= f * inv[c * n + k];
                    }
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{residual, Hamiltonian};

    fn single(k: i32, c: f64) -> BTreeMap<i32, Complex64> {
        let mut m = BTreeMap::new();
        m.insert(k, Complex64::new(c, 0.0));
        m
    }

    #[test]
    fn quarter_turn_mode_is_exponential() {
        let g = Grid::square(-1.0, 1.0, 9).unwrap();
        let u = exact_modes(PI / 2.0, &single(0, 1.0), g).unwrap();
        let z = Complex64::new(0.5, 0.25) * (PI / 2.0);
        assert!((u.at(0.5, 2) - z.exp()).norm() < 1e-14);
    }

    #[test]
    fn zero_coefficients_give_zero_map() {
        let g = Grid::square(-1.0, 1.0, 9).unwrap();
        let u = exact_modes(1.0, &single(3, 0.0), g).unwrap();
        assert_eq!(u.sup(), 0.0);
        assert_eq!(
            exact_modes(1.0, &BTreeMap::new(), g),
            Err(NumericsError::EmptyCoefficients)
        );
        let mut c = single(0, 1.0);
        c.insert(1, Complex64::new(0.0, 1.0));
        assert_eq!(
            exact_modes(1.0, &c, g),
            Err(NumericsError::NonRealCoefficient(1))
        );
    }

    #[test]
    fn negative_modes_decay() {
        assert!((mode_rate(PI / 4.0, -1) + 3.0 * PI / 4.0).abs() < 1e-15);
        let g = Grid::square(0.0, 4.0, 9).unwrap();
        let u = exact_modes(PI / 4.0, &single(-1, 1.0), g).unwrap();
        let ratio = u.at(4.0, 0).norm() / u.at(3.0, 0).norm();
        assert!((ratio - (-3.0 * PI / 4.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn discrete_modes_solve_the_scheme_exactly() {
        let pb = StripProblem::new(0.9, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(-2.0, 2.0, 9).unwrap();
        let mut c = single(-1, 0.3);
        c.insert(0, Complex64::new(-0.2, 0.0));
        c.insert(2, Complex64::new(0.01, 0.0));
        let u = discrete_modes(pb.alpha(), &c, g).unwrap();
        assert!(u.boundary_defect(&pb) < 1e-14);
        let r = residual(&pb, &u).unwrap();
        assert!(r.sup() < 1e-13 * u.sup(), "{}", r.sup());
        let (_, e) = discrete_mode_factor(pb.alpha(), 0, &g);
        assert!((libm::log(e) / g.h_s() - 0.9).abs() < 0.01);
    }

    #[test]
    fn mode_basis_separates_columns() {
        let pb = StripProblem::new(PI / 2.0, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(0.0, 1.0, 9).unwrap();
        let basis = ModeBasis::new(&pb, &g).unwrap();
        assert_eq!(basis.modes().len(), g.m());
        let u = discrete_modes(pb.alpha(), &single(-2, 1.0), g).unwrap();
        let x = u.to_params(&pb);
        let coeffs = basis.coefficients(&x[..g.m()]);
        for (i, &k) in basis.modes().iter().enumerate() {
            let expected = if k == -2 { 1.0 } else { 0.0 };
            assert!((coeffs[i] - expected).abs() < 1e-12);
        }
        assert_eq!(basis.rows(true).len(), g.m() / 2);
    }
}
