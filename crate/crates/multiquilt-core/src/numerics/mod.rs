//! A flat Floer model for the gluing analysis.
//!
//! The target is ℂ with `J = i`, the boundary lines are `L_0 = ℝ` and `L_1 = e^{iα}ℝ`, meeting
//! transversally at the origin, and the Hamiltonian is a real polynomial `H(x, y)`. With the
//! convention `X_H = J∇H` the Floer operator is
//!
//! ```text
//! F(u) = ∂_s u + J(∂_t u − X_H(u)) = ∂_s u + i ∂_t u + ∇H(u).
//! ```
//!
//! Since `J` is constant and the lines are totally geodesic, exponential maps are vector addition
//! and the quadratically corrected exponential needs no correction.
//!
//! Maps are sampled on the nodes of a uniform grid over `[s_min, s_max] × [0, 1]`. The equation
//! is discretized by the box scheme: one complex residual per cell, built from the four corner
//! values, with `∂_s`, `∂_t` and `u` all centred at the cell midpoint. Boundary conditions are
//! enforced exactly by the real parametrization of each column (one real unknown on each
//! boundary node, two in the interior), so every column carries `m = 2(n_t − 1)` real unknowns
//! and every column of cells `m` real equations.

mod banded;
mod energy;
mod gromov;
mod modes;
mod newton;
mod operator;
mod preglue;
mod probes;
mod quilt;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use num_complex::Complex64;

pub use banded::{Banded, SparseRows};
pub use energy::{
    check_convexity, check_quantization, energy_profile, EnergyProfile, DEGENERATE_F,
};
pub use gromov::{
    gromov_membership, map_distance, surjectivity_probe, BrokenPair, Candidate, GromovReport,
    ProbeCandidate, SurjectivityReport, LARGE_EPSILON, OUTLIER_DISTANCE,
};
pub use modes::{discrete_mode_factor, discrete_modes, exact_modes, mode_rate, ModeBasis};
pub use newton::{
    glue_pieces, min_norm_newton, newton_glue, right_inverse_bound, solve_piece, GluingReport,
    NewtonOutcome, PieceSide,
};
pub use operator::{
    apply_linearization, linearize, lp_norm_cells, residual, sup_norm, w1p_norm, EndCondition,
    ResidualField, SystemSpec,
};
pub use preglue::{cutoff, preglue, PreglueType};
pub use probes::{
    embedding_constant, quadratic_probe, trial_function, EmbeddingReport, QuadraticReport,
};
pub use quilt::{fold_patches, folded_residual, quilt_residual, QuiltedStrip};

/// Smallest admissible distance of `α` from `πℤ`.
pub const TRANSVERSALITY_MARGIN: f64 = 1e-2;

/// Relative tolerance for boundary nodes lying on their lines.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("angle {0} is too close to a multiple of π (near-non-transverse lines)")]
    NearNonTransverse(f64),
    #[error("Sobolev exponent must exceed 2, got {0}")]
    BadExponent(f64),
    #[error("need at least 8 nodes across the strip, got {0}")]
    GridTooCoarse(usize),
    #[error("grid parameters are inconsistent")]
    BadGrid,
    #[error("no mode coefficients given")]
    EmptyCoefficients,
    #[error("mode coefficient {0} is not real")]
    NonRealCoefficient(i32),
    #[error("maps live on different grids")]
    ShapeMismatch,
    #[error("boundary values are off their lines by {0}")]
    BoundaryViolation(f64),
    #[error("energy density is too small to fit a decay rate")]
    DegenerateFit,
    #[error("window does not fit inside the grid")]
    WindowOutsideGrid,
    #[error(
        "piece {piece} does not approach the intersection point (|u| = {value} on its glued end)"
    )]
    EndpointMismatch { piece: usize, value: f64 },
    #[error("grids are not aligned")]
    GridMisaligned,
    #[error("gluing length {0} does not fit the pieces")]
    BadGluingLength(f64),
    #[error("irregular configuration: the linearized operator is not surjective")]
    IrregularConfiguration,
    #[error("Newton iteration did not converge in {iterations} steps (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("discrete mode basis is singular")]
    ModeBasisSingular,
}

/// A uniform grid on `[s_min, s_min + (n_s − 1) h_s] × [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    s_min: f64,
    h_s: f64,
    n_s: usize,
    n_t: usize,
}

impl Grid {
    /// `s_max − s_min` must be a multiple of `h_s`.
    pub fn new(s_min: f64, s_max: f64, h_s: f64, n_t: usize) -> Result<Grid, NumericsError> {
        if n_t < 8 {
            return Err(NumericsError::GridTooCoarse(n_t));
        }
        if !(h_s > 0.0) || !(s_max > s_min) || !s_min.is_finite() || !s_max.is_finite() {
            return Err(NumericsError::BadGrid);
        }
        let steps = (s_max - s_min) / h_s;
        let n = libm::round(steps);
        if libm::fabs(steps - n) > 1e-9 * steps.max(1.0) {
            return Err(NumericsError::BadGrid);
        }
        Ok(Grid {
            s_min,
            h_s,
            n_s: n as usize + 1,
            n_t,
        })
    }

    /// Square cells: `h_s = h_t = 1/(n_t − 1)`.
    pub fn square(s_min: f64, s_max: f64, n_t: usize) -> Result<Grid, NumericsError> {
        if n_t < 8 {
            return Err(NumericsError::GridTooCoarse(n_t));
        }
        Grid::new(s_min, s_max, 1.0 / (n_t - 1) as f64, n_t)
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s(self.n_s - 1)
    }

    pub fn h_s(&self) -> f64 {
        self.h_s
    }

    pub fn h_t(&self) -> f64 {
        1.0 / (self.n_t - 1) as f64
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn s(&self, j: usize) -> f64 {
        self.s_min + j as f64 * self.h_s
    }

    pub fn t(&self, q: usize) -> f64 {
        q as f64 * self.h_t()
    }

    /// Real unknowns per column.
    pub fn m(&self) -> usize {
        2 * (self.n_t - 1)
    }

    /// The column index of `s`, if `s` is a node.
    pub fn column_of(&self, s: f64) -> Option<usize> {
        let x = (s - self.s_min) / self.h_s;
        let j = libm::round(x);
        if libm::fabs(x - j) > 1e-9 || j < 0.0 || j as usize >= self.n_s {
            return None;
        }
        Some(j as usize)
    }

    /// The same spacing over a different interval.
    pub fn with_range(&self, s_min: f64, s_max: f64) -> Result<Grid, NumericsError> {
        Grid::new(s_min, s_max, self.h_s, self.n_t)
    }

    pub(crate) fn same_spacing(&self, other: &Grid) -> bool {
        self.n_t == other.n_t && libm::fabs(self.h_s - other.h_s) <= 1e-15 * self.h_s
    }
}

/// A real polynomial `H(x, y) = Σ c x^i y^j`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Hamiltonian {
    terms: Vec<(u32, u32, f64)>,
}

impl Hamiltonian {
    pub fn zero() -> Hamiltonian {
        Hamiltonian::default()
    }

    pub fn new(terms: Vec<(u32, u32, f64)>) -> Hamiltonian {
        Hamiltonian {
            terms: terms.into_iter().filter(|t| t.2 != 0.0).collect(),
        }
    }

    /// `η (x³/3 − x y²)`, whose gradient is `η ū²`.
    pub fn cubic(eta: f64) -> Hamiltonian {
        Hamiltonian::new(vec![(3, 0, eta / 3.0), (1, 2, -eta)])
    }

    pub fn terms(&self) -> &[(u32, u32, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self, z: Complex64) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, c)| c * pow(z.re, i) * pow(z.im, j))
            .sum()
    }

    /// `∇H = H_x + i H_y`.
    pub fn gradient(&self, z: Complex64) -> Complex64 {
        let (mut gx, mut gy) = (0.0, 0.0);
        for &(i, j, c) in &self.terms {
            if i > 0 {
                gx += c * i as f64 * pow(z.re, i - 1) * pow(z.im, j);
            }
            if j > 0 {
                gy += c * j as f64 * pow(z.re, i) * pow(z.im, j - 1);
            }
        }
        Complex64::new(gx, gy)
    }

    /// `[[H_xx, H_xy], [H_xy, H_yy]]`.
    pub fn hessian(&self, z: Complex64) -> [[f64; 2]; 2] {
        let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
        for &(i, j, c) in &self.terms {
            let (fi, fj) = (i as f64, j as f64);
            if i > 1 {
                xx += c * fi * (fi - 1.0) * pow(z.re, i - 2) * pow(z.im, j);
            }
            if i > 0 && j > 0 {
                xy += c * fi * fj * pow(z.re, i - 1) * pow(z.im, j - 1);
            }
            if j > 1 {
                yy += c * fj * (fj - 1.0) * pow(z.re, i) * pow(z.im, j - 2);
            }
        }
        [[xx, xy], [xy, yy]]
    }
}

fn pow(x: f64, n: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

/// The physics of a strip problem: boundary angle, Hamiltonian and Sobolev exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct StripProblem {
    alpha: f64,
    hamiltonian: Hamiltonian,
    p: f64,
}

impl StripProblem {
    pub fn new(
        alpha: f64,
        hamiltonian: Hamiltonian,
        p: f64,
    ) -> Result<StripProblem, NumericsError> {
        if !(alpha > 0.0 && alpha < PI)
            || alpha < TRANSVERSALITY_MARGIN
            || PI - alpha < TRANSVERSALITY_MARGIN
        {
            return Err(NumericsError::NearNonTransverse(alpha));
        }
        if !(p > 2.0) {
            return Err(NumericsError::BadExponent(p));
        }
        Ok(StripProblem {
            alpha,
            hamiltonian,
            p,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn with_hamiltonian(&self, hamiltonian: Hamiltonian) -> StripProblem {
        StripProblem {
            hamiltonian,
            ..self.clone()
        }
    }

    /// Unit direction of `L_1`.
    pub fn l1(&self) -> Complex64 {
        Complex64::new(libm::cos(self.alpha), libm::sin(self.alpha))
    }

    /// Node values of a column from its real parameters.
    pub(crate) fn column_values(&self, x: &[f64], out: &mut [Complex64]) {
        let n = out.len();
        out[0] = Complex64::new(x[0], 0.0);
        for q in 1..n - 1 {
            out[q] = Complex64::new(x[2 * q - 1], x[2 * q]);
        }
        out[n - 1] = self.l1() * x[2 * n - 3];
    }

    /// Real parameters of a column; boundary values are projected onto their lines.
    pub(crate) fn column_params(&self, u: &[Complex64], out: &mut [f64]) {
        let n = u.len();
        out[0] = u[0].re;
        for q in 1..n - 1 {
            out[2 * q - 1] = u[q].re;
            out[2 * q] = u[q].im;
        }
        let d = self.l1();
        out[2 * n - 3] = u[n - 1].re * d.re + u[n - 1].im * d.im;
    }

    /// Derivative of the node value at row `q` with respect to parameter `k` of its column
    /// (only the parameters of that node are nonzero).
    pub(crate) fn node_directions(
        &self,
        q: usize,
        n_t: usize,
    ) -> ([usize; 2], [Complex64; 2], usize) {
        if q == 0 {
            (
                [0, 0],
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                1,
            )
        } else if q == n_t - 1 {
            ([2 * n_t - 3, 0], [self.l1(), Complex64::new(0.0, 0.0)], 1)
        } else {
            (
                [2 * q - 1, 2 * q],
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
                2,
            )
        }
    }
}

/// Complex node values on a grid, column by column (`values[j * n_t + q]`).
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMap {
    grid: Grid,
    values: Vec<Complex64>,
}

impl DiscreteMap {
    pub fn zero(grid: Grid) -> DiscreteMap {
        DiscreteMap {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n_s * grid.n_t],
        }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64, f64) -> Complex64) -> DiscreteMap {
        let mut values = Vec::with_capacity(grid.n_s * grid.n_t);
        for j in 0..grid.n_s {
            for q in 0..grid.n_t {
                values.push(f(grid.s(j), grid.t(q)));
            }
        }
        DiscreteMap { grid, values }
    }

    pub fn from_values(grid: Grid, values: Vec<Complex64>) -> Result<DiscreteMap, NumericsError> {
        if values.len() != grid.n_s * grid.n_t {
            return Err(NumericsError::ShapeMismatch);
        }
        Ok(DiscreteMap { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, j: usize, q: usize) -> Complex64 {
        self.values[j * self.grid.n_t + q]
    }

    pub fn set(&mut self, j: usize, q: usize, z: Complex64) {
        self.values[j * self.grid.n_t + q] = z;
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.values[j * self.grid.n_t..(j + 1) * self.grid.n_t]
    }

    /// Value at node `s` (which must be a grid node); zero outside the grid.
    pub fn at(&self, s: f64, q: usize) -> Complex64 {
        match self.grid.column_of(s) {
            Some(j) => self.get(j, q),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Largest distance of a boundary value from its line, relative to the largest value.
    pub fn boundary_defect(&self, problem: &StripProblem) -> f64 {
        let d = problem.l1();
        let n = self.grid.n_t;
        let mut worst: f64 = 0.0;
        for j in 0..self.grid.n_s {
            let a = self.get(j, 0);
            let b = self.get(j, n - 1);
            worst = worst
                .max(libm::fabs(a.im))
                .max(libm::fabs(b.re * d.im - b.im * d.re));
        }
        worst / self.sup().max(1.0)
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Real parameter vector, column by column.
    pub fn to_params(&self, problem: &StripProblem) -> Vec<f64> {
        let (n, m) = (self.grid.n_t, self.grid.m());
        let mut x = vec![0.0; m * self.grid.n_s];
        for j in 0..self.grid.n_s {
            problem.column_params(&self.values[j * n..(j + 1) * n], &mut x[j * m..(j + 1) * m]);
        }
        x
    }

    pub fn from_params(grid: Grid, problem: &StripProblem, x: &[f64]) -> DiscreteMap {
        let (n, m) = (grid.n_t, grid.m());
        let mut u = DiscreteMap::zero(grid);
        for j in 0..grid.n_s {
            problem.column_values(&x[j * m..(j + 1) * m], &mut u.values[j * n..(j + 1) * n]);
        }
        u
    }

    /// `(s, t) ↦ (−s, 1 − t)`, which preserves holomorphicity and swaps the two boundary lines.
    pub fn half_turn(&self) -> DiscreteMap {
        let g = self.grid;
        let grid = Grid {
            s_min: -g.s_max(),
            ..g
        };
        let mut out = DiscreteMap::zero(grid);
        for j in 0..g.n_s {
            for q in 0..g.n_t {
                out.set(g.n_s - 1 - j, g.n_t - 1 - q, self.get(j, q));
            }
        }
        out
    }

    /// The same values with the grid moved by `shift` in `s`.
    pub fn translated(&self, shift: f64) -> DiscreteMap {
        DiscreteMap {
            grid: Grid {
                s_min: self.grid.s_min + shift,
                ..self.grid
            },
            values: self.values.clone(),
        }
    }

    pub fn scaled(&self, c: f64) -> DiscreteMap {
        DiscreteMap {
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &DiscreteMap) -> Result<DiscreteMap, NumericsError> {
        if self.grid != other.grid {
            return Err(NumericsError::ShapeMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(DiscreteMap {
            grid: self.grid,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let g = Grid::square(-2.0, 2.0, 9).unwrap();
        assert_eq!(g.n_s(), 33);
        assert_eq!(g.m(), 16);
        assert_eq!(g.column_of(0.0), Some(16));
        assert_eq!(g.column_of(0.01), None);
        assert!(Grid::square(0.0, 1.0, 7).is_err());
        assert!(Grid::new(0.0, 1.0, 0.3, 9).is_err());
    }

    #[test]
    fn cubic_gradient_is_conjugate_square() {
        let h = Hamiltonian::cubic(0.05);
        let z = Complex64::new(0.3, -0.7);
        let g = h.gradient(z);
        let w = z.conj() * z.conj() * 0.05;
        assert!((g - w).norm() < 1e-15);
        let eps = 1e-6;
        let hess = h.hessian(z);
        let gx = (h.gradient(z + eps) - h.gradient(z - eps)) / (2.0 * eps);
        assert!((gx.re - hess[0][0]).abs() < 1e-8 && (gx.im - hess[0][1]).abs() < 1e-8);
    }

    #[test]
    fn transversality_and_exponent() {
        let h = Hamiltonian::zero();
        assert!(matches!(
            StripProblem::new(0.001, h.clone(), 4.0),
            Err(NumericsError::NearNonTransverse(_))
        ));
        assert!(matches!(
            StripProblem::new(PI - 0.001, h.clone(), 4.0),
            Err(NumericsError::NearNonTransverse(_))
        ));
        assert!(matches!(
            StripProblem::new(1.0, h.clone(), 2.0),
            Err(NumericsError::BadExponent(_))
        ));
        assert!(StripProblem::new(1.0, h, 4.0).is_ok());
    }

    #[test]
    fn parametrization_puts_boundary_on_lines() {
        let pb = StripProblem::new(0.7, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(0.0, 1.0, 9).unwrap();
        let x: Vec<f64> = (0..g.m() * g.n_s())
            .map(|k| (k as f64 * 0.37).sin())
            .collect();
        let u = DiscreteMap::from_params(g, &pb, &x);
        assert!(u.boundary_defect(&pb) < 1e-15);
        let y = u.to_params(&pb);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn half_turn_is_an_involution() {
        let g = Grid::square(-1.0, 2.0, 9).unwrap();
        let u = DiscreteMap::from_fn(g, |s, t| Complex64::new(s, t * t));
        let v = u.half_turn();
        assert_eq!(v.grid().s_min(), -2.0);
        assert_eq!(v.at(-2.0, 8), u.at(2.0, 0));
        assert_eq!(v.half_turn(), u);
    }
}
