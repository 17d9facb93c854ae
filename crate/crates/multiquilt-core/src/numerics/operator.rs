//! The discrete Floer operator, its linearization and grid norms.

use alloc::vec;
use alloc::vec::Vec;

use super::banded::SparseRows;
use super::modes::ModeBasis;
use super::{Complex64, DiscreteMap, Grid, NumericsError, StripProblem};

const BOUNDARY_CHECK: f64 = 1e-10;

/// One complex value per cell (`values[j * (n_t − 1) + q]` for the cell with lower-left node
/// `(j, q)`).
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl ResidualField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, j: usize, q: usize) -> Complex64 {
        self.values[j * (self.grid.n_t() - 1) + q]
    }

    /// Midpoint `s` of cell column `j`.
    pub fn s_mid(&self, j: usize) -> f64 {
        self.grid.s(j) + 0.5 * self.grid.h_s()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn l2(&self) -> f64 {
        lp_norm_cells(self, 2.0)
    }

    /// `self − other` on the same grid.
    pub fn difference(&self, other: &ResidualField) -> ResidualField {
        assert_eq!(self.grid, other.grid);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        ResidualField {
            grid: self.grid,
            values,
        }
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>) -> ResidualField {
        ResidualField { grid, values }
    }
}

/// Midpoint-rule `L^p` norm of a cell field.
pub fn lp_norm_cells(f: &ResidualField, p: f64) -> f64 {
    let w = f.grid.h_s() * f.grid.h_t();
    let s: f64 = f.values.iter().map(|z| libm::pow(z.norm(), p)).sum();
    libm::pow(w * s, 1.0 / p)
}

pub fn sup_norm(u: &DiscreteMap) -> f64 {
    u.sup()
}

fn node_derivative(get: impl Fn(usize) -> Complex64, i: usize, n: usize, h: f64) -> Complex64 {
    if i == 0 {
        (get(0) * -3.0 + get(1) * 4.0 - get(2)) / (2.0 * h)
    } else if i == n - 1 {
        (get(n - 1) * 3.0 - get(n - 2) * 4.0 + get(n - 3)) / (2.0 * h)
    } else {
        (get(i + 1) - get(i - 1)) / (2.0 * h)
    }
}

/// `(Σ w (|u|^p + |∂_s u|^p + |∂_t u|^p))^{1/p}` with trapezoid weights and second-order
/// node differences.
pub fn w1p_norm(u: &DiscreteMap, p: f64) -> f64 {
    let g = u.grid();
    let (ns, nt) = (g.n_s(), g.n_t());
    let mut total = 0.0;
    for j in 0..ns {
        let ws = if j == 0 || j == ns - 1 { 0.5 } else { 1.0 } * g.h_s();
        for q in 0..nt {
            let wt = if q == 0 || q == nt - 1 { 0.5 } else { 1.0 } * g.h_t();
            let ds = node_derivative(|k| u.get(k, q), j, ns, g.h_s());
            let dt = node_derivative(|k| u.get(j, k), q, nt, g.h_t());
            let v = libm::pow(u.get(j, q).norm(), p)
                + libm::pow(ds.norm(), p)
                + libm::pow(dt.norm(), p);
            total += ws * wt * v;
        }
    }
    libm::pow(total, 1.0 / p)
}

/// Corner sums of a cell: `(column j pair, column j+1 pair, lower pair, upper pair)`.
///
/// The pairs are summed along `t` first so that reflecting `t ↦ 1 − t` reproduces the same
/// floating-point values.
#[inline]
pub(crate) fn cell_parts(u: &DiscreteMap, j: usize, q: usize) -> (Complex64, Complex64, Complex64) {
    let (a, b) = (u.get(j, q), u.get(j, q + 1));
    let (c, d) = (u.get(j + 1, q), u.get(j + 1, q + 1));
    let p0 = a + b;
    let p1 = c + d;
    let dt = (b + d) - (a + c);
    (p1 - p0, dt, p0 + p1)
}

/// The cell residual of `∂_s u + σ i ∂_t u + ∇H(u)`.
pub(crate) fn residual_with_sign(
    problem: &StripProblem,
    u: &DiscreteMap,
    sigma: f64,
) -> ResidualField {
    let g = *u.grid();
    let (hs, ht) = (g.h_s(), g.h_t());
    let mut values = Vec::with_capacity((g.n_s() - 1) * (g.n_t() - 1));
    let i = Complex64::new(0.0, sigma);
    for j in 0..g.n_s() - 1 {
        for q in 0..g.n_t() - 1 {
            let (ds, dt, sum) = cell_parts(u, j, q);
            let avg = sum * 0.25;
            values.push(
                ds / (2.0 * hs) + i * (dt / (2.0 * ht)) + problem.hamiltonian().gradient(avg),
            );
        }
    }
    ResidualField { grid: g, values }
}

/// The cell residual of `F(u) = ∂_s u + i ∂_t u + ∇H(u)`.
pub fn residual(problem: &StripProblem, u: &DiscreteMap) -> Result<ResidualField, NumericsError> {
    let defect = u.boundary_defect(problem);
    if defect > BOUNDARY_CHECK {
        return Err(NumericsError::BoundaryViolation(defect));
    }
    Ok(residual_with_sign(problem, u, 1.0))
}

/// `dF(u) v = ∂_s v + i ∂_t v + Hess H(u) v` on cells.
pub fn apply_linearization(
    problem: &StripProblem,
    u: &DiscreteMap,
    v: &DiscreteMap,
) -> Result<ResidualField, NumericsError> {
    if u.grid() != v.grid() {
        return Err(NumericsError::ShapeMismatch);
    }
    let g = *u.grid();
    let (hs, ht) = (g.h_s(), g.h_t());
    let mut values = Vec::with_capacity((g.n_s() - 1) * (g.n_t() - 1));
    for j in 0..g.n_s() - 1 {
        for q in 0..g.n_t() - 1 {
            let (_, _, su) = cell_parts(u, j, q);
            let (ds, dt, sv) = cell_parts(v, j, q);
            let h = problem.hamiltonian().hessian(su * 0.25);
            let av = sv * 0.25;
            let hv = Complex64::new(
                h[0][0] * av.re + h[0][1] * av.im,
                h[1][0] * av.re + h[1][1] * av.im,
            );
            values.push(ds / (2.0 * hs) + Complex64::i() * (dt / (2.0 * ht)) + hv);
        }
    }
    Ok(ResidualField { grid: g, values })
}

/// How a column at one end of the strip is constrained.
#[derive(Clone, Debug, PartialEq)]
pub enum EndCondition {
    /// No condition.
    Free,
    /// The mode coefficients entering through this end are prescribed: at the left end the
    /// modes decaying in `s`, at the right end the modes growing in `s`.
    Transparent(Vec<f64>),
}

/// A discrete boundary value problem: the cell equations plus end conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub left: EndCondition,
    pub right: EndCondition,
}

impl SystemSpec {
    pub fn free() -> SystemSpec {
        SystemSpec {
            left: EndCondition::Free,
            right: EndCondition::Free,
        }
    }

    /// Transparent ends matching the incoming modes of `u` at both ends.
    pub fn matching(problem: &StripProblem, u: &DiscreteMap) -> Result<SystemSpec, NumericsError> {
        let basis = ModeBasis::new(problem, u.grid())?;
        let g = u.grid();
        let m = g.m();
        let x = u.to_params(problem);
        let left = project(&basis, true, &x[..m]);
        let right = project(&basis, false, &x[(g.n_s() - 1) * m..]);
        Ok(SystemSpec {
            left: EndCondition::Transparent(left),
            right: EndCondition::Transparent(right),
        })
    }

    /// Transparent ends taking the incoming data of `left_from` at the left and of `right_from`
    /// at the right (each a single column, as node values).
    pub fn from_columns(
        problem: &StripProblem,
        grid: &Grid,
        left_from: &[Complex64],
        right_from: &[Complex64],
    ) -> Result<SystemSpec, NumericsError> {
        let basis = ModeBasis::new(problem, grid)?;
        let mut xl = vec![0.0; grid.m()];
        let mut xr = vec![0.0; grid.m()];
        problem.column_params(left_from, &mut xl);
        problem.column_params(right_from, &mut xr);
        Ok(SystemSpec {
            left: EndCondition::Transparent(project(&basis, true, &xl)),
            right: EndCondition::Transparent(project(&basis, false, &xr)),
        })
    }
}

fn project(basis: &ModeBasis, decaying: bool, x: &[f64]) -> Vec<f64> {
    basis
        .rows(decaying)
        .iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// The assembled residual and Jacobian of a [`SystemSpec`] in the real parameters.
pub(crate) struct System<'a> {
    problem: &'a StripProblem,
    grid: Grid,
    spec: &'a SystemSpec,
    left_rows: Vec<Vec<f64>>,
    right_rows: Vec<Vec<f64>>,
    left_factors: Vec<f64>,
    right_factors: Vec<f64>,
}

impl<'a> System<'a> {
    pub(crate) fn new(
        problem: &'a StripProblem,
        grid: Grid,
        spec: &'a SystemSpec,
    ) -> Result<System<'a>, NumericsError> {
        let needs_basis = spec.left != EndCondition::Free || spec.right != EndCondition::Free;
        let (mut left_rows, mut right_rows) = (Vec::new(), Vec::new());
        let (mut left_factors, mut right_factors) = (Vec::new(), Vec::new());
        if needs_basis {
            let basis = ModeBasis::new(problem, &grid)?;
            if let EndCondition::Transparent(v) = &spec.left {
                (left_rows, left_factors) = scaled_rows(basis.rows(true), grid.h_s());
                if v.len() != left_rows.len() {
                    return Err(NumericsError::ShapeMismatch);
                }
            }
            if let EndCondition::Transparent(v) = &spec.right {
                (right_rows, right_factors) = scaled_rows(basis.rows(false), grid.h_s());
                if v.len() != right_rows.len() {
                    return Err(NumericsError::ShapeMismatch);
                }
            }
        }
        Ok(System {
            problem,
            grid,
            spec,
            left_rows,
            right_rows,
            left_factors,
            right_factors,
        })
    }

    pub(crate) fn grid(&self) -> Grid {
        self.grid
    }

    /// Residual vector: left end rows, cell rows column by column, right end rows.
    pub(crate) fn residual(&self, x: &[f64]) -> Vec<f64> {
        let g = self.grid;
        let m = g.m();
        let u = DiscreteMap::from_params(g, self.problem, x);
        let f = residual_with_sign(self.problem, &u, 1.0);
        let mut out = Vec::with_capacity(m * g.n_s());
        if let EndCondition::Transparent(target) = &self.spec.left {
            end_residual(
                &self.left_rows,
                &self.left_factors,
                target,
                &x[..m],
                &mut out,
            );
        }
        for z in f.values() {
            out.push(z.re);
            out.push(z.im);
        }
        if let EndCondition::Transparent(target) = &self.spec.right {
            end_residual(
                &self.right_rows,
                &self.right_factors,
                target,
                &x[(g.n_s() - 1) * m..],
                &mut out,
            );
        }
        out
    }

    pub(crate) fn jacobian(&self, x: &[f64]) -> SparseRows {
        let g = self.grid;
        let (m, nt) = (g.m(), g.n_t());
        let u = DiscreteMap::from_params(g, self.problem, x);
        let mut a = SparseRows::new(m * g.n_s());
        for r in &self.left_rows {
            a.push_row(0, r.clone());
        }
        let (hs, ht) = (g.h_s(), g.h_t());
        for j in 0..g.n_s() - 1 {
            let mut block = vec![vec![0.0; 2 * m]; m];
            for q in 0..nt - 1 {
                let (_, _, sum) = cell_parts(&u, j, q);
                let h = self.problem.hamiltonian().hessian(sum * 0.25);
                for (dj, cs) in [(0usize, -1.0), (1, 1.0)] {
                    for (dq, ct) in [(0usize, -1.0), (1, 1.0)] {
                        let cs = cs / (2.0 * hs);
                        let ct = ct / (2.0 * ht);
                        // c_s I + c_t J + H/4, with J the rotation by a quarter turn.
                        let mat = [
                            [cs + 0.25 * h[0][0], -ct + 0.25 * h[0][1]],
                            [ct + 0.25 * h[1][0], cs + 0.25 * h[1][1]],
                        ];
                        let (idx, dirs, cnt) = self.problem.node_directions(q + dq, nt);
                        for k in 0..cnt {
                            let col = dj * m + idx[k];
                            let d = dirs[k];
                            block[2 * q][col] += mat[0][0] * d.re + mat[0][1] * d.im;
                            block[2 * q + 1][col] += mat[1][0] * d.re + mat[1][1] * d.im;
                        }
                    }
                }
            }
            for row in block {
                a.push_row(j * m, row);
            }
        }
        for r in &self.right_rows {
            a.push_row((g.n_s() - 1) * m, r.clone());
        }
        a
    }

    /// Weights turning the residual vector into an `L²` grid vector.
    pub(crate) fn weight(&self) -> f64 {
        libm::sqrt(self.grid.h_s() * self.grid.h_t())
    }
}

/// Rows normalized to unit length and divided by `h`, with the factors applied.
fn scaled_rows(rows: Vec<Vec<f64>>, h: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    rows.into_iter()
        .map(|r| {
            let f = 1.0 / (libm::sqrt(r.iter().map(|x| x * x).sum::<f64>()) * h);
            (r.into_iter().map(|x| x * f).collect(), f)
        })
        .unzip()
}

fn end_residual(rows: &[Vec<f64>], factors: &[f64], target: &[f64], x: &[f64], out: &mut Vec<f64>) {
    for ((r, f), t) in rows.iter().zip(factors).zip(target) {
        let v: f64 = r.iter().zip(x).map(|(a, b)| a * b).sum();
        out.push(v - f * t);
    }
}

/// The Jacobian of the cell residual in the real parameters, with free ends.
pub fn linearize(problem: &StripProblem, u: &DiscreteMap) -> Result<SparseRows, NumericsError> {
    let spec = SystemSpec::free();
    let sys = System::new(problem, *u.grid(), &spec)?;
    Ok(sys.jacobian(&u.to_params(problem)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{exact_modes, Hamiltonian};
    use alloc::collections::BTreeMap;
    use core::f64::consts::PI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mode(k: i32) -> BTreeMap<i32, Complex64> {
        let mut c = BTreeMap::new();
        c.insert(k, Complex64::new(1.0, 0.0));
        c
    }

    #[test]
    fn constant_at_intersection_has_zero_residual() {
        let pb = StripProblem::new(1.0, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(-1.0, 1.0, 9).unwrap();
        assert_eq!(residual(&pb, &DiscreteMap::zero(g)).unwrap().sup(), 0.0);
    }

    #[test]
    fn exact_mode_residual_is_second_order() {
        let pb = StripProblem::new(PI / 2.0, Hamiltonian::zero(), 4.0).unwrap();
        let mut prev = None;
        for nt in [9, 17, 33, 65] {
            let g = Grid::square(-1.0, 1.0, nt).unwrap();
            let u = exact_modes(pb.alpha(), &mode(0), g).unwrap();
            let r = lp_norm_cells(&residual(&pb, &u).unwrap(), 4.0);
            if let Some(p) = prev {
                let rate = libm::log2(p / r);
                assert!((rate - 2.0).abs() < 0.2, "rate {rate}");
            }
            prev = Some(r);
        }
    }

    #[test]
    fn off_line_boundary_is_rejected() {
        let pb = StripProblem::new(1.0, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(-1.0, 1.0, 9).unwrap();
        let u = DiscreteMap::from_fn(g, |_, _| Complex64::new(0.0, 1.0));
        assert!(matches!(
            residual(&pb, &u),
            Err(NumericsError::BoundaryViolation(_))
        ));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let pb = StripProblem::new(1.1, Hamiltonian::cubic(0.05), 4.0).unwrap();
        let g = Grid::square(-1.0, 1.0, 9).unwrap();
        let spec = SystemSpec::free();
        let sys = System::new(&pb, g, &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..g.m() * g.n_s())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let a = sys.jacobian(&x);
        for _ in 0..5 {
            let v: Vec<f64> = (0..x.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let av = a.mul(&v);
            for eps in [1e-3, 1e-4, 1e-5] {
                let xp: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + eps * b).collect();
                let xm: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - eps * b).collect();
                let (rp, rm) = (sys.residual(&xp), sys.residual(&xm));
                let fd: Vec<f64> = rp
                    .iter()
                    .zip(&rm)
                    .map(|(p, m)| (p - m) / (2.0 * eps))
                    .collect();
                let err = fd
                    .iter()
                    .zip(&av)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let norm = av.iter().map(|a| a * a).sum::<f64>().sqrt();
                assert!(err <= 1e-6 * norm, "{err} {norm}");
            }
        }
    }

    #[test]
    fn constant_norms() {
        let g = Grid::square(-1.0, 1.0, 9).unwrap();
        let u = DiscreteMap::from_fn(g, |_, _| Complex64::new(2.0, 0.0));
        assert!((w1p_norm(&u, 4.0) - 2.0 * libm::pow(2.0, 0.25)).abs() < 1e-12);
    }
}
