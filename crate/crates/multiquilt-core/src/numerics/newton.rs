//! Minimum-norm Newton iteration and gluing.
//!
//! Each Newton step is the minimum-norm solution of the linearized equation, so corrections
//! stay in the range of the adjoint (the discrete counterpart of correcting within the image of
//! a right inverse). The right-inverse bound `Ĉ = 1/σ_min(A)` is measured in the `L²` grid norm
//! on both sides.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::banded::{min_norm_solve, smallest_singular_value};
use super::operator::System;
use super::preglue::{preglue, PreglueType};
use super::{
    discrete_modes, lp_norm_cells, residual, Complex64, DiscreteMap, EndCondition, Grid,
    NumericsError, StripProblem, SystemSpec,
};

/// Iterates and final state of a Newton run.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome {
    pub solution: DiscreteMap,
    /// Sup norm of the system residual before each step and after the last.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(libm::fabs(*x)))
}

fn l2(v: &[f64], weight: f64) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum::<f64>()) * weight
}

/// Newton's method with minimum-norm steps until the sup of the residual is below `tol`.
pub fn min_norm_newton(
    problem: &StripProblem,
    spec: &SystemSpec,
    start: &DiscreteMap,
    tol: f64,
    max_iterations: usize,
) -> Result<NewtonOutcome, NumericsError> {
    let sys = System::new(problem, *start.grid(), spec)?;
    let mut x = start.to_params(problem);
    let mut residuals = Vec::new();
    for it in 0..=max_iterations {
        let r = sys.residual(&x);
        let size = sup(&r);
        residuals.push(size);
        if size < tol {
            return Ok(NewtonOutcome {
                solution: DiscreteMap::from_params(sys.grid(), problem, &x),
                residuals,
                iterations: it,
            });
        }
        if it == max_iterations || !size.is_finite() {
            break;
        }
        let a = sys.jacobian(&x);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let delta = min_norm_solve(&a, &rhs)?;
        for (xi, d) in x.iter_mut().zip(&delta) {
            *xi += d;
        }
    }
    Err(NumericsError::NoConvergence {
        iterations: max_iterations,
        residual: *residuals.last().unwrap_or(&f64::NAN),
    })
}

/// `Ĉ = 1/σ_min` of the system Jacobian at `u`.
pub fn right_inverse_bound(
    problem: &StripProblem,
    spec: &SystemSpec,
    u: &DiscreteMap,
) -> Result<f64, NumericsError> {
    let sys = System::new(problem, *u.grid(), spec)?;
    let a = sys.jacobian(&u.to_params(problem));
    Ok(1.0 / smallest_singular_value(&a)?)
}

/// Which end of a gluing a piece sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceSide {
    /// Defined on `[−L, S]`, decaying as `s → S`.
    Left,
    /// Defined on `[−S, L]`, decaying as `s → −S`.
    Right,
}

/// A solution of the nonlinear problem on one side of the neck, continued from the slowest
/// discrete mode decaying towards the neck, scaled to sup norm `amplitude`.
///
/// The incoming data at the free end is that of the mode; the end facing the neck admits no
/// modes growing towards it.
pub fn solve_piece(
    problem: &StripProblem,
    grid: Grid,
    side: PieceSide,
    amplitude: f64,
    tol: f64,
) -> Result<DiscreteMap, NumericsError> {
    let k = match side {
        PieceSide::Left => -1,
        PieceSide::Right => 0,
    };
    let mut c = BTreeMap::new();
    c.insert(k, Complex64::new(1.0, 0.0));
    let mode = discrete_modes(problem.alpha(), &c, grid)?;
    let start = mode.scaled(amplitude / mode.sup());
    let matched = SystemSpec::matching(problem, &start)?;
    let spec = match side {
        PieceSide::Left => SystemSpec {
            left: matched.left,
            right: zeros_like(&matched.right),
        },
        PieceSide::Right => SystemSpec {
            left: zeros_like(&matched.left),
            right: matched.right,
        },
    };
    Ok(min_norm_newton(problem, &spec, &start, tol, 30)?.solution)
}

fn zeros_like(e: &EndCondition) -> EndCondition {
    match e {
        EndCondition::Free => EndCondition::Free,
        EndCondition::Transparent(v) => EndCondition::Transparent(alloc::vec![0.0; v.len()]),
    }
}

/// The outcome of gluing at one length.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingReport {
    pub r: f64,
    /// `ε(R) = ‖F(u_R)‖_{0,p}`.
    pub preglue_residual: f64,
    /// `‖F(u_R)‖` in the `L²` grid norm of the full system.
    pub preglue_residual_l2: f64,
    pub c_hat: f64,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// `‖x − x_1‖` in the `L²` grid norm.
    pub distance: f64,
    /// `2 Ĉ ‖F(u_R)‖`.
    pub ift_bound: f64,
    pub ift_holds: bool,
}

/// Newton's method from a preglued map, with transparent ends carrying its own incoming data.
pub fn newton_glue(
    problem: &StripProblem,
    u_r: &DiscreteMap,
    r: f64,
    tol: f64,
) -> Result<(DiscreteMap, GluingReport), NumericsError> {
    let spec = SystemSpec::matching(problem, u_r)?;
    let sys = System::new(problem, *u_r.grid(), &spec)?;
    let x1 = u_r.to_params(problem);
    let f1 = sys.residual(&x1);
    let w = sys.weight();
    let preglue_residual = lp_norm_cells(&residual(problem, u_r)?, problem.p());
    let preglue_residual_l2 = l2(&f1, w);
    let c_hat = right_inverse_bound(problem, &spec, u_r)?;
    let out = min_norm_newton(problem, &spec, u_r, tol, 30)?;
    let x = out.solution.to_params(problem);
    let diff: Vec<f64> = x.iter().zip(&x1).map(|(a, b)| a - b).collect();
    let distance = l2(&diff, w);
    let ift_bound = 2.0 * c_hat * preglue_residual_l2;
    let report = GluingReport {
        r,
        preglue_residual,
        preglue_residual_l2,
        c_hat,
        residuals: out.residuals.clone(),
        iterations: out.iterations,
        distance,
        ift_bound,
        ift_holds: distance <= ift_bound,
    };
    Ok((out.solution, report))
}

/// Preglue (type 3) and run [`newton_glue`].
pub fn glue_pieces(
    problem: &StripProblem,
    u1: &DiscreteMap,
    u2: &DiscreteMap,
    r: f64,
    endpoint_tol: f64,
    tol: f64,
) -> Result<(DiscreteMap, GluingReport), NumericsError> {
    let u_r = preglue(u1, u2, r, PreglueType::Type3, endpoint_tol)?;
    newton_glue(problem, &u_r, r, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{apply_linearization, exact_modes, Hamiltonian};
    use core::f64::consts::PI;

    fn pieces(pb: &StripProblem, nt: usize) -> (DiscreteMap, DiscreteMap) {
        let u1 = solve_piece(
            pb,
            Grid::square(-2.0, 8.0, nt).unwrap(),
            PieceSide::Left,
            0.5,
            1e-12,
        )
        .unwrap();
        let u2 = solve_piece(
            pb,
            Grid::square(-8.0, 2.0, nt).unwrap(),
            PieceSide::Right,
            0.5,
            1e-12,
        )
        .unwrap();
        (u1, u2)
    }

    #[test]
    fn linear_problem_converges_in_one_step() {
        let pb = StripProblem::new(PI / 2.0, Hamiltonian::zero(), 4.0).unwrap();
        let (u1, u2) = pieces(&pb, 9);
        let (_, rep) = glue_pieces(&pb, &u1, &u2, 6.0, 1e-3, 1e-10).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.ift_holds);
    }

    #[test]
    fn cubic_gluing_converges_within_the_ift_bound() {
        let pb = StripProblem::new(PI / 2.0, Hamiltonian::cubic(0.05), 4.0).unwrap();
        let (u1, u2) = pieces(&pb, 9);
        let (u, rep) = glue_pieces(&pb, &u1, &u2, 10.0, 1e-3, 1e-10).unwrap();
        assert!(*rep.residuals.last().unwrap() < 1e-10);
        assert!(rep.ift_holds, "{} > {}", rep.distance, rep.ift_bound);
        assert!(residual(&pb, &u).unwrap().sup() < 1e-10);
    }

    #[test]
    fn translation_direction_is_in_the_kernel() {
        let pb = StripProblem::new(PI / 2.0, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(-1.0, 1.0, 17).unwrap();
        let mut c = BTreeMap::new();
        c.insert(-1, Complex64::new(1.0, 0.0));
        let u = discrete_modes(pb.alpha(), &c, g).unwrap();
        let (_, e) = crate::numerics::discrete_mode_factor(pb.alpha(), -1, &g);
        let v = u.scaled(libm::log(e) / g.h_s());
        assert!(apply_linearization(&pb, &u, &v).unwrap().sup() < 1e-6);
        // The continuous mode: ∂_s u is a kernel direction up to discretization error.
        let w = exact_modes(pb.alpha(), &c, g).unwrap();
        let dw = w.scaled(crate::numerics::mode_rate(pb.alpha(), -1));
        assert!(apply_linearization(&pb, &w, &dw).unwrap().sup() < 0.05);
    }

    #[test]
    fn transparent_system_is_regular() {
        let pb = StripProblem::new(PI / 2.0, Hamiltonian::zero(), 4.0).unwrap();
        let g = Grid::square(0.0, 1.0, 9).unwrap();
        let u = DiscreteMap::zero(g);
        let spec = SystemSpec::matching(&pb, &u).unwrap();
        assert!(right_inverse_bound(&pb, &spec, &u).unwrap().is_finite());
    }
}
