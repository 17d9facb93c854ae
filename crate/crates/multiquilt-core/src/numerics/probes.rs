//! Randomized probes of the Sobolev embedding constant and of the quadratic estimate.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::{cell_parts, lp_norm_cells};
use super::{
    apply_linearization, mode_rate, w1p_norm, Complex64, DiscreteMap, Grid, NumericsError,
    StripProblem,
};

/// A random smooth map compatible with the boundary lines: the envelope `(1 − x²)³`,
/// `x = (s − c)/w`, times `Σ_{k=−2}^{1} a_k cos(ω_k (s − c) + φ_k) e^{i λ_k t}` with real
/// `a_k`.
///
/// Half of the draws are centred well inside the grid (away from both ends by the width), the
/// other half within twice the width of a random end. Centres are snapped to nodes, so the law
/// of the sampled values does not depend on the length of the grid once it exceeds a few widths.
pub fn trial_function<R: Rng + ?Sized>(alpha: f64, grid: &Grid, rng: &mut R) -> DiscreteMap {
    let w = rng.gen_range(0.5..2.0);
    let near_end = rng.gen_bool(0.5);
    let left_end = rng.gen_bool(0.5);
    let offset = rng.gen_range(0.0..1.0);
    let terms: Vec<(f64, f64, f64, f64)> = (-2..=1)
        .map(|k| {
            (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..3.0),
                rng.gen_range(0.0..2.0 * PI),
                mode_rate(alpha, k),
            )
        })
        .collect();
    let (a, b) = (grid.s_min(), grid.s_max());
    let c = if near_end {
        if left_end {
            a + 2.0 * w * offset
        } else {
            b - 2.0 * w * offset
        }
    } else {
        let lo = a + w;
        let hi = (b - w).max(lo);
        lo + (hi - lo) * offset
    };
    let c = grid.s(libm::round((c - a) / grid.h_s()) as usize);
    DiscreteMap::from_fn(*grid, |s, t| {
        let x = (s - c) / w;
        if libm::fabs(x) >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let env = (1.0 - x * x) * (1.0 - x * x) * (1.0 - x * x);
        let mut z = Complex64::new(0.0, 0.0);
        for &(amp, om, ph, lam) in &terms {
            z += Complex64::from_polar(amp * libm::cos(om * (s - c) + ph), lam * t);
        }
        z * env
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingReport {
    pub s_half: f64,
    pub p: f64,
    pub trials: usize,
    /// `max ‖f‖_∞ / ‖f‖_{1,p}` over the trials.
    pub max_ratio: f64,
    /// The same ratio for a constant function, measured on the grid.
    pub constant_ratio: f64,
    /// `(2S)^{−1/p}`, the exact ratio for constants on `[−S, S] × [0, 1]`.
    pub constant_exact: f64,
}

/// Largest ratio `‖f‖_∞ / ‖f‖_{1,p}` over random trial functions on `[−S, S] × [0, 1]`.
pub fn embedding_constant(
    alpha: f64,
    s_half: f64,
    p: f64,
    n_t: usize,
    trials: usize,
    seed: u64,
) -> Result<EmbeddingReport, NumericsError> {
    if !(p > 2.0) {
        return Err(NumericsError::BadExponent(p));
    }
    let grid = Grid::square(-s_half, s_half, n_t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio: f64 = 0.0;
    for _ in 0..trials {
        let f = trial_function(alpha, &grid, &mut rng);
        let n = w1p_norm(&f, p);
        if n > 0.0 {
            max_ratio = max_ratio.max(f.sup() / n);
        }
    }
    let one = DiscreteMap::from_fn(grid, |_, _| Complex64::new(1.0, 0.0));
    Ok(EmbeddingReport {
        s_half,
        p,
        trials,
        max_ratio,
        constant_ratio: 1.0 / w1p_norm(&one, p),
        constant_exact: libm::pow(2.0 * s_half, -1.0 / p),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticReport {
    pub samples: usize,
    /// `max ‖(dF(u + ξ) − dF(u)) v‖_{0,p} / (‖ξ‖_{1,p} ‖v‖_{1,p})`.
    pub c_hat: f64,
    /// The same samples bounded through the cellwise operator norm of the Hessian change.
    pub bound: f64,
}

fn op_norm(h: [[f64; 2]; 2]) -> f64 {
    // Largest singular value of a real 2×2 matrix.
    let [[a, b], [c, d]] = h;
    let s = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    libm::sqrt(0.5 * (s + libm::sqrt((s * s - 4.0 * det * det).max(0.0))))
}

/// Randomized estimate of the Lipschitz constant of `ξ ↦ dF(u + ξ)` at radius `radius`.
pub fn quadratic_probe(
    problem: &StripProblem,
    u: &DiscreteMap,
    samples: usize,
    radius: f64,
    seed: u64,
) -> Result<QuadraticReport, NumericsError> {
    let grid = *u.grid();
    let p = problem.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut c_hat, mut bound): (f64, f64) = (0.0, 0.0);
    for _ in 0..samples {
        let xi = trial_function(problem.alpha(), &grid, &mut rng);
        let v = trial_function(problem.alpha(), &grid, &mut rng);
        let (nx, nv) = (w1p_norm(&xi, p), w1p_norm(&v, p));
        if nx == 0.0 || nv == 0.0 {
            continue;
        }
        let xi = xi.scaled(radius / nx);
        let v = v.scaled(1.0 / nv);
        let moved = u.add(&xi)?;
        let a = apply_linearization(problem, &moved, &v)?;
        let b = apply_linearization(problem, u, &v)?;
        let diff = a.difference(&b);
        c_hat = c_hat.max(lp_norm_cells(&diff, p) / radius);

        let nc = grid.n_t() - 1;
        let mut worst: f64 = 0.0;
        let mut vp = 0.0;
        for j in 0..grid.n_s() - 1 {
            for q in 0..nc {
                let (_, _, su) = cell_parts(u, j, q);
                let (_, _, sm) = cell_parts(&moved, j, q);
                let (_, _, sv) = cell_parts(&v, j, q);
                let h0 = problem.hamiltonian().hessian(su * 0.25);
                let h1 = problem.hamiltonian().hessian(sm * 0.25);
                let dh = [
                    [h1[0][0] - h0[0][0], h1[0][1] - h0[0][1]],
                    [h1[1][0] - h0[1][0], h1[1][1] - h0[1][1]],
                ];
                worst = worst.max(op_norm(dh));
                vp += libm::pow((sv * 0.25).norm(), p);
            }
        }
        let vbar = libm::pow(vp * grid.h_s() * grid.h_t(), 1.0 / p);
        bound = bound.max(worst * vbar / radius);
    }
    Ok(QuadraticReport {
        samples,
        c_hat,
        bound,
    })
}
