use std::collections::BTreeMap;
use std::f64::consts::PI;

use multiquilt_core::numerics::{
    check_convexity, check_quantization, discrete_modes, embedding_constant, energy_profile,
    exact_modes, glue_pieces, lp_norm_cells, mode_rate, preglue as preglue_maps, residual,
    solve_piece, surjectivity_probe, BrokenPair, Complex64, DiscreteMap, Grid, Hamiltonian,
    NumericsError, PieceSide, PreglueType, StripProblem,
};
use serde::Serialize;
use serde_json::{json, Value};

use super::{to_value, write_file};
use crate::cli::{
    CliError, DecayArgs, EmbedArgs, GlueNewtonArgs, PreglueArgs, ProblemArgs, SurjectArgs,
};
use crate::report::columns;

/// How close the glued ends of the pieces must come to the intersection point.
const ENDPOINT_TOL: f64 = 1e-3;
/// Newton tolerance for the pieces themselves.
const PIECE_TOL: f64 = 1e-12;

fn numerics(e: NumericsError) -> CliError {
    CliError::domain("numerics", e)
}

fn problem(a: &ProblemArgs) -> Result<StripProblem, CliError> {
    let h = if a.eta == 0.0 {
        Hamiltonian::zero()
    } else {
        Hamiltonian::cubic(a.eta)
    };
    StripProblem::new(a.alpha, h, a.p).map_err(numerics)
}

fn pieces(
    pb: &StripProblem,
    n_t: usize,
    piece: f64,
    amplitude: f64,
) -> Result<(DiscreteMap, DiscreteMap), CliError> {
    let g1 = Grid::square(-2.0, piece, n_t).map_err(numerics)?;
    let g2 = Grid::square(-piece, 2.0, n_t).map_err(numerics)?;
    let u1 = solve_piece(pb, g1, PieceSide::Left, amplitude, PIECE_TOL).map_err(numerics)?;
    let u2 = solve_piece(pb, g2, PieceSide::Right, amplitude, PIECE_TOL).map_err(numerics)?;
    Ok((u1, u2))
}

fn check_lengths(lengths: &[f64]) -> Result<(), CliError> {
    if lengths.is_empty() || lengths.iter().any(|r| !r.is_finite()) {
        return Err(CliError::Usage(String::from(
            "--lengths needs at least one finite value",
        )));
    }
    Ok(())
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn spread(xs: &[f64]) -> f64 {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi / lo - 1.0
}

#[derive(Serialize)]
struct Quantization {
    t: f64,
    energy: f64,
    bound: f64,
    ratio: f64,
}

pub fn decay(a: &DecayArgs, provenance: &str) -> Result<Value, CliError> {
    StripProblem::new(a.alpha, Hamiltonian::zero(), 4.0).map_err(numerics)?;
    let grid = Grid::square(-a.s_half, a.s_half, a.n_t).map_err(numerics)?;
    let coeffs: BTreeMap<i32, Complex64> = a
        .modes
        .iter()
        .map(|&(k, c)| (k, Complex64::new(c, 0.0)))
        .collect();
    let u = if a.discrete {
        discrete_modes(a.alpha, &coeffs, grid)
    } else {
        exact_modes(a.alpha, &coeffs, grid)
    }
    .map_err(numerics)?;
    let profile = energy_profile(&u, (-a.window, a.window)).map_err(numerics)?;
    let kappa_exact = 2.0
        * coeffs
            .iter()
            .filter(|(_, c)| c.re != 0.0)
            .map(|(&k, _)| mode_rate(a.alpha, k).abs())
            .fold(f64::INFINITY, f64::min);
    let convexity = check_convexity(&profile);
    let mut quantization = Vec::with_capacity(a.times.len());
    for &t in &a.times {
        let (energy, bound) = check_quantization(&u, profile.kappa, t).map_err(numerics)?;
        quantization.push(Quantization {
            t,
            energy,
            bound,
            ratio: energy / bound,
        });
    }
    if let Some(path) = &a.plot {
        let rows: Vec<Vec<f64>> = profile
            .s
            .iter()
            .zip(&profile.f)
            .map(|(s, f)| vec![*s, *f])
            .collect();
        write_file(path, &columns(provenance, &["s", "f"], &rows))?;
    }
    let (lo, hi) = profile.window;
    to_value(json!({
        "kappa_hat": profile.kappa,
        "kappa_exact": kappa_exact,
        "relative_error": (profile.kappa / kappa_exact - 1.0).abs(),
        "fit_window": [profile.s[lo], profile.s[hi]],
        "convexity_min": convexity,
        "convexity_over_kappa_sq": convexity / (profile.kappa * profile.kappa),
        "energy": profile.energy,
        "quantization": quantization,
    }))
}

pub fn preglue(a: &PreglueArgs, provenance: &str) -> Result<Value, CliError> {
    check_lengths(&a.lengths)?;
    let pb = problem(&a.problem)?;
    let (u1, u2) = pieces(&pb, a.problem.n_t, a.piece, a.amplitude)?;
    let (u2, kind) = match a.kind {
        1 => (u2.half_turn(), PreglueType::Type1),
        2 => (u2.half_turn(), PreglueType::Type2),
        _ => (u2, PreglueType::Type3),
    };
    let mut eps = Vec::with_capacity(a.lengths.len());
    for &r in &a.lengths {
        let u = preglue_maps(&u1, &u2, r, kind, ENDPOINT_TOL).map_err(numerics)?;
        eps.push(lp_norm_cells(&residual(&pb, &u).map_err(numerics)?, pb.p()));
    }
    let logs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let fitted = if a.lengths.len() >= 2 {
        Some(slope(&a.lengths, &logs))
    } else {
        None
    };
    let kappa = a.problem.alpha.min(PI - a.problem.alpha);
    let target = -kappa / 2.0;
    if let Some(path) = &a.plot {
        let rows: Vec<Vec<f64>> = a
            .lengths
            .iter()
            .zip(&eps)
            .map(|(r, e)| vec![*r, *e])
            .collect();
        write_file(path, &columns(provenance, &["R", "eps"], &rows))?;
    }
    to_value(json!({
        "lengths": a.lengths,
        "eps": eps,
        "strictly_decreasing": eps.windows(2).all(|w| w[1] < w[0]),
        "log_slope": fitted,
        "target_slope": target,
        "slope_relative_error": fitted.map(|s| (s / target - 1.0).abs()),
    }))
}

#[derive(Serialize)]
struct GluingRun {
    r: f64,
    preglue_residual: f64,
    preglue_residual_l2: f64,
    c_hat: f64,
    residuals: Vec<f64>,
    iterations: usize,
    distance: f64,
    ift_bound: f64,
    ift_holds: bool,
}

pub fn glue_newton(a: &GlueNewtonArgs, provenance: &str) -> Result<Value, CliError> {
    check_lengths(&a.lengths)?;
    let pb = problem(&a.problem)?;
    let (u1, u2) = pieces(&pb, a.problem.n_t, a.piece, a.amplitude)?;
    let mut runs = Vec::with_capacity(a.lengths.len());
    for &r in &a.lengths {
        let (_, rep) = glue_pieces(&pb, &u1, &u2, r, ENDPOINT_TOL, a.tol).map_err(numerics)?;
        runs.push(GluingRun {
            r: rep.r,
            preglue_residual: rep.preglue_residual,
            preglue_residual_l2: rep.preglue_residual_l2,
            c_hat: rep.c_hat,
            residuals: rep.residuals,
            iterations: rep.iterations,
            distance: rep.distance,
            ift_bound: rep.ift_bound,
            ift_holds: rep.ift_holds,
        });
    }
    if let Some(path) = &a.plot {
        let rows: Vec<Vec<f64>> = runs
            .iter()
            .map(|g| vec![g.r, g.preglue_residual, g.c_hat, g.distance, g.ift_bound])
            .collect();
        write_file(
            path,
            &columns(
                provenance,
                &["R", "eps", "c_hat", "distance", "bound"],
                &rows,
            ),
        )?;
    }
    let c: Vec<f64> = runs.iter().map(|g| g.c_hat).collect();
    to_value(json!({
        "c_hat_variation": spread(&c),
        "all_converged": runs.iter().all(|g| g.residuals.last().is_some_and(|x| *x < a.tol)),
        "all_ift_bounds_hold": runs.iter().all(|g| g.ift_holds),
        "runs": runs,
    }))
}

pub fn embed(a: &EmbedArgs, provenance: &str) -> Result<Value, CliError> {
    if a.s_half.is_empty() {
        return Err(CliError::Usage(String::from("--s-half needs a value")));
    }
    let mut reports = Vec::with_capacity(a.s_half.len());
    for &s in &a.s_half {
        let rep = embedding_constant(a.alpha, s, a.p, a.n_t, a.trials, a.common.seed)
            .map_err(numerics)?;
        reports.push(rep);
    }
    if let Some(path) = &a.plot {
        let rows: Vec<Vec<f64>> = reports
            .iter()
            .map(|r| vec![r.s_half, r.max_ratio])
            .collect();
        write_file(path, &columns(provenance, &["S", "max_ratio"], &rows))?;
    }
    let ratios: Vec<f64> = reports.iter().map(|r| r.max_ratio).collect();
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "s_half": r.s_half,
                "trials": r.trials,
                "max_ratio": r.max_ratio,
                "constant_ratio": r.constant_ratio,
                "constant_exact": r.constant_exact,
            })
        })
        .collect();
    to_value(json!({
        "p": a.p,
        "strips": rows,
        "max_ratio_variation": spread(&ratios),
    }))
}

pub fn surject(a: &SurjectArgs) -> Result<Value, CliError> {
    check_lengths(&a.lengths)?;
    if !(a.eps > 0.0 && a.eps.is_finite()) {
        return Err(CliError::Usage(format!(
            "--eps must be positive (got {})",
            a.eps
        )));
    }
    let pb = problem(&a.problem)?;
    let (u1, u2) = pieces(&pb, a.problem.n_t, a.piece, a.amplitude)?;
    let broken = BrokenPair { u1, u2 };
    let rep = surjectivity_probe(
        &pb,
        &broken,
        &a.lengths,
        a.eps,
        a.candidates,
        a.common.seed,
        a.tol,
    )
    .map_err(numerics)?;
    let candidates: Vec<Value> = rep
        .candidates
        .iter()
        .map(
            |c| json!({"r": c.r, "r_star": c.r_star, "distance": c.distance, "outlier": c.outlier}),
        )
        .collect();
    to_value(json!({
        "epsilon": rep.epsilon,
        "max_distance": rep.max_distance,
        "outliers": rep.outliers,
        "passed": rep.passed,
        "warnings": rep.warnings,
        "candidates": candidates,
    }))
}
