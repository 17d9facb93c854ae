//! Quilted strips and folding.
//!
//! A quilted strip is a sequence of maps `u_0, …, u_{k−1}` on `ℝ × [0, 1]`, each into ℂ, with
//! `u_0(s, 0) ∈ ℝ`, `u_{k−1}(s, 1) ∈ e^{iα}ℝ` and the seam conditions
//! `u_{m+1}(s, 0) = e^{iγ_m} u_m(s, 1)`. Folding reflects every patch with odd index in `t`,
//! turning the quilt into a single strip in `ℂ^k` whose reflected factors carry the conjugate
//! complex structure, so their equation reads `∂_s ũ − i ∂_t ũ + ∇H(ũ) = 0`.

use alloc::vec::Vec;

use super::operator::residual_with_sign;
use super::{Complex64, DiscreteMap, NumericsError, ResidualField, StripProblem};

#[derive(Clone, Debug, PartialEq)]
pub struct QuiltedStrip {
    problem: StripProblem,
    seams: Vec<f64>,
    patches: Vec<DiscreteMap>,
}

impl QuiltedStrip {
    /// `seams[m]` is the angle `γ_m` between patches `m` and `m + 1`.
    pub fn new(
        problem: StripProblem,
        seams: Vec<f64>,
        patches: Vec<DiscreteMap>,
    ) -> Result<QuiltedStrip, NumericsError> {
        if patches.is_empty() || seams.len() + 1 != patches.len() {
            return Err(NumericsError::ShapeMismatch);
        }
        if patches.iter().any(|u| u.grid() != patches[0].grid()) {
            return Err(NumericsError::ShapeMismatch);
        }
        Ok(QuiltedStrip {
            problem,
            seams,
            patches,
        })
    }

    pub fn problem(&self) -> &StripProblem {
        &self.problem
    }

    pub fn seams(&self) -> &[f64] {
        &self.seams
    }

    pub fn patches(&self) -> &[DiscreteMap] {
        &self.patches
    }

    /// Largest violation of a seam condition.
    pub fn seam_defect(&self) -> f64 {
        let g = *self.patches[0].grid();
        let top = g.n_t() - 1;
        let mut worst: f64 = 0.0;
        for (m, &gamma) in self.seams.iter().enumerate() {
            let rot = Complex64::from_polar(1.0, gamma);
            for j in 0..g.n_s() {
                let d = self.patches[m + 1].get(j, 0) - rot * self.patches[m].get(j, top);
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Largest distance of the outer boundary values from their lines.
    pub fn boundary_defect(&self) -> f64 {
        let g = *self.patches[0].grid();
        let d = self.problem.l1();
        let last = &self.patches[self.patches.len() - 1];
        (0..g.n_s())
            .map(|j| {
                let a = self.patches[0].get(j, 0);
                let b = last.get(j, g.n_t() - 1);
                libm::fabs(a.im).max(libm::fabs(b.re * d.im - b.im * d.re))
            })
            .fold(0.0, f64::max)
    }
}

fn reflect(u: &DiscreteMap) -> DiscreteMap {
    let g = *u.grid();
    let mut values = Vec::with_capacity(u.values().len());
    for j in 0..g.n_s() {
        values.extend(u.column(j).iter().rev());
    }
    DiscreteMap::from_values(g, values).expect("same shape")
}

fn reflect_field(f: &ResidualField) -> ResidualField {
    let g = *f.grid();
    let nc = g.n_t() - 1;
    let mut values = Vec::with_capacity(f.values().len());
    for j in 0..g.n_s() - 1 {
        values.extend(f.values()[j * nc..(j + 1) * nc].iter().rev());
    }
    ResidualField::from_parts(g, values)
}

/// The factors of the folded strip with the sign of their complex structure.
pub fn fold_patches(strip: &QuiltedStrip) -> Vec<(DiscreteMap, f64)> {
    strip
        .patches
        .iter()
        .enumerate()
        .map(|(m, u)| {
            if m % 2 == 1 {
                (reflect(u), -1.0)
            } else {
                (u.clone(), 1.0)
            }
        })
        .collect()
}

/// Residual of every patch in its own coordinates.
pub fn quilt_residual(strip: &QuiltedStrip) -> Vec<ResidualField> {
    strip
        .patches
        .iter()
        .map(|u| residual_with_sign(&strip.problem, u, 1.0))
        .collect()
}

/// Residual of the folded strip, moved back to the coordinates of each patch.
pub fn folded_residual(strip: &QuiltedStrip) -> Vec<ResidualField> {
    fold_patches(strip)
        .iter()
        .map(|(u, sigma)| {
            let f = residual_with_sign(&strip.problem, u, *sigma);
            if *sigma < 0.0 {
                reflect_field(&f)
            } else {
                f
            }
        })
        .collect()
}
