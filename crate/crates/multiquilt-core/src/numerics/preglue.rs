//! Pregluing two strips along a neck.
//!
//! The left piece `u1` is given on `[−L, S]` and approaches the intersection point as `s → S`.
//! The right piece is given on `[−S, L]` in strip orientation and approaches the point as
//! `s → −S`. The preglued map on `[−L, 2R + L]` is
//!
//! ```text
//! u_R(σ) = β(σ − R/2) u1(σ) + β(3R/2 − σ) u2(σ − 2R),
//! ```
//!
//! so the neck has length `2R` and the residual is supported where a cutoff is not locally
//! constant. In the flat model the exponential map at the intersection point is the identity, so
//! all three gluing types reduce to this formula; for types 1 and 2 the right piece is supplied in
//! the coordinates of its own outgoing end and is turned around first.

use super::{Complex64, DiscreteMap, NumericsError};

/// `β(s) = 1` for `s ≤ −1`, `0` for `s ≥ 0`, and `1 − (10x³ − 15x⁴ + 6x⁵)` with `x = s + 1` in
/// between; this is the quintic that makes `β` twice continuously differentiable.
pub fn cutoff(s: f64) -> f64 {
    if s <= -1.0 {
        1.0
    } else if s >= 0.0 {
        0.0
    } else {
        let x = s + 1.0;
        1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreglueType {
    Type1,
    Type2,
    Type3,
}

/// The preglued map `u_R`. Each piece must lie within `tol` of the intersection point on its
/// glued end column.
pub fn preglue(
    u1: &DiscreteMap,
    u2: &DiscreteMap,
    r: f64,
    kind: PreglueType,
    tol: f64,
) -> Result<DiscreteMap, NumericsError> {
    let u2 = match kind {
        PreglueType::Type3 => u2.clone(),
        PreglueType::Type1 | PreglueType::Type2 => u2.half_turn(),
    };
    let (g1, g2) = (*u1.grid(), *u2.grid());
    if !g1.same_spacing(&g2) {
        return Err(NumericsError::GridMisaligned);
    }
    let end1 = column_sup(u1.column(g1.n_s() - 1));
    if end1 > tol {
        return Err(NumericsError::EndpointMismatch {
            piece: 1,
            value: end1,
        });
    }
    let end2 = column_sup(u2.column(0));
    if end2 > tol {
        return Err(NumericsError::EndpointMismatch {
            piece: 2,
            value: end2,
        });
    }
    let left = g1.s_min();
    let right = g2.s_max() + 2.0 * r;
    // The first piece must cover the support of β(σ − R/2) beyond its own start, the second
    // that of β(3R/2 − σ).
    if !(r > 2.0) || g1.s_max() < r / 2.0 - 1e-9 || g2.s_min() > -r / 2.0 + 1e-9 || right <= left {
        return Err(NumericsError::BadGluingLength(r));
    }
    let grid = g1
        .with_range(left, right)
        .map_err(|_| NumericsError::GridMisaligned)?;
    if g2.column_of(grid.s(grid.n_s() - 1) - 2.0 * r).is_none() {
        return Err(NumericsError::GridMisaligned);
    }
    let mut out = DiscreteMap::zero(grid);
    for j in 0..grid.n_s() {
        let s = grid.s(j);
        let b1 = cutoff(s - r / 2.0);
        let b2 = cutoff(1.5 * r - s);
        for q in 0..grid.n_t() {
            let mut z = Complex64::new(0.0, 0.0);
            if b1 != 0.0 {
                z += u1.at(s, q) * b1;
            }
            if b2 != 0.0 {
                z += u2.at(s - 2.0 * r, q) * b2;
            }
            out.set(j, q, z);
        }
    }
    Ok(out)
}

fn column_sup(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{discrete_modes, residual, Grid, Hamiltonian, StripProblem};
    use alloc::collections::BTreeMap;
    use core::f64::consts::PI;

    fn piece(k: i32, a: f64, b: f64) -> DiscreteMap {
        let g = Grid::square(a, b, 17).unwrap();
        let mut c = BTreeMap::new();
        c.insert(k, Complex64::new(0.5, 0.0));
        discrete_modes(PI / 2.0, &c, g).unwrap()
    }

    #[test]
    fn cutoff_is_c2() {
        assert_eq!(cutoff(-1.0), 1.0);
        assert_eq!(cutoff(0.0), 0.0);
        assert!((cutoff(-0.5) - 0.5).abs() < 1e-15);
        let h = 1e-4;
        for s in [-1.0, 0.0] {
            let d2 = (cutoff(s + h) - 2.0 * cutoff(s) + cutoff(s - h)) / (h * h);
            assert!(d2.abs() < 1e-2, "{d2}");
        }
    }

    #[test]
    fn zero_pieces_glue_to_zero() {
        let g1 = Grid::square(-2.0, 8.0, 9).unwrap();
        let g2 = Grid::square(-8.0, 2.0, 9).unwrap();
        let u = preglue(
            &DiscreteMap::zero(g1),
            &DiscreteMap::zero(g2),
            8.0,
            PreglueType::Type3,
            1e-9,
        )
        .unwrap();
        assert_eq!(u.sup(), 0.0);
        assert_eq!(u.grid().s_max(), 18.0);
    }

    #[test]
    fn residual_lives_on_cutoff_bands() {
        let pb = StripProblem::new(PI / 2.0, Hamiltonian::zero(), 4.0).unwrap();
        let u1 = piece(-1, -2.0, 8.0);
        let u2 = piece(0, -8.0, 2.0);
        let r = 8.0;
        let u = preglue(&u1, &u2, r, PreglueType::Type3, 1e-3).unwrap();
        let f = residual(&pb, &u).unwrap();
        let nc = u.grid().n_t() - 1;
        for j in 0..u.grid().n_s() - 1 {
            let (a, b) = (u.grid().s(j), u.grid().s(j + 1));
            let in_band = (b > r / 2.0 - 1.0 && a < r / 2.0) || (b > 1.5 * r && a < 1.5 * r + 1.0);
            let worst = (0..nc).map(|q| f.get(j, q).norm()).fold(0.0, f64::max);
            if !in_band {
                assert!(worst < 1e-12, "cell column at {a}: {worst}");
            }
        }
        assert!(f.sup() > 1e-6);
    }

    #[test]
    fn endpoint_mismatch_is_reported() {
        let u1 = piece(0, -2.0, 8.0);
        let u2 = piece(0, -8.0, 2.0);
        assert!(matches!(
            preglue(&u1, &u2, 8.0, PreglueType::Type3, 1e-3),
            Err(NumericsError::EndpointMismatch { piece: 1, .. })
        ));
    }

    #[test]
    fn turned_pieces_match_strip_orientation() {
        let u1 = piece(-1, -2.0, 8.0);
        let u2 = piece(0, -8.0, 2.0);
        let a = preglue(&u1, &u2, 6.0, PreglueType::Type3, 1e-3).unwrap();
        let b = preglue(&u1, &u2.half_turn(), 6.0, PreglueType::Type1, 1e-3).unwrap();
        assert_eq!(a, b);
    }
}
