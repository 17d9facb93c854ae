//! Direct evaluation of the relations, one composable input tuple at a time.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::terms::{lhs_terms, rhs_terms, RelationTerm};
use super::{add_to, basis, AInftyData, AInftyError, FunctorData, Vector, Q};

/// How residual coefficients are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Largest absolute value of a residual coefficient.
    #[default]
    Rational,
    /// 1 if some residual coefficient is odd, else 0. Coefficients with even denominators are
    /// rejected.
    Mod2,
}

pub(crate) fn koszul(data: &AInftyData, inputs: &[usize]) -> Q {
    let e: i32 = inputs.iter().map(|&g| data.generator(g).degree - 1).sum();
    if e.rem_euclid(2) == 0 {
        Q::from_integer(1)
    } else {
        Q::from_integer(-1)
    }
}

pub(crate) fn measure(v: &Vector, arithmetic: Arithmetic) -> Result<Q, AInftyError> {
    let mut worst = Q::zero();
    for c in v.values() {
        let m = match arithmetic {
            Arithmetic::Rational => c.abs(),
            Arithmetic::Mod2 => {
                if c.denom().is_even() {
                    return Err(AInftyError::NotMod2(*c));
                }
                Q::from_integer(c.numer().mod_floor(&2))
            }
        };
        if m > worst {
            worst = m;
        }
    }
    Ok(worst)
}

fn scaled_add(acc: &mut Vector, v: &Vector, s: Q) {
    for (&g, &c) in v {
        add_to(acc, g, s * c);
    }
}

/// Residuals of the A∞ relations for `d = 1, …, d_max` (entry `d − 1`).
pub fn check_ainfty(
    data: &AInftyData,
    d_max: usize,
    arithmetic: Arithmetic,
) -> Result<Vec<Q>, AInftyError> {
    let mut out = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        let mut worst = Q::zero();
        for a in data.composable_tuples(d) {
            let mut total = Vector::new();
            for m in 1..=d {
                for n in 0..=d - m {
                    let inner = data.mu(m).apply(&basis_args(&a[n..n + m]));
                    if inner.is_empty() {
                        continue;
                    }
                    let mut args = basis_args(&a[..n]);
                    args.push(inner);
                    args.extend(basis_args(&a[n + m..]));
                    let v = data.mu(d - m + 1).apply(&args);
                    scaled_add(&mut total, &v, koszul(data, &a[..n]));
                }
            }
            let r = measure(&total, arithmetic)?;
            if r > worst {
                worst = r;
            }
        }
        out.push(worst);
    }
    Ok(out)
}

fn basis_args(gs: &[usize]) -> Vec<Vector> {
    gs.iter().map(|&g| basis(g)).collect()
}

/// The value of one relation term on the inputs `a`.
pub(crate) fn term_value(
    a_data: &AInftyData,
    b_data: &AInftyData,
    f: &FunctorData,
    term: &RelationTerm,
    a: &[usize],
) -> Vector {
    match term {
        RelationTerm::Lhs { e, i, j } => {
            let inner = a_data.mu(*j).apply(&basis_args(&a[*i..i + j]));
            if inner.is_empty() {
                return Vector::new();
            }
            let mut args = basis_args(&a[..*i]);
            args.push(inner);
            args.extend(basis_args(&a[i + j..]));
            let mut v = f.phi(*e).apply(&args);
            let s = koszul(a_data, &a[..*i]);
            for c in v.values_mut() {
                *c *= s;
            }
            v
        }
        RelationTerm::Rhs { parts } => {
            let mut args = Vec::with_capacity(parts.len());
            let mut start = 0;
            for &p in parts {
                let v = f.phi(p).apply(&basis_args(&a[start..start + p]));
                if v.is_empty() {
                    return Vector::new();
                }
                args.push(v);
                start += p;
            }
            b_data.mu(parts.len()).apply(&args)
        }
    }
}

/// Residuals of the functor relations for `d = 1, …, d_max` (entry `d − 1`).
pub fn check_functor(
    a_data: &AInftyData,
    b_data: &AInftyData,
    f: &FunctorData,
    d_max: usize,
    arithmetic: Arithmetic,
) -> Result<Vec<Q>, AInftyError> {
    let mut out = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        let lhs = lhs_terms(d);
        let rhs = rhs_terms(d);
        let mut worst = Q::zero();
        for a in a_data.composable_tuples(d) {
            let mut total = Vector::new();
            for t in &lhs {
                scaled_add(
                    &mut total,
                    &term_value(a_data, b_data, f, t, &a),
                    Q::from_integer(1),
                );
            }
            for t in &rhs {
                scaled_add(
                    &mut total,
                    &term_value(a_data, b_data, f, t, &a),
                    Q::from_integer(-1),
                );
            }
            let r = measure(&total, arithmetic)?;
            if r > worst {
                worst = r;
            }
        }
        out.push(worst);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{exterior_dga, exterior_dga_morphism, Generator, Multilinear};
    use alloc::vec;

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn exterior_dga_is_ainfty() {
        let a = exterior_dga().to_ainfty();
        assert!(check_ainfty(&a, 4, Arithmetic::Rational)
            .unwrap()
            .iter()
            .all(Q::is_zero));
        assert!(check_ainfty(&a, 4, Arithmetic::Mod2)
            .unwrap()
            .iter()
            .all(Q::is_zero));
    }

    #[test]
    fn identity_and_morphism_are_functors() {
        let a = exterior_dga().to_ainfty();
        let id = FunctorData::identity(&a);
        assert!(check_functor(&a, &a, &id, 4, Arithmetic::Rational)
            .unwrap()
            .iter()
            .all(Q::is_zero));
        let f = exterior_dga_morphism()
            .to_functor(&exterior_dga(), &exterior_dga())
            .unwrap();
        assert!(check_functor(&a, &a, &f, 4, Arithmetic::Rational)
            .unwrap()
            .iter()
            .all(Q::is_zero));
    }

    #[test]
    fn broken_associativity_shows_at_arity_three() {
        let mut dga = exterior_dga();
        // 1·x = x + y keeps the Leibniz rule but not associativity.
        dga.add_product(0, 1, 2, q(1));
        let a = dga.to_ainfty();
        let r = check_ainfty(&a, 4, Arithmetic::Rational).unwrap();
        assert!(r[0].is_zero() && r[1].is_zero());
        assert!(r[2] >= q(1));
    }

    #[test]
    fn stray_phi2_shows_at_arity_two() {
        let a = exterior_dga().to_ainfty();
        let mut phi2 = Multilinear::new();
        phi2.add(vec![1, 1], 1, q(1));
        let phi1 = FunctorData::identity(&a).phi(1).clone();
        let f = FunctorData::new(&a, &a, vec![0], vec![phi1, phi2]).unwrap();
        let r = check_functor(&a, &a, &f, 4, Arithmetic::Rational).unwrap();
        assert!(r[0].is_zero());
        assert!(r[1] >= q(1));
    }

    fn two_generators() -> Vec<Generator> {
        vec![
            Generator {
                source: 0,
                target: 0,
                degree: 0,
            },
            Generator {
                source: 0,
                target: 0,
                degree: 1,
            },
        ]
    }

    #[test]
    fn even_denominators_are_rejected_mod_two() {
        let mut mu1 = Multilinear::new();
        mu1.add(vec![0], 1, Q::new(1, 2));
        let mut a = AInftyData::new(1, two_generators(), vec![mu1]).unwrap();
        a.mu_mut(2).add(vec![0, 0], 0, q(1));
        assert!(matches!(
            check_ainfty(&a, 2, Arithmetic::Mod2),
            Err(AInftyError::NotMod2(_))
        ));
        assert!(check_ainfty(&a, 2, Arithmetic::Rational).unwrap()[1] > q(0));
    }

    #[test]
    fn mod_two_ignores_even_residuals() {
        let mut mu1 = Multilinear::new();
        mu1.add(vec![0], 1, q(2));
        let mut a = AInftyData::new(1, two_generators(), vec![mu1]).unwrap();
        a.mu_mut(2).add(vec![0, 0], 0, q(1));
        // Only μ^1 μ^2(e, e) = 2x survives.
        let r = check_ainfty(&a, 2, Arithmetic::Mod2).unwrap();
        assert!(r[1].is_zero());
        assert!(check_ainfty(&a, 2, Arithmetic::Rational).unwrap()[1] >= q(1));
    }
}
