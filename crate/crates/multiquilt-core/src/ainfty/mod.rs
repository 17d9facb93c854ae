//! A∞ relations with exact rational coefficients.
//!
//! Morphisms are linear combinations of basis generators, each with a source object, a target
//! object and a degree. Inputs of a structure map are listed with the first morphism first:
//! `μ^n(a_1, …, a_n)` requires `target(a_j) = source(a_{j+1})` and lands in
//! `hom(source(a_1), target(a_n))`. (The usual written order is the reverse,
//! `μ^n(a_n, …, a_1)`.)
//!
//! The A∞ relations checked here are
//!
//! ```text
//! Σ_{n,m} (−1)^{✠_n} μ^{d−m+1}(a_1, …, a_n, μ^m(a_{n+1}, …, a_{n+m}), a_{n+m+1}, …, a_d) = 0,
//! ✠_n = Σ_{j ≤ n} (|a_j| − 1),
//! ```
//!
//! with `μ^n` of degree `2 − n`, and the functor relations
//!
//! ```text
//! Σ_{i,j} (−1)^{✠_i} Φ^{d−j+1}(a_1, …, a_i, μ_A^j(a_{i+1}, …, a_{i+j}), …, a_d)
//!     = Σ_{i_1+…+i_r = d} μ_B^r(Φ^{i_1}(a_1, …, a_{i_1}), …, Φ^{i_r}(…, a_d)),
//! ```
//!
//! with `Φ^d` of degree `1 − d`.

mod bar;
mod check;
mod dga;
mod terms;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

pub use crate::moduli::Q;
pub use bar::{check_ainfty_bar, check_functor_bar};
pub use check::{check_ainfty, check_functor, Arithmetic};
pub use dga::{exterior_dga, exterior_dga_morphism, Dga, DgaMorphism};
pub use terms::{facet_bijection, lhs_terms, rhs_terms, RelationTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// A sparse linear combination of generators.
pub type Vector = BTreeMap<usize, Q>;

/// A multilinear map on basis tuples, stored sparsely.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Multilinear {
    entries: BTreeMap<Vec<usize>, Vector>,
}

impl Multilinear {
    pub fn new() -> Multilinear {
        Multilinear::default()
    }

    /// Adds `coeff · output` to the value on `inputs`.
    pub fn add(&mut self, inputs: Vec<usize>, output: usize, coeff: Q) {
        let v = self.entries.entry(inputs.clone()).or_default();
        let c = v.entry(output).or_insert_with(Q::zero);
        *c += coeff;
        if c.is_zero() {
            v.remove(&output);
            if v.is_empty() {
                self.entries.remove(&inputs);
            }
        }
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&Vector> {
        self.entries.get(inputs)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multilinear extension to vector arguments.
    pub fn apply(&self, args: &[Vector]) -> Vector {
        let mut out = Vector::new();
        let mut idx = Vec::with_capacity(args.len());
        fn go(
            map: &Multilinear,
            args: &[Vector],
            idx: &mut Vec<usize>,
            coeff: Q,
            out: &mut Vector,
        ) {
            if idx.len() == args.len() {
                if let Some(v) = map.entries.get(idx.as_slice()) {
                    for (&g, &c) in v {
                        add_to(out, g, coeff * c);
                    }
                }
                return;
            }
            for (&g, &c) in &args[idx.len()] {
                idx.push(g);
                go(map, args, idx, coeff * c, out);
                idx.pop();
            }
        }
        go(self, args, &mut idx, Q::from_integer(1), &mut out);
        out
    }
}

pub(crate) fn add_to(v: &mut Vector, g: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(g).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&g);
    }
}

pub(crate) fn basis(g: usize) -> Vector {
    let mut v = Vector::new();
    v.insert(g, Q::from_integer(1));
    v
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AInftyError {
    #[error("generator {0} does not exist")]
    UnknownGenerator(usize),
    #[error("object {0} does not exist")]
    UnknownObject(usize),
    #[error("inputs {0:?} are not composable")]
    NotComposable(Vec<usize>),
    #[error("entry {inputs:?} -> {output} of arity {arity} has the wrong degree or endpoints")]
    WrongDegree {
        arity: usize,
        inputs: Vec<usize>,
        output: usize,
    },
    #[error("entry {0:?} has the wrong number of inputs")]
    ArityMismatch(Vec<usize>),
    #[error("object map has {got} entries, expected {expected}")]
    ObjectMap { expected: usize, got: usize },
    #[error("coefficient {0} is not defined modulo 2")]
    NotMod2(Q),
}

/// Generators and structure maps `μ^1, …, μ^N` (`mu[n − 1]` is `μ^n`).
#[derive(Clone, Debug, PartialEq)]
pub struct AInftyData {
    objects: usize,
    generators: Vec<Generator>,
    mu: Vec<Multilinear>,
}

impl AInftyData {
    pub fn new(
        objects: usize,
        generators: Vec<Generator>,
        mu: Vec<Multilinear>,
    ) -> Result<AInftyData, AInftyError> {
        let data = AInftyData {
            objects,
            generators,
            mu,
        };
        for g in &data.generators {
            for o in [g.source, g.target] {
                if o >= objects {
                    return Err(AInftyError::UnknownObject(o));
                }
            }
        }
        for (k, map) in data.mu.iter().enumerate() {
            let n = k + 1;
            for (inputs, out) in map.entries() {
                data.check_entry(n, inputs, out, 2 - n as i32, |o| o)?;
            }
        }
        Ok(data)
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: usize) -> Generator {
        self.generators[g]
    }

    /// `μ^n`; empty beyond the stored arities.
    pub fn mu(&self, n: usize) -> &Multilinear {
        static EMPTY: Multilinear = Multilinear {
            entries: BTreeMap::new(),
        };
        self.mu.get(n - 1).unwrap_or(&EMPTY)
    }

    pub fn mu_mut(&mut self, n: usize) -> &mut Multilinear {
        if self.mu.len() < n {
            self.mu.resize(n, Multilinear::new());
        }
        &mut self.mu[n - 1]
    }

    pub fn max_arity(&self) -> usize {
        self.mu.len()
    }

    /// `|a_1| + … + |a_n|` for composable inputs, with the source of the first and the target of
    /// the last.
    pub(crate) fn chain(&self, inputs: &[usize]) -> Result<(usize, usize, i32), AInftyError> {
        let mut deg = 0;
        for (k, &g) in inputs.iter().enumerate() {
            let gen = *self
                .generators
                .get(g)
                .ok_or(AInftyError::UnknownGenerator(g))?;
            if k > 0 && self.generators[inputs[k - 1]].target != gen.source {
                return Err(AInftyError::NotComposable(inputs.to_vec()));
            }
            deg += gen.degree;
        }
        let first = self.generators[*inputs
            .first()
            .ok_or(AInftyError::ArityMismatch(Vec::new()))?];
        let last = self.generators[*inputs.last().expect("nonempty")];
        Ok((first.source, last.target, deg))
    }

    /// Checks one stored entry of an `n`-ary map of degree `shift` into a category whose
    /// objects are reached through `objects`.
    fn check_entry(
        &self,
        n: usize,
        inputs: &[usize],
        out: &Vector,
        shift: i32,
        objects: impl Fn(usize) -> usize,
    ) -> Result<(), AInftyError> {
        self.check_entry_into(self, n, inputs, out, shift, objects)
    }

    fn check_entry_into(
        &self,
        target: &AInftyData,
        n: usize,
        inputs: &[usize],
        out: &Vector,
        shift: i32,
        objects: impl Fn(usize) -> usize,
    ) -> Result<(), AInftyError> {
        if inputs.len() != n {
            return Err(AInftyError::ArityMismatch(inputs.to_vec()));
        }
        let (src, tgt, deg) = self.chain(inputs)?;
        for &o in out.keys() {
            let g = *target
                .generators
                .get(o)
                .ok_or(AInftyError::UnknownGenerator(o))?;
            if g.degree != deg + shift || g.source != objects(src) || g.target != objects(tgt) {
                return Err(AInftyError::WrongDegree {
                    arity: n,
                    inputs: inputs.to_vec(),
                    output: o,
                });
            }
        }
        Ok(())
    }

    /// All composable `d`-tuples of generators, in lexicographic order.
    pub fn composable_tuples(&self, d: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..d {
            let mut next = Vec::new();
            for t in &out {
                for g in 0..self.generators.len() {
                    let ok = t.last().is_none_or(|&p: &usize| {
                        self.generators[p].target == self.generators[g].source
                    });
                    if ok {
                        let mut u = t.clone();
                        u.push(g);
                        next.push(u);
                    }
                }
            }
            out = next;
        }
        out
    }
}

/// An A∞ functor: an object map and components `Φ^1, …, Φ^N` (`phi[d − 1]` is `Φ^d`).
#[derive(Clone, Debug, PartialEq)]
pub struct FunctorData {
    object_map: Vec<usize>,
    phi: Vec<Multilinear>,
}

impl FunctorData {
    pub fn new(
        a: &AInftyData,
        b: &AInftyData,
        object_map: Vec<usize>,
        phi: Vec<Multilinear>,
    ) -> Result<FunctorData, AInftyError> {
        if object_map.len() != a.objects() {
            return Err(AInftyError::ObjectMap {
                expected: a.objects(),
                got: object_map.len(),
            });
        }
        if let Some(&o) = object_map.iter().find(|&&o| o >= b.objects()) {
            return Err(AInftyError::UnknownObject(o));
        }
        for (k, map) in phi.iter().enumerate() {
            let n = k + 1;
            for (inputs, out) in map.entries() {
                a.check_entry_into(b, n, inputs, out, 1 - n as i32, |o| object_map[o])?;
            }
        }
        Ok(FunctorData { object_map, phi })
    }

    /// `Φ^1 = id`, `Φ^{≥2} = 0`.
    pub fn identity(a: &AInftyData) -> FunctorData {
        let mut phi1 = Multilinear::new();
        for g in 0..a.generators().len() {
            phi1.add(vec![g], g, Q::from_integer(1));
        }
        FunctorData {
            object_map: (0..a.objects()).collect(),
            phi: vec![phi1],
        }
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn phi(&self, n: usize) -> &Multilinear {
        static EMPTY: Multilinear = Multilinear {
            entries: BTreeMap::new(),
        };
        self.phi.get(n - 1).unwrap_or(&EMPTY)
    }

    pub fn phi_mut(&mut self, n: usize) -> &mut Multilinear {
        if self.phi.len() < n {
            self.phi.resize(n, Multilinear::new());
        }
        &mut self.phi[n - 1]
    }

    pub fn max_arity(&self) -> usize {
        self.phi.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn multilinear_extension() {
        let mut m = Multilinear::new();
        m.add(vec![0, 1], 2, q(3));
        m.add(vec![1, 1], 2, q(1));
        let mut x = basis(0);
        x.insert(1, q(2));
        let out = m.apply(&[x, basis(1)]);
        assert_eq!(out.get(&2), Some(&q(5)));
    }

    #[test]
    fn cancelling_entries_disappear() {
        let mut m = Multilinear::new();
        m.add(vec![0], 1, q(1));
        m.add(vec![0], 1, q(-1));
        assert!(m.is_empty());
    }

    #[test]
    fn degree_is_validated() {
        let gens = vec![
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
        ];
        let mut mu1 = Multilinear::new();
        mu1.add(vec![0], 0, q(1));
        assert!(matches!(
            AInftyData::new(1, gens.clone(), vec![mu1]),
            Err(AInftyError::WrongDegree { .. })
        ));
        let mut mu1 = Multilinear::new();
        mu1.add(vec![0], 1, q(1));
        assert!(AInftyData::new(1, gens, vec![mu1]).is_ok());
    }

    #[test]
    fn composability_is_validated() {
        let gens = vec![
            Generator {
                source: 0,
                target: 1,
                degree: 0,
            },
            Generator {
                source: 0,
                target: 1,
                degree: 0,
            },
        ];
        let mut mu2 = Multilinear::new();
        mu2.add(vec![0, 1], 0, q(1));
        let err = AInftyData::new(2, gens, vec![Multilinear::new(), mu2]);
        assert_eq!(err, Err(AInftyError::NotComposable(vec![0, 1])));
    }
}
