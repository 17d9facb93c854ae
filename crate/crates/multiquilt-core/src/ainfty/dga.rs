//! Differential graded algebras as A∞ categories with one object.
//!
//! The conversion uses `μ^1(a) = (−1)^{|a|} da` and `μ^2(a_1, a_2) = (−1)^{|a_1|} a_2 · a_1`;
//! a DGA morphism `f` becomes the functor with `Φ^1 = f` and no higher terms.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{add_to, AInftyData, AInftyError, FunctorData, Generator, Multilinear, Vector, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct Dga {
    degrees: Vec<i32>,
    differential: BTreeMap<usize, Vector>,
    product: BTreeMap<(usize, usize), Vector>,
}

impl Dga {
    /// A DGA with the given basis degrees and zero differential and product.
    pub fn new(degrees: Vec<i32>) -> Dga {
        Dga {
            degrees,
            differential: BTreeMap::new(),
            product: BTreeMap::new(),
        }
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    /// `d(basis[g]) += c · basis[out]`.
    pub fn add_differential(&mut self, g: usize, out: usize, c: Q) {
        add_to(self.differential.entry(g).or_default(), out, c);
    }

    /// `basis[l] · basis[r] += c · basis[out]`.
    pub fn add_product(&mut self, l: usize, r: usize, out: usize, c: Q) {
        add_to(self.product.entry((l, r)).or_default(), out, c);
    }

    pub fn differential(&self) -> impl Iterator<Item = (usize, usize, Q)> + '_ {
        self.differential
            .iter()
            .flat_map(|(&g, v)| v.iter().map(move |(&o, &c)| (g, o, c)))
    }

    pub fn products(&self) -> impl Iterator<Item = (usize, usize, usize, Q)> + '_ {
        self.product
            .iter()
            .flat_map(|(&(l, r), v)| v.iter().map(move |(&o, &c)| (l, r, o, c)))
    }

    fn sign(&self, g: usize) -> Q {
        Q::from_integer(if self.degrees[g].rem_euclid(2) == 0 {
            1
        } else {
            -1
        })
    }

    /// The A∞ structure with `μ^1`, `μ^2` as above. Panics if an entry has the wrong degree.
    pub fn to_ainfty(&self) -> AInftyData {
        self.try_to_ainfty()
            .expect("differential and product respect degrees")
    }

    pub fn try_to_ainfty(&self) -> Result<AInftyData, AInftyError> {
        let generators = self
            .degrees
            .iter()
            .map(|&degree| Generator {
                source: 0,
                target: 0,
                degree,
            })
            .collect();
        let mut mu1 = Multilinear::new();
        for (g, o, c) in self.differential() {
            mu1.add(vec![g], o, self.sign(g) * c);
        }
        let mut mu2 = Multilinear::new();
        for (l, r, o, c) in self.products() {
            mu2.add(vec![r, l], o, self.sign(r) * c);
        }
        AInftyData::new(1, generators, vec![mu1, mu2])
    }
}

/// A linear map between DGAs, given on basis elements.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DgaMorphism {
    map: BTreeMap<usize, Vector>,
}

impl DgaMorphism {
    pub fn new() -> DgaMorphism {
        DgaMorphism::default()
    }

    /// `f(basis[g]) += c · basis[out]`.
    pub fn add(&mut self, g: usize, out: usize, c: Q) {
        add_to(self.map.entry(g).or_default(), out, c);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Q)> + '_ {
        self.map
            .iter()
            .flat_map(|(&g, v)| v.iter().map(move |(&o, &c)| (g, o, c)))
    }

    pub fn to_functor(&self, source: &Dga, target: &Dga) -> Result<FunctorData, AInftyError> {
        let mut phi1 = Multilinear::new();
        for (g, o, c) in self.entries() {
            phi1.add(vec![g], o, c);
        }
        FunctorData::new(
            &source.try_to_ainfty()?,
            &target.try_to_ainfty()?,
            vec![0],
            vec![phi1],
        )
    }
}

/// The exterior algebra on `x`, `y` of degree 1 with `dx = xy`, `dy = 0`.
///
/// Basis order: `1, x, y, xy`.
pub fn exterior_dga() -> Dga {
    let one = Q::from_integer(1);
    let mut a = Dga::new(vec![0, 1, 1, 2]);
    a.add_differential(1, 3, one);
    for g in 0..4 {
        a.add_product(0, g, g, one);
        if g != 0 {
            a.add_product(g, 0, g, one);
        }
    }
    a.add_product(1, 2, 3, one);
    a.add_product(2, 1, 3, -one);
    a
}

/// The automorphism of [`exterior_dga`] fixing `1`, `y`, `xy` and sending `x` to `x + y`.
pub fn exterior_dga_morphism() -> DgaMorphism {
    let one = Q::from_integer(1);
    let mut f = DgaMorphism::new();
    f.add(0, 0, one);
    f.add(1, 1, one);
    f.add(1, 2, one);
    f.add(2, 2, one);
    f.add(3, 3, one);
    f
}
