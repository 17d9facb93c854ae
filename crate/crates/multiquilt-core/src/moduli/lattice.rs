//! The face poset of the multiplihedron.
//!
//! Elements are the stable colored types with `d` leaves. `T ≤ T'` when `T'` is obtained from
//! `T` by contractions. The order is graded by stratum dimension and its unique maximum is the
//! colored corolla (the open top cell); the minimal elements are the vertices of the polytope.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::ModuliError;
use crate::trees::{contractions, enumerate_strata, FacetLabel, RibbonTree, TreeKind};

pub const MAX_LATTICE_LEAVES: usize = 8;

#[derive(Clone, Debug)]
pub struct FaceLattice {
    d: usize,
    elements: Vec<RibbonTree>,
    dims: Vec<usize>,
    /// `(a, b)`: `elements[b]` is obtained from `elements[a]` by one contraction.
    covers: Vec<(usize, usize)>,
}

pub fn face_lattice(d: usize) -> Result<FaceLattice, ModuliError> {
    if d == 0 || d > MAX_LATTICE_LEAVES {
        return Err(ModuliError::LatticeRange {
            d,
            max: MAX_LATTICE_LEAVES,
        });
    }
    let elements = enumerate_strata(d, TreeKind::Colored)?;
    let index: BTreeMap<&RibbonTree, usize> =
        elements.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let dims = elements.iter().map(RibbonTree::stratum_dim).collect();
    let mut covers = Vec::new();
    for (a, t) in elements.iter().enumerate() {
        for c in contractions(t) {
            let b = *index
                .get(&c)
                .expect("contractions of stable types are stable");
            covers.push((a, b));
        }
    }
    covers.sort_unstable();
    Ok(FaceLattice {
        d,
        elements,
        dims,
        covers,
    })
}

impl FaceLattice {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn elements(&self) -> &[RibbonTree] {
        &self.elements
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Dimension of the complex, `d − 1`.
    pub fn dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    /// `f[k]` is the number of strata of dimension `k`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for &k in &self.dims {
            f[k] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Indices of the strata of codimension one.
    pub fn codim_one(&self) -> Vec<usize> {
        let top = self.dim();
        (0..self.elements.len())
            .filter(|&k| self.dims[k] + 1 == top)
            .collect()
    }

    /// Index of the unique stratum of dimension `d − 1`.
    pub fn top(&self) -> usize {
        let top = self.dim();
        self.dims.iter().position(|&k| k == top).expect("nonempty")
    }

    /// Labels of the codimension-one strata, in element order.
    pub fn facet_labels(&self) -> Vec<FacetLabel> {
        self.codim_one()
            .into_iter()
            .map(|k| self.elements[k].facet_label())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lattices() {
        let j2 = face_lattice(2).unwrap();
        assert_eq!(j2.f_vector(), vec![2, 1]);
        assert_eq!(j2.euler_characteristic(), 1);
        let j3 = face_lattice(3).unwrap();
        assert_eq!(j3.euler_characteristic(), 1);
        assert_eq!(j3.codim_one().len(), 6);
        assert_eq!(j3.f_vector(), vec![6, 6, 1]);
    }

    #[test]
    fn j4_f_vector() {
        let j4 = face_lattice(4).unwrap();
        assert_eq!(j4.f_vector(), vec![21, 32, 13, 1]);
        assert_eq!(j4.euler_characteristic(), 1);
    }

    #[test]
    fn covers_are_graded() {
        let l = face_lattice(4).unwrap();
        for &(a, b) in l.covers() {
            assert_eq!(l.dims()[b], l.dims()[a] + 1);
        }
    }

    #[test]
    fn range_checked() {
        assert!(face_lattice(0).is_err());
        assert!(face_lattice(9).is_err());
    }
}
