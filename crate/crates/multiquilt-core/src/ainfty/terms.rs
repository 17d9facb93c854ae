//! The terms of the arity-`d` functor relation and the boundary pieces they come from.

use alloc::vec::Vec;

use crate::trees::{compositions, FacetLabel};

/// One term of the arity-`d` functor relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationTerm {
    /// `Φ^e(a_1, …, a_i, μ^j(a_{i+1}, …, a_{i+j}), …, a_d)` with `e = d − j + 1`.
    Lhs { e: usize, i: usize, j: usize },
    /// `μ^r(Φ^{i_1}(…), …, Φ^{i_r}(…))` for the composition `parts = (i_1, …, i_r)`.
    Rhs { parts: Vec<usize> },
}

impl RelationTerm {
    /// The boundary piece of the arity-`d` moduli space this term counts.
    pub fn facet(&self) -> FacetLabel {
        match self {
            RelationTerm::Lhs { i, j: 1, .. } => FacetLabel::FloerIncoming(i + 1),
            RelationTerm::Lhs { i, j, .. } => FacetLabel::Type1 { e: *j, i: *i },
            RelationTerm::Rhs { parts } if parts.len() == 1 => FacetLabel::FloerOutgoing,
            RelationTerm::Rhs { parts } => FacetLabel::Type2 {
                parts: parts.clone(),
            },
        }
    }
}

/// `d(d + 1)/2` terms, ordered by `j` and then `i`.
pub fn lhs_terms(d: usize) -> Vec<RelationTerm> {
    let mut out = Vec::new();
    for j in 1..=d {
        for i in 0..=d - j {
            out.push(RelationTerm::Lhs { e: d - j + 1, i, j });
        }
    }
    out
}

/// `2^{d−1}` terms, one per composition of `d`.
pub fn rhs_terms(d: usize) -> Vec<RelationTerm> {
    compositions(d)
        .into_iter()
        .map(|parts| RelationTerm::Rhs { parts })
        .collect()
}

/// Every relation term paired with its boundary piece.
pub fn facet_bijection(d: usize) -> Vec<(RelationTerm, FacetLabel)> {
    lhs_terms(d)
        .into_iter()
        .chain(rhs_terms(d))
        .map(|t| {
            let f = t.facet();
            (t, f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn counts() {
        for d in 1..=8 {
            assert_eq!(lhs_terms(d).len(), d * (d + 1) / 2);
            assert_eq!(rhs_terms(d).len(), 1 << (d - 1));
        }
    }

    #[test]
    fn arity_three_examples() {
        let t = RelationTerm::Lhs { e: 2, i: 0, j: 2 };
        assert_eq!(t.facet(), FacetLabel::Type1 { e: 2, i: 0 });
        let t = RelationTerm::Rhs { parts: vec![2, 1] };
        assert_eq!(t.facet(), FacetLabel::Type2 { parts: vec![2, 1] });
        let t = RelationTerm::Lhs { e: 3, i: 2, j: 1 };
        assert_eq!(t.facet(), FacetLabel::FloerIncoming(3));
        assert_eq!(
            RelationTerm::Rhs { parts: vec![3] }.facet(),
            FacetLabel::FloerOutgoing
        );
    }

    #[test]
    fn tree_facets_are_hit_exactly_once() {
        for d in 2..=6 {
            let labels: Vec<_> = facet_bijection(d).into_iter().map(|(_, f)| f).collect();
            let set: BTreeSet<_> = labels.iter().cloned().collect();
            assert_eq!(set.len(), labels.len());
            let tree_facets: BTreeSet<_> = labels
                .into_iter()
                .filter(|f| matches!(f, FacetLabel::Type1 { .. } | FacetLabel::Type2 { .. }))
                .collect();
            let expected: BTreeSet<_> = FacetLabel::all_codim_one(d).into_iter().collect();
            assert_eq!(tree_facets, expected);
        }
    }
}
