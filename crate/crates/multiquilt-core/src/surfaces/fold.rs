//! Folding a quilted strip into a single strip over a product target.

/// Correspondence between a quilted strip with `n` unit-width patches and one strip mapping to
/// the `n`-fold product. Patch `m` (1-based) becomes factor `m`, reflected `t ↦ 1 − t` when `m`
/// is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldMap {
    n: usize,
}

pub fn fold_quilted_strip(n: usize) -> FoldMap {
    assert!(n >= 1, "a quilted strip has at least one patch");
    FoldMap { n }
}

impl FoldMap {
    pub fn patches(&self) -> usize {
        self.n
    }

    pub fn reflects(&self, m: usize) -> bool {
        assert!((1..=self.n).contains(&m), "patch index out of range");
        m % 2 == 0
    }

    /// Coordinates on factor `m` of the point `(s, t)` of patch `m`. The map is an involution.
    pub fn apply(&self, m: usize, s: f64, t: f64) -> (f64, f64) {
        if self.reflects(m) {
            (s, 1.0 - t)
        } else {
            (s, t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_patch_is_identity() {
        let f = fold_quilted_strip(1);
        assert_eq!(f.apply(1, 0.3, 0.25), (0.3, 0.25));
    }

    #[test]
    fn even_factors_reflect() {
        let f = fold_quilted_strip(2);
        assert_eq!(f.apply(2, 1.5, 0.25), (1.5, 0.75));
    }

    #[test]
    fn involution() {
        let f = fold_quilted_strip(5);
        for m in 1..=5 {
            for &(s, t) in &[(0.0, 0.0), (-2.5, 0.125), (7.0, 1.0)] {
                let (s1, t1) = f.apply(m, s, t);
                assert_eq!(f.apply(m, s1, t1), (s, t));
            }
        }
    }
}
