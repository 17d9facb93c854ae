//! Row-banded sparse matrices and banded Cholesky factorization.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::NumericsError;

/// A matrix whose rows are each supported on a contiguous range of columns, with range starts
/// nondecreasing from row to row.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SparseRows {
    ncols: usize,
    rows: Vec<(usize, Vec<f64>)>,
}

impl SparseRows {
    pub fn new(ncols: usize) -> SparseRows {
        SparseRows {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, start: usize, values: Vec<f64>) {
        debug_assert!(start + values.len() <= self.ncols);
        debug_assert!(self.rows.last().is_none_or(|r| r.0 <= start));
        self.rows.push((start, values));
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> (usize, &[f64]) {
        (self.rows[i].0, &self.rows[i].1)
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|(s, v)| v.iter().zip(&x[*s..]).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ncols];
        for ((s, v), &yi) in self.rows.iter().zip(y) {
            for (k, a) in v.iter().enumerate() {
                out[s + k] += a * yi;
            }
        }
        out
    }

    /// `A Aᵀ` in banded storage.
    pub fn gram(&self) -> Banded {
        let n = self.rows.len();
        let mut bw = 0;
        for i in 0..n {
            let end = self.rows[i].0 + self.rows[i].1.len();
            let mut k = i + 1;
            while k < n && self.rows[k].0 < end {
                k += 1;
            }
            bw = bw.max(k - 1 - i);
        }
        let mut g = Banded::zeros(n, bw);
        for i in 0..n {
            let (si, vi) = (&self.rows[i].0, &self.rows[i].1);
            for k in i..n.min(i + bw + 1) {
                let (sk, vk) = (&self.rows[k].0, &self.rows[k].1);
                let lo = (*si).max(*sk);
                let hi = (si + vi.len()).min(sk + vk.len());
                let mut d = 0.0;
                for c in lo..hi {
                    d += vi[c - si] * vk[c - sk];
                }
                g.set(k, i, d);
            }
        }
        g
    }
}

/// A symmetric matrix stored by its lower band.
#[derive(Clone, Debug, PartialEq)]
pub struct Banded {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Banded {
    pub fn zeros(n: usize, bw: usize) -> Banded {
        Banded {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Entry `(i, j)` with `j ≤ i ≤ j + bw`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            return 0.0;
        }
        self.data[i * (self.bw + 1) + self.bw + j - i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw);
        self.data[i * (self.bw + 1) + self.bw + j - i] = v;
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let a = self.get(i, j);
                y[i] += a * x[j];
                if i != j {
                    y[j] += a * x[i];
                }
            }
        }
        y
    }

    /// `L Lᵀ` factorization; fails when a pivot is not clearly positive.
    pub fn cholesky(&self) -> Result<Cholesky, NumericsError> {
        let (n, bw) = (self.n, self.bw);
        let scale = (0..n).map(|i| self.get(i, i)).fold(0.0, f64::max);
        let mut l = self.clone();
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let mut s = l.get(i, j);
                for k in i.saturating_sub(bw).max(j.saturating_sub(bw))..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if !(s > 1e-13 * scale) {
                        return Err(NumericsError::IrregularConfiguration);
                    }
                    l.set(i, i, libm::sqrt(s));
                } else {
                    let d = l.get(j, j);
                    l.set(i, j, s / d);
                }
            }
        }
        Ok(Cholesky { l })
    }
}

/// A banded Cholesky factor.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: Banded,
}

impl Cholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.l.n, self.l.bw);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l.get(i, k) * y[k];
            }
            y[i] = s / self.l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n.min(i + bw + 1) {
                s -= self.l.get(k, i) * y[k];
            }
            y[i] = s / self.l.get(i, i);
        }
        y
    }
}

/// Minimum-norm solution of `A x = b` for `A` of full row rank.
pub(crate) fn min_norm_solve(a: &SparseRows, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    let c = a.gram().cholesky()?;
    Ok(a.mul_transpose(&c.solve(b)))
}

/// Smallest singular value of a full-row-rank `A`: the largest eigenvalue of `(A Aᵀ)⁻¹` by
/// Lanczos iteration with full reorthogonalization.
pub(crate) fn smallest_singular_value(a: &SparseRows) -> Result<f64, NumericsError> {
    let g = a.gram();
    let c = g.cholesky()?;
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let (mut diag, mut off) = (Vec::new(), Vec::new());
    let mut last = 0.0;
    for step in 0..n.min(400) {
        let mut w = c.solve(&q);
        let alpha = dot(&w, &q);
        basis.push(q);
        diag.push(alpha);
        for v in &basis {
            let d = dot(&w, v);
            for (x, y) in w.iter_mut().zip(v) {
                *x -= d * y;
            }
        }
        let beta = libm::sqrt(dot(&w, &w));
        let top = largest_tridiagonal_eigenvalue(&diag, &off);
        if (step >= 4 && libm::fabs(top - last) <= 1e-13 * top) || beta <= 1e-14 * top {
            return Ok(libm::sqrt(1.0 / top));
        }
        last = top;
        off.push(beta);
        q = w.into_iter().map(|x| x / beta).collect();
    }
    Ok(libm::sqrt(1.0 / last))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `d` and off-diagonal
/// `e`, by Sturm-sequence bisection.
fn largest_tridiagonal_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { libm::fabs(e[i - 1]) } else { 0.0 }
            + if i + 1 < n { libm::fabs(e[i]) } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    // Number of eigenvalues below x.
    let below = |x: f64| {
        let mut count = 0;
        let mut p = d[0] - x;
        if p < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let prev = if p == 0.0 { f64::EPSILON } else { p };
            p = d[i] - x - e[i - 1] * e[i - 1] / prev;
            if p < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn normalize(z: &mut [f64]) {
    let n = libm::sqrt(z.iter().map(|x| x * x).sum::<f64>());
    for x in z {
        *x /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SparseRows {
        let mut a = SparseRows::new(5);
        a.push_row(0, vec![2.0, 1.0]);
        a.push_row(1, vec![1.0, 3.0, 1.0]);
        a.push_row(2, vec![1.0, 0.0, 4.0]);
        a
    }

    #[test]
    fn gram_matches_dense_product() {
        let a = example();
        let g = a.gram();
        for i in 0..3 {
            for k in 0..3 {
                let (si, vi) = a.row(i);
                let (sk, vk) = a.row(k);
                let mut d = 0.0;
                for c in 0..5 {
                    let x = if c >= si && c < si + vi.len() {
                        vi[c - si]
                    } else {
                        0.0
                    };
                    let y = if c >= sk && c < sk + vk.len() {
                        vk[c - sk]
                    } else {
                        0.0
                    };
                    d += x * y;
                }
                assert!((g.get(i, k) - d).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn min_norm_solution_solves_and_lies_in_row_space() {
        let a = example();
        let b = [1.0, -2.0, 0.5];
        let x = min_norm_solve(&a, &b).unwrap();
        let r = a.mul(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-12);
        }
        // x = Aᵀ y for some y: check orthogonality to the kernel by perturbing along it.
        let g = a.gram().cholesky().unwrap();
        let y = g.solve(&b);
        let x2 = a.mul_transpose(&y);
        assert_eq!(x, x2);
    }

    #[test]
    fn singular_value_of_diagonal() {
        let mut a = SparseRows::new(3);
        a.push_row(0, vec![3.0]);
        a.push_row(1, vec![0.5]);
        a.push_row(2, vec![2.0]);
        let s = smallest_singular_value(&a).unwrap();
        assert!((s - 0.5).abs() < 1e-9);
    }

    #[test]
    fn tridiagonal_top_eigenvalue() {
        // Eigenvalues of [[2, 1], [1, 2]] are 1 and 3.
        assert!((largest_tridiagonal_eigenvalue(&[2.0, 2.0], &[1.0]) - 3.0).abs() < 1e-12);
        assert!((largest_tridiagonal_eigenvalue(&[5.0], &[]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let mut a = SparseRows::new(2);
        a.push_row(0, vec![1.0, 1.0]);
        a.push_row(0, vec![2.0, 2.0]);
        assert_eq!(
            min_norm_solve(&a, &[1.0, 2.0]),
            Err(NumericsError::IrregularConfiguration)
        );
    }
}
