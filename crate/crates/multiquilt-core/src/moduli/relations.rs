//! Exact linear relations among edge lengths.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::trees::{Edge, RibbonTree};

pub type Q = Ratio<i128>;

/// A homogeneous linear system `Σ c_e λ_e = 0` over the finite edges of a tree, stored in
/// reduced row echelon form with each row scaled to primitive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSystem {
    variables: Vec<Edge>,
    rows: Vec<Vec<i128>>,
}

impl RelationSystem {
    /// Reduces arbitrary rows (one coefficient per variable).
    pub fn from_rows(variables: Vec<Edge>, rows: &[Vec<i128>]) -> RelationSystem {
        let n = variables.len();
        let mut m: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), n, "row width must match the variable count");
                r.iter().map(|&c| Q::from_integer(c)).collect()
            })
            .collect();
        rref(&mut m, n);
        let rows = m.into_iter().map(|r| primitive(&r)).collect();
        RelationSystem { variables, rows }
    }

    pub fn variables(&self) -> &[Edge] {
        &self.variables
    }

    /// Rows of the reduced system, each a primitive integer vector with positive pivot.
    pub fn equations(&self) -> &[Vec<i128>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Same variables and same solution space.
    pub fn is_equivalent(&self, other: &RelationSystem) -> bool {
        self == other
    }

    /// Largest absolute residual of the system at finite `lengths`.
    pub fn residual(&self, lengths: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                libm::fabs(
                    r.iter()
                        .zip(lengths)
                        .map(|(&c, &x)| c as f64 * x)
                        .sum::<f64>(),
                )
            })
            .fold(0.0, f64::max)
    }
}

/// Relations expressing that all colored vertices are equidistant from the root: one row
/// `path(c_j) − path(c_1)` per colored vertex after the first, reduced.
pub fn relations(tree: &RibbonTree) -> RelationSystem {
    let edges = tree.edges();
    let colored = tree.colored_vertices();
    let indicator = |v: usize| {
        let mut row = vec![0i128; edges.len()];
        for c in tree.root_path(v) {
            row[c - 1] += 1;
        }
        row
    };
    let rows: Vec<Vec<i128>> = match colored.split_first() {
        None => Vec::new(),
        Some((&first, rest)) => {
            let base = indicator(first);
            rest.iter()
                .map(|&v| indicator(v).iter().zip(&base).map(|(a, b)| a - b).collect())
                .collect()
        }
    };
    RelationSystem::from_rows(edges, &rows)
}

fn rref(m: &mut Vec<Vec<Q>>, ncols: usize) {
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(p) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..ncols {
                    let sub = f * m[pivot_row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
}

fn primitive(row: &[Q]) -> Vec<i128> {
    let lcm = row.iter().fold(1i128, |acc, q| acc.lcm(q.denom()));
    let ints: Vec<i128> = row
        .iter()
        .map(|q| (q * Q::from_integer(lcm)).to_integer())
        .collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    let g = if g.is_zero() { i128::one() } else { g.abs() };
    ints.into_iter().map(|x| x / g).collect()
}
