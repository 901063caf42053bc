//! Linear storage codes: `(X_1..X_n) = (W_1..W_k) G` over a finite field.

use crate::error::{Error, Result};
use crate::model::Placement;
use crate::nngraph::NearestNeighborGraph;

use super::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    /// `k×n` generator matrix, entries already reduced into the field.
    generator: Vec<Vec<u32>>,
}

impl LinearCode {
    /// Builds a code from integer entries, reduced into the field of the
    /// given order. Fails unless `G` has full row rank `k ≤ n`.
    pub fn new(field_order: u64, generator: Vec<Vec<i64>>) -> Result<Self> {
        let field = Field::with_order(field_order)?;
        let k = generator.len();
        if k == 0 {
            return Err(Error::InvalidCode("generator matrix has no rows".into()));
        }
        let n = generator[0].len();
        if generator.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCode("generator rows differ in length".into()));
        }
        if k > n {
            return Err(Error::InvalidCode(format!(
                "k = {k} rows exceed n = {n} columns"
            )));
        }
        let generator = generator
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| field.element(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(field, generator)
    }

    pub fn from_elements(field: Field, generator: Vec<Vec<u32>>) -> Result<Self> {
        let k = generator.len();
        let r = rank(&field, &generator);
        if r != k {
            return Err(Error::RankDeficient { rank: r, k });
        }
        Ok(LinearCode { field, generator })
    }

    /// Uncoded storage as a code: column `v` is the unit vector `e_{φ(v)}`.
    pub fn from_placement(field_order: u64, placement: &Placement, k: usize) -> Result<Self> {
        let field = Field::with_order(field_order)?;
        let n = placement.len();
        let mut g = vec![vec![0u32; n]; k];
        for (v, &j) in placement.files().iter().enumerate() {
            if j >= k {
                return Err(Error::InvalidPlacement(format!(
                    "file index {} out of range",
                    j + 1
                )));
            }
            g[j][v] = 1;
        }
        Self::from_elements(field, g)
    }

    /// `k×n` Cauchy matrix `1 / (x_i - y_j)` with `x_i = i`, `y_j = k + j`.
    /// Every `k×k` minor is nonsingular, so the code is MDS. Needs a prime
    /// field with at least `n + k` elements.
    pub fn cauchy(field_order: u64, k: usize, n: usize) -> Result<Self> {
        let field = Field::with_order(field_order)?;
        if !matches!(field, Field::Prime(_)) || field.order() < (n + k) as u64 {
            return Err(Error::InvalidCode(format!(
                "Cauchy construction needs a prime field of order >= {}",
                n + k
            )));
        }
        let g = (0..k)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let diff = field.sub(i as u32, (k + j) as u32);
                        field.inv(diff).expect("x_i and y_j are distinct")
                    })
                    .collect()
            })
            .collect();
        Self::from_elements(field, g)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn n(&self) -> usize {
        self.generator[0].len()
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.generator
    }

    /// Some `x` with `G x = e_j` and support inside `columns`.
    pub fn recover_within(&self, j: usize, columns: &[usize]) -> Option<Vec<u32>> {
        let sub: Vec<Vec<u32>> = self
            .generator
            .iter()
            .map(|row| columns.iter().map(|&c| row[c]).collect())
            .collect();
        let (x0, _) = solution_space(&self.field, &sub, &unit(self.k(), j))?;
        let mut x = vec![0; self.n()];
        for (i, &c) in columns.iter().enumerate() {
            x[c] = x0[i];
        }
        Some(x)
    }

    /// Every node can decode every file from its closed in-neighborhood
    /// `Γ⁻(v)` alone, i.e. recovery traffic stays on the graph's edges.
    pub fn is_admissible(&self, nng: &NearestNeighborGraph) -> bool {
        nng.node_count() == self.n()
            && (0..self.n()).all(|v| {
                let closed = nng.closed_in(v);
                (0..self.k()).all(|j| self.recover_within(j, &closed).is_some())
            })
    }
}

pub(crate) fn unit(k: usize, j: usize) -> Vec<u32> {
    let mut e = vec![0; k];
    e[j] = 1;
    e
}

/// Reduced row echelon form in place; returns the pivot column of each
/// pivot row.
fn rref(field: &Field, m: &mut [Vec<u32>], width: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for col in 0..m[i].len() {
                    let delta = field.mul(factor, m[r][col]);
                    m[i][col] = field.sub(m[i][col], delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<u32>]) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    rref(field, &mut m, width).len()
}

/// All solutions of `A x = b`: a particular solution (free variables zero)
/// and a basis of the null space of `A`. `None` if inconsistent.
pub(crate) fn solution_space(
    field: &Field,
    a: &[Vec<u32>],
    b: &[u32],
) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(field, &mut aug, n);
    // inconsistent if some zero row has nonzero rhs
    if aug.iter().skip(pivots.len()).any(|row| row[n] != 0) {
        return None;
    }
    let mut x0 = vec![0; n];
    for (r, &c) in pivots.iter().enumerate() {
        x0[c] = aug[r][n];
    }
    let basis = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = field.neg(aug[r][free]);
            }
            v
        })
        .collect();
    Some((x0, basis))
}
