//! Transmit-latency and color-cost matrices, and the balanced assignment of
//! color classes to files.
//!
//! For an admissible uncoded placement the system-average latency splits
//! into per-source terms: node `s` holding file `j` costs
//! `ℓ_tx(s, j) = Σ_{v ∈ Γ⁺(s)} τ(s, v)·p(v, j)`. Summing those over a color
//! class gives `c(θ, j)`, and the best file for every class is a minimum-cost
//! bijection on the `k×k` matrix `c`.

mod brute;
mod hungarian;

use std::fmt::Debug;
use std::ops::{Add, Sub};

use num_traits::Zero;
use serde::Serialize;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::model::NetworkSpec;
use crate::nngraph::NearestNeighborGraph;
use crate::rational::{sum_q, Q};

pub use brute::{brute_force_assignment, MAX_BRUTE_FORCE_K};
pub use hungarian::{
    hungarian_min_assignment, Assignment, Backend, HungarianOptions, HungarianTrace, TraceStep,
};

/// Scalar usable as an assignment cost. Exact types (rationals, integers)
/// give exact optima.
pub trait Cost: Clone + Ord + Debug + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<T> Cost for T where T: Clone + Ord + Debug + Zero + Add<Output = T> + Sub<Output = T> {}

/// `n×k` matrix of transmit latencies `ℓ_tx(s, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxLatencyMatrix {
    rows: Vec<Vec<Q>>,
}

impl TxLatencyMatrix {
    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn row(&self, s: usize) -> &[Q] {
        &self.rows[s]
    }

    pub fn get(&self, s: usize, j: usize) -> &Q {
        &self.rows[s][j]
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn file_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn column_sums(&self) -> Vec<Q> {
        column_sums(&self.rows, self.file_count())
    }
}

/// `k×k` matrix of color-assignment costs `c(θ, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorCostMatrix {
    rows: Vec<Vec<Q>>,
}

impl ColorCostMatrix {
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        ColorCostMatrix { rows }
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn get(&self, theta: usize, j: usize) -> &Q {
        &self.rows[theta][j]
    }

    pub fn column_sums(&self) -> Vec<Q> {
        column_sums(&self.rows, self.rows.len())
    }

    /// Lower bound on any bijection's cost: the larger of the row-minimum
    /// sum and the column-minimum sum.
    pub fn lower_bound(&self) -> Q {
        let k = self.rows.len();
        let row_min = sum_q(
            self.rows
                .iter()
                .filter_map(|r| r.iter().min())
                .collect::<Vec<_>>(),
        );
        let col_min = sum_q(
            (0..k)
                .filter_map(|j| self.rows.iter().map(|r| &r[j]).min())
                .collect::<Vec<_>>(),
        );
        row_min.max(col_min)
    }
}

fn column_sums(rows: &[Vec<Q>], width: usize) -> Vec<Q> {
    (0..width)
        .map(|j| sum_q(rows.iter().map(|r| &r[j])))
        .collect()
}

/// Bijection `π` from color classes to files, with its total cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FileMap {
    /// `files[θ]` = 0-based file index assigned to class `θ`.
    files: Vec<usize>,
}

impl FileMap {
    pub fn new(files: Vec<usize>) -> Self {
        FileMap { files }
    }

    pub fn identity(k: usize) -> Self {
        FileMap {
            files: (0..k).collect(),
        }
    }

    pub fn file_of(&self, theta: usize) -> usize {
        self.files[theta]
    }

    pub fn files(&self) -> &[usize] {
        &self.files
    }

    pub fn is_bijection(&self) -> bool {
        let k = self.files.len();
        let mut seen = vec![false; k];
        self.files
            .iter()
            .all(|&j| j < k && !std::mem::replace(&mut seen[j], true))
    }

    pub fn cost<T: Cost>(&self, matrix: &[Vec<T>]) -> T {
        self.files
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (theta, &j)| acc + matrix[theta][j].clone())
    }

    pub fn inverse(&self) -> FileMap {
        let mut inv = vec![0; self.files.len()];
        for (theta, &j) in self.files.iter().enumerate() {
            inv[j] = theta;
        }
        FileMap { files: inv }
    }
}

pub fn tx_latency_matrix(
    spec: &NetworkSpec,
    nng: &NearestNeighborGraph,
) -> Result<TxLatencyMatrix> {
    spec.require_unit_capacity()?;
    if nng.node_count() != spec.node_count() {
        return Err(Error::Dimension(format!(
            "graph has {} nodes, spec has {}",
            nng.node_count(),
            spec.node_count()
        )));
    }
    let k = spec.file_count();
    let rows = (0..spec.node_count())
        .map(|s| {
            (0..k)
                .map(|j| {
                    nng.closed_out(s)
                        .into_iter()
                        .fold(Q::zero(), |acc, v| acc + spec.rtt(s, v) * spec.demand(v, j))
                })
                .collect()
        })
        .collect();
    Ok(TxLatencyMatrix { rows })
}

/// `c(θ, j) = Σ_{σ(s) = θ} ℓ_tx(s, j)`.
pub fn color_cost_matrix(coloring: &Coloring, tx: &TxLatencyMatrix) -> Result<ColorCostMatrix> {
    let k = tx.file_count();
    if coloring.class_count() != k {
        return Err(Error::Dimension(format!(
            "coloring has {} classes, expected {k}",
            coloring.class_count()
        )));
    }
    if coloring.node_count() != tx.node_count()
        || coloring
            .classes()
            .iter()
            .flatten()
            .any(|&s| s >= tx.node_count())
    {
        return Err(Error::Dimension(
            "coloring and transmit matrix cover different nodes".into(),
        ));
    }
    let rows = coloring
        .classes()
        .iter()
        .map(|class| {
            (0..k)
                .map(|j| sum_q(class.iter().map(|&s| tx.get(s, j))))
                .collect()
        })
        .collect();
    Ok(ColorCostMatrix { rows })
}
