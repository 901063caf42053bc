//! Latency metrics for placements and linear codes.
//!
//! Node `v` decoding file `j` waits for the slowest node it contacts, so
//! `ℓ(v, j) = max{τ(s, v) : x_s ≠ 0}` for the chosen recovery vector `x`.
//! For uncoded placements that is the RTT to the nearest holder of `j`.
//! Reports carry the per-node worst case `ℓ_max(v)`, the demand-weighted
//! average `L_avg`, and the lower bound `λ(v, k-1)` on `ℓ_max(v)`.

pub mod code;
pub mod field;

use num_traits::Zero;
use serde::Serialize;

use crate::assignment::TxLatencyMatrix;
use crate::error::{Error, Result};
use crate::model::{expand_multifile, MultiPlacement, NetworkSpec, Placement};
use crate::nngraph::{is_admissible, NearestNeighborGraph};
use crate::rational::{max_q, sum_q, Q};

pub use code::LinearCode;
pub use field::Field;

/// Default cap on the number of recovery vectors enumerated per file.
pub const DEFAULT_CODE_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyReport {
    /// `latencies[v][j]` = `ℓ(v, j)`.
    pub latencies: Vec<Vec<Q>>,
    pub worst_case: Vec<Q>,
    pub average: Q,
    pub wc_bounds: Vec<Q>,
}

impl LatencyReport {
    fn assemble(demands: &[Vec<Q>], latencies: Vec<Vec<Q>>, wc_bounds: Vec<Q>) -> Self {
        let worst_case = latencies
            .iter()
            .map(|row| max_q(row).unwrap_or_else(Q::zero))
            .collect();
        let average = latencies
            .iter()
            .zip(demands)
            .flat_map(|(l, p)| l.iter().zip(p).map(|(a, b)| a * b))
            .fold(Q::zero(), |acc, x| acc + x);
        LatencyReport {
            latencies,
            worst_case,
            average,
            wc_bounds,
        }
    }

    /// `ℓ_max(v) = λ(v, k-1)` at every node.
    pub fn meets_wc_bound(&self) -> bool {
        self.worst_case == self.wc_bounds
    }
}

/// `λ(v, k-1)`: the `(k-1)`-th smallest RTT into `v`, counting `τ(v, v) = 0`
/// as the 0-th.
pub fn wc_lower_bounds(spec: &NetworkSpec) -> Vec<Q> {
    let n = spec.node_count();
    let idx = (spec.file_count() - 1).min(n - 1);
    (0..n)
        .map(|v| {
            let mut column: Vec<&Q> = (0..n).map(|u| spec.rtt(u, v)).collect();
            column.sort();
            *column[idx]
        })
        .collect()
}

/// Scores an uncoded placement on unit-capacity nodes: `ℓ(v, j)` is the RTT
/// from the nearest node holding `j`.
pub fn eval_uncoded(spec: &NetworkSpec, placement: &Placement) -> Result<LatencyReport> {
    spec.require_unit_capacity()?;
    let (n, k) = (spec.node_count(), spec.file_count());
    let placement = Placement::checked(placement.files().to_vec(), n, k)?;
    if let Some(j) = (0..k).find(|&j| placement.holders(j).next().is_none()) {
        return Err(Error::FileNotStored(j + 1));
    }
    let latencies = (0..n)
        .map(|v| {
            (0..k)
                .map(|j| {
                    *placement
                        .holders(j)
                        .map(|s| spec.rtt(s, v))
                        .min()
                        .expect("every file has a holder")
                })
                .collect()
        })
        .collect();
    Ok(LatencyReport::assemble(
        spec.demand_matrix(),
        latencies,
        wc_lower_bounds(spec),
    ))
}

/// Scores a placement on multi-slot nodes directly: a node reads its own
/// files at RTT 0 and any other node's files at their mutual RTT. Bounds
/// are those of the unit-capacity expansion.
pub fn eval_multifile(spec: &NetworkSpec, placement: &MultiPlacement) -> Result<LatencyReport> {
    let placement = MultiPlacement::checked(placement.files.clone(), spec)?;
    let (n, k) = (spec.node_count(), spec.file_count());
    let holders: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            (0..n)
                .filter(|&w| placement.files[w].contains(&j))
                .collect()
        })
        .collect();
    if let Some(j) = holders.iter().position(Vec::is_empty) {
        return Err(Error::FileNotStored(j + 1));
    }
    let latencies = (0..n)
        .map(|v| {
            holders
                .iter()
                .map(|hs| *hs.iter().map(|&w| spec.rtt(w, v)).min().expect("non-empty"))
                .collect()
        })
        .collect();
    let expanded = expand_multifile(spec)?;
    let sub_bounds = wc_lower_bounds(&expanded.spec);
    let bounds = (0..n)
        .map(|v| {
            let first = expanded.slots_of(v).next().expect("every node has a slot");
            sub_bounds[first]
        })
        .collect();
    Ok(LatencyReport::assemble(
        spec.demand_matrix(),
        latencies,
        bounds,
    ))
}

/// Receive-side sum `Σ_v Σ_{s ∈ Γ⁻(v)} τ(s, v)·p(v, φ(s))`, valid for
/// placements admissible on `nng`.
pub fn receive_side_avg(
    spec: &NetworkSpec,
    nng: &NearestNeighborGraph,
    placement: &Placement,
) -> Result<Q> {
    spec.require_unit_capacity()?;
    if nng.node_count() != spec.node_count() || placement.len() != spec.node_count() {
        return Err(Error::Dimension(
            "graph, spec and placement sizes differ".into(),
        ));
    }
    if !is_admissible(placement, nng) {
        return Err(Error::NotAdmissible);
    }
    let total = (0..spec.node_count())
        .flat_map(|v| {
            nng.closed_in(v)
                .into_iter()
                .map(move |s| spec.rtt(s, v) * spec.demand(v, placement.file_of(s)))
        })
        .fold(Q::zero(), |acc, x| acc + x);
    Ok(total)
}

/// Transmit-side sum `Σ_s ℓ_tx(s, φ(s))`.
pub fn transmit_side_avg(tx: &TxLatencyMatrix, placement: &Placement) -> Q {
    sum_q((0..tx.node_count()).map(|s| tx.get(s, placement.file_of(s))))
}

/// Recovery vector chosen for one `(v, j)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryVector {
    pub coefficients: Vec<u32>,
    pub support: Vec<usize>,
    #[serde(with = "crate::rational::json")]
    pub latency: Q,
}

/// `vectors[v][j]`: how node `v` decodes file `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryPlan {
    pub vectors: Vec<Vec<RecoveryVector>>,
}

/// Scores a linear code with latency-optimal recovery: for every `(v, j)`,
/// the minimum over all `x` with `G x = e_j` of the largest RTT into `v`
/// among the nodes where `x` is nonzero. The `q^(n-k)` solutions of each
/// file are enumerated, so that count must stay within `budget`.
pub fn eval_linear_code(
    spec: &NetworkSpec,
    code: &LinearCode,
    budget: u64,
) -> Result<(LatencyReport, RecoveryPlan)> {
    spec.require_unit_capacity()?;
    let (n, k) = (spec.node_count(), spec.file_count());
    if code.n() != n || code.k() != k {
        return Err(Error::Dimension(format!(
            "code is {}x{}, spec needs {k}x{n}",
            code.k(),
            code.n()
        )));
    }
    let field = code.field();
    let q = field.order();
    let free = (n - k) as u32;
    let coset_size = q.checked_pow(free).filter(|&c| c <= budget);
    let Some(coset_size) = coset_size else {
        return Err(Error::BudgetExceeded {
            needed: format!("{q}^{free}"),
            budget,
        });
    };

    let mut best: Vec<Vec<Option<RecoveryVector>>> = vec![vec![None; k]; n];
    for j in 0..k {
        let (x0, basis) = code::solution_space(&field, code.generator(), &code::unit(k, j))
            .expect("full-rank generator reaches every unit vector");
        let mut digits = vec![0u32; basis.len()];
        for _ in 0..coset_size {
            let mut x = x0.clone();
            for (c, b) in digits.iter().zip(&basis) {
                if *c != 0 {
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi = field.add(*xi, field.mul(*c, *bi));
                    }
                }
            }
            let support: Vec<usize> = (0..n).filter(|&s| x[s] != 0).collect();
            for (v, slot) in best.iter_mut().enumerate() {
                let latency = support
                    .iter()
                    .map(|&s| spec.rtt(s, v))
                    .max()
                    .cloned()
                    .unwrap_or_else(Q::zero);
                if slot[j].as_ref().is_none_or(|r| latency < r.latency) {
                    slot[j] = Some(RecoveryVector {
                        coefficients: x.clone(),
                        support: support.clone(),
                        latency,
                    });
                }
            }
            // odometer over field elements
            for d in digits.iter_mut() {
                *d += 1;
                if (*d as u64) < q {
                    break;
                }
                *d = 0;
            }
        }
    }
    let vectors: Vec<Vec<RecoveryVector>> = best
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|r| r.expect("coset is non-empty"))
                .collect()
        })
        .collect();
    let latencies = vectors
        .iter()
        .map(|row| row.iter().map(|r| r.latency).collect())
        .collect();
    let report = LatencyReport::assemble(spec.demand_matrix(), latencies, wc_lower_bounds(spec));
    Ok((report, RecoveryPlan { vectors }))
}
