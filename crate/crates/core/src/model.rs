//! Network specifications, validation and the multi-file node reduction.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{q, sum_q, Q};

/// Probability mass must sum to one within this tolerance.
pub fn probability_tolerance() -> Q {
    q(1, 1_000_000_000)
}

/// A geo-distributed storage network: `n` nodes, `k` files, the symmetric RTT
/// matrix and the demand-probability matrix, plus per-node slot capacities.
///
/// Construction only checks shape (dimensions, unique ids, non-negativity).
/// The modeling invariants are reported by [`validate_spec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    node_ids: Vec<String>,
    capacities: Vec<u32>,
    rtt: Vec<Vec<Q>>,
    demands: Vec<Vec<Q>>,
    file_count: usize,
}

impl NetworkSpec {
    pub fn new(
        node_ids: Vec<String>,
        capacities: Vec<u32>,
        rtt: Vec<Vec<Q>>,
        demands: Vec<Vec<Q>>,
        file_count: usize,
    ) -> Result<Self> {
        let n = node_ids.len();
        let malformed = |msg: String| Err(Error::MalformedSpec(msg));
        if n == 0 {
            return malformed("network has no nodes".into());
        }
        if file_count == 0 {
            return malformed("file count must be positive".into());
        }
        let mut seen = HashSet::new();
        for id in &node_ids {
            if id.is_empty() {
                return malformed("empty node id".into());
            }
            if !seen.insert(id.as_str()) {
                return malformed(format!("duplicate node id {id:?}"));
            }
        }
        if capacities.len() != n {
            return malformed(format!("{} capacities for {n} nodes", capacities.len()));
        }
        if let Some(v) = capacities.iter().position(|&m| m == 0) {
            return malformed(format!("node {:?} has zero capacity", node_ids[v]));
        }
        if rtt.len() != n || rtt.iter().any(|row| row.len() != n) {
            return malformed(format!("rtt must be a {n}x{n} matrix"));
        }
        if demands.len() != n || demands.iter().any(|row| row.len() != file_count) {
            return malformed(format!("demands must be a {n}x{file_count} matrix"));
        }
        if rtt.iter().flatten().any(|t| t.is_negative()) {
            return malformed("negative RTT".into());
        }
        if demands.iter().flatten().any(|p| p.is_negative()) {
            return malformed("negative demand probability".into());
        }
        Ok(NetworkSpec {
            node_ids,
            capacities,
            rtt,
            demands,
            file_count,
        })
    }

    /// Unit-capacity convenience constructor.
    pub fn unit(
        node_ids: Vec<String>,
        rtt: Vec<Vec<Q>>,
        demands: Vec<Vec<Q>>,
        file_count: usize,
    ) -> Result<Self> {
        let n = node_ids.len();
        Self::new(node_ids, vec![1; n], rtt, demands, file_count)
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn file_count(&self) -> usize {
        self.file_count
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn node_id(&self, v: usize) -> &str {
        &self.node_ids[v]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_ids.iter().position(|x| x == id)
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn total_capacity(&self) -> u64 {
        self.capacities.iter().map(|&m| m as u64).sum()
    }

    pub fn is_unit_capacity(&self) -> bool {
        self.capacities.iter().all(|&m| m == 1)
    }

    pub fn rtt(&self, u: usize, v: usize) -> &Q {
        &self.rtt[u][v]
    }

    pub fn rtt_matrix(&self) -> &[Vec<Q>] {
        &self.rtt
    }

    pub fn demand(&self, v: usize, j: usize) -> &Q {
        &self.demands[v][j]
    }

    pub fn demand_matrix(&self) -> &[Vec<Q>] {
        &self.demands
    }

    pub fn total_demand(&self) -> Q {
        sum_q(self.demands.iter().flatten())
    }

    /// Copy of this spec with a replacement demand matrix.
    pub fn with_demands(&self, demands: Vec<Vec<Q>>) -> Result<Self> {
        Self::new(
            self.node_ids.clone(),
            self.capacities.clone(),
            self.rtt.clone(),
            demands,
            self.file_count,
        )
    }

    pub(crate) fn require_unit_capacity(&self) -> Result<()> {
        if self.is_unit_capacity() {
            Ok(())
        } else {
            Err(Error::NotUnitCapacity)
        }
    }
}

/// One violated modeling invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    AsymmetricRtt {
        u: String,
        v: String,
    },
    NonzeroDiagonal {
        v: String,
    },
    /// `τ(u, w) > τ(u, v) + τ(v, w)`.
    TriangleInequality {
        u: String,
        v: String,
        w: String,
    },
    ProbabilitySum {
        total: String,
    },
    CapacityShortfall {
        total_capacity: u64,
        files: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AsymmetricRtt { u, v } => write!(f, "asymmetric RTT between {u} and {v}"),
            Violation::NonzeroDiagonal { v } => write!(f, "nonzero RTT from {v} to itself"),
            Violation::TriangleInequality { u, v, w } => {
                write!(
                    f,
                    "triangle inequality broken: rtt({u},{w}) > rtt({u},{v}) + rtt({v},{w})"
                )
            }
            Violation::ProbabilitySum { total } => {
                write!(f, "demand probabilities sum to {total}, expected 1")
            }
            Violation::CapacityShortfall {
                total_capacity,
                files,
            } => {
                write!(
                    f,
                    "total capacity {total_capacity} is below the file count {files}"
                )
            }
        }
    }
}

/// Result of [`validate_spec`]. Triangle-inequality breaches are warnings
/// unless strict mode is requested.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self, strict: bool) -> bool {
        self.errors.is_empty() && (!strict || self.warnings.is_empty())
    }

    /// Violations that fail validation under the given mode.
    pub fn failures(&self, strict: bool) -> Vec<&Violation> {
        let mut out: Vec<&Violation> = self.errors.iter().collect();
        if strict {
            out.extend(self.warnings.iter());
        }
        out
    }

    pub fn into_result(self, strict: bool) -> Result<()> {
        if self.is_ok(strict) {
            return Ok(());
        }
        let msgs: Vec<String> = self
            .failures(strict)
            .iter()
            .map(|v| v.to_string())
            .collect();
        Err(Error::InvalidSpec(msgs.join("; ")))
    }
}

pub fn validate_spec(spec: &NetworkSpec) -> ValidationReport {
    let n = spec.node_count();
    let id = |v: usize| spec.node_id(v).to_string();
    let mut report = ValidationReport::default();

    for v in 0..n {
        if !spec.rtt(v, v).is_zero() {
            report.errors.push(Violation::NonzeroDiagonal { v: id(v) });
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if spec.rtt(u, v) != spec.rtt(v, u) {
                report
                    .errors
                    .push(Violation::AsymmetricRtt { u: id(u), v: id(v) });
            }
        }
    }
    'outer: for u in 0..n {
        for w in 0..n {
            for v in 0..n {
                if spec.rtt(u, w) > &(spec.rtt(u, v) + spec.rtt(v, w)) {
                    report.warnings.push(Violation::TriangleInequality {
                        u: id(u),
                        v: id(v),
                        w: id(w),
                    });
                    // one witness is enough
                    break 'outer;
                }
            }
        }
    }
    let total = spec.total_demand();
    if (total - Q::from_integer(1)).abs() > probability_tolerance() {
        report.errors.push(Violation::ProbabilitySum {
            total: total.to_string(),
        });
    }
    if spec.total_capacity() < spec.file_count() as u64 {
        report.errors.push(Violation::CapacityShortfall {
            total_capacity: spec.total_capacity(),
            files: spec.file_count(),
        });
    }
    report
}

/// Where a unit-capacity sub-node came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlotOrigin {
    pub node: usize,
    pub slot: u32,
}

/// Unit-capacity network obtained by splitting every node into one sub-node
/// per storage slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedSpec {
    pub spec: NetworkSpec,
    pub origin: Vec<SlotOrigin>,
}

impl ExpandedSpec {
    /// Sub-node indices belonging to original node `v`.
    pub fn slots_of(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.origin
            .iter()
            .enumerate()
            .filter(move |(_, o)| o.node == v)
            .map(|(i, _)| i)
    }

    /// Collapses a sub-node placement to one file list per original node.
    pub fn project(&self, placement: &Placement) -> MultiPlacement {
        let n = self.origin.iter().map(|o| o.node + 1).max().unwrap_or(0);
        let mut files = vec![Vec::new(); n];
        for (sub, o) in self.origin.iter().enumerate() {
            files[o.node].push(placement.file_of(sub));
        }
        MultiPlacement { files }
    }
}

/// Splits node `v` into `M_v` sub-nodes. Siblings are 0 RTT apart, cross-node
/// sub-nodes inherit the original RTT, and each sub-node carries `p[v][j] / M_v`.
pub fn expand_multifile(spec: &NetworkSpec) -> Result<ExpandedSpec> {
    validate_spec(spec).into_result(false)?;
    let mut origin = Vec::new();
    let mut ids = Vec::new();
    for (v, &m) in spec.capacities().iter().enumerate() {
        for slot in 0..m {
            origin.push(SlotOrigin { node: v, slot });
            ids.push(if m == 1 {
                spec.node_id(v).to_string()
            } else {
                format!("{}.{}", spec.node_id(v), slot)
            });
        }
    }
    let big_n = origin.len();
    let rtt: Vec<Vec<Q>> = (0..big_n)
        .map(|a| {
            (0..big_n)
                .map(|b| *spec.rtt(origin[a].node, origin[b].node))
                .collect()
        })
        .collect();
    let demands: Vec<Vec<Q>> = origin
        .iter()
        .map(|o| {
            let m = Q::from_integer(spec.capacities()[o.node] as i128);
            (0..spec.file_count())
                .map(|j| spec.demand(o.node, j) / m)
                .collect()
        })
        .collect();
    let expanded = NetworkSpec::unit(ids, rtt, demands, spec.file_count())?;
    Ok(ExpandedSpec {
        spec: expanded,
        origin,
    })
}

/// Uncoded placement on unit-capacity nodes: node `v` stores file `files[v]`
/// (0-based file index).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Placement {
    files: Vec<usize>,
}

impl Placement {
    pub fn new(files: Vec<usize>) -> Self {
        Placement { files }
    }

    pub fn checked(files: Vec<usize>, n: usize, k: usize) -> Result<Self> {
        if files.len() != n {
            return Err(Error::InvalidPlacement(format!(
                "{} entries for {n} nodes",
                files.len()
            )));
        }
        if let Some(&j) = files.iter().find(|&&j| j >= k) {
            return Err(Error::InvalidPlacement(format!(
                "file index {} out of range 1..={k}",
                j + 1
            )));
        }
        Ok(Placement { files })
    }

    pub fn file_of(&self, v: usize) -> usize {
        self.files[v]
    }

    pub fn files(&self) -> &[usize] {
        &self.files
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn holders(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.files
            .iter()
            .enumerate()
            .filter(move |(_, &f)| f == j)
            .map(|(v, _)| v)
    }

    pub fn is_surjective(&self, k: usize) -> bool {
        let present: HashSet<usize> = self.files.iter().copied().collect();
        (0..k).all(|j| present.contains(&j))
    }
}

/// Placement on multi-slot nodes: node `v` stores the files in `files[v]`,
/// one per slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiPlacement {
    pub files: Vec<Vec<usize>>,
}

impl MultiPlacement {
    pub fn checked(files: Vec<Vec<usize>>, spec: &NetworkSpec) -> Result<Self> {
        if files.len() != spec.node_count() {
            return Err(Error::InvalidPlacement(format!(
                "{} nodes listed, spec has {}",
                files.len(),
                spec.node_count()
            )));
        }
        for (v, fs) in files.iter().enumerate() {
            if fs.len() > spec.capacities()[v] as usize {
                return Err(Error::InvalidPlacement(format!(
                    "node {} holds {} files but has capacity {}",
                    spec.node_id(v),
                    fs.len(),
                    spec.capacities()[v]
                )));
            }
            if let Some(&j) = fs.iter().find(|&&j| j >= spec.file_count()) {
                return Err(Error::InvalidPlacement(format!(
                    "file index {} out of range",
                    j + 1
                )));
            }
        }
        Ok(MultiPlacement { files })
    }

    /// Number of copies of each file per node, keyed by file index.
    pub fn counts(&self, v: usize) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &j in &self.files[v] {
            *out.entry(j).or_insert(0) += 1;
        }
        out
    }
}

/// Fixture networks shipped with the crate.
pub mod fixtures {
    use super::*;
    use crate::rational::qi;

    /// The four-node, three-file desk instance: nodes A, B, C, D with
    /// RTTs AB = AD = BD = 2, BC = 7, CD = 5, AC = 9 and the preferential
    /// demand table (each node's favourite file at 0.2, the rest at 0.025).
    pub fn ex1() -> NetworkSpec {
        ex1_with_capacities(vec![1, 1, 1, 1])
    }

    pub fn ex1_with_capacities(capacities: Vec<u32>) -> NetworkSpec {
        let ids = ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect();
        let t = |rows: [[i128; 4]; 4]| {
            rows.iter()
                .map(|r| r.iter().map(|&x| qi(x)).collect())
                .collect()
        };
        let rtt = t([[0, 2, 9, 2], [2, 0, 7, 2], [9, 7, 0, 5], [2, 2, 5, 0]]);
        let hi = q(1, 5);
        let lo = q(1, 40);
        let demands = vec![
            vec![hi, lo, lo],
            vec![lo, hi, lo],
            vec![lo, lo, hi],
            vec![lo, lo, hi],
        ];
        NetworkSpec::new(ids, capacities, rtt, demands, 3).expect("fixture is well formed")
    }

    /// EX1 with every demand equal to `1/12`.
    pub fn ex1_uniform() -> NetworkSpec {
        let spec = ex1();
        spec.with_demands(vec![vec![q(1, 12); 3]; 4])
            .expect("fixture is well formed")
    }
}
