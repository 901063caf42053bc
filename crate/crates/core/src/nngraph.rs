//! Nearest-neighbor graph `G_{k-1}`, the extended graph `H`, and the
//! admissibility test for uncoded placements.
//!
//! `G_{k-1}` gives each node `v` an in-edge from each of its `k-1` least-RTT
//! neighbors `In(v)`. When RTTs tie at the cut-off there are several valid
//! graphs; [`enumerate_nngs`] lists them all (up to a cap).

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{NetworkSpec, Placement};

/// Default cap on the number of tie-enumerated nearest-neighbor graphs.
pub const DEFAULT_NNG_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Among equal RTTs prefer the smaller node id (string order).
    #[default]
    NodeId,
    /// Among equal RTTs prefer the smaller node index.
    NodeIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NearestNeighborGraph {
    /// `in_sets[v]` = `In(v)`, sorted by node index.
    in_sets: Vec<Vec<usize>>,
    /// `out_sets[s]` = `{v : s in In(v)}`, sorted.
    #[serde(skip)]
    out_sets: Vec<Vec<usize>>,
}

impl NearestNeighborGraph {
    pub fn from_in_sets(mut in_sets: Vec<Vec<usize>>) -> Self {
        let n = in_sets.len();
        let mut out_sets = vec![Vec::new(); n];
        for (v, ins) in in_sets.iter_mut().enumerate() {
            ins.sort_unstable();
            for &s in ins.iter() {
                out_sets[s].push(v);
            }
        }
        NearestNeighborGraph { in_sets, out_sets }
    }

    pub fn node_count(&self) -> usize {
        self.in_sets.len()
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_sets[v]
    }

    pub fn out_neighbors(&self, s: usize) -> &[usize] {
        &self.out_sets[s]
    }

    /// `Γ⁻(v) = {v} ∪ In(v)`, sorted.
    pub fn closed_in(&self, v: usize) -> Vec<usize> {
        let mut out = self.in_sets[v].clone();
        out.push(v);
        out.sort_unstable();
        out
    }

    /// `Γ⁺(s) = {s} ∪ {v : s ∈ In(v)}`, sorted.
    pub fn closed_out(&self, s: usize) -> Vec<usize> {
        let mut out = self.out_sets[s].clone();
        out.push(s);
        out.sort_unstable();
        out
    }

    /// Directed edges `(s, v)` meaning `s ∈ In(v)`, ordered by `v` then `s`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.in_sets
            .iter()
            .enumerate()
            .flat_map(|(v, ins)| ins.iter().map(move |&s| (s, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.in_sets.iter().map(Vec::len).sum()
    }

    /// Checks the defining conditions against `spec`: every `In(v)` has
    /// `k-1` members other than `v`, and nothing outside `Γ⁻(v)` is strictly
    /// closer to `v` than a member of `In(v)`.
    pub fn is_valid_for(&self, spec: &NetworkSpec) -> bool {
        let n = spec.node_count();
        let k = spec.file_count();
        if self.node_count() != n || k > n {
            return false;
        }
        (0..n).all(|v| {
            let ins = &self.in_sets[v];
            if ins.len() != k - 1 || ins.contains(&v) || ins.iter().any(|&s| s >= n) {
                return false;
            }
            let closed = self.closed_in(v);
            let outside = (0..n).filter(|u| !closed.contains(u));
            let farthest_in = ins.iter().map(|&s| spec.rtt(s, v)).max();
            match farthest_in {
                None => true,
                Some(far) => outside.into_iter().all(|u| spec.rtt(u, v) >= far),
            }
        })
    }
}

/// Candidates for `In(v)`: the nodes that must be chosen and the tied
/// nodes at the cut-off RTT from which `needed` more are picked.
struct InSetChoice {
    forced: Vec<usize>,
    tied: Vec<usize>,
    needed: usize,
}

fn in_set_choice(spec: &NetworkSpec, v: usize, tie_break: TieBreak) -> InSetChoice {
    let want = spec.file_count() - 1;
    let mut others: Vec<usize> = (0..spec.node_count()).filter(|&u| u != v).collect();
    match tie_break {
        TieBreak::NodeId => others.sort_by(|&a, &b| {
            spec.rtt(a, v)
                .cmp(spec.rtt(b, v))
                .then_with(|| spec.node_id(a).cmp(spec.node_id(b)))
        }),
        TieBreak::NodeIndex => {
            others.sort_by(|&a, &b| spec.rtt(a, v).cmp(spec.rtt(b, v)).then(a.cmp(&b)))
        }
    }
    if want == 0 {
        return InSetChoice {
            forced: Vec::new(),
            tied: Vec::new(),
            needed: 0,
        };
    }
    let cutoff = *spec.rtt(others[want - 1], v);
    let forced: Vec<usize> = others
        .iter()
        .copied()
        .filter(|&u| spec.rtt(u, v) < &cutoff)
        .collect();
    let tied: Vec<usize> = others
        .iter()
        .copied()
        .filter(|&u| spec.rtt(u, v) == &cutoff)
        .collect();
    let needed = want - forced.len();
    InSetChoice {
        forced,
        tied,
        needed,
    }
}

fn check_sizes(spec: &NetworkSpec) -> Result<()> {
    spec.require_unit_capacity()?;
    let (n, k) = (spec.node_count(), spec.file_count());
    if k > n {
        return Err(Error::TooManyFiles { k, n });
    }
    Ok(())
}

/// Builds `G_{k-1}` with a deterministic rule for RTT ties.
pub fn build_nng(spec: &NetworkSpec, tie_break: TieBreak) -> Result<NearestNeighborGraph> {
    check_sizes(spec)?;
    let in_sets = (0..spec.node_count())
        .map(|v| {
            let choice = in_set_choice(spec, v, tie_break);
            let mut ins = choice.forced;
            ins.extend(choice.tied.into_iter().take(choice.needed));
            ins
        })
        .collect();
    Ok(NearestNeighborGraph::from_in_sets(in_sets))
}

#[derive(Debug, Clone)]
pub struct NngEnumeration {
    pub graphs: Vec<NearestNeighborGraph>,
    /// Number of valid graphs in total (saturating).
    pub total: u128,
    pub truncated: bool,
}

/// All valid `G_{k-1}` under RTT ties, at most `cap` of them.
///
/// Graphs are ordered as the product of per-node choices (node 0 varies
/// slowest, choices in node-id order), so the first graph equals
/// `build_nng(spec, TieBreak::NodeId)`.
pub fn enumerate_nngs(spec: &NetworkSpec, cap: usize) -> Result<NngEnumeration> {
    check_sizes(spec)?;
    let cap = cap.max(1);
    let per_node: Vec<Vec<Vec<usize>>> = (0..spec.node_count())
        .map(|v| {
            let choice = in_set_choice(spec, v, TieBreak::NodeId);
            choice
                .tied
                .iter()
                .copied()
                .combinations(choice.needed)
                .map(|picked| {
                    let mut ins = choice.forced.clone();
                    ins.extend(picked);
                    ins
                })
                .collect()
        })
        .collect();
    let total = per_node
        .iter()
        .fold(1u128, |acc, opts| acc.saturating_mul(opts.len() as u128));
    let graphs: Vec<NearestNeighborGraph> = per_node
        .into_iter()
        .multi_cartesian_product()
        .take(cap)
        .map(NearestNeighborGraph::from_in_sets)
        .collect();
    Ok(NngEnumeration {
        truncated: total > graphs.len() as u128,
        graphs,
        total,
    })
}

/// Undirected graph `H`: `v` joined to each member of `In(v)`, and the
/// members of `In(v)` joined pairwise, so every `Γ⁻(v)` is a clique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedGraph {
    adjacency: Vec<BTreeSet<usize>>,
    /// Known cliques (the sets `Γ⁻(v)` when built from a nearest-neighbor graph).
    cliques: Vec<Vec<usize>>,
}

impl ExtendedGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
        ExtendedGraph {
            adjacency,
            cliques: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Sorted edge list with `a < b`; the canonical form used for hashing.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(i, &a)| nodes[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }
}

pub fn build_extended_graph(nng: &NearestNeighborGraph) -> ExtendedGraph {
    let n = nng.node_count();
    let mut edges = Vec::new();
    for v in 0..n {
        let ins = nng.in_neighbors(v);
        edges.extend(ins.iter().map(|&s| (v, s)));
        edges.extend(ins.iter().copied().tuple_combinations::<(usize, usize)>());
    }
    let mut h = ExtendedGraph::from_edges(n, edges);
    h.cliques = (0..n).map(|v| nng.closed_in(v)).collect();
    h
}

/// True iff every `Γ⁻(v)` holds `k` pairwise distinct files.
pub fn is_admissible(placement: &Placement, nng: &NearestNeighborGraph) -> bool {
    if placement.len() != nng.node_count() {
        return false;
    }
    let mut seen = vec![usize::MAX; placement.files().iter().max().map_or(0, |&j| j + 1)];
    (0..nng.node_count()).all(|v| {
        std::iter::once(v)
            .chain(nng.in_neighbors(v).iter().copied())
            .all(|s| {
                let j = placement.file_of(s);
                let fresh = seen[j] != v;
                seen[j] = v;
                fresh
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::ex1;
    use crate::rational::{q, qi, Q};

    fn spec_from(rtt: Vec<Vec<i128>>, k: usize) -> NetworkSpec {
        let n = rtt.len();
        let ids = (0..n).map(|i| format!("n{i}")).collect();
        let rtt = rtt
            .into_iter()
            .map(|r| r.into_iter().map(qi).collect())
            .collect();
        let demands = vec![vec![Q::new(1, (n * k) as i128); k]; n];
        NetworkSpec::unit(ids, rtt, demands, k).unwrap()
    }

    #[test]
    fn ex1_in_sets() {
        let g = build_nng(&ex1(), TieBreak::NodeId).unwrap();
        assert_eq!(g.in_neighbors(0), &[1, 3]);
        assert_eq!(g.in_neighbors(1), &[0, 3]);
        assert_eq!(g.in_neighbors(2), &[1, 3]);
        assert_eq!(g.in_neighbors(3), &[0, 1]);
        assert_eq!(g.closed_out(0), vec![0, 1, 3]);
        assert_eq!(g.closed_out(2), vec![2]);
        assert!(g.is_valid_for(&ex1()));
        assert_eq!(g.edge_count(), 4 * 2);
    }

    #[test]
    fn n_equals_k_takes_everyone() {
        let spec = spec_from(vec![vec![0, 3, 8], vec![3, 0, 1], vec![8, 1, 0]], 3);
        let g = build_nng(&spec, TieBreak::NodeIndex).unwrap();
        for v in 0..3 {
            let expected: Vec<usize> = (0..3).filter(|&u| u != v).collect();
            assert_eq!(g.in_neighbors(v), expected.as_slice());
        }
        let h = build_extended_graph(&g);
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn k_too_large() {
        let spec = spec_from(vec![vec![0, 1], vec![1, 0]], 2);
        assert!(build_nng(&spec, TieBreak::NodeId).is_ok());
        let spec3 = NetworkSpec::unit(
            spec.node_ids().to_vec(),
            spec.rtt_matrix().to_vec(),
            vec![vec![q(1, 6); 3]; 2],
            3,
        )
        .unwrap();
        assert!(matches!(
            build_nng(&spec3, TieBreak::NodeId),
            Err(Error::TooManyFiles { k: 3, n: 2 })
        ));
    }

    #[test]
    fn all_ties_enumerate_eight_graphs() {
        let spec = spec_from(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]], 2);
        let e = enumerate_nngs(&spec, 100).unwrap();
        assert_eq!(e.graphs.len(), 8);
        assert_eq!(e.total, 8);
        assert!(!e.truncated);
        let distinct: BTreeSet<_> = e.graphs.iter().collect();
        assert_eq!(distinct.len(), 8);
        assert!(e.graphs.iter().all(|g| g.is_valid_for(&spec)));

        let capped = enumerate_nngs(&spec, 3).unwrap();
        assert_eq!(capped.graphs.len(), 3);
        assert!(capped.truncated);
    }

    #[test]
    fn ex1_has_one_nng() {
        let e = enumerate_nngs(&ex1(), DEFAULT_NNG_CAP).unwrap();
        assert_eq!(e.graphs.len(), 1);
        assert_eq!(e.graphs[0], build_nng(&ex1(), TieBreak::NodeId).unwrap());
    }

    #[test]
    fn ex1_extended_graph() {
        let h = build_extended_graph(&build_nng(&ex1(), TieBreak::NodeId).unwrap());
        // A-B, A-D, B-C, B-D, C-D
        assert_eq!(h.edges(), vec![(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(!h.has_edge(0, 2));
        assert!(h.cliques().iter().all(|c| h.is_clique(c)));
    }

    #[test]
    fn k2_extended_graph_is_undirected_g1() {
        let spec = spec_from(
            vec![
                vec![0, 1, 5, 9],
                vec![1, 0, 3, 8],
                vec![5, 3, 0, 2],
                vec![9, 8, 2, 0],
            ],
            2,
        );
        let g = build_nng(&spec, TieBreak::NodeId).unwrap();
        let h = build_extended_graph(&g);
        let mut undirected: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        undirected.sort();
        undirected.dedup();
        assert_eq!(h.edges(), undirected);
    }

    #[test]
    fn admissibility_on_ex1() {
        let g = build_nng(&ex1(), TieBreak::NodeId).unwrap();
        assert!(is_admissible(&Placement::new(vec![2, 1, 2, 0]), &g));
        assert!(!is_admissible(&Placement::new(vec![1, 1, 2, 0]), &g));
        assert!(!is_admissible(&Placement::new(vec![2, 1, 2]), &g));
    }

    #[test]
    fn tie_break_variants_are_both_valid() {
        let spec = spec_from(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]], 2);
        let by_id = build_nng(&spec, TieBreak::NodeId).unwrap();
        let by_index = build_nng(&spec, TieBreak::NodeIndex).unwrap();
        assert!(by_id.is_valid_for(&spec));
        assert!(by_index.is_valid_for(&spec));
    }

    #[test]
    fn invalid_graph_is_detected() {
        let spec = ex1();
        // C takes A (RTT 9) instead of D (RTT 5)
        let g = NearestNeighborGraph::from_in_sets(vec![
            vec![1, 3],
            vec![0, 3],
            vec![0, 1],
            vec![0, 1],
        ]);
        assert!(!g.is_valid_for(&spec));
    }
}
