//! End-to-end planning: expand multi-slot nodes, enumerate nearest-neighbor
//! graphs and colorings of their extended graphs, and solve the class-to-file
//! assignment for each. The cheapest `(graph, coloring, bijection)` wins.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::assignment::{
    color_cost_matrix, hungarian_min_assignment, tx_latency_matrix, Backend, ColorCostMatrix,
    FileMap, HungarianOptions,
};
use crate::coloring::{
    find_coloring, for_each_coloring, Coloring, Infeasibility, DEFAULT_COLORING_LIMIT,
};
use crate::error::Result;
use crate::evaluation::eval_uncoded;
use crate::model::{
    expand_multifile, validate_spec, ExpandedSpec, MultiPlacement, NetworkSpec, Placement,
};
use crate::nngraph::{build_extended_graph, enumerate_nngs, NearestNeighborGraph, DEFAULT_NNG_CAP};
use crate::rational::Q;

pub const OPTIMALITY_NOTE: &str =
    "optimal among uncoded placements that meet the worst-case latency bound at every node; \
coded placements may reach a lower average latency";

pub const INFEASIBLE_NOTE: &str =
    "no uncoded placement meets the worst-case latency bound at every node \
(no extended graph is k-colorable); coded storage such as an MDS code can still meet the bound, \
but code synthesis is not performed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    pub nng_cap: usize,
    pub coloring_limit: usize,
    pub backend: Backend,
    /// Skip colorings whose cost-matrix lower bound already exceeds the best.
    pub prune: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            nng_cap: DEFAULT_NNG_CAP,
            coloring_limit: DEFAULT_COLORING_LIMIT,
            backend: Backend::Matrix,
            prune: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PlanStats {
    pub nngs_tried: usize,
    /// Valid graphs under RTT ties (saturating).
    pub nngs_total: u128,
    pub nngs_truncated: bool,
    pub colorings_tried: usize,
    pub colorings_pruned: usize,
    pub colorings_truncated: bool,
}

impl PlanStats {
    pub fn exhaustive(&self) -> bool {
        !self.nngs_truncated && !self.colorings_truncated
    }
}

#[derive(Debug, Clone)]
pub struct PlanReport {
    pub expanded: ExpandedSpec,
    pub nng_index: usize,
    pub nng: NearestNeighborGraph,
    pub coloring: Coloring,
    pub cost_matrix: ColorCostMatrix,
    pub file_map: FileMap,
    /// Placement on the unit-capacity (expanded) nodes.
    pub placement: Placement,
    /// Files per original node, one per slot.
    pub projected: MultiPlacement,
    /// `Σ_θ c(θ, π(θ))` from the assignment.
    pub assignment_cost: Q,
    /// `L_avg` evaluated directly on the placement.
    pub average: Q,
    pub worst_case: Vec<Q>,
    pub wc_bounds: Vec<Q>,
    pub stats: PlanStats,
}

#[derive(Debug, Clone)]
pub struct InfeasibleReport {
    pub expanded: ExpandedSpec,
    /// One certificate per enumerated graph.
    pub certificates: Vec<Infeasibility>,
    pub stats: PlanStats,
}

#[derive(Debug, Clone)]
pub enum PlanOutcome {
    Planned(Box<PlanReport>),
    Infeasible(InfeasibleReport),
}

impl PlanOutcome {
    pub fn planned(&self) -> Option<&PlanReport> {
        match self {
            PlanOutcome::Planned(r) => Some(r),
            PlanOutcome::Infeasible(_) => None,
        }
    }
}

/// `φ = π ∘ σ`.
pub fn compose_placement(coloring: &Coloring, file_map: &FileMap) -> Placement {
    Placement::new(
        coloring
            .color_of()
            .into_iter()
            .map(|c| file_map.file_of(c))
            .collect(),
    )
}

struct Candidate {
    cost: Q,
    nng_index: usize,
    coloring: Coloring,
    cost_matrix: ColorCostMatrix,
    file_map: FileMap,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        (
            &self.cost,
            self.nng_index,
            self.coloring.key(),
            &self.file_map,
        ) < (
            &other.cost,
            other.nng_index,
            other.coloring.key(),
            &other.file_map,
        )
    }
}

pub fn plan(spec: &NetworkSpec, opts: &PlanOptions) -> Result<PlanOutcome> {
    validate_spec(spec).into_result(false)?;
    let expanded = expand_multifile(spec)?;
    let unit = &expanded.spec;
    let k = unit.file_count();
    let nngs = enumerate_nngs(unit, opts.nng_cap)?;
    let hungarian = HungarianOptions {
        backend: opts.backend,
        ..Default::default()
    };

    let mut stats = PlanStats {
        nngs_total: nngs.total,
        nngs_truncated: nngs.truncated,
        ..Default::default()
    };
    let mut best: Option<Candidate> = None;
    let mut certificates = Vec::new();
    let mut failure = None;

    for (gi, g) in nngs.graphs.iter().enumerate() {
        stats.nngs_tried += 1;
        let h = build_extended_graph(g);
        let tx = tx_latency_matrix(unit, g)?;
        let mut seen = 0usize;
        for_each_coloring(&h, k, |coloring| {
            if seen == opts.coloring_limit {
                stats.colorings_truncated = true;
                return ControlFlow::Break(());
            }
            seen += 1;
            stats.colorings_tried += 1;
            let cost_matrix = match color_cost_matrix(&coloring, &tx) {
                Ok(c) => c,
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            };
            if opts.prune {
                if let Some(b) = &best {
                    if cost_matrix.lower_bound() > b.cost {
                        stats.colorings_pruned += 1;
                        return ControlFlow::Continue(());
                    }
                }
            }
            let a = match hungarian_min_assignment(cost_matrix.rows(), &hungarian) {
                Ok(a) => a,
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            };
            let candidate = Candidate {
                cost: a.cost,
                nng_index: gi,
                coloring,
                cost_matrix,
                file_map: a.map,
            };
            if best.as_ref().is_none_or(|b| candidate.beats(b)) {
                best = Some(candidate);
            }
            ControlFlow::Continue(())
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if seen == 0 {
            certificates.push(find_coloring(&h, k).expect_err("no coloring was enumerated"));
        }
    }

    let Some(best) = best else {
        return Ok(PlanOutcome::Infeasible(InfeasibleReport {
            expanded,
            certificates,
            stats,
        }));
    };
    let placement = compose_placement(&best.coloring, &best.file_map);
    let report = eval_uncoded(unit, &placement)?;
    let projected = expanded.project(&placement);
    Ok(PlanOutcome::Planned(Box::new(PlanReport {
        nng: nngs.graphs[best.nng_index].clone(),
        nng_index: best.nng_index,
        coloring: best.coloring,
        cost_matrix: best.cost_matrix,
        file_map: best.file_map,
        placement,
        projected,
        assignment_cost: best.cost,
        average: report.average,
        worst_case: report.worst_case,
        wc_bounds: report.wc_bounds,
        stats,
        expanded,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{ex1, ex1_uniform, ex1_with_capacities};
    use crate::nngraph::is_admissible;
    use crate::rational::{q, qi};
    use itertools::Itertools;

    #[test]
    fn ex1_plan() {
        let out = plan(&ex1(), &PlanOptions::default()).unwrap();
        let r = out.planned().unwrap();
        assert_eq!(r.coloring.classes(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(r.file_map.files(), &[2, 1, 0]);
        assert_eq!(r.placement.files(), &[2, 1, 2, 0]);
        assert_eq!(r.average, q(13, 10));
        assert_eq!(r.assignment_cost, r.average);
        assert_eq!(r.worst_case, vec![qi(2), qi(2), qi(7), qi(2)]);
        assert_eq!(r.worst_case, r.wc_bounds);
        assert!(r.stats.exhaustive());
        assert!(is_admissible(&r.placement, &r.nng));
    }

    #[test]
    fn ex1_uniform_plan() {
        let r = plan(&ex1_uniform(), &PlanOptions::default()).unwrap();
        assert_eq!(r.planned().unwrap().average, qi(2));
    }

    #[test]
    fn shortest_path_backend_gives_the_same_plan() {
        let opts = PlanOptions {
            backend: Backend::ShortestPath,
            ..Default::default()
        };
        let a = plan(&ex1(), &opts).unwrap();
        let b = plan(&ex1(), &PlanOptions::default()).unwrap();
        assert_eq!(
            a.planned().unwrap().placement,
            b.planned().unwrap().placement
        );
    }

    #[test]
    fn clique_makes_plan_infeasible() {
        // 4 nodes, k = 3: the extended graph is K4 once every In-set overlaps
        let ids = (0..4).map(|i| format!("n{i}")).collect();
        let rtt = vec![
            vec![qi(0), qi(1), qi(2), qi(3)],
            vec![qi(1), qi(0), qi(3), qi(2)],
            vec![qi(2), qi(3), qi(0), qi(1)],
            vec![qi(3), qi(2), qi(1), qi(0)],
        ];
        let spec = NetworkSpec::unit(ids, rtt, vec![vec![q(1, 12); 3]; 4], 3).unwrap();
        match plan(&spec, &PlanOptions::default()).unwrap() {
            PlanOutcome::Infeasible(r) => {
                assert_eq!(r.certificates.len(), 1);
                assert!(
                    matches!(&r.certificates[0], Infeasibility::Clique { nodes } if nodes.len() == 4)
                );
            }
            PlanOutcome::Planned(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn multi_slot_plan_projects_back() {
        let spec = ex1_with_capacities(vec![2, 1, 1, 1]);
        let r = plan(&spec, &PlanOptions::default()).unwrap();
        let r = r.planned().expect("feasible");
        assert_eq!(r.placement.len(), 5);
        assert_eq!(r.projected.files[0].len(), 2);
        let direct = crate::evaluation::eval_multifile(&spec, &r.projected).unwrap();
        assert_eq!(direct.average, r.average);
    }

    #[test]
    fn compose_is_pi_after_sigma() {
        let coloring = Coloring::from_classes(vec![vec![0, 2], vec![1], vec![3]]);
        let p = compose_placement(&coloring, &FileMap::new(vec![2, 1, 0]));
        assert_eq!(p.files(), &[2, 1, 2, 0]);
        let singletons = Coloring::from_classes((0..4).map(|v| vec![v]).collect());
        assert_eq!(
            compose_placement(&singletons, &FileMap::identity(4)).files(),
            &[0, 1, 2, 3]
        );
    }

    #[test]
    fn relabeling_classes_keeps_the_placement() {
        let coloring = Coloring::from_classes(vec![vec![0, 2], vec![1], vec![3]]);
        let map = FileMap::new(vec![2, 1, 0]);
        let base = compose_placement(&coloring, &map);
        for perm in (0..3).permutations(3) {
            // class θ renamed to perm[θ]; the file map follows the rename
            let mut classes = vec![Vec::new(); 3];
            let mut files = [0; 3];
            for (theta, &new) in perm.iter().enumerate() {
                classes[new] = coloring.classes()[theta].clone();
                files[new] = map.file_of(theta);
            }
            let colors: Vec<usize> = (0..4)
                .map(|v| classes.iter().position(|c| c.contains(&v)).unwrap())
                .collect();
            let placed = Placement::new(colors.iter().map(|&c| files[c]).collect());
            assert_eq!(placed, base);
        }
    }

    #[test]
    fn pruning_does_not_change_the_optimum() {
        let no_prune = PlanOptions {
            prune: false,
            ..Default::default()
        };
        for spec in [ex1(), ex1_uniform(), ex1_with_capacities(vec![1, 2, 1, 1])] {
            let a = plan(&spec, &no_prune).unwrap();
            let b = plan(&spec, &PlanOptions::default()).unwrap();
            match (a, b) {
                (PlanOutcome::Planned(a), PlanOutcome::Planned(b)) => {
                    assert_eq!(a.average, b.average);
                    assert_eq!(a.placement, b.placement);
                }
                (PlanOutcome::Infeasible(_), PlanOutcome::Infeasible(_)) => {}
                _ => panic!("feasibility differs"),
            }
        }
    }
}
