//! Exhaustive reference search over all placements `[k]^n`, used to check
//! the planner on small instances.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluation::eval_uncoded;
use crate::model::{expand_multifile, NetworkSpec, Placement};
use crate::nngraph::{enumerate_nngs, is_admissible, NearestNeighborGraph};
use crate::planner::PlanOutcome;
use crate::rational::Q;

pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;
/// The oracle should see every tie-broken graph, so its cap is far looser
/// than the planner's.
pub const DEFAULT_ORACLE_NNG_CAP: usize = 1 << 16;
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Only placements admissible on some nearest-neighbor graph.
    AdmissibleOnly,
    /// Every placement that stores each file at least once.
    Unrestricted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub mode: OracleMode,
    /// `None` when no placement qualifies.
    pub best: Option<Q>,
    /// Optimal placements in lexicographic order, at most [`MAX_WITNESSES`].
    pub witnesses: Vec<Placement>,
    pub witness_count: usize,
    /// `k^n` on the expanded nodes.
    pub search_space: u64,
    pub nngs: usize,
    pub nngs_truncated: bool,
}

fn search_space(n: usize, k: usize, budget: u64) -> Result<u64> {
    let mut size: u64 = 1;
    for _ in 0..n {
        size = match size.checked_mul(k as u64) {
            Some(s) if s <= budget => s,
            _ => {
                return Err(Error::BudgetExceeded {
                    needed: format!("{k}^{n}"),
                    budget,
                })
            }
        };
    }
    Ok(size)
}

/// Minimum `L_avg` over all qualifying placements. Multi-slot nodes are
/// expanded first, so placements range over slots.
pub fn brute_force_placement(
    spec: &NetworkSpec,
    mode: OracleMode,
    budget: u64,
    nng_cap: usize,
) -> Result<OracleResult> {
    let expanded = expand_multifile(spec)?;
    let unit = &expanded.spec;
    let (n, k) = (unit.node_count(), unit.file_count());
    let size = search_space(n, k, budget)?;
    let (graphs, nngs_truncated): (Vec<NearestNeighborGraph>, bool) = match mode {
        OracleMode::AdmissibleOnly => {
            let e = enumerate_nngs(unit, nng_cap)?;
            (e.graphs, e.truncated)
        }
        OracleMode::Unrestricted => (Vec::new(), false),
    };

    let mut result = OracleResult {
        mode,
        best: None,
        witnesses: Vec::new(),
        witness_count: 0,
        search_space: size,
        nngs: graphs.len(),
        nngs_truncated,
    };
    let mut files = vec![0usize; n];
    for _ in 0..size {
        let placement = Placement::new(files.clone());
        let qualifies = placement.is_surjective(k)
            && match mode {
                OracleMode::AdmissibleOnly => graphs.iter().any(|g| is_admissible(&placement, g)),
                OracleMode::Unrestricted => true,
            };
        if qualifies {
            let avg = eval_uncoded(unit, &placement)?.average;
            match result.best.as_ref().map(|b| avg.cmp(b)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => {
                    result.witness_count += 1;
                    if result.witnesses.len() < MAX_WITNESSES {
                        result.witnesses.push(placement);
                    }
                }
                _ => {
                    result.best = Some(avg);
                    result.witnesses = vec![placement];
                    result.witness_count = 1;
                }
            }
        }
        // odometer, last node fastest, so witnesses come out sorted
        for digit in files.iter_mut().rev() {
            *digit += 1;
            if *digit < k {
                break;
            }
            *digit = 0;
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub reason: String,
    pub reported: Option<Q>,
    pub oracle: Option<Q>,
    pub witness: Option<Placement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Verified { best: Option<Q>, search_space: u64 },
    Counterexample(Box<Counterexample>),
    Unverified { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }
}

fn counterexample(
    reason: impl Into<String>,
    reported: Option<Q>,
    oracle: &OracleResult,
) -> Verdict {
    Verdict::Counterexample(Box::new(Counterexample {
        reason: reason.into(),
        reported,
        oracle: oracle.best,
        witness: oracle.witnesses.first().cloned(),
    }))
}

/// Checks a planner outcome against the admissible-only oracle, and
/// re-scores the reported placement independently.
pub fn verify_plan(
    spec: &NetworkSpec,
    outcome: &PlanOutcome,
    budget: u64,
    nng_cap: usize,
) -> Result<Verdict> {
    let oracle = match brute_force_placement(spec, OracleMode::AdmissibleOnly, budget, nng_cap) {
        Ok(o) => o,
        Err(Error::BudgetExceeded { needed, budget }) => {
            return Ok(Verdict::Unverified {
                reason: format!("search space {needed} exceeds budget {budget}"),
            })
        }
        Err(e) => return Err(e),
    };
    if oracle.nngs_truncated {
        return Ok(Verdict::Unverified {
            reason: format!("more than {nng_cap} nearest-neighbor graphs"),
        });
    }
    match outcome {
        PlanOutcome::Infeasible(_) => {
            if oracle.best.is_some() {
                return Ok(counterexample("planner reported infeasible", None, &oracle));
            }
        }
        PlanOutcome::Planned(report) => {
            let reported = Some(report.average);
            let rescored = eval_uncoded(&report.expanded.spec, &report.placement)?;
            if rescored.average != report.average {
                return Ok(counterexample(
                    format!(
                        "reported average differs from re-evaluated {}",
                        rescored.average
                    ),
                    reported,
                    &oracle,
                ));
            }
            if !rescored.meets_wc_bound() {
                return Ok(counterexample(
                    "placement misses the worst-case bound",
                    reported,
                    &oracle,
                ));
            }
            if oracle.best != reported {
                return Ok(counterexample(
                    "average differs from the exhaustive optimum",
                    reported,
                    &oracle,
                ));
            }
        }
    }
    Ok(Verdict::Verified {
        best: oracle.best,
        search_space: oracle.search_space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{ex1, ex1_uniform};
    use crate::planner::{plan, PlanOptions};
    use crate::rational::{q, qi};

    #[test]
    fn ex1_admissible_optimum_is_unique() {
        let r = brute_force_placement(
            &ex1(),
            OracleMode::AdmissibleOnly,
            DEFAULT_ORACLE_BUDGET,
            64,
        )
        .unwrap();
        assert_eq!(r.best, Some(q(13, 10)));
        assert_eq!(r.witness_count, 1);
        assert_eq!(r.witnesses[0].files(), &[2, 1, 2, 0]);
        assert_eq!(r.search_space, 81);
    }

    #[test]
    fn unrestricted_is_no_worse() {
        for spec in [ex1(), ex1_uniform()] {
            let a =
                brute_force_placement(&spec, OracleMode::AdmissibleOnly, DEFAULT_ORACLE_BUDGET, 64)
                    .unwrap();
            let u =
                brute_force_placement(&spec, OracleMode::Unrestricted, DEFAULT_ORACLE_BUDGET, 64)
                    .unwrap();
            assert!(u.best.unwrap() <= a.best.unwrap());
        }
    }

    #[test]
    fn two_nodes_two_files() {
        // both nodes must hold distinct files; the local file is free
        let spec = NetworkSpec::unit(
            vec!["a".into(), "b".into()],
            vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]],
            vec![vec![q(1, 2), q(1, 10)], vec![q(1, 5), q(1, 5)]],
            2,
        )
        .unwrap();
        let r = brute_force_placement(&spec, OracleMode::AdmissibleOnly, 100, 64).unwrap();
        // a:1 b:2 costs 1/10 + 1/5; a:2 b:1 costs 1/2 + 1/5
        assert_eq!(r.best, Some(q(3, 10)));
        assert_eq!(r.witnesses[0].files(), &[0, 1]);
    }

    #[test]
    fn budget_is_enforced() {
        let err = brute_force_placement(&ex1(), OracleMode::Unrestricted, 80, 64).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn planner_output_verifies() {
        let out = plan(&ex1(), &PlanOptions::default()).unwrap();
        let v = verify_plan(&ex1(), &out, DEFAULT_ORACLE_BUDGET, 64).unwrap();
        assert_eq!(
            v,
            Verdict::Verified {
                best: Some(q(13, 10)),
                search_space: 81
            }
        );
    }

    #[test]
    fn tampered_plan_is_caught() {
        let mut out = plan(&ex1(), &PlanOptions::default()).unwrap();
        if let PlanOutcome::Planned(r) = &mut out {
            r.average = qi(1);
        }
        match verify_plan(&ex1(), &out, DEFAULT_ORACLE_BUDGET, 64).unwrap() {
            Verdict::Counterexample(c) => assert_eq!(c.oracle, Some(q(13, 10))),
            other => panic!("expected counterexample, got {other:?}"),
        }
        let mut out = plan(&ex1(), &PlanOptions::default()).unwrap();
        if let PlanOutcome::Planned(r) = &mut out {
            r.placement = Placement::new(vec![0, 1, 2, 0]);
        }
        assert!(matches!(
            verify_plan(&ex1(), &out, DEFAULT_ORACLE_BUDGET, 64).unwrap(),
            Verdict::Counterexample(_)
        ));
    }

    #[test]
    fn oversized_search_is_unverified() {
        let out = plan(&ex1(), &PlanOptions::default()).unwrap();
        assert!(matches!(
            verify_plan(&ex1(), &out, 10, 64).unwrap(),
            Verdict::Unverified { .. }
        ));
    }
}
