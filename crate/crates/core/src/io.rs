//! File formats: network specs (JSON, with optional CSV matrices),
//! placement and code files, and schema-versioned JSON/CSV reports.
//!
//! Spec JSON:
//!
//! ```json
//! { "files": 3,
//!   "nodes": [ { "id": "A", "capacity": 1, "demands": [0.2, 0.025, "1/40"] }, ... ],
//!   "rtt": [[0, 2, 9, 2], ...] }
//! ```
//!
//! `capacity` defaults to 1. Numbers may be JSON numbers (parsed exactly
//! from their decimal text) or strings such as `"7/40"`. `rtt` and the
//! per-node `demands` may be omitted when supplied as CSV instead.
//!
//! CSV matrices have a header row and one row per node, each starting with
//! the node id. For RTTs the header names the node of every column; for
//! demands the header labels are free-form but there must be `k` of them.
//!
//! Placement files list `(node id, file)` pairs with 1-based files, either
//! as `[["A", 3], ...]` or `[{"node": "A", "file": 3}, ...]`. A node with
//! capacity `M` appears `M` times.
//!
//! Code files hold the field order and the `k×n` generator, row-major:
//! `{"field_order": 2, "generator": [[1, 0, 0, 1], ...]}`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::assignment::{HungarianTrace, TraceStep};
use crate::coloring::Infeasibility;
use crate::error::{Error, Result};
use crate::evaluation::{LatencyReport, LinearCode, RecoveryPlan};
use crate::model::{MultiPlacement, NetworkSpec, Placement, ValidationReport};
use crate::oracle::{OracleResult, Verdict};
use crate::planner::{PlanOutcome, PlanStats, INFEASIBLE_NOTE, OPTIMALITY_NOTE};
use crate::rational::{parse_q, ExactValue, Q};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Num(#[serde(with = "crate::rational::json")] Q);

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    files: usize,
    nodes: Vec<NodeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rtt: Option<Vec<Vec<Num>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    #[serde(default = "one")]
    capacity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    demands: Option<Vec<Num>>,
}

fn one() -> u32 {
    1
}

fn unwrap_nums(row: Vec<Num>) -> Vec<Q> {
    row.into_iter().map(|n| n.0).collect()
}

/// Parses a spec document; CSV text, when given, replaces the JSON `rtt`
/// matrix or the per-node demands.
pub fn parse_spec(
    json_text: &str,
    rtt_csv: Option<&str>,
    demands_csv: Option<&str>,
) -> Result<NetworkSpec> {
    let doc: SpecDoc = serde_json::from_str(json_text)?;
    let ids: Vec<String> = doc.nodes.iter().map(|n| n.id.clone()).collect();
    let capacities = doc.nodes.iter().map(|n| n.capacity).collect();
    let rtt = match (rtt_csv, doc.rtt) {
        (Some(text), _) => parse_rtt_csv(text, &ids)?,
        (None, Some(rows)) => rows.into_iter().map(unwrap_nums).collect(),
        (None, None) => return Err(Error::MalformedSpec("no rtt matrix given".into())),
    };
    let demands = match demands_csv {
        Some(text) => parse_demands_csv(text, &ids, doc.files)?,
        None => doc
            .nodes
            .into_iter()
            .map(|n| {
                n.demands
                    .map(unwrap_nums)
                    .ok_or_else(|| Error::MalformedSpec(format!("node {:?} has no demands", n.id)))
            })
            .collect::<Result<_>>()?,
    };
    NetworkSpec::new(ids, capacities, rtt, demands, doc.files)
}

pub fn read_spec(
    path: &Path,
    rtt_csv: Option<&Path>,
    demands_csv: Option<&Path>,
) -> Result<NetworkSpec> {
    let json_text = fs::read_to_string(path)?;
    let rtt = rtt_csv.map(fs::read_to_string).transpose()?;
    let demands = demands_csv.map(fs::read_to_string).transpose()?;
    parse_spec(&json_text, rtt.as_deref(), demands.as_deref())
}

/// Spec JSON that [`parse_spec`] reads back to an identical spec.
pub fn spec_to_json(spec: &NetworkSpec) -> String {
    let n = spec.node_count();
    let doc = SpecDoc {
        files: spec.file_count(),
        nodes: (0..n)
            .map(|v| NodeDoc {
                id: spec.node_id(v).to_string(),
                capacity: spec.capacities()[v],
                demands: Some(spec.demand_matrix()[v].iter().cloned().map(Num).collect()),
            })
            .collect(),
        rtt: Some(
            spec.rtt_matrix()
                .iter()
                .map(|row| row.iter().cloned().map(Num).collect())
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&doc).expect("spec serializes")
}

type KeyedRows = HashMap<String, Vec<Q>>;

/// Rows keyed by their first cell; returns the header labels and rows.
fn read_keyed_csv(text: &str, what: &str) -> Result<(Vec<String>, KeyedRows)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .skip(1)
        .map(str::to_string)
        .collect();
    let mut rows = HashMap::new();
    for record in reader.records() {
        let record = record?;
        let mut cells = record.iter();
        let id = cells.next().unwrap_or_default().to_string();
        let values = cells.map(parse_q).collect::<Result<Vec<_>>>()?;
        if values.len() != header.len() {
            return Err(Error::MalformedSpec(format!(
                "{what} row {id:?} has {} values, header has {}",
                values.len(),
                header.len()
            )));
        }
        if rows.insert(id.clone(), values).is_some() {
            return Err(Error::MalformedSpec(format!(
                "{what} lists node {id:?} twice"
            )));
        }
    }
    Ok((header, rows))
}

fn row_for(rows: &mut KeyedRows, id: &str, what: &str) -> Result<Vec<Q>> {
    rows.remove(id)
        .ok_or_else(|| Error::MalformedSpec(format!("{what} has no row for node {id:?}")))
}

fn check_no_extra(rows: &KeyedRows, what: &str) -> Result<()> {
    match rows.keys().min() {
        Some(id) => Err(Error::MalformedSpec(format!(
            "{what} has a row for unknown node {id:?}"
        ))),
        None => Ok(()),
    }
}

pub fn parse_rtt_csv(text: &str, ids: &[String]) -> Result<Vec<Vec<Q>>> {
    let (header, mut rows) = read_keyed_csv(text, "rtt csv")?;
    let columns = ids
        .iter()
        .map(|id| {
            header.iter().position(|h| h == id).ok_or_else(|| {
                Error::MalformedSpec(format!("rtt csv has no column for node {id:?}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if header.len() != ids.len() {
        return Err(Error::MalformedSpec(format!(
            "rtt csv has {} columns for {} nodes",
            header.len(),
            ids.len()
        )));
    }
    let matrix = ids
        .iter()
        .map(|id| {
            let row = row_for(&mut rows, id, "rtt csv")?;
            Ok(columns.iter().map(|&c| row[c]).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    check_no_extra(&rows, "rtt csv")?;
    Ok(matrix)
}

pub fn parse_demands_csv(text: &str, ids: &[String], k: usize) -> Result<Vec<Vec<Q>>> {
    let (header, mut rows) = read_keyed_csv(text, "demands csv")?;
    if header.len() != k {
        return Err(Error::MalformedSpec(format!(
            "demands csv has {} file columns, spec has {k} files",
            header.len()
        )));
    }
    let matrix = ids
        .iter()
        .map(|id| row_for(&mut rows, id, "demands csv"))
        .collect::<Result<Vec<_>>>()?;
    check_no_extra(&rows, "demands csv")?;
    Ok(matrix)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PlacementEntry {
    Pair(String, usize),
    Object { node: String, file: usize },
}

/// Reads `(node id, 1-based file)` pairs into one file list per node.
pub fn parse_placement(spec: &NetworkSpec, text: &str) -> Result<MultiPlacement> {
    let entries: Vec<PlacementEntry> = serde_json::from_str(text)?;
    let k = spec.file_count();
    let mut files = vec![Vec::new(); spec.node_count()];
    for entry in entries {
        let (node, file) = match entry {
            PlacementEntry::Pair(node, file) => (node, file),
            PlacementEntry::Object { node, file } => (node, file),
        };
        let v = spec
            .node_index(&node)
            .ok_or_else(|| Error::InvalidPlacement(format!("unknown node {node:?}")))?;
        if file == 0 || file > k {
            return Err(Error::InvalidPlacement(format!(
                "file {file} at node {node:?} is outside 1..={k}"
            )));
        }
        files[v].push(file - 1);
    }
    MultiPlacement::checked(files, spec)
}

/// A placement on a unit-capacity spec.
pub fn parse_unit_placement(spec: &NetworkSpec, text: &str) -> Result<Placement> {
    let multi = parse_placement(spec, text)?;
    if let Some(v) = multi.files.iter().position(|f| f.len() != 1) {
        return Err(Error::InvalidPlacement(format!(
            "node {:?} must hold exactly one file",
            spec.node_id(v)
        )));
    }
    Placement::checked(
        multi.files.iter().map(|f| f[0]).collect(),
        spec.node_count(),
        spec.file_count(),
    )
}

pub fn placement_to_json(spec: &NetworkSpec, placement: &MultiPlacement) -> Value {
    Value::Array(
        placement
            .files
            .iter()
            .enumerate()
            .flat_map(|(v, files)| files.iter().map(move |&j| json!([spec.node_id(v), j + 1])))
            .collect(),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeDoc {
    field_order: u64,
    generator: Vec<Vec<i64>>,
}

pub fn parse_code(text: &str) -> Result<LinearCode> {
    let doc: CodeDoc = serde_json::from_str(text)?;
    LinearCode::new(doc.field_order, doc.generator)
}

pub fn exact(value: &Q) -> Value {
    serde_json::to_value(ExactValue::from(value)).expect("exact value serializes")
}

fn exact_row(values: &[Q]) -> Value {
    Value::Array(values.iter().map(exact).collect())
}

fn exact_matrix(rows: &[Vec<Q>]) -> Value {
    Value::Array(rows.iter().map(|r| exact_row(r)).collect())
}

fn ids(spec: &NetworkSpec, nodes: &[usize]) -> Value {
    json!(nodes.iter().map(|&v| spec.node_id(v)).collect::<Vec<_>>())
}

fn envelope(kind: &str, body: Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "kind": kind });
    if let (Value::Object(doc), Value::Object(body)) = (&mut doc, body) {
        doc.extend(body);
    }
    doc
}

fn stats_json(stats: &PlanStats) -> Value {
    json!({
        "nngs_tried": stats.nngs_tried,
        "nngs_total": stats.nngs_total.to_string(),
        "nngs_truncated": stats.nngs_truncated,
        "colorings_tried": stats.colorings_tried,
        "colorings_pruned": stats.colorings_pruned,
        "colorings_truncated": stats.colorings_truncated,
        "exhaustive": stats.exhaustive(),
    })
}

pub fn trace_to_json(trace: &HungarianTrace<Q>) -> Value {
    Value::Array(
        trace
            .steps
            .iter()
            .map(|step| match step {
                TraceStep::RowReduced(m) => json!({ "step": "row_reduced", "matrix": exact_matrix(m) }),
                TraceStep::ColumnReduced(m) => json!({ "step": "column_reduced", "matrix": exact_matrix(m) }),
                TraceStep::ZeroMatching(pairs) => json!({ "step": "zero_matching", "pairs": pairs }),
                TraceStep::Cover { rows, columns } => json!({ "step": "cover", "rows": rows, "columns": columns }),
                TraceStep::Adjusted { delta, matrix } => {
                    json!({ "step": "adjusted", "delta": exact(delta), "matrix": exact_matrix(matrix) })
                }
            })
            .collect(),
    )
}

/// Plan report; node ids refer to the expanded (one slot per node) spec.
pub fn plan_report_json(outcome: &PlanOutcome, trace: Option<&HungarianTrace<Q>>) -> Value {
    match outcome {
        PlanOutcome::Planned(r) => {
            let spec = &r.expanded.spec;
            let original = original_ids(&r.expanded);
            let mut body = json!({
                "status": "planned",
                "note": OPTIMALITY_NOTE,
                "nng": {
                    "index": r.nng_index,
                    "in_sets": (0..spec.node_count())
                        .map(|v| json!({ "node": spec.node_id(v), "in": ids(spec, r.nng.in_neighbors(v)) }))
                        .collect::<Vec<_>>(),
                },
                "coloring": r.coloring.classes().iter().map(|c| ids(spec, c)).collect::<Vec<_>>(),
                "file_map": (0..r.file_map.files().len())
                    .map(|c| json!({ "class": c + 1, "file": r.file_map.file_of(c) + 1 }))
                    .collect::<Vec<_>>(),
                "cost_matrix": exact_matrix(r.cost_matrix.rows()),
                "placement": (0..spec.node_count())
                    .map(|v| json!({ "node": spec.node_id(v), "file": r.placement.file_of(v) + 1 }))
                    .collect::<Vec<_>>(),
                "slots": r.projected.files.iter().enumerate()
                    .map(|(v, f)| json!({ "node": original[v], "files": f.iter().map(|j| j + 1).collect::<Vec<_>>() }))
                    .collect::<Vec<_>>(),
                "average": exact(&r.average),
                "assignment_cost": exact(&r.assignment_cost),
                "nodes": (0..spec.node_count())
                    .map(|v| json!({
                        "node": spec.node_id(v),
                        "worst_case": exact(&r.worst_case[v]),
                        "bound": exact(&r.wc_bounds[v]),
                    }))
                    .collect::<Vec<_>>(),
                "stats": stats_json(&r.stats),
            });
            if let Some(trace) = trace {
                body["trace"] = trace_to_json(trace);
            }
            envelope("plan", body)
        }
        PlanOutcome::Infeasible(r) => {
            let spec = &r.expanded.spec;
            let certificates: Vec<Value> = r
                .certificates
                .iter()
                .map(|c| match c {
                    Infeasibility::Clique { nodes } => {
                        json!({ "kind": "clique", "nodes": ids(spec, nodes) })
                    }
                    Infeasibility::Exhausted => json!({ "kind": "exhausted" }),
                })
                .collect();
            envelope(
                "plan",
                json!({
                    "status": "infeasible",
                    "note": INFEASIBLE_NOTE,
                    "certificates": certificates,
                    "stats": stats_json(&r.stats),
                }),
            )
        }
    }
}

fn original_ids(expanded: &crate::model::ExpandedSpec) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for (sub, o) in expanded.origin.iter().enumerate() {
        if o.node == out.len() {
            let id = expanded.spec.node_id(sub);
            // sub-node ids are "<id>.<slot>" only when the node was split
            let base = if expanded.origin.iter().filter(|x| x.node == o.node).count() > 1 {
                id.rsplit_once('.').map_or(id, |(b, _)| b)
            } else {
                id
            };
            out.push(base.to_string());
        }
    }
    out
}

pub fn latency_report_json(
    spec: &NetworkSpec,
    report: &LatencyReport,
    recovery: Option<&RecoveryPlan>,
) -> Value {
    let n = report.latencies.len();
    let mut body = json!({
        "average": exact(&report.average),
        "meets_wc_bound": report.meets_wc_bound(),
        "nodes": (0..n)
            .map(|v| json!({
                "node": spec.node_id(v),
                "latencies": exact_row(&report.latencies[v]),
                "worst_case": exact(&report.worst_case[v]),
                "bound": exact(&report.wc_bounds[v]),
            }))
            .collect::<Vec<_>>(),
    });
    if let Some(plan) = recovery {
        body["recovery"] = recovery_plan_json(spec, plan);
    }
    envelope("latency", body)
}

pub fn recovery_plan_json(spec: &NetworkSpec, plan: &RecoveryPlan) -> Value {
    Value::Array(
        plan.vectors
            .iter()
            .enumerate()
            .flat_map(|(v, row)| {
                row.iter().enumerate().map(move |(j, x)| {
                    json!({
                        "node": spec.node_id(v),
                        "file": j + 1,
                        "support": ids(spec, &x.support),
                        "coefficients": x.coefficients,
                        "latency": exact(&x.latency),
                    })
                })
            })
            .collect(),
    )
}

/// One row per `(node, file)`: demand, latency, and the node's worst case
/// and bound.
pub fn latency_report_csv(spec: &NetworkSpec, report: &LatencyReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "node",
        "file",
        "demand",
        "latency",
        "latency_decimal",
        "worst_case",
        "bound",
    ])?;
    for (v, row) in report.latencies.iter().enumerate() {
        for (j, l) in row.iter().enumerate() {
            w.write_record([
                spec.node_id(v).to_string(),
                (j + 1).to_string(),
                spec.demand(v, j).to_string(),
                l.to_string(),
                crate::rational::to_decimal(l, 6),
                report.worst_case[v].to_string(),
                report.wc_bounds[v].to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `spec` is the expanded spec the oracle searched.
pub fn oracle_report_json(
    spec: &NetworkSpec,
    result: &OracleResult,
    verdict: Option<&Verdict>,
) -> Value {
    let placement = |p: &Placement| {
        (0..p.len())
            .map(|v| json!({ "node": spec.node_id(v), "file": p.file_of(v) + 1 }))
            .collect::<Vec<_>>()
    };
    let mut body = json!({
        "mode": result.mode,
        "best": result.best.as_ref().map(exact),
        "witness_count": result.witness_count,
        "witnesses": result.witnesses.iter().map(placement).collect::<Vec<_>>(),
        "search_space": result.search_space,
        "nngs": result.nngs,
        "nngs_truncated": result.nngs_truncated,
    });
    if let Some(v) = verdict {
        body["verdict"] = match v {
            Verdict::Verified { .. } => json!({ "status": "verified" }),
            Verdict::Unverified { reason } => json!({ "status": "unverified", "reason": reason }),
            Verdict::Counterexample(c) => json!({
                "status": "counterexample",
                "reason": c.reason,
                "reported": c.reported.as_ref().map(exact),
                "oracle": c.oracle.as_ref().map(exact),
                "witness": c.witness.as_ref().map(placement),
            }),
        };
    }
    envelope("oracle", body)
}

pub fn validation_json(report: &ValidationReport, strict: bool) -> Value {
    envelope(
        "validation",
        json!({
            "ok": report.is_ok(strict),
            "strict": strict,
            "errors": report.errors,
            "warnings": report.warnings,
            "messages": report.errors.iter().chain(&report.warnings).map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{ex1, ex1_with_capacities};
    use crate::planner::{plan, PlanOptions};
    use crate::rational::{q, qi};

    const EX1_JSON: &str = r#"{
        "files": 3,
        "nodes": [
            { "id": "A", "demands": [0.2, 0.025, 0.025] },
            { "id": "B", "demands": [0.025, 0.2, 0.025] },
            { "id": "C", "demands": ["1/40", "1/40", "1/5"] },
            { "id": "D", "capacity": 1, "demands": [0.025, 0.025, 0.2] }
        ],
        "rtt": [[0, 2, 9, 2], [2, 0, 7, 2], [9, 7, 0, 5], [2, 2, 5, 0]]
    }"#;

    #[test]
    fn parses_ex1() {
        assert_eq!(parse_spec(EX1_JSON, None, None).unwrap(), ex1());
    }

    #[test]
    fn spec_round_trip_keeps_the_plan() {
        for spec in [ex1(), ex1_with_capacities(vec![1, 2, 1, 1])] {
            let back = parse_spec(&spec_to_json(&spec), None, None).unwrap();
            assert_eq!(back, spec);
            let a = plan(&spec, &PlanOptions::default()).unwrap();
            let b = plan(&back, &PlanOptions::default()).unwrap();
            assert_eq!(plan_report_json(&a, None), plan_report_json(&b, None));
        }
    }

    #[test]
    fn csv_matrices_replace_json() {
        let skeleton = r#"{ "files": 3, "nodes": [{"id":"A"},{"id":"B"},{"id":"C"},{"id":"D"}] }"#;
        // rows and columns deliberately out of order
        let rtt = "node,D,A,B,C\nB,2,2,0,7\nA,2,0,2,9\nD,0,2,2,5\nC,5,9,7,0\n";
        let demands = "node,W1,W2,W3\nA,0.2,0.025,0.025\nB,0.025,0.2,0.025\nC,1/40,1/40,1/5\nD,0.025,0.025,0.2\n";
        assert_eq!(
            parse_spec(skeleton, Some(rtt), Some(demands)).unwrap(),
            ex1()
        );
        let short = "node,W1,W2\nA,1,0\n";
        assert!(parse_spec(skeleton, Some(rtt), Some(short)).is_err());
        assert!(parse_spec(skeleton, None, Some(demands)).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = EX1_JSON.replace("\"files\"", "\"filez\"");
        assert!(matches!(parse_spec(&bad, None, None), Err(Error::Json(_))));
    }

    #[test]
    fn placements_in_both_shapes() {
        let spec = ex1();
        let a = parse_unit_placement(&spec, r#"[["A",3],["B",2],["C",3],["D",1]]"#).unwrap();
        let b = parse_unit_placement(
            &spec,
            r#"[{"node":"D","file":1},{"node":"C","file":3},{"node":"B","file":2},{"node":"A","file":3}]"#,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.files(), &[2, 1, 2, 0]);
        assert!(parse_unit_placement(&spec, r#"[["A",4],["B",2],["C",3],["D",1]]"#).is_err());
        assert!(parse_unit_placement(&spec, r#"[["A",1],["B",2],["C",3]]"#).is_err());
        let multi = MultiPlacement {
            files: vec![vec![2], vec![1], vec![2], vec![0]],
        };
        let text = placement_to_json(&spec, &multi).to_string();
        assert_eq!(parse_placement(&spec, &text).unwrap(), multi);
    }

    #[test]
    fn code_file() {
        let code = parse_code(r#"{"field_order": 2, "generator": [[1,0,1],[0,1,1]]}"#).unwrap();
        assert_eq!(code.n(), 3);
        assert!(matches!(
            parse_code(r#"{"field_order": 2, "generator": [[1,1],[1,1]]}"#),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn plan_report_fields() {
        let out = plan(&ex1(), &PlanOptions::default()).unwrap();
        let doc = plan_report_json(&out, None);
        assert_eq!(doc["schema_version"], SCHEMA_VERSION);
        assert_eq!(doc["status"], "planned");
        assert_eq!(doc["average"]["exact"], "13/10");
        assert_eq!(doc["average"]["decimal"], "1.300000");
        assert_eq!(doc["coloring"], json!([["A", "C"], ["B"], ["D"]]));
        assert_eq!(doc["placement"][0], json!({"node": "A", "file": 3}));
        assert_eq!(doc["stats"]["exhaustive"], true);
    }

    #[test]
    fn multi_slot_report_names_original_nodes() {
        let out = plan(
            &ex1_with_capacities(vec![2, 1, 1, 1]),
            &PlanOptions::default(),
        )
        .unwrap();
        let doc = plan_report_json(&out, None);
        assert_eq!(doc["slots"][0]["node"], "A");
        assert_eq!(doc["slots"][0]["files"].as_array().unwrap().len(), 2);
        assert_eq!(doc["placement"][0]["node"], "A.0");
    }

    #[test]
    fn latency_csv_rows() {
        let spec = ex1();
        let p = Placement::new(vec![2, 1, 2, 0]);
        let report = crate::evaluation::eval_uncoded(&spec, &p).unwrap();
        let text = latency_report_csv(&spec, &report).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[1], "A,1,1/5,2,2.000000,2,2");
        assert_eq!(report.latencies[2][0], qi(5));
        assert_eq!(*spec.demand(0, 1), q(1, 40));
    }
}
