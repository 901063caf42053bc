//! Human-readable tables for standard output.

use std::fmt::Write;

use geoplace_core::assignment::HungarianTrace;
use geoplace_core::coloring::Infeasibility;
use geoplace_core::evaluation::LatencyReport;
use geoplace_core::model::{NetworkSpec, ValidationReport};
use geoplace_core::oracle::{OracleResult, Verdict};
use geoplace_core::planner::{PlanOutcome, INFEASIBLE_NOTE, OPTIMALITY_NOTE};
use geoplace_core::rational::ExactValue;
use geoplace_core::Q;

fn ev(value: &Q) -> String {
    ExactValue::from(value).to_string()
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                write!(s, "{cell:<w$}  ").unwrap();
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn validation(spec: &NetworkSpec, report: &ValidationReport, strict: bool) -> String {
    let mut out = format!(
        "spec: {} nodes, {} files, total capacity {}\n",
        spec.node_count(),
        spec.file_count(),
        spec.total_capacity()
    );
    for e in &report.errors {
        writeln!(out, "error: {e}").unwrap();
    }
    for w in &report.warnings {
        let level = if strict { "error" } else { "warning" };
        writeln!(out, "{level}: {w}").unwrap();
    }
    let status = if report.is_ok(strict) {
        "valid"
    } else {
        "invalid"
    };
    writeln!(out, "status: {status}").unwrap();
    out
}

pub fn plan(
    spec: &NetworkSpec,
    outcome: &PlanOutcome,
    trace: Option<&HungarianTrace<Q>>,
) -> String {
    let mut out = String::new();
    match outcome {
        PlanOutcome::Planned(r) => {
            let unit = &r.expanded.spec;
            let status = if r.stats.exhaustive() {
                "planned"
            } else {
                "planned (best found, enumeration truncated)"
            };
            writeln!(out, "status: {status}").unwrap();
            writeln!(out, "average latency: {}", ev(&r.average)).unwrap();
            out.push('\n');
            let rows: Vec<Vec<String>> = (0..unit.node_count())
                .map(|v| {
                    vec![
                        unit.node_id(v).to_string(),
                        (r.placement.file_of(v) + 1).to_string(),
                        ev(&r.worst_case[v]),
                        ev(&r.wc_bounds[v]),
                    ]
                })
                .collect();
            out.push_str(&table(&["node", "file", "worst case", "bound"], &rows));
            if !spec.is_unit_capacity() {
                out.push('\n');
                let rows: Vec<Vec<String>> = r
                    .projected
                    .files
                    .iter()
                    .enumerate()
                    .map(|(v, files)| {
                        let files: Vec<String> =
                            files.iter().map(|j| (j + 1).to_string()).collect();
                        vec![spec.node_id(v).to_string(), files.join(",")]
                    })
                    .collect();
                out.push_str(&table(&["node", "files"], &rows));
            }
            out.push('\n');
            writeln!(
                out,
                "nearest-neighbor graphs: {} of {} tried{}",
                r.stats.nngs_tried,
                r.stats.nngs_total,
                if r.stats.nngs_truncated {
                    " (truncated)"
                } else {
                    ""
                }
            )
            .unwrap();
            writeln!(
                out,
                "colorings: {} tried, {} pruned{}",
                r.stats.colorings_tried,
                r.stats.colorings_pruned,
                if r.stats.colorings_truncated {
                    " (truncated)"
                } else {
                    ""
                }
            )
            .unwrap();
            if let Some(t) = trace {
                let deltas: Vec<String> = t.deltas().iter().map(ev).collect();
                writeln!(
                    out,
                    "assignment trace: {} steps, deltas [{}]",
                    t.steps.len(),
                    deltas.join(", ")
                )
                .unwrap();
            }
            writeln!(out, "note: {OPTIMALITY_NOTE}").unwrap();
        }
        PlanOutcome::Infeasible(r) => {
            let unit = &r.expanded.spec;
            writeln!(out, "status: infeasible").unwrap();
            for (i, c) in r.certificates.iter().enumerate() {
                match c {
                    Infeasibility::Clique { nodes } => {
                        let ids: Vec<&str> = nodes.iter().map(|&v| unit.node_id(v)).collect();
                        writeln!(
                            out,
                            "graph {i}: clique of size {} ({})",
                            nodes.len(),
                            ids.join(", ")
                        )
                        .unwrap();
                    }
                    Infeasibility::Exhausted => {
                        writeln!(out, "graph {i}: no coloring found").unwrap()
                    }
                }
            }
            writeln!(out, "note: {INFEASIBLE_NOTE}").unwrap();
        }
    }
    out
}

pub fn latency(spec: &NetworkSpec, report: &LatencyReport) -> String {
    let k = spec.file_count();
    let mut header: Vec<String> = vec!["node".into()];
    header.extend((1..=k).map(|j| format!("W{j}")));
    header.extend(["worst case".into(), "bound".into()]);
    let rows: Vec<Vec<String>> = report
        .latencies
        .iter()
        .enumerate()
        .map(|(v, row)| {
            let mut cells = vec![spec.node_id(v).to_string()];
            cells.extend(row.iter().map(|l| l.to_string()));
            cells.push(ev(&report.worst_case[v]));
            cells.push(ev(&report.wc_bounds[v]));
            cells
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = table(&header, &rows);
    out.push('\n');
    writeln!(out, "average latency: {}", ev(&report.average)).unwrap();
    writeln!(
        out,
        "worst-case bound met at every node: {}",
        if report.meets_wc_bound() { "yes" } else { "no" }
    )
    .unwrap();
    out
}

pub fn oracle(spec: &NetworkSpec, result: &OracleResult, verdict: Option<&Verdict>) -> String {
    let mut out = String::new();
    writeln!(out, "search space: {} placements", result.search_space).unwrap();
    match &result.best {
        Some(best) => {
            writeln!(out, "best average latency: {}", ev(best)).unwrap();
            writeln!(out, "optimal placements: {}", result.witness_count).unwrap();
            for w in &result.witnesses {
                let cells: Vec<String> = (0..w.len())
                    .map(|v| format!("{}:{}", spec.node_id(v), w.file_of(v) + 1))
                    .collect();
                writeln!(out, "  {}", cells.join(" ")).unwrap();
            }
        }
        None => writeln!(out, "no qualifying placement").unwrap(),
    }
    match verdict {
        Some(Verdict::Verified { .. }) => writeln!(out, "planner: verified").unwrap(),
        Some(Verdict::Unverified { reason }) => {
            writeln!(out, "planner: unverified ({reason})").unwrap()
        }
        Some(Verdict::Counterexample(c)) => {
            writeln!(out, "planner: counterexample: {}", c.reason).unwrap();
        }
        None => {}
    }
    out
}
