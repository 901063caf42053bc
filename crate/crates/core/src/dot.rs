//! Graphviz DOT export of the nearest-neighbor graph and the extended graph.

use std::fmt::Write;

use crate::model::NetworkSpec;
use crate::nngraph::{ExtendedGraph, NearestNeighborGraph};

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Directed graph with an edge `s -> v` for every `s ∈ In(v)`, labeled with
/// the RTT.
pub fn nng_to_dot(spec: &NetworkSpec, nng: &NearestNeighborGraph) -> String {
    let mut out = String::from("digraph nng {\n");
    for v in 0..nng.node_count() {
        writeln!(out, "  {};", quote(spec.node_id(v))).unwrap();
    }
    let mut edges = nng.edges();
    edges.sort();
    for (s, v) in edges {
        writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            quote(spec.node_id(s)),
            quote(spec.node_id(v)),
            spec.rtt(s, v)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn extended_to_dot(spec: &NetworkSpec, h: &ExtendedGraph) -> String {
    let mut out = String::from("graph extended {\n");
    for v in 0..h.node_count() {
        writeln!(out, "  {};", quote(spec.node_id(v))).unwrap();
    }
    for (a, b) in h.edges() {
        writeln!(
            out,
            "  {} -- {};",
            quote(spec.node_id(a)),
            quote(spec.node_id(b))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
