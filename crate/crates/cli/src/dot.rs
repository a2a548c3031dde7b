//! Graphviz export.

use std::fmt::Write as _;

use mkstar_core::partition::Partition;
use mkstar_core::Graph;

// size of the `set312` color scheme
const PALETTE: usize = 12;

/// An undirected DOT graph with weight labels. With a partition, nodes are
/// filled with color `cluster + 1` of the `set312` scheme.
pub fn emit_dot(g: &Graph, p: Option<&Partition>) -> String {
    let mut out = String::from("graph G {\n");
    match p {
        Some(p) => {
            out.push_str("  node [style=filled, colorscheme=set312];\n");
            for (v, &c) in p.labels.iter().enumerate() {
                let _ = writeln!(out, "  {v} [fillcolor={}];", c % PALETTE + 1);
            }
        }
        None => {
            for v in 0..g.n() {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for e in g.edges() {
        let _ = writeln!(out, "  {} -- {} [label=\"{}\"];", e.u, e.v, e.w);
    }
    out.push_str("}\n");
    out
}
