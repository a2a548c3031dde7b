//! The graph text format and the l-dependent partition file.
//!
//! ```text
//! # comment
//! n 4          header, must come first
//! 0 1 1.5      edge u v weight (0-based)
//! m 2 3        mass of vertex 2 (default 1)
//! ```

use std::fmt::Write as _;

use mkstar_core::graph::GraphError;
use mkstar_core::structure::LDependentCandidate;
use mkstar_core::Graph;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing header line `n <count>`")]
    MissingHeader,
}

fn parse_err(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        reason: reason.into(),
    }
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

fn parse_index(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a vertex index")))
}

fn parse_real(tok: &str, line: usize) -> Result<f64, FormatError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a number")))
}

pub fn parse_graph_file(text: &str) -> Result<Graph, FormatError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut masses: Vec<(usize, usize, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = content(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match (n, toks[0]) {
            (None, "n") if toks.len() == 2 => n = Some(parse_index(toks[1], line)?),
            (None, _) => return Err(FormatError::MissingHeader),
            (Some(_), "n") => return Err(parse_err(line, "repeated header")),
            (Some(_), "m") => {
                if toks.len() != 3 {
                    return Err(parse_err(line, "mass lines are `m <vertex> <value>`"));
                }
                masses.push((line, parse_index(toks[1], line)?, parse_real(toks[2], line)?));
            }
            (Some(_), _) => {
                if toks.len() != 3 {
                    return Err(parse_err(line, "edge lines are `<u> <v> <weight>`"));
                }
                edges.push((
                    parse_index(toks[0], line)?,
                    parse_index(toks[1], line)?,
                    parse_real(toks[2], line)?,
                ));
                edge_lines.push(line);
            }
        }
    }
    let n = n.ok_or(FormatError::MissingHeader)?;

    let g = Graph::new(n, edges).map_err(|e| {
        let edge = match e {
            GraphError::SelfLoop { edge, .. }
            | GraphError::DuplicateEdge { edge, .. }
            | GraphError::NonPositiveWeight { edge, .. }
            | GraphError::NonFiniteWeight { edge, .. }
            | GraphError::IndexOutOfRange { edge, .. } => edge,
            _ => 0,
        };
        FormatError::Graph {
            line: edge_lines.get(edge).copied().unwrap_or(0),
            source: e,
        }
    })?;
    if masses.is_empty() {
        return Ok(g);
    }

    let mut mass = vec![1.0; n];
    let mut seen = vec![false; n];
    for &(line, v, value) in &masses {
        if v >= n {
            let source = GraphError::VertexOutOfRange { vertex: v, n };
            return Err(FormatError::Graph { line, source });
        }
        if seen[v] {
            return Err(parse_err(line, format!("second mass for vertex {v}")));
        }
        if !(value.is_finite() && value > 0.0) {
            let source = GraphError::NonPositiveMass { vertex: v, mass: value };
            return Err(FormatError::Graph { line, source });
        }
        seen[v] = true;
        mass[v] = value;
    }
    g.with_masses(mass)
        .map_err(|source| FormatError::Graph { line: 0, source })
}

/// Canonical text: header, edges sorted by `(u, v)`, then non-unit masses.
/// Numbers use the shortest representation that parses back exactly.
pub fn write_graph_file(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    for (v, &m) in g.mass().iter().enumerate() {
        if m != 1.0 {
            let _ = writeln!(out, "m {v} {m}");
        }
    }
    out
}

/// Lines `v1 ...`, `v2 ...`, `v3 ...` (each at most once, `v3` optional).
pub fn parse_partition_file(text: &str) -> Result<LDependentCandidate, FormatError> {
    let mut cand = LDependentCandidate::default();
    let mut seen = [false; 3];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = content(raw).split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else {
            continue;
        };
        let (slot, target) = match head {
            "v1" => (0, &mut cand.v1),
            "v2" => (1, &mut cand.v2),
            "v3" => (2, &mut cand.v3),
            other => return Err(parse_err(line, format!("unknown set `{other}`"))),
        };
        if seen[slot] {
            return Err(parse_err(line, format!("set {head} given twice")));
        }
        seen[slot] = true;
        for tok in rest {
            target.push(parse_index(tok, line)?);
        }
    }
    if !seen[0] || !seen[1] {
        return Err(parse_err(0, "partition needs v1 and v2 lines"));
    }
    Ok(cand)
}
