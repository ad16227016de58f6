//! Text forms of the five graph layouts, used by `convert`.
//!
//! * edge list: the link file format.
//! * adjacency matrix: `[matrix]` rows `id cell...` with 0/1 cells.
//! * incidence matrix: `[matrix]` rows `id cell...` with -1/0/1 cells, one
//!   column per arc.
//! * adjacency list: `[adjacency]` rows `id successor...`.
//! * incidence list: `[arcs]` rows `number src dst` and `[incidence]` rows
//!   `id arc-number...`.
//!
//! Every form but the edge list carries arc weights in an optional
//! `[weights]` section of `src dst weight` rows.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::files::{read_link, write_link};
use super::text::{by_name, lines_of, sections, Line, SyntaxError};
use super::AppError;
use crate::graph::{
    AdjacencyList, AdjacencyMatrix, Arc, Digraph, GraphError, GraphRepresentation, IncidenceList,
    IncidenceMatrix, NodeId, RepresentationKind,
};

pub fn read_layout(
    text: &str,
    origin: &str,
    kind: RepresentationKind,
) -> Result<GraphRepresentation, AppError> {
    if kind == RepresentationKind::EdgeList {
        return read_link(text, origin);
    }
    let err = |e: SyntaxError| AppError::Parse {
        path: origin.to_owned(),
        line: e.line,
        message: e.message,
    };
    let graph_err = |e: GraphError| match e {
        GraphError::Malformed { .. } => AppError::Format {
            path: origin.to_owned(),
            message: e.to_string(),
        },
        other => AppError::Validation {
            path: origin.to_owned(),
            message: other.to_string(),
        },
    };
    let parsed = sections(text).map_err(err)?;
    let allowed: &[&str] = match kind {
        RepresentationKind::AdjacencyMatrix | RepresentationKind::IncidenceMatrix => {
            &["matrix", "weights"]
        }
        RepresentationKind::AdjacencyList => &["adjacency", "weights"],
        RepresentationKind::IncidenceList => &["arcs", "incidence", "weights"],
        RepresentationKind::EdgeList => unreachable!("handled above"),
    };
    let found = by_name(&parsed, allowed, None).map_err(err)?;
    let mut weights = BTreeMap::new();
    for line in lines_of(&found, "weights") {
        line.expect_fields(3, 3, "src dst weight").map_err(err)?;
        let key = (node(line, 0).map_err(err)?, node(line, 1).map_err(err)?);
        if weights
            .insert(key, line.parse::<f64>(2, "weight").map_err(err)?)
            .is_some()
        {
            return Err(err(SyntaxError::new(
                line.number,
                "weight given twice for one arc",
            )));
        }
    }
    let weight_list = || weights.iter().map(|(&(s, d), &w)| (s, d, w));

    let graph = match kind {
        RepresentationKind::AdjacencyMatrix => {
            let (nodes, rows) = matrix_rows::<u8>(lines_of(&found, "matrix")).map_err(err)?;
            AdjacencyMatrix::from_rows(nodes, &rows, weight_list())
                .map(GraphRepresentation::AdjacencyMatrix)
        }
        RepresentationKind::IncidenceMatrix => {
            let (nodes, rows) = matrix_rows::<i8>(lines_of(&found, "matrix")).map_err(err)?;
            IncidenceMatrix::from_rows(nodes, &rows, weight_list())
                .map(GraphRepresentation::IncidenceMatrix)
        }
        RepresentationKind::AdjacencyList => {
            let mut lists = Vec::new();
            for line in lines_of(&found, "adjacency") {
                let v = node(line, 0).map_err(err)?;
                let succ = (1..line.fields.len())
                    .map(|i| node(line, i).map(|w| (w, weights.get(&(v, w)).copied())))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                lists.push((v, succ));
            }
            unused_weights(kind, &weights, |s, d| {
                lists
                    .iter()
                    .any(|(v, l)| *v == s && l.iter().any(|x| x.0 == d))
            })
            .map_err(&graph_err)?;
            AdjacencyList::from_lists(lists).map(GraphRepresentation::AdjacencyList)
        }
        RepresentationKind::IncidenceList => {
            let mut arcs = Vec::new();
            for line in lines_of(&found, "arcs") {
                line.expect_fields(3, 3, "number src dst").map_err(err)?;
                let k: usize = line.parse(0, "arc number").map_err(err)?;
                if k != arcs.len() {
                    return Err(err(SyntaxError::new(
                        line.number,
                        format!("arc number {k} out of sequence, expected {}", arcs.len()),
                    )));
                }
                let (src, dst) = (node(line, 1).map_err(err)?, node(line, 2).map_err(err)?);
                arcs.push(Arc {
                    src,
                    dst,
                    weight: weights.get(&(src, dst)).copied(),
                });
            }
            let mut nodes = Vec::new();
            let mut incident = Vec::new();
            for line in lines_of(&found, "incidence") {
                let v = node(line, 0).map_err(err)?;
                let list = (1..line.fields.len())
                    .map(|i| line.parse::<usize>(i, "arc number"))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                nodes.push(v);
                incident.push((v, list));
            }
            unused_weights(kind, &weights, |s, d| {
                arcs.iter().any(|a| (a.src, a.dst) == (s, d))
            })
            .map_err(&graph_err)?;
            IncidenceList::from_parts(nodes, arcs, incident).map(GraphRepresentation::IncidenceList)
        }
        RepresentationKind::EdgeList => unreachable!("handled above"),
    };
    graph.map_err(graph_err)
}

fn node(line: &Line<'_>, idx: usize) -> Result<NodeId, SyntaxError> {
    let raw: i64 = line.parse(idx, "node id")?;
    NodeId::try_from(raw).map_err(|e| SyntaxError::new(line.number, e.to_string()))
}

fn matrix_rows<T: std::str::FromStr>(
    lines: &[Line<'_>],
) -> Result<(Vec<NodeId>, Vec<Vec<T>>), SyntaxError> {
    let mut nodes = Vec::new();
    let mut rows = Vec::new();
    for line in lines {
        nodes.push(node(line, 0)?);
        rows.push(
            (1..line.fields.len())
                .map(|i| line.parse::<T>(i, "matrix cell"))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok((nodes, rows))
}

fn unused_weights(
    kind: RepresentationKind,
    weights: &BTreeMap<(NodeId, NodeId), f64>,
    is_arc: impl Fn(NodeId, NodeId) -> bool,
) -> Result<(), GraphError> {
    match weights.keys().find(|&&(s, d)| !is_arc(s, d)) {
        Some(&(src, dst)) => Err(GraphError::Malformed {
            kind,
            reason: format!("weight given for missing arc {src} -> {dst}"),
        }),
        None => Ok(()),
    }
}

pub fn write_layout(g: &GraphRepresentation) -> String {
    let mut out = String::new();
    match g {
        GraphRepresentation::EdgeList(_) => return write_link(g),
        GraphRepresentation::AdjacencyMatrix(m) => {
            out.push_str("[matrix]\n");
            for (v, row) in m.nodes().iter().zip(m.rows()) {
                write_row(&mut out, *v, row.iter());
            }
        }
        GraphRepresentation::IncidenceMatrix(m) => {
            out.push_str("[matrix]\n");
            for (v, row) in m.nodes().iter().zip(m.rows()) {
                write_row(&mut out, *v, row.iter());
            }
        }
        GraphRepresentation::AdjacencyList(l) => {
            out.push_str("[adjacency]\n");
            for (v, succ) in l.lists() {
                write_row(&mut out, v, succ.iter().map(|s| s.0));
            }
        }
        GraphRepresentation::IncidenceList(l) => {
            out.push_str("[arcs]\n");
            for (k, a) in l.arc_table().iter().enumerate() {
                let _ = writeln!(out, "{k}\t{}\t{}", a.src, a.dst);
            }
            out.push_str("[incidence]\n");
            for (v, list) in l.incidence() {
                write_row(&mut out, v, list.iter());
            }
        }
    }
    let weighted: Vec<Arc> = g
        .arcs()
        .into_iter()
        .filter(|a| a.weight.is_some())
        .collect();
    if !weighted.is_empty() {
        out.push_str("[weights]\n");
        for a in weighted {
            let _ = writeln!(out, "{}\t{}\t{}", a.src, a.dst, a.weight.expect("filtered"));
        }
    }
    out
}

fn write_row<T: std::fmt::Display>(out: &mut String, v: NodeId, cells: impl Iterator<Item = T>) {
    let _ = write!(out, "{v}");
    for c in cells {
        let _ = write!(out, "\t{c}");
    }
    out.push('\n');
}
