//! Readers and writers for session, class, link, heterogeneous-graph and
//! rating files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::labels::Labels;
use super::text::{by_name, has_section, lines_of, sections, SyntaxError};
use super::AppError;
use crate::graph::{build_from_edges, Digraph, GraphError, GraphRepresentation, NodeId};
use crate::hetnet::{
    build_pgrec, HetError, HetGraph, NodeType, PGRecGraph, RatingMatrix, RatingScale,
};
use crate::session::{
    ClassId, ClassType, KernelClass, KernelClassPartition, SessionError, SessionGraph, Violation,
};

/// A session graph together with the labels its nodes were declared with.
#[derive(Debug, Clone)]
pub struct LabeledSession {
    pub graph: SessionGraph,
    pub labels: Labels,
}

impl LabeledSession {
    /// `Rule(label, ...) [class, ...]`.
    pub fn describe(&self, v: &Violation) -> String {
        let nodes: Vec<String> = v.nodes().into_iter().map(|n| self.labels.name(n)).collect();
        let mut out = format!("{}({})", v.rule(), nodes.join(", "));
        let classes = v.classes();
        if !classes.is_empty() {
            let names: Vec<&str> = classes.iter().map(|c| c.0.as_str()).collect();
            let _ = write!(out, " [{}]", names.join(", "));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct LabeledHet {
    pub graph: HetGraph,
    pub labels: Labels,
}

#[derive(Debug, Clone)]
pub struct LabeledRatings {
    pub matrix: RatingMatrix,
    pub labels: Labels,
}

fn syntax(origin: &str) -> impl Fn(SyntaxError) -> AppError + '_ {
    move |e| AppError::Parse {
        path: origin.to_owned(),
        line: e.line,
        message: e.message,
    }
}

fn invalid(origin: &str, message: impl ToString) -> AppError {
    AppError::Validation {
        path: origin.to_owned(),
        message: message.to_string(),
    }
}

fn graph_error(origin: &str, e: GraphError) -> AppError {
    match e {
        GraphError::Malformed { .. } => AppError::Format {
            path: origin.to_owned(),
            message: e.to_string(),
        },
        other => invalid(origin, other),
    }
}

fn session_error(origin: &str, e: SessionError) -> AppError {
    match e {
        SessionError::Graph(g) => graph_error(origin, g),
        other => invalid(origin, other),
    }
}

/// Session file: optional `[classes]` (`id type`), `[nodes]`
/// (`label kernel|object [class]`) and `[edges]` (`src dst`).
/// Structural rules are not checked here.
pub fn read_session(text: &str, origin: &str) -> Result<LabeledSession, AppError> {
    let err = syntax(origin);
    let parsed = sections(text).map_err(&err)?;
    let found = by_name(&parsed, &["classes", "nodes", "edges"], None).map_err(&err)?;

    let mut class_order: Vec<(ClassId, ClassType)> = Vec::new();
    for line in lines_of(&found, "classes") {
        line.expect_fields(2, 2, "class-id type").map_err(&err)?;
        let id = ClassId::from(line.fields[0]);
        if class_order.iter().any(|(c, _)| *c == id) {
            return Err(err(SyntaxError::new(
                line.number,
                format!("class `{id}` declared twice"),
            )));
        }
        let class_type: ClassType = line.parse(1, "class type").map_err(&err)?;
        class_order.push((id, class_type));
    }

    let mut labels = Labels::new();
    let mut kernels = BTreeSet::new();
    let mut objects = BTreeSet::new();
    let mut members: BTreeMap<ClassId, BTreeSet<NodeId>> = BTreeMap::new();
    for line in lines_of(&found, "nodes") {
        line.expect_fields(2, 3, "label kernel|object [class]")
            .map_err(&err)?;
        let id = labels.intern(line.fields[0]);
        let fresh = match line.fields[1] {
            "kernel" => kernels.insert(id),
            "object" => objects.insert(id),
            other => {
                return Err(err(SyntaxError::new(
                    line.number,
                    format!("node kind must be `kernel` or `object`, found `{other}`"),
                )))
            }
        };
        if !fresh {
            return Err(err(SyntaxError::new(
                line.number,
                format!("node `{}` declared twice", line.fields[0]),
            )));
        }
        if let Some(&class) = line.fields.get(2) {
            let class = ClassId::from(class);
            if !class_order.iter().any(|(c, _)| *c == class) {
                return Err(err(SyntaxError::new(
                    line.number,
                    format!("class `{class}` is not declared in [classes]"),
                )));
            }
            members.entry(class).or_default().insert(id);
        }
    }

    let mut arcs = Vec::new();
    for line in lines_of(&found, "edges") {
        line.expect_fields(2, 2, "src dst").map_err(&err)?;
        let mut ends = [NodeId(0); 2];
        for (slot, name) in ends.iter_mut().zip(&line.fields) {
            *slot = labels.id(name).ok_or_else(|| {
                err(SyntaxError::new(
                    line.number,
                    format!("edge references undeclared node `{name}`"),
                ))
            })?;
        }
        arcs.push((ends[0], ends[1]));
    }

    let mut graph =
        SessionGraph::new(kernels, objects, arcs).map_err(|e| session_error(origin, e))?;
    if has_section(&found, "classes") {
        let classes = class_order
            .into_iter()
            .map(|(id, class_type)| KernelClass {
                kernels: members.remove(&id).unwrap_or_default(),
                id,
                class_type,
            })
            .collect();
        let partition = KernelClassPartition::new(classes).map_err(|e| session_error(origin, e))?;
        graph = graph.with_classes(partition);
    }
    Ok(LabeledSession { graph, labels })
}

/// Class file: one class per line, `id type member...`, members given by
/// the labels of an already loaded session file.
pub fn read_classes(
    text: &str,
    origin: &str,
    labels: &Labels,
) -> Result<KernelClassPartition, AppError> {
    let err = syntax(origin);
    let parsed = sections(text).map_err(&err)?;
    let found = by_name(&parsed, &["classes"], Some("classes")).map_err(&err)?;
    let mut classes: Vec<KernelClass> = Vec::new();
    for line in lines_of(&found, "classes") {
        line.expect_fields(2, usize::MAX, "class-id type [member...]")
            .map_err(&err)?;
        let id = ClassId::from(line.fields[0]);
        if classes.iter().any(|c| c.id == id) {
            return Err(err(SyntaxError::new(
                line.number,
                format!("class `{id}` declared twice"),
            )));
        }
        let class_type: ClassType = line.parse(1, "class type").map_err(&err)?;
        let mut kernels = BTreeSet::new();
        for name in &line.fields[2..] {
            let v = labels.id(name).ok_or_else(|| {
                err(SyntaxError::new(
                    line.number,
                    format!("class member `{name}` is not a declared node"),
                ))
            })?;
            kernels.insert(v);
        }
        classes.push(KernelClass {
            id,
            class_type,
            kernels,
        });
    }
    KernelClassPartition::new(classes).map_err(|e| session_error(origin, e))
}

/// Link file: optional `[nodes]` (one numeric id per line) and `[edges]`
/// (`src dst [weight]`). A file without headers is a bare edge list.
pub fn read_link(text: &str, origin: &str) -> Result<GraphRepresentation, AppError> {
    let err = syntax(origin);
    let parsed = sections(text).map_err(&err)?;
    let found = by_name(&parsed, &["nodes", "edges"], Some("edges")).map_err(&err)?;
    let mut isolated = Vec::new();
    for line in lines_of(&found, "nodes") {
        line.expect_fields(1, 1, "id").map_err(&err)?;
        isolated.push(line.parse::<i64>(0, "node id").map_err(&err)?);
    }
    let mut edges = Vec::new();
    for line in lines_of(&found, "edges") {
        line.expect_fields(2, 3, "src dst [weight]").map_err(&err)?;
        let src = line.parse::<i64>(0, "node id").map_err(&err)?;
        let dst = line.parse::<i64>(1, "node id").map_err(&err)?;
        let weight = match line.fields.len() {
            3 => Some(line.parse::<f64>(2, "weight").map_err(&err)?),
            _ => None,
        };
        edges.push((src, dst, weight));
    }
    build_from_edges(edges, &isolated).map_err(|e| graph_error(origin, e))
}

/// Canonical link file: every node id, then the sorted arcs.
pub fn write_link<G: Digraph + ?Sized>(g: &G) -> String {
    let mut out = String::from("[nodes]\n");
    for v in g.nodes() {
        let _ = writeln!(out, "{v}");
    }
    out.push_str("[edges]\n");
    for a in g.arcs() {
        match a.weight {
            Some(w) => writeln!(out, "{}\t{}\t{w}", a.src, a.dst),
            None => writeln!(out, "{}\t{}", a.src, a.dst),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

/// Heterogeneous graph file: `[nodes]` (`label type`) and `[edges]`
/// (`a b [weight]`); the edge family follows from the endpoint types.
pub fn read_het(text: &str, origin: &str) -> Result<LabeledHet, AppError> {
    let err = syntax(origin);
    let parsed = sections(text).map_err(&err)?;
    let found = by_name(&parsed, &["nodes", "edges"], None).map_err(&err)?;
    let mut labels = Labels::new();
    let mut graph = HetGraph::new();
    for line in lines_of(&found, "nodes") {
        line.expect_fields(2, 2, "label type").map_err(&err)?;
        let node_type: NodeType = line.parse(1, "node type").map_err(&err)?;
        if labels.id(line.fields[0]).is_some() {
            return Err(err(SyntaxError::new(
                line.number,
                format!("node `{}` declared twice", line.fields[0]),
            )));
        }
        let id = labels.intern(line.fields[0]);
        graph
            .add_node(id, node_type)
            .map_err(|e| invalid(origin, e))?;
    }
    for line in lines_of(&found, "edges") {
        line.expect_fields(2, 3, "a b [weight]").map_err(&err)?;
        let mut ends = [NodeId(0); 2];
        for (slot, name) in ends.iter_mut().zip(&line.fields) {
            *slot = labels.id(name).ok_or_else(|| {
                err(SyntaxError::new(
                    line.number,
                    format!("edge references undeclared node `{name}`"),
                ))
            })?;
        }
        let weight = match line.fields.len() {
            3 => Some(line.parse::<f64>(2, "weight").map_err(&err)?),
            _ => None,
        };
        graph.connect(ends[0], ends[1], weight).map_err(|e| {
            invalid(
                origin,
                format!("line {}: {}", line.number, het_message(&labels, e)),
            )
        })?;
    }
    Ok(LabeledHet { graph, labels })
}

fn het_message(labels: &Labels, e: HetError) -> String {
    match e {
        HetError::DuplicateEdge { a, b, edge_type } => format!(
            "duplicate {edge_type} edge {} - {}",
            labels.name(a),
            labels.name(b)
        ),
        HetError::EdgeTypeMismatch {
            a,
            a_type,
            b,
            b_type,
        } => format!(
            "no edge family joins {a_type} {} and {b_type} {}",
            labels.name(a),
            labels.name(b)
        ),
        HetError::InvalidWeight { a, b, reason } => {
            format!("edge {} - {}: {reason}", labels.name(a), labels.name(b))
        }
        other => other.to_string(),
    }
}

/// Canonical heterogeneous graph file: nodes by id, edges sorted by their
/// endpoints in signature orientation.
pub fn write_het(g: &HetGraph, labels: &Labels) -> String {
    let mut out = String::from("[nodes]\n");
    for (id, t) in g.nodes() {
        let _ = writeln!(out, "{}\t{t}", labels.name(id));
    }
    out.push_str("[edges]\n");
    let mut edges: Vec<_> = g.edges().iter().collect();
    edges.sort_by_key(|e| (e.a, e.b, e.edge_type));
    for e in edges {
        let _ = match e.weight {
            Some(w) => writeln!(out, "{}\t{}\t{w}", labels.name(e.a), labels.name(e.b)),
            None => writeln!(out, "{}\t{}", labels.name(e.a), labels.name(e.b)),
        };
    }
    out
}

/// Ratings CSV, `user,object,rating`. An optional header row naming the
/// three columns and `#` comment lines are skipped. Users and objects share
/// one label space, assigned in order of first appearance.
pub fn read_ratings(
    text: &str,
    origin: &str,
    scale: RatingScale,
) -> Result<LabeledRatings, AppError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut labels = Labels::new();
    let mut matrix = RatingMatrix::new(scale);
    for (i, record) in reader.records().enumerate() {
        let parse = |line: usize, message: String| AppError::Parse {
            path: origin.to_owned(),
            line,
            message,
        };
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 3 {
            return Err(parse(
                line,
                format!(
                    "expected `user,object,rating`, found {} field(s)",
                    record.len()
                ),
            ));
        }
        if i == 0
            && record
                .iter()
                .map(str::to_ascii_lowercase)
                .eq(["user", "object", "rating"])
        {
            continue;
        }
        let value: i64 = record[2]
            .parse()
            .map_err(|_| parse(line, format!("rating `{}` is not an integer", &record[2])))?;
        let user = labels.intern(&record[0]);
        let object = labels.intern(&record[1]);
        matrix.insert(user, object, value).map_err(|e| {
            invalid(
                origin,
                format!("line {line}: {}", rating_message(&labels, e)),
            )
        })?;
    }
    Ok(LabeledRatings { matrix, labels })
}

fn rating_message(labels: &Labels, e: HetError) -> String {
    match e {
        HetError::OutOfScale {
            user,
            object,
            value,
            min,
            max,
        } => format!(
            "rating {value} of user {} for object {} is outside the scale {min}..{max}",
            labels.name(user),
            labels.name(object)
        ),
        HetError::DuplicateRating { user, object } => {
            format!(
                "user {} rated object {} twice",
                labels.name(user),
                labels.name(object)
            )
        }
        HetError::NodeTypeConflict {
            id,
            existing,
            requested,
        } => format!(
            "`{}` is already a {existing}, cannot also be a {requested}",
            labels.name(id)
        ),
        other => other.to_string(),
    }
}

/// Builds the preference graph and labels each preference node
/// `pref:<better-candidate>:<other>` after its object pair.
pub fn pgrec_from_ratings(
    r: &LabeledRatings,
    origin: &str,
) -> Result<(PGRecGraph, Labels), AppError> {
    let pg = build_pgrec(&r.matrix);
    let mut labels = r.labels.clone();
    for (&p, &(i, j)) in pg.preferences() {
        let name = format!("pref:{}:{}", labels.name(i), labels.name(j));
        if labels.id(&name).is_some() {
            return Err(AppError::Format {
                path: origin.to_owned(),
                message: format!("preference label `{name}` clashes with an existing label"),
            });
        }
        let id = labels.intern(&name);
        debug_assert_eq!(id, p, "preference ids continue the label numbering");
    }
    Ok((pg, labels))
}
