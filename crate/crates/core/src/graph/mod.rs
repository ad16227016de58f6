//! Finite directed graphs in five interchangeable physical layouts.
//!
//! Every layout answers the same [`Digraph`] queries, and any layout can be
//! converted into any other through [`GraphRepresentation::convert`]. Node ids
//! need not be contiguous; each layout keeps the sorted id list and maps ids to
//! dense row/column indices by binary search.

mod adjacency_list;
mod adjacency_matrix;
mod edge_list;
mod incidence_list;
mod incidence_matrix;
mod memory;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use adjacency_list::{AdjacencyList, SuccessorLists};
pub use adjacency_matrix::AdjacencyMatrix;
pub use edge_list::EdgeList;
pub use incidence_list::IncidenceList;
pub use incidence_matrix::IncidenceMatrix;
pub use memory::{memory_profile, AsymptoticClass, MemoryProfile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate arc {src} -> {dst}")]
    DuplicateArc { src: NodeId, dst: NodeId },
    #[error("node id {0} is negative")]
    BadId(i64),
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("arc {src} -> {dst} has a non-finite weight")]
    BadWeight { src: NodeId, dst: NodeId },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("malformed {kind} layout: {reason}")]
    Malformed {
        kind: RepresentationKind,
        reason: String,
    },
}

/// Identifier of a graph node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u64);

impl NodeId {
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for NodeId {
    fn from(id: u64) -> Self {
        NodeId(id)
    }
}

impl TryFrom<i64> for NodeId {
    type Error = GraphError;

    fn try_from(id: i64) -> Result<Self, Self::Error> {
        u64::try_from(id)
            .map(NodeId)
            .map_err(|_| GraphError::BadId(id))
    }
}

/// A directed arc with an optional weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: Option<f64>,
}

impl Arc {
    pub fn new(src: NodeId, dst: NodeId) -> Self {
        Arc {
            src,
            dst,
            weight: None,
        }
    }

    pub fn weighted(src: NodeId, dst: NodeId, weight: f64) -> Self {
        Arc {
            src,
            dst,
            weight: Some(weight),
        }
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.src, self.dst)
    }
}

/// The five physical layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RepresentationKind {
    EdgeList,
    AdjacencyMatrix,
    IncidenceMatrix,
    AdjacencyList,
    IncidenceList,
}

impl RepresentationKind {
    pub const ALL: [RepresentationKind; 5] = [
        RepresentationKind::EdgeList,
        RepresentationKind::AdjacencyMatrix,
        RepresentationKind::IncidenceMatrix,
        RepresentationKind::AdjacencyList,
        RepresentationKind::IncidenceList,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepresentationKind::EdgeList => "edge-list",
            RepresentationKind::AdjacencyMatrix => "adjacency-matrix",
            RepresentationKind::IncidenceMatrix => "incidence-matrix",
            RepresentationKind::AdjacencyList => "adjacency-list",
            RepresentationKind::IncidenceList => "incidence-list",
        }
    }
}

impl fmt::Display for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepresentationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RepresentationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown representation `{s}` (expected one of: {})",
                    RepresentationKind::ALL.map(|k| k.name()).join(", ")
                )
            })
    }
}

/// Sorted, duplicate-free node ids with id -> dense index lookup.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSet {
    ids: Vec<NodeId>,
}

impl NodeSet {
    pub fn new(ids: impl IntoIterator<Item = NodeId>) -> Self {
        let ids: BTreeSet<NodeId> = ids.into_iter().collect();
        NodeSet {
            ids: ids.into_iter().collect(),
        }
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn id_at(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    fn require(&self, id: NodeId) -> Result<usize, GraphError> {
        self.index_of(id).ok_or(GraphError::UnknownNode(id))
    }
}

/// Answer of an adjacency query for one node. Neighbor lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    pub in_degree: usize,
    pub out_degree: usize,
    pub in_neighbors: Vec<NodeId>,
    pub out_neighbors: Vec<NodeId>,
}

/// Queries every layout answers natively.
pub trait Digraph {
    fn kind(&self) -> RepresentationKind;

    /// Node ids in ascending order.
    fn nodes(&self) -> &[NodeId];

    fn arc_count(&self) -> usize;

    /// All arcs, sorted by `(src, dst)`.
    fn arcs(&self) -> Vec<Arc>;

    /// Out-neighbors of `v`, ascending.
    fn out_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError>;

    /// In-neighbors of `v`, ascending.
    fn in_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError>;

    fn node_count(&self) -> usize {
        self.nodes().len()
    }

    fn contains_node(&self, v: NodeId) -> bool {
        self.nodes().binary_search(&v).is_ok()
    }

    fn adjacency(&self, v: NodeId) -> Result<Adjacency, GraphError> {
        let in_neighbors = self.in_neighbors(v)?;
        let out_neighbors = self.out_neighbors(v)?;
        Ok(Adjacency {
            in_degree: in_neighbors.len(),
            out_degree: out_neighbors.len(),
            in_neighbors,
            out_neighbors,
        })
    }

    fn memory_profile(&self) -> MemoryProfile {
        memory_profile(
            self.kind(),
            self.node_count() as u64,
            self.arc_count() as u64,
        )
    }
}

/// A digraph stored in one of the five layouts.
#[derive(Debug, Clone)]
pub enum GraphRepresentation {
    EdgeList(EdgeList),
    AdjacencyMatrix(AdjacencyMatrix),
    IncidenceMatrix(IncidenceMatrix),
    AdjacencyList(AdjacencyList),
    IncidenceList(IncidenceList),
}

macro_rules! dispatch {
    ($self:expr, $g:ident => $body:expr) => {
        match $self {
            GraphRepresentation::EdgeList($g) => $body,
            GraphRepresentation::AdjacencyMatrix($g) => $body,
            GraphRepresentation::IncidenceMatrix($g) => $body,
            GraphRepresentation::AdjacencyList($g) => $body,
            GraphRepresentation::IncidenceList($g) => $body,
        }
    };
}

impl Digraph for GraphRepresentation {
    fn kind(&self) -> RepresentationKind {
        dispatch!(self, g => g.kind())
    }

    fn nodes(&self) -> &[NodeId] {
        dispatch!(self, g => g.nodes())
    }

    fn arc_count(&self) -> usize {
        dispatch!(self, g => g.arc_count())
    }

    fn arcs(&self) -> Vec<Arc> {
        dispatch!(self, g => g.arcs())
    }

    fn out_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        dispatch!(self, g => g.out_neighbors(v))
    }

    fn in_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        dispatch!(self, g => g.in_neighbors(v))
    }
}

impl GraphRepresentation {
    /// Re-encodes the same node and arc sets in the `target` layout.
    pub fn convert(&self, target: RepresentationKind) -> GraphRepresentation {
        let nodes = NodeSet {
            ids: self.nodes().to_vec(),
        };
        let arcs = self.arcs();
        match target {
            RepresentationKind::EdgeList => {
                GraphRepresentation::EdgeList(EdgeList::from_checked(nodes, arcs))
            }
            RepresentationKind::AdjacencyMatrix => {
                GraphRepresentation::AdjacencyMatrix(AdjacencyMatrix::from_checked(nodes, &arcs))
            }
            RepresentationKind::IncidenceMatrix => {
                GraphRepresentation::IncidenceMatrix(IncidenceMatrix::from_checked(nodes, &arcs))
            }
            RepresentationKind::AdjacencyList => {
                GraphRepresentation::AdjacencyList(AdjacencyList::from_checked(nodes, &arcs))
            }
            RepresentationKind::IncidenceList => {
                GraphRepresentation::IncidenceList(IncidenceList::from_checked(nodes, &arcs))
            }
        }
    }

    /// Arc set as sorted `(src, dst)` pairs, ignoring weights.
    pub fn arc_pairs(&self) -> Vec<(NodeId, NodeId)> {
        self.arcs().iter().map(Arc::endpoints).collect()
    }
}

impl From<EdgeList> for GraphRepresentation {
    fn from(g: EdgeList) -> Self {
        GraphRepresentation::EdgeList(g)
    }
}

/// Builds an edge-list graph from raw `(src, dst, weight)` triples plus any
/// additional isolated nodes.
pub fn build_from_edges<I>(edges: I, isolated: &[i64]) -> Result<GraphRepresentation, GraphError>
where
    I: IntoIterator<Item = (i64, i64, Option<f64>)>,
{
    let arcs = edges
        .into_iter()
        .map(|(s, d, w)| {
            Ok(Arc {
                src: NodeId::try_from(s)?,
                dst: NodeId::try_from(d)?,
                weight: w,
            })
        })
        .collect::<Result<Vec<_>, GraphError>>()?;
    let isolated = isolated
        .iter()
        .map(|&id| NodeId::try_from(id))
        .collect::<Result<Vec<_>, _>>()?;
    EdgeList::new(isolated, arcs).map(GraphRepresentation::EdgeList)
}

/// Shared arc validation: finite weights, no self-loops, no parallel arcs.
/// Returns the arcs sorted by `(src, dst)`.
pub(crate) fn check_arcs(mut arcs: Vec<Arc>) -> Result<Vec<Arc>, GraphError> {
    for a in &arcs {
        if a.src == a.dst {
            return Err(GraphError::SelfLoop(a.src));
        }
        if a.weight.is_some_and(|w| !w.is_finite()) {
            return Err(GraphError::BadWeight {
                src: a.src,
                dst: a.dst,
            });
        }
    }
    arcs.sort_by_key(Arc::endpoints);
    if let Some(w) = arcs
        .windows(2)
        .find(|w| w[0].endpoints() == w[1].endpoints())
    {
        return Err(GraphError::DuplicateArc {
            src: w[0].src,
            dst: w[0].dst,
        });
    }
    Ok(arcs)
}
