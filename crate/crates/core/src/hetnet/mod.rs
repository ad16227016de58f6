//! Heterogeneous information networks: typed nodes, typed edges.
//!
//! [`HetGraph`] houses the weighted user/object rating graph, the tripartite
//! preference graph built from it ([`build_pgrec`]) and its extension with
//! group and category nodes ([`extend_pgrec`]). [`match_metapath`] counts
//! typed walks such as `UOU` over any of these.

mod metapath;
mod pgrec;
mod rating;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::NodeId;

pub use metapath::{match_metapath, recommend_via_metapath, MetaPathPattern};
pub use pgrec::{build_pgrec, extend_pgrec, PGRecExtension, PGRecGraph};
pub use rating::{rating_matrix_from_bipartite, RatingMatrix, RatingScale};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HetError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is not a user")]
    UnknownUser(NodeId),
    #[error("node {0} is not an object")]
    UnknownObject(NodeId),
    #[error("node {id} is already a {existing}, cannot redeclare it as a {requested}")]
    NodeTypeConflict {
        id: NodeId,
        existing: NodeType,
        requested: NodeType,
    },
    #[error("no edge family joins {a_type} {a} and {b_type} {b}")]
    EdgeTypeMismatch {
        a: NodeId,
        a_type: NodeType,
        b: NodeId,
        b_type: NodeType,
    },
    #[error("edge {a} - {b}: {reason}")]
    InvalidWeight {
        a: NodeId,
        b: NodeId,
        reason: String,
    },
    #[error("duplicate {edge_type} edge {a} - {b}")]
    DuplicateEdge {
        a: NodeId,
        b: NodeId,
        edge_type: EdgeType,
    },
    #[error("node {id} is a {found}; only users and objects are allowed here")]
    WrongNodeType { id: NodeId, found: NodeType },
    #[error("{edge_type} edge {a} - {b} is not a rating edge")]
    UnexpectedEdge {
        a: NodeId,
        b: NodeId,
        edge_type: EdgeType,
    },
    #[error("invalid rating scale {min}..{max}: the minimum must be below the maximum")]
    InvalidScale { min: i64, max: i64 },
    #[error("rating {value} of user {user} for object {object} is outside the scale {min}..{max}")]
    OutOfScale {
        user: NodeId,
        object: NodeId,
        value: f64,
        min: i64,
        max: i64,
    },
    #[error("user {user} rated object {object} twice")]
    DuplicateRating { user: NodeId, object: NodeId },
    #[error("node {node} is a {found}, but the pattern expects a {expected}")]
    TypeMismatch {
        node: NodeId,
        expected: NodeType,
        found: NodeType,
    },
    #[error("invalid meta-path pattern `{pattern}`: {reason}")]
    InvalidPattern { pattern: String, reason: String },
    #[error("pattern `{0}` must start and end with U")]
    PatternNotUserToUser(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeType {
    User,
    Object,
    Preference,
    Group,
    Category,
}

impl NodeType {
    pub const ALL: [NodeType; 5] = [
        NodeType::User,
        NodeType::Object,
        NodeType::Preference,
        NodeType::Group,
        NodeType::Category,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NodeType::User => "user",
            NodeType::Object => "object",
            NodeType::Preference => "preference",
            NodeType::Group => "group",
            NodeType::Category => "category",
        }
    }

    /// Single-letter code used in meta-path patterns.
    pub fn letter(self) -> char {
        match self {
            NodeType::User => 'U',
            NodeType::Object => 'O',
            NodeType::Preference => 'P',
            NodeType::Group => 'G',
            NodeType::Category => 'K',
        }
    }
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NodeType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeType::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown node type `{s}`"))
    }
}

/// Edge families. Each joins a fixed ordered pair of node types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeType {
    /// User rates object; weight is the rating.
    Rating,
    /// Preference to object; weight +1 for the preferred object, -1 otherwise.
    PreferenceObject,
    /// User to preference; weight is the user's rating difference.
    UserPreference,
    /// Unweighted user membership in a group.
    GroupMembership,
    /// Unweighted object membership in a category.
    CategoryMembership,
    /// Unweighted user-user link.
    UserLink,
    /// Unweighted object-object link.
    ObjectLink,
}

impl EdgeType {
    pub const ALL: [EdgeType; 7] = [
        EdgeType::Rating,
        EdgeType::PreferenceObject,
        EdgeType::UserPreference,
        EdgeType::GroupMembership,
        EdgeType::CategoryMembership,
        EdgeType::UserLink,
        EdgeType::ObjectLink,
    ];

    pub fn signature(self) -> (NodeType, NodeType) {
        use NodeType::*;
        match self {
            EdgeType::Rating => (User, Object),
            EdgeType::PreferenceObject => (Preference, Object),
            EdgeType::UserPreference => (User, Preference),
            EdgeType::GroupMembership => (User, Group),
            EdgeType::CategoryMembership => (Object, Category),
            EdgeType::UserLink => (User, User),
            EdgeType::ObjectLink => (Object, Object),
        }
    }

    /// Edge family joining the two node types, in either order.
    pub fn between(a: NodeType, b: NodeType) -> Option<EdgeType> {
        EdgeType::ALL.into_iter().find(|t| {
            let (x, y) = t.signature();
            (x, y) == (a, b) || (y, x) == (a, b)
        })
    }

    pub fn is_weighted(self) -> bool {
        matches!(
            self,
            EdgeType::Rating | EdgeType::PreferenceObject | EdgeType::UserPreference
        )
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.signature();
        write!(f, "{}{}", a.letter(), b.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HetEdge {
    /// Endpoint of the signature's first type.
    pub a: NodeId,
    /// Endpoint of the signature's second type.
    pub b: NodeId,
    pub edge_type: EdgeType,
    pub weight: Option<f64>,
}

/// Typed-node, typed-edge graph. Edges are stored in signature orientation
/// and traversed without regard to direction.
#[derive(Debug, Clone, Default)]
pub struct HetGraph {
    nodes: BTreeMap<NodeId, NodeType>,
    edges: Vec<HetEdge>,
    keys: BTreeSet<(NodeId, NodeId, EdgeType)>,
    adjacency: BTreeMap<NodeId, Vec<(NodeId, usize)>>,
}

impl HetGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a node. Redeclaring with the same type is a no-op.
    pub fn add_node(&mut self, id: NodeId, node_type: NodeType) -> Result<(), HetError> {
        match self.nodes.get(&id) {
            Some(&existing) if existing != node_type => Err(HetError::NodeTypeConflict {
                id,
                existing,
                requested: node_type,
            }),
            Some(_) => Ok(()),
            None => {
                self.nodes.insert(id, node_type);
                Ok(())
            }
        }
    }

    /// Adds an edge; the family is inferred from the endpoint types.
    pub fn connect(
        &mut self,
        x: NodeId,
        y: NodeId,
        weight: Option<f64>,
    ) -> Result<EdgeType, HetError> {
        let xt = self.require(x)?;
        let yt = self.require(y)?;
        let edge_type = EdgeType::between(xt, yt).ok_or(HetError::EdgeTypeMismatch {
            a: x,
            a_type: xt,
            b: y,
            b_type: yt,
        })?;
        self.add_edge(x, y, edge_type, weight)?;
        Ok(edge_type)
    }

    pub fn add_edge(
        &mut self,
        x: NodeId,
        y: NodeId,
        edge_type: EdgeType,
        weight: Option<f64>,
    ) -> Result<(), HetError> {
        let xt = self.require(x)?;
        let yt = self.require(y)?;
        let (first, second) = edge_type.signature();
        let (a, b) = if (xt, yt) == (first, second) {
            (x, y)
        } else if (yt, xt) == (first, second) {
            (y, x)
        } else {
            return Err(HetError::EdgeTypeMismatch {
                a: x,
                a_type: xt,
                b: y,
                b_type: yt,
            });
        };
        if a == b {
            return Err(HetError::InvalidWeight {
                a,
                b,
                reason: "self-loops are not allowed".into(),
            });
        }
        check_weight(a, b, edge_type, weight)?;
        let key = (a.min(b), a.max(b), edge_type);
        if !self.keys.insert(key) {
            return Err(HetError::DuplicateEdge { a, b, edge_type });
        }
        let idx = self.edges.len();
        self.edges.push(HetEdge {
            a,
            b,
            edge_type,
            weight,
        });
        self.adjacency.entry(a).or_default().push((b, idx));
        self.adjacency.entry(b).or_default().push((a, idx));
        Ok(())
    }

    pub fn node_type(&self, id: NodeId) -> Option<NodeType> {
        self.nodes.get(&id).copied()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    /// `(id, type)` in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, NodeType)> + '_ {
        self.nodes.iter().map(|(&id, &t)| (id, t))
    }

    pub fn nodes_of_type(&self, t: NodeType) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes()
            .filter(move |&(_, nt)| nt == t)
            .map(|(id, _)| id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[HetEdge] {
        &self.edges
    }

    pub fn edges_of_type(&self, t: EdgeType) -> impl Iterator<Item = &HetEdge> + '_ {
        self.edges.iter().filter(move |e| e.edge_type == t)
    }

    pub fn edge(&self, idx: usize) -> &HetEdge {
        &self.edges[idx]
    }

    /// `(neighbor, edge index)` pairs of `id`, in edge insertion order.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, usize)] {
        self.adjacency.get(&id).map_or(&[], Vec::as_slice)
    }

    /// Largest node id in use.
    pub fn max_id(&self) -> Option<NodeId> {
        self.nodes.keys().next_back().copied()
    }

    fn require(&self, id: NodeId) -> Result<NodeType, HetError> {
        self.node_type(id).ok_or(HetError::UnknownNode(id))
    }
}

fn check_weight(a: NodeId, b: NodeId, t: EdgeType, weight: Option<f64>) -> Result<(), HetError> {
    let fail = |reason: &str| {
        Err(HetError::InvalidWeight {
            a,
            b,
            reason: reason.to_owned(),
        })
    };
    match (t.is_weighted(), weight) {
        (true, None) => fail("weighted edge family needs a weight"),
        (false, Some(_)) => fail("membership and link edges are unweighted"),
        (_, Some(w)) if !w.is_finite() => fail("weight must be finite"),
        (_, Some(w)) if t == EdgeType::PreferenceObject && w != 1.0 && w != -1.0 => {
            fail("preference-object weight must be +1 or -1")
        }
        _ => Ok(()),
    }
}
