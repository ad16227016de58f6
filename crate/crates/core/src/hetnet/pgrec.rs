//! Tripartite preference graphs.
//!
//! Nodes are users, objects and one preference node per unordered object pair
//! `{i, j}` (with `i < j`) on which at least one user expressed a preference,
//! i.e. rated the two objects differently. Edge families:
//!
//! * user-object: the rating `r_uo`;
//! * preference-object: `+1` towards `i`, `-1` towards `j`;
//! * user-preference: `r_ui - r_uj` for every user rating `i` and `j`
//!   differently, so positive weights mean `u` prefers `i` over `j`.

use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeType, HetError, HetGraph, NodeType, RatingMatrix, RatingScale};
use crate::graph::NodeId;

#[derive(Debug, Clone)]
pub struct PGRecGraph {
    graph: HetGraph,
    scale: RatingScale,
    preferences: BTreeMap<NodeId, (NodeId, NodeId)>,
}

impl PGRecGraph {
    pub fn graph(&self) -> &HetGraph {
        &self.graph
    }

    pub fn into_graph(self) -> HetGraph {
        self.graph
    }

    pub fn scale(&self) -> RatingScale {
        self.scale
    }

    /// Preference node id -> object pair `(i, j)` with `i < j`.
    pub fn preferences(&self) -> &BTreeMap<NodeId, (NodeId, NodeId)> {
        &self.preferences
    }

    pub fn preference_node(&self, i: NodeId, j: NodeId) -> Option<NodeId> {
        let pair = (i.min(j), i.max(j));
        self.preferences
            .iter()
            .find(|(_, &p)| p == pair)
            .map(|(&id, _)| id)
    }
}

impl AsRef<HetGraph> for PGRecGraph {
    fn as_ref(&self) -> &HetGraph {
        &self.graph
    }
}

/// Builds the preference graph of a rating matrix. Preference nodes get ids
/// above every user and object id, numbered in ascending pair order.
pub fn build_pgrec(rm: &RatingMatrix) -> PGRecGraph {
    let mut graph = HetGraph::new();
    for &u in rm.users() {
        graph
            .add_node(u, NodeType::User)
            .expect("users and objects are disjoint");
    }
    for &o in rm.objects() {
        graph
            .add_node(o, NodeType::Object)
            .expect("users and objects are disjoint");
    }
    for ((u, o), r) in rm.entries() {
        graph
            .add_edge(u, o, EdgeType::Rating, Some(r as f64))
            .expect("one rating per pair");
    }

    // pair -> [(user, r_ui - r_uj)]
    let mut differences: BTreeMap<(NodeId, NodeId), Vec<(NodeId, i64)>> = BTreeMap::new();
    for &u in rm.users() {
        let rated: Vec<(NodeId, i64)> = rm.ratings_of(u).collect();
        for (x, &(i, ri)) in rated.iter().enumerate() {
            for &(j, rj) in &rated[x + 1..] {
                if ri != rj {
                    differences.entry((i, j)).or_default().push((u, ri - rj));
                }
            }
        }
    }

    let first_id = graph.max_id().map_or(0, |m| m.get() + 1);
    let mut preferences = BTreeMap::new();
    for (p, ((i, j), users)) in (first_id..).map(NodeId).zip(differences) {
        graph.add_node(p, NodeType::Preference).expect("fresh id");
        graph
            .add_edge(p, i, EdgeType::PreferenceObject, Some(1.0))
            .expect("fresh preference node");
        graph
            .add_edge(p, j, EdgeType::PreferenceObject, Some(-1.0))
            .expect("fresh preference node");
        for (u, w) in users {
            graph
                .add_edge(u, p, EdgeType::UserPreference, Some(w as f64))
                .expect("one edge per user and pair");
        }
        preferences.insert(p, (i, j));
    }

    PGRecGraph {
        graph,
        scale: rm.scale(),
        preferences,
    }
}

/// Side information for [`extend_pgrec`].
#[derive(Debug, Clone, Default)]
pub struct PGRecExtension {
    /// User -> group node ids.
    pub groups: BTreeMap<NodeId, BTreeSet<NodeId>>,
    /// Object -> category node ids.
    pub categories: BTreeMap<NodeId, BTreeSet<NodeId>>,
    /// Unweighted user-user or object-object links.
    pub links: Vec<(NodeId, NodeId)>,
}

/// Adds group and category nodes with unweighted membership edges, plus
/// optional same-layer links. Existing nodes and edges are left untouched.
pub fn extend_pgrec(g: &HetGraph, ext: &PGRecExtension) -> Result<HetGraph, HetError> {
    fn expect(g: &HetGraph, id: NodeId, t: NodeType) -> Result<(), HetError> {
        match g.node_type(id) {
            Some(found) if found == t => Ok(()),
            _ if t == NodeType::User => Err(HetError::UnknownUser(id)),
            _ => Err(HetError::UnknownObject(id)),
        }
    }

    let mut out = g.clone();
    for (&user, groups) in &ext.groups {
        expect(&out, user, NodeType::User)?;
        for &grp in groups {
            out.add_node(grp, NodeType::Group)?;
            out.add_edge(user, grp, EdgeType::GroupMembership, None)?;
        }
    }
    for (&object, categories) in &ext.categories {
        expect(&out, object, NodeType::Object)?;
        for &cat in categories {
            out.add_node(cat, NodeType::Category)?;
            out.add_edge(object, cat, EdgeType::CategoryMembership, None)?;
        }
    }
    for &(x, y) in &ext.links {
        match out.node_type(x) {
            Some(NodeType::User) => {
                expect(&out, y, NodeType::User)?;
                out.add_edge(x, y, EdgeType::UserLink, None)?;
            }
            Some(NodeType::Object) => {
                expect(&out, y, NodeType::Object)?;
                out.add_edge(x, y, EdgeType::ObjectLink, None)?;
            }
            Some(found) => return Err(HetError::WrongNodeType { id: x, found }),
            None => return Err(HetError::UnknownNode(x)),
        }
    }
    Ok(out)
}
