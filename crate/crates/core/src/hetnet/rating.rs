use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeType, HetError, HetGraph, NodeType};
use crate::graph::NodeId;

/// Inclusive integer rating scale `min..=max`; binary feedback is `0..=1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatingScale {
    min: i64,
    max: i64,
}

impl RatingScale {
    pub fn new(min: i64, max: i64) -> Result<Self, HetError> {
        if min >= max {
            return Err(HetError::InvalidScale { min, max });
        }
        Ok(RatingScale { min, max })
    }

    pub fn binary() -> Self {
        RatingScale { min: 0, max: 1 }
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }

    /// `max - min`, the largest possible rating difference.
    pub fn span(&self) -> i64 {
        self.max - self.min
    }

    pub fn contains(&self, r: i64) -> bool {
        (self.min..=self.max).contains(&r)
    }
}

/// Sparse user x object ratings, at most one per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    scale: RatingScale,
    users: BTreeSet<NodeId>,
    objects: BTreeSet<NodeId>,
    entries: BTreeMap<(NodeId, NodeId), i64>,
}

impl RatingMatrix {
    pub fn new(scale: RatingScale) -> Self {
        RatingMatrix {
            scale,
            users: BTreeSet::new(),
            objects: BTreeSet::new(),
            entries: BTreeMap::new(),
        }
    }

    pub fn add_user(&mut self, user: NodeId) -> Result<(), HetError> {
        if self.objects.contains(&user) {
            return Err(HetError::NodeTypeConflict {
                id: user,
                existing: NodeType::Object,
                requested: NodeType::User,
            });
        }
        self.users.insert(user);
        Ok(())
    }

    pub fn add_object(&mut self, object: NodeId) -> Result<(), HetError> {
        if self.users.contains(&object) {
            return Err(HetError::NodeTypeConflict {
                id: object,
                existing: NodeType::User,
                requested: NodeType::Object,
            });
        }
        self.objects.insert(object);
        Ok(())
    }

    pub fn insert(&mut self, user: NodeId, object: NodeId, rating: i64) -> Result<(), HetError> {
        if !self.scale.contains(rating) {
            return Err(self.out_of_scale(user, object, rating as f64));
        }
        if self.entries.contains_key(&(user, object)) {
            return Err(HetError::DuplicateRating { user, object });
        }
        self.add_user(user)?;
        self.add_object(object)?;
        self.entries.insert((user, object), rating);
        Ok(())
    }

    fn out_of_scale(&self, user: NodeId, object: NodeId, value: f64) -> HetError {
        HetError::OutOfScale {
            user,
            object,
            value,
            min: self.scale.min,
            max: self.scale.max,
        }
    }

    pub fn scale(&self) -> RatingScale {
        self.scale
    }

    pub fn users(&self) -> &BTreeSet<NodeId> {
        &self.users
    }

    pub fn objects(&self) -> &BTreeSet<NodeId> {
        &self.objects
    }

    pub fn get(&self, user: NodeId, object: NodeId) -> Option<i64> {
        self.entries.get(&(user, object)).copied()
    }

    /// `((user, object), rating)` in ascending `(user, object)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((NodeId, NodeId), i64)> + '_ {
        self.entries.iter().map(|(&k, &r)| (k, r))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(object, rating)` of one user, ascending by object.
    pub fn ratings_of(&self, user: NodeId) -> impl Iterator<Item = (NodeId, i64)> + '_ {
        self.entries
            .range((user, NodeId(0))..=(user, NodeId(u64::MAX)))
            .map(|(&(_, o), &r)| (o, r))
    }
}

/// Reads ratings off a weighted user-object graph.
pub fn rating_matrix_from_bipartite(
    g: &HetGraph,
    scale: RatingScale,
) -> Result<RatingMatrix, HetError> {
    let mut rm = RatingMatrix::new(scale);
    for (id, t) in g.nodes() {
        match t {
            NodeType::User => rm.add_user(id)?,
            NodeType::Object => rm.add_object(id)?,
            found => return Err(HetError::WrongNodeType { id, found }),
        }
    }
    for e in g.edges() {
        if e.edge_type != EdgeType::Rating {
            return Err(HetError::UnexpectedEdge {
                a: e.a,
                b: e.b,
                edge_type: e.edge_type,
            });
        }
        let w = e.weight.expect("rating edges carry a weight");
        if w.fract() != 0.0 || !scale.contains(w as i64) {
            return Err(rm.out_of_scale(e.a, e.b, w));
        }
        rm.insert(e.a, e.b, w as i64)?;
    }
    Ok(rm)
}
