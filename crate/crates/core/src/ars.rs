//! Session-based recommendation for a single query object.
//!
//! Around the query object `m` the session graph is expanded in two hops:
//! first the kernels linking to `m`, then every object those kernels link to.
//! Objects of the expansion are ranked by their in-degree inside it, so an
//! object sharing many sessions with `m` ranks first. `m` itself is dropped
//! from the result.

use std::collections::{BTreeMap, BTreeSet};
use std::num::NonZeroUsize;

use crate::graph::{Digraph, NodeId};
use crate::session::{ClassId, SessionError, SessionGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArsQuery {
    pub object: NodeId,
    /// Only kernels of this class take part in the expansion.
    pub class_filter: Option<ClassId>,
    pub top_n: Option<NonZeroUsize>,
}

impl ArsQuery {
    pub fn new(object: NodeId) -> Self {
        ArsQuery {
            object,
            class_filter: None,
            top_n: None,
        }
    }

    pub fn with_class(mut self, class: impl Into<ClassId>) -> Self {
        self.class_filter = Some(class.into());
        self
    }

    pub fn with_top_n(mut self, n: NonZeroUsize) -> Self {
        self.top_n = Some(n);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recommendation {
    pub object: NodeId,
    pub score: u64,
}

/// Ranked recommendations: scores non-increasing, ties by ascending id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecommendationVector(Vec<Recommendation>);

impl RecommendationVector {
    /// Sorts by descending score, then ascending object id, and truncates.
    pub fn ranked(
        scores: impl IntoIterator<Item = (NodeId, u64)>,
        top_n: Option<NonZeroUsize>,
    ) -> Self {
        let mut items: Vec<Recommendation> = scores
            .into_iter()
            .map(|(object, score)| Recommendation { object, score })
            .collect();
        items.sort_by(|a, b| b.score.cmp(&a.score).then(a.object.cmp(&b.object)));
        if let Some(n) = top_n {
            items.truncate(n.get());
        }
        RecommendationVector(items)
    }

    pub fn items(&self) -> &[Recommendation] {
        &self.0
    }

    pub fn objects(&self) -> Vec<NodeId> {
        self.0.iter().map(|r| r.object).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Recommendation> {
        self.0.iter()
    }
}

impl<'a> IntoIterator for &'a RecommendationVector {
    type Item = &'a Recommendation;
    type IntoIter = std::slice::Iter<'a, Recommendation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Node and arc sets of a session subgraph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SessionFragment {
    pub kernels: BTreeSet<NodeId>,
    pub objects: BTreeSet<NodeId>,
    pub arcs: BTreeSet<(NodeId, NodeId)>,
}

/// The one-hop neighborhood of `m` and its two-hop expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArsSubgraphs {
    pub neighborhood: SessionFragment,
    pub expansion: SessionFragment,
}

pub fn ars_subgraphs(
    g: &SessionGraph,
    m: NodeId,
    class_filter: Option<&ClassId>,
) -> Result<ArsSubgraphs, SessionError> {
    if !g.is_object(m) {
        return Err(SessionError::UnknownObject(m));
    }
    let allowed = match class_filter {
        Some(id) => {
            let classes = g
                .classes()
                .ok_or_else(|| SessionError::UnknownClass(id.clone()))?;
            Some(&classes.class(id)?.kernels)
        }
        None => None,
    };
    let participates = |k: &NodeId| g.is_kernel(*k) && allowed.is_none_or(|a| a.contains(k));

    let graph = g.graph();
    let kernels: BTreeSet<NodeId> = graph
        .in_neighbors(m)?
        .into_iter()
        .filter(participates)
        .collect();
    let neighborhood = SessionFragment {
        kernels: kernels.clone(),
        objects: BTreeSet::from([m]),
        arcs: kernels.iter().map(|&k| (k, m)).collect(),
    };

    let mut expansion = neighborhood.clone();
    for &k in &kernels {
        for o in graph.out_neighbors(k)? {
            if g.is_object(o) {
                expansion.objects.insert(o);
                expansion.arcs.insert((k, o));
            }
        }
    }
    Ok(ArsSubgraphs {
        neighborhood,
        expansion,
    })
}

/// Objects of the two-hop expansion around `q.object`, ranked by in-degree
/// within the expansion.
pub fn ars_recommend(g: &SessionGraph, q: &ArsQuery) -> Result<RecommendationVector, SessionError> {
    let ArsSubgraphs { expansion, .. } = ars_subgraphs(g, q.object, q.class_filter.as_ref())?;
    let mut in_degree: BTreeMap<NodeId, u64> = BTreeMap::new();
    for &(_, o) in &expansion.arcs {
        *in_degree.entry(o).or_default() += 1;
    }
    in_degree.remove(&q.object);
    Ok(RecommendationVector::ranked(in_degree, q.top_n))
}
