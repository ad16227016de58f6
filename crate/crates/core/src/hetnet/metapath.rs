//! Meta-paths: node-type sequences such as `UOU` ("users interested in the
//! same object") or `UOKOU` ("users interested in objects of the same
//! category"), matched as typed walks.
//!
//! A walk follows edges regardless of their stored direction and may not
//! leave a node over the edge it just arrived by.

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use super::{EdgeType, HetError, HetGraph, NodeType};
use crate::ars::RecommendationVector;
use crate::graph::NodeId;

/// Sequence of at least two node types drawn from `U`, `O`, `G`, `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaPathPattern(Vec<NodeType>);

impl MetaPathPattern {
    pub fn types(&self) -> &[NodeType] {
        &self.0
    }

    pub fn first(&self) -> NodeType {
        self.0[0]
    }

    pub fn last(&self) -> NodeType {
        self.0[self.0.len() - 1]
    }

    /// Patterns that return to the start type; the start node is left out of
    /// their results.
    pub fn returns_to_start_type(&self) -> bool {
        self.first() == self.last()
    }
}

impl FromStr for MetaPathPattern {
    type Err = HetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = |reason: String| HetError::InvalidPattern {
            pattern: s.to_owned(),
            reason,
        };
        let types = s
            .chars()
            .map(|c| match c {
                'U' => Ok(NodeType::User),
                'O' => Ok(NodeType::Object),
                'G' => Ok(NodeType::Group),
                'K' => Ok(NodeType::Category),
                other => Err(invalid(format!(
                    "letter `{other}` is not one of U, O, G, K"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if types.len() < 2 {
            return Err(invalid("a pattern needs at least two letters".into()));
        }
        Ok(MetaPathPattern(types))
    }
}

impl fmt::Display for MetaPathPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|t| write!(f, "{}", t.letter()))
    }
}

/// Number of non-backtracking typed walks from `start` to every end node.
pub fn match_metapath(
    g: &HetGraph,
    pattern: &MetaPathPattern,
    start: NodeId,
) -> Result<BTreeMap<NodeId, u64>, HetError> {
    let found = g.node_type(start).ok_or(HetError::UnknownNode(start))?;
    if found != pattern.first() {
        return Err(HetError::TypeMismatch {
            node: start,
            expected: pattern.first(),
            found,
        });
    }

    // (node, edge arrived by) -> walk count
    let mut frontier: BTreeMap<(NodeId, Option<usize>), u64> = BTreeMap::from([((start, None), 1)]);
    for &next_type in &pattern.types()[1..] {
        let mut next: BTreeMap<(NodeId, Option<usize>), u64> = BTreeMap::new();
        for (&(v, via), &count) in &frontier {
            for &(w, e) in g.neighbors(v) {
                if via == Some(e) || g.node_type(w) != Some(next_type) {
                    continue;
                }
                let slot = next.entry((w, Some(e))).or_default();
                *slot = slot.saturating_add(count);
            }
        }
        frontier = next;
    }

    let mut ends: BTreeMap<NodeId, u64> = BTreeMap::new();
    for ((v, _), count) in frontier {
        let slot = ends.entry(v).or_default();
        *slot = slot.saturating_add(count);
    }
    if pattern.returns_to_start_type() {
        ends.remove(&start);
    }
    Ok(ends)
}

/// Objects not yet rated by `user`, scored by the walk counts of the users
/// who rated them: `score(o) = sum_v count(v) * [v rated o]`.
pub fn recommend_via_metapath(
    g: &HetGraph,
    user: NodeId,
    pattern: &MetaPathPattern,
    top_n: Option<NonZeroUsize>,
) -> Result<RecommendationVector, HetError> {
    if pattern.first() != NodeType::User || pattern.last() != NodeType::User {
        return Err(HetError::PatternNotUserToUser(pattern.to_string()));
    }
    let ends = match_metapath(g, pattern, user)?;
    let rated_by = |u: NodeId| {
        g.neighbors(u)
            .iter()
            .filter(|&&(_, e)| g.edge(e).edge_type == EdgeType::Rating)
            .map(|&(o, _)| o)
    };
    let own: Vec<NodeId> = rated_by(user).collect();
    let mut scores: BTreeMap<NodeId, u64> = BTreeMap::new();
    for (v, count) in ends {
        for o in rated_by(v).filter(|o| !own.contains(o)) {
            let slot = scores.entry(o).or_default();
            *slot = slot.saturating_add(count);
        }
    }
    Ok(RecommendationVector::ranked(scores, top_n))
}
