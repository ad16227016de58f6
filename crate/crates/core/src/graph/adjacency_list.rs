use std::collections::BTreeSet;

use super::{check_arcs, Arc, Digraph, GraphError, NodeId, NodeSet, RepresentationKind};

/// `(node, [(successor, weight)])` entries.
pub type SuccessorLists = Vec<(NodeId, Vec<(NodeId, Option<f64>)>)>;

/// Per-node successor lists (with weights) and predecessor lists, indexed by
/// dense node index. Both lists are kept ascending.
#[derive(Debug, Clone)]
pub struct AdjacencyList {
    nodes: NodeSet,
    out: Vec<Vec<(usize, Option<f64>)>>,
    inn: Vec<Vec<usize>>,
    arc_count: usize,
}

impl AdjacencyList {
    /// Builds from `(node, successors)` entries. Every successor must itself
    /// have an entry; each node may appear only once.
    pub fn from_lists(lists: SuccessorLists) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for (v, _) in &lists {
            if !seen.insert(*v) {
                return Err(GraphError::Malformed {
                    kind: RepresentationKind::AdjacencyList,
                    reason: format!("node {v} has more than one list"),
                });
            }
        }
        let mut arcs = Vec::new();
        for (v, succ) in &lists {
            for &(w, weight) in succ {
                if !seen.contains(&w) {
                    return Err(GraphError::Malformed {
                        kind: RepresentationKind::AdjacencyList,
                        reason: format!("successor {w} of node {v} has no list of its own"),
                    });
                }
                arcs.push(Arc {
                    src: *v,
                    dst: w,
                    weight,
                });
            }
        }
        let arcs = check_arcs(arcs)?;
        Ok(Self::from_checked(NodeSet::new(seen), &arcs))
    }

    pub(crate) fn from_checked(nodes: NodeSet, arcs: &[Arc]) -> Self {
        let n = nodes.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        // arcs arrive sorted by (src, dst): out lists are ascending; in lists
        // are filled in ascending src order
        for a in arcs {
            let s = nodes.index_of(a.src).expect("arc source in node set");
            let d = nodes.index_of(a.dst).expect("arc target in node set");
            out[s].push((d, a.weight));
            inn[d].push(s);
        }
        AdjacencyList {
            nodes,
            out,
            inn,
            arc_count: arcs.len(),
        }
    }

    /// `(node, successors)` in node order.
    pub fn lists(&self) -> SuccessorLists {
        self.out
            .iter()
            .enumerate()
            .map(|(i, succ)| {
                (
                    self.nodes.id_at(i),
                    succ.iter()
                        .map(|&(j, w)| (self.nodes.id_at(j), w))
                        .collect(),
                )
            })
            .collect()
    }
}

impl Digraph for AdjacencyList {
    fn kind(&self) -> RepresentationKind {
        RepresentationKind::AdjacencyList
    }

    fn nodes(&self) -> &[NodeId] {
        self.nodes.ids()
    }

    fn arc_count(&self) -> usize {
        self.arc_count
    }

    fn arcs(&self) -> Vec<Arc> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, succ)| {
                succ.iter().map(move |&(j, weight)| Arc {
                    src: self.nodes.id_at(i),
                    dst: self.nodes.id_at(j),
                    weight,
                })
            })
            .collect()
    }

    fn out_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.nodes.require(v)?;
        Ok(self.out[i]
            .iter()
            .map(|&(j, _)| self.nodes.id_at(j))
            .collect())
    }

    fn in_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.nodes.require(v)?;
        Ok(self.inn[i].iter().map(|&j| self.nodes.id_at(j)).collect())
    }
}
