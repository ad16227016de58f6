use super::{check_arcs, Arc, Digraph, GraphError, NodeId, NodeSet, RepresentationKind};

/// Numbered arc table plus, for every node, the ascending numbers of the
/// arcs incident to it (both leaving and entering).
#[derive(Debug, Clone)]
pub struct IncidenceList {
    nodes: NodeSet,
    /// `(src index, dst index, weight)` by arc number.
    arcs: Vec<(usize, usize, Option<f64>)>,
    incident: Vec<Vec<usize>>,
}

impl IncidenceList {
    /// Builds from a numbered arc table and per-node incidence lists. The
    /// lists must agree with the table exactly.
    pub fn from_parts(
        nodes: Vec<NodeId>,
        arcs: Vec<Arc>,
        incident: Vec<(NodeId, Vec<usize>)>,
    ) -> Result<Self, GraphError> {
        let malformed = |reason: String| GraphError::Malformed {
            kind: RepresentationKind::IncidenceList,
            reason,
        };
        let node_set = NodeSet::new(nodes.iter().copied());
        if node_set.len() != nodes.len() {
            return Err(malformed("node listed twice".into()));
        }
        for a in &arcs {
            for end in [a.src, a.dst] {
                if node_set.index_of(end).is_none() {
                    return Err(malformed(format!(
                        "arc endpoint {end} is not a listed node"
                    )));
                }
            }
        }
        let expected = Self::from_checked(node_set.clone(), &check_arcs(arcs.clone())?);
        let renumbered = Self::numbered(node_set, &arcs);
        let mut given = vec![None; renumbered.nodes.len()];
        for (v, mut list) in incident {
            let i = renumbered
                .nodes
                .index_of(v)
                .ok_or_else(|| malformed(format!("incidence list for unknown node {v}")))?;
            list.sort_unstable();
            if given[i].replace(list).is_some() {
                return Err(malformed(format!(
                    "node {v} has more than one incidence list"
                )));
            }
        }
        for (i, list) in given.into_iter().enumerate() {
            let list = list.unwrap_or_default();
            if list != renumbered.incident[i] {
                return Err(malformed(format!(
                    "incidence list of node {} disagrees with the arc table",
                    renumbered.nodes.id_at(i)
                )));
            }
        }
        Ok(expected)
    }

    pub(crate) fn from_checked(nodes: NodeSet, arcs: &[Arc]) -> Self {
        Self::numbered(nodes, arcs)
    }

    fn numbered(nodes: NodeSet, arcs: &[Arc]) -> Self {
        let mut incident = vec![Vec::new(); nodes.len()];
        let mut table = Vec::with_capacity(arcs.len());
        for (k, a) in arcs.iter().enumerate() {
            let s = nodes.index_of(a.src).expect("arc source in node set");
            let d = nodes.index_of(a.dst).expect("arc target in node set");
            incident[s].push(k);
            incident[d].push(k);
            table.push((s, d, a.weight));
        }
        IncidenceList {
            nodes,
            arcs: table,
            incident,
        }
    }

    /// Arc table in arc-number order.
    pub fn arc_table(&self) -> Vec<Arc> {
        self.arcs
            .iter()
            .map(|&(s, d, weight)| Arc {
                src: self.nodes.id_at(s),
                dst: self.nodes.id_at(d),
                weight,
            })
            .collect()
    }

    /// `(node, incident arc numbers)` in node order.
    pub fn incidence(&self) -> Vec<(NodeId, Vec<usize>)> {
        self.incident
            .iter()
            .enumerate()
            .map(|(i, l)| (self.nodes.id_at(i), l.clone()))
            .collect()
    }
}

impl Digraph for IncidenceList {
    fn kind(&self) -> RepresentationKind {
        RepresentationKind::IncidenceList
    }

    fn nodes(&self) -> &[NodeId] {
        self.nodes.ids()
    }

    fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    fn arcs(&self) -> Vec<Arc> {
        let mut arcs = self.arc_table();
        arcs.sort_by_key(Arc::endpoints);
        arcs
    }

    fn out_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.nodes.require(v)?;
        let mut out: Vec<NodeId> = self.incident[i]
            .iter()
            .map(|&k| self.arcs[k])
            .filter(|&(s, _, _)| s == i)
            .map(|(_, d, _)| self.nodes.id_at(d))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    fn in_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.nodes.require(v)?;
        let mut inn: Vec<NodeId> = self.incident[i]
            .iter()
            .map(|&k| self.arcs[k])
            .filter(|&(_, d, _)| d == i)
            .map(|(s, _, _)| self.nodes.id_at(s))
            .collect();
        inn.sort_unstable();
        Ok(inn)
    }
}
