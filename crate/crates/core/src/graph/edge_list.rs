use super::{check_arcs, Arc, Digraph, GraphError, NodeId, NodeSet, RepresentationKind};

/// List of arcs, kept sorted by `(src, dst)`.
#[derive(Debug, Clone)]
pub struct EdgeList {
    nodes: NodeSet,
    arcs: Vec<Arc>,
}

impl EdgeList {
    /// The node set is every arc endpoint plus the `isolated` ids.
    pub fn new(
        isolated: impl IntoIterator<Item = NodeId>,
        arcs: Vec<Arc>,
    ) -> Result<Self, GraphError> {
        let arcs = check_arcs(arcs)?;
        let nodes = NodeSet::new(
            isolated
                .into_iter()
                .chain(arcs.iter().flat_map(|a| [a.src, a.dst])),
        );
        Ok(EdgeList { nodes, arcs })
    }

    pub(crate) fn from_checked(nodes: NodeSet, arcs: Vec<Arc>) -> Self {
        EdgeList { nodes, arcs }
    }

    pub fn arc_list(&self) -> &[Arc] {
        &self.arcs
    }
}

impl Digraph for EdgeList {
    fn kind(&self) -> RepresentationKind {
        RepresentationKind::EdgeList
    }

    fn nodes(&self) -> &[NodeId] {
        self.nodes.ids()
    }

    fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    fn arcs(&self) -> Vec<Arc> {
        self.arcs.clone()
    }

    fn out_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        self.nodes.require(v)?;
        // arcs are sorted by source, so dsts come out ascending
        Ok(self
            .arcs
            .iter()
            .filter(|a| a.src == v)
            .map(|a| a.dst)
            .collect())
    }

    fn in_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        self.nodes.require(v)?;
        Ok(self
            .arcs
            .iter()
            .filter(|a| a.dst == v)
            .map(|a| a.src)
            .collect())
    }
}
