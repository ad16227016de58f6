use std::collections::BTreeMap;

use super::{check_arcs, Arc, Digraph, GraphError, NodeId, NodeSet, RepresentationKind};

/// Dense `n x n` 0/1 matrix; rows are sources, columns destinations.
/// Arc weights live in a side table keyed by `(row, column)`.
#[derive(Debug, Clone)]
pub struct AdjacencyMatrix {
    nodes: NodeSet,
    cells: Vec<u8>,
    weights: BTreeMap<(usize, usize), f64>,
    arc_count: usize,
}

impl AdjacencyMatrix {
    /// Builds from explicit rows. `nodes` gives the row/column order and must
    /// be strictly ascending.
    pub fn from_rows(
        nodes: Vec<NodeId>,
        rows: &[Vec<u8>],
        weights: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    ) -> Result<Self, GraphError> {
        let malformed = |reason: String| GraphError::Malformed {
            kind: RepresentationKind::AdjacencyMatrix,
            reason,
        };
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(malformed("node ids must be strictly ascending".into()));
        }
        let n = nodes.len();
        if rows.len() != n {
            return Err(malformed(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        let mut arcs = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(malformed(format!(
                    "row {} has {} cells, expected {n}",
                    nodes[i],
                    row.len()
                )));
            }
            for (j, &cell) in row.iter().enumerate() {
                match cell {
                    0 => {}
                    1 => arcs.push(Arc::new(nodes[i], nodes[j])),
                    other => {
                        return Err(malformed(format!("cell value {other} is not 0 or 1")));
                    }
                }
            }
        }
        attach_weights(&mut arcs, weights, RepresentationKind::AdjacencyMatrix)?;
        let arcs = check_arcs(arcs)?;
        Ok(Self::from_checked(NodeSet::new(nodes), &arcs))
    }

    pub(crate) fn from_checked(nodes: NodeSet, arcs: &[Arc]) -> Self {
        let n = nodes.len();
        let mut cells = vec![0u8; n * n];
        let mut weights = BTreeMap::new();
        for a in arcs {
            let i = nodes.index_of(a.src).expect("arc source in node set");
            let j = nodes.index_of(a.dst).expect("arc target in node set");
            cells[i * n + j] = 1;
            if let Some(w) = a.weight {
                weights.insert((i, j), w);
            }
        }
        AdjacencyMatrix {
            nodes,
            cells,
            weights,
            arc_count: arcs.len(),
        }
    }

    /// 1 iff the arc `src -> dst` exists.
    pub fn entry(&self, src: NodeId, dst: NodeId) -> Result<u8, GraphError> {
        let i = self.nodes.require(src)?;
        let j = self.nodes.require(dst)?;
        Ok(self.cells[i * self.nodes.len() + j])
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        let n = self.nodes.len();
        if n == 0 {
            return Vec::new();
        }
        self.cells.chunks(n).map(<[u8]>::to_vec).collect()
    }
}

pub(super) fn attach_weights(
    arcs: &mut [Arc],
    weights: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    kind: RepresentationKind,
) -> Result<(), GraphError> {
    for (src, dst, w) in weights {
        let arc = arcs
            .iter_mut()
            .find(|a| a.src == src && a.dst == dst)
            .ok_or_else(|| GraphError::Malformed {
                kind,
                reason: format!("weight given for missing arc {src} -> {dst}"),
            })?;
        arc.weight = Some(w);
    }
    Ok(())
}

impl Digraph for AdjacencyMatrix {
    fn kind(&self) -> RepresentationKind {
        RepresentationKind::AdjacencyMatrix
    }

    fn nodes(&self) -> &[NodeId] {
        self.nodes.ids()
    }

    fn arc_count(&self) -> usize {
        self.arc_count
    }

    fn arcs(&self) -> Vec<Arc> {
        let n = self.nodes.len();
        let mut arcs = Vec::with_capacity(self.arc_count);
        for i in 0..n {
            for j in 0..n {
                if self.cells[i * n + j] == 1 {
                    arcs.push(Arc {
                        src: self.nodes.id_at(i),
                        dst: self.nodes.id_at(j),
                        weight: self.weights.get(&(i, j)).copied(),
                    });
                }
            }
        }
        arcs
    }

    fn out_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.nodes.require(v)?;
        let n = self.nodes.len();
        Ok((0..n)
            .filter(|&j| self.cells[i * n + j] == 1)
            .map(|j| self.nodes.id_at(j))
            .collect())
    }

    fn in_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let j = self.nodes.require(v)?;
        let n = self.nodes.len();
        Ok((0..n)
            .filter(|&i| self.cells[i * n + j] == 1)
            .map(|i| self.nodes.id_at(i))
            .collect())
    }
}
