use super::adjacency_matrix::attach_weights;
use super::{check_arcs, Arc, Digraph, GraphError, NodeId, NodeSet, RepresentationKind};

pub const SOURCE_MARK: i8 = -1;
pub const TARGET_MARK: i8 = 1;

/// Dense `n x e` matrix: one row per node, one column per arc. A column holds
/// `-1` in its source row, `+1` in its destination row and `0` elsewhere.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    nodes: NodeSet,
    /// Row-major, `nodes.len() * columns.len()` cells.
    cells: Vec<i8>,
    /// `(src row, dst row, weight)` per column.
    columns: Vec<(usize, usize, Option<f64>)>,
}

impl IncidenceMatrix {
    pub fn from_rows(
        nodes: Vec<NodeId>,
        rows: &[Vec<i8>],
        weights: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    ) -> Result<Self, GraphError> {
        let malformed = |reason: String| GraphError::Malformed {
            kind: RepresentationKind::IncidenceMatrix,
            reason,
        };
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(malformed("node ids must be strictly ascending".into()));
        }
        if rows.len() != nodes.len() {
            return Err(malformed(format!(
                "expected {} rows, found {}",
                nodes.len(),
                rows.len()
            )));
        }
        let e = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != e) {
            return Err(malformed(format!(
                "row {} has {} columns, expected {e}",
                nodes[bad],
                rows[bad].len()
            )));
        }
        let mut arcs = Vec::with_capacity(e);
        for col in 0..e {
            let mut src = None;
            let mut dst = None;
            for (i, row) in rows.iter().enumerate() {
                let slot = match row[col] {
                    0 => continue,
                    SOURCE_MARK => &mut src,
                    TARGET_MARK => &mut dst,
                    other => {
                        return Err(malformed(format!(
                            "column {col} holds {other}; only -1, 0, 1 are allowed"
                        )));
                    }
                };
                if slot.replace(nodes[i]).is_some() {
                    return Err(malformed(format!("column {col} has a repeated mark")));
                }
            }
            match (src, dst) {
                (Some(s), Some(d)) => arcs.push(Arc::new(s, d)),
                _ => {
                    return Err(malformed(format!(
                        "column {col} needs exactly one -1 and one +1"
                    )));
                }
            }
        }
        attach_weights(&mut arcs, weights, RepresentationKind::IncidenceMatrix)?;
        let arcs = check_arcs(arcs)?;
        Ok(Self::from_checked(NodeSet::new(nodes), &arcs))
    }

    pub(crate) fn from_checked(nodes: NodeSet, arcs: &[Arc]) -> Self {
        let n = nodes.len();
        let e = arcs.len();
        let mut cells = vec![0i8; n * e];
        let mut columns = Vec::with_capacity(e);
        for (col, a) in arcs.iter().enumerate() {
            let s = nodes.index_of(a.src).expect("arc source in node set");
            let d = nodes.index_of(a.dst).expect("arc target in node set");
            cells[s * e + col] = SOURCE_MARK;
            cells[d * e + col] = TARGET_MARK;
            columns.push((s, d, a.weight));
        }
        IncidenceMatrix {
            nodes,
            cells,
            columns,
        }
    }

    pub fn entry(&self, node: NodeId, column: usize) -> Result<i8, GraphError> {
        let i = self.nodes.require(node)?;
        Ok(self.cells[i * self.columns.len() + column])
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        let e = self.columns.len();
        (0..self.nodes.len())
            .map(|i| self.cells[i * e..(i + 1) * e].to_vec())
            .collect()
    }

    fn row(&self, i: usize) -> &[i8] {
        let e = self.columns.len();
        &self.cells[i * e..(i + 1) * e]
    }
}

impl Digraph for IncidenceMatrix {
    fn kind(&self) -> RepresentationKind {
        RepresentationKind::IncidenceMatrix
    }

    fn nodes(&self) -> &[NodeId] {
        self.nodes.ids()
    }

    fn arc_count(&self) -> usize {
        self.columns.len()
    }

    fn arcs(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> = self
            .columns
            .iter()
            .map(|&(s, d, weight)| Arc {
                src: self.nodes.id_at(s),
                dst: self.nodes.id_at(d),
                weight,
            })
            .collect();
        arcs.sort_by_key(Arc::endpoints);
        arcs
    }

    fn out_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.nodes.require(v)?;
        let mut out: Vec<NodeId> = self
            .row(i)
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == SOURCE_MARK)
            .map(|(col, _)| self.nodes.id_at(self.columns[col].1))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    fn in_neighbors(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.nodes.require(v)?;
        let mut inn: Vec<NodeId> = self
            .row(i)
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == TARGET_MARK)
            .map(|(col, _)| self.nodes.id_at(self.columns[col].0))
            .collect();
        inn.sort_unstable();
        Ok(inn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_mark_of_each_sign_per_column() {
        let nodes = NodeSet::new([NodeId(1), NodeId(2), NodeId(3)]);
        let arcs = [
            Arc::new(NodeId(1), NodeId(2)),
            Arc::new(NodeId(3), NodeId(1)),
        ];
        let m = IncidenceMatrix::from_checked(nodes, &arcs);
        for col in 0..2 {
            let column: Vec<i8> = m.rows().iter().map(|r| r[col]).collect();
            assert_eq!(column.iter().filter(|&&c| c == -1).count(), 1);
            assert_eq!(column.iter().filter(|&&c| c == 1).count(), 1);
        }
        assert_eq!(m.entry(NodeId(3), 1).unwrap(), -1);
        assert_eq!(m.entry(NodeId(1), 1).unwrap(), 1);
    }

    #[test]
    fn column_without_target_is_malformed() {
        let err = IncidenceMatrix::from_rows(vec![NodeId(1), NodeId(2)], &[vec![-1], vec![0]], [])
            .unwrap_err();
        assert!(matches!(err, GraphError::Malformed { .. }));
    }

    #[test]
    fn repeated_column_is_a_duplicate_arc() {
        let err =
            IncidenceMatrix::from_rows(vec![NodeId(1), NodeId(2)], &[vec![-1, -1], vec![1, 1]], [])
                .unwrap_err();
        assert_eq!(
            err,
            GraphError::DuplicateArc {
                src: NodeId(1),
                dst: NodeId(2)
            }
        );
    }
}
