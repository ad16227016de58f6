use std::collections::BTreeMap;

use crate::graph::NodeId;

/// Maps textual node labels to dense ids, assigned in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    ids: BTreeMap<String, NodeId>,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, allocating the next one if it is new.
    pub fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = NodeId(self.names.len() as u64);
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<NodeId> {
        self.ids.get(name).copied()
    }

    /// Label of `id`; ids that were never allocated print as the number.
    pub fn name(&self, id: NodeId) -> String {
        usize::try_from(id.0)
            .ok()
            .and_then(|i| self.names.get(i))
            .cloned()
            .unwrap_or_else(|| id.to_string())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
