//! Session graphs: a bipartite directed unigraph whose arcs run from kernels
//! (orders, wishlists, categories, visits, ...) to recommendable objects.
//!
//! A [`SessionGraph`] is built permissively so that broken inputs can be
//! inspected; [`validate_session_graph`] reports every structural rule that
//! does not hold. Kernel classes ([`KernelClassPartition`]) label kernels by
//! functional kind and are checked for disjointness and coverage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{
    Arc, Digraph, EdgeList, GraphError, GraphRepresentation, NodeId, RepresentationKind,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("node {0} is not a kernel")]
    UnknownKernel(NodeId),
    #[error("node {0} is not an object")]
    UnknownObject(NodeId),
    #[error("user {0} has no evaluated objects")]
    UnknownUser(NodeId),
    #[error("unknown kernel class `{0}`")]
    UnknownClass(ClassId),
    #[error("kernel class `{0}` declared twice")]
    DuplicateClass(ClassId),
    #[error("utility table is {found:?}, expected {expected:?}")]
    WrongUtilityDomain {
        expected: UtilityDomain,
        found: UtilityDomain,
    },
}

/// Kernel -> object bipartite digraph.
#[derive(Debug, Clone)]
pub struct SessionGraph {
    kernels: BTreeSet<NodeId>,
    objects: BTreeSet<NodeId>,
    graph: GraphRepresentation,
    classes: Option<KernelClassPartition>,
}

impl SessionGraph {
    /// Stores the arcs as an edge list. Parallel arcs and self-loops are
    /// rejected here; the bipartite rules are left to [`Self::validate`].
    pub fn new(
        kernels: impl IntoIterator<Item = NodeId>,
        objects: impl IntoIterator<Item = NodeId>,
        arcs: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, SessionError> {
        let kernels: BTreeSet<NodeId> = kernels.into_iter().collect();
        let objects: BTreeSet<NodeId> = objects.into_iter().collect();
        let arcs = arcs.into_iter().map(|(s, d)| Arc::new(s, d)).collect();
        let graph = EdgeList::new(kernels.iter().chain(&objects).copied(), arcs)?;
        Ok(SessionGraph {
            kernels,
            objects,
            graph: graph.into(),
            classes: None,
        })
    }

    /// Attaches kernel classes, used by class-filtered queries.
    pub fn with_classes(mut self, classes: KernelClassPartition) -> Self {
        self.classes = Some(classes);
        self
    }

    pub fn classes(&self) -> Option<&KernelClassPartition> {
        self.classes.as_ref()
    }

    /// Same graph in another physical layout.
    pub fn with_representation(&self, kind: RepresentationKind) -> Self {
        SessionGraph {
            kernels: self.kernels.clone(),
            objects: self.objects.clone(),
            graph: self.graph.convert(kind),
            classes: self.classes.clone(),
        }
    }

    pub fn kernels(&self) -> &BTreeSet<NodeId> {
        &self.kernels
    }

    pub fn objects(&self) -> &BTreeSet<NodeId> {
        &self.objects
    }

    pub fn graph(&self) -> &GraphRepresentation {
        &self.graph
    }

    pub fn is_kernel(&self, v: NodeId) -> bool {
        self.kernels.contains(&v)
    }

    pub fn is_object(&self, v: NodeId) -> bool {
        self.objects.contains(&v)
    }

    /// Arcs sorted by `(kernel, object)`.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        self.graph.arc_pairs()
    }

    pub fn validate(&self, classes: Option<&KernelClassPartition>) -> Vec<Violation> {
        validate_session_graph(self, classes)
    }

    pub fn session(&self, kernel: NodeId) -> Result<Session, SessionError> {
        extract_session(self, kernel)
    }
}

/// One broken structural rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// A node is declared both as a kernel and as an object.
    IdCollision(NodeId),
    /// An arc does not run from a kernel to an object.
    MisdirectedArc { src: NodeId, dst: NodeId },
    /// A kernel without any object.
    OrphanKernel(NodeId),
    /// An object no kernel links to.
    OrphanObject(NodeId),
    /// A class lists a node that is not a kernel.
    ClassMemberNotKernel { class: ClassId, node: NodeId },
    /// A kernel sits in two or more classes.
    OverlappingClasses {
        kernel: NodeId,
        classes: Vec<ClassId>,
    },
    /// A kernel belongs to no class.
    UncoveredKernel(NodeId),
}

impl Violation {
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::IdCollision(_) => "IdCollision",
            Violation::MisdirectedArc { .. } => "MisdirectedArc",
            Violation::OrphanKernel(_) => "OrphanKernel",
            Violation::OrphanObject(_) => "OrphanObject",
            Violation::ClassMemberNotKernel { .. } => "ClassMemberNotKernel",
            Violation::OverlappingClasses { .. } => "OverlappingClasses",
            Violation::UncoveredKernel(_) => "UncoveredKernel",
        }
    }

    /// Offending nodes, in the order they are reported.
    pub fn nodes(&self) -> Vec<NodeId> {
        match self {
            Violation::IdCollision(v)
            | Violation::OrphanKernel(v)
            | Violation::OrphanObject(v)
            | Violation::UncoveredKernel(v) => vec![*v],
            Violation::MisdirectedArc { src, dst } => vec![*src, *dst],
            Violation::ClassMemberNotKernel { node, .. } => vec![*node],
            Violation::OverlappingClasses { kernel, .. } => vec![*kernel],
        }
    }

    pub fn classes(&self) -> Vec<ClassId> {
        match self {
            Violation::ClassMemberNotKernel { class, .. } => vec![class.clone()],
            Violation::OverlappingClasses { classes, .. } => classes.clone(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes: Vec<String> = self.nodes().iter().map(NodeId::to_string).collect();
        write!(f, "{}({})", self.rule(), nodes.join(", "))?;
        let classes = self.classes();
        if !classes.is_empty() {
            let names: Vec<&str> = classes.iter().map(|c| c.0.as_str()).collect();
            write!(f, " [{}]", names.join(", "))?;
        }
        Ok(())
    }
}

/// Checks the bipartite rules and, when given, the class partition rules.
/// Returns an empty list iff everything holds.
pub fn validate_session_graph(
    g: &SessionGraph,
    classes: Option<&KernelClassPartition>,
) -> Vec<Violation> {
    let mut found = Vec::new();

    found.extend(
        g.kernels
            .intersection(&g.objects)
            .map(|&v| Violation::IdCollision(v)),
    );

    let mut kernel_has_object = BTreeSet::new();
    let mut object_has_kernel = BTreeSet::new();
    for (src, dst) in g.arcs() {
        if g.is_kernel(src) && g.is_object(dst) {
            kernel_has_object.insert(src);
            object_has_kernel.insert(dst);
        } else {
            found.push(Violation::MisdirectedArc { src, dst });
        }
    }
    found.extend(
        g.kernels
            .iter()
            .filter(|k| !kernel_has_object.contains(k))
            .map(|&k| Violation::OrphanKernel(k)),
    );
    found.extend(
        g.objects
            .iter()
            .filter(|o| !object_has_kernel.contains(o))
            .map(|&o| Violation::OrphanObject(o)),
    );

    if let Some(partition) = classes {
        let mut membership: BTreeMap<NodeId, Vec<ClassId>> = BTreeMap::new();
        for class in &partition.classes {
            for &member in &class.kernels {
                if g.is_kernel(member) {
                    membership.entry(member).or_default().push(class.id.clone());
                } else {
                    found.push(Violation::ClassMemberNotKernel {
                        class: class.id.clone(),
                        node: member,
                    });
                }
            }
        }
        for &kernel in &g.kernels {
            match membership.remove(&kernel) {
                None => found.push(Violation::UncoveredKernel(kernel)),
                Some(classes) if classes.len() > 1 => {
                    found.push(Violation::OverlappingClasses { kernel, classes })
                }
                Some(_) => {}
            }
        }
    }
    found
}

/// One kernel with every object it links to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub kernel: NodeId,
    pub objects: BTreeSet<NodeId>,
    pub arcs: Vec<(NodeId, NodeId)>,
}

pub fn extract_session(g: &SessionGraph, kernel: NodeId) -> Result<Session, SessionError> {
    if !g.is_kernel(kernel) {
        return Err(SessionError::UnknownKernel(kernel));
    }
    let objects: BTreeSet<NodeId> = g
        .graph
        .out_neighbors(kernel)?
        .into_iter()
        .filter(|o| g.is_object(*o))
        .collect();
    let arcs = objects.iter().map(|&o| (kernel, o)).collect();
    Ok(Session {
        kernel,
        objects,
        arcs,
    })
}

/// Name of a kernel class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub String);

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for ClassId {
    fn from(s: String) -> Self {
        ClassId(s)
    }
}

impl From<&str> for ClassId {
    fn from(s: &str) -> Self {
        ClassId(s.to_owned())
    }
}

/// Functional kind of a kernel class. Informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassType {
    /// Produced by user activity; changes quickly (visits, orders, wishlists).
    Behavioral,
    /// Tied to object features; does not change (size, colour, category).
    Static,
    /// Produced by the system's surroundings; changes slowly (experts, rankings).
    Mixed,
}

impl ClassType {
    pub fn name(self) -> &'static str {
        match self {
            ClassType::Behavioral => "behavioral",
            ClassType::Static => "static",
            ClassType::Mixed => "mixed",
        }
    }
}

impl FromStr for ClassType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "behavioral" => Ok(ClassType::Behavioral),
            "static" => Ok(ClassType::Static),
            "mixed" => Ok(ClassType::Mixed),
            other => Err(format!(
                "unknown class type `{other}` (expected behavioral, static or mixed)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelClass {
    pub id: ClassId,
    pub class_type: ClassType,
    pub kernels: BTreeSet<NodeId>,
}

/// Classes of kernels. Construction only rejects repeated class ids; the
/// disjointness and coverage rules are reported by [`validate_session_graph`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KernelClassPartition {
    classes: Vec<KernelClass>,
}

impl KernelClassPartition {
    pub fn new(classes: Vec<KernelClass>) -> Result<Self, SessionError> {
        let mut seen = BTreeSet::new();
        for c in &classes {
            if !seen.insert(&c.id) {
                return Err(SessionError::DuplicateClass(c.id.clone()));
            }
        }
        Ok(KernelClassPartition { classes })
    }

    pub fn classes(&self) -> &[KernelClass] {
        &self.classes
    }

    pub fn class(&self, id: &ClassId) -> Result<&KernelClass, SessionError> {
        self.classes
            .iter()
            .find(|c| &c.id == id)
            .ok_or_else(|| SessionError::UnknownClass(id.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UtilityDomain {
    UserObject,
    ObjectObject,
}

/// Sparse utility function over `(left, right)` id pairs. Pairs without an
/// entry are not evaluated and never take part in a maximum.
#[derive(Debug, Clone)]
pub struct UtilityTable<W> {
    domain: UtilityDomain,
    entries: BTreeMap<(NodeId, NodeId), W>,
}

impl<W: Ord + Clone> UtilityTable<W> {
    pub fn new(domain: UtilityDomain) -> Self {
        UtilityTable {
            domain,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        domain: UtilityDomain,
        entries: impl IntoIterator<Item = ((NodeId, NodeId), W)>,
    ) -> Self {
        UtilityTable {
            domain,
            entries: entries.into_iter().collect(),
        }
    }

    pub fn domain(&self) -> UtilityDomain {
        self.domain
    }

    pub fn insert(&mut self, left: NodeId, right: NodeId, value: W) -> Option<W> {
        self.entries.insert((left, right), value)
    }

    pub fn get(&self, left: NodeId, right: NodeId) -> Option<&W> {
        self.entries.get(&(left, right))
    }

    /// Evaluated `(right, value)` pairs for one left id.
    pub fn row(&self, left: NodeId) -> impl Iterator<Item = (NodeId, &W)> {
        self.entries
            .range((left, NodeId(0))..=(left, NodeId(u64::MAX)))
            .map(|(&(_, r), w)| (r, w))
    }

    fn expect_domain(&self, expected: UtilityDomain) -> Result<(), SessionError> {
        if self.domain == expected {
            Ok(())
        } else {
            Err(SessionError::WrongUtilityDomain {
                expected,
                found: self.domain,
            })
        }
    }
}

fn argmax<'a, W: Ord + 'a>(row: impl Iterator<Item = (NodeId, &'a W)>) -> BTreeSet<NodeId> {
    let row: Vec<(NodeId, &W)> = row.collect();
    match row.iter().map(|&(_, w)| w).max() {
        Some(best) => row
            .iter()
            .filter(|&&(_, w)| w.cmp(best).is_eq())
            .map(|&(r, _)| r)
            .collect(),
        None => BTreeSet::new(),
    }
}

/// Objects of maximal utility for `user`; ties are all kept.
pub fn recommend_by_utility<W: Ord + Clone>(
    u: &UtilityTable<W>,
    user: NodeId,
) -> Result<BTreeSet<NodeId>, SessionError> {
    u.expect_domain(UtilityDomain::UserObject)?;
    let best = argmax(u.row(user));
    if best.is_empty() {
        return Err(SessionError::UnknownUser(user));
    }
    Ok(best)
}

/// Objects of maximal utility relative to object `m`, never including `m`
/// itself. If `m`'s only evaluated entry is `(m, m)` the result is empty.
pub fn recommend_for_object_by_utility<W: Ord + Clone>(
    u: &UtilityTable<W>,
    m: NodeId,
) -> Result<BTreeSet<NodeId>, SessionError> {
    u.expect_domain(UtilityDomain::ObjectObject)?;
    if u.row(m).next().is_none() {
        return Err(SessionError::UnknownObject(m));
    }
    Ok(argmax(u.row(m).filter(|&(r, _)| r != m)))
}
