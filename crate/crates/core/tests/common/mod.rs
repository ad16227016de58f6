//! Seeded instance generators and brute-force reference implementations
//! shared by the integration tests. Nothing here calls into the library's
//! algorithms; the oracles work on plain vectors and maps.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grafrec::graph::{build_from_edges, GraphRepresentation, NodeId};
use grafrec::hetnet::{HetGraph, NodeType, RatingMatrix, RatingScale};
use grafrec::session::{ClassId, ClassType, KernelClass, KernelClassPartition, SessionGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_graph(n: u64, arcs: &[(u64, u64)]) -> GraphRepresentation {
    let isolated: Vec<i64> = (0..n as i64).collect();
    build_from_edges(
        arcs.iter().map(|&(s, d)| (s as i64, d as i64, None)),
        &isolated,
    )
    .unwrap()
}

/// Loop-free digraph on `0..n`, each arc present with probability `p`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: u64, p: f64) -> Vec<(u64, u64)> {
    let mut arcs = Vec::new();
    for s in 0..n {
        for d in 0..n {
            if s != d && rng.gen_bool(p) {
                arcs.push((s, d));
            }
        }
    }
    arcs
}

/// Like [`random_digraph`], then every node without successors gets one.
pub fn random_dangling_free(rng: &mut ChaCha8Rng, n: u64, p: f64) -> Vec<(u64, u64)> {
    assert!(n >= 2);
    let mut arcs: BTreeSet<(u64, u64)> = random_digraph(rng, n, p).into_iter().collect();
    for s in 0..n {
        if !arcs.iter().any(|a| a.0 == s) {
            let mut d = rng.gen_range(0..n - 1);
            if d >= s {
                d += 1;
            }
            arcs.insert((s, d));
        }
    }
    arcs.into_iter().collect()
}

/// Strongly connected and aperiodic: a Hamiltonian cycle through a random
/// permutation, a chord closing a cycle one node shorter (n >= 3), plus
/// random extra arcs.
pub fn random_strongly_connected(rng: &mut ChaCha8Rng, n: u64, p: f64) -> Vec<(u64, u64)> {
    assert!(n >= 2);
    let mut order: Vec<u64> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs: BTreeSet<(u64, u64)> = random_digraph(rng, n, p).into_iter().collect();
    for i in 0..n as usize {
        arcs.insert((order[i], order[(i + 1) % n as usize]));
    }
    if n >= 3 {
        arcs.insert((order[n as usize - 1], order[1]));
    }
    arcs.into_iter().collect()
}

/// Node sets reachable along arcs from every node, by repeated relaxation.
pub fn is_strongly_connected(n: u64, arcs: &[(u64, u64)]) -> bool {
    let n = n as usize;
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    loop {
        let mut changed = false;
        for &(s, d) in arcs {
            for row in reach.iter_mut() {
                if row[s as usize] && !row[d as usize] {
                    row[d as usize] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    reach.iter().all(|row| row.iter().all(|&x| x))
}

/// Row-stochastic transition matrix built directly from the arc list.
pub fn transition(n: u64, arcs: &[(u64, u64)]) -> Vec<Vec<f64>> {
    let n = n as usize;
    let mut out = vec![0usize; n];
    for &(s, _) in arcs {
        out[s as usize] += 1;
    }
    let mut a = vec![vec![0.0; n]; n];
    for &(s, d) in arcs {
        a[s as usize][d as usize] = 1.0 / out[s as usize] as f64;
    }
    a
}

pub fn row_times(r: &[f64], a: &[Vec<f64>]) -> Vec<f64> {
    (0..r.len())
        .map(|j| (0..r.len()).map(|i| r[i] * a[i][j]).sum())
        .collect()
}

/// A valid session graph: kernels `0..k`, objects `k..k+o`. Every kernel
/// links to at least one object and every object has at least one kernel.
#[derive(Debug, Clone)]
pub struct SessionInstance {
    pub kernels: Vec<u64>,
    pub objects: Vec<u64>,
    pub arcs: BTreeSet<(u64, u64)>,
    /// Class of each kernel, by index into `class_names`.
    pub class_of: BTreeMap<u64, usize>,
    pub class_names: Vec<String>,
}

impl SessionInstance {
    pub fn random(rng: &mut ChaCha8Rng, max_kernels: u64, max_objects: u64) -> Self {
        let k = rng.gen_range(1..=max_kernels);
        let o = rng.gen_range(1..=max_objects);
        let kernels: Vec<u64> = (0..k).collect();
        let objects: Vec<u64> = (k..k + o).collect();
        let p = rng.gen_range(0.05..0.5);
        let mut arcs = BTreeSet::new();
        for &j in &kernels {
            for &ob in &objects {
                if rng.gen_bool(p) {
                    arcs.insert((j, ob));
                }
            }
        }
        for &j in &kernels {
            if !arcs.iter().any(|a| a.0 == j) {
                arcs.insert((j, *objects.choose(rng).unwrap()));
            }
        }
        for &ob in &objects {
            if !arcs.iter().any(|a| a.1 == ob) {
                arcs.insert((*kernels.choose(rng).unwrap(), ob));
            }
        }
        let class_count = rng.gen_range(1..=3usize);
        let class_names: Vec<String> = (0..class_count).map(|c| format!("c{c}")).collect();
        let class_of = kernels
            .iter()
            .map(|&j| (j, rng.gen_range(0..class_count)))
            .collect();
        SessionInstance {
            kernels,
            objects,
            arcs,
            class_of,
            class_names,
        }
    }

    pub fn partition(&self) -> KernelClassPartition {
        let types = [ClassType::Behavioral, ClassType::Static, ClassType::Mixed];
        let classes = self
            .class_names
            .iter()
            .enumerate()
            .map(|(c, name)| KernelClass {
                id: ClassId::from(name.as_str()),
                class_type: types[c % 3],
                kernels: self
                    .class_of
                    .iter()
                    .filter(|&(_, &cc)| cc == c)
                    .map(|(&j, _)| NodeId(j))
                    .collect(),
            })
            .collect();
        KernelClassPartition::new(classes).unwrap()
    }

    pub fn graph(&self) -> SessionGraph {
        SessionGraph::new(
            self.kernels.iter().map(|&v| NodeId(v)),
            self.objects.iter().map(|&v| NodeId(v)),
            self.arcs.iter().map(|&(s, d)| (NodeId(s), NodeId(d))),
        )
        .unwrap()
        .with_classes(self.partition())
    }
}

/// Two-hop expansion around `m` with in-degree counting, sorted by score
/// descending and then id ascending (stable sort over an id-sorted list).
pub fn ars_oracle(
    inst: &SessionInstance,
    m: u64,
    class: Option<usize>,
    top: Option<usize>,
) -> Vec<(u64, u64)> {
    let first_hop: Vec<u64> = inst
        .arcs
        .iter()
        .filter(|&&(j, o)| o == m && class.is_none_or(|c| inst.class_of[&j] == c))
        .map(|&(j, _)| j)
        .collect();
    let mut second_hop: Vec<(u64, u64)> = Vec::new();
    for &(j, o) in &inst.arcs {
        if first_hop.contains(&j) {
            second_hop.push((j, o));
        }
    }
    let mut counted: Vec<(u64, u64)> = Vec::new();
    for &o in &inst.objects {
        if o == m {
            continue;
        }
        let c = second_hop.iter().filter(|&&(_, x)| x == o).count() as u64;
        if c > 0 {
            counted.push((o, c));
        }
    }
    counted.sort_by_key(|&(_, c)| std::cmp::Reverse(c));
    if let Some(n) = top {
        counted.truncate(n);
    }
    counted
}

/// Random ratings on `users x objects` (ids `0..u`, `u..u+o`).
pub fn random_ratings(
    rng: &mut ChaCha8Rng,
    max_users: u64,
    max_objects: u64,
    scale: RatingScale,
) -> RatingMatrix {
    let u = rng.gen_range(1..=max_users);
    let o = rng.gen_range(2..=max_objects);
    let density = rng.gen_range(0.2..0.9);
    let mut rm = RatingMatrix::new(scale);
    for user in 0..u {
        for obj in u..u + o {
            if rng.gen_bool(density) {
                rm.insert(
                    NodeId(user),
                    NodeId(obj),
                    rng.gen_range(scale.min()..=scale.max()),
                )
                .unwrap();
            }
        }
    }
    rm
}

/// Plain typed graph description used to build a [`HetGraph`] and, in
/// parallel, to enumerate walks without the library.
#[derive(Debug, Clone)]
pub struct HetInstance {
    pub types: BTreeMap<u64, NodeType>,
    /// Undirected edges, each pair at most once.
    pub edges: BTreeSet<(u64, u64)>,
}

impl HetInstance {
    pub fn random(rng: &mut ChaCha8Rng, max_nodes: u64) -> Self {
        let n = rng.gen_range(4..=max_nodes);
        let pool = [
            NodeType::User,
            NodeType::User,
            NodeType::User,
            NodeType::Object,
            NodeType::Object,
            NodeType::Object,
            NodeType::Group,
            NodeType::Category,
        ];
        let types: BTreeMap<u64, NodeType> =
            (0..n).map(|v| (v, *pool.choose(rng).unwrap())).collect();
        let p = rng.gen_range(0.05..0.4);
        let allowed = |a: NodeType, b: NodeType| {
            use NodeType::*;
            matches!(
                (a, b),
                (User, Object)
                    | (Object, User)
                    | (User, Group)
                    | (Group, User)
                    | (Object, Category)
                    | (Category, Object)
                    | (User, User)
                    | (Object, Object)
            )
        };
        let mut edges = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                if allowed(types[&a], types[&b]) && rng.gen_bool(p) {
                    edges.insert((a, b));
                }
            }
        }
        HetInstance { types, edges }
    }

    pub fn graph(&self, rng: &mut ChaCha8Rng) -> HetGraph {
        let mut g = HetGraph::new();
        for (&v, &t) in &self.types {
            g.add_node(NodeId(v), t).unwrap();
        }
        for &(a, b) in &self.edges {
            let rated = matches!(
                (self.types[&a], self.types[&b]),
                (NodeType::User, NodeType::Object) | (NodeType::Object, NodeType::User)
            );
            let weight = rated.then(|| rng.gen_range(1..=5) as f64);
            let (x, y) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            g.connect(NodeId(x), NodeId(y), weight).unwrap();
        }
        g
    }

    fn neighbors(&self, v: u64) -> Vec<u64> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match v {
                _ if a == v => Some(b),
                _ if b == v => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Enumerates every walk whose node types spell `pattern` and that never
    /// steps straight back along the edge it just used.
    pub fn count_walks(&self, pattern: &[NodeType], start: u64) -> BTreeMap<u64, u64> {
        let mut counts = BTreeMap::new();
        let mut walk = vec![start];
        self.extend(pattern, &mut walk, &mut counts);
        if pattern.first() == pattern.last() {
            counts.remove(&start);
        }
        counts
    }

    fn extend(&self, pattern: &[NodeType], walk: &mut Vec<u64>, counts: &mut BTreeMap<u64, u64>) {
        if walk.len() == pattern.len() {
            *counts.entry(*walk.last().unwrap()).or_insert(0) += 1;
            return;
        }
        let here = *walk.last().unwrap();
        let back = walk.len().checked_sub(2).map(|i| walk[i]);
        for w in self.neighbors(here) {
            if Some(w) == back || self.types[&w] != pattern[walk.len()] {
                continue;
            }
            walk.push(w);
            self.extend(pattern, walk, counts);
            walk.pop();
        }
    }
}
