//! PageRank over a link graph.
//!
//! Two update rules are supported:
//!
//! * basic:  `PR'(u) = d * sum_{v in in(u)} PR(v) / |out(v)|`
//! * damped: `PR'(u) = (1 - d) / N + d * sum_{v in in(u)} PR(v) / |out(v)|`
//!
//! Iteration starts from the uniform vector and stops once no page moves by
//! more than `epsilon`, or after `max_iter` steps. Incoming sums are always
//! accumulated in ascending source-id order, so the result is bit-for-bit
//! identical whichever layout the graph is stored in.
//!
//! The stationary vector can also be found directly: [`solve_linear`] solves
//! `r = r A`, `sum(r) = 1` with `A` the row-stochastic transition matrix.

mod linear;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Digraph, GraphError, NodeId};

pub use linear::solve_dense;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PageRankError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("node {0} has no outgoing links")]
    DanglingNode(NodeId),
    #[error("graph is not strongly connected; the stationary vector is not unique")]
    NotStronglyConnected,
    #[error("linear system is singular to working precision")]
    SingularSystem,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("rank state does not cover the graph's node set")]
    StateMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Basic,
    Damped,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::Damped => "damped",
        }
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(Variant::Basic),
            "damped" => Ok(Variant::Damped),
            other => Err(format!(
                "unknown variant `{other}` (expected basic or damped)"
            )),
        }
    }
}

/// What to do with pages that link nowhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DanglingPolicy {
    Error,
    /// Treat a dangling page as linking to every page, itself included.
    UniformRedistribute,
}

impl DanglingPolicy {
    pub fn name(self) -> &'static str {
        match self {
            DanglingPolicy::Error => "error",
            DanglingPolicy::UniformRedistribute => "uniform",
        }
    }
}

impl FromStr for DanglingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "error" => Ok(DanglingPolicy::Error),
            "uniform" => Ok(DanglingPolicy::UniformRedistribute),
            other => Err(format!(
                "unknown dangling policy `{other}` (expected error or uniform)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    /// Per-page stop margin.
    pub epsilon: f64,
    pub max_iter: usize,
    pub variant: Variant,
    pub dangling: DanglingPolicy,
}

impl PageRankConfig {
    pub const DEFAULT_EPSILON: f64 = 0.01;
    pub const DEFAULT_MAX_ITER: usize = 100;
    pub const DEFAULT_DAMPING: f64 = 0.85;

    /// Basic rule with `d = 1`.
    pub fn basic() -> Self {
        PageRankConfig {
            damping: 1.0,
            epsilon: Self::DEFAULT_EPSILON,
            max_iter: Self::DEFAULT_MAX_ITER,
            variant: Variant::Basic,
            dangling: DanglingPolicy::Error,
        }
    }

    /// Damped rule with `d = 0.85`.
    pub fn damped() -> Self {
        PageRankConfig {
            damping: Self::DEFAULT_DAMPING,
            variant: Variant::Damped,
            ..Self::basic()
        }
    }

    pub fn for_variant(variant: Variant) -> Self {
        match variant {
            Variant::Basic => Self::basic(),
            Variant::Damped => Self::damped(),
        }
    }

    pub fn with_damping(mut self, d: f64) -> Self {
        self.damping = d;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_dangling(mut self, policy: DanglingPolicy) -> Self {
        self.dangling = policy;
        self
    }

    pub fn validate(&self) -> Result<(), PageRankError> {
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(PageRankError::InvalidConfig(format!(
                "damping {} outside [0, 1]",
                self.damping
            )));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(PageRankError::InvalidConfig(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(PageRankError::InvalidConfig(
                "max_iter must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self::damped()
    }
}

/// Rank vector over the graph's nodes (ascending id order).
#[derive(Debug, Clone, PartialEq)]
pub struct RankState {
    nodes: Vec<NodeId>,
    ranks: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl RankState {
    pub fn new(nodes: Vec<NodeId>, ranks: Vec<f64>) -> Self {
        assert_eq!(nodes.len(), ranks.len(), "one rank per node");
        RankState {
            nodes,
            ranks,
            iterations: 0,
            converged: false,
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    pub fn rank(&self, v: NodeId) -> Option<f64> {
        self.nodes.binary_search(&v).ok().map(|i| self.ranks[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.nodes.iter().copied().zip(self.ranks.iter().copied())
    }

    pub fn total(&self) -> f64 {
        self.ranks.iter().sum()
    }

    /// Largest per-page absolute difference.
    pub fn max_change(&self, other: &RankState) -> f64 {
        self.ranks
            .iter()
            .zip(&other.ranks)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// In-lists and out-degrees in dense index form.
#[derive(Debug, Clone)]
struct LinkStructure {
    nodes: Vec<NodeId>,
    in_lists: Vec<Vec<usize>>,
    out_lists: Vec<Vec<usize>>,
    dangling: Vec<usize>,
}

impl LinkStructure {
    fn new<G: Digraph + ?Sized>(g: &G, policy: DanglingPolicy) -> Result<Self, PageRankError> {
        let nodes = g.nodes().to_vec();
        if nodes.is_empty() {
            return Err(PageRankError::EmptyGraph);
        }
        let index = |v: NodeId| nodes.binary_search(&v).expect("neighbor is a graph node");
        let mut in_lists = Vec::with_capacity(nodes.len());
        let mut out_lists = Vec::with_capacity(nodes.len());
        let mut dangling = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            let adj = g.adjacency(v)?;
            if adj.out_degree == 0 {
                if policy == DanglingPolicy::Error {
                    return Err(PageRankError::DanglingNode(v));
                }
                dangling.push(i);
            }
            in_lists.push(adj.in_neighbors.into_iter().map(index).collect());
            out_lists.push(adj.out_neighbors.into_iter().map(index).collect());
        }
        Ok(LinkStructure {
            nodes,
            in_lists,
            out_lists,
            dangling,
        })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn out_degree(&self, i: usize) -> usize {
        self.out_lists[i].len()
    }

    /// Strong connectivity of the chain actually iterated: dangling pages
    /// (under the uniform policy) link to every page.
    fn is_strongly_connected(&self) -> bool {
        if !self.dangling.is_empty() {
            // dangling pages reach everyone, so it is enough that every page
            // reaches some dangling page
            return self.reaches_all(&self.dangling, |i| &self.in_lists[i]);
        }
        self.reaches_all(&[0], |i| &self.out_lists[i])
            && self.reaches_all(&[0], |i| &self.in_lists[i])
    }

    fn reaches_all<'a>(&'a self, starts: &[usize], next: impl Fn(usize) -> &'a Vec<usize>) -> bool {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::new();
        for &s in starts {
            seen[s] = true;
            queue.push_back(s);
        }
        let mut count = starts.len();
        while let Some(v) = queue.pop_front() {
            for &w in next(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.len()
    }
}

/// Precomputed link structure plus configuration; performs update steps.
#[derive(Debug, Clone)]
pub struct PowerIteration {
    links: LinkStructure,
    config: PageRankConfig,
}

impl PowerIteration {
    pub fn new<G: Digraph + ?Sized>(g: &G, config: PageRankConfig) -> Result<Self, PageRankError> {
        config.validate()?;
        Ok(PowerIteration {
            links: LinkStructure::new(g, config.dangling)?,
            config,
        })
    }

    pub fn initial_state(&self) -> RankState {
        let n = self.links.len();
        RankState::new(self.links.nodes.clone(), vec![1.0 / n as f64; n])
    }

    /// One application of the configured update rule.
    pub fn step(&self, state: &RankState) -> Result<RankState, PageRankError> {
        if state.nodes != self.links.nodes {
            return Err(PageRankError::StateMismatch);
        }
        let n = self.links.len();
        let d = self.config.damping;
        let share: Vec<f64> = (0..n)
            .map(|v| match self.links.out_degree(v) {
                0 => 0.0,
                k => state.ranks[v] / k as f64,
            })
            .collect();
        let dangling_share = if self.links.dangling.is_empty() {
            0.0
        } else {
            let mass: f64 = self.links.dangling.iter().map(|&v| state.ranks[v]).sum();
            mass / n as f64
        };
        let teleport = match self.config.variant {
            Variant::Basic => 0.0,
            Variant::Damped => (1.0 - d) / n as f64,
        };
        let ranks = self
            .links
            .in_lists
            .iter()
            .map(|sources| {
                let incoming: f64 = sources.iter().map(|&v| share[v]).sum::<f64>() + dangling_share;
                teleport + d * incoming
            })
            .collect();
        Ok(RankState {
            nodes: state.nodes.clone(),
            ranks,
            iterations: state.iterations + 1,
            converged: false,
        })
    }

    /// Iterates until converged or `max_iter`, calling `observe` on every
    /// state including the initial one.
    pub fn run_observed(
        &self,
        mut observe: impl FnMut(&RankState),
    ) -> Result<RankState, PageRankError> {
        let mut state = self.initial_state();
        observe(&state);
        while state.iterations < self.config.max_iter {
            let mut next = self.step(&state)?;
            next.converged = next.max_change(&state) <= self.config.epsilon;
            observe(&next);
            state = next;
            if state.converged {
                break;
            }
        }
        Ok(state)
    }

    pub fn run(&self) -> Result<RankState, PageRankError> {
        self.run_observed(|_| {})
    }

    /// Exactly `steps` updates from the initial state, without early stop.
    /// `converged` reports whether the last update moved no page by more
    /// than `epsilon`.
    pub fn run_steps(&self, steps: usize) -> Result<RankState, PageRankError> {
        let mut state = self.initial_state();
        for _ in 0..steps {
            let mut next = self.step(&state)?;
            next.converged = next.max_change(&state) <= self.config.epsilon;
            state = next;
        }
        Ok(state)
    }
}

/// Uniform starting vector `1 / |N|`.
pub fn init_ranks<G: Digraph + ?Sized>(g: &G) -> Result<RankState, PageRankError> {
    let n = g.node_count();
    if n == 0 {
        return Err(PageRankError::EmptyGraph);
    }
    Ok(RankState::new(g.nodes().to_vec(), vec![1.0 / n as f64; n]))
}

pub fn pagerank_step<G: Digraph + ?Sized>(
    g: &G,
    state: &RankState,
    config: &PageRankConfig,
) -> Result<RankState, PageRankError> {
    PowerIteration::new(g, *config)?.step(state)
}

pub fn pagerank_run<G: Digraph + ?Sized>(
    g: &G,
    config: &PageRankConfig,
) -> Result<RankState, PageRankError> {
    PowerIteration::new(g, *config)?.run()
}

/// Dense row-stochastic transition matrix, rows and columns in ascending
/// node-id order: `a[i][j] = 1 / |out(i)|` when `i` links to `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    nodes: Vec<NodeId>,
    rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn get(&self, from: NodeId, to: NodeId) -> Option<f64> {
        let i = self.nodes.binary_search(&from).ok()?;
        let j = self.nodes.binary_search(&to).ok()?;
        Some(self.rows[i][j])
    }

    /// `r * A` for a row vector `r`.
    pub fn left_multiply(&self, r: &[f64]) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n)
            .map(|j| (0..n).map(|i| r[i] * self.rows[i][j]).sum())
            .collect()
    }

    fn from_links(links: &LinkStructure) -> Self {
        let n = links.len();
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                match links.out_degree(i) {
                    0 => row.fill(1.0 / n as f64),
                    k => {
                        for &j in &links.out_lists[i] {
                            row[j] = 1.0 / k as f64;
                        }
                    }
                }
                row
            })
            .collect();
        TransitionMatrix {
            nodes: links.nodes.clone(),
            rows,
        }
    }
}

/// Dangling rows are filled with `1 / m` under the uniform policy.
pub fn transition_matrix<G: Digraph + ?Sized>(
    g: &G,
    dangling: DanglingPolicy,
) -> Result<TransitionMatrix, PageRankError> {
    Ok(TransitionMatrix::from_links(&LinkStructure::new(
        g, dangling,
    )?))
}

/// Stationary vector of the basic rule with `d = 1`: solves `r = r A`,
/// `sum(r) = 1` by replacing one equation of `(A^T - I) r^T = 0` with the
/// normalization row and eliminating with partial pivoting.
pub fn solve_linear<G: Digraph + ?Sized>(g: &G) -> Result<RankState, PageRankError> {
    solve_linear_with(g, &PageRankConfig::basic())
}

/// Linear-system counterpart of [`pagerank_run`] for any valid config.
///
/// For the damped rule the system is built from `d A + (1 - d) / m`, whose
/// fixed point is the limit of damped iteration. The basic rule only has a
/// normalized fixed point when `d = 1`.
pub fn solve_linear_with<G: Digraph + ?Sized>(
    g: &G,
    config: &PageRankConfig,
) -> Result<RankState, PageRankError> {
    config.validate()?;
    let links = LinkStructure::new(g, config.dangling)?;
    let n = links.len();
    let (d, teleport) = match config.variant {
        Variant::Basic if config.damping != 1.0 => {
            return Err(PageRankError::InvalidConfig(
                "the basic rule has a normalized fixed point only for d = 1".into(),
            ));
        }
        Variant::Basic => (1.0, 0.0),
        Variant::Damped => (config.damping, (1.0 - config.damping) / n as f64),
    };
    if d == 1.0 && !links.is_strongly_connected() {
        return Err(PageRankError::NotStronglyConnected);
    }

    let a = TransitionMatrix::from_links(&links);
    // (G^T - I) with G = d A + teleport
    let mut system: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| d * a.rows[j][i] + teleport - if i == j { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let mut rhs = vec![0.0; n];
    system[n - 1] = vec![1.0; n];
    rhs[n - 1] = 1.0;

    let ranks = solve_dense(system, rhs).ok_or(PageRankError::SingularSystem)?;
    Ok(RankState {
        nodes: links.nodes,
        ranks,
        iterations: 0,
        converged: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankPosition {
    pub position: usize,
    pub node: NodeId,
    pub score: f64,
}

impl fmt::Display for RankPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {:.10}", self.position, self.node, self.score)
    }
}

/// Positions from 1 by descending rank, ties by ascending node id.
pub fn rank_positions(state: &RankState) -> Vec<RankPosition> {
    let mut order: Vec<(NodeId, f64)> = state.iter().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order
        .into_iter()
        .enumerate()
        .map(|(i, (node, score))| RankPosition {
            position: i + 1,
            node,
            score,
        })
        .collect()
}
