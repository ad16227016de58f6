//! Graph-based recommendation engine.
//!
//! * [`graph`]: directed graphs in five interchangeable layouts.
//! * [`session`]: kernel/object session graphs, kernel classes and
//!   utility-argmax recommendation sets.
//! * [`ars`]: two-hop session-graph expansion and in-degree Top-N ranking.
//! * [`pagerank`]: basic and damped power iteration, transition matrix and
//!   the linear-system solution.
//! * [`hetnet`]: rating matrices, tripartite preference graphs and meta-path
//!   queries over heterogeneous graphs.
//! * [`app`]: file formats and the `grafrec` command line.

pub mod app;
pub mod ars;
pub mod graph;
pub mod hetnet;
pub mod pagerank;
pub mod session;

pub use graph::{Arc, Digraph, GraphError, GraphRepresentation, NodeId, RepresentationKind};
