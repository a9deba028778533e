//! Maximum flow in directed planar graphs with arc and vertex capacities
//! and several sources and sinks.
//!
//! The crate is organised bottom-up:
//!
//! * [`num`], [`graph`], [`embedding`]: exact amounts, dart-pair graphs and
//!   rotation-system embeddings with faces and duals.
//! * [`network`], [`flow`], [`maxflow`]: networks, flows and an exact
//!   max-flow engine.
//! * [`gadgets`]: the supersource/supersink network, the vertex-split
//!   network, the planar cycle gadget and its partial collapse.
//! * [`rounding`], [`cancel`], [`saddle`]: rounding fractional flows,
//!   cancelling flow cycles, and alternation/saddle analysis.
//! * [`solver`]: the bounded-capacity, scaling and three-terminal solvers.
//! * [`harness`]: instance format, generator, reference oracle and batch
//!   comparison.

pub mod cancel;
pub mod embedding;
pub mod flow;
pub mod gadgets;
pub mod graph;
pub mod harness;
pub mod maxflow;
pub mod network;
pub mod num;
pub mod rounding;
pub mod saddle;
pub mod solver;

pub use flow::Flow;
pub use graph::{Dart, Graph};
pub use network::FlowNetwork;
pub use num::{Cap, Q};
