//! Flow networks: a graph with arc and vertex capacities and terminal sets.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::embedding::{Embedding, EmbeddingError};
use crate::graph::{Dart, Graph};
use crate::num::{is_integral, Cap, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("vertex {0} is both a source and a sink")]
    TerminalOverlap(usize),
    #[error("source {vertex} has incoming arc {dart}")]
    SourceHasInArc { vertex: usize, dart: Dart },
    #[error("sink {sink} has outgoing arc {dart}")]
    SinkHasOutArc { sink: usize, dart: Dart },
    #[error("negative capacity on dart {0}")]
    NegativeCapacity(Dart),
    #[error("vertex {0} needs a positive capacity")]
    NonPositiveVertexCapacity(usize),
    #[error("terminal {0} must have infinite capacity")]
    CapacitatedTerminal(usize),
    #[error("expected {expected} {what}, got {got}")]
    Length {
        what: &'static str,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Sink,
    Inner,
}

/// A directed graph with per-dart capacities, per-vertex capacities and
/// terminal sets. An arc `u -> v` of capacity `c` is an edge whose forward dart
/// has capacity `c` and whose reverse dart has capacity 0; an undirected edge
/// has capacity on both darts.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    pub graph: Arc<Graph>,
    pub embedding: Option<Arc<Embedding>>,
    pub cap: Vec<Cap>,
    pub vcap: Vec<Cap>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    roles: Vec<Role>,
}

impl FlowNetwork {
    /// Assembles a network and checks the terminal and capacity rules.
    pub fn new(
        graph: Arc<Graph>,
        embedding: Option<Arc<Embedding>>,
        cap: Vec<Cap>,
        vcap: Vec<Cap>,
        sources: Vec<usize>,
        sinks: Vec<usize>,
    ) -> Result<FlowNetwork, NetworkError> {
        let net = FlowNetwork::new_unchecked(graph, embedding, cap, vcap, sources, sinks)?;
        net.validate()?;
        Ok(net)
    }

    /// Like [`FlowNetwork::new`] but only checks sizes and terminal overlap.
    /// Residual and auxiliary networks use this since their terminals may
    /// have arcs in both directions.
    pub fn new_unchecked(
        graph: Arc<Graph>,
        embedding: Option<Arc<Embedding>>,
        cap: Vec<Cap>,
        vcap: Vec<Cap>,
        sources: Vec<usize>,
        sinks: Vec<usize>,
    ) -> Result<FlowNetwork, NetworkError> {
        let n = graph.vertex_count();
        if cap.len() != graph.dart_count() {
            return Err(NetworkError::Length {
                what: "dart capacities",
                expected: graph.dart_count(),
                got: cap.len(),
            });
        }
        if vcap.len() != n {
            return Err(NetworkError::Length {
                what: "vertex capacities",
                expected: n,
                got: vcap.len(),
            });
        }
        let mut roles = vec![Role::Inner; n];
        for &s in &sources {
            if s >= n {
                return Err(NetworkError::VertexOutOfRange(s));
            }
            roles[s] = Role::Source;
        }
        for &t in &sinks {
            if t >= n {
                return Err(NetworkError::VertexOutOfRange(t));
            }
            if roles[t] == Role::Source {
                return Err(NetworkError::TerminalOverlap(t));
            }
            roles[t] = Role::Sink;
        }
        Ok(FlowNetwork {
            graph,
            embedding,
            cap,
            vcap,
            sources,
            sinks,
            roles,
        })
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        let g = &self.graph;
        for d in g.darts() {
            if let Cap::Finite(c) = self.cap[d.0] {
                if c.is_negative() {
                    return Err(NetworkError::NegativeCapacity(d));
                }
            }
        }
        for v in 0..g.vertex_count() {
            match self.roles[v] {
                Role::Inner => {
                    if !self.vcap[v].is_positive() {
                        return Err(NetworkError::NonPositiveVertexCapacity(v));
                    }
                }
                role => {
                    if !self.vcap[v].is_infinite() {
                        return Err(NetworkError::CapacitatedTerminal(v));
                    }
                    for &d in g.out_darts(v) {
                        if role == Role::Source && self.cap[d.rev().0].is_positive() {
                            return Err(NetworkError::SourceHasInArc {
                                vertex: v,
                                dart: d.rev(),
                            });
                        }
                        if role == Role::Sink && self.cap[d.0].is_positive() {
                            return Err(NetworkError::SinkHasOutArc { sink: v, dart: d });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn role(&self, v: usize) -> Role {
        self.roles[v]
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.roles[v] == Role::Source
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.roles[v] == Role::Sink
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.roles[v] != Role::Inner
    }

    /// Number of terminals.
    pub fn k(&self) -> usize {
        self.sources.len() + self.sinks.len()
    }

    /// Largest finite vertex capacity (`U`), or zero if there is none.
    pub fn max_vertex_cap(&self) -> Q {
        self.vcap
            .iter()
            .filter_map(Cap::finite)
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn has_finite_vertex_caps(&self) -> bool {
        self.vcap.iter().any(|c| !c.is_infinite())
    }

    /// Largest vertex degree (`Δ`).
    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.graph.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// True when every finite arc and vertex capacity is an integer.
    pub fn is_integral(&self) -> bool {
        self.cap
            .iter()
            .chain(self.vcap.iter())
            .filter_map(Cap::finite)
            .all(|c| is_integral(&c))
    }

    /// The same network with every arc reversed and sources swapped with
    /// sinks. Edge ids and capacities are kept, so a flow here is a flow of
    /// `self` with the same per-edge nets read against reversed arcs; as a
    /// drawing, dart `d` here lies where dart `rev(d)` of `self` lies.
    pub fn reversed(&self) -> FlowNetwork {
        let graph = Arc::new(self.graph.reversed());
        let cap = self.cap.clone();
        let embedding = self.embedding.as_ref().map(|emb| {
            let rotation = emb
                .rotations()
                .iter()
                .map(|r| r.iter().map(|d| d.rev()).collect())
                .collect();
            // New dart `i` plays the role of old dart `i ^ 1`, and the face
            // through new `i` is the face through old `i ^ 1`.
            let markers: Vec<Dart> = emb
                .outer_faces()
                .iter()
                .map(|&f| emb.faces()[f][0].rev())
                .collect();
            Arc::new(
                Embedding::with_outer(graph.clone(), rotation, &emb.apices(), &markers)
                    .expect("reversal preserves the embedding"),
            )
        });
        FlowNetwork::new_unchecked(
            graph,
            embedding,
            cap,
            self.vcap.clone(),
            self.sinks.clone(),
            self.sources.clone(),
        )
        .expect("reversal preserves sizes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_network() -> FlowNetwork {
        let mut g = Graph::new(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        let cap = vec![Cap::int(3), Cap::zero(), Cap::int(2), Cap::zero()];
        let vcap = vec![Cap::Infinite, Cap::int(5), Cap::Infinite];
        FlowNetwork::new(Arc::new(g), None, cap, vcap, vec![0], vec![2]).unwrap()
    }

    #[test]
    fn terminal_rules_are_enforced() {
        let net = path_network();
        assert_eq!(net.k(), 2);
        let mut cap = net.cap.clone();
        cap[1] = Cap::int(1);
        let err = FlowNetwork::new(
            net.graph.clone(),
            None,
            cap,
            net.vcap.clone(),
            vec![0],
            vec![2],
        )
        .unwrap_err();
        assert!(matches!(err, NetworkError::SourceHasInArc { vertex: 0, .. }));
        let err = FlowNetwork::new(
            net.graph.clone(),
            None,
            net.cap.clone(),
            net.vcap.clone(),
            vec![0],
            vec![0],
        )
        .unwrap_err();
        assert_eq!(err, NetworkError::TerminalOverlap(0));
    }

    #[test]
    fn reversal_swaps_terminals_and_caps() {
        let net = path_network();
        let r = net.reversed();
        assert_eq!(r.sources, vec![2]);
        assert_eq!(r.sinks, vec![0]);
        assert_eq!(r.cap[0], Cap::int(3));
        assert_eq!(r.graph.tail(Dart(0)), 1);
        r.validate().unwrap();
    }
}
