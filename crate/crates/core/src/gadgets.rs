//! Derived networks and the translation of flows between them.
//!
//! Every derived network keeps the edges of the base network under the same
//! ids `0..m`, so restricting a flow is truncation. After them come the
//! terminal arcs `(s, s_i)` and `(t_i, t)` of the supersource `s` and the
//! supersink `t`, and then the gadget edges:
//!
//! * `G_st` adds only the terminal arcs.
//! * `G°` replaces each finitely capacitated vertex `v` of degree `d ≥ 2`
//!   by a cycle `v_1 .. v_d` of undirected edges of capacity `c(v)/2`, where
//!   `v_i` takes over the `i`-th dart of the rotation at `v` and `v_1` keeps
//!   the id of `v`.
//! * `G×` is `G°` with a chosen set of cycles collapsed to arcs
//!   `x^in -> x^out` of capacity `c(x)`; arcs into `x` end at `x^in` (which
//!   keeps the id of `x`) and arcs out of `x` start at `x^out`.
//! * `Ḡ` splits each finitely capacitated vertex into `v^in -> v^out`; it
//!   carries no embedding.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::cancel::cancel_generic;
use crate::embedding::{Embedding, EmbeddingError};
use crate::flow::{check_feasible, inflow, outflow, FeasibilityReport, Flow};
use crate::graph::{Dart, Graph};
use crate::maxflow::{MaxFlow, MaxFlowError};
use crate::network::{FlowNetwork, NetworkError};
use crate::num::{qr, Cap, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("the network has no embedding")]
    NotEmbedded,
    #[error("cannot extend the flow around vertex {vertex}: routed {routed} of {required}")]
    ExtensionFailure {
        vertex: usize,
        routed: Q,
        required: Q,
    },
    #[error("the flow is infeasible: {0:?}")]
    InfeasibleInput(FeasibilityReport),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    MaxFlow(#[from] MaxFlowError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    St,
    Extended,
    Collapsed,
}

/// The cycle `C_v` standing in for vertex `v`.
#[derive(Debug, Clone)]
pub struct CycleGadget {
    pub v: usize,
    /// `c(v)`; each cycle dart has capacity `c(v)/2`.
    pub cap: Q,
    /// `v_1 .. v_d`, with `v_1 = v`.
    pub vertices: Vec<usize>,
    /// Edge `c_i` runs from `v_i` to `v_{i+1}`.
    pub edges: Vec<usize>,
    /// Dart `d_i` of the base graph, leaving `v_i`.
    pub attach: Vec<Dart>,
}

/// A cycle collapsed back to the arc `x^in -> x^out`.
#[derive(Debug, Clone)]
pub struct CollapsedVertex {
    pub x: usize,
    pub vin: usize,
    pub vout: usize,
    pub edge: usize,
    pub cap: Q,
}

/// `G_st`, `G°` or `G×` together with its correspondence to the base network.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub net: FlowNetwork,
    pub base: Arc<Graph>,
    pub base_edges: usize,
    pub s: usize,
    pub t: usize,
    pub source_edges: Vec<usize>,
    pub sink_edges: Vec<usize>,
    pub cycles: Vec<CycleGadget>,
    pub collapsed: Vec<CollapsedVertex>,
    cycle_of: Vec<Option<usize>>,
    collapsed_of: Vec<Option<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Treatment {
    Keep,
    Cycle,
    Collapse,
}

pub fn build_gst(g: &FlowNetwork) -> Result<Gadget, GadgetError> {
    build(g, GadgetKind::St, |_| Treatment::Keep)
}

pub fn build_extended(g: &FlowNetwork) -> Result<Gadget, GadgetError> {
    build_extended_with(g, &[])
}

/// `G×` for the collapse set `xs` (`G°` when it is empty).
pub fn build_extended_with(g: &FlowNetwork, xs: &[usize]) -> Result<Gadget, GadgetError> {
    let kind = if xs.is_empty() {
        GadgetKind::Extended
    } else {
        GadgetKind::Collapsed
    };
    build(g, kind, |v| {
        if g.vcap[v].is_infinite() {
            Treatment::Keep
        } else if xs.contains(&v) {
            Treatment::Collapse
        } else if g.graph.degree(v) >= 2 {
            Treatment::Cycle
        } else {
            Treatment::Keep
        }
    })
}

fn build(
    g: &FlowNetwork,
    kind: GadgetKind,
    treat: impl Fn(usize) -> Treatment,
) -> Result<Gadget, GadgetError> {
    let emb = g.embedding.as_ref().ok_or(GadgetError::NotEmbedded)?;
    let base = &g.graph;
    let n = base.vertex_count();
    let m = base.edge_count();
    let s = n;
    let t = n + 1;
    let mut next = n + 2;
    let mut tail_of: Vec<usize> = base.darts().map(|d| base.tail(d)).collect();
    let mut cycles = Vec::new();
    let mut collapsed = Vec::new();
    let mut cycle_of = vec![None; n];
    let mut collapsed_of = vec![None; n];
    for v in 0..n {
        let c = match g.vcap[v] {
            Cap::Finite(c) => c,
            Cap::Infinite => continue,
        };
        match treat(v) {
            Treatment::Keep => {}
            Treatment::Collapse => {
                let vout = next;
                next += 1;
                for &d in base.out_darts(v) {
                    tail_of[d.0] = if d.is_forward() { vout } else { v };
                }
                collapsed_of[v] = Some(collapsed.len());
                collapsed.push(CollapsedVertex {
                    x: v,
                    vin: v,
                    vout,
                    edge: usize::MAX,
                    cap: c,
                });
            }
            Treatment::Cycle => {
                let attach = emb.rotation(v).to_vec();
                let mut vertices = vec![v];
                for _ in 1..attach.len() {
                    vertices.push(next);
                    next += 1;
                }
                for (i, d) in attach.iter().enumerate() {
                    tail_of[d.0] = vertices[i];
                }
                cycle_of[v] = Some(cycles.len());
                cycles.push(CycleGadget {
                    v,
                    cap: c,
                    vertices,
                    edges: Vec::new(),
                    attach,
                });
            }
        }
    }

    let mut graph = Graph::new(next);
    let mut cap = Vec::with_capacity(2 * m);
    for e in 0..m {
        graph.add_edge(tail_of[2 * e], tail_of[2 * e + 1]);
        cap.push(g.cap[2 * e]);
        cap.push(g.cap[2 * e + 1]);
    }
    let mut source_edges = Vec::new();
    for &si in &g.sources {
        source_edges.push(graph.add_edge(s, si).edge());
        cap.extend([Cap::Infinite, Cap::zero()]);
    }
    let mut sink_edges = Vec::new();
    for &ti in &g.sinks {
        sink_edges.push(graph.add_edge(ti, t).edge());
        cap.extend([Cap::Infinite, Cap::zero()]);
    }
    for cyc in &mut cycles {
        let half = Cap::Finite(cyc.cap * qr(1, 2));
        let d = cyc.vertices.len();
        for i in 0..d {
            cyc.edges
                .push(graph.add_edge(cyc.vertices[i], cyc.vertices[(i + 1) % d]).edge());
            cap.extend([half, half]);
        }
    }
    for col in &mut collapsed {
        col.edge = graph.add_edge(col.vin, col.vout).edge();
        cap.extend([Cap::Finite(col.cap), Cap::zero()]);
    }

    let mut is_apex = vec![false; next];
    is_apex[s] = true;
    is_apex[t] = true;
    for col in &collapsed {
        is_apex[col.vin] = true;
        is_apex[col.vout] = true;
    }
    let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); next];
    for v in 0..n {
        if cycle_of[v].is_none() && collapsed_of[v].is_none() {
            rotation[v] = emb
                .rotation(v)
                .iter()
                .copied()
                .filter(|&d| !is_apex[graph.head(d)])
                .collect();
        }
    }
    for cyc in &cycles {
        let d = cyc.vertices.len();
        for i in 0..d {
            if is_apex[graph.head(cyc.attach[i])] {
                // A cycle vertex facing a collapsed neighbour keeps only its
                // cycle darts.
                let c_i = Dart::forward(cyc.edges[i]);
                let c_prev = Dart::forward(cyc.edges[(i + d - 1) % d]);
                rotation[cyc.vertices[i]] = vec![c_i, c_prev.rev()];
                continue;
            }
            let c_i = Dart::forward(cyc.edges[i]);
            let c_prev = Dart::forward(cyc.edges[(i + d - 1) % d]);
            rotation[cyc.vertices[i]] = vec![cyc.attach[i], c_i, c_prev.rev()];
        }
    }
    let apices: Vec<usize> = (0..next).filter(|&v| is_apex[v]).collect();
    let graph = Arc::new(graph);
    let planar = |d: Dart| !is_apex[graph.tail(d)] && !is_apex[graph.head(d)];
    let markers: Vec<Dart> = emb
        .outer_faces()
        .iter()
        .filter_map(|&f| emb.faces()[f].iter().copied().find(|&d| planar(d)))
        .collect();
    let embedding = Embedding::with_outer(graph.clone(), rotation, &apices, &markers)?;
    let vcap = vec![Cap::Infinite; next];
    let net = FlowNetwork::new_unchecked(
        graph,
        Some(Arc::new(embedding)),
        cap,
        vcap,
        vec![s],
        vec![t],
    )?;
    Ok(Gadget {
        kind,
        net,
        base: base.clone(),
        base_edges: m,
        s,
        t,
        source_edges,
        sink_edges,
        cycles,
        collapsed,
        cycle_of,
        collapsed_of,
    })
}

impl Gadget {
    pub fn embedding(&self) -> &Embedding {
        self.net.embedding.as_ref().expect("gadgets are embedded")
    }

    pub fn cycle_for(&self, v: usize) -> Option<&CycleGadget> {
        self.cycle_of.get(v).copied().flatten().map(|i| &self.cycles[i])
    }

    pub fn collapsed_for(&self, v: usize) -> Option<&CollapsedVertex> {
        self.collapsed_of.get(v).copied().flatten().map(|i| &self.collapsed[i])
    }

    /// Values on the base edges.
    pub fn restrict(&self, f: &Flow) -> Flow {
        f.truncated(self.base_edges)
    }

    /// Base flow plus the terminal arcs that make `s` and `t` balance it;
    /// gadget edges are left at zero.
    pub fn lift_terminals(&self, base: &FlowNetwork, f: &Flow) -> Flow {
        let mut out = f.padded(self.net.edge_count());
        for (&e, &si) in self.source_edges.iter().zip(&base.sources) {
            out.set_net(e, outflow(&base.graph, f, si) - inflow(&base.graph, f, si));
        }
        for (&e, &ti) in self.sink_edges.iter().zip(&base.sinks) {
            out.set_net(e, inflow(&base.graph, f, ti) - outflow(&base.graph, f, ti));
        }
        out
    }

    /// Signed flow through a collapsed vertex: the net amount its
    /// in-arcs carry into it.
    pub fn through(&self, f: &Flow, x: usize) -> Q {
        self.base
            .out_darts(x)
            .iter()
            .filter(|d| !d.is_forward())
            .map(|d| f.net(d.edge()))
            .sum()
    }

    /// Extension of a feasible base flow: terminal arcs balanced, each
    /// cycle completed by an acyclic flow through the demand network, each
    /// collapsed arc carrying the flow through its vertex.
    pub fn extend(&self, base: &FlowNetwork, f: &Flow) -> Result<Flow, GadgetError> {
        let mut out = self.lift_terminals(base, f);
        for col in &self.collapsed {
            out.set_net(col.edge, self.through(f, col.x));
        }
        let all: Vec<usize> = (0..self.cycles.len()).collect();
        self.complete_cycles(&mut out, &all)?;
        Ok(out)
    }

    /// Fills the given cycles of `f` (whose base edges are set) with an
    /// acyclic flow that restores conservation at every cycle vertex.
    pub fn complete_cycles(&self, f: &mut Flow, which: &[usize]) -> Result<(), GadgetError> {
        if which.is_empty() {
            return Ok(());
        }
        let mut cap = vec![Cap::zero(); self.net.graph.dart_count()];
        let mut problem_sources = Vec::new();
        let mut problem_sinks = Vec::new();
        let mut required = Q::zero();
        for &i in which {
            let cyc = &self.cycles[i];
            for &e in &cyc.edges {
                f.set_net(e, Q::zero());
                cap[2 * e] = self.net.cap[2 * e];
                cap[2 * e + 1] = self.net.cap[2 * e + 1];
            }
            let mut balance = Q::zero();
            for (j, &d) in cyc.attach.iter().enumerate() {
                let b = f.along(d);
                balance += b;
                if b.is_negative() {
                    problem_sources.push((cyc.vertices[j], Cap::Finite(-b)));
                    required -= b;
                } else if b.is_positive() {
                    problem_sinks.push((cyc.vertices[j], Cap::Finite(b)));
                }
            }
            if !balance.is_zero() {
                return Err(GadgetError::ExtensionFailure {
                    vertex: cyc.v,
                    routed: Q::zero(),
                    required: balance.abs(),
                });
            }
        }
        let mut problem = MaxFlow::new(&self.net.graph, &cap);
        for &(v, c) in &problem_sources {
            problem = problem.source_stub(v, c);
        }
        for &(v, c) in &problem_sinks {
            problem = problem.sink_stub(v, c);
        }
        let out = problem.run()?;
        if out.value != required {
            let short = problem_sources
                .iter()
                .zip(&out.source_amounts)
                .find(|((_, c), got)| c.finite() != Some(**got))
                .map(|((v, _), _)| *v)
                .unwrap_or(self.cycles[which[0]].v);
            let owner = self
                .cycles
                .iter()
                .find(|c| c.vertices.contains(&short))
                .map_or(short, |c| c.v);
            return Err(GadgetError::ExtensionFailure {
                vertex: owner,
                routed: out.value,
                required,
            });
        }
        let routed = cancel_generic(&self.net.graph, &out.flow);
        f.add_assign(&routed);
        Ok(())
    }

    /// Moves a flow of this gadget to another gadget over the same base
    /// network: shared edges are copied, cycles that exist only in `target`
    /// are completed through the demand network, and collapsed arcs of
    /// `target` carry the flow through their vertex.
    pub fn transfer(&self, f: &Flow, target: &Gadget) -> Result<Flow, GadgetError> {
        let mut out = Flow::zero(target.net.edge_count());
        let shared = self.base_edges + self.source_edges.len() + self.sink_edges.len();
        for e in 0..shared {
            out.set_net(e, f.net(e));
        }
        let mut fresh = Vec::new();
        for (i, cyc) in target.cycles.iter().enumerate() {
            match self.cycle_for(cyc.v) {
                Some(mine) => {
                    for (&a, &b) in mine.edges.iter().zip(&cyc.edges) {
                        out.set_net(b, f.net(a));
                    }
                }
                None => fresh.push(i),
            }
        }
        for col in &target.collapsed {
            out.set_net(col.edge, self.through(f, col.x));
        }
        target.complete_cycles(&mut out, &fresh)?;
        Ok(out)
    }
}

/// `Ḡ`: vertex capacities turned into split arcs.
#[derive(Debug, Clone)]
pub struct SplitGadget {
    pub net: FlowNetwork,
    pub base_edges: usize,
    pub s: usize,
    pub t: usize,
    pub source_edges: Vec<usize>,
    pub sink_edges: Vec<usize>,
    /// For each base vertex with finite capacity: `(v^out, split edge)`.
    pub split: Vec<Option<(usize, usize)>>,
}

pub fn build_split(g: &FlowNetwork) -> Result<SplitGadget, GadgetError> {
    let base = &g.graph;
    let n = base.vertex_count();
    let m = base.edge_count();
    let s = n;
    let t = n + 1;
    let mut next = n + 2;
    let mut split = vec![None; n];
    let mut out_of: Vec<usize> = (0..n).collect();
    for v in 0..n {
        if !g.vcap[v].is_infinite() {
            out_of[v] = next;
            split[v] = Some((next, usize::MAX));
            next += 1;
        }
    }
    let mut graph = Graph::new(next);
    let mut cap = Vec::with_capacity(2 * m);
    for e in 0..m {
        let d = Dart::forward(e);
        graph.add_edge(out_of[base.tail(d)], base.head(d));
        cap.push(g.cap[2 * e]);
        cap.push(g.cap[2 * e + 1]);
    }
    let mut source_edges = Vec::new();
    for &si in &g.sources {
        source_edges.push(graph.add_edge(s, si).edge());
        cap.extend([Cap::Infinite, Cap::zero()]);
    }
    let mut sink_edges = Vec::new();
    for &ti in &g.sinks {
        sink_edges.push(graph.add_edge(out_of[ti], t).edge());
        cap.extend([Cap::Infinite, Cap::zero()]);
    }
    for v in 0..n {
        if let Some((vout, edge)) = split[v].as_mut() {
            *edge = graph.add_edge(v, *vout).edge();
            cap.extend([g.vcap[v], Cap::zero()]);
        }
    }
    let net = FlowNetwork::new_unchecked(
        Arc::new(graph),
        None,
        cap,
        vec![Cap::Infinite; next],
        vec![s],
        vec![t],
    )?;
    Ok(SplitGadget {
        net,
        base_edges: m,
        s,
        t,
        source_edges,
        sink_edges,
        split,
    })
}

impl SplitGadget {
    pub fn restrict(&self, f: &Flow) -> Flow {
        f.truncated(self.base_edges)
    }

    /// Extension of a feasible base flow; the split arc of `v` carries
    /// `f^in(v)`.
    pub fn extend(&self, base: &FlowNetwork, f: &Flow) -> Result<Flow, GadgetError> {
        let report = check_feasible(base, f);
        if !report.is_feasible() {
            return Err(GadgetError::InfeasibleInput(report));
        }
        let mut out = f.padded(self.net.edge_count());
        for (&e, &si) in self.source_edges.iter().zip(&base.sources) {
            out.set_net(e, outflow(&base.graph, f, si) - inflow(&base.graph, f, si));
        }
        for (&e, &ti) in self.sink_edges.iter().zip(&base.sinks) {
            out.set_net(e, inflow(&base.graph, f, ti) - outflow(&base.graph, f, ti));
        }
        for v in 0..self.split.len() {
            if let Some((_, edge)) = self.split[v] {
                out.set_net(edge, inflow(&base.graph, f, v));
            }
        }
        Ok(out)
    }
}
