//! Maximum flow with two sources and one sink (or one source and two
//! sinks) and arbitrary rational capacities.
//!
//! A maximum flow `f°` of `G°` with acyclic restriction has at most one
//! infeasible vertex `x`, a saddle of index 1. Rerouting flow around `x`
//! through the network `H` gives `f₃°`. If `f₃°` is only infeasible at `x`
//! it is almost feasible and the excess is removed along flow paths.
//! Otherwise the restriction of the cancelled `f° + β g°` moves linearly in
//! `β` and the root of the signed excess at `x` gives a feasible maximum
//! flow.

use num_traits::{One, Signed, Zero};

use super::bounded::acyclic_extended_flow;
use super::{invariant, Solution, SolveError};
use crate::cancel::cancel_generic;
use crate::flow::{inflow, infeasible_vertices, is_acyclic, is_feasible, outflow, value, Flow};
use crate::gadgets::{build_extended, Gadget};
use crate::graph::{Dart, Graph};
use crate::maxflow::MaxFlow;
use crate::network::FlowNetwork;
use crate::num::{min_q, qr, Cap, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K3Branch {
    /// The initial flow was already feasible.
    Initial,
    /// The flow after rerouting through `H` was feasible.
    Rerouted,
    /// The rerouted flow was almost feasible and its excess was removed.
    AlmostFeasible,
    /// The excess moved to another vertex; the interpolation root was used.
    Interpolated,
}

#[derive(Debug, Clone)]
pub struct K3Report {
    /// The network was reversed to get two sources.
    pub reversed: bool,
    pub extended_value: Q,
    pub branch: K3Branch,
    /// The infeasible vertex of the initial flow.
    pub saddle: Option<usize>,
    /// The infeasible vertex after rerouting, when there is one.
    pub second: Option<usize>,
    /// Excess removed in the almost-feasible branch.
    pub delta: Option<Q>,
    pub beta0: Option<Q>,
    /// Sampled `β` and whether the cancelled flow at `β` equals the linear
    /// interpolation of its endpoints on every arc.
    pub linearity: Vec<(Q, bool)>,
    /// The removal flows into and out of the excess vertex share no arc.
    pub disjoint_supports: Option<bool>,
    /// Every cancellation left an acyclic restriction.
    pub cancel_acyclic: bool,
}

pub fn solve_k3(net: &FlowNetwork) -> Result<(Solution, K3Report), SolveError> {
    match (net.sources.len(), net.sinks.len()) {
        (2, 1) => two_sources(net, false),
        (1, 2) => {
            let rev = net.reversed();
            let (sol, report) = two_sources(&rev, true)?;
            let v = value(net, &sol.flow)?;
            Ok((
                Solution {
                    flow: sol.flow,
                    value: v,
                },
                report,
            ))
        }
        (sources, sinks) => Err(SolveError::WrongTerminalCount { sources, sinks }),
    }
}

/// Maximum flow of `G°` from `s₁`, then from `s₂` in the residual network,
/// with the supersource arcs set to match.
pub fn initial_flow(net: &FlowNetwork, ext: &Gadget) -> Result<Flow, SolveError> {
    let g = &ext.net.graph;
    let cap = &ext.net.cap;
    let f1 = MaxFlow::new(g, cap)
        .source(net.sources[0])
        .sink(ext.t)
        .run()?
        .flow;
    let f2 = MaxFlow::new(g, cap)
        .source(net.sources[1])
        .sink(ext.t)
        .base(&f1)
        .run()?
        .flow;
    let mut f = f1.add(&f2);
    for (&e, &si) in ext.source_edges.iter().zip(&net.sources) {
        f.set_net(e, outflow(g, &f, si) - inflow(g, &f, si));
    }
    Ok(f)
}

/// Positive darts around `x` grouped into maximal runs of equal direction,
/// in rotation order: `(is_in, darts)`.
fn runs(net: &FlowNetwork, f: &Flow, x: usize) -> Vec<(bool, Vec<Dart>)> {
    let emb = net.embedding.as_ref().expect("plane network");
    let marked: Vec<(bool, Dart)> = emb
        .rotation(x)
        .iter()
        .filter(|&&d| !f.along(d).is_zero())
        .map(|&d| (f.along(d).is_negative(), d))
        .collect();
    let k = marked.len();
    let start = (0..k).find(|&i| marked[i].0 != marked[(i + k - 1) % k].0);
    let Some(start) = start else {
        return vec![];
    };
    let mut out: Vec<(bool, Vec<Dart>)> = Vec::new();
    for i in 0..k {
        let (is_in, d) = marked[(start + i) % k];
        match out.last_mut() {
            Some((dir, ds)) if *dir == is_in => ds.push(d),
            _ => out.push((is_in, vec![d])),
        }
    }
    out
}

/// The network `H` on the edge ids of `G°`: the residual network of `fo`
/// with `C_x`, `s` and `t` removed, and `x` replaced by two sources (one per
/// run of in-darts) and two sinks (one per run of out-darts). Returns the
/// graph, its capacities, and the sources and sinks.
fn build_h(
    net: &FlowNetwork,
    ext: &Gadget,
    fo: &Flow,
    f: &Flow,
    x: usize,
) -> Result<(Graph, Vec<Cap>, Vec<usize>, Vec<usize>), SolveError> {
    let run_list = runs(net, f, x);
    let ins = run_list.iter().filter(|r| r.0).count();
    let outs = run_list.len() - ins;
    invariant(ins == 2 && outs == 2, || {
        format!("vertex {x} has {ins} in-runs and {outs} out-runs")
    })?;
    let go = &ext.net.graph;
    let n = go.vertex_count();
    let mut terminal_of = vec![usize::MAX; net.graph.dart_count()];
    let (mut next_in, mut next_out) = (0, 0);
    for (is_in, darts) in &run_list {
        let id = if *is_in {
            next_in += 1;
            n + (next_in - 1).min(1)
        } else {
            next_out += 1;
            n + 2 + (next_out - 1).min(1)
        };
        for d in darts {
            terminal_of[d.0] = id;
        }
    }
    let cyc = ext.cycle_for(x).expect("infeasible vertices have a cycle");
    let mut skip = vec![false; go.edge_count()];
    for &e in cyc.edges.iter().chain(&ext.source_edges).chain(&ext.sink_edges) {
        skip[e] = true;
    }
    let base = &net.graph;
    let mut h = Graph::new(n + 4);
    let mut cap = Vec::with_capacity(go.dart_count());
    for e in 0..go.edge_count() {
        let d = Dart::forward(e);
        let (tail, head) = (go.tail(d), go.head(d));
        let x_side = if e < ext.base_edges && base.head(d) == x {
            Some(d.rev())
        } else if e < ext.base_edges && base.tail(d) == x {
            Some(d)
        } else {
            None
        };
        if let Some(leaving) = x_side {
            let t = match terminal_of[leaving.0] {
                usize::MAX => n,
                t => t,
            };
            let amount = Cap::Finite(fo.net(e).abs());
            if leaving.is_forward() {
                h.add_edge(t, head);
            } else {
                h.add_edge(tail, t);
            }
            cap.extend([Cap::zero(), amount]);
        } else if skip[e] {
            h.add_edge(tail, head);
            cap.extend([Cap::zero(), Cap::zero()]);
        } else {
            h.add_edge(tail, head);
            let y = fo.net(e);
            cap.extend([ext.net.cap[2 * e].minus(&y), ext.net.cap[2 * e + 1].plus(&y)]);
        }
    }
    Ok((h, cap, vec![n, n + 1], vec![n + 2, n + 3]))
}

/// Removes `δ` units through `x` from the acyclic flow `f`: `δ` units from
/// the sources into `x`, preferring `s₁`, and `δ` units from `x` to the sink,
/// all inside the flow graph of `f`.
pub fn almost_feasible_fixup(
    net: &FlowNetwork,
    f: &Flow,
    x: usize,
    delta: Q,
) -> Result<(Flow, bool), SolveError> {
    if delta.is_zero() {
        return Ok((f.clone(), true));
    }
    let g = &net.graph;
    let cap: Vec<Cap> = g.darts().map(|d| Cap::Finite(f.on(d))).collect();
    let (s1, s2, t) = (net.sources[0], net.sources[1], net.sinks[0]);
    let want1 = min_q(&(outflow(g, f, s1) - inflow(g, f, s1)), &delta);
    let g1 = MaxFlow::new(g, &cap)
        .source_stub(s1, Cap::Finite(want1))
        .sink(x)
        .run()?;
    let g2 = MaxFlow::new(g, &cap)
        .source_stub(s2, Cap::Finite(delta - g1.value))
        .sink(x)
        .base(&g1.flow)
        .run()?;
    if g1.value + g2.value < delta {
        return Err(SolveError::FixupShortfall {
            routed: g1.value + g2.value,
            required: delta,
        });
    }
    let g3 = MaxFlow::new(g, &cap)
        .source_stub(x, Cap::Finite(delta))
        .sink(t)
        .run()?;
    if g3.value < delta {
        return Err(SolveError::FixupShortfall {
            routed: g3.value,
            required: delta,
        });
    }
    let into = g1.flow.add(&g2.flow);
    let disjoint = (0..g.edge_count()).all(|e| into.net(e).is_zero() || g3.flow.net(e).is_zero());
    Ok((f.sub(&into).sub(&g3.flow), disjoint))
}

/// Root of the line through `(0, s0)` and `(1, s1)`.
pub fn beta_root(s0: Q, s1: Q) -> Result<Q, SolveError> {
    if s0 == s1 {
        return Err(SolveError::DegenerateDerivative);
    }
    Ok(s0 / (s0 - s1))
}

/// The restriction of the cancelled `fo + β·go`.
fn cancelled_at(ext: &Gadget, fo: &Flow, go: &Flow, beta: Q) -> Result<(Flow, bool), SolveError> {
    let (f, acyclic) = acyclic_extended_flow(ext, &fo.add(&go.scale(beta)?))?;
    Ok((ext.restrict(&f), acyclic))
}

fn two_sources(net: &FlowNetwork, reversed: bool) -> Result<(Solution, K3Report), SolveError> {
    let ext = build_extended(net)?;
    let fo = initial_flow(net, &ext)?;
    let extended_value = value(&ext.net, &fo)?;
    let (fo, acyclic) = acyclic_extended_flow(&ext, &fo)?;
    let mut report = K3Report {
        reversed,
        extended_value,
        branch: K3Branch::Initial,
        saddle: None,
        second: None,
        delta: None,
        beta0: None,
        linearity: Vec::new(),
        disjoint_supports: None,
        cancel_acyclic: acyclic,
    };
    let f = ext.restrict(&fo);
    if !acyclic {
        return Err(SolveError::Invariant("cancellation left a flow cycle".into()));
    }
    let xs = infeasible_vertices(net, &f);
    let x = match xs.as_slice() {
        [] => return finish(net, f, report),
        [x] => *x,
        _ => {
            return Err(SolveError::Invariant(format!(
                "{} infeasible vertices with three terminals",
                xs.len()
            )))
        }
    };
    report.saddle = Some(x);

    let (h, cap, sources, sinks) = build_h(net, &ext, &fo, &f, x)?;
    let gh = MaxFlow::new(&h, &cap).sources(sources).sinks(sinks).run()?;
    let gh = cancel_generic(&h, &gh.flow);
    let mut rerouted = fo.add(&gh);
    let idx = ext.cycles.iter().position(|c| c.v == x).expect("cycle of x");
    ext.complete_cycles(&mut rerouted, &[idx])?;
    let go = rerouted.sub(&fo);
    let (f0, a0) = cancelled_at(&ext, &fo, &go, Q::zero())?;
    let (f3, a1) = cancelled_at(&ext, &fo, &go, Q::one())?;
    report.cancel_acyclic &= a0 && a1;
    for beta in [qr(1, 4), qr(1, 2), qr(3, 4)] {
        let (fb, ab) = cancelled_at(&ext, &fo, &go, beta)?;
        report.cancel_acyclic &= ab;
        let linear = (0..fb.edge_count())
            .all(|e| fb.net(e) == (Q::one() - beta) * f0.net(e) + beta * f3.net(e));
        report.linearity.push((beta, linear));
    }
    let ys = infeasible_vertices(net, &f3);
    report.branch = K3Branch::Rerouted;
    let y = match ys.as_slice() {
        [] => return finish(net, f3, report),
        [y] => *y,
        _ => {
            return Err(SolveError::Invariant(format!(
                "{} infeasible vertices after rerouting",
                ys.len()
            )))
        }
    };
    report.second = Some(y);
    let c = net.vcap[x].finite().expect("infeasible vertices are capacitated");

    if y == x {
        report.branch = K3Branch::AlmostFeasible;
        let delta = inflow(&net.graph, &f3, x) - c;
        report.delta = Some(delta);
        let (flow, disjoint) = almost_feasible_fixup(net, &f3, x, delta)?;
        report.disjoint_supports = Some(disjoint);
        return finish(net, flow, report);
    }

    report.branch = K3Branch::Interpolated;
    let s0 = inflow(&net.graph, &f0, x) - c;
    let s1 = inflow(&net.graph, &f3, x) - c;
    let beta0 = beta_root(s0, s1)?;
    report.beta0 = Some(beta0);
    let (flow, ab) = cancelled_at(&ext, &fo, &go, beta0)?;
    report.cancel_acyclic &= ab;
    finish(net, flow, report)
}

fn finish(
    net: &FlowNetwork,
    flow: Flow,
    report: K3Report,
) -> Result<(Solution, K3Report), SolveError> {
    if !is_feasible(net, &flow) {
        return Err(SolveError::Invariant(format!(
            "{:?} branch produced an infeasible flow",
            report.branch
        )));
    }
    invariant(is_acyclic(&net.graph, &flow), || "result has a flow cycle".into())?;
    let v = value(net, &flow)?;
    Ok((Solution { flow, value: v }, report))
}
