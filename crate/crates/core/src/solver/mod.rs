//! The three maximum-flow solvers and the steps they share.
//!
//! * [`bounded`]: integer capacities, extended-network flow made acyclic,
//!   excess stripped, then re-augmented in the split network.
//! * [`scaling`]: integer capacities of any size, by binary search on the
//!   value and repeated excess contraction.
//! * [`k3`]: three terminals and rational capacities.
//!
//! Setting `PVFLOW_CHECKS=1` turns on internal invariant checks, which
//! report violations as [`SolveError::Invariant`].

pub mod bounded;
pub mod k3;
pub mod scaling;

use num_traits::{Signed, Zero};

use crate::flow::{check_feasible, excess, infeasible_vertices, Flow, FlowError};
use crate::gadgets::{build_split, GadgetError};
use crate::graph::Dart;
use crate::maxflow::{MaxFlow, MaxFlowError};
use crate::network::FlowNetwork;
use crate::num::{min_q, Q};
use crate::rounding::{round_flow, RoundingError};

pub use bounded::{solve_bounded, BoundedReport};
pub use k3::{almost_feasible_fixup, beta_root, initial_flow, solve_k3, K3Branch, K3Report};
pub use scaling::{iteration_cap, solve_scaling, try_value, GuessLog, PhaseLog, ScalingReport, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    MaxFlow(#[from] MaxFlowError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
    #[error("capacities must be integers for this solver")]
    NonIntegral,
    #[error("expected two sources and one sink (or the reverse), got {sources} and {sinks}")]
    WrongTerminalCount { sources: usize, sinks: usize },
    #[error("no flow path through vertex {0}")]
    PathNotFound(usize),
    #[error("could route only {routed} of the required {required} out of the excess vertex")]
    FixupShortfall { routed: Q, required: Q },
    #[error("excess at the saddle does not change along the interpolation")]
    DegenerateDerivative,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// A maximum feasible flow and its value.
#[derive(Debug, Clone)]
pub struct Solution {
    pub flow: Flow,
    pub value: Q,
}

/// True when `PVFLOW_CHECKS` asks for internal invariant checks.
pub fn checks_enabled() -> bool {
    std::env::var("PVFLOW_CHECKS").is_ok_and(|v| !v.is_empty() && v != "0")
}

pub(crate) fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<(), SolveError> {
    if ok || !checks_enabled() {
        Ok(())
    } else {
        Err(SolveError::Invariant(what()))
    }
}

/// The result of [`strip_excess`].
#[derive(Debug, Clone)]
pub struct Stripped {
    pub flow: Flow,
    /// Total amount removed, equal to the sum of the initial excesses.
    pub removed: Q,
}

/// Removes `ex(f, x)` units through every infeasible `x` along a
/// source-to-`x`-to-sink route of the positive-flow graph. `f` must conserve
/// and be acyclic on `net`. Each round removes the bottleneck of one route,
/// capped by the remaining excess.
pub fn strip_excess(net: &FlowNetwork, f: &Flow) -> Result<Stripped, SolveError> {
    let g = &net.graph;
    let mut f = f.clone();
    let mut removed = Q::zero();
    let first = |f: &Flow, darts: &mut dyn Iterator<Item = Dart>| {
        darts.filter(|&d| f.on(d).is_positive()).min()
    };
    for x in infeasible_vertices(net, &f) {
        let mut rest = excess(net, &f, x);
        while rest.is_positive() {
            let mut route = Vec::new();
            let mut v = x;
            while !net.is_source(v) {
                let d = first(&f, &mut g.out_darts(v).iter().map(|d| d.rev()))
                    .ok_or(SolveError::PathNotFound(x))?;
                route.push(d);
                v = g.tail(d);
                if route.len() > g.vertex_count() {
                    return Err(SolveError::PathNotFound(x));
                }
            }
            let mut v = x;
            while !net.is_sink(v) {
                let d = first(&f, &mut g.out_darts(v).iter().copied())
                    .ok_or(SolveError::PathNotFound(x))?;
                route.push(d);
                v = g.head(d);
                if route.len() > 2 * g.vertex_count() {
                    return Err(SolveError::PathNotFound(x));
                }
            }
            let amount = route
                .iter()
                .map(|&d| f.on(d))
                .fold(rest, |a, b| min_q(&a, &b));
            for &d in &route {
                f.push(d, -amount);
            }
            rest -= amount;
            removed += amount;
        }
    }
    Ok(Stripped { flow: f, removed })
}

/// The result of [`augment_in_split`].
#[derive(Debug, Clone)]
pub struct Augmented {
    pub flow: Flow,
    /// Value added on top of the input flow.
    pub gain: Q,
}

/// Extends the feasible flow `f` to the split network, adds a maximum flow
/// of its residual network (of value at most `limit`, if given) and
/// restricts back. With integer capacities the split-network flow is rounded
/// to integers first, so the result is integral.
pub fn augment_in_split(
    net: &FlowNetwork,
    f: &Flow,
    limit: Option<Q>,
) -> Result<Augmented, SolveError> {
    let split = build_split(net)?;
    let base = split.extend(net, f)?;
    let mut search = MaxFlow::new(&split.net.graph, &split.net.cap)
        .source(split.s)
        .sink(split.t)
        .base(&base);
    if let Some(l) = limit {
        search = search.limit(l);
    }
    let out = search.run()?;
    let mut total = base.add(&out.flow);
    if net.is_integral() {
        total = round_flow(&split.net.graph, &total, &[split.s], &[split.t])?.flow;
    }
    let flow = split.restrict(&total);
    let report = check_feasible(net, &flow);
    invariant(report.is_feasible(), || {
        format!("split-network flow restricts to an infeasible flow: {report:?}")
    })?;
    Ok(Augmented {
        flow,
        gain: out.value,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::embedding::Embedding;
    use crate::flow::{is_feasible, value};
    use crate::graph::Graph;
    use crate::num::{q, Cap};

    /// Sources 0, 1 and sink 2 joined through hub 3 of capacity 3.
    fn star() -> FlowNetwork {
        let mut g = Graph::new(4);
        let a = g.add_edge(0, 3);
        let b = g.add_edge(1, 3);
        let c = g.add_edge(3, 2);
        let rot = vec![vec![a], vec![b], vec![c.rev()], vec![a.rev(), b.rev(), c]];
        let graph = Arc::new(g);
        let emb = Embedding::new(graph.clone(), rot, &[]).unwrap();
        let cap = vec![Cap::int(4), Cap::zero(), Cap::int(4), Cap::zero(), Cap::int(8), Cap::zero()];
        let vcap = vec![Cap::Infinite, Cap::Infinite, Cap::Infinite, Cap::int(3)];
        FlowNetwork::new(graph, Some(Arc::new(emb)), cap, vcap, vec![0, 1], vec![2]).unwrap()
    }

    #[test]
    fn strip_removes_exactly_the_excess() {
        let net = star();
        let f = Flow::from_net(vec![q(2), q(3), q(5)]);
        let s = strip_excess(&net, &f).unwrap();
        assert_eq!(s.removed, q(2));
        assert!(is_feasible(&net, &s.flow));
        assert_eq!(value(&net, &s.flow).unwrap(), q(3));
    }

    #[test]
    fn strip_leaves_feasible_flows_alone() {
        let net = star();
        let f = Flow::from_net(vec![q(1), q(1), q(2)]);
        let s = strip_excess(&net, &f).unwrap();
        assert_eq!(s.flow, f);
        assert!(s.removed.is_zero());
    }

    #[test]
    fn augmentation_reaches_the_maximum() {
        let net = star();
        let a = augment_in_split(&net, &Flow::from_net(vec![q(1), q(0), q(1)]), None).unwrap();
        assert_eq!(a.gain, q(2));
        assert_eq!(value(&net, &a.flow).unwrap(), q(3));
    }
}
