//! Rounding a fractional flow of integral value to an integral flow.
//!
//! Each edge with fractional net `x` may move up to `⌈x⌉` or down to `⌊x⌋`.
//! The edges with fractional net form a graph in which every vertex has
//! degree zero or at least two once the terminals are closed up through a
//! virtual source hub `σ` and sink hub `τ` joined by an arc carrying the
//! (integral) value. Pushing the bottleneck around any undirected cycle of
//! that graph makes at least one edge integral, keeps conservation
//! everywhere, and never touches the `τ -> σ` arc, so the value is kept.

use num_traits::{One, Zero};

use crate::flow::{inflow, outflow, Flow};
use crate::graph::{Dart, Graph};
use crate::num::{is_integral, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RoundingError {
    #[error("flow value {0} is not integral")]
    NonIntegralValue(Q),
    #[error("no cycle in the fractional residual graph")]
    NoCycle,
    #[error("rounding unit must be positive")]
    BadUnit,
}

#[derive(Debug, Clone)]
pub struct Rounded {
    pub flow: Flow,
    /// Number of cycle pushes performed.
    pub iterations: usize,
}

/// The darts of the fractional residual graph with their capacities: for an
/// edge with fractional part `δ > 0`, its forward dart gets `1 - δ` and its
/// reverse dart gets `δ`.
pub fn fractional_residual(f: &Flow) -> Vec<(Dart, Q)> {
    let mut out = Vec::new();
    for (e, x) in f.nets().iter().enumerate() {
        let delta = x - x.floor();
        if !delta.is_zero() {
            out.push((Dart::forward(e), Q::one() - delta));
            out.push((Dart::forward(e).rev(), delta));
        }
    }
    out
}

struct FracEdge {
    tail: usize,
    head: usize,
    x: Q,
}

/// Rounds `f` to an integral flow with the same value and the same
/// balance at every non-terminal vertex, moving every edge by less than one.
pub fn round_flow(
    g: &Graph,
    f: &Flow,
    sources: &[usize],
    sinks: &[usize],
) -> Result<Rounded, RoundingError> {
    let n = g.vertex_count();
    let m = f.edge_count();
    let sigma = n;
    let tau = n + 1;
    let mut edges: Vec<FracEdge> = (0..m)
        .map(|e| {
            let d = Dart::forward(e);
            FracEdge {
                tail: g.tail(d),
                head: g.head(d),
                x: f.net(e),
            }
        })
        .collect();
    let mut value = Q::zero();
    for &s in sources {
        let x = outflow(g, f, s) - inflow(g, f, s);
        value += x;
        edges.push(FracEdge { tail: sigma, head: s, x });
    }
    for &t in sinks {
        let x = inflow(g, f, t) - outflow(g, f, t);
        edges.push(FracEdge { tail: t, head: tau, x });
    }
    if !is_integral(&value) {
        return Err(RoundingError::NonIntegralValue(value));
    }
    edges.push(FracEdge {
        tail: tau,
        head: sigma,
        x: value,
    });

    let fractional = |e: &FracEdge| !is_integral(&e.x);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
    for (i, e) in edges.iter().enumerate() {
        if fractional(e) {
            adj[e.tail].push(i);
            adj[e.head].push(i);
        }
    }
    let mut on_path = vec![usize::MAX; n + 2];
    let mut iterations = 0;
    let mut scan = 0;
    loop {
        while scan < edges.len() && !fractional(&edges[scan]) {
            scan += 1;
        }
        if scan == edges.len() {
            break;
        }
        // Undirected walk that never turns straight back along the edge it
        // arrived by, until it closes a cycle.
        let start = edges[scan].tail;
        let mut vertices = vec![start];
        let mut steps: Vec<(usize, bool)> = Vec::new();
        on_path[start] = 0;
        let cycle_from = loop {
            let v = *vertices.last().unwrap();
            let arrived = steps.last().map(|&(e, _)| e);
            adj[v].retain(|&e| fractional(&edges[e]));
            let e = adj[v]
                .iter()
                .copied()
                .filter(|&e| Some(e) != arrived)
                .min()
                .ok_or(RoundingError::NoCycle)?;
            let forward = edges[e].tail == v;
            let w = if forward { edges[e].head } else { edges[e].tail };
            steps.push((e, forward));
            if on_path[w] != usize::MAX {
                break on_path[w];
            }
            on_path[w] = vertices.len();
            vertices.push(w);
        };
        for &v in &vertices {
            on_path[v] = usize::MAX;
        }
        let cycle = &steps[cycle_from..];
        let room = |&(e, forward): &(usize, bool)| {
            let x = edges[e].x;
            if forward {
                x.ceil() - x
            } else {
                x - x.floor()
            }
        };
        let amount = cycle.iter().map(room).min().unwrap();
        for &(e, forward) in cycle {
            if forward {
                edges[e].x += amount;
            } else {
                edges[e].x -= amount;
            }
        }
        iterations += 1;
    }
    let net = edges[..m].iter().map(|e| e.x).collect();
    Ok(Rounded {
        flow: Flow::from_net(net),
        iterations,
    })
}

/// Rounds to multiples of `unit`: scale by `1/unit`, round, scale back.
pub fn round_to_lattice(
    g: &Graph,
    f: &Flow,
    sources: &[usize],
    sinks: &[usize],
    unit: Q,
) -> Result<Rounded, RoundingError> {
    if unit <= Q::zero() {
        return Err(RoundingError::BadUnit);
    }
    let scaled = f.scale(Q::one() / unit).expect("positive scale");
    let r = round_flow(g, &scaled, sources, sinks)?;
    Ok(Rounded {
        flow: r.flow.scale(unit).expect("positive scale"),
        iterations: r.iterations,
    })
}
