//! Independent reference computations shared by the integration tests.
//! Nothing here goes through the crate's gadgets or max-flow engine.

#![allow(dead_code)]

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use pvflow::embedding::Embedding;
use pvflow::flow::Flow;
use pvflow::graph::Dart;
use pvflow::harness::{generate, GenParams, Instance, Regime};
use pvflow::{Cap, FlowNetwork, Q};

pub fn q(x: i128) -> Q {
    Q::from_integer(x)
}

pub fn qr(a: i128, b: i128) -> Q {
    Q::new(a, b)
}

pub fn instance(seed: u64, n: usize, k: usize, u: i128, regime: Regime) -> Instance {
    let p = GenParams {
        n,
        k,
        u,
        regime,
        ..GenParams::default()
    };
    generate(seed, &p).expect("valid parameters")
}

/// Capacitated arcs `(tail, head, cap)`, `None` meaning unbounded.
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize, Option<Q>)>,
    pub s: usize,
    pub t: usize,
}

fn cap_of(c: &Cap) -> Option<Q> {
    c.finite()
}

/// Vertex splitting done by hand: `v` becomes `2v -> 2v+1`, every dart
/// with positive capacity becomes an arc `tail_out -> head_in`, and a super
/// source and sink join the terminals.
pub fn split_digraph(net: &FlowNetwork) -> Digraph {
    let n = net.vertex_count();
    let g = &net.graph;
    let mut arcs = Vec::new();
    for v in 0..n {
        arcs.push((2 * v, 2 * v + 1, cap_of(&net.vcap[v])));
    }
    for d in g.darts() {
        let c = &net.cap[d.0];
        if *c != Cap::zero() {
            arcs.push((2 * g.tail(d) + 1, 2 * g.head(d), cap_of(c)));
        }
    }
    let (s, t) = (2 * n, 2 * n + 1);
    for &v in &net.sources {
        arcs.push((s, 2 * v, None));
    }
    for &v in &net.sinks {
        arcs.push((2 * v + 1, t, None));
    }
    Digraph {
        n: 2 * n + 2,
        arcs,
        s,
        t,
    }
}

/// The same network without vertex capacities.
pub fn plain_digraph(net: &FlowNetwork) -> Digraph {
    let mut d = split_digraph(net);
    for v in 0..net.vertex_count() {
        d.arcs[v].2 = None;
    }
    d
}

/// Exact Edmonds–Karp on a dense residual matrix.
pub fn edmonds_karp(d: &Digraph) -> Q {
    let finite: Q = d.arcs.iter().filter_map(|a| a.2).sum();
    let big = finite + q(1);
    let mut r = vec![vec![Q::zero(); d.n]; d.n];
    for &(u, v, c) in &d.arcs {
        r[u][v] += c.unwrap_or(big);
    }
    let mut total = Q::zero();
    loop {
        let mut prev = vec![usize::MAX; d.n];
        prev[d.s] = d.s;
        let mut queue = VecDeque::from([d.s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..d.n {
                if prev[v] == usize::MAX && r[u][v].is_positive() {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[d.t] == usize::MAX {
            return total;
        }
        let mut bottleneck = big;
        let mut v = d.t;
        while v != d.s {
            let u = prev[v];
            bottleneck = bottleneck.min(r[u][v]);
            v = u;
        }
        let mut v = d.t;
        while v != d.s {
            let u = prev[v];
            r[u][v] -= bottleneck;
            r[v][u] += bottleneck;
            v = u;
        }
        total += bottleneck;
    }
}

/// Minimum `s`-`t` cut by enumerating every vertex subset. `None` when every
/// cut is unbounded.
pub fn brute_min_cut(d: &Digraph) -> Option<Q> {
    let others: Vec<usize> = (0..d.n).filter(|&v| v != d.s && v != d.t).collect();
    assert!(others.len() <= 20, "too many vertices to enumerate");
    let mut best: Option<Q> = None;
    for mask in 0u32..(1 << others.len()) {
        let mut side = vec![false; d.n];
        side[d.s] = true;
        for (i, &v) in others.iter().enumerate() {
            side[v] = mask & (1 << i) != 0;
        }
        let mut cut = Some(Q::zero());
        for &(u, v, c) in &d.arcs {
            if side[u] && !side[v] {
                cut = match (cut, c) {
                    (Some(a), Some(c)) => Some(a + c),
                    _ => None,
                };
            }
        }
        if let Some(c) = cut {
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    best
}

/// Darts whose face is in `region` and whose reversal's face is not: the
/// boundary of `region`, traced so that the region lies on the face side.
pub fn region_boundary(emb: &Embedding, region: &[bool]) -> Vec<Dart> {
    emb.graph()
        .darts()
        .filter(|&d| emb.is_planar_dart(d))
        .filter(|&d| {
            let (l, r) = (emb.left_face(d).unwrap(), emb.right_face(d).unwrap());
            region[l] && !region[r]
        })
        .collect()
}

/// Searches every set of non-outer faces for one whose boundary consists
/// of positive residual darts. With `face_side == true` the boundary is
/// traced with the region on its left (counter-clockwise), otherwise with
/// the region on its right (clockwise). Returns the offending face set.
pub fn positive_boundary_region(
    emb: &Embedding,
    residual: &[Q],
    face_side: bool,
) -> Option<Vec<usize>> {
    let inner: Vec<usize> = (0..emb.face_count()).filter(|&f| !emb.is_outer(f)).collect();
    assert!(inner.len() <= 16, "too many faces to enumerate");
    for mask in 1u32..(1 << inner.len()) {
        let mut region = vec![false; emb.face_count()];
        for (i, &f) in inner.iter().enumerate() {
            region[f] = mask & (1 << i) != 0;
        }
        let boundary = region_boundary(emb, &region);
        if boundary.is_empty() {
            continue;
        }
        let ok = boundary.iter().all(|&d| {
            let d = if face_side { d } else { d.rev() };
            residual[d.0].is_positive()
        });
        if ok {
            return Some(
                inner
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &f)| f)
                    .collect(),
            );
        }
    }
    None
}

/// Positive-flow darts contain no directed cycle (checked by repeatedly
/// removing vertices without positive in-darts).
pub fn is_dag(net: &FlowNetwork, f: &Flow) -> bool {
    let g = &net.graph;
    let n = g.vertex_count();
    let mut indeg = vec![0usize; n];
    for d in g.darts() {
        if f.along(d).is_positive() {
            indeg[g.head(d)] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &d in g.out_darts(v) {
            if f.along(d).is_positive() {
                indeg[g.head(d)] -= 1;
                if indeg[g.head(d)] == 0 {
                    stack.push(g.head(d));
                }
            }
        }
    }
    removed == n
}

/// Net inflow minus outflow at `v`, computed from the edge list.
pub fn balance(net: &FlowNetwork, f: &Flow, v: usize) -> Q {
    let g = &net.graph;
    let mut b = Q::zero();
    for e in 0..g.edge_count() {
        let d = Dart::forward(e);
        if g.head(d) == v {
            b += f.net(e);
        }
        if g.tail(d) == v {
            b -= f.net(e);
        }
    }
    b
}

/// Inflow at `v`, summing positive parts only.
pub fn inflow(net: &FlowNetwork, f: &Flow, v: usize) -> Q {
    let g = &net.graph;
    g.darts()
        .filter(|&d| g.head(d) == v && f.along(d).is_positive())
        .map(|d| f.along(d))
        .sum()
}

/// Source outflow minus inflow summed over the sources.
pub fn flow_value(net: &FlowNetwork, f: &Flow) -> Q {
    net.sources.iter().map(|&s| -balance(net, f, s)).sum()
}

/// Conservation, arc and vertex capacities, all recomputed here.
pub fn feasible(net: &FlowNetwork, f: &Flow) -> bool {
    let g = &net.graph;
    for v in 0..net.vertex_count() {
        if !net.is_terminal(v) && !balance(net, f, v).is_zero() {
            return false;
        }
        if let Some(c) = net.vcap[v].finite() {
            if inflow(net, f, v) > c {
                return false;
            }
        }
    }
    g.darts().all(|d| {
        let x = f.along(d);
        !x.is_positive() || net.cap[d.0].finite().is_none_or(|c| x <= c)
    })
}

/// Hub 0 of capacity 2 between source 1 (north) and source 2 (south), with
/// out-arcs east to 3 and west to 4, both of which feed sink 5. The hub's
/// rotation alternates in, out, in, out.
pub const DIAMOND: &str = "pvflow-instance 1
regime integer
size 6 6
v 0 2 inner
v 1 inf source
v 2 inf source
v 3 inf inner
v 4 inf inner
v 5 inf sink
a 0 1 0 10
a 1 2 0 10
a 2 0 3 10
a 3 0 4 10
a 4 3 5 10
a 5 4 5 10
r 0 -0 +2 -1 +3
r 1 +0
r 2 +1
r 3 +4 -2
r 4 +5 -3
r 5 -4 -5
outer +1
";

pub fn diamond() -> FlowNetwork {
    pvflow::harness::parse_instance(DIAMOND).unwrap().network
}

/// Parses an instance given as text.
pub fn parse(text: &str) -> FlowNetwork {
    pvflow::harness::parse_instance(text).unwrap().network
}
