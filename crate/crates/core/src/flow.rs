//! Flows, their arithmetic, residual capacities, feasibility and
//! decomposition.
//!
//! A flow stores one signed net amount per edge. The value on the forward
//! dart is the positive part and the value on the reverse dart is the negative
//! part, so `min(f(d), f(rev d)) = 0` holds by construction and adding two
//! flows dart-wise followed by normalization is plain addition of nets.

use num_traits::{Signed, Zero};

use crate::graph::{Dart, Graph};
use crate::network::FlowNetwork;
use crate::num::{pos, Cap, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("conservation violated at vertex {vertex} (in - out = {imbalance})")]
    Conservation { vertex: usize, imbalance: Q },
    #[error("dart {dart} carries {value}, above its capacity {cap}")]
    OverCapacity { dart: Dart, value: Q, cap: Cap },
    #[error("scalar {0} is negative")]
    NegativeScalar(Q),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Flow {
    net: Vec<Q>,
}

impl Flow {
    pub fn zero(edges: usize) -> Flow {
        Flow {
            net: vec![Q::zero(); edges],
        }
    }

    /// Builds a flow from signed per-edge amounts along each forward dart.
    pub fn from_net(net: Vec<Q>) -> Flow {
        Flow { net }
    }

    pub fn edge_count(&self) -> usize {
        self.net.len()
    }

    pub fn nets(&self) -> &[Q] {
        &self.net
    }

    pub fn net(&self, edge: usize) -> Q {
        self.net[edge]
    }

    pub fn set_net(&mut self, edge: usize, x: Q) {
        self.net[edge] = x;
    }

    /// `f(d)`, the nonnegative amount on dart `d`.
    pub fn on(&self, d: Dart) -> Q {
        pos(self.along(d))
    }

    /// `f(d) - f(rev d)`.
    pub fn along(&self, d: Dart) -> Q {
        let x = self.net[d.edge()];
        if d.is_forward() {
            x
        } else {
            -x
        }
    }

    /// Sends `amount` more along `d`.
    pub fn push(&mut self, d: Dart, amount: Q) {
        if d.is_forward() {
            self.net[d.edge()] += amount;
        } else {
            self.net[d.edge()] -= amount;
        }
    }

    /// `max{0, f(e) + g(e) - f(rev e) - g(rev e)}` on every dart.
    pub fn add(&self, other: &Flow) -> Flow {
        assert_eq!(self.net.len(), other.net.len(), "flows on different graphs");
        Flow {
            net: self.net.iter().zip(&other.net).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Flow) {
        assert_eq!(self.net.len(), other.net.len(), "flows on different graphs");
        for (a, b) in self.net.iter_mut().zip(&other.net) {
            *a += b;
        }
    }

    /// `self` plus the reversal of `other`.
    pub fn sub(&self, other: &Flow) -> Flow {
        assert_eq!(self.net.len(), other.net.len(), "flows on different graphs");
        Flow {
            net: self.net.iter().zip(&other.net).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Q) -> Result<Flow, FlowError> {
        if c.is_negative() {
            return Err(FlowError::NegativeScalar(c));
        }
        Ok(Flow {
            net: self.net.iter().map(|x| x * c).collect(),
        })
    }

    /// The same amounts carried on the reversed darts.
    pub fn reversed(&self) -> Flow {
        Flow {
            net: self.net.iter().map(|x| -x).collect(),
        }
    }

    /// Keeps the first `edges` edges.
    pub fn truncated(&self, edges: usize) -> Flow {
        Flow {
            net: self.net[..edges].to_vec(),
        }
    }

    /// Pads with zero-flow edges up to `edges`.
    pub fn padded(&self, edges: usize) -> Flow {
        let mut net = self.net.clone();
        net.resize(edges, Q::zero());
        Flow { net }
    }

    pub fn is_zero(&self) -> bool {
        self.net.iter().all(Zero::is_zero)
    }

    /// Darts carrying positive flow, in ascending order.
    pub fn support(&self) -> impl Iterator<Item = Dart> + '_ {
        self.net.iter().enumerate().filter_map(|(e, x)| {
            if x.is_positive() {
                Some(Dart::forward(e))
            } else if x.is_negative() {
                Some(Dart::forward(e).rev())
            } else {
                None
            }
        })
    }
}

/// Per-vertex `f^in` and `f^out`.
#[derive(Debug, Clone)]
pub struct Balances {
    pub inflow: Vec<Q>,
    pub outflow: Vec<Q>,
}

pub fn balances(g: &Graph, f: &Flow) -> Balances {
    let n = g.vertex_count();
    let mut inflow = vec![Q::zero(); n];
    let mut outflow = vec![Q::zero(); n];
    for d in f.support() {
        let x = f.on(d);
        outflow[g.tail(d)] += x;
        inflow[g.head(d)] += x;
    }
    Balances { inflow, outflow }
}

pub fn inflow(g: &Graph, f: &Flow, v: usize) -> Q {
    g.out_darts(v).iter().map(|&d| f.on(d.rev())).sum()
}

pub fn outflow(g: &Graph, f: &Flow, v: usize) -> Q {
    g.out_darts(v).iter().map(|&d| f.on(d)).sum()
}

/// First vertex (by index) where a non-terminal fails conservation.
pub fn conservation_violation(net: &FlowNetwork, f: &Flow) -> Option<(usize, Q)> {
    let b = balances(&net.graph, f);
    (0..net.vertex_count())
        .filter(|&v| !net.is_terminal(v))
        .map(|v| (v, b.inflow[v] - b.outflow[v]))
        .find(|(_, imbalance)| !imbalance.is_zero())
}

/// `v(f)`: net amount leaving the sources.
pub fn value(net: &FlowNetwork, f: &Flow) -> Result<Q, FlowError> {
    if let Some((vertex, imbalance)) = conservation_violation(net, f) {
        return Err(FlowError::Conservation { vertex, imbalance });
    }
    Ok(value_unchecked(net, f))
}

pub fn value_unchecked(net: &FlowNetwork, f: &Flow) -> Q {
    net.sources
        .iter()
        .map(|&s| outflow(&net.graph, f, s) - inflow(&net.graph, f, s))
        .sum()
}

/// Net amount entering the sinks.
pub fn sink_value(net: &FlowNetwork, f: &Flow) -> Q {
    net.sinks
        .iter()
        .map(|&t| inflow(&net.graph, f, t) - outflow(&net.graph, f, t))
        .sum()
}

/// `ex(f, v) = max{0, f^in(v) - c(v)}`.
pub fn excess(net: &FlowNetwork, f: &Flow, v: usize) -> Q {
    match net.vcap[v] {
        Cap::Infinite => Q::zero(),
        Cap::Finite(c) => pos(inflow(&net.graph, f, v) - c),
    }
}

pub fn excesses(net: &FlowNetwork, f: &Flow) -> Vec<Q> {
    let b = balances(&net.graph, f);
    (0..net.vertex_count())
        .map(|v| match net.vcap[v] {
            Cap::Infinite => Q::zero(),
            Cap::Finite(c) => pos(b.inflow[v] - c),
        })
        .collect()
}

/// `ex(f)`, the largest excess over all vertices.
pub fn max_excess(net: &FlowNetwork, f: &Flow) -> Q {
    excesses(net, f).into_iter().max().unwrap_or_else(Q::zero)
}

/// Vertices with positive excess, ascending.
pub fn infeasible_vertices(net: &FlowNetwork, f: &Flow) -> Vec<usize> {
    excesses(net, f)
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_positive())
        .map(|(v, _)| v)
        .collect()
}

/// `c_f(d) = c(d) - f(d) + f(rev d)` for every dart.
pub fn residual(net: &FlowNetwork, f: &Flow) -> Result<Vec<Cap>, FlowError> {
    residual_caps(&net.graph, &net.cap, f)
}

pub fn residual_caps(g: &Graph, cap: &[Cap], f: &Flow) -> Result<Vec<Cap>, FlowError> {
    g.darts()
        .map(|d| {
            let value = f.on(d);
            if !cap[d.0].admits(&value) {
                return Err(FlowError::OverCapacity {
                    dart: d,
                    value,
                    cap: cap[d.0],
                });
            }
            Ok(cap[d.0].minus(&f.along(d)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Conservation { vertex: usize, imbalance: Q },
    ArcCapacity { dart: Dart, by: Q },
    VertexCapacity { vertex: usize, by: Q },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks conservation, arc capacities and vertex capacities.
pub fn check_feasible(net: &FlowNetwork, f: &Flow) -> FeasibilityReport {
    let g = &net.graph;
    let b = balances(g, f);
    let mut violations = Vec::new();
    for v in 0..net.vertex_count() {
        if !net.is_terminal(v) && b.inflow[v] != b.outflow[v] {
            violations.push(Violation::Conservation {
                vertex: v,
                imbalance: b.inflow[v] - b.outflow[v],
            });
        }
    }
    for d in f.support() {
        if let Cap::Finite(c) = net.cap[d.0] {
            let x = f.on(d);
            if x > c {
                violations.push(Violation::ArcCapacity { dart: d, by: x - c });
            }
        }
    }
    for v in 0..net.vertex_count() {
        if let Cap::Finite(c) = net.vcap[v] {
            if b.inflow[v] > c {
                violations.push(Violation::VertexCapacity {
                    vertex: v,
                    by: b.inflow[v] - c,
                });
            }
        }
    }
    FeasibilityReport { violations }
}

pub fn is_feasible(net: &FlowNetwork, f: &Flow) -> bool {
    check_feasible(net, f).is_feasible()
}

/// True when the positive-flow darts contain no directed cycle.
pub fn is_acyclic(g: &Graph, f: &Flow) -> bool {
    let n = g.vertex_count();
    let mut indeg = vec![0usize; n];
    for d in f.support() {
        indeg[g.head(d)] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &d in g.out_darts(v) {
            if f.on(d).is_positive() {
                let w = g.head(d);
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    seen == n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Path,
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowComponent {
    pub kind: ComponentKind,
    pub darts: Vec<Dart>,
    pub amount: Q,
}

impl FlowComponent {
    /// Vertices visited in order; a cycle does not repeat its first vertex.
    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        let mut vs: Vec<usize> = self.darts.iter().map(|&d| g.tail(d)).collect();
        if self.kind == ComponentKind::Path {
            if let Some(&last) = self.darts.last() {
                vs.push(g.head(last));
            }
        }
        vs
    }

    pub fn as_flow(&self, edges: usize) -> Flow {
        let mut f = Flow::zero(edges);
        for &d in &self.darts {
            f.push(d, self.amount);
        }
        f
    }
}

/// Splits a conserving flow into source-to-sink paths and cycles whose sum
/// is `f`. Walks start at sources first, then at any vertex with remaining
/// outflow, and always leave along the smallest positive dart.
pub fn decompose(net: &FlowNetwork, f: &Flow) -> Vec<FlowComponent> {
    let g = &net.graph;
    let mut rest = f.clone();
    let mut parts = Vec::new();
    let first_positive = |rest: &Flow, v: usize| {
        g.out_darts(v)
            .iter()
            .copied()
            .filter(|&d| rest.on(d).is_positive())
            .min()
    };
    let mut starts: Vec<usize> = net.sources.clone();
    starts.extend((0..g.vertex_count()).filter(|&v| !net.is_source(v)));
    let mut on_walk = vec![usize::MAX; g.vertex_count()];
    for &start in &starts {
        while let Some(first) = first_positive(&rest, start) {
            let mut walk = vec![first];
            on_walk[start] = 0;
            let mut visited = vec![start];
            let (kind, darts) = loop {
                let v = g.head(*walk.last().unwrap());
                if net.is_terminal(v) && v != start {
                    break (ComponentKind::Path, walk.clone());
                }
                if on_walk[v] != usize::MAX {
                    break (ComponentKind::Cycle, walk[on_walk[v]..].to_vec());
                }
                on_walk[v] = walk.len();
                visited.push(v);
                match first_positive(&rest, v) {
                    Some(d) => walk.push(d),
                    None => break (ComponentKind::Path, walk.clone()),
                }
            };
            for v in visited {
                on_walk[v] = usize::MAX;
            }
            let amount = darts.iter().map(|&d| rest.on(d)).min().unwrap();
            for &d in &darts {
                rest.push(d, -amount);
            }
            parts.push(FlowComponent {
                kind,
                darts,
                amount,
            });
        }
    }
    parts
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::num::{q, qr};

    /// s=0 -> a=1 -> t=2 plus a triangle 1 -> 3 -> 4 -> 1.
    fn network() -> FlowNetwork {
        let mut g = Graph::new(5);
        for (u, v) in [(0, 1), (1, 2), (1, 3), (3, 4), (4, 1)] {
            g.add_edge(u, v);
        }
        let mut cap = Vec::new();
        for _ in 0..5 {
            cap.push(Cap::int(4));
            cap.push(Cap::zero());
        }
        let vcap = vec![Cap::Infinite, Cap::int(3), Cap::Infinite, Cap::Infinite, Cap::Infinite];
        FlowNetwork::new(Arc::new(g), None, cap, vcap, vec![0], vec![2]).unwrap()
    }

    fn flow(nets: &[i128]) -> Flow {
        Flow::from_net(nets.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn value_counts_source_outflow() {
        let net = network();
        assert_eq!(value(&net, &Flow::zero(5)).unwrap(), q(0));
        let f = flow(&[3, 3, 0, 0, 0]);
        assert_eq!(value(&net, &f).unwrap(), q(3));
        assert_eq!(sink_value(&net, &f), q(3));
        assert!(matches!(
            value(&net, &flow(&[3, 2, 0, 0, 0])),
            Err(FlowError::Conservation { vertex: 1, .. })
        ));
    }

    #[test]
    fn addition_follows_the_normalized_formula() {
        let f = flow(&[2, 0, 0, 0, 0]);
        let mut g = Flow::zero(5);
        g.push(Dart(1), q(3));
        let h = f.add(&g);
        assert_eq!(h.on(Dart(0)), q(0));
        assert_eq!(h.on(Dart(1)), q(1));
        assert_eq!(f.add(&Flow::zero(5)), f);
        assert_eq!(f.add(&f.reversed()), Flow::zero(5));
        let s = flow(&[2, 0, 0, 0, 0]).scale(qr(1, 4)).unwrap();
        assert_eq!(s.on(Dart(0)), qr(1, 2));
        assert!(f.scale(q(-1)).is_err());
    }

    #[test]
    fn residual_matches_formula() {
        let net = network();
        let f = flow(&[3, 3, 0, 0, 0]);
        let r = residual(&net, &f).unwrap();
        assert_eq!(r[0], Cap::int(1));
        assert_eq!(r[1], Cap::int(3));
        let zero = residual(&net, &Flow::zero(5)).unwrap();
        assert_eq!(zero, net.cap);
        let sat = residual(&net, &flow(&[4, 4, 0, 0, 0])).unwrap();
        assert_eq!(sat[0], Cap::zero());
        assert!(residual(&net, &flow(&[5, 5, 0, 0, 0])).is_err());
    }

    #[test]
    fn excess_and_feasibility_report() {
        let net = network();
        let f = flow(&[3, 3, 2, 2, 2]);
        assert_eq!(excess(&net, &f, 1), q(2));
        assert_eq!(excess(&net, &f, 0), q(0));
        assert_eq!(excess(&net, &flow(&[3, 3, 0, 0, 0]), 1), q(0));
        let report = check_feasible(&net, &f);
        assert_eq!(
            report.violations,
            vec![Violation::VertexCapacity { vertex: 1, by: q(2) }]
        );
        assert!(is_feasible(&net, &flow(&[3, 3, 0, 0, 0])));
        let broken = check_feasible(&net, &flow(&[3, 1, 0, 0, 0]));
        assert!(matches!(
            broken.violations[0],
            Violation::Conservation { vertex: 1, .. }
        ));
    }

    #[test]
    fn decomposition_resums_to_the_flow() {
        let net = network();
        let f = flow(&[3, 3, 1, 1, 1]);
        let parts = decompose(&net, &f);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].kind, ComponentKind::Path);
        assert_eq!(parts[0].amount, q(3));
        assert_eq!(parts[1].kind, ComponentKind::Cycle);
        assert_eq!(parts[1].amount, q(1));
        let mut sum = Flow::zero(5);
        for p in &parts {
            sum.add_assign(&p.as_flow(5));
        }
        assert_eq!(sum, f);
        assert!(!is_acyclic(&net.graph, &f));
        assert!(is_acyclic(&net.graph, &flow(&[3, 3, 0, 0, 0])));
    }

    #[test]
    fn circulation_is_one_cycle() {
        let net = network();
        let parts = decompose(&net, &flow(&[0, 0, 2, 2, 2]));
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].kind, ComponentKind::Cycle);
        assert_eq!(parts[0].amount, q(2));
    }
}
