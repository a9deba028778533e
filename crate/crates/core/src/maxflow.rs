//! Exact maximum flow by blocking flows on BFS level graphs.
//!
//! The engine works on any [`Graph`] with per-dart capacities, optionally on
//! top of a base flow (so it computes a maximum flow in the residual
//! network). Terminals are attached to a virtual super source and super sink
//! through stub arcs whose capacities may be finite, which is how flows of a
//! prescribed value or with prescribed supplies and demands are obtained.

use num_traits::Zero;

use crate::cancel::cancel_generic;
use crate::flow::Flow;
use crate::graph::Graph;
use crate::network::FlowNetwork;
use crate::num::{Cap, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaxFlowError {
    #[error("an uncapacitated path joins a source to a sink")]
    Unbounded,
    #[error("base flow exceeds the capacity of dart {0}")]
    BaseInfeasible(usize),
    #[error("requested flow {requested} exceeds the achievable {achievable}")]
    Infeasible { requested: Q, achievable: Q },
}

#[derive(Debug, Clone)]
pub struct MaxFlowOutcome {
    /// Flow found on top of the base (zero base means it is the flow itself).
    pub flow: Flow,
    pub value: Q,
    /// Amount delivered through each source stub, in stub order.
    pub source_amounts: Vec<Q>,
    /// Amount absorbed by each sink stub, in stub order.
    pub sink_amounts: Vec<Q>,
}

/// A single max-flow problem. Sources and sinks are attached by stubs; a
/// plain terminal has an infinite stub.
#[derive(Debug, Clone)]
pub struct MaxFlow<'a> {
    graph: &'a Graph,
    cap: &'a [Cap],
    base: Option<&'a Flow>,
    sources: Vec<(usize, Cap)>,
    sinks: Vec<(usize, Cap)>,
    limit: Option<Q>,
}

impl<'a> MaxFlow<'a> {
    pub fn new(graph: &'a Graph, cap: &'a [Cap]) -> MaxFlow<'a> {
        assert_eq!(cap.len(), graph.dart_count());
        MaxFlow {
            graph,
            cap,
            base: None,
            sources: Vec::new(),
            sinks: Vec::new(),
            limit: None,
        }
    }

    pub fn source(mut self, v: usize) -> Self {
        self.sources.push((v, Cap::Infinite));
        self
    }

    pub fn sink(mut self, v: usize) -> Self {
        self.sinks.push((v, Cap::Infinite));
        self
    }

    /// Source `v` may emit at most `supply`.
    pub fn source_stub(mut self, v: usize, supply: Cap) -> Self {
        self.sources.push((v, supply));
        self
    }

    /// Sink `v` may absorb at most `demand`.
    pub fn sink_stub(mut self, v: usize, demand: Cap) -> Self {
        self.sinks.push((v, demand));
        self
    }

    pub fn sources(mut self, vs: impl IntoIterator<Item = usize>) -> Self {
        self.sources.extend(vs.into_iter().map(|v| (v, Cap::Infinite)));
        self
    }

    pub fn sinks(mut self, vs: impl IntoIterator<Item = usize>) -> Self {
        self.sinks.extend(vs.into_iter().map(|v| (v, Cap::Infinite)));
        self
    }

    pub fn base(mut self, base: &'a Flow) -> Self {
        self.base = Some(base);
        self
    }

    /// Caps the total value.
    pub fn limit(mut self, limit: Q) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn run(self) -> Result<MaxFlowOutcome, MaxFlowError> {
        Dinic::build(&self)?.solve(&self)
    }
}

struct Dinic {
    head: Vec<usize>,
    res: Vec<Cap>,
    adj: Vec<Vec<usize>>,
    level: Vec<usize>,
    iter: Vec<usize>,
    start: usize,
    target: usize,
    graph_darts: usize,
    delta: Vec<Q>,
}

const UNSEEN: usize = usize::MAX;

impl Dinic {
    fn build(p: &MaxFlow<'_>) -> Result<Dinic, MaxFlowError> {
        let g = p.graph;
        let n = g.vertex_count();
        let super_source = n;
        let super_sink = n + 1;
        let limit_node = n + 2;
        let nodes = if p.limit.is_some() { n + 3 } else { n + 2 };
        let mut head = Vec::with_capacity(g.dart_count() + 2 * (p.sources.len() + p.sinks.len() + 1));
        let mut res = Vec::with_capacity(head.capacity());
        let mut adj = vec![Vec::new(); nodes];
        for v in 0..n {
            adj[v].extend(g.out_darts(v).iter().map(|d| d.0));
        }
        for d in g.darts() {
            head.push(g.head(d));
            let used = p.base.map_or_else(Q::zero, |b| b.along(d));
            if !p.cap[d.0].admits(&used) {
                return Err(MaxFlowError::BaseInfeasible(d.0));
            }
            res.push(p.cap[d.0].minus(&used));
        }
        let mut add_arc = |from: usize, to: usize, cap: Cap, head: &mut Vec<usize>, res: &mut Vec<Cap>| {
            let a = head.len();
            head.push(to);
            res.push(cap);
            head.push(from);
            res.push(Cap::zero());
            adj[from].push(a);
            adj[to].push(a + 1);
        };
        for &(s, c) in &p.sources {
            add_arc(super_source, s, c, &mut head, &mut res);
        }
        for &(t, c) in &p.sinks {
            add_arc(t, super_sink, c, &mut head, &mut res);
        }
        let start = match p.limit {
            Some(l) => {
                add_arc(limit_node, super_source, Cap::Finite(l), &mut head, &mut res);
                limit_node
            }
            None => super_source,
        };
        Ok(Dinic {
            head,
            res,
            adj,
            level: vec![UNSEEN; nodes],
            iter: vec![0; nodes],
            start,
            target: super_sink,
            graph_darts: g.dart_count(),
            delta: vec![Q::zero(); g.edge_count()],
        })
    }

    fn bfs(&mut self) -> bool {
        self.level.iter_mut().for_each(|l| *l = UNSEEN);
        self.level[self.start] = 0;
        let mut queue = std::collections::VecDeque::from([self.start]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let w = self.head[a];
                if self.level[w] == UNSEEN && self.res[a].is_positive() {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[self.target] != UNSEEN
    }

    /// Finds one augmenting path in the level graph and pushes its bottleneck.
    fn augment(&mut self, v: usize, limit: Cap) -> Result<Option<Q>, MaxFlowError> {
        if v == self.target {
            return match limit {
                Cap::Finite(x) => Ok(Some(x)),
                Cap::Infinite => Err(MaxFlowError::Unbounded),
            };
        }
        while self.iter[v] < self.adj[v].len() {
            let a = self.adj[v][self.iter[v]];
            let w = self.head[a];
            if self.res[a].is_positive() && self.level[w] == self.level[v] + 1 {
                if let Some(got) = self.augment(w, limit.min(self.res[a]))? {
                    self.res[a] = self.res[a].minus(&got);
                    self.res[a ^ 1] = self.res[a ^ 1].plus(&got);
                    if a < self.graph_darts {
                        if a & 1 == 0 {
                            self.delta[a >> 1] += got;
                        } else {
                            self.delta[a >> 1] -= got;
                        }
                    }
                    return Ok(Some(got));
                }
            }
            self.iter[v] += 1;
        }
        Ok(None)
    }

    fn solve(mut self, p: &MaxFlow<'_>) -> Result<MaxFlowOutcome, MaxFlowError> {
        let mut value = Q::zero();
        while self.bfs() {
            self.iter.iter_mut().for_each(|i| *i = 0);
            while let Some(got) = self.augment(self.start, Cap::Infinite)? {
                value += got;
            }
        }
        // Stub flows are read off the reverse stub arcs, which start at zero.
        let mut arc = self.graph_darts;
        let mut source_amounts = Vec::with_capacity(p.sources.len());
        for _ in &p.sources {
            source_amounts.push(finite(&self.res[arc + 1]));
            arc += 2;
        }
        let mut sink_amounts = Vec::with_capacity(p.sinks.len());
        for _ in &p.sinks {
            sink_amounts.push(finite(&self.res[arc + 1]));
            arc += 2;
        }
        Ok(MaxFlowOutcome {
            flow: Flow::from_net(self.delta),
            value,
            source_amounts,
            sink_amounts,
        })
    }
}

fn finite(c: &Cap) -> Q {
    c.finite().expect("reverse stub residual is finite")
}

fn terminals(net: &FlowNetwork) -> MaxFlow<'_> {
    MaxFlow::new(&net.graph, &net.cap)
        .sources(net.sources.iter().copied())
        .sinks(net.sinks.iter().copied())
}

/// Maximum flow from `net.sources` to `net.sinks`. Vertex capacities are
/// ignored; callers eliminate them through a gadget first.
pub fn max_flow(net: &FlowNetwork) -> Result<Flow, MaxFlowError> {
    Ok(terminals(net).run()?.flow)
}

pub fn max_flow_value(net: &FlowNetwork) -> Result<Q, MaxFlowError> {
    Ok(terminals(net).run()?.value)
}

/// Maximum flow in the residual network of `base`; the caller adds it.
pub fn max_flow_residual(net: &FlowNetwork, base: &Flow) -> Result<Flow, MaxFlowError> {
    Ok(terminals(net).base(base).run()?.flow)
}

/// A flow of exactly `value`, or `Infeasible` if the network cannot carry it.
pub fn fixed_value_flow(net: &FlowNetwork, value: Q) -> Result<Flow, MaxFlowError> {
    let out = terminals(net).limit(value).run()?;
    if out.value < value {
        return Err(MaxFlowError::Infeasible {
            requested: value,
            achievable: out.value,
        });
    }
    Ok(out.flow)
}

/// Maximum flow with every flow cycle cancelled.
pub fn acyclic_max_flow(net: &FlowNetwork) -> Result<Flow, MaxFlowError> {
    Ok(cancel_generic(&net.graph, &max_flow(net)?))
}
