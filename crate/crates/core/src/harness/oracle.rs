//! Reference maximum flow through the vertex-split network.

use crate::flow::Flow;
use crate::gadgets::{build_split, GadgetError};
use crate::maxflow::MaxFlow;
use crate::network::FlowNetwork;
use crate::num::Q;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: Q,
    pub flow: Flow,
}

/// Maximum feasible flow of `net`, computed on `Ḡ` and restricted back.
pub fn oracle_maxflow(net: &FlowNetwork) -> Result<OracleResult, GadgetError> {
    let split = build_split(net)?;
    let out = MaxFlow::new(&split.net.graph, &split.net.cap)
        .source(split.s)
        .sink(split.t)
        .run()?;
    Ok(OracleResult {
        value: out.value,
        flow: split.restrict(&out.flow),
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

    /// Source 0, sink 1, middle vertex 2, three parallel routes through 2.
    fn bottleneck(mid: Cap) -> FlowNetwork {
        let mut g = Graph::new(3);
        let mut into = Vec::new();
        let mut out = Vec::new();
        for _ in 0..3 {
            into.push(g.add_edge(0, 2));
            out.push(g.add_edge(2, 1));
        }
        let rot = vec![
            into.clone(),
            out.iter().rev().map(|d| d.rev()).collect(),
            vec![
                into[2].rev(),
                into[1].rev(),
                into[0].rev(),
                out[0],
                out[1],
                out[2],
            ],
        ];
        let graph = Arc::new(g);
        let emb = Embedding::new(graph.clone(), rot, &[]).unwrap();
        let cap = (0..6).flat_map(|_| [Cap::int(5), Cap::zero()]).collect();
        let vcap = vec![Cap::Infinite, Cap::Infinite, mid];
        FlowNetwork::new(graph, Some(Arc::new(emb)), cap, vcap, vec![0], vec![1]).unwrap()
    }

    #[test]
    fn middle_vertex_is_the_bottleneck() {
        let net = bottleneck(Cap::int(1));
        let r = oracle_maxflow(&net).unwrap();
        assert_eq!(r.value, q(1));
        assert!(is_feasible(&net, &r.flow));
        assert_eq!(value(&net, &r.flow).unwrap(), q(1));
    }

    #[test]
    fn infinite_vertex_capacities_give_plain_max_flow() {
        let net = bottleneck(Cap::Infinite);
        let r = oracle_maxflow(&net).unwrap();
        assert_eq!(r.value, q(15));
    }
}
