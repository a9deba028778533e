mod common;

use std::sync::Arc;

use common::{feasible, flow_value, instance, q, qr};
use num_traits::Signed;
use pvflow::flow::{check_feasible, decompose, residual, sink_value, value, ComponentKind, Flow};
use pvflow::graph::Graph;
use pvflow::harness::{oracle_maxflow, Regime};
use pvflow::maxflow::MaxFlow;
use pvflow::Cap;

/// A feasible maximum flow of a generated instance plus its network.
fn sample(seed: u64, regime: Regime) -> (pvflow::FlowNetwork, Flow) {
    let inst = instance(seed, 12 + seed as usize % 20, 2 + seed as usize % 4, 9, regime);
    let f = oracle_maxflow(&inst.network).unwrap().flow;
    (inst.network, f)
}

#[test]
fn value_agrees_with_hand_count_and_sinks() {
    for seed in 0..30 {
        let (net, f) = sample(seed, Regime::Rational);
        let v = value(&net, &f).unwrap();
        assert_eq!(v, flow_value(&net, &f));
        assert_eq!(v, sink_value(&net, &f));
        assert!(feasible(&net, &f));
        assert!(check_feasible(&net, &f).is_feasible());
    }
}

/// The boundary walk of one face, one unit around.
fn face_cycle(net: &pvflow::FlowNetwork, face: usize) -> Flow {
    let emb = net.embedding.as_ref().unwrap();
    let mut c = Flow::zero(net.edge_count());
    for &d in &emb.faces()[face] {
        c.push(d, q(1));
    }
    c
}

#[test]
fn addition_is_commutative_and_reversal_cancels() {
    for seed in 0..20 {
        let (net, f) = sample(seed, Regime::Integer);
        let g = face_cycle(&net, seed as usize % net.embedding.as_ref().unwrap().face_count())
            .scale(qr(5, 2))
            .unwrap();
        assert_eq!(f.add(&g), g.add(&f));
        assert_eq!(f.add(&g).sub(&g), f);
        assert!(f.add(&f.reversed()).is_zero());
        assert_eq!(value(&net, &f.add(&g)).unwrap(), value(&net, &f).unwrap());
    }
}

#[test]
fn decomposition_resums_exactly() {
    for seed in 0..40 {
        let (net, f) = sample(seed, Regime::Rational);
        let parts = decompose(&net, &f);
        assert!(parts.len() <= net.edge_count());
        let mut sum = Flow::zero(net.edge_count());
        for p in &parts {
            assert!(p.amount.is_positive());
            let vs = p.vertices(&net.graph);
            match p.kind {
                ComponentKind::Path => {
                    assert!(net.is_source(vs[0]));
                    assert!(net.is_sink(*vs.last().unwrap()));
                }
                ComponentKind::Cycle => {
                    let last = *p.darts.last().unwrap();
                    assert_eq!(net.graph.head(last), vs[0]);
                }
            }
            sum.add_assign(&p.as_flow(net.edge_count()));
        }
        assert_eq!(sum, f, "seed {seed}");
    }
}

/// s=0 -> 1 -> 2 -> t=3 and a triangle 1 -> 2 -> 4 -> 1.
fn path_and_triangle() -> pvflow::FlowNetwork {
    let mut g = Graph::new(5);
    for (u, v) in [(0, 1), (1, 2), (2, 3), (2, 4), (4, 1)] {
        g.add_edge(u, v);
    }
    let cap = (0..5).flat_map(|_| [Cap::int(10), Cap::zero()]).collect();
    let vcap = vec![Cap::Infinite; 5];
    pvflow::FlowNetwork::new(Arc::new(g), None, cap, vcap, vec![0], vec![3]).unwrap()
}

#[test]
fn path_plus_overlapping_cycle_splits_into_two_components() {
    let net = path_and_triangle();
    let f = Flow::from_net(vec![q(3), q(4), q(3), q(1), q(1)]);
    let parts = decompose(&net, &f);
    assert_eq!(parts.len(), 2);
    assert_eq!((parts[0].kind, parts[0].amount), (ComponentKind::Path, q(3)));
    assert_eq!(parts[0].vertices(&net.graph), vec![0, 1, 2, 3]);
    assert_eq!((parts[1].kind, parts[1].amount), (ComponentKind::Cycle, q(1)));
    let mut sum = Flow::zero(5);
    for p in &parts {
        sum.add_assign(&p.as_flow(5));
    }
    assert_eq!(sum, f);
}

#[test]
fn residual_augmentation_stays_arc_feasible() {
    for seed in 0..30 {
        let (net, _) = sample(seed, Regime::Integer);
        let half = MaxFlow::new(&net.graph, &net.cap)
            .sources(net.sources.clone())
            .sinks(net.sinks.clone())
            .limit(q(2))
            .run()
            .unwrap()
            .flow;
        let r = residual(&net, &half).unwrap();
        for d in net.graph.darts() {
            let expected = net.cap[d.0].minus(&half.along(d));
            assert_eq!(r[d.0], expected);
        }
        let more = MaxFlow::new(&net.graph, &r)
            .sources(net.sources.clone())
            .sinks(net.sinks.clone())
            .run()
            .unwrap()
            .flow;
        let total = half.add(&more);
        for d in net.graph.darts() {
            if let Cap::Finite(c) = net.cap[d.0] {
                assert!(total.along(d) <= c);
            }
        }
    }
}
