mod common;

use common::{diamond, instance};
use pvflow::cancel::cancel_generic;
use pvflow::flow::Flow;
use pvflow::gadgets::build_extended;
use pvflow::harness::{generate, oracle_maxflow, GenParams, Regime};
use pvflow::maxflow::MaxFlow;
use pvflow::saddle::{alternation, analyze, check_index_identity, SaddleError};
use pvflow::FlowNetwork;

/// An acyclic maximum flow.
fn acyclic_flow(net: &FlowNetwork) -> Flow {
    cancel_generic(&net.graph, &oracle_maxflow(net).unwrap().flow)
}

/// In/out changes around `v`, counted from the rotation by hand.
fn hand_alternation(net: &FlowNetwork, f: &Flow, v: usize) -> usize {
    let emb = net.embedding.as_ref().unwrap();
    let signs: Vec<i32> = emb
        .rotation(v)
        .iter()
        .map(|&d| f.along(d))
        .filter(|x| *x != pvflow::Q::from_integer(0))
        .map(|x| if x > pvflow::Q::from_integer(0) { 1 } else { -1 })
        .collect();
    let n = signs.len();
    (0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count()
}

#[test]
fn alternation_matches_a_hand_count() {
    for seed in 0..30 {
        let inst = instance(seed, 12 + seed as usize % 40, 2 + seed as usize % 5, 8, Regime::Integer);
        let net = &inst.network;
        let f = acyclic_flow(net);
        let emb = net.embedding.as_ref().unwrap();
        let report = analyze(net, &f).unwrap();
        for v in 0..net.vertex_count() {
            let a = hand_alternation(net, &f, v);
            assert_eq!(alternation(emb, &f, v), a);
            assert_eq!(report.alpha[v], a);
            assert_eq!(report.index[v], a as i64 / 2 - 1);
            assert_eq!(report.saddles.contains(&v), a >= 4);
        }
    }
}

#[test]
fn one_source_one_sink_flows_have_no_saddles() {
    for seed in 0..40 {
        let inst = instance(seed, 9 + seed as usize % 50, 2, 8, Regime::Rational);
        let net = &inst.network;
        let report = analyze(net, &acyclic_flow(net)).unwrap();
        assert!(report.saddles.is_empty(), "seed {seed}");
    }
}

#[test]
fn saddle_indices_are_bounded_by_terminal_count() {
    for seed in 0..60 {
        let p = GenParams {
            n: 16 + seed as usize % 40,
            k: 2 + seed as usize % 5,
            u: 8,
            regime: Regime::Integer,
            density: 1.0,
            inner_terminals: seed % 2 == 0,
            pendant_sources: seed % 3 != 0,
        };
        let inst = generate(seed, &p).unwrap();
        let net = &inst.network;
        let f = acyclic_flow(net);
        let report = analyze(net, &f).unwrap();
        assert!(report.saddle_index_sum() <= net.k() as i64 - 2, "seed {seed}");
        let emb = net.embedding.as_ref().unwrap();
        for t in check_index_identity(emb, &f) {
            assert!(t.holds(), "seed {seed}: {t:?}");
        }
    }
}

#[test]
fn diamond_hub_is_a_saddle_of_index_one() {
    let net = diamond();
    let ext = build_extended(&net).unwrap();
    let fo = MaxFlow::new(&ext.net.graph, &ext.net.cap)
        .source(ext.s)
        .sink(ext.t)
        .run()
        .unwrap()
        .flow;
    let f = ext.restrict(&fo);
    let report = analyze(&net, &f).unwrap();
    assert_eq!(report.alpha[0], 4);
    assert_eq!(report.index[0], 1);
    assert_eq!(report.saddles, vec![0]);
    assert_eq!(report.excess[0], pvflow::Q::from_integer(2));
}

#[test]
fn cyclic_flows_are_refused() {
    let inst = instance(1, 16, 3, 8, Regime::Integer);
    let net = &inst.network;
    let emb = net.embedding.as_ref().unwrap();
    let inner = (0..emb.face_count()).find(|&f| !emb.is_outer(f)).unwrap();
    let mut f = Flow::zero(net.edge_count());
    for &d in &emb.faces()[inner] {
        f.push(d, pvflow::Q::from_integer(1));
    }
    assert_eq!(analyze(net, &f).unwrap_err(), SaddleError::NotAcyclic);
}
