mod common;

use common::{balance, edmonds_karp, feasible, q, split_digraph};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use pvflow::flow::{value, Flow};
use pvflow::harness::format::{parse_flow, parse_instance, write_flow, write_instance};
use pvflow::harness::{generate, oracle_maxflow, GenParams, Instance, Regime};
use pvflow::num::is_integral;
use pvflow::rounding::{round_flow, round_to_lattice};
use pvflow::solver::{solve_bounded, solve_k3, solve_scaling};
use pvflow::Q;

fn params(n: usize, k: usize, u: i128, rational: bool, inner: bool, pendant: bool) -> GenParams {
    GenParams {
        n,
        k,
        u,
        regime: if rational { Regime::Rational } else { Regime::Integer },
        density: 1.0,
        inner_terminals: inner,
        pendant_sources: pendant,
    }
}

fn arb_instance(k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (u64, Instance)> {
    (any::<u64>(), 9usize..40, k, 1i128..12, any::<bool>(), any::<bool>(), any::<bool>()).prop_filter_map(
        "too many terminals for the grid",
        |(seed, n, k, u, rational, inner, pendant)| {
            let p = params(n, k, u, rational, inner, pendant);
            generate(seed, &p).ok().map(|inst| (seed, inst))
        },
    )
}

/// Face circulations with random rational amounts.
fn circulation(inst: &Instance, picks: &[(usize, i128, i128)]) -> Flow {
    let emb = inst.network.embedding.as_ref().unwrap();
    let mut f = Flow::zero(inst.network.edge_count());
    for &(face, a, b) in picks {
        for &d in &emb.faces()[face % emb.face_count()] {
            f.push(d, Q::new(a, b));
        }
    }
    f
}

fn arb_picks() -> impl Strategy<Value = Vec<(usize, i128, i128)>> {
    prop::collection::vec((any::<usize>(), -40i128..40, 1i128..9), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_arithmetic_is_consistent((_, inst) in arb_instance(2..=5), a in arb_picks(), b in arb_picks()) {
        let f = circulation(&inst, &a);
        let g = circulation(&inst, &b);
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        prop_assert!(f.sub(&f).is_zero());
        prop_assert_eq!(f.reversed().reversed(), f.clone());
        prop_assert_eq!(f.add(&f.reversed()).is_zero(), true);
        for d in inst.network.graph.darts() {
            prop_assert_eq!(f.along(d), -f.along(d.rev()));
            prop_assert!(f.on(d) >= Q::zero());
        }
    }

    #[test]
    fn rounding_keeps_balances_and_moves_edges_by_less_than_one(
        (_, inst) in arb_instance(2..=5),
        picks in arb_picks(),
    ) {
        let net = &inst.network;
        let f = circulation(&inst, &picks);
        let r = round_flow(&net.graph, &f, &net.sources, &net.sinks).unwrap().flow;
        for (x, y) in f.nets().iter().zip(r.nets()) {
            prop_assert!(is_integral(y));
            prop_assert!((x - y).abs() < q(1));
        }
        for v in 0..net.vertex_count() {
            prop_assert_eq!(balance(net, &r, v), balance(net, &f, v));
        }
    }

    #[test]
    fn lattice_rounding_lands_on_the_lattice(
        (_, inst) in arb_instance(2..=4),
        picks in arb_picks(),
        den in 1i128..6,
    ) {
        let net = &inst.network;
        let f = circulation(&inst, &picks);
        let unit = Q::new(1, den);
        let r = round_to_lattice(&net.graph, &f, &net.sources, &net.sinks, unit).unwrap().flow;
        for (x, y) in f.nets().iter().zip(r.nets()) {
            prop_assert!(is_integral(&(y / unit)));
            prop_assert!((x - y).abs() < unit);
        }
    }

    #[test]
    fn text_round_trips_are_exact((_, inst) in arb_instance(2..=6)) {
        let back = parse_instance(&write_instance(&inst)).unwrap();
        prop_assert_eq!(write_instance(&back), write_instance(&inst));
        let f = oracle_maxflow(&inst.network).unwrap().flow;
        prop_assert_eq!(parse_flow(&inst.network, &write_flow(&inst.network, &f)).unwrap(), f);
    }

    #[test]
    fn oracle_agrees_with_a_hand_split_network((_, inst) in arb_instance(2..=6)) {
        let net = &inst.network;
        let r = oracle_maxflow(net).unwrap();
        prop_assert_eq!(r.value, edmonds_karp(&split_digraph(net)));
        prop_assert!(feasible(net, &r.flow));
    }

    #[test]
    fn solvers_match_the_oracle((_, inst) in arb_instance(2..=5)) {
        let net = &inst.network;
        let best = oracle_maxflow(net).unwrap().value;
        if inst.regime == Regime::Integer {
            let (sol, _) = solve_bounded(net).unwrap();
            prop_assert_eq!(sol.value, best);
            prop_assert!(feasible(net, &sol.flow));
            prop_assert_eq!(value(net, &sol.flow).unwrap(), best);
            let (sol, _) = solve_scaling(net).unwrap();
            prop_assert_eq!(sol.value, best);
            prop_assert!(feasible(net, &sol.flow));
        }
        if net.k() == 3 {
            let (sol, _) = solve_k3(net).unwrap();
            prop_assert_eq!(sol.value, best);
            prop_assert!(feasible(net, &sol.flow));
        }
    }
}
