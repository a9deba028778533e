//! Maximum flow for integer capacities of any size.
//!
//! The value `λ` is found by binary search. For each guess a flow of value
//! `λ` in `G°` is improved until no vertex is overloaded by more than
//! `2kΔ`, and the remainder is fixed as in the bounded solver. A guess is
//! accepted when the fixed flow is feasible with value at least `λ`.
//!
//! One improvement has three stages:
//!
//! 1. With the infeasible vertices `X` collapsed to arcs (`G×`), reroute
//!    each excess in turn around its collapsed arc, and extend the result
//!    back to a circulation `g°` of `G°`.
//! 2. Round `g°/k` to a circulation on the half-integer lattice.
//! 3. Cancel flow cycles of the restriction.

use num_traits::{One, Signed, Zero};

use super::bounded::{acyclic_extended_flow, acyclic_restriction, fix_up};
use super::{Solution, SolveError};
use crate::cancel::cancel_generic;
use crate::flow::{excess, excesses, infeasible_vertices, is_feasible, max_excess, value, Flow};
use crate::gadgets::{build_extended, build_extended_with, Gadget};
use crate::graph::Dart;
use crate::maxflow::{fixed_value_flow, MaxFlow, MaxFlowError};
use crate::network::FlowNetwork;
use crate::num::{qr, Cap, Q};
use crate::rounding::round_to_lattice;

/// What one improvement did.
#[derive(Debug, Clone)]
pub struct PhaseLog {
    pub lambda: Q,
    /// `|X|`.
    pub infeasible: usize,
    /// `ex(f)` before and after.
    pub pre_excess: Q,
    pub post_excess: Q,
    /// After each rerouting step `i`: no excess on `x_1..x_i`, at most
    /// `ex(f)` on later members of `X`, at most `i·ex(f)` elsewhere.
    pub chain_holds: bool,
    /// After stage 1: no excess on `X`, at most `(k - 2)·ex(f)` elsewhere.
    pub stage_one_holds: bool,
    /// `post ≤ ⌈(k - 1)/k · pre⌉ + Δ`.
    pub contraction_holds: bool,
    pub value_kept: bool,
    pub cancel_acyclic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `G°` cannot carry `λ`.
    TooLargeForExtended,
    /// A rerouting flow fell short.
    StageFailure,
    /// The fixed flow is infeasible or too small.
    FixedTooSmall,
}

#[derive(Debug, Clone)]
pub struct GuessLog {
    pub lambda: Q,
    pub verdict: Verdict,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub extended_value: Q,
    pub guesses: Vec<GuessLog>,
    pub phases: Vec<PhaseLog>,
    /// `⌊8k(log₂(kU) + 2)⌋`.
    pub iteration_cap: usize,
}

pub fn iteration_cap(k: usize, u: Q) -> usize {
    let u = u.to_integer().max(1) as f64;
    let k = k as f64;
    (8.0 * k * ((k * u).log2() + 2.0)).floor() as usize
}

struct Context<'a> {
    net: &'a FlowNetwork,
    ext: Gadget,
    k: usize,
    delta: usize,
    cap: usize,
}

/// Stage 1: a circulation `g°` of `G°` clearing the excess of every `x ∈ X`,
/// or `None` when some rerouting flow falls short.
fn stage_one(
    cx: &Context<'_>,
    fo: &Flow,
    xs: &[usize],
    exf: Q,
    log: &mut PhaseLog,
) -> Result<Option<Flow>, SolveError> {
    let net = cx.net;
    let col = build_extended_with(net, xs)?;
    let fx = cx.ext.transfer(fo, &col)?;
    let mut h = fx.clone();
    let g = &col.net.graph;
    let gadgets: Vec<_> = xs.iter().map(|&x| col.collapsed_for(x).unwrap().clone()).collect();
    for (i, xi) in gadgets.iter().enumerate() {
        let ex_i = h.net(xi.edge) - xi.cap;
        if ex_i.is_positive() {
            let mut caps: Vec<Cap> = (0..g.edge_count())
                .flat_map(|e| {
                    let x = h.net(e);
                    [col.net.cap[2 * e].minus(&x), col.net.cap[2 * e + 1].plus(&x)]
                })
                .collect();
            caps[2 * xi.edge] = Cap::zero();
            caps[2 * xi.edge + 1] = Cap::zero();
            for xj in &gadgets[i + 1..] {
                let hj = h.net(xj.edge);
                if hj > xj.cap {
                    caps[2 * xj.edge] = Cap::Finite(xj.cap + exf - hj);
                    caps[2 * xj.edge + 1] = Cap::Finite(hj);
                }
            }
            let out = MaxFlow::new(g, &caps)
                .source(xi.vin)
                .sink(xi.vout)
                .limit(ex_i)
                .run()?;
            if out.value < ex_i {
                return Ok(None);
            }
            let mut phi = cancel_generic(g, &out.flow);
            phi.push(Dart::forward(xi.edge).rev(), ex_i);
            h.add_assign(&phi);
        }
        let r = col.restrict(&h);
        let step = Q::from_integer(i as i128 + 1);
        let mut ok = gadgets[..=i].iter().all(|xj| h.net(xj.edge) <= xj.cap);
        ok &= gadgets[i + 1..].iter().all(|xj| h.net(xj.edge) - xj.cap <= exf);
        ok &= (0..net.vertex_count())
            .filter(|v| !xs.contains(v))
            .all(|v| excess(net, &r, v) <= step * exf);
        log.chain_holds &= ok;
    }
    let ho = col.transfer(&h, &cx.ext)?;
    let r = cx.ext.restrict(&ho);
    let bound = Q::from_integer(cx.k as i128 - 2) * exf;
    log.stage_one_holds = excesses(net, &r)
        .iter()
        .enumerate()
        .all(|(v, e)| if xs.contains(&v) { e.is_zero() } else { *e <= bound });
    Ok(Some(ho.sub(fo)))
}

/// One improvement of `fo`; `None` when stage 1 fails.
fn improve(
    cx: &Context<'_>,
    fo: &Flow,
    lambda: Q,
    log_out: &mut Vec<PhaseLog>,
) -> Result<Option<Flow>, SolveError> {
    let net = cx.net;
    let f = acyclic_restriction(&cx.ext, fo);
    let xs = infeasible_vertices(net, &f);
    let pre = max_excess(net, &f);
    let mut log = PhaseLog {
        lambda,
        infeasible: xs.len(),
        pre_excess: pre,
        post_excess: pre,
        chain_holds: true,
        stage_one_holds: true,
        contraction_holds: true,
        value_kept: true,
        cancel_acyclic: true,
    };
    let go = match stage_one(cx, fo, &xs, pre, &mut log)? {
        Some(g) => g,
        None => return Ok(None),
    };
    let kq = Q::from_integer(cx.k as i128);
    let scaled = go.scale(Q::one() / kq)?;
    let gk = round_to_lattice(&cx.ext.net.graph, &scaled, &[], &[], qr(1, 2))?.flow;
    let (f1, acyclic) = acyclic_extended_flow(&cx.ext, &fo.add(&gk))?;
    let post = max_excess(net, &acyclic_restriction(&cx.ext, &f1));
    let bound = ((kq - Q::one()) / kq * pre).ceil() + Q::from_integer(cx.delta as i128);
    log.post_excess = post;
    log.contraction_holds = post <= bound;
    log.value_kept = value(&cx.ext.net, &f1)? == lambda;
    log.cancel_acyclic = acyclic;
    log_out.push(log);
    Ok(Some(f1))
}

fn attempt(
    cx: &Context<'_>,
    lambda: Q,
    report: &mut ScalingReport,
) -> Result<Option<Flow>, SolveError> {
    let mut guess = GuessLog {
        lambda,
        verdict: Verdict::Accepted,
        iterations: 0,
    };
    let result = run_guess(cx, lambda, &mut guess, &mut report.phases);
    let flow = match result {
        Ok(Some(f)) => Some(f),
        Ok(None) => None,
        Err(e) => {
            report.guesses.push(guess);
            return Err(e);
        }
    };
    report.guesses.push(guess);
    Ok(flow)
}

fn run_guess(
    cx: &Context<'_>,
    lambda: Q,
    guess: &mut GuessLog,
    phases: &mut Vec<PhaseLog>,
) -> Result<Option<Flow>, SolveError> {
    let net = cx.net;
    let fo = match fixed_value_flow(&cx.ext.net, lambda) {
        Ok(f) => f,
        Err(MaxFlowError::Infeasible { .. }) => {
            guess.verdict = Verdict::TooLargeForExtended;
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    let (mut fo, _) = acyclic_extended_flow(&cx.ext, &fo)?;
    let threshold = Q::from_integer(2 * (cx.k * cx.delta) as i128);
    while max_excess(net, &acyclic_restriction(&cx.ext, &fo)) > threshold {
        if guess.iterations >= cx.cap {
            return Err(SolveError::Invariant(format!(
                "improvement loop exceeded {} iterations",
                cx.cap
            )));
        }
        guess.iterations += 1;
        fo = match improve(cx, &fo, lambda, phases)? {
            Some(f) => f,
            None => {
                guess.verdict = Verdict::StageFailure;
                return Ok(None);
            }
        };
    }
    let (flow, _, _) = fix_up(net, &acyclic_restriction(&cx.ext, &fo), true)?;
    if is_feasible(net, &flow) && value(net, &flow)? == lambda {
        Ok(Some(flow))
    } else {
        guess.verdict = Verdict::FixedTooSmall;
        Ok(None)
    }
}

fn setup(net: &FlowNetwork) -> Result<(Context<'_>, ScalingReport), SolveError> {
    if !net.is_integral() {
        return Err(SolveError::NonIntegral);
    }
    let ext = build_extended(net)?;
    let extended_value = MaxFlow::new(&ext.net.graph, &ext.net.cap)
        .source(ext.s)
        .sink(ext.t)
        .run()?
        .value;
    let k = net.k();
    let cx = Context {
        net,
        ext,
        k,
        delta: net.max_degree(),
        cap: iteration_cap(k, net.max_vertex_cap()),
    };
    let report = ScalingReport {
        extended_value,
        guesses: Vec::new(),
        phases: Vec::new(),
        iteration_cap: cx.cap,
    };
    Ok((cx, report))
}

/// Runs the pipeline for one guess `λ`; `Some` when the guess is accepted.
pub fn try_value(
    net: &FlowNetwork,
    lambda: Q,
) -> Result<(Option<Flow>, ScalingReport), SolveError> {
    let (cx, mut report) = setup(net)?;
    let flow = attempt(&cx, lambda, &mut report)?;
    Ok((flow, report))
}

pub fn solve_scaling(net: &FlowNetwork) -> Result<(Solution, ScalingReport), SolveError> {
    let (cx, mut report) = setup(net)?;
    let extended_value = report.extended_value;
    let mut lo = Q::zero();
    let mut hi = extended_value.floor();
    let mut best = None;
    while lo < hi {
        let mid = ((lo + hi + Q::one()) / Q::from_integer(2)).floor();
        match attempt(&cx, mid, &mut report)? {
            Some(f) => {
                lo = mid;
                best = Some(f);
            }
            None => hi = mid - Q::one(),
        }
    }
    let flow = match best {
        Some(f) => f,
        None => attempt(&cx, lo, &mut report)?
            .ok_or_else(|| SolveError::Invariant(format!("guess {lo} was rejected")))?,
    };
    let v = value(net, &flow)?;
    Ok((Solution { flow, value: v }, report))
}
