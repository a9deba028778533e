//! Flow-cycle cancellation.
//!
//! [`cancel_generic`] removes every directed flow cycle by repeated search.
//! [`potential_circulation`] builds the face-potential circulation on a plane
//! graph that leaves no residual cycle of one orientation, and
//! [`cancel_ccw_then_cw`] chains two such passes so that the flow restricted
//! to the original arcs of an extended network becomes acyclic.
//!
//! Orientation convention: a cycle is clockwise when the region it bounds
//! lies on its right, that is, on the right face of each of its darts.

use num_traits::{Signed, Zero};

use crate::embedding::Embedding;
use crate::flow::{residual_caps, Flow, FlowError};
use crate::graph::{Dart, Graph};
use crate::network::FlowNetwork;
use crate::num::{Cap, Q};

/// Cancels directed cycles of positive flow until none remain. Flow only
/// decreases, per dart, and the balance of every vertex is unchanged.
pub fn cancel_generic(g: &Graph, f: &Flow) -> Flow {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = g.vertex_count();
    let mut f = f.clone();
    let mut color = vec![WHITE; n];
    let mut iter = vec![0usize; n];
    let mut root = 0;
    while root < n {
        if color[root] != WHITE {
            root += 1;
            continue;
        }
        // Darts of the current DFS path, in order.
        let mut path: Vec<Dart> = Vec::new();
        let mut stack = vec![root];
        color[root] = GRAY;
        iter[root] = 0;
        let mut restart = false;
        while let Some(&v) = stack.last() {
            let out = g.out_darts(v);
            let mut advanced = false;
            while iter[v] < out.len() {
                let d = out[iter[v]];
                if !f.on(d).is_positive() {
                    iter[v] += 1;
                    continue;
                }
                let w = g.head(d);
                match color[w] {
                    WHITE => {
                        color[w] = GRAY;
                        iter[w] = 0;
                        stack.push(w);
                        path.push(d);
                        advanced = true;
                        break;
                    }
                    GRAY => {
                        let at = stack.iter().position(|&u| u == w).unwrap();
                        let mut cycle: Vec<Dart> = path[at..].to_vec();
                        cycle.push(d);
                        let amount = cycle.iter().map(|&c| f.on(c)).min().unwrap();
                        for &c in &cycle {
                            f.push(c, -amount);
                        }
                        restart = true;
                        break;
                    }
                    _ => iter[v] += 1,
                }
            }
            if restart {
                break;
            }
            if !advanced {
                color[v] = BLACK;
                stack.pop();
                path.pop();
            }
        }
        if restart {
            // Finished vertices stay finished: flow only went down.
            for v in stack {
                color[v] = WHITE;
            }
        }
    }
    f
}

/// Which residual cycles a potential pass removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
}

/// Dual distances `Φ` from the outer face of each component. For
/// `Clockwise` the dual arc of `d` runs from its left face to its right face
/// with length `residual[d]`; for `CounterClockwise` it runs the other way.
pub fn face_potential(emb: &Embedding, residual: &[Q], orientation: Orientation) -> Vec<Q> {
    let lengths: Vec<Q> = emb
        .graph()
        .darts()
        .map(|d| {
            if !emb.is_planar_dart(d) {
                return Q::zero();
            }
            match orientation {
                Orientation::Clockwise => residual[d.0],
                Orientation::CounterClockwise => residual[d.rev().0],
            }
        })
        .collect();
    let dual = emb.dual(&lengths).expect("residual capacities are nonnegative");
    dual.distances(emb.outer_faces())
        .into_iter()
        .map(|d| d.expect("every face reaches its outer face"))
        .collect()
}

/// The circulation `g(d) = max{0, Φ(right d) - Φ(left d)}` (clockwise) or
/// `max{0, Φ(left d) - Φ(right d)}` (counter-clockwise). It respects
/// `residual` and leaves no residual cycle of the given orientation.
pub fn potential_circulation(emb: &Embedding, residual: &[Q], orientation: Orientation) -> Flow {
    let phi = face_potential(emb, residual, orientation);
    let g = emb.graph();
    let mut net = vec![Q::zero(); g.edge_count()];
    for (e, x) in net.iter_mut().enumerate() {
        let d = Dart::forward(e);
        if let (Some(l), Some(r)) = (emb.left_face(d), emb.right_face(d)) {
            *x = match orientation {
                Orientation::Clockwise => phi[r] - phi[l],
                Orientation::CounterClockwise => phi[l] - phi[r],
            };
        }
    }
    Flow::from_net(net)
}

/// Capacities of one cancellation pass: the darts of the first
/// `base_edges` edges and every apex dart are capped at the current flow,
/// every other planar dart keeps its capacity.
pub fn pass_caps(net: &FlowNetwork, base_edges: usize, f: &Flow) -> Vec<Cap> {
    let emb = net.embedding.as_ref().expect("plane network");
    net.graph
        .darts()
        .map(|d| {
            if !emb.is_planar_dart(d) || d.edge() < base_edges {
                Cap::Finite(f.on(d))
            } else {
                net.cap[d.0]
            }
        })
        .collect()
}

fn pass(
    net: &FlowNetwork,
    base_edges: usize,
    f: &Flow,
    orientation: Orientation,
) -> Result<Flow, FlowError> {
    let emb = net.embedding.as_ref().expect("plane network");
    let caps = pass_caps(net, base_edges, f);
    let residual: Vec<Q> = residual_caps(&net.graph, &caps, f)?
        .into_iter()
        .map(|c| c.finite().expect("pass capacities on planar darts are finite"))
        .collect();
    Ok(f.add(&potential_circulation(emb, &residual, orientation)))
}

/// Both passes of the cancellation, with the intermediate flow kept.
#[derive(Debug, Clone)]
pub struct CancelPasses {
    pub after_first: Flow,
    pub output: Flow,
}

/// Makes the restriction of `f` to the first `base_edges` edges acyclic
/// while keeping the value. The first pass caps those edges at `f` and
/// removes clockwise residual cycles, which are exactly the reversals of
/// counter-clockwise flow cycles; the second pass does the same for the
/// other orientation. Flow on the base edges never increases.
pub fn cancel_ccw_then_cw(
    net: &FlowNetwork,
    base_edges: usize,
    f: &Flow,
) -> Result<CancelPasses, FlowError> {
    let after_first = pass(net, base_edges, f, Orientation::Clockwise)?;
    let output = pass(net, base_edges, &after_first, Orientation::CounterClockwise)?;
    Ok(CancelPasses {
        after_first,
        output,
    })
}

pub fn cancel_cycles(net: &FlowNetwork, base_edges: usize, f: &Flow) -> Result<Flow, FlowError> {
    Ok(cancel_ccw_then_cw(net, base_edges, f)?.output)
}
