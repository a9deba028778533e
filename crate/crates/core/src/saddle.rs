//! Alternation numbers, indices and saddles of an acyclic plane flow.
//!
//! Only darts with positive flow count. Around a vertex, each such dart is
//! incoming or outgoing; `α(v)` is the number of cyclic changes between the
//! two in rotation order and `index(v) = α(v)/2 - 1`. A saddle is a vertex
//! of index at least one.

use num_traits::{Signed, Zero};

use crate::embedding::Embedding;
use crate::flow::{excesses, is_acyclic, Flow};
use crate::graph::Dart;
use crate::network::FlowNetwork;
use crate::num::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SaddleError {
    #[error("the flow has a directed cycle")]
    NotAcyclic,
    #[error("the network has no embedding")]
    NotEmbedded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaddleReport {
    pub alpha: Vec<usize>,
    pub index: Vec<i64>,
    pub saddles: Vec<usize>,
    pub excess: Vec<Q>,
}

impl SaddleReport {
    /// Sum of the indices of all saddles.
    pub fn saddle_index_sum(&self) -> i64 {
        self.saddles.iter().map(|&v| self.index[v]).sum()
    }
}

fn cyclic_changes(pattern: &[bool]) -> usize {
    let k = pattern.len();
    (0..k).filter(|&i| pattern[i] != pattern[(i + 1) % k]).count()
}

/// `α(v)`: in/out changes of the positive darts around `v`.
pub fn alternation(emb: &Embedding, f: &Flow, v: usize) -> usize {
    let pattern: Vec<bool> = emb
        .rotation(v)
        .iter()
        .filter(|&&d| !f.along(d).is_zero())
        .map(|&d| f.along(d).is_positive())
        .collect();
    cyclic_changes(&pattern)
}

/// Alternation, index, saddles and excess for every vertex of `net`.
pub fn analyze(net: &FlowNetwork, f: &Flow) -> Result<SaddleReport, SaddleError> {
    let emb = net.embedding.as_ref().ok_or(SaddleError::NotEmbedded)?;
    if !is_acyclic(&net.graph, f) {
        return Err(SaddleError::NotAcyclic);
    }
    let alpha: Vec<usize> = (0..net.vertex_count())
        .map(|v| alternation(emb, f, v))
        .collect();
    let index: Vec<i64> = alpha.iter().map(|&a| a as i64 / 2 - 1).collect();
    let saddles = (0..alpha.len()).filter(|&v| index[v] >= 1).collect();
    Ok(SaddleReport {
        alpha,
        index,
        saddles,
        excess: excesses(net, f),
    })
}

/// Tallies for one connected component of the positive-flow subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTally {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub vertex_alternations: usize,
    pub face_alternations: usize,
    pub index_sum: i64,
}

impl ComponentTally {
    /// `2E = Σα(v) + Σα(φ)` and `Σ index(v) + Σ index(φ) = -2`.
    pub fn holds(&self) -> bool {
        2 * self.edges == self.vertex_alternations + self.face_alternations && self.index_sum == -2
    }
}

/// Evaluates the alternation identity on each component of the plane
/// subgraph formed by the edges that carry flow, with faces traced on the
/// induced rotation system.
pub fn check_index_identity(emb: &Embedding, f: &Flow) -> Vec<ComponentTally> {
    let g = emb.graph();
    let n = g.vertex_count();
    let carries = |d: Dart| !f.net(d.edge()).is_zero() && emb.is_planar_dart(d);
    let rotation: Vec<Vec<Dart>> = (0..n)
        .map(|v| emb.rotation(v).iter().copied().filter(|&d| carries(d)).collect())
        .collect();
    let mut position = vec![usize::MAX; g.dart_count()];
    for rot in &rotation {
        for (i, d) in rot.iter().enumerate() {
            position[d.0] = i;
        }
    }
    let next = |d: Dart| {
        let r = d.rev();
        let rot = &rotation[g.tail(r)];
        rot[(position[r.0] + 1) % rot.len()]
    };

    let mut comp = vec![usize::MAX; n];
    let mut tallies: Vec<ComponentTally> = Vec::new();
    for root in 0..n {
        if rotation[root].is_empty() || comp[root] != usize::MAX {
            continue;
        }
        let c = tallies.len();
        let mut tally = ComponentTally {
            vertices: 0,
            edges: 0,
            faces: 0,
            vertex_alternations: 0,
            face_alternations: 0,
            index_sum: 0,
        };
        let mut stack = vec![root];
        comp[root] = c;
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for &d in &rotation[v] {
                let w = g.head(d);
                if comp[w] == usize::MAX {
                    comp[w] = c;
                    stack.push(w);
                }
            }
        }
        for &v in &members {
            let a = alternation(emb, f, v);
            tally.vertices += 1;
            tally.edges += rotation[v].len();
            tally.vertex_alternations += a;
            tally.index_sum += a as i64 / 2 - 1;
        }
        tally.edges /= 2;
        let mut seen = vec![false; g.dart_count()];
        for &v in &members {
            for &start in &rotation[v] {
                if seen[start.0] {
                    continue;
                }
                let mut pattern = Vec::new();
                let mut d = start;
                loop {
                    seen[d.0] = true;
                    pattern.push(f.along(d).is_positive());
                    d = next(d);
                    if d == start {
                        break;
                    }
                }
                let a = cyclic_changes(&pattern);
                tally.faces += 1;
                tally.face_alternations += a;
                tally.index_sum += a as i64 / 2 - 1;
            }
        }
        tallies.push(tally);
    }
    tallies
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::Graph;
    use crate::num::{q, Cap};

    /// Hub 0 with four spokes to 1..4 in clockwise order, arcs oriented
    /// by `into_hub`, wrapped in an outer 4-cycle of zero-capacity edges.
    fn hub(into_hub: [bool; 4]) -> (FlowNetwork, Flow) {
        let mut g = Graph::new(5);
        let mut spokes = Vec::new();
        for (i, &inward) in into_hub.iter().enumerate() {
            let leaf = i + 1;
            let d = if inward { g.add_edge(leaf, 0).rev() } else { g.add_edge(0, leaf) };
            spokes.push(d);
        }
        let rot = vec![
            spokes.clone(),
            vec![spokes[0].rev()],
            vec![spokes[1].rev()],
            vec![spokes[2].rev()],
            vec![spokes[3].rev()],
        ];
        let graph = Arc::new(g);
        let emb = Embedding::new(graph.clone(), rot, &[]).unwrap();
        let mut cap = Vec::new();
        for _ in 0..4 {
            cap.extend([Cap::int(1), Cap::zero()]);
        }
        let sources: Vec<usize> = (0..4).filter(|&i| into_hub[i]).map(|i| i + 1).collect();
        let sinks: Vec<usize> = (0..4).filter(|&i| !into_hub[i]).map(|i| i + 1).collect();
        let vcap = vec![Cap::int(1), Cap::Infinite, Cap::Infinite, Cap::Infinite, Cap::Infinite];
        let net = FlowNetwork::new(graph, Some(Arc::new(emb)), cap, vcap, sources, sinks).unwrap();
        let f = Flow::from_net(vec![q(1); 4]);
        (net, f)
    }

    #[test]
    fn alternating_hub_is_a_saddle() {
        let (net, f) = hub([true, false, true, false]);
        let r = analyze(&net, &f).unwrap();
        assert_eq!(r.alpha[0], 4);
        assert_eq!(r.index[0], 1);
        assert_eq!(r.saddles, vec![0]);
        assert_eq!(r.excess[0], q(1));
        assert_eq!(r.alpha[1], 0);
        assert_eq!(r.index[1], -1);
    }

    #[test]
    fn grouped_hub_is_not_a_saddle() {
        let (net, f) = hub([true, true, false, false]);
        let r = analyze(&net, &f).unwrap();
        assert_eq!(r.alpha[0], 2);
        assert_eq!(r.index[0], 0);
        assert!(r.saddles.is_empty());
    }

    #[test]
    fn identity_holds_on_stars_and_empty_flows() {
        for pattern in [[true, false, true, false], [true, true, false, false]] {
            let (net, f) = hub(pattern);
            let emb = net.embedding.as_ref().unwrap();
            let tallies = check_index_identity(emb, &f);
            assert_eq!(tallies.len(), 1);
            assert!(tallies[0].holds(), "{:?}", tallies[0]);
            assert!(check_index_identity(emb, &Flow::zero(4)).is_empty());
        }
    }
}
