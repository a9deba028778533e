//! Combinatorial plane embeddings given by rotation systems, their faces and
//! their duals.
//!
//! The rotation at a vertex lists the darts leaving it in clockwise order.
//! Faces are traced by the rule `next(d) = succ_{head(d)}(rev(d))`, which keeps
//! each face on the left of its darts. Apex vertices and every dart touching
//! one are left out of rotations, faces and duals.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::graph::{Dart, Graph};
use crate::num::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("malformed rotation at vertex {vertex}: {detail}")]
    MalformedRotation { vertex: usize, detail: String },
    #[error("Euler check failed on component {component}: V={vertices} E={edges} F={faces}")]
    EulerViolation {
        component: usize,
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    #[error("outer-face marker {0} is not a planar dart")]
    BadOuterMarker(Dart),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("negative length {length} on dart {dart}")]
    NegativeLength { dart: Dart, length: Q },
    #[error("expected {expected} lengths, got {got}")]
    LengthCount { expected: usize, got: usize },
}

const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Embedding {
    graph: Arc<Graph>,
    rotation: Vec<Vec<Dart>>,
    position: Vec<usize>,
    apex: Vec<bool>,
    face_of: Vec<usize>,
    faces: Vec<Vec<Dart>>,
    face_component: Vec<usize>,
    outer: Vec<usize>,
}

impl Embedding {
    pub fn new(
        graph: Arc<Graph>,
        rotation: Vec<Vec<Dart>>,
        apices: &[usize],
    ) -> Result<Embedding, EmbeddingError> {
        Embedding::with_outer(graph, rotation, apices, &[])
    }

    /// Builds and validates an embedding. For each connected component of the
    /// planar part, the outer face is the face of the first marker dart lying
    /// in that component, or else the face of the component's smallest dart.
    pub fn with_outer(
        graph: Arc<Graph>,
        mut rotation: Vec<Vec<Dart>>,
        apices: &[usize],
        outer_markers: &[Dart],
    ) -> Result<Embedding, EmbeddingError> {
        let n = graph.vertex_count();
        let mut apex = vec![false; n];
        for &a in apices {
            apex[a] = true;
        }
        if rotation.len() > n {
            return Err(EmbeddingError::MalformedRotation {
                vertex: n,
                detail: "rotation given for a vertex that does not exist".into(),
            });
        }
        rotation.resize(n, Vec::new());

        let planar = |d: Dart| !apex[graph.tail(d)] && !apex[graph.head(d)];
        let mut position = vec![NONE; graph.dart_count()];
        for v in 0..n {
            if apex[v] {
                if !rotation[v].is_empty() {
                    return Err(EmbeddingError::MalformedRotation {
                        vertex: v,
                        detail: "apex vertices take no rotation".into(),
                    });
                }
                continue;
            }
            for (i, &d) in rotation[v].iter().enumerate() {
                if d.0 >= graph.dart_count() || graph.tail(d) != v || !planar(d) {
                    return Err(EmbeddingError::MalformedRotation {
                        vertex: v,
                        detail: format!("dart {d} does not leave this vertex"),
                    });
                }
                if position[d.0] != NONE {
                    return Err(EmbeddingError::MalformedRotation {
                        vertex: v,
                        detail: format!("dart {d} listed twice"),
                    });
                }
                position[d.0] = i;
            }
            if let Some(&d) = graph
                .out_darts(v)
                .iter()
                .find(|&&d| planar(d) && position[d.0] == NONE)
            {
                return Err(EmbeddingError::MalformedRotation {
                    vertex: v,
                    detail: format!("dart {d} missing"),
                });
            }
        }

        let mut emb = Embedding {
            graph,
            rotation,
            position,
            apex,
            face_of: Vec::new(),
            faces: Vec::new(),
            face_component: Vec::new(),
            outer: Vec::new(),
        };
        emb.trace_faces();
        emb.check_euler_and_pick_outer(outer_markers)?;
        Ok(emb)
    }

    fn trace_faces(&mut self) {
        let mut face_of = vec![NONE; self.graph.dart_count()];
        let mut faces = Vec::new();
        for start in self.graph.darts() {
            if face_of[start.0] != NONE || !self.is_planar_dart(start) {
                continue;
            }
            let id = faces.len();
            let mut boundary = Vec::new();
            let mut d = start;
            loop {
                face_of[d.0] = id;
                boundary.push(d);
                d = self.next_in_face(d);
                if d == start {
                    break;
                }
            }
            faces.push(boundary);
        }
        self.face_of = face_of;
        self.faces = faces;
    }

    fn check_euler_and_pick_outer(&mut self, markers: &[Dart]) -> Result<(), EmbeddingError> {
        let g = &self.graph;
        let n = g.vertex_count();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut [usize], mut x: usize) -> usize {
            while dsu[x] != x {
                dsu[x] = dsu[dsu[x]];
                x = dsu[x];
            }
            x
        }
        for e in 0..g.edge_count() {
            let d = Dart::forward(e);
            if self.is_planar_dart(d) {
                let (a, b) = (find(&mut dsu, g.tail(d)), find(&mut dsu, g.head(d)));
                dsu[a] = b;
            }
        }
        // Components are numbered by first appearance along ascending darts.
        let mut comp_of_root = vec![NONE; n];
        let mut counts: Vec<(usize, usize, usize)> = Vec::new();
        let mut first_dart: Vec<Dart> = Vec::new();
        for d in g.darts() {
            if !self.is_planar_dart(d) {
                continue;
            }
            let r = find(&mut dsu, g.tail(d));
            if comp_of_root[r] == NONE {
                comp_of_root[r] = counts.len();
                counts.push((0, 0, 0));
                first_dart.push(d);
            }
        }
        for v in 0..n {
            if !self.apex[v] && !self.rotation[v].is_empty() {
                let c = comp_of_root[find(&mut dsu, v)];
                counts[c].0 += 1;
            }
        }
        for e in 0..g.edge_count() {
            let d = Dart::forward(e);
            if self.is_planar_dart(d) {
                let c = comp_of_root[find(&mut dsu, g.tail(d))];
                counts[c].1 += 1;
            }
        }
        let mut face_component = Vec::with_capacity(self.faces.len());
        for face in &self.faces {
            let c = comp_of_root[find(&mut dsu, g.tail(face[0]))];
            counts[c].2 += 1;
            face_component.push(c);
        }
        for (c, &(v, e, f)) in counts.iter().enumerate() {
            if v as i64 - e as i64 + f as i64 != 2 {
                return Err(EmbeddingError::EulerViolation {
                    component: c,
                    vertices: v,
                    edges: e,
                    faces: f,
                });
            }
        }
        let mut outer: Vec<usize> = first_dart.iter().map(|&d| self.face_of[d.0]).collect();
        let mut marked = vec![false; outer.len()];
        for &m in markers {
            if m.0 >= g.dart_count() || !self.is_planar_dart(m) {
                return Err(EmbeddingError::BadOuterMarker(m));
            }
            let c = comp_of_root[find(&mut dsu, g.tail(m))];
            if !marked[c] {
                marked[c] = true;
                outer[c] = self.face_of[m.0];
            }
        }
        self.face_component = face_component;
        self.outer = outer;
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn is_apex(&self, v: usize) -> bool {
        self.apex[v]
    }

    pub fn apices(&self) -> Vec<usize> {
        (0..self.apex.len()).filter(|&v| self.apex[v]).collect()
    }

    pub fn is_planar_dart(&self, d: Dart) -> bool {
        !self.apex[self.graph.tail(d)] && !self.apex[self.graph.head(d)]
    }

    /// Clockwise order of the planar darts leaving `v`.
    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    /// Clockwise successor of `d` around its tail.
    pub fn rotation_succ(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.graph.tail(d)];
        rot[(self.position[d.0] + 1) % rot.len()]
    }

    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.rotation_succ(d.rev())
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Face on the left of `d` (the face whose boundary contains `d`).
    pub fn left_face(&self, d: Dart) -> Option<usize> {
        let f = self.face_of[d.0];
        (f != NONE).then_some(f)
    }

    pub fn right_face(&self, d: Dart) -> Option<usize> {
        self.left_face(d.rev())
    }

    pub fn component_count(&self) -> usize {
        self.outer.len()
    }

    pub fn face_component(&self, face: usize) -> usize {
        self.face_component[face]
    }

    /// The designated infinite face of each component of the planar part.
    pub fn outer_faces(&self) -> &[usize] {
        &self.outer
    }

    pub fn is_outer(&self, face: usize) -> bool {
        self.outer[self.face_component[face]] == face
    }

    /// Dual graph with one arc per planar dart, directed from the dart's left
    /// face to its right face and carrying `lengths[d]`.
    pub fn dual(&self, lengths: &[Q]) -> Result<DualGraph, DualError> {
        if lengths.len() != self.graph.dart_count() {
            return Err(DualError::LengthCount {
                expected: self.graph.dart_count(),
                got: lengths.len(),
            });
        }
        let mut out = vec![Vec::new(); self.faces.len()];
        let mut arcs = vec![None; self.graph.dart_count()];
        for d in self.graph.darts() {
            if !self.is_planar_dart(d) {
                continue;
            }
            let len = lengths[d.0];
            if len.is_negative() {
                return Err(DualError::NegativeLength { dart: d, length: len });
            }
            let (l, r) = (self.face_of[d.0], self.face_of[d.rev().0]);
            arcs[d.0] = Some((l, r));
            out[l].push(d);
        }
        Ok(DualGraph {
            arcs,
            out,
            lengths: lengths.to_vec(),
        })
    }
}

/// Dual of an embedding: dual vertices are faces, dual arcs are indexed by
/// the primal dart they cross.
#[derive(Debug, Clone)]
pub struct DualGraph {
    arcs: Vec<Option<(usize, usize)>>,
    out: Vec<Vec<Dart>>,
    lengths: Vec<Q>,
}

impl DualGraph {
    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.is_some()).count()
    }

    /// `(from, to)` faces of the dual arc crossing `d`.
    pub fn arc(&self, d: Dart) -> Option<(usize, usize)> {
        self.arcs[d.0]
    }

    pub fn length(&self, d: Dart) -> Q {
        self.lengths[d.0]
    }

    /// Shortest-path distances from the given roots (label-setting, all
    /// lengths nonnegative). Unreachable faces get `None`.
    pub fn distances(&self, roots: &[usize]) -> Vec<Option<Q>> {
        let mut dist: Vec<Option<Q>> = vec![None; self.out.len()];
        let mut heap = BinaryHeap::new();
        for &r in roots {
            dist[r] = Some(Q::zero());
            heap.push(Reverse((Q::zero(), r)));
        }
        let mut done = vec![false; self.out.len()];
        while let Some(Reverse((du, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &d in &self.out[u] {
                let (_, w) = self.arcs[d.0].expect("dual arc");
                let cand = du + self.lengths[d.0];
                if dist[w].is_none_or(|old| cand < old) {
                    dist[w] = Some(cand);
                    heap.push(Reverse((cand, w)));
                }
            }
        }
        dist
    }
}
