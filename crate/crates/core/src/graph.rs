//! Directed multigraph stored as dart pairs.
//!
//! Edge `e` owns darts `2e` (the arc as given, tail to head) and `2e + 1`
//! (its reversal). Every arc therefore has a reversal partner and
//! `rev(rev(d)) = d`.

use std::fmt;

/// One directed side of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(pub usize);

impl Dart {
    pub fn forward(edge: usize) -> Dart {
        Dart(edge << 1)
    }

    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    pub fn edge(self) -> usize {
        self.0 >> 1
    }

    /// True for the dart that carries the arc in its given orientation.
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_forward() { '+' } else { '-' };
        write!(f, "{}{}", sign, self.edge())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    tails: Vec<usize>,
    out: Vec<Vec<Dart>>,
}

impl Graph {
    pub fn new(vertex_count: usize) -> Graph {
        Graph {
            tails: Vec::new(),
            out: vec![Vec::new(); vertex_count],
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    /// Adds the arc `tail -> head` and returns its forward dart.
    pub fn add_edge(&mut self, tail: usize, head: usize) -> Dart {
        let d = Dart(self.tails.len());
        self.tails.push(tail);
        self.tails.push(head);
        self.out[tail].push(d);
        self.out[head].push(d.rev());
        d
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.tails.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.tails.len()
    }

    pub fn tail(&self, d: Dart) -> usize {
        self.tails[d.0]
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tails[d.0 ^ 1]
    }

    /// Darts leaving `v`, in insertion order (ascending dart index).
    pub fn out_darts(&self, v: usize) -> &[Dart] {
        &self.out[v]
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.tails.len()).map(Dart)
    }

    /// Number of edges incident to `v` (a loop would count twice).
    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// A copy with every arc reversed: dart `d` of the copy is dart `rev(d)` here.
    pub fn reversed(&self) -> Graph {
        let mut g = Graph::new(self.vertex_count());
        for e in 0..self.edge_count() {
            let d = Dart::forward(e);
            g.add_edge(self.head(d), self.tail(d));
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rev_is_a_fixed_point_free_involution() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        for d in g.darts() {
            assert_ne!(d, d.rev());
            assert_eq!(d.rev().rev(), d);
            assert_eq!(g.tail(d), g.head(d.rev()));
        }
    }

    #[test]
    fn out_darts_include_reversals() {
        let mut g = Graph::new(2);
        let d = g.add_edge(0, 1);
        assert_eq!(g.out_darts(0), &[d]);
        assert_eq!(g.out_darts(1), &[d.rev()]);
        assert_eq!(d.to_string(), "+0");
        assert_eq!(d.rev().to_string(), "-0");
    }
}
