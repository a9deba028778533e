//! Seeded random plane instances on a grid with diagonals.
//!
//! Vertex `(i, j)` of an `r × c` grid (`r = ⌊√n⌋`, `c = ⌊n/r⌋`) gets id
//! `i·c + j`. Each cell receives one diagonal with probability `density`.
//! Rotations come from the geometry: darts are sorted by compass direction,
//! clockwise from north (codes 0 to 7). Pendant sources are inserted first
//! in the rotation of their anchor.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::{build_instance, FormatError, Instance, Regime};
use crate::graph::Dart;
use crate::network::Role;
use crate::num::{Cap, Q};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("need between 2 and {max} terminals, got {k}")]
    TerminalCount { k: usize, max: usize },
    #[error("capacity bound must be at least 1")]
    CapacityBound,
    #[error("density must lie in [0, 1]")]
    Density,
    #[error(transparent)]
    Build(#[from] FormatError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub k: usize,
    /// Largest arc and vertex capacity. `1` gives a unit instance where every
    /// inner vertex has capacity 1.
    pub u: i128,
    pub regime: Regime,
    pub density: f64,
    pub inner_terminals: bool,
    /// Sources become new degree-one vertices hanging off distinct interior
    /// grid vertices; only the sinks are drawn from the terminal pool.
    pub pendant_sources: bool,
}

impl Default for GenParams {
    fn default() -> GenParams {
        GenParams {
            n: 16,
            k: 3,
            u: 8,
            regime: Regime::Integer,
            density: 0.5,
            inner_terminals: false,
            pendant_sources: false,
        }
    }
}

const E: u8 = 2;
const SE: u8 = 3;
const S: u8 = 4;
const SW: u8 = 5;

fn opposite(dir: u8) -> u8 {
    (dir + 4) % 8
}

fn random_cap(rng: &mut ChaCha8Rng, u: i128, regime: Regime) -> Q {
    match regime {
        Regime::Integer => Q::from_integer(rng.gen_range(1..=u)),
        Regime::Rational => {
            let den = rng.gen_range(1..=10);
            Q::new(rng.gen_range(1..=u * den), den)
        }
    }
}

/// Deterministic instance for `seed`.
pub fn generate(seed: u64, p: &GenParams) -> Result<Instance, ParamError> {
    if p.n < 2 {
        return Err(ParamError::TooFewVertices(p.n));
    }
    if p.u < 1 {
        return Err(ParamError::CapacityBound);
    }
    if !(0.0..=1.0).contains(&p.density) {
        return Err(ParamError::Density);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (p.n as f64).sqrt().floor() as usize;
    let cols = p.n / rows;
    let n = rows * cols;
    let id = |i: usize, j: usize| i * cols + j;

    // Undirected skeleton: (a, b, direction from a to b).
    let mut skeleton: Vec<(usize, usize, u8)> = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                skeleton.push((id(i, j), id(i, j + 1), E));
            }
            if i + 1 < rows {
                skeleton.push((id(i, j), id(i + 1, j), S));
            }
            if i + 1 < rows && j + 1 < cols && rng.gen_bool(p.density) {
                if rng.gen_bool(0.5) {
                    skeleton.push((id(i, j), id(i + 1, j + 1), SE));
                } else {
                    skeleton.push((id(i, j + 1), id(i + 1, j), SW));
                }
            }
        }
    }

    let perimeter: Vec<usize> = if rows == 1 || cols == 1 {
        (0..n).collect()
    } else {
        let mut ring = Vec::new();
        ring.extend((0..cols).map(|j| id(0, j)));
        ring.extend((1..rows).map(|i| id(i, cols - 1)));
        ring.extend((0..cols - 1).rev().map(|j| id(rows - 1, j)));
        ring.extend((1..rows - 1).rev().map(|i| id(i, 0)));
        ring
    };
    let pool: Vec<usize> = if p.inner_terminals {
        (0..n).collect()
    } else {
        perimeter.clone()
    };
    let interior: Vec<usize> = (0..n).filter(|v| !perimeter.contains(v)).collect();
    let fits = |k: usize| {
        let sources = k.div_ceil(2);
        if !p.pendant_sources {
            return k <= pool.len();
        }
        let taken = if p.inner_terminals { sources } else { 0 };
        sources <= interior.len() && k - sources + taken <= pool.len()
    };
    if p.k < 2 || !fits(p.k) {
        let max = (2..=2 * n).take_while(|&k| fits(k)).last().unwrap_or(0);
        return Err(ParamError::TerminalCount { k: p.k, max });
    }
    let source_count = p.k.div_ceil(2);
    let mut roles = vec![Role::Inner; n];
    let mut anchors: Vec<usize> = Vec::new();
    if p.pendant_sources {
        anchors = interior.choose_multiple(&mut rng, source_count).copied().collect();
        let sinks: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|v| !anchors.contains(v))
            .collect::<Vec<_>>()
            .choose_multiple(&mut rng, p.k - source_count)
            .copied()
            .collect();
        for v in sinks {
            roles[v] = Role::Sink;
        }
    } else {
        let chosen: Vec<usize> = pool.choose_multiple(&mut rng, p.k).copied().collect();
        for (i, &v) in chosen.iter().enumerate() {
            roles[v] = if i < source_count { Role::Source } else { Role::Sink };
        }
    }

    // Orient each skeleton edge, flipping toward sources' out-arcs and
    // sinks' in-arcs; edges joining two sources or two sinks are dropped.
    let mut arcs: Vec<(usize, usize, Cap)> = Vec::new();
    let mut rot: Vec<Vec<(u8, Dart)>> = vec![Vec::new(); n];
    let mut outer_candidates: Vec<(usize, Dart)> = Vec::new();
    for &(a, b, dir) in &skeleton {
        let mut forward = rng.gen_bool(0.5);
        let cap = Cap::Finite(random_cap(&mut rng, p.u, p.regime));
        match (roles[a], roles[b]) {
            (Role::Source, Role::Source) | (Role::Sink, Role::Sink) => continue,
            (Role::Source, _) | (_, Role::Sink) => forward = true,
            (_, Role::Source) | (Role::Sink, _) => forward = false,
            _ => {}
        }
        let e = arcs.len();
        let (tail, head) = if forward { (a, b) } else { (b, a) };
        arcs.push((tail, head, cap));
        // Dart leaving `a` toward `b`.
        let from_a = if forward {
            Dart::forward(e)
        } else {
            Dart::forward(e).rev()
        };
        rot[a].push((dir, from_a));
        rot[b].push((opposite(dir), from_a.rev()));
        // Faces lie on the left of their darts, so the outer face runs
        // eastward along the top row, southward down the right column,
        // westward along the bottom and northward up the left column.
        let (ai, aj) = (a / cols, a % cols);
        if dir == E && ai == 0 {
            outer_candidates.push((0, from_a));
        } else if dir == S && aj == cols - 1 {
            outer_candidates.push((1, from_a));
        } else if dir == E && ai == rows - 1 {
            outer_candidates.push((2, from_a.rev()));
        } else if dir == S && aj == 0 {
            outer_candidates.push((3, from_a.rev()));
        }
    }
    outer_candidates.sort_by_key(|&(side, d)| (side, d.0));
    let markers: Vec<Dart> = outer_candidates.into_iter().map(|(_, d)| d).collect();
    let mut rotation: Vec<Vec<Dart>> = rot
        .into_iter()
        .map(|mut v| {
            v.sort_by_key(|&(dir, _)| dir);
            v.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    for &a in &anchors {
        let e = arcs.len();
        let cap = Cap::Finite(random_cap(&mut rng, p.u, p.regime));
        arcs.push((rotation.len(), a, cap));
        rotation[a].insert(0, Dart::forward(e).rev());
        rotation.push(vec![Dart::forward(e)]);
        roles.push(Role::Source);
    }

    let vcap: Vec<Cap> = (0..roles.len())
        .map(|v| {
            if roles[v] != Role::Inner {
                Cap::Infinite
            } else if p.u == 1 && p.regime == Regime::Integer {
                Cap::int(1)
            } else if rng.gen_bool(0.2) {
                Cap::Infinite
            } else {
                Cap::Finite(random_cap(&mut rng, p.u, p.regime))
            }
        })
        .collect();
    Ok(build_instance(
        p.regime,
        vcap,
        roles,
        arcs,
        rotation,
        markers,
        Vec::new(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::format::write_instance;

    #[test]
    fn same_seed_same_text() {
        let p = GenParams::default();
        let a = write_instance(&generate(7, &p).unwrap());
        let b = write_instance(&generate(7, &p).unwrap());
        assert_eq!(a, b);
        let c = write_instance(&generate(8, &p).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn nine_vertex_grid_with_three_terminals() {
        let p = GenParams {
            n: 9,
            k: 3,
            ..GenParams::default()
        };
        for seed in 0..20 {
            let inst = generate(seed, &p).unwrap();
            let net = &inst.network;
            assert_eq!(net.vertex_count(), 9);
            assert_eq!((net.sources.len(), net.sinks.len()), (2, 1));
            assert!(net.validate().is_ok());
        }
    }

    #[test]
    fn unit_mode_has_unit_capacities() {
        let p = GenParams {
            n: 20,
            k: 4,
            u: 1,
            ..GenParams::default()
        };
        let inst = generate(3, &p).unwrap();
        let net = &inst.network;
        for v in 0..net.vertex_count() {
            let expected = if net.is_terminal(v) { Cap::Infinite } else { Cap::int(1) };
            assert_eq!(net.vcap[v], expected);
        }
        for e in 0..net.edge_count() {
            assert_eq!(net.cap[2 * e], Cap::int(1));
        }
    }

    #[test]
    fn bad_params_are_rejected() {
        let p = GenParams {
            n: 1,
            ..GenParams::default()
        };
        assert_eq!(generate(0, &p).unwrap_err(), ParamError::TooFewVertices(1));
        let p = GenParams {
            n: 9,
            k: 9,
            ..GenParams::default()
        };
        assert!(matches!(generate(0, &p), Err(ParamError::TerminalCount { .. })));
    }
}
