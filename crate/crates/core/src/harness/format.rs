//! Plain-text instance files and flow dumps.
//!
//! ```text
//! pvflow-instance 1
//! regime integer
//! size 3 2
//! v 0 inf source
//! v 1 4 inner
//! v 2 inf sink
//! a 0 0 1 5
//! a 1 1 2 3
//! r 0 +0
//! r 1 +1 -0
//! r 2 -1
//! outer +0
//! ```
//!
//! `size` gives the vertex and arc counts. Vertex records carry a capacity
//! (`inf` or a number) and a role; arc records carry tail, head and
//! capacity. Rotation records list the darts leaving a vertex in clockwise
//! order, `+i` for arc `i` and `-i` for its reversal. `outer` names a dart
//! on the outer face of its component. Numbers are integers, `p/q` ratios or
//! finite decimals. Blank lines and lines starting with `#` are ignored.
//!
//! A terminal given a finite capacity is rewritten on load: a new source
//! `s'` with an arc `s' -> s` of that capacity replaces `s` (symmetrically
//! for sinks), and a `rewrite` record documents the change.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::embedding::Embedding;
use crate::flow::Flow;
use crate::graph::{Dart, Graph};
use crate::network::{FlowNetwork, NetworkError, Role};
use crate::num::{format_q, is_integral, parse_q, Cap, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {0}")]
    Validation(String),
}

impl From<NetworkError> for FormatError {
    fn from(e: NetworkError) -> FormatError {
        FormatError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Integer,
    Rational,
}

impl Regime {
    fn name(self) -> &'static str {
        match self {
            Regime::Integer => "integer",
            Regime::Rational => "rational",
        }
    }
}

/// A capacitated terminal replaced by a fresh uncapacitated one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub role: Role,
    pub terminal: usize,
    pub added: usize,
    pub arc: usize,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub network: FlowNetwork,
    pub regime: Regime,
    pub rewrites: Vec<Rewrite>,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    fields: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn new(number: usize, text: &'a str) -> Line<'a> {
        let mut fields = Vec::new();
        let mut start = None;
        for (i, ch) in text.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    fields.push((s + 1, &text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            fields.push((s + 1, &text[s..]));
        }
        Line {
            number,
            text,
            fields,
        }
    }

    fn error(&self, field: usize, message: impl Into<String>) -> FormatError {
        let column = self
            .fields
            .get(field)
            .map_or(self.text.len() + 1, |&(c, _)| c);
        FormatError::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn expect_len(&self, n: usize) -> Result<(), FormatError> {
        if self.fields.len() != n {
            return Err(self.error(
                self.fields.len().min(n),
                format!("expected {} fields, found {}", n, self.fields.len()),
            ));
        }
        Ok(())
    }

    fn index(&self, field: usize, bound: usize, what: &str) -> Result<usize, FormatError> {
        let (_, text) = self.fields[field];
        let i: usize = text
            .parse()
            .map_err(|_| self.error(field, format!("invalid {what} `{text}`")))?;
        if i >= bound {
            return Err(self.error(field, format!("unknown {what} {i}")));
        }
        Ok(i)
    }

    fn cap(&self, field: usize) -> Result<Cap, FormatError> {
        let (_, text) = self.fields[field];
        let c: Cap = text
            .parse()
            .map_err(|_| self.error(field, format!("invalid capacity `{text}`")))?;
        if let Cap::Finite(x) = c {
            if x < Q::from_integer(0) {
                return Err(self.error(field, "negative capacity"));
            }
        }
        Ok(c)
    }

    fn dart(&self, field: usize, arcs: usize) -> Result<Dart, FormatError> {
        let (_, text) = self.fields[field];
        let (sign, rest) = text.split_at(text.len().min(1));
        let i: usize = rest
            .parse()
            .map_err(|_| self.error(field, format!("invalid dart `{text}`")))?;
        if i >= arcs {
            return Err(self.error(field, format!("unknown arc {i}")));
        }
        match sign {
            "+" => Ok(Dart::forward(i)),
            "-" => Ok(Dart::forward(i).rev()),
            _ => Err(self.error(field, format!("invalid dart `{text}`"))),
        }
    }
}

fn dart_text(d: Dart) -> String {
    d.to_string()
}

/// Parses and validates an instance, applying the terminal rewrite.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, t)| Line::new(i + 1, t))
        .filter(|l| !l.fields.is_empty() && !l.fields[0].1.starts_with('#'));
    let header = lines.next().ok_or(FormatError::Validation("empty file".into()))?;
    if header.fields.iter().map(|f| f.1).collect::<Vec<_>>() != ["pvflow-instance", "1"] {
        return Err(header.error(0, "expected `pvflow-instance 1`"));
    }
    let regime_line = lines
        .next()
        .ok_or(FormatError::Validation("missing regime".into()))?;
    regime_line.expect_len(2)?;
    if regime_line.fields[0].1 != "regime" {
        return Err(regime_line.error(0, "expected `regime`"));
    }
    let regime = match regime_line.fields[1].1 {
        "integer" => Regime::Integer,
        "rational" => Regime::Rational,
        other => return Err(regime_line.error(1, format!("unknown regime `{other}`"))),
    };
    let size = lines
        .next()
        .ok_or(FormatError::Validation("missing size".into()))?;
    size.expect_len(3)?;
    if size.fields[0].1 != "size" {
        return Err(size.error(0, "expected `size`"));
    }
    let n = size.index(1, usize::MAX, "count")?;
    let m = size.index(2, usize::MAX, "count")?;

    let mut vcap: Vec<Option<Cap>> = vec![None; n];
    let mut roles = vec![Role::Inner; n];
    let mut arcs: Vec<Option<(usize, usize, Cap)>> = vec![None; m];
    let mut rotation: Vec<Option<Vec<Dart>>> = vec![None; n];
    let mut outer = Vec::new();
    let mut rewrites = Vec::new();
    let mut pending_rotations = Vec::new();
    for line in lines {
        match line.fields[0].1 {
            "v" => {
                line.expect_len(4)?;
                let v = line.index(1, n, "vertex")?;
                if vcap[v].is_some() {
                    return Err(line.error(1, format!("vertex {v} defined twice")));
                }
                vcap[v] = Some(line.cap(2)?);
                roles[v] = match line.fields[3].1 {
                    "source" => Role::Source,
                    "sink" => Role::Sink,
                    "inner" => Role::Inner,
                    other => return Err(line.error(3, format!("unknown role `{other}`"))),
                };
            }
            "a" => {
                line.expect_len(5)?;
                let e = line.index(1, m, "arc")?;
                if arcs[e].is_some() {
                    return Err(line.error(1, format!("arc {e} defined twice")));
                }
                let u = line.index(2, n, "vertex")?;
                let w = line.index(3, n, "vertex")?;
                if u == w {
                    return Err(line.error(3, "loops are not allowed"));
                }
                arcs[e] = Some((u, w, line.cap(4)?));
            }
            "r" => {
                if line.fields.len() < 2 {
                    return Err(line.error(1, "missing vertex"));
                }
                let v = line.index(1, n, "vertex")?;
                if rotation[v].is_some() {
                    return Err(line.error(1, format!("rotation of vertex {v} given twice")));
                }
                let darts = (2..line.fields.len())
                    .map(|i| line.dart(i, m))
                    .collect::<Result<Vec<_>, _>>()?;
                pending_rotations.push((line.number, v, darts.len()));
                rotation[v] = Some(darts);
            }
            "outer" => {
                line.expect_len(2)?;
                outer.push(line.dart(1, m)?);
            }
            "rewrite" => {
                line.expect_len(5)?;
                let role = match line.fields[1].1 {
                    "source" => Role::Source,
                    "sink" => Role::Sink,
                    other => return Err(line.error(1, format!("unknown role `{other}`"))),
                };
                rewrites.push(Rewrite {
                    role,
                    terminal: line.index(2, n, "vertex")?,
                    added: line.index(3, n, "vertex")?,
                    arc: line.index(4, m, "arc")?,
                });
            }
            other => return Err(line.error(0, format!("unknown record `{other}`"))),
        }
    }
    let vcap: Vec<Cap> = vcap
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| FormatError::Validation(format!("vertex {v} missing"))))
        .collect::<Result<_, _>>()?;
    let arcs: Vec<(usize, usize, Cap)> = arcs
        .into_iter()
        .enumerate()
        .map(|(e, a)| a.ok_or_else(|| FormatError::Validation(format!("arc {e} missing"))))
        .collect::<Result<_, _>>()?;
    let _ = pending_rotations;
    let rotation: Vec<Vec<Dart>> = rotation.into_iter().map(Option::unwrap_or_default).collect();
    build_instance(regime, vcap, roles, arcs, rotation, outer, rewrites)
}

/// Assembles and validates an instance from raw records.
pub fn build_instance(
    regime: Regime,
    mut vcap: Vec<Cap>,
    mut roles: Vec<Role>,
    mut arcs: Vec<(usize, usize, Cap)>,
    mut rotation: Vec<Vec<Dart>>,
    outer: Vec<Dart>,
    mut rewrites: Vec<Rewrite>,
) -> Result<Instance, FormatError> {
    if regime == Regime::Integer {
        let bad = arcs
            .iter()
            .map(|a| a.2)
            .chain(vcap.iter().copied())
            .filter_map(|c| c.finite())
            .find(|c| !is_integral(c));
        if let Some(c) = bad {
            return Err(FormatError::Validation(format!(
                "capacity {} is not an integer",
                format_q(&c)
            )));
        }
    }
    let n = vcap.len();
    for v in 0..n {
        if roles[v] == Role::Inner || vcap[v].is_infinite() {
            continue;
        }
        let added = vcap.len();
        let arc = arcs.len();
        let d = Dart::forward(arc);
        if roles[v] == Role::Source {
            arcs.push((added, v, vcap[v]));
            rotation.push(vec![d]);
            rotation[v].insert(0, d.rev());
        } else {
            arcs.push((v, added, vcap[v]));
            rotation.push(vec![d.rev()]);
            rotation[v].insert(0, d);
        }
        vcap.push(Cap::Infinite);
        roles.push(roles[v]);
        rewrites.push(Rewrite {
            role: roles[v],
            terminal: v,
            added,
            arc,
        });
        roles[v] = Role::Inner;
        vcap[v] = Cap::Infinite;
    }
    let mut g = Graph::new(vcap.len());
    let mut cap = Vec::with_capacity(2 * arcs.len());
    for &(u, w, c) in &arcs {
        g.add_edge(u, w);
        cap.push(c);
        cap.push(Cap::zero());
    }
    let graph = Arc::new(g);
    let emb = Embedding::with_outer(graph.clone(), rotation, &[], &outer)
        .map_err(|e| FormatError::Validation(e.to_string()))?;
    let sources = (0..roles.len()).filter(|&v| roles[v] == Role::Source).collect();
    let sinks = (0..roles.len()).filter(|&v| roles[v] == Role::Sink).collect();
    let network = FlowNetwork::new(graph, Some(Arc::new(emb)), cap, vcap, sources, sinks)?;
    Ok(Instance {
        network,
        regime,
        rewrites,
    })
}

/// Canonical text of an instance; `parse_instance` reads it back exactly.
pub fn write_instance(inst: &Instance) -> String {
    let net = &inst.network;
    let g = &net.graph;
    let mut out = String::new();
    writeln!(out, "pvflow-instance 1").unwrap();
    writeln!(out, "regime {}", inst.regime.name()).unwrap();
    writeln!(out, "size {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for v in 0..g.vertex_count() {
        let role = match net.role(v) {
            Role::Source => "source",
            Role::Sink => "sink",
            Role::Inner => "inner",
        };
        writeln!(out, "v {} {} {}", v, net.vcap[v], role).unwrap();
    }
    for e in 0..g.edge_count() {
        let d = Dart::forward(e);
        writeln!(out, "a {} {} {} {}", e, g.tail(d), g.head(d), net.cap[d.0]).unwrap();
    }
    if let Some(emb) = &net.embedding {
        for v in 0..g.vertex_count() {
            let rot = emb.rotation(v);
            if rot.is_empty() {
                continue;
            }
            let darts: Vec<String> = rot.iter().map(|&d| dart_text(d)).collect();
            writeln!(out, "r {} {}", v, darts.join(" ")).unwrap();
        }
        for &f in emb.outer_faces() {
            writeln!(out, "outer {}", dart_text(emb.faces()[f][0])).unwrap();
        }
    }
    for r in &inst.rewrites {
        let role = if r.role == Role::Source { "source" } else { "sink" };
        writeln!(out, "rewrite {} {} {} {}", role, r.terminal, r.added, r.arc).unwrap();
    }
    out
}

/// One line per arc: `tail head value`.
pub fn write_flow(net: &FlowNetwork, f: &Flow) -> String {
    let g = &net.graph;
    let mut out = String::new();
    for e in 0..g.edge_count() {
        let d = Dart::forward(e);
        writeln!(out, "{} {} {}", g.tail(d), g.head(d), format_q(&f.net(e))).unwrap();
    }
    out
}

pub fn parse_flow(net: &FlowNetwork, text: &str) -> Result<Flow, FormatError> {
    let g = &net.graph;
    let lines: Vec<Line<'_>> = text
        .lines()
        .enumerate()
        .map(|(i, t)| Line::new(i + 1, t))
        .filter(|l| !l.fields.is_empty() && !l.fields[0].1.starts_with('#'))
        .collect();
    if lines.len() != g.edge_count() {
        return Err(FormatError::Validation(format!(
            "expected {} flow lines, found {}",
            g.edge_count(),
            lines.len()
        )));
    }
    let mut net_values = Vec::with_capacity(lines.len());
    for (e, line) in lines.iter().enumerate() {
        line.expect_len(3)?;
        let d = Dart::forward(e);
        let u = line.index(0, g.vertex_count(), "vertex")?;
        let w = line.index(1, g.vertex_count(), "vertex")?;
        if (u, w) != (g.tail(d), g.head(d)) {
            return Err(line.error(0, format!("arc {e} is {} -> {}", g.tail(d), g.head(d))));
        }
        let x = parse_q(line.fields[2].1).map_err(|err| line.error(2, err.to_string()))?;
        net_values.push(x);
    }
    Ok(Flow::from_net(net_values))
}
