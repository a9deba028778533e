//! Maximum flow for integer capacities, best when they are small.
//!
//! 1. Take a maximum flow in `G°` and make its restriction acyclic.
//! 2. Strip the excess of every infeasible vertex.
//! 3. Re-augment the resulting feasible flow in `Ḡ`.
//!
//! The excess is at most `(k - 2)U` in total, which bounds the work of the
//! last step.

use num_traits::Zero;

use super::{augment_in_split, invariant, strip_excess, Solution, SolveError};
use crate::cancel::cancel_cycles;
use crate::flow::{is_acyclic, value, Flow};
use crate::gadgets::{build_extended, Gadget};
use crate::maxflow::max_flow;
use crate::network::FlowNetwork;
use crate::num::Q;

#[derive(Debug, Clone)]
pub struct BoundedReport {
    /// `val(G°)`.
    pub extended_value: Q,
    /// Whether the two cancellation passes left an acyclic restriction.
    pub cancel_acyclic: bool,
    /// Infeasible vertices after cancellation, with their excess.
    pub infeasible: Vec<(usize, Q)>,
    pub stripped: Q,
    pub gain: Q,
}

/// A maximum flow of `G°` whose restriction to `G` is acyclic, with a note of
/// whether the cancellation passes alone achieved that.
pub(crate) fn acyclic_extended_flow(
    ext: &Gadget,
    f: &Flow,
) -> Result<(Flow, bool), SolveError> {
    let out = cancel_cycles(&ext.net, ext.base_edges, f)?;
    let acyclic = is_acyclic(&ext.base, &ext.restrict(&out));
    Ok((out, acyclic))
}

/// Restriction of `f` to `G`, with leftover flow cycles (if any) removed.
pub(crate) fn acyclic_restriction(ext: &Gadget, f: &Flow) -> Flow {
    let r = ext.restrict(f);
    if is_acyclic(&ext.base, &r) {
        r
    } else {
        crate::cancel::cancel_generic(&ext.base, &r)
    }
}

/// Strips the excess of `f` (acyclic, conserving on `net`) and re-augments,
/// either to a maximum flow or, with `restore`, by at most the amount
/// stripped.
pub(crate) fn fix_up(
    net: &FlowNetwork,
    f: &Flow,
    restore: bool,
) -> Result<(Flow, Q, Q), SolveError> {
    let stripped = strip_excess(net, f)?;
    let limit = restore.then_some(stripped.removed);
    let aug = augment_in_split(net, &stripped.flow, limit)?;
    invariant(aug.gain <= stripped.removed, || {
        format!(
            "augmentation {} exceeds the stripped excess {}",
            aug.gain, stripped.removed
        )
    })?;
    Ok((aug.flow, stripped.removed, aug.gain))
}

pub fn solve_bounded(net: &FlowNetwork) -> Result<(Solution, BoundedReport), SolveError> {
    if !net.is_integral() {
        return Err(SolveError::NonIntegral);
    }
    let ext = build_extended(net)?;
    let fo = max_flow(&ext.net)?;
    let extended_value = value(&ext.net, &fo)?;
    let (fo, cancel_acyclic) = acyclic_extended_flow(&ext, &fo)?;
    invariant(cancel_acyclic, || "cancellation left a flow cycle".into())?;
    let f = acyclic_restriction(&ext, &fo);
    let infeasible = crate::flow::excesses(net, &f)
        .into_iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .collect();
    let (flow, stripped, gain) = fix_up(net, &f, false)?;
    let v = value(net, &flow)?;
    Ok((
        Solution { flow, value: v },
        BoundedReport {
            extended_value,
            cancel_acyclic,
            infeasible,
            stripped,
            gain,
        },
    ))
}
