//! Exact accelerated data-flow iteration over valuations (maps from states
//! to polyhedra).
//!
//! Reading digit `a` along a transition `(p, a, q)` pushes the source value
//! through the integer digit map into the target state. Plain Kleene
//! iteration of these transfers need not terminate — a single self-loop on
//! the largest digit produces the strictly growing chain `[0, r^i − 1]` — so
//! each round first applies an exact acceleration: per state, the value is
//! extended by every ray obtainable from iterating cycles through that
//! state. For a cycle with word `σ` and a point `x`, the iterates are
//! `x + (r^{i|σ|/m} − 1)(x − v)` where `v` is the cycle's decimal fixpoint,
//! so their closed hull is the ray from `x` away from `v`; over all cycles
//! and all `x` this is exactly a ray extension of the value away from the
//! per-component decimal hull. Unlike widening, no precision is lost, and
//! the loop reaches the least post-fixpoint in at most `|Q|` rounds: values
//! seeded on a subset of states take up to `|Q| − 1` rounds to propagate
//! everywhere, plus one round for the final acceleration to close the cycles
//! they land on.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automaton::{scc_decomposition, subgraph_of_scc, DigitGraph, StateId, Valuation};
use crate::decimal_hull::{self, DecimalHullError};
use crate::digits::{DigitContext, DigitError};
use crate::geometry::{GeomError, VPolyhedron};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixpointError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Digit(#[from] DigitError),
    #[error(transparent)]
    DecimalHull(#[from] DecimalHullError),
    #[error("accelerated iteration did not settle within {bound} rounds; this is a bug")]
    IterationBound { bound: usize },
}

/// Applies the integer transfer of one transition: the target state receives
/// the image of the source value under the digit map, every other state is
/// unchanged. An empty source empties the target.
pub fn apply_integer_transfer(
    ctx: &DigitContext,
    t: (StateId, u32, StateId),
    c: &Valuation,
) -> Result<Valuation, FixpointError> {
    let (src, digit, dst) = t;
    let mut out = c.clone();
    match c.get(&src) {
        Some(value) => {
            let image = value.affine_image(&ctx.integer_digit_map(digit)?)?;
            out.insert(dst, image);
        }
        None => {
            out.remove(&dst);
        }
    }
    Ok(out)
}

/// The decimal-side counterpart: the source state receives the image of the
/// target value under the decimal digit map.
pub fn apply_decimal_transfer(
    ctx: &DigitContext,
    t: (StateId, u32, StateId),
    c: &Valuation,
) -> Result<Valuation, FixpointError> {
    let (src, digit, dst) = t;
    let mut out = c.clone();
    match c.get(&dst) {
        Some(value) => {
            let image = value.affine_image(&ctx.decimal_digit_map(digit)?)?;
            out.insert(src, image);
        }
        None => {
            out.remove(&src);
        }
    }
    Ok(out)
}

/// Pointwise inclusion of valuations; absent entries are empty.
pub fn valuation_le(a: &Valuation, b: &Valuation) -> Result<bool, GeomError> {
    for (q, value) in a {
        match b.get(q) {
            Some(bigger) => {
                if !bigger.contains(value)? {
                    return Ok(false);
                }
            }
            None => {
                if !value.is_empty() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Per-state hulls of decimal values of the cycles through each state,
/// restricted to the state's strongly connected component. States on no
/// cycle are absent. Depends only on the graph, so callers cache it across
/// iterations.
pub fn cycle_hulls(
    ctx: &DigitContext,
    g: &DigitGraph,
) -> Result<BTreeMap<StateId, VPolyhedron>, DecimalHullError> {
    let mut hulls = BTreeMap::new();
    for component in scc_decomposition(g) {
        let sample = *component.iter().next().expect("components are nonempty");
        let sub = subgraph_of_scc(g, sample);
        let table = decimal_hull::minimal_generators(ctx, &sub)?;
        hulls.extend(decimal_hull::hull_valuation(ctx.dim(), &table));
    }
    Ok(hulls)
}

/// Exact acceleration: each state's value is ray-extended away from the
/// decimal hull of the cycles through it; states on no cycle are unchanged.
pub fn accelerate(
    ctx: &DigitContext,
    g: &DigitGraph,
    c: &Valuation,
) -> Result<Valuation, FixpointError> {
    let hulls = cycle_hulls(ctx, g)?;
    accelerate_with(c, &hulls)
}

fn accelerate_with(
    c: &Valuation,
    hulls: &BTreeMap<StateId, VPolyhedron>,
) -> Result<Valuation, FixpointError> {
    let mut out = Valuation::new();
    for (&q, value) in c {
        let widened = match hulls.get(&q) {
            Some(cycle_hull) => value.ray_extend(cycle_hull)?,
            None => value.clone(),
        };
        out.insert(q, widened);
    }
    Ok(out)
}

/// One observable round of the accelerated iteration.
pub struct IterationTrace<'a> {
    pub iteration: usize,
    pub valuation: &'a Valuation,
}

/// The unique minimal valuation `C` with `c0 ⊑ C` that is closed under all
/// integer transfers of `g`. Runs the accelerated iteration; the outer loop
/// settles within `|Q|` rounds.
pub fn minimal_post_fixpoint(
    ctx: &DigitContext,
    g: &DigitGraph,
    c0: Valuation,
) -> Result<Valuation, FixpointError> {
    minimal_post_fixpoint_traced(ctx, g, c0, &mut |_| {})
}

pub fn minimal_post_fixpoint_traced(
    ctx: &DigitContext,
    g: &DigitGraph,
    c0: Valuation,
    trace: &mut dyn FnMut(IterationTrace<'_>),
) -> Result<Valuation, FixpointError> {
    let hulls = cycle_hulls(ctx, g)?;
    let maps: Vec<_> = g
        .transitions()
        .iter()
        .map(|(s, a, d)| ctx.integer_digit_map(*a).map(|m| (*s, m, *d)))
        .collect::<Result<_, _>>()?;

    let bound = g.states().len().max(1);
    let mut c = c0;
    let mut iteration = 0;
    loop {
        // Post-fixpoint check: every transfer image stays inside the target.
        let mut settled = true;
        'check: for (src, map, dst) in &maps {
            let Some(value) = c.get(src) else { continue };
            let image = value.affine_image(map)?;
            let inside = match c.get(dst) {
                Some(target) => target.contains(&image)?,
                None => image.is_empty(),
            };
            if !inside {
                settled = false;
                break 'check;
            }
        }
        if settled {
            return Ok(c);
        }
        iteration += 1;
        if iteration > bound {
            return Err(FixpointError::IterationBound { bound });
        }

        c = accelerate_with(&c, &hulls)?;

        // Join all transfer images into their targets, one canonicalization
        // per state.
        let mut incoming: BTreeMap<StateId, Vec<VPolyhedron>> = BTreeMap::new();
        for (src, map, dst) in &maps {
            if let Some(value) = c.get(src) {
                incoming.entry(*dst).or_default().push(value.affine_image(map)?);
            }
        }
        for (dst, mut images) in incoming {
            if let Some(existing) = c.get(&dst) {
                images.push(existing.clone());
            }
            let joined = VPolyhedron::join_many(ctx.dim(), images.iter());
            if !joined.is_empty() {
                c.insert(dst, joined);
            }
        }
        trace(IterationTrace { iteration, valuation: &c });
    }
}
