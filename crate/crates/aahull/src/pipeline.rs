//! End-to-end hull computation.
//!
//! The represented set of an automaton splits along its encoding shape:
//! integer prefixes `s ⋆ σ` contribute integer vectors accumulated through
//! the sign and integer states, and decimal tails contribute values in
//! `[−1, 0]^m` at the decimal states. The hull of the whole set is the join,
//! over the separator transitions from integer to decimal states, of the
//! pointwise differences of the two per-state hulls. The stages run in a
//! fixed order: validate, trim to the live core, align digit blocks,
//! partition, sign values, integer seed, integer values, decimal values,
//! combine.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::automaton::{
    self, align_to_blocks, restrict, ArithmeticAutomaton, AutomatonError, Label, StateClass,
    StateId, StatePartition, Valuation, DEFAULT_MAX_STATES,
};
use crate::decimal_hull::{self, DecimalHullError};
use crate::digits::{DigitContext, DigitError};
use crate::fixpoint::{self, FixpointError};
use crate::geometry::{GeomError, QVec, Rational, VPolyhedron};

use num_traits::One;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Digit(#[from] DigitError),
    #[error(transparent)]
    DecimalHull(#[from] DecimalHullError),
    #[error(transparent)]
    Fixpoint(#[from] FixpointError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    /// Cap on states created by the block-aligning product.
    pub max_states: usize,
    /// When false, automata whose digit positions are not already aligned
    /// are rejected instead of being multiplied with a position counter.
    pub align: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { max_states: DEFAULT_MAX_STATES, align: true }
    }
}

/// Everything the pipeline produced, stage by stage.
#[derive(Clone, Debug)]
pub struct Analysis {
    /// The trimmed, block-aligned automaton the valuations refer to.
    pub prepared: ArithmeticAutomaton,
    pub partition: StatePartition,
    pub sign_values: Valuation,
    pub integer_seed: Valuation,
    pub integer_values: Valuation,
    pub decimal_values: Valuation,
    pub hull: VPolyhedron,
    /// Human-readable stage log for `--trace`.
    pub trace: Vec<String>,
}

/// Validates, trims to the live core, aligns digit blocks, and partitions.
/// An automaton with an empty language comes back with an empty partition.
pub fn prepare(
    a: &ArithmeticAutomaton,
    options: &AnalyzeOptions,
) -> Result<(ArithmeticAutomaton, StatePartition), PipelineError> {
    automaton::validate(a)?;
    let core = automaton::live_core(a);
    let trimmed = a.restricted_to(&core);
    let prepared = if options.align {
        align_to_blocks(&trimmed, options.max_states)?
    } else {
        trimmed
    };
    // Separators must sit on block boundaries; the product guarantees a
    // unique digit position per state, so any failure here is the input's.
    automaton::digit_position_classes(&prepared)?;
    let partition = automaton::partition_states(&prepared)?;
    Ok((prepared, partition))
}

/// Hull of the accumulated sign values: the zero point seeds the initial
/// states and the integer transfers of the sign subgraph propagate it. The
/// sign subgraph is acyclic, so this is a finite closure; it still runs
/// through the generic accelerated iteration.
pub fn sign_valuation(
    a: &ArithmeticAutomaton,
    partition: &StatePartition,
) -> Result<Valuation, PipelineError> {
    let ctx = a.ctx();
    let graph = restrict(a, partition, StateClass::Sign);
    let mut seed = Valuation::new();
    for &q in a.initial() {
        if partition.sign_states.contains(&q) {
            seed.insert(q, VPolyhedron::from_point(QVec::zero(ctx.dim())));
        }
    }
    Ok(fixpoint::minimal_post_fixpoint(&ctx, &graph, seed)?)
}

/// Initial integer valuation: each separator target receives the join of its
/// sign sources, scaled by `1/(1−r)` to turn sign accumulations into the
/// integer seeds of the encoding.
pub fn integer_seed(
    ctx: &DigitContext,
    partition: &StatePartition,
    sign_values: &Valuation,
) -> Result<Valuation, PipelineError> {
    let factor = (Rational::one() - ctx.basis_rational()).recip();
    let mut grouped: BTreeMap<StateId, Vec<&VPolyhedron>> = BTreeMap::new();
    for (qs, qi) in &partition.sign_to_integer {
        if let Some(value) = sign_values.get(qs) {
            grouped.entry(*qi).or_default().push(value);
        }
    }
    let mut out = Valuation::new();
    for (qi, parts) in grouped {
        let joined = VPolyhedron::join_many(ctx.dim(), parts);
        if !joined.is_empty() {
            out.insert(qi, joined.scale(&factor));
        }
    }
    Ok(out)
}

/// Least post-fixpoint of the integer transfers over the integer subgraph.
pub fn integer_valuation(
    a: &ArithmeticAutomaton,
    partition: &StatePartition,
    seed: Valuation,
    trace: &mut dyn FnMut(fixpoint::IterationTrace<'_>),
) -> Result<Valuation, PipelineError> {
    let graph = restrict(a, partition, StateClass::Integer);
    Ok(fixpoint::minimal_post_fixpoint_traced(&a.ctx(), &graph, seed, trace)?)
}

/// Per-decimal-state hulls of the decimal values of all infinite paths.
pub fn decimal_valuation(
    a: &ArithmeticAutomaton,
    partition: &StatePartition,
) -> Result<Valuation, PipelineError> {
    decimal_valuation_traced(a, partition, &mut |_| {})
}

pub fn decimal_valuation_traced(
    a: &ArithmeticAutomaton,
    partition: &StatePartition,
    trace: &mut dyn FnMut(decimal_hull::CycleTrace),
) -> Result<Valuation, PipelineError> {
    let ctx = a.ctx();
    let graph = restrict(a, partition, StateClass::Decimal);
    let table = decimal_hull::minimal_generators_traced(&ctx, &graph, trace)?;
    let values: Valuation = decimal_hull::hull_valuation(ctx.dim(), &table);
    for &q in &partition.decimal_states {
        if !values.contains_key(&q) {
            return Err(PipelineError::Internal(format!(
                "decimal state `{}` has no infinite path despite being live",
                a.name(q)
            )));
        }
    }
    Ok(values)
}

/// The final combination: over every separator from an integer state to a
/// decimal state, the integer hull minus the decimal hull, all joined.
pub fn combine(
    ctx: &DigitContext,
    partition: &StatePartition,
    integer_values: &Valuation,
    decimal_values: &Valuation,
) -> Result<VPolyhedron, PipelineError> {
    let mut parts: Vec<VPolyhedron> = Vec::new();
    for (qi, qd) in &partition.integer_to_decimal {
        let left = integer_values.get(qi).ok_or_else(|| {
            PipelineError::Internal(format!("live integer state {qi} has an empty value"))
        })?;
        let right = decimal_values.get(qd).ok_or_else(|| {
            PipelineError::Internal(format!("live decimal state {qd} has an empty value"))
        })?;
        parts.push(left.minkowski_diff(right)?);
    }
    Ok(VPolyhedron::join_many(ctx.dim(), parts.iter()))
}

pub fn analyze(a: &ArithmeticAutomaton) -> Result<Analysis, PipelineError> {
    analyze_with(a, &AnalyzeOptions::default(), false)
}

pub fn analyze_with(
    a: &ArithmeticAutomaton,
    options: &AnalyzeOptions,
    collect_trace: bool,
) -> Result<Analysis, PipelineError> {
    let ctx = a.ctx();
    let (prepared, partition) = prepare(a, options)?;
    let mut trace: Vec<String> = Vec::new();
    let mut log = |line: String| {
        if collect_trace {
            trace.push(line);
        }
    };
    log(format!(
        "partition: {} sign, {} integer, {} decimal states",
        partition.sign_states.len(),
        partition.integer_states.len(),
        partition.decimal_states.len()
    ));

    if partition.is_empty() {
        log("language is empty; hull is the empty polyhedron".to_string());
        return Ok(Analysis {
            prepared,
            partition,
            sign_values: Valuation::new(),
            integer_seed: Valuation::new(),
            integer_values: Valuation::new(),
            decimal_values: Valuation::new(),
            hull: VPolyhedron::empty(ctx.dim()),
            trace,
        });
    }

    let sign_values = sign_valuation(&prepared, &partition)?;
    log(format!("sign values: {}", summarize(&prepared, &sign_values)));
    let seed = integer_seed(&ctx, &partition, &sign_values)?;
    log(format!("integer seed: {}", summarize(&prepared, &seed)));

    let mut fixpoint_lines: Vec<String> = Vec::new();
    let integer_values = integer_valuation(&prepared, &partition, seed.clone(), &mut |t| {
        if collect_trace {
            let counts: Vec<String> = t
                .valuation
                .iter()
                .map(|(q, v)| format!("{q}:{}p/{}r", v.points().len(), v.rays().len()))
                .collect();
            fixpoint_lines.push(format!(
                "integer round {}: {}",
                t.iteration,
                counts.join(" ")
            ));
        }
    })?;
    for line in fixpoint_lines {
        log(line);
    }
    log(format!("integer values: {}", summarize(&prepared, &integer_values)));

    let mut inserted = 0usize;
    let mut pruned = 0usize;
    let decimal_values = decimal_valuation_traced(&prepared, &partition, &mut |event| {
        match event {
            decimal_hull::CycleTrace::Inserted { .. } => inserted += 1,
            decimal_hull::CycleTrace::Pruned { .. } => pruned += 1,
        }
    })?;
    log(format!(
        "decimal hull: {inserted} generators inserted, {pruned} pruned"
    ));
    log(format!("decimal values: {}", summarize(&prepared, &decimal_values)));

    let hull = combine(&ctx, &partition, &integer_values, &decimal_values)?;
    log(format!("hull: {hull}"));

    Ok(Analysis {
        prepared,
        partition,
        sign_values,
        integer_seed: seed,
        integer_values,
        decimal_values,
        hull,
        trace,
    })
}

/// The closed convex hull of the represented set, in generator form.
pub fn hull(a: &ArithmeticAutomaton) -> Result<VPolyhedron, PipelineError> {
    Ok(analyze(a)?.hull)
}

fn summarize(a: &ArithmeticAutomaton, v: &Valuation) -> String {
    if v.is_empty() {
        return "all empty".to_string();
    }
    v.iter()
        .map(|(q, p)| format!("{}:{}p/{}r", a.name(*q), p.points().len(), p.rays().len()))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Enumerates members of the represented set: every path shaped
/// `s ⋆ σ ⋆ u` with at most `depth` integer digit blocks and at most
/// `depth·m` decimal digits, continued by each simple lasso of the decimal
/// subgraph, contributes the integer value minus the lasso's decimal value
/// pushed through `u`. The walk runs on the block-aligned automaton, where
/// the simple-lasso structure of the decimal part is richest. The result is
/// a finite subset of the represented set whose hull grows toward the full
/// hull as `depth` increases. Exponential in `depth`; intended for
/// cross-checking at small sizes.
pub fn enumerate_points(
    a: &ArithmeticAutomaton,
    depth: usize,
) -> Result<BTreeSet<QVec>, PipelineError> {
    let ctx = a.ctx();
    let m = ctx.dim();
    let (trimmed, partition) = prepare(a, &AnalyzeOptions::default())?;

    let mut out: BTreeSet<QVec> = BTreeSet::new();
    if partition.is_empty() {
        return Ok(out);
    }

    let decimal_graph = restrict(&trimmed, &partition, StateClass::Decimal);
    let mut lasso_values: BTreeMap<StateId, Vec<QVec>> = BTreeMap::new();
    for &qd in &partition.decimal_states {
        let mut values: Vec<QVec> = decimal_hull::all_simple_lassos(&decimal_graph, qd)
            .iter()
            .map(|l| decimal_hull::decimal_value(&ctx, l))
            .collect::<Result<_, _>>()?;
        values.sort();
        values.dedup();
        lasso_values.insert(qd, values);
    }

    // Sign phase: all length-m sign paths from the initial states.
    let mut sign_frontier: Vec<(StateId, QVec)> = trimmed
        .initial()
        .iter()
        .filter(|q| partition.sign_states.contains(q))
        .map(|&q| (q, QVec::zero(m)))
        .collect();
    for _ in 0..m {
        let mut next = Vec::new();
        for (q, acc) in &sign_frontier {
            for (s, l, d) in trimmed.transitions() {
                if s != q || !partition.sign_states.contains(d) {
                    continue;
                }
                if let Label::Digit(digit) = l {
                    next.push((*d, ctx.integer_digit_map(*digit)?.apply(acc)));
                }
            }
        }
        next.sort();
        next.dedup();
        sign_frontier = next;
    }

    // Cross the first separator, scaling sign accumulations into seeds.
    let scale = (Rational::one() - ctx.basis_rational()).recip();
    let mut integer_frontier: Vec<(StateId, QVec)> = Vec::new();
    for (q, acc) in &sign_frontier {
        for (qs, qi) in &partition.sign_to_integer {
            if qs == q {
                integer_frontier.push((*qi, acc.scale(&scale)));
            }
        }
    }
    integer_frontier.sort();
    integer_frontier.dedup();

    // Integer phase: up to `depth` blocks of m digits; separators may only
    // be crossed on block boundaries.
    let mut decimal_starts: Vec<(StateId, QVec)> = Vec::new();
    let mut frontier = integer_frontier;
    for step in 0..=depth * m {
        if step % m == 0 {
            for (q, value) in &frontier {
                for (qi, qd) in &partition.integer_to_decimal {
                    if qi == q {
                        decimal_starts.push((*qd, value.clone()));
                    }
                }
            }
        }
        if step == depth * m {
            break;
        }
        let mut next = Vec::new();
        for (q, value) in &frontier {
            for (s, l, d) in trimmed.transitions() {
                if s != q || !partition.integer_states.contains(d) {
                    continue;
                }
                if let Label::Digit(digit) = l {
                    next.push((*d, ctx.integer_digit_map(*digit)?.apply(value)));
                }
            }
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    decimal_starts.sort();
    decimal_starts.dedup();

    // Decimal phase: walk up to depth·m digits, emitting the integer value
    // minus each lasso value pushed through the decimal prefix read so far.
    // Frontier entries carry the prefix word; paths with equal words merge.
    for (qd, integer_value) in decimal_starts {
        let mut frontier: Vec<(StateId, Vec<u32>)> = vec![(qd, Vec::new())];
        for step in 0..=depth * m {
            for (q, prefix) in &frontier {
                for lasso_value in lasso_values.get(q).into_iter().flatten() {
                    // Apply the prefix word right to left onto the tail value.
                    let mut value = lasso_value.clone();
                    for &digit in prefix.iter().rev() {
                        value = ctx.decimal_digit_map(digit)?.apply(&value);
                    }
                    out.insert(integer_value.sub(&value));
                }
            }
            if step == depth * m {
                break;
            }
            let mut next = Vec::new();
            for (q, prefix) in &frontier {
                for (s, l, d) in trimmed.transitions() {
                    if s != q || !partition.decimal_states.contains(d) {
                        continue;
                    }
                    if let Label::Digit(digit) = l {
                        let mut word = prefix.clone();
                        word.push(*digit);
                        next.push((*d, word));
                    }
                }
            }
            next.sort();
            next.dedup();
            frontier = next;
        }
    }

    Ok(out)
}
