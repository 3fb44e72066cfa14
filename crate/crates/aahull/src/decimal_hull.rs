//! Convex hulls of decimal values of infinite paths in a digit graph.
//!
//! Every ultimately periodic path — a *lasso*, a finite prefix followed by a
//! repeated cycle — has a rational decimal value: the cycle's value is the
//! fixpoint of its word map and the prefix applies on top. The hull of all
//! infinite paths from a state equals the hull of its finitely many *simple*
//! lassos (those visiting pairwise distinct states), so per state a minimal
//! finite generator set exists. It is computed here by a worklist iteration
//! that grows candidate sets one violating transition at a time, splitting
//! non-simple extensions into a simple cycle plus a simple lasso, and pruning
//! redundant generators after every insertion.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::automaton::{check_block_aligned, DigitGraph, StateId};
use crate::digits::{DigitContext, DigitError};
use crate::geometry::{in_convex_hull, QVec, VPolyhedron};

type Edge = (StateId, u32, StateId);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecimalHullError {
    #[error("graph has a cycle of length not divisible by {dim}")]
    NotBlockAligned { dim: usize, witness: Vec<Edge> },
    #[error(transparent)]
    Digit(#[from] DigitError),
    #[error("worklist exceeded the |T|^|Q| bound; this is a bug")]
    IterationBound,
}

/// An ultimately periodic path: `prefix` followed by `cycle` repeated
/// forever. The cycle starts and ends at the prefix's terminal state. The
/// lasso is *simple* when all states visited before the cycle closes are
/// pairwise distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Lasso {
    prefix: Vec<Edge>,
    cycle: Vec<Edge>,
}

impl Lasso {
    pub fn new(prefix: Vec<Edge>, cycle: Vec<Edge>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        let lasso = Lasso { prefix, cycle };
        debug_assert!(lasso.is_path());
        lasso
    }

    fn is_path(&self) -> bool {
        let walk: Vec<&Edge> = self.prefix.iter().chain(self.cycle.iter()).collect();
        let continuous = walk.windows(2).all(|w| w[0].2 == w[1].0);
        let closes = self.cycle.last().unwrap().2 == self.cycle[0].0;
        let anchored = self
            .prefix
            .last()
            .map(|e| e.2 == self.cycle[0].0)
            .unwrap_or(true);
        continuous && closes && anchored
    }

    pub fn start(&self) -> StateId {
        self.prefix.first().unwrap_or(&self.cycle[0]).0
    }

    pub fn prefix(&self) -> &[Edge] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Edge] {
        &self.cycle
    }

    /// States in visit order up to the point where the cycle closes.
    pub fn visited_states(&self) -> Vec<StateId> {
        self.prefix
            .iter()
            .chain(self.cycle.iter())
            .map(|e| e.0)
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        let states = self.visited_states();
        let distinct: BTreeSet<StateId> = states.iter().copied().collect();
        distinct.len() == states.len()
    }

    pub fn prefix_label(&self) -> Vec<u32> {
        self.prefix.iter().map(|e| e.1).collect()
    }

    pub fn cycle_label(&self) -> Vec<u32> {
        self.cycle.iter().map(|e| e.1).collect()
    }

    /// Prepends a transition targeting this lasso's start state.
    pub fn prepend(&self, t: Edge) -> Lasso {
        debug_assert_eq!(t.2, self.start());
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(t);
        prefix.extend(self.prefix.iter().copied());
        Lasso { prefix, cycle: self.cycle.clone() }
    }

    /// Drops the first `n` transitions; dropping past the prefix rotates the
    /// cycle.
    pub fn suffix(&self, n: usize) -> Lasso {
        let mut prefix = self.prefix.clone();
        let mut cycle = self.cycle.clone();
        for _ in 0..n {
            if prefix.is_empty() {
                cycle.rotate_left(1);
            } else {
                prefix.remove(0);
            }
        }
        Lasso { prefix, cycle }
    }
}

/// The decimal value of a lasso: the cycle's fixpoint pushed through the
/// prefix map. The cycle label length must be a multiple of the dimension
/// (true in block-aligned graphs); the prefix may have any length.
pub fn decimal_value(ctx: &DigitContext, lasso: &Lasso) -> Result<QVec, DigitError> {
    let fix = ctx.decimal_word_fixpoint(&lasso.cycle_label())?;
    Ok(ctx.decimal_word_map(&lasso.prefix_label())?.apply(&fix))
}

/// Every simple lasso starting at `q`, in depth-first discovery order. The
/// count is bounded by the number of distinct-state paths, so this is for
/// small graphs and cross-checks; the generator computation itself never
/// enumerates exhaustively.
pub fn all_simple_lassos(g: &DigitGraph, q: StateId) -> Vec<Lasso> {
    fn dfs(g: &DigitGraph, path: &mut Vec<Edge>, on_path: &mut Vec<StateId>, out: &mut Vec<Lasso>) {
        let here = *on_path.last().expect("nonempty path");
        for (digit, next) in g.successors(here) {
            if let Some(pos) = on_path.iter().position(|&s| s == next) {
                let mut prefix = path.clone();
                prefix.push((here, digit, next));
                let cycle = prefix.split_off(pos);
                out.push(Lasso::new(prefix, cycle));
                continue;
            }
            path.push((here, digit, next));
            on_path.push(next);
            dfs(g, path, on_path, out);
            on_path.pop();
            path.pop();
        }
    }
    let mut out = Vec::new();
    dfs(g, &mut Vec::new(), &mut vec![q], &mut out);
    out
}

/// Some simple lasso starting at `q`, or `None` exactly when no infinite
/// path leaves `q`. Deterministic: depth-first over the sorted transitions.
pub fn find_simple_lasso(g: &DigitGraph, q: StateId) -> Option<Lasso> {
    fn dfs(g: &DigitGraph, path: &mut Vec<Edge>, on_path: &mut Vec<StateId>) -> Option<Lasso> {
        let here = *on_path.last().expect("nonempty path");
        for (digit, next) in g.successors(here) {
            if let Some(pos) = on_path.iter().position(|&s| s == next) {
                let mut prefix = path.clone();
                prefix.push((here, digit, next));
                let cycle = prefix.split_off(pos);
                return Some(Lasso::new(prefix, cycle));
            }
            path.push((here, digit, next));
            on_path.push(next);
            if let Some(found) = dfs(g, path, on_path) {
                return Some(found);
            }
            on_path.pop();
            path.pop();
        }
        None
    }
    dfs(g, &mut Vec::new(), &mut vec![q])
}

/// Splits a non-simple one-step extension `t · lasso` into the minimal
/// nonempty leading cycle `π` back to `t`'s source and the simple lasso
/// `rest` with `t · lasso = π · rest`. Both parts are simple, and the
/// extension's value is the convex combination
/// `(1 − r^{−|π|/m}) · value(π^ω) + r^{−|π|/m} · value(rest)`.
pub fn split_extension(t: Edge, lasso: &Lasso) -> (Vec<Edge>, Lasso) {
    let extended = lasso.prepend(t);
    debug_assert!(!extended.is_simple(), "split requires a non-simple extension");
    let source = t.0;
    let states = extended.visited_states();
    let close = states[1..]
        .iter()
        .position(|&s| s == source)
        .map(|p| p + 1)
        .expect("source revisited in a non-simple extension");
    let walk: Vec<Edge> = extended
        .prefix
        .iter()
        .chain(extended.cycle.iter())
        .copied()
        .collect();
    let pi: Vec<Edge> = walk[..close].to_vec();
    let rest = extended.suffix(close);
    debug_assert!(rest.is_simple());
    (pi, rest)
}

/// Per-state minimal generator sets of the hulls of all infinite paths.
/// States with no infinite path are absent from the result. Every generated
/// vector lies in `[−1, 0]^m`; the hulls are polytopes (no rays). The
/// `trace` callback observes insertions and pruning.
pub fn minimal_generators(
    ctx: &DigitContext,
    g: &DigitGraph,
) -> Result<BTreeMap<StateId, Vec<QVec>>, DecimalHullError> {
    minimal_generators_traced(ctx, g, &mut |_| {})
}

/// One observable step of the generator computation: the transition whose
/// image triggered the change (absent for the initial seeding) and the
/// vector inserted or pruned.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CycleTrace {
    Inserted { state: StateId, via: Option<Edge>, value: QVec },
    Pruned { state: StateId, value: QVec },
}

pub fn minimal_generators_traced(
    ctx: &DigitContext,
    g: &DigitGraph,
    trace: &mut dyn FnMut(CycleTrace),
) -> Result<BTreeMap<StateId, Vec<QVec>>, DecimalHullError> {
    if let Err(witness) = check_block_aligned(g, ctx.dim()) {
        return Err(DecimalHullError::NotBlockAligned { dim: ctx.dim(), witness });
    }

    let mut sets: BTreeMap<StateId, Vec<(Lasso, QVec)>> = BTreeMap::new();
    for &q in g.states() {
        if let Some(lasso) = find_simple_lasso(g, q) {
            let value = decimal_value(ctx, &lasso)?;
            trace(CycleTrace::Inserted { state: q, via: None, value: value.clone() });
            sets.insert(q, vec![(lasso, value)]);
        }
    }

    let edges: Vec<Edge> = g.transitions().to_vec();
    let incoming: BTreeMap<StateId, Vec<usize>> = {
        let mut map: BTreeMap<StateId, Vec<usize>> = BTreeMap::new();
        for (i, (_, _, d)) in edges.iter().enumerate() {
            map.entry(*d).or_default().push(i);
        }
        map
    };

    let bound = BigUint::from(edges.len().max(1)).pow(g.states().len() as u32);
    let mut steps = BigUint::from(0u32);

    let mut queue: VecDeque<usize> = (0..edges.len()).collect();
    let mut queued: Vec<bool> = vec![true; edges.len()];
    while let Some(ei) = queue.pop_front() {
        queued[ei] = false;
        let (src, digit, dst) = edges[ei];
        let step_map = ctx.decimal_digit_map(digit)?;
        // Re-scan after every mutation: the target set may be the source set
        // for self-loops.
        let find_violation = |sets: &BTreeMap<StateId, Vec<(Lasso, QVec)>>| {
            let candidates = sets.get(&dst)?;
            let current: Vec<QVec> = sets
                .get(&src)
                .map(|s| s.iter().map(|(_, v)| v.clone()).collect())
                .unwrap_or_default();
            candidates
                .iter()
                .map(|(lasso, value)| (lasso, step_map.apply(value)))
                .find(|(_, image)| !in_convex_hull(&current, image))
                .map(|(lasso, image)| (lasso.clone(), image))
        };
        while let Some((lasso, image)) = find_violation(&sets) {
            steps += BigUint::one();
            if steps > bound {
                return Err(DecimalHullError::IterationBound);
            }

            let step = (src, digit, dst);
            let entry = sets.entry(src).or_default();
            let extended = lasso.prepend(step);
            if extended.is_simple() {
                trace(CycleTrace::Inserted { state: src, via: Some(step), value: image.clone() });
                entry.push((extended, image));
            } else {
                let (pi, rest) = split_extension(step, &lasso);
                let pi_lasso = Lasso::new(Vec::new(), pi);
                for lasso in [rest, pi_lasso] {
                    let value = decimal_value(ctx, &lasso)?;
                    if !entry.iter().any(|(l, _)| *l == lasso) {
                        trace(CycleTrace::Inserted { state: src, via: Some(step), value: value.clone() });
                        entry.push((lasso, value));
                    }
                }
            }
            prune(entry, src, trace);

            for &other in incoming.get(&src).into_iter().flatten() {
                if !queued[other] {
                    queued[other] = true;
                    queue.push_back(other);
                }
            }
        }
    }

    let mut result = BTreeMap::new();
    for (q, entries) in sets {
        let mut values: Vec<QVec> = entries.into_iter().map(|(_, v)| v).collect();
        values.sort();
        values.dedup();
        result.insert(q, values);
    }
    Ok(result)
}

fn conv_points(dim: usize, points: &[QVec]) -> VPolyhedron {
    VPolyhedron::from_generators(dim, points.to_vec(), Vec::new())
        .expect("points share the ambient dimension")
}

/// Drops entries whose value is a convex combination of the other values.
fn prune(entries: &mut Vec<(Lasso, QVec)>, state: StateId, trace: &mut dyn FnMut(CycleTrace)) {
    entries.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut i = 0;
    while i < entries.len() {
        let (lasso, value) = entries.remove(i);
        let others: Vec<QVec> = entries.iter().map(|(_, v)| v.clone()).collect();
        if in_convex_hull(&others, &value) {
            trace(CycleTrace::Pruned { state, value });
        } else {
            entries.insert(i, (lasso, value));
            i += 1;
        }
    }
}

/// Hull form of the generator table.
pub fn hull_valuation(
    dim: usize,
    generators: &BTreeMap<StateId, Vec<QVec>>,
) -> BTreeMap<StateId, VPolyhedron> {
    generators
        .iter()
        .map(|(&q, points)| (q, conv_points(dim, points)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rational;
    use num_bigint::BigInt;

    fn ctx(r: u32, m: usize) -> DigitContext {
        DigitContext::new(r, m)
    }

    fn qv(entries: &[(i64, i64)]) -> QVec {
        QVec::new(
            entries
                .iter()
                .map(|&(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    #[test]
    fn lasso_value_examples() {
        let c = ctx(2, 1);
        let self0 = Lasso::new(vec![], vec![(0, 0, 0)]);
        assert_eq!(decimal_value(&c, &self0).unwrap(), qv(&[(0, 1)]));

        let alt = Lasso::new(vec![], vec![(0, 0, 1), (1, 1, 0)]);
        assert_eq!(decimal_value(&c, &alt).unwrap(), qv(&[(-1, 3)]));

        let prefixed = Lasso::new(vec![(1, 1, 0)], vec![(0, 0, 0)]);
        assert_eq!(decimal_value(&c, &prefixed).unwrap(), qv(&[(-1, 2)]));
    }

    #[test]
    fn find_simple_lasso_cases() {
        let g = DigitGraph::new([0].into_iter().collect(), vec![(0, 1, 0)]);
        let lasso = find_simple_lasso(&g, 0).unwrap();
        assert!(lasso.prefix().is_empty());
        assert_eq!(lasso.cycle(), &[(0, 1, 0)]);

        let dead = DigitGraph::new([0, 1].into_iter().collect(), vec![(0, 0, 1)]);
        assert!(find_simple_lasso(&dead, 0).is_none());

        let chain = DigitGraph::new(
            [0, 1, 2].into_iter().collect(),
            vec![(0, 0, 1), (1, 1, 2), (2, 0, 2)],
        );
        let lasso = find_simple_lasso(&chain, 0).unwrap();
        assert_eq!(lasso.prefix().len(), 2);
        assert_eq!(lasso.cycle(), &[(2, 0, 2)]);
        assert!(lasso.is_simple());
    }

    #[test]
    fn split_self_loop_extension() {
        let t = (0, 1, 0);
        let lasso = Lasso::new(vec![], vec![t]);
        let (pi, rest) = split_extension(t, &lasso);
        assert_eq!(pi, vec![t]);
        assert_eq!(rest, lasso);
    }

    #[test]
    fn split_two_state_extension() {
        // t = (q,a,q'), lasso = (q',b,q)(q,a,q')^ω rotated in.
        let t = (0, 1, 1);
        let inner = Lasso::new(vec![], vec![(1, 0, 0), (0, 1, 1)]);
        assert!(!inner.prepend(t).is_simple());
        let (pi, rest) = split_extension(t, &inner);
        assert_eq!(pi, vec![(0, 1, 1), (1, 0, 0)]);
        assert!(rest.is_simple());
        assert_eq!(rest.start(), 0);
    }

    #[test]
    fn split_satisfies_convex_identity() {
        let c = ctx(2, 1);
        let cases = vec![
            ((0, 1, 1), Lasso::new(vec![], vec![(1, 0, 0), (0, 1, 1)])),
            // Parts with genuinely different values: π = (0→1→0) labelled
            // "01", rest = the 0-loop.
            ((0, 0, 1), Lasso::new(vec![(1, 1, 0)], vec![(0, 0, 0)])),
        ];
        for (t, inner) in cases {
            let (pi, rest) = split_extension(t, &inner);
            let lhs = c
                .decimal_digit_map(t.1)
                .unwrap()
                .apply(&decimal_value(&c, &inner).unwrap());
            let pi_value = decimal_value(&c, &Lasso::new(vec![], pi.clone())).unwrap();
            let rest_value = decimal_value(&c, &rest).unwrap();
            let weight = Rational::new(BigInt::from(1), BigInt::from(2).pow(pi.len() as u32));
            let one = Rational::from_integer(1.into());
            let expect = pi_value
                .scale(&(&one - &weight))
                .add(&rest_value.scale(&weight));
            assert_eq!(lhs, expect);
        }
    }

    #[test]
    fn generators_single_state_two_loops() {
        let c = ctx(2, 1);
        let g = DigitGraph::new([0].into_iter().collect(), vec![(0, 0, 0), (0, 1, 0)]);
        let table = minimal_generators(&c, &g).unwrap();
        assert_eq!(table[&0], vec![qv(&[(-1, 1)]), qv(&[(0, 1)])]);
    }

    #[test]
    fn generators_single_loop() {
        let c = ctx(2, 1);
        let g = DigitGraph::new([0].into_iter().collect(), vec![(0, 1, 0)]);
        let table = minimal_generators(&c, &g).unwrap();
        assert_eq!(table[&0], vec![qv(&[(-1, 1)])]);
    }

    #[test]
    fn generators_two_state_cycle() {
        let c = ctx(2, 1);
        let g = DigitGraph::new(
            [0, 1].into_iter().collect(),
            vec![(0, 0, 1), (1, 1, 0)],
        );
        let table = minimal_generators(&c, &g).unwrap();
        assert_eq!(table[&0], vec![qv(&[(-1, 3)])]);
        assert_eq!(table[&1], vec![qv(&[(-2, 3)])]);
    }

    #[test]
    fn dead_states_are_absent() {
        let c = ctx(2, 1);
        let g = DigitGraph::new(
            [0, 1].into_iter().collect(),
            vec![(0, 0, 1)],
        );
        let table = minimal_generators(&c, &g).unwrap();
        assert!(table.is_empty());
    }

    #[test]
    fn rejects_misaligned_graphs() {
        let c = ctx(2, 2);
        let g = DigitGraph::new([0].into_iter().collect(), vec![(0, 1, 0)]);
        assert!(matches!(
            minimal_generators(&c, &g),
            Err(DecimalHullError::NotBlockAligned { .. })
        ));
    }

    /// All cycle words `q -> q` of length at most `limit`, walked with
    /// repeated states allowed.
    fn cycle_words(g: &DigitGraph, q: StateId, limit: usize) -> Vec<Vec<u32>> {
        let mut words = Vec::new();
        let mut stack: Vec<(StateId, Vec<u32>)> = vec![(q, Vec::new())];
        while let Some((here, word)) = stack.pop() {
            for (digit, next) in g.successors(here) {
                let mut w = word.clone();
                w.push(digit);
                if next == q {
                    words.push(w.clone());
                }
                if w.len() < limit {
                    stack.push((next, w));
                }
            }
        }
        words
    }

    fn cycle_fixpoint_hull(c: &DigitContext, g: &DigitGraph, q: StateId, limit: usize) -> VPolyhedron {
        let points: Vec<QVec> = cycle_words(g, q, limit)
            .iter()
            .filter(|w| w.len() % c.dim() == 0)
            .map(|w| c.decimal_word_fixpoint(w).unwrap())
            .collect();
        VPolyhedron::from_generators(c.dim(), points, Vec::new()).unwrap()
    }

    #[test]
    fn strongly_connected_hull_equals_short_cycle_fixpoints() {
        // On strongly connected graphs whose extreme tail values are
        // themselves periodic, cycles of length at most 2·|Q|·m span the
        // whole hull.
        let cases = vec![
            // Single state, both digit loops: the whole unit interval.
            (
                ctx(2, 1),
                DigitGraph::new([0].into_iter().collect(), vec![(0, 0, 0), (0, 1, 0)]),
            ),
            // Pure 3-cycle: a single periodic tail per state.
            (
                ctx(2, 1),
                DigitGraph::new(
                    [0, 1, 2].into_iter().collect(),
                    vec![(0, 1, 1), (1, 0, 2), (2, 1, 0)],
                ),
            ),
            // Complete bipartite alternation in dimension 2: the four
            // corners come from the four 2-cycles.
            (
                ctx(2, 2),
                DigitGraph::new(
                    [0, 1].into_iter().collect(),
                    vec![(0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 0)],
                ),
            ),
        ];
        for (c, g) in cases {
            let table = minimal_generators(&c, &g).unwrap();
            let limit = 2 * g.states().len() * c.dim();
            for &q in g.states() {
                let via_cycles = cycle_fixpoint_hull(&c, &g, q, limit);
                let via_algorithm =
                    VPolyhedron::from_generators(c.dim(), table[&q].clone(), Vec::new())
                        .unwrap();
                assert_eq!(via_algorithm, via_cycles, "state {q}");
            }
        }
    }

    #[test]
    fn strongly_connected_hull_is_the_closure_of_cycle_fixpoints() {
        // A vertex can also be a proper limit: tails that drift to the zero
        // loop of the other state approach 0 but no single cycle through
        // state 0 attains it. Length-bounded cycle hulls are then strictly
        // increasing inside the computed hull and converge to its vertex.
        let c = ctx(2, 1);
        let g = DigitGraph::new(
            [0, 1].into_iter().collect(),
            vec![(0, 0, 1), (1, 1, 0), (0, 1, 0), (1, 0, 1)],
        );
        let table = minimal_generators(&c, &g).unwrap();
        let hull = VPolyhedron::from_generators(1, table[&0].clone(), Vec::new()).unwrap();
        assert_eq!(hull.points(), &[qv(&[(-1, 1)]), qv(&[(0, 1)])]);

        let mut previous_top: Option<Rational> = None;
        for limit in [4usize, 6, 8] {
            let bounded = cycle_fixpoint_hull(&c, &g, 0, limit);
            assert!(hull.contains(&bounded).unwrap());
            assert!(!bounded.contains(&hull).unwrap());
            // Best fixpoint within the bound is the cycle 0…01 of full
            // length: -1/(2^limit - 1), approaching the vertex 0 from below.
            let top = bounded.points().last().unwrap()[0].clone();
            let expected = Rational::new(
                BigInt::from(-1),
                BigInt::from(2).pow(limit as u32) - BigInt::from(1),
            );
            assert_eq!(top, expected);
            if let Some(prev) = previous_top {
                assert!(top > prev);
            }
            previous_top = Some(top);
        }
    }

    #[test]
    fn generators_lie_in_unit_box_and_are_post_fixed() {
        let c = ctx(2, 1);
        let g = DigitGraph::new(
            [0, 1, 2].into_iter().collect(),
            vec![(0, 0, 1), (1, 1, 0), (1, 0, 2), (2, 1, 2), (0, 1, 0)],
        );
        let table = minimal_generators(&c, &g).unwrap();
        let hulls = hull_valuation(1, &table);
        let minus_one = Rational::from_integer(BigInt::from(-1));
        for points in table.values() {
            for p in points {
                assert!(p[0] >= minus_one && p[0] <= Rational::from_integer(0.into()));
            }
        }
        // Post-fixpoint: stepping any transition stays inside the source hull.
        for (s, a, d) in g.transitions() {
            let map = c.decimal_digit_map(*a).unwrap();
            let img = hulls[d].affine_image(&map).unwrap();
            assert!(hulls[s].contains(&img).unwrap());
        }
        // Minimality: no generator is a convex combination of its peers.
        for (q, points) in &table {
            for (i, p) in points.iter().enumerate() {
                let others: Vec<QVec> = points
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                if others.is_empty() {
                    continue;
                }
                let hull = conv_points(1, &others);
                assert!(!hull.member(p).unwrap(), "state {q} has a redundant generator");
            }
        }
    }
}
