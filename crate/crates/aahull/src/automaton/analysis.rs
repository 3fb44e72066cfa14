//! Structural analyses: reachability, liveness of Muller sets, the
//! sign/integer/decimal partition, strongly connected components, cycle
//! length alignment, and the digit-position product that makes every digit
//! subgraph block-aligned.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{
    Acceptance, ArithmeticAutomaton, AutomatonError, DigitGraph, Label, StateId, StatePartition,
};

/// Default cap on constructed state counts; the CLI overrides it from the
/// environment.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// States reachable from the initial set over arbitrary labels.
pub fn reachable_states(a: &ArithmeticAutomaton) -> BTreeSet<StateId> {
    let mut seen: BTreeSet<StateId> = a.initial().clone();
    let mut queue: VecDeque<StateId> = seen.iter().copied().collect();
    let mut succ: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
    for (s, _, d) in a.transitions() {
        succ.entry(*s).or_default().push(*d);
    }
    while let Some(q) = queue.pop_front() {
        if let Some(ds) = succ.get(&q) {
            for &d in ds {
                if seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
    }
    seen
}

/// Strongly connected components of a digit graph, by iterative Tarjan.
/// Components are returned as sorted state sets in a deterministic order.
pub fn scc_decomposition(g: &DigitGraph) -> Vec<BTreeSet<StateId>> {
    let states: Vec<StateId> = g.states().iter().copied().collect();
    let pos: HashMap<StateId, usize> = states.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let n = states.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, _, d) in g.transitions() {
        adj[pos[s]].push(pos[d]);
    }

    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![UNSET; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    let mut components: Vec<BTreeSet<StateId>> = Vec::new();

    // Explicit DFS frames: (node, next child position).
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let mut component = BTreeSet::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.insert(states[w]);
                        if w == v {
                            break;
                        }
                    }
                    components.push(component);
                }
            }
        }
    }
    components.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
    components
}

/// The digit graph induced on the strongly connected component of `q`.
pub fn subgraph_of_scc(g: &DigitGraph, q: StateId) -> DigitGraph {
    let component = scc_decomposition(g)
        .into_iter()
        .find(|c| c.contains(&q))
        .unwrap_or_else(|| [q].into_iter().collect());
    let transitions = g
        .transitions()
        .iter()
        .filter(|(s, _, d)| component.contains(s) && component.contains(d))
        .copied()
        .collect();
    DigitGraph::new(component, transitions)
}

/// The subgraph induced on `keep`, over all labels, as adjacency for SCC use.
fn induced_digit_graph(a: &ArithmeticAutomaton, keep: &BTreeSet<StateId>) -> DigitGraph {
    // Separator transitions participate in acceptance-set structure checks;
    // encode them with a pseudo-digit beyond the basis. This graph never
    // leaves this module.
    let transitions = a
        .transitions()
        .iter()
        .filter(|(s, _, d)| keep.contains(s) && keep.contains(d))
        .map(|(s, l, d)| {
            let code = match l {
                Label::Digit(digit) => *digit,
                Label::Star => a.ctx().basis(),
            };
            (*s, code, *d)
        })
        .collect();
    DigitGraph::new(keep.clone(), transitions)
}

/// The realizable acceptance sets: a run can visit exactly the states of `F`
/// infinitely often iff the subgraph induced on `F` is strongly connected and
/// contains at least one transition. Weak acceptance is sugar for "every
/// strongly connected component of the subgraph induced on the accepting
/// states, carrying at least one transition, is live".
pub fn live_muller_sets(a: &ArithmeticAutomaton) -> Vec<BTreeSet<StateId>> {
    match a.acceptance() {
        Acceptance::Muller(sets) => {
            let mut live: Vec<BTreeSet<StateId>> = sets
                .iter()
                .filter(|f| !f.is_empty() && is_live(a, f))
                .cloned()
                .collect();
            live.sort();
            live.dedup();
            live
        }
        Acceptance::Weak(ws) => {
            let induced = induced_digit_graph(a, ws);
            scc_decomposition(&induced)
                .into_iter()
                .filter(|c| {
                    induced
                        .transitions()
                        .iter()
                        .any(|(s, _, d)| c.contains(s) && c.contains(d))
                })
                .collect()
        }
    }
}

fn is_live(a: &ArithmeticAutomaton, f: &BTreeSet<StateId>) -> bool {
    let induced = induced_digit_graph(a, f);
    if induced.transitions().is_empty() {
        return false;
    }
    let components = scc_decomposition(&induced);
    components.len() == 1 && components[0] == *f
}

/// States from which some live acceptance set is reachable.
pub fn acceptance_coreachable(a: &ArithmeticAutomaton) -> BTreeSet<StateId> {
    let mut seen: BTreeSet<StateId> = live_muller_sets(a).into_iter().flatten().collect();
    let mut pred: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
    for (s, _, d) in a.transitions() {
        pred.entry(*d).or_default().push(*s);
    }
    let mut queue: VecDeque<StateId> = seen.iter().copied().collect();
    while let Some(q) = queue.pop_front() {
        if let Some(ss) = pred.get(&q) {
            for &s in ss {
                if seen.insert(s) {
                    queue.push_back(s);
                }
            }
        }
    }
    seen
}

/// The states that matter for the represented set: reachable from the
/// initial condition and able to reach a live acceptance set.
pub fn live_core(a: &ArithmeticAutomaton) -> BTreeSet<StateId> {
    let reach = reachable_states(a);
    let coreach = acceptance_coreachable(a);
    reach.intersection(&coreach).copied().collect()
}

fn successor_map(a: &ArithmeticAutomaton) -> BTreeMap<StateId, Vec<(Label, StateId)>> {
    let mut succ: BTreeMap<StateId, Vec<(Label, StateId)>> = BTreeMap::new();
    for (s, l, d) in a.transitions() {
        succ.entry(*s).or_default().push((*l, *d));
    }
    succ
}

/// Star levels of the live core: the number of separators read on any path
/// from the initial states. Levels must be unique per state and at most 2.
fn star_levels(a: &ArithmeticAutomaton) -> Result<BTreeMap<StateId, u8>, AutomatonError> {
    let core = live_core(a);
    let succ = successor_map(a);
    let mut level: BTreeMap<StateId, u8> = BTreeMap::new();
    let mut queue: VecDeque<StateId> = VecDeque::new();
    for &q in a.initial() {
        if core.contains(&q) {
            level.insert(q, 0);
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        let ql = level[&q];
        for (l, d) in succ.get(&q).into_iter().flatten() {
            if !core.contains(d) {
                continue;
            }
            let dl = match l {
                Label::Digit(_) => ql,
                Label::Star => ql + 1,
            };
            if dl > 2 {
                return Err(AutomatonError::StarLevelTooDeep { state: a.name(*d).to_string() });
            }
            match level.get(d) {
                Some(&existing) if existing != dl => {
                    return Err(AutomatonError::InconsistentStarLevel {
                        state: a.name(*d).to_string(),
                    });
                }
                Some(_) => {}
                None => {
                    level.insert(*d, dl);
                    queue.push_back(*d);
                }
            }
        }
    }
    Ok(level)
}

/// Partitions the live core into sign, integer, and decimal states by star
/// level, collecting the separator transitions between consecutive classes.
pub fn partition_states(a: &ArithmeticAutomaton) -> Result<StatePartition, AutomatonError> {
    let level = star_levels(a)?;
    let mut partition = StatePartition {
        sign_states: BTreeSet::new(),
        integer_states: BTreeSet::new(),
        decimal_states: BTreeSet::new(),
        sign_to_integer: Vec::new(),
        integer_to_decimal: Vec::new(),
    };
    for (&q, &l) in &level {
        match l {
            0 => partition.sign_states.insert(q),
            1 => partition.integer_states.insert(q),
            _ => partition.decimal_states.insert(q),
        };
    }
    for (s, l, d) in a.transitions() {
        if *l == Label::Star && level.contains_key(s) && level.contains_key(d) {
            match level[s] {
                0 => partition.sign_to_integer.push((*s, *d)),
                1 => partition.integer_to_decimal.push((*s, *d)),
                _ => unreachable!("level-2 separators are rejected as too deep"),
            }
        }
    }
    partition.sign_to_integer.sort();
    partition.integer_to_decimal.sort();
    Ok(partition)
}

/// Structural validation report for a parsed automaton.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// States both reachable and acceptance-coreachable.
    pub live_core: BTreeSet<StateId>,
    pub partition: StatePartition,
    pub live_sets: Vec<BTreeSet<StateId>>,
}

/// Checks the structural promises of the encoding shape: consistent star
/// levels, sign transitions carrying sign digits only, and sign paths of
/// length exactly the dimension.
pub fn validate(a: &ArithmeticAutomaton) -> Result<ValidationReport, AutomatonError> {
    let partition = partition_states(a)?;
    let m = a.ctx().dim();

    // Sign-part grading: depth = digits read since an initial state. Every
    // state must have one well-defined depth; separators leave only at depth
    // m; digits continue only below depth m.
    let mut depth: BTreeMap<StateId, usize> = BTreeMap::new();
    let mut queue: VecDeque<StateId> = VecDeque::new();
    for &q in a.initial() {
        if partition.sign_states.contains(&q) {
            depth.insert(q, 0);
            queue.push_back(q);
        }
    }
    let succ = successor_map(a);
    while let Some(q) = queue.pop_front() {
        let dq = depth[&q];
        for (l, d) in succ.get(&q).into_iter().flatten() {
            match l {
                Label::Digit(digit) if partition.sign_states.contains(d) => {
                    if !a.ctx().is_sign_digit(*digit) {
                        return Err(AutomatonError::BadSignTransition {
                            state: a.name(q).to_string(),
                            digit: *digit,
                        });
                    }
                    if dq + 1 > m {
                        return Err(AutomatonError::SignPathLength {
                            state: a.name(*d).to_string(),
                            depth: dq + 1,
                            expected: m,
                        });
                    }
                    match depth.get(d) {
                        Some(&existing) if existing != dq + 1 => {
                            return Err(AutomatonError::SignDepthConflict {
                                state: a.name(*d).to_string(),
                            });
                        }
                        Some(_) => {}
                        None => {
                            depth.insert(*d, dq + 1);
                            queue.push_back(*d);
                        }
                    }
                }
                Label::Star if partition.integer_states.contains(d) && dq != m => {
                    return Err(AutomatonError::SignPathLength {
                        state: a.name(q).to_string(),
                        depth: dq,
                        expected: m,
                    });
                }
                _ => {}
            }
        }
    }

    Ok(ValidationReport {
        live_core: live_core(a),
        partition,
        live_sets: live_muller_sets(a),
    })
}

/// Digit positions (mod the dimension) per state, for automata where that
/// position is uniquely determined — which the block-aligning product
/// guarantees. Separators must sit on block boundaries.
pub fn digit_position_classes(
    a: &ArithmeticAutomaton,
) -> Result<BTreeMap<StateId, usize>, AutomatonError> {
    let m = a.ctx().dim();
    let succ = successor_map(a);
    let mut class: BTreeMap<StateId, usize> = BTreeMap::new();
    let mut queue: VecDeque<StateId> = VecDeque::new();
    for &q in a.initial() {
        class.insert(q, 0);
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        let cq = class[&q];
        for (l, d) in succ.get(&q).into_iter().flatten() {
            let cd = match l {
                Label::Digit(_) => (cq + 1) % m,
                Label::Star => {
                    if cq != 0 {
                        return Err(AutomatonError::MisalignedStar {
                            state: a.name(q).to_string(),
                        });
                    }
                    cq
                }
            };
            match class.get(d) {
                Some(&existing) if existing != cd => {
                    return Err(AutomatonError::AmbiguousDigitPosition {
                        state: a.name(*d).to_string(),
                    });
                }
                Some(_) => {}
                None => {
                    class.insert(*d, cd);
                    queue.push_back(*d);
                }
            }
        }
    }
    Ok(class)
}

/// Every cycle length in `g` must be divisible by `m`; on failure an
/// offending cycle is returned. Equivalent to the existence of a labelling
/// `ℓ` with `ℓ(dst) = ℓ(src) + 1 (mod m)` on every transition inside each
/// strongly connected component.
pub fn check_block_aligned(
    g: &DigitGraph,
    m: usize,
) -> Result<(), Vec<(StateId, u32, StateId)>> {
    if m == 1 {
        return Ok(());
    }
    for component in scc_decomposition(g) {
        let edges: Vec<&(StateId, u32, StateId)> = g
            .transitions()
            .iter()
            .filter(|(s, _, d)| component.contains(s) && component.contains(d))
            .collect();
        if edges.is_empty() {
            continue;
        }
        let root = *component.iter().next().expect("nonempty component");
        // BFS levels plus parent edges for witness reconstruction.
        let mut level: BTreeMap<StateId, usize> = BTreeMap::new();
        let mut parent: BTreeMap<StateId, (StateId, u32)> = BTreeMap::new();
        level.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        let mut offending: Option<(StateId, u32, StateId)> = None;
        'bfs: while let Some(q) = queue.pop_front() {
            for &&(s, a, d) in &edges {
                if s != q {
                    continue;
                }
                let ld = (level[&q] + 1) % m;
                match level.get(&d) {
                    Some(&existing) if existing != ld => {
                        offending = Some((s, a, d));
                        break 'bfs;
                    }
                    Some(_) => {}
                    None => {
                        level.insert(d, ld);
                        parent.insert(d, (s, a));
                        queue.push_back(d);
                    }
                }
            }
        }
        let Some((u, a, v)) = offending else { continue };

        // Tree paths from the root, then any return path to the root; one of
        // the two closed walks has misaligned length.
        let tree_path = |mut q: StateId| -> Vec<(StateId, u32, StateId)> {
            let mut path = Vec::new();
            while let Some(&(p, lab)) = parent.get(&q) {
                path.push((p, lab, q));
                q = p;
            }
            path.reverse();
            path
        };
        let back = path_within(&edges, v, root).expect("component is strongly connected");
        let mut cycle_b = tree_path(v);
        cycle_b.extend(back.iter().copied());
        if cycle_b.len() % m != 0 {
            return Err(cycle_b);
        }
        let mut cycle_a = tree_path(u);
        cycle_a.push((u, a, v));
        let back = path_within(&edges, v, root).expect("component is strongly connected");
        cycle_a.extend(back);
        debug_assert!(cycle_a.len() % m != 0);
        return Err(cycle_a);
    }
    Ok(())
}

fn path_within(
    edges: &[&(StateId, u32, StateId)],
    from: StateId,
    to: StateId,
) -> Option<Vec<(StateId, u32, StateId)>> {
    let mut parent: BTreeMap<StateId, (StateId, u32)> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen: BTreeSet<StateId> = [from].into_iter().collect();
    while let Some(q) = queue.pop_front() {
        if q == to {
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let &(p, lab) = parent.get(&cur).expect("bfs parent");
                path.push((p, lab, cur));
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &&(s, a, d) in edges {
            if s == q && seen.insert(d) {
                parent.insert(d, (q, a));
                queue.push_back(d);
            }
        }
    }
    None
}

/// Product with a digit-position counter mod `m`: digits advance the counter,
/// separators keep it. The result recognizes encodings of the same vectors
/// and all its digit subgraphs are block-aligned. For dimension 1 this is the
/// identity transformation.
pub fn align_to_blocks(
    a: &ArithmeticAutomaton,
    max_states: usize,
) -> Result<ArithmeticAutomaton, AutomatonError> {
    let m = a.ctx().dim();
    if m == 1 {
        return Ok(a.clone());
    }

    let mut builder = super::AutomatonBuilder::new(a.ctx());
    let mut product: HashMap<(StateId, usize), StateId> = HashMap::new();
    let mut queue: VecDeque<(StateId, usize)> = VecDeque::new();
    let intern = |builder: &mut super::AutomatonBuilder,
                      product: &mut HashMap<(StateId, usize), StateId>,
                      q: StateId,
                      i: usize|
     -> StateId {
        *product
            .entry((q, i))
            .or_insert_with(|| builder.state(&format!("{}-{}", a.name(q), i)))
    };

    for &q in a.initial() {
        let id = intern(&mut builder, &mut product, q, 0);
        builder.mark_initial(id);
        queue.push_back((q, 0));
    }
    let succ = successor_map(a);
    let mut explored: BTreeSet<(StateId, usize)> = queue.iter().copied().collect();
    while let Some((q, i)) = queue.pop_front() {
        for (l, d) in succ.get(&q).into_iter().flatten() {
            let j = match l {
                Label::Digit(_) => (i + 1) % m,
                Label::Star => i,
            };
            if builder.state_count() >= max_states {
                return Err(AutomatonError::StateLimit { limit: max_states });
            }
            let src = intern(&mut builder, &mut product, q, i);
            let dst = intern(&mut builder, &mut product, *d, j);
            builder.transition(src, *l, dst);
            if explored.insert((*d, j)) {
                queue.push_back((*d, j));
            }
        }
    }

    // Lift the acceptance condition. Weak sets lift pointwise. A Muller set F
    // lifts to the strongly connected components of the product subgraph
    // induced on F's copies that project onto the whole of F: those are
    // exactly the possible infinitely-visited sets of runs whose projection
    // visits exactly F, as far as reachability of acceptance is concerned.
    match a.acceptance() {
        Acceptance::Weak(ws) => {
            let lifted = product
                .iter()
                .filter(|((q, _), _)| ws.contains(q))
                .map(|(_, &id)| id)
                .collect();
            builder.set_weak_acceptance(lifted);
        }
        Acceptance::Muller(_) => {
            let mut table: Vec<BTreeSet<StateId>> = Vec::new();
            for f in live_muller_sets(a) {
                let members: BTreeSet<StateId> = product
                    .iter()
                    .filter(|((q, _), _)| f.contains(q))
                    .map(|(_, &id)| id)
                    .collect();
                let back: HashMap<StateId, StateId> = product
                    .iter()
                    .filter(|((q, _), _)| f.contains(q))
                    .map(|((q, _), &id)| (id, *q))
                    .collect();
                let mut edges: Vec<(StateId, u32, StateId)> = Vec::new();
                for (s, l, d) in builder_transitions(&builder) {
                    if members.contains(&s) && members.contains(&d) {
                        let code = match l {
                            Label::Digit(digit) => digit,
                            Label::Star => a.ctx().basis(),
                        };
                        edges.push((s, code, d));
                    }
                }
                let induced = DigitGraph::new(members.clone(), edges);
                for component in scc_decomposition(&induced) {
                    let has_edge = induced
                        .transitions()
                        .iter()
                        .any(|(s, _, d)| component.contains(s) && component.contains(d));
                    if !has_edge {
                        continue;
                    }
                    let projection: BTreeSet<StateId> =
                        component.iter().map(|id| back[id]).collect();
                    if projection == f {
                        table.push(component);
                    }
                }
            }
            table.sort();
            table.dedup();
            builder.set_muller_acceptance(table);
        }
    }

    Ok(builder.build())
}

fn builder_transitions(b: &super::AutomatonBuilder) -> Vec<(StateId, Label, StateId)> {
    b.transitions.iter().copied().collect()
}
