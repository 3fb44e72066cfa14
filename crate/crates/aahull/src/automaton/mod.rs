//! The arithmetic-automaton data model: a Muller automaton over the digit
//! alphabet plus the separator `*`, recognizing encodings shaped
//! `sign^m * (digit^m)* * digit^ω`. This module holds the model itself, the
//! `.aaut` text format, structural validation, the sign/integer/decimal state
//! partition, and the graph machinery (strongly connected components, cycle
//! length alignment, the digit-position product).

mod analysis;
mod parse;

pub use analysis::{
    acceptance_coreachable, align_to_blocks, check_block_aligned, digit_position_classes,
    live_core, live_muller_sets, partition_states, reachable_states, scc_decomposition,
    subgraph_of_scc, validate, ValidationReport, DEFAULT_MAX_STATES,
};
pub use parse::parse_automaton;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::digits::DigitContext;
use crate::geometry::VPolyhedron;

/// Index into an automaton's state table.
pub type StateId = usize;

/// Assignment of a closed convex set to each state; missing entries denote
/// the empty set. All values share the ambient dimension.
pub type Valuation = BTreeMap<StateId, VPolyhedron>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    Digit(u32),
    Star,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Digit(d) => write!(f, "{d}"),
            Label::Star => write!(f, "*"),
        }
    }
}

pub type Transition = (StateId, Label, StateId);

/// Muller tables list the exact sets of states an accepting run may visit
/// infinitely often. The weak form is syntactic sugar: every strongly
/// connected component of the subgraph induced on the listed states that
/// carries at least one transition is a live Muller set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Acceptance {
    Muller(Vec<BTreeSet<StateId>>),
    Weak(BTreeSet<StateId>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown state `{name}` in acceptance condition")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: duplicate transition")]
    DuplicateTransition { line: usize },
    #[error("line {line}: digit {digit} out of range for basis {basis}")]
    BadDigit { line: usize, digit: u32, basis: u32 },
    #[error("state `{state}` is reachable with different numbers of separators")]
    InconsistentStarLevel { state: String },
    #[error("state `{state}` is reachable after more than two separators")]
    StarLevelTooDeep { state: String },
    #[error("sign transition out of `{state}` carries digit {digit}, not a sign digit")]
    BadSignTransition { state: String, digit: u32 },
    #[error("state `{state}` is reachable by sign paths of different lengths")]
    SignDepthConflict { state: String },
    #[error("sign path through `{state}` has length {depth}, expected exactly {expected}")]
    SignPathLength { state: String, depth: usize, expected: usize },
    #[error("separator out of `{state}` does not fall on a digit-block boundary")]
    MisalignedStar { state: String },
    #[error("state `{state}` is reachable at several digit positions; alignment required first")]
    AmbiguousDigitPosition { state: String },
    #[error("construction would exceed the state limit ({limit})")]
    StateLimit { limit: usize },
}

/// A Muller automaton over `Σ_r ∪ {*}` together with its digit context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArithmeticAutomaton {
    ctx: DigitContext,
    names: Vec<String>,
    transitions: Vec<Transition>,
    initial: BTreeSet<StateId>,
    acceptance: Acceptance,
}

impl ArithmeticAutomaton {
    pub fn ctx(&self) -> DigitContext {
        self.ctx
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        0..self.names.len()
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn acceptance(&self) -> &Acceptance {
        &self.acceptance
    }

    /// The automaton restricted to `keep`: transitions with both endpoints
    /// kept, initial states intersected, acceptance sets touching a removed
    /// state dropped (they can never be visited infinitely often).
    pub fn restricted_to(&self, keep: &BTreeSet<StateId>) -> ArithmeticAutomaton {
        let mut remap: HashMap<StateId, StateId> = HashMap::new();
        let mut names = Vec::with_capacity(keep.len());
        for &q in keep {
            remap.insert(q, names.len());
            names.push(self.names[q].clone());
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|(s, _, d)| remap.contains_key(s) && remap.contains_key(d))
            .map(|(s, l, d)| (remap[s], *l, remap[d]))
            .collect();
        let initial = self
            .initial
            .iter()
            .filter_map(|q| remap.get(q).copied())
            .collect();
        let acceptance = match &self.acceptance {
            Acceptance::Weak(ws) => {
                Acceptance::Weak(ws.iter().filter_map(|q| remap.get(q).copied()).collect())
            }
            Acceptance::Muller(sets) => Acceptance::Muller(
                sets.iter()
                    .filter(|f| f.iter().all(|q| remap.contains_key(q)))
                    .map(|f| f.iter().map(|q| remap[q]).collect())
                    .collect(),
            ),
        };
        ArithmeticAutomaton { ctx: self.ctx, names, transitions, initial, acceptance }
    }

    /// Serializes back to the `.aaut` text format, sorted by state names so
    /// the text is independent of interning order.
    pub fn to_aaut(&self) -> String {
        let by_name = |q: &StateId| self.names[*q].clone();
        let mut out = String::new();
        out.push_str(&format!("basis {}\n", self.ctx.basis()));
        out.push_str(&format!("dim {}\n", self.ctx.dim()));
        if !self.initial.is_empty() {
            let mut names: Vec<String> = self.initial.iter().map(by_name).collect();
            names.sort();
            out.push_str("initial");
            for n in names {
                out.push_str(&format!(" {n}"));
            }
            out.push('\n');
        }
        match &self.acceptance {
            Acceptance::Weak(ws) if !ws.is_empty() => {
                let mut names: Vec<String> = ws.iter().map(by_name).collect();
                names.sort();
                out.push_str("accepting");
                for n in names {
                    out.push_str(&format!(" {n}"));
                }
                out.push('\n');
            }
            Acceptance::Weak(_) => {}
            Acceptance::Muller(sets) => {
                if !sets.is_empty() {
                    let mut rendered: Vec<Vec<String>> = sets
                        .iter()
                        .map(|f| {
                            let mut names: Vec<String> = f.iter().map(by_name).collect();
                            names.sort();
                            names
                        })
                        .collect();
                    rendered.sort();
                    out.push_str("muller");
                    for f in rendered {
                        out.push_str(" {");
                        for n in f {
                            out.push_str(&format!(" {n}"));
                        }
                        out.push_str(" }");
                    }
                    out.push('\n');
                }
            }
        }
        let mut trans: Vec<(String, Label, String)> = self
            .transitions
            .iter()
            .map(|(s, l, d)| (self.names[*s].clone(), *l, self.names[*d].clone()))
            .collect();
        trans.sort();
        for (s, l, d) in trans {
            out.push_str(&format!("trans {s} {l} {d}\n"));
        }
        out
    }
}

/// Incremental construction with name interning and digit checks.
pub struct AutomatonBuilder {
    ctx: DigitContext,
    names: Vec<String>,
    index: HashMap<String, StateId>,
    transitions: BTreeSet<Transition>,
    initial: BTreeSet<StateId>,
    acceptance: Acceptance,
}

impl AutomatonBuilder {
    pub fn new(ctx: DigitContext) -> Self {
        AutomatonBuilder {
            ctx,
            names: Vec::new(),
            index: HashMap::new(),
            transitions: BTreeSet::new(),
            initial: BTreeSet::new(),
            acceptance: Acceptance::Muller(Vec::new()),
        }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    /// Adds a transition; `false` when it was already present.
    pub fn transition(&mut self, src: StateId, label: Label, dst: StateId) -> bool {
        if let Label::Digit(d) = label {
            assert!(self.ctx.is_digit(d), "digit out of range");
        }
        self.transitions.insert((src, label, dst))
    }

    pub fn mark_initial(&mut self, q: StateId) {
        self.initial.insert(q);
    }

    pub fn set_weak_acceptance(&mut self, states: BTreeSet<StateId>) {
        self.acceptance = Acceptance::Weak(states);
    }

    pub fn set_muller_acceptance(&mut self, sets: Vec<BTreeSet<StateId>>) {
        self.acceptance = Acceptance::Muller(sets);
    }

    pub fn add_muller_set(&mut self, set: BTreeSet<StateId>) {
        match &mut self.acceptance {
            Acceptance::Muller(sets) => sets.push(set),
            Acceptance::Weak(_) => panic!("acceptance already declared weak"),
        }
    }

    pub fn build(self) -> ArithmeticAutomaton {
        ArithmeticAutomaton {
            ctx: self.ctx,
            names: self.names,
            transitions: self.transitions.into_iter().collect(),
            initial: self.initial,
            acceptance: self.acceptance,
        }
    }
}

/// A graph labelled by digits only, over the same state identifiers as the
/// automaton it was cut from. Transitions are kept sorted.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DigitGraph {
    states: BTreeSet<StateId>,
    transitions: Vec<(StateId, u32, StateId)>,
}

impl DigitGraph {
    pub fn new(
        states: BTreeSet<StateId>,
        mut transitions: Vec<(StateId, u32, StateId)>,
    ) -> Self {
        transitions.sort();
        transitions.dedup();
        debug_assert!(transitions
            .iter()
            .all(|(s, _, d)| states.contains(s) && states.contains(d)));
        DigitGraph { states, transitions }
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn transitions(&self) -> &[(StateId, u32, StateId)] {
        &self.transitions
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn successors(&self, q: StateId) -> impl Iterator<Item = (u32, StateId)> + '_ {
        self.transitions
            .iter()
            .filter(move |(s, _, _)| *s == q)
            .map(|(_, a, d)| (*a, *d))
    }
}

/// The sign/integer/decimal partition of the live states, together with the
/// separator transitions between consecutive classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StatePartition {
    pub sign_states: BTreeSet<StateId>,
    pub integer_states: BTreeSet<StateId>,
    pub decimal_states: BTreeSet<StateId>,
    /// Separator transitions from sign states to integer states.
    pub sign_to_integer: Vec<(StateId, StateId)>,
    /// Separator transitions from integer states to decimal states.
    pub integer_to_decimal: Vec<(StateId, StateId)>,
}

/// Which class of the partition to cut out as a digit graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StateClass {
    Sign,
    Integer,
    Decimal,
}

impl StatePartition {
    pub fn class(&self, class: StateClass) -> &BTreeSet<StateId> {
        match class {
            StateClass::Sign => &self.sign_states,
            StateClass::Integer => &self.integer_states,
            StateClass::Decimal => &self.decimal_states,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sign_states.is_empty()
            && self.integer_states.is_empty()
            && self.decimal_states.is_empty()
    }
}

/// The digit subgraph induced on one partition class.
pub fn restrict(a: &ArithmeticAutomaton, partition: &StatePartition, class: StateClass) -> DigitGraph {
    let states = partition.class(class);
    let transitions = a
        .transitions()
        .iter()
        .filter_map(|(s, l, d)| match l {
            Label::Digit(digit) if states.contains(s) && states.contains(d) => {
                Some((*s, *digit, *d))
            }
            _ => None,
        })
        .collect();
    DigitGraph::new(states.clone(), transitions)
}
