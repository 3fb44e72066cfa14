//! Compiles conjunctions of linear constraints over `ℕ^m` or `ℤ^m` into
//! arithmetic automata reading most-significant-digit-first encodings.
//!
//! The construction tracks, per atom `a·x ⋈ b`, the running value
//! `g = a·v` of the partially read integer `v`: reading one digit block `d`
//! updates `g ← r·g + a·d`. Once `|g|` exceeds `B = 1 + |b| + Σ|a_i|` the
//! atom's truth can no longer change — the update moves `g` further from
//! zero than any remaining digits can compensate — so residuals saturate at
//! `±B` and the state space stays finite. A separator may be taken exactly
//! at block boundaries where every atom is satisfied; the decimal tail is
//! the all-zeros cycle, so the represented set is the integer solution set.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::automaton::{ArithmeticAutomaton, AutomatonBuilder, Label, StateId, DEFAULT_MAX_STATES};
use crate::digits::DigitContext;
use crate::geometry::QVec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("constraint syntax error: {0}")]
    Parse(String),
    #[error("constraint system has no atoms")]
    EmptySystem,
    #[error("atom has {got} coefficients, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("atom has all-zero coefficients")]
    ZeroCoefficients,
    #[error("construction would exceed the state limit ({limit})")]
    StateLimit { limit: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

/// One linear constraint `coeffs · x ⋈ bound` with integer data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearAtom {
    pub coeffs: Vec<i64>,
    pub relation: Relation,
    pub bound: i64,
}

impl LinearAtom {
    pub fn holds(&self, x: &[i64]) -> bool {
        let value: i128 = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(&a, &v)| a as i128 * v as i128)
            .sum();
        let b = self.bound as i128;
        match self.relation {
            Relation::Le => value <= b,
            Relation::Lt => value < b,
            Relation::Eq => value == b,
            Relation::Ge => value >= b,
            Relation::Gt => value > b,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Domain {
    /// Nonnegative integer vectors; sign digits are all zero.
    Nat,
    /// All integer vectors; each component picks its own sign digit.
    Int,
}

/// A conjunction of atoms over a lattice domain in a digit context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstraintSystem {
    atoms: Vec<LinearAtom>,
    domain: Domain,
    ctx: DigitContext,
}

impl ConstraintSystem {
    pub fn new(
        atoms: Vec<LinearAtom>,
        domain: Domain,
        ctx: DigitContext,
    ) -> Result<Self, CompileError> {
        if atoms.is_empty() {
            return Err(CompileError::EmptySystem);
        }
        for atom in &atoms {
            if atom.coeffs.len() != ctx.dim() {
                return Err(CompileError::DimensionMismatch {
                    expected: ctx.dim(),
                    got: atom.coeffs.len(),
                });
            }
            if atom.coeffs.iter().all(|&c| c == 0) {
                return Err(CompileError::ZeroCoefficients);
            }
        }
        Ok(ConstraintSystem { atoms, domain, ctx })
    }

    pub fn atoms(&self) -> &[LinearAtom] {
        &self.atoms
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ctx(&self) -> DigitContext {
        self.ctx
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let in_domain = match self.domain {
            Domain::Nat => x.iter().all(|&v| v >= 0),
            Domain::Int => true,
        };
        in_domain && self.atoms.iter().all(|a| a.holds(x))
    }

    /// The exact integer solution set within the box `[-bound, bound]^m`
    /// (clipped to the nonnegative orthant for the natural domain) —
    /// a brute-force reference independent of the automaton route.
    pub fn solutions_in_box(&self, bound: i64) -> Vec<QVec> {
        let m = self.ctx.dim();
        let low = match self.domain {
            Domain::Nat => 0,
            Domain::Int => -bound,
        };
        let mut out = Vec::new();
        let mut point = vec![low; m];
        loop {
            if self.holds(&point) {
                out.push(QVec::from_integers(&point));
            }
            let mut i = 0;
            loop {
                if i == m {
                    return out;
                }
                point[i] += 1;
                if point[i] <= bound {
                    break;
                }
                point[i] = low;
                i += 1;
            }
        }
    }
}

/// Atom normalized to `coeffs·x ≤ bound` or `coeffs·x = bound`; strict
/// relations tighten by one over the integers.
#[derive(Clone, Debug)]
struct NormalAtom {
    coeffs: Vec<BigInt>,
    bound: BigInt,
    equality: bool,
    /// Saturation threshold `1 + |bound| + Σ|coeffs|`.
    clamp: BigInt,
}

impl NormalAtom {
    fn from(atom: &LinearAtom) -> NormalAtom {
        let (coeffs, bound, equality): (Vec<i64>, i64, bool) = match atom.relation {
            Relation::Le => (atom.coeffs.clone(), atom.bound, false),
            Relation::Lt => (atom.coeffs.clone(), atom.bound - 1, false),
            Relation::Ge => (atom.coeffs.iter().map(|&c| -c).collect(), -atom.bound, false),
            Relation::Gt => (atom.coeffs.iter().map(|&c| -c).collect(), -atom.bound - 1, false),
            Relation::Eq => (atom.coeffs.clone(), atom.bound, true),
        };
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
        let bound = BigInt::from(bound);
        let clamp = BigInt::from(1)
            + bound.abs()
            + coeffs.iter().map(|c| c.abs()).sum::<BigInt>();
        NormalAtom { coeffs, bound, equality, clamp }
    }

    fn saturate(&self, g: BigInt) -> BigInt {
        if g > self.clamp {
            self.clamp.clone()
        } else if g < -&self.clamp {
            -self.clamp.clone()
        } else {
            g
        }
    }

    fn step_block(&self, g: &BigInt, r: u32, block: &[u32]) -> BigInt {
        let mut next = g * BigInt::from(r);
        for (c, &d) in self.coeffs.iter().zip(block) {
            next += c * BigInt::from(d);
        }
        self.saturate(next)
    }

    fn satisfied(&self, g: &BigInt) -> bool {
        if self.equality {
            g == &self.bound
        } else {
            g <= &self.bound
        }
    }
}

/// Residual state of the integer phase.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct IntKey {
    residuals: Vec<BigInt>,
    partial: Vec<u32>,
}

pub fn compile(system: &ConstraintSystem) -> Result<ArithmeticAutomaton, CompileError> {
    compile_with_limit(system, DEFAULT_MAX_STATES)
}

pub fn compile_with_limit(
    system: &ConstraintSystem,
    max_states: usize,
) -> Result<ArithmeticAutomaton, CompileError> {
    let ctx = system.ctx;
    let m = ctx.dim();
    let r = ctx.basis();
    let atoms: Vec<NormalAtom> = system.atoms.iter().map(NormalAtom::from).collect();
    let sign_digits: Vec<u32> = match system.domain {
        Domain::Nat => vec![0],
        Domain::Int => vec![0, r - 1],
    };

    let mut builder = AutomatonBuilder::new(ctx);
    let check_limit = |b: &AutomatonBuilder| -> Result<(), CompileError> {
        if b.state_count() > max_states {
            Err(CompileError::StateLimit { limit: max_states })
        } else {
            Ok(())
        }
    };

    // Sign phase: a tree over the allowed sign digits.
    let sign_name = |bits: &[u32]| {
        let mut name = format!("s{}", bits.len());
        for b in bits {
            name.push_str(&format!("-{b}"));
        }
        name
    };
    let start = builder.state(&sign_name(&[]));
    builder.mark_initial(start);

    let int_name = |key: &IntKey| {
        let mut name = "i".to_string();
        for g in &key.residuals {
            name.push_str(&format!("-{g}"));
        }
        name.push_str("-p");
        for d in &key.partial {
            name.push_str(&format!("-{d}"));
        }
        name
    };

    let mut int_states: HashMap<IntKey, StateId> = HashMap::new();
    let mut int_queue: VecDeque<IntKey> = VecDeque::new();

    // Decimal tail: the all-zeros cycle of length m.
    let tail: Vec<StateId> = (0..m).map(|i| builder.state(&format!("d{i}"))).collect();
    for i in 0..m {
        builder.transition(tail[i], Label::Digit(0), tail[(i + 1) % m]);
    }
    builder.set_weak_acceptance(tail.iter().copied().collect());

    // Enumerate sign words breadth-first.
    let mut frontier: Vec<(StateId, Vec<u32>)> = vec![(start, Vec::new())];
    for _ in 0..m {
        let mut next = Vec::new();
        for (state, bits) in frontier {
            for &s in &sign_digits {
                let mut extended = bits.clone();
                extended.push(s);
                let target = builder.state(&sign_name(&extended));
                check_limit(&builder)?;
                builder.transition(state, Label::Digit(s), target);
                next.push((target, extended));
            }
        }
        frontier = next;
    }
    for (state, bits) in frontier {
        // Seed residuals from s/(1−r) ∈ {0, −1}^m.
        let seed: Vec<BigInt> = atoms
            .iter()
            .map(|atom| {
                let mut g = BigInt::zero();
                for (c, &s) in atom.coeffs.iter().zip(&bits) {
                    if s != 0 {
                        g -= c;
                    }
                }
                atom.saturate(g)
            })
            .collect();
        let key = IntKey { residuals: seed, partial: Vec::new() };
        let target = match int_states.get(&key) {
            Some(&id) => id,
            None => {
                let id = builder.state(&int_name(&key));
                check_limit(&builder)?;
                int_states.insert(key.clone(), id);
                int_queue.push_back(key.clone());
                id
            }
        };
        builder.transition(state, Label::Star, target);
    }

    while let Some(key) = int_queue.pop_front() {
        let state = int_states[&key];
        // At block boundaries a satisfied residual vector may exit.
        if key.partial.is_empty()
            && atoms.iter().zip(&key.residuals).all(|(a, g)| a.satisfied(g))
        {
            builder.transition(state, Label::Star, tail[0]);
        }
        for digit in 0..r {
            let mut partial = key.partial.clone();
            partial.push(digit);
            let next_key = if partial.len() == m {
                let residuals = atoms
                    .iter()
                    .zip(&key.residuals)
                    .map(|(a, g)| a.step_block(g, r, &partial))
                    .collect();
                IntKey { residuals, partial: Vec::new() }
            } else {
                IntKey { residuals: key.residuals.clone(), partial }
            };
            let target = match int_states.get(&next_key) {
                Some(&id) => id,
                None => {
                    let id = builder.state(&int_name(&next_key));
                    check_limit(&builder)?;
                    int_states.insert(next_key.clone(), id);
                    int_queue.push_back(next_key.clone());
                    id
                }
            };
            builder.transition(state, Label::Digit(digit), target);
        }
    }

    Ok(builder.build())
}

/// Parsed constraint source: atoms plus optional directives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSource {
    pub atoms: Vec<LinearAtom>,
    pub domain: Option<Domain>,
    pub basis: Option<u32>,
    /// Highest variable index mentioned.
    pub dim: usize,
}

/// Parses constraint text such as `3*x1 - x2 > 0; x2 >= 0` with optional
/// `domain nat|int` and `basis <r>` directives, separated by `;` or
/// newlines. Variables are `x1, x2, …`; `#` starts a comment.
pub fn parse_constraints(text: &str) -> Result<SystemSource, CompileError> {
    let mut atoms = Vec::new();
    let mut domain = None;
    let mut basis = None;
    let mut dim = 0usize;

    for raw in text.lines().flat_map(|l| l.split(';')) {
        let stmt = raw.split('#').next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        let lower = stmt.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("domain") {
            domain = Some(match rest.trim() {
                "nat" => Domain::Nat,
                "int" => Domain::Int,
                other => {
                    return Err(CompileError::Parse(format!("unknown domain `{other}`")))
                }
            });
            continue;
        }
        if let Some(rest) = lower.strip_prefix("basis") {
            let r: u32 = rest
                .trim()
                .parse()
                .map_err(|_| CompileError::Parse("basis must be an integer".into()))?;
            if r < 2 {
                return Err(CompileError::Parse("basis must be at least 2".into()));
            }
            basis = Some(r);
            continue;
        }
        let atom = parse_atom(stmt)?;
        dim = dim.max(atom.coeffs.len());
        atoms.push(atom);
    }

    // Pad coefficient vectors to the common dimension.
    for atom in &mut atoms {
        atom.coeffs.resize(dim, 0);
    }
    Ok(SystemSource { atoms, domain, basis, dim })
}

fn parse_atom(stmt: &str) -> Result<LinearAtom, CompileError> {
    let (rel, op) = ["<=", ">=", "==", "<", ">", "="]
        .iter()
        .find_map(|op| stmt.find(op).map(|i| (i, *op)))
        .map(|(i, op)| ((i, i + op.len()), op))
        .ok_or_else(|| CompileError::Parse(format!("no relation in `{stmt}`")))?;
    let lhs = &stmt[..rel.0];
    let rhs = &stmt[rel.1..];
    let relation = match op {
        "<=" => Relation::Le,
        ">=" => Relation::Ge,
        "<" => Relation::Lt,
        ">" => Relation::Gt,
        _ => Relation::Eq,
    };

    let (lc, lk) = parse_side(lhs)?;
    let (rc, rk) = parse_side(rhs)?;
    let dim = lc.len().max(rc.len());
    let mut coeffs = vec![0i64; dim];
    for (i, &c) in lc.iter().enumerate() {
        coeffs[i] += c;
    }
    for (i, &c) in rc.iter().enumerate() {
        coeffs[i] -= c;
    }
    Ok(LinearAtom { coeffs, relation, bound: rk - lk })
}

/// Parses one side of a relation into per-variable coefficients plus a
/// constant term.
fn parse_side(side: &str) -> Result<(Vec<i64>, i64), CompileError> {
    let compact: String = side.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(CompileError::Parse("empty side of relation".into()));
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let mut constant = 0i64;
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let sign = if let Some(r) = rest.strip_prefix('+') {
            rest = r;
            1
        } else if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            -1
        } else if first {
            1
        } else {
            return Err(CompileError::Parse(format!("expected `+` or `-` before `{rest}`")));
        };
        first = false;

        let digits_end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let number: Option<i64> = if digits_end > 0 {
            Some(
                rest[..digits_end]
                    .parse()
                    .map_err(|_| CompileError::Parse(format!("bad number in `{rest}`")))?,
            )
        } else {
            None
        };
        rest = &rest[digits_end..];
        rest = rest.strip_prefix('*').unwrap_or(rest);

        if let Some(r) = rest.strip_prefix('x') {
            let idx_end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            if idx_end == 0 {
                return Err(CompileError::Parse("variable needs an index, like x1".into()));
            }
            let idx: usize = r[..idx_end]
                .parse()
                .map_err(|_| CompileError::Parse("bad variable index".into()))?;
            if idx == 0 {
                return Err(CompileError::Parse("variables are numbered from x1".into()));
            }
            rest = &r[idx_end..];
            if coeffs.len() < idx {
                coeffs.resize(idx, 0);
            }
            coeffs[idx - 1] += sign * number.unwrap_or(1);
        } else {
            match number {
                Some(k) => constant += sign * k,
                None => {
                    return Err(CompileError::Parse(format!("dangling token near `{rest}`")))
                }
            }
        }
    }
    Ok((coeffs, constant))
}

/// Builds a full system from parsed source plus defaults.
pub fn system_from_source(
    source: &SystemSource,
    default_domain: Domain,
    default_basis: u32,
) -> Result<ConstraintSystem, CompileError> {
    let domain = source.domain.unwrap_or(default_domain);
    let basis = source.basis.unwrap_or(default_basis);
    if source.dim == 0 {
        return Err(CompileError::EmptySystem);
    }
    let ctx = DigitContext::new(basis, source.dim);
    ConstraintSystem::new(source.atoms.clone(), domain, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline;
    use crate::geometry::VPolyhedron;

    fn nat_system(text: &str, basis: u32) -> ConstraintSystem {
        let source = parse_constraints(text).unwrap();
        system_from_source(&source, Domain::Nat, basis).unwrap()
    }

    #[test]
    fn parse_examples() {
        let source = parse_constraints("3*x1 - x2 > 0; x2 >= 0").unwrap();
        assert_eq!(source.dim, 2);
        assert_eq!(
            source.atoms[0],
            LinearAtom { coeffs: vec![3, -1], relation: Relation::Gt, bound: 0 }
        );
        assert_eq!(
            source.atoms[1],
            LinearAtom { coeffs: vec![0, 1], relation: Relation::Ge, bound: 0 }
        );

        let with_directives = parse_constraints("domain int\nbasis 3\nx1 + 2 <= 5").unwrap();
        assert_eq!(with_directives.domain, Some(Domain::Int));
        assert_eq!(with_directives.basis, Some(3));
        assert_eq!(
            with_directives.atoms[0],
            LinearAtom { coeffs: vec![1], relation: Relation::Le, bound: 3 }
        );

        assert!(parse_constraints("x1 ? 3").is_err());
        assert!(parse_constraints("y + 1 <= 2").is_err());
    }

    #[test]
    fn solutions_in_box_examples() {
        let s = nat_system("3*x1 - x2 > 0", 2);
        let sols = s.solutions_in_box(4);
        assert!(sols.contains(&QVec::from_integers(&[1, 0])));
        assert!(sols.contains(&QVec::from_integers(&[1, 2])));
        assert!(!sols.contains(&QVec::from_integers(&[1, 3])));
        assert!(!sols.contains(&QVec::from_integers(&[0, 0])));
        assert_eq!(sols.len(), (1..=4).map(|x1| (3 * x1).min(5)).sum::<i64>() as usize);

        let eq = nat_system("x1 = 0", 2);
        assert_eq!(eq.solutions_in_box(4).len(), 1);

        let seg = nat_system("x1 >= 1; x1 <= 3", 2);
        assert_eq!(seg.solutions_in_box(4).len(), 3);
    }

    #[test]
    fn compile_point_system() {
        let s = nat_system("x1 = 0", 2);
        let a = compile(&s).unwrap();
        let hull = pipeline::hull(&a).unwrap();
        assert_eq!(hull, VPolyhedron::from_point(QVec::from_integers(&[0])));
    }

    #[test]
    fn compile_segment_system() {
        let s = nat_system("x1 >= 1; x1 <= 3", 2);
        let a = compile(&s).unwrap();
        let hull = pipeline::hull(&a).unwrap();
        let expected = VPolyhedron::from_generators(
            1,
            vec![QVec::from_integers(&[1]), QVec::from_integers(&[3])],
            vec![],
        )
        .unwrap();
        assert_eq!(hull, expected);
    }

    #[test]
    fn compile_wedge_system() {
        let s = nat_system("3*x1 - x2 > 0; x2 >= 0", 2);
        let a = compile(&s).unwrap();
        let hull = pipeline::hull(&a).unwrap();
        let expected = VPolyhedron::from_generators(
            2,
            vec![QVec::from_integers(&[1, 0]), QVec::from_integers(&[1, 2])],
            vec![QVec::from_integers(&[1, 0]), QVec::from_integers(&[1, 3])],
        )
        .unwrap();
        assert_eq!(hull, expected);
    }

    #[test]
    fn compiled_membership_matches_direct_evaluation() {
        let s = nat_system("x1 + x2 <= 3", 2);
        let a = compile(&s).unwrap();
        let points = pipeline::enumerate_points(&a, 4).unwrap();
        for p in &points {
            let coords: Vec<i64> = p
                .entries()
                .iter()
                .map(|e| {
                    assert!(e.is_integer());
                    i64::try_from(e.numer().clone()).unwrap()
                })
                .collect();
            assert!(s.holds(&coords), "enumerated {p} is not a solution");
        }
        for sol in s.solutions_in_box(3) {
            assert!(points.contains(&sol), "missing solution {sol}");
        }
    }

    #[test]
    fn integer_domain_compiles_negative_solutions() {
        let source = parse_constraints("x1 <= -1; x1 >= -4").unwrap();
        let s = system_from_source(&source, Domain::Int, 2).unwrap();
        let a = compile(&s).unwrap();
        let hull = pipeline::hull(&a).unwrap();
        let expected = VPolyhedron::from_generators(
            1,
            vec![QVec::from_integers(&[-4]), QVec::from_integers(&[-1])],
            vec![],
        )
        .unwrap();
        assert_eq!(hull, expected);
    }

    #[test]
    fn unsatisfiable_system_is_empty() {
        let s = nat_system("x1 <= 1; x1 >= 2", 2);
        let a = compile(&s).unwrap();
        assert!(pipeline::hull(&a).unwrap().is_empty());
    }

    #[test]
    fn state_limit_is_enforced() {
        let s = nat_system("3*x1 - x2 > 0; x2 >= 0", 2);
        assert!(matches!(
            compile_with_limit(&s, 5),
            Err(CompileError::StateLimit { limit: 5 })
        ));
    }
}
