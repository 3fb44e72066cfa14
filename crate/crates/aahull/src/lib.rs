//! Exact convex hulls of sets recognized by arithmetic automata.
//!
//! An arithmetic automaton is a Muller automaton over the alphabet of base-`r`
//! digits plus a separator `⋆`. It reads most-significant-digit-first encodings
//! of real vectors, shaped `sign^m ⋆ (digit^m)* ⋆ digit^ω`: `m` sign digits,
//! then the integer part in blocks of `m` interleaved digits, then an infinite
//! decimal tail. The set of vectors whose encodings are accepted is in general
//! neither convex nor even closed, but its closed convex hull is always a
//! rational polyhedron, and this crate computes that polyhedron exactly — both
//! as generators (points and rays) and as facet inequalities.
//!
//! The computation never leaves exact rational arithmetic:
//!
//! * [`geometry`] — polyhedra in generator form over arbitrary-precision
//!   rationals, with LP-based canonicalization and facet enumeration by the
//!   double description method.
//! * [`digits`] — the affine maps describing how reading one digit transforms
//!   the integer or decimal value under construction, their word compositions
//!   and periodic-word fixpoints.
//! * [`automaton`] — the automaton model, its text format, structural
//!   validation, and the sign/integer/decimal state partition.
//! * [`decimal_hull`] — per-state convex hulls of decimal values of all
//!   infinite paths in a digit graph, computed from simple lassos.
//! * [`fixpoint`] — the accelerated data-flow iteration that computes exact
//!   least post-fixpoints of the integer transfer semantics, replacing lossy
//!   widening with exact cycle acceleration.
//! * [`pipeline`] — the end-to-end hull computation and a point-enumeration
//!   sampler for cross-checking.
//! * [`compiler`] — compilation of linear constraint systems over `ℕ^m`/`ℤ^m`
//!   into arithmetic automata, used as an ingestion path and test fixture
//!   generator.

pub mod automaton;
pub mod compiler;
pub mod decimal_hull;
pub mod digits;
pub mod fixpoint;
pub mod geometry;
pub mod pipeline;

pub use automaton::{Acceptance, ArithmeticAutomaton, DigitGraph, Label, StateId, StatePartition};
pub use digits::DigitContext;
pub use geometry::{AffineMap, FacetSystem, HConstraint, QVec, Rational, VPolyhedron};
