//! Closed convex sets in exact rational arithmetic, kept in generator form:
//! a polyhedron is `conv(points) + cone(rays)`. The generator representation
//! is primary throughout the crate (every algorithm produces generators);
//! facet inequalities are derived output only.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so values can be shared freely across threads.

mod facets;
mod lp;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Int = BigInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("facet enumeration requires a nonempty polyhedron")]
    EmptyPolyhedron,
}

fn check_dim(expected: usize, got: usize) -> Result<(), GeomError> {
    if expected == got {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch { expected, got })
    }
}

/// A vector of rationals of fixed length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVec(Vec<Rational>);

impl QVec {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVec(entries)
    }

    pub fn from_integers(entries: &[i64]) -> Self {
        QVec(entries.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn zero(dim: usize) -> Self {
        QVec(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), other.dim());
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), other.dim());
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rational) -> QVec {
        QVec(self.0.iter().map(|a| a * c).collect())
    }

    pub fn dot(&self, other: &QVec) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

impl std::ops::Index<usize> for QVec {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// An affine map `x ↦ M·x + v` with a square rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap {
    rows: Vec<QVec>,
    offset: QVec,
}

impl AffineMap {
    pub fn new(rows: Vec<QVec>, offset: QVec) -> Self {
        let dim = offset.dim();
        assert!(rows.len() == dim && rows.iter().all(|r| r.dim() == dim));
        AffineMap { rows, offset }
    }

    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                let mut row = vec![Rational::zero(); dim];
                row[i] = Rational::one();
                QVec(row)
            })
            .collect();
        AffineMap { rows, offset: QVec::zero(dim) }
    }

    pub fn dim(&self) -> usize {
        self.offset.dim()
    }

    pub fn offset(&self) -> &QVec {
        &self.offset
    }

    pub fn apply(&self, x: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), x.dim());
        QVec(
            self.rows
                .iter()
                .zip(self.offset.entries())
                .map(|(row, off)| row.dot(x) + off)
                .collect(),
        )
    }

    /// Applies only the linear part `x ↦ M·x`, the "uniform form" of the map.
    /// Rays of a polyhedron transform under this part alone.
    pub fn apply_uniform(&self, x: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), x.dim());
        QVec(self.rows.iter().map(|row| row.dot(x)).collect())
    }

    /// Composition `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        debug_assert_eq!(self.dim(), inner.dim());
        let dim = self.dim();
        let rows: Vec<QVec> = (0..dim)
            .map(|i| {
                QVec(
                    (0..dim)
                        .map(|j| {
                            (0..dim).fold(Rational::zero(), |acc, k| {
                                acc + &self.rows[i][k] * &inner.rows[k][j]
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        let offset = self.apply(&inner.offset);
        AffineMap { rows, offset }
    }

    /// Returns `Some(c)` when the matrix equals `c · Identity`.
    pub fn scalar_matrix(&self) -> Option<Rational> {
        let dim = self.dim();
        let c = self.rows[0][0].clone();
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j { c.clone() } else { Rational::zero() };
                if self.rows[i][j] != expect {
                    return None;
                }
            }
        }
        Some(c)
    }
}

/// One linear inequality `coeffs · x + bound ≤ 0` (or `= 0` when used as an
/// equality) with integer data whose common gcd is 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct HConstraint {
    pub coeffs: Vec<Int>,
    pub bound: Int,
}

impl HConstraint {
    pub fn eval(&self, x: &QVec) -> Rational {
        debug_assert_eq!(self.coeffs.len(), x.dim());
        self.coeffs
            .iter()
            .zip(x.entries())
            .fold(Rational::from_integer(self.bound.clone()), |acc, (a, v)| {
                acc + v * Rational::from_integer(a.clone())
            })
    }

    pub fn render(&self, rel: &str) -> String {
        let mut out = String::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if out.is_empty() {
                if a.is_negative() {
                    out.push('-');
                }
            } else if a.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&format!("x{}", i + 1));
        }
        if out.is_empty() {
            out.push_str(&self.bound.to_string());
        } else if self.bound.is_positive() {
            out.push_str(&format!(" + {}", self.bound));
        } else if self.bound.is_negative() {
            out.push_str(&format!(" - {}", self.bound.abs()));
        }
        format!("{out} {rel} 0")
    }
}

/// Facet inequalities plus implicit equalities cutting out exactly the same
/// set as the polyhedron they came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FacetSystem {
    pub inequalities: Vec<HConstraint>,
    pub equalities: Vec<HConstraint>,
}

impl FacetSystem {
    pub fn satisfied_by(&self, x: &QVec) -> bool {
        self.inequalities.iter().all(|c| !c.eval(x).is_positive())
            && self.equalities.iter().all(|c| c.eval(x).is_zero())
    }
}

/// A closed convex polyhedron `conv(points) + cone(rays)`, kept canonical:
/// no generator is removable without changing the denoted set, rays are
/// primitive integer direction vectors, and both lists are sorted. The empty
/// set is `points = rays = ∅`. Structural equality therefore coincides with
/// set equality for pointed polyhedra; use [`VPolyhedron::same_set`] when
/// lineality may be present.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VPolyhedron {
    dim: usize,
    points: Vec<QVec>,
    rays: Vec<QVec>,
}

impl VPolyhedron {
    pub fn empty(dim: usize) -> Self {
        VPolyhedron { dim, points: Vec::new(), rays: Vec::new() }
    }

    pub fn from_point(p: QVec) -> Self {
        let dim = p.dim();
        VPolyhedron { dim, points: vec![p], rays: Vec::new() }
    }

    pub fn from_generators(
        dim: usize,
        points: Vec<QVec>,
        rays: Vec<QVec>,
    ) -> Result<Self, GeomError> {
        for g in points.iter().chain(rays.iter()) {
            check_dim(dim, g.dim())?;
        }
        Ok(Self::canonical(dim, points, rays))
    }

    fn canonical(dim: usize, points: Vec<QVec>, rays: Vec<QVec>) -> Self {
        let (points, rays) = canonical_generators(points, rays);
        VPolyhedron { dim, points, rays }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[QVec] {
        &self.points
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    /// Re-derives the canonical form. Idempotent on values built through the
    /// public constructors; exposed for callers assembling raw generators.
    pub fn canonicalize(&self) -> VPolyhedron {
        Self::canonical(self.dim, self.points.clone(), self.rays.clone())
    }

    /// Exact membership: is `x` a convex combination of the points plus a
    /// nonnegative combination of the rays?
    pub fn member(&self, x: &QVec) -> Result<bool, GeomError> {
        check_dim(self.dim, x.dim())?;
        if self.is_empty() {
            return Ok(false);
        }
        Ok(member_raw(&self.points, &self.rays, x))
    }

    /// Inclusion order: every generator point of `other` lies in `self` and
    /// every ray of `other` lies in the recession cone of `self`.
    pub fn contains(&self, other: &VPolyhedron) -> Result<bool, GeomError> {
        check_dim(self.dim, other.dim)?;
        if other.is_empty() {
            return Ok(true);
        }
        if self.is_empty() {
            return Ok(false);
        }
        for p in &other.points {
            if !member_raw(&self.points, &self.rays, p) {
                return Ok(false);
            }
        }
        for r in &other.rays {
            if !in_cone(&self.rays, r) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_set(&self, other: &VPolyhedron) -> Result<bool, GeomError> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    /// Least upper bound: canonical form of the united generator lists, which
    /// for finitely generated operands is the closed convex hull of the union.
    pub fn join(&self, other: &VPolyhedron) -> Result<VPolyhedron, GeomError> {
        check_dim(self.dim, other.dim)?;
        Ok(Self::join_many(self.dim, [self, other]))
    }

    /// Joins any number of polyhedra with a single canonicalization pass.
    pub fn join_many<'a>(
        dim: usize,
        parts: impl IntoIterator<Item = &'a VPolyhedron>,
    ) -> VPolyhedron {
        let mut points = Vec::new();
        let mut rays = Vec::new();
        for p in parts {
            debug_assert_eq!(p.dim, dim);
            points.extend_from_slice(&p.points);
            rays.extend_from_slice(&p.rays);
        }
        Self::canonical(dim, points, rays)
    }

    /// The set `{p − q | p ∈ self, q ∈ other}`: pairwise point differences,
    /// rays of `self` united with the negated rays of `other`. Empty when
    /// either operand is empty.
    pub fn minkowski_diff(&self, other: &VPolyhedron) -> Result<VPolyhedron, GeomError> {
        check_dim(self.dim, other.dim)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(self.dim));
        }
        let mut points = Vec::with_capacity(self.points.len() * other.points.len());
        for p in &self.points {
            for q in &other.points {
                points.push(p.sub(q));
            }
        }
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().map(QVec::neg));
        Ok(Self::canonical(self.dim, points, rays))
    }

    /// Pointwise scaling by `c`; the result of `0 · P` is the origin when `P`
    /// is nonempty.
    pub fn scale(&self, c: &Rational) -> VPolyhedron {
        if self.is_empty() {
            return self.clone();
        }
        if c.is_zero() {
            return Self::from_point(QVec::zero(self.dim));
        }
        let points = self.points.iter().map(|p| p.scale(c)).collect();
        let rays = self.rays.iter().map(|r| r.scale(c)).collect();
        Self::canonical(self.dim, points, rays)
    }

    /// Image under an affine map; points map through the full map, rays
    /// through its uniform (linear) part.
    pub fn affine_image(&self, f: &AffineMap) -> Result<VPolyhedron, GeomError> {
        check_dim(self.dim, f.dim())?;
        let points = self.points.iter().map(|p| f.apply(p)).collect();
        let rays = self.rays.iter().map(|r| f.apply_uniform(r)).collect();
        Ok(Self::canonical(self.dim, points, rays))
    }

    /// The closed set `self + ℝ₊(self − toward)`: every direction from a point
    /// of `toward` to a point of `self` becomes a ray, as do the negated rays
    /// of `toward`. Returns `self` unchanged when `toward` is empty.
    pub fn ray_extend(&self, toward: &VPolyhedron) -> Result<VPolyhedron, GeomError> {
        check_dim(self.dim, toward.dim)?;
        if self.is_empty() || toward.is_empty() {
            return Ok(self.clone());
        }
        let mut rays = self.rays.clone();
        for p in &self.points {
            for d in &toward.points {
                rays.push(p.sub(d));
            }
        }
        rays.extend(toward.rays.iter().map(QVec::neg));
        Ok(Self::canonical(self.dim, self.points.clone(), rays))
    }

    /// Facet enumeration by the double description method: the returned
    /// constraints cut out exactly the denoted set. Errors on the empty
    /// polyhedron, which has no constraint description.
    pub fn facets(&self) -> Result<FacetSystem, GeomError> {
        if self.is_empty() {
            return Err(GeomError::EmptyPolyhedron);
        }
        Ok(facets::enumerate_facets(self))
    }
}

impl fmt::Display for VPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        write!(f, "points {{")?;
        for p in &self.points {
            write!(f, " ({p})")?;
        }
        write!(f, " }} rays {{")?;
        for r in &self.rays {
            write!(f, " ({r})")?;
        }
        write!(f, " }}")
    }
}

/// Membership of `x` in the convex hull of a raw point list, without building
/// (and canonicalizing) a polyhedron. False for an empty list.
pub fn in_convex_hull(points: &[QVec], x: &QVec) -> bool {
    !points.is_empty() && member_raw(points, &[], x)
}

/// Membership without the dimension/emptiness prechecks.
fn member_raw(points: &[QVec], rays: &[QVec], x: &QVec) -> bool {
    let dim = x.dim();
    // One column per generator; rows are the coordinates plus the convexity
    // row pinning the point weights to sum 1.
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(points.len() + rays.len());
    for p in points {
        let mut col: Vec<Rational> = p.entries().to_vec();
        col.push(Rational::one());
        columns.push(col);
    }
    for r in rays {
        let mut col: Vec<Rational> = r.entries().to_vec();
        col.push(Rational::zero());
        columns.push(col);
    }
    let mut rhs: Vec<Rational> = x.entries().to_vec();
    rhs.push(Rational::one());
    debug_assert_eq!(rhs.len(), dim + 1);
    lp::nonnegative_combination_exists(&columns, &rhs)
}

fn in_cone(rays: &[QVec], x: &QVec) -> bool {
    if x.is_zero() {
        return true;
    }
    let columns: Vec<Vec<Rational>> = rays.iter().map(|r| r.entries().to_vec()).collect();
    lp::nonnegative_combination_exists(&columns, x.entries())
}

/// Scales a nonzero rational vector to the primitive integer vector with the
/// same direction.
fn primitive_direction(v: &QVec) -> QVec {
    let mut denom_lcm = BigInt::one();
    for e in v.entries() {
        denom_lcm = denom_lcm.lcm(e.denom());
    }
    let ints: Vec<BigInt> = v
        .entries()
        .iter()
        .map(|e| e.numer() * (&denom_lcm / e.denom()))
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    debug_assert!(!g.is_zero());
    QVec(ints.into_iter().map(|i| Rational::from_integer(i / &g)).collect())
}

fn canonical_generators(mut points: Vec<QVec>, rays: Vec<QVec>) -> (Vec<QVec>, Vec<QVec>) {
    let mut rays: Vec<QVec> = rays
        .iter()
        .filter(|r| !r.is_zero())
        .map(primitive_direction)
        .collect();
    points.sort();
    points.dedup();
    rays.sort();
    rays.dedup();
    if points.is_empty() {
        return (Vec::new(), Vec::new());
    }

    // Remove rays expressible as nonnegative combinations of the others.
    // Removing one redundant generator cannot make another irredundant, so a
    // single ordered pass suffices and is deterministic.
    let mut i = 0;
    while i < rays.len() {
        let candidate = rays.remove(i);
        if in_cone(&rays, &candidate) {
            continue;
        }
        rays.insert(i, candidate);
        i += 1;
    }

    // Remove points expressible from the remaining points plus the cone.
    let mut i = 0;
    while i < points.len() {
        let candidate = points.remove(i);
        if !points.is_empty() && member_raw(&points, &rays, &candidate) {
            continue;
        }
        points.insert(i, candidate);
        i += 1;
    }

    (points, rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn qv(entries: &[i64]) -> QVec {
        QVec::from_integers(entries)
    }

    pub(crate) fn qr(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(dim: usize, points: &[&[i64]], rays: &[&[i64]]) -> VPolyhedron {
        VPolyhedron::from_generators(
            dim,
            points.iter().map(|p| qv(p)).collect(),
            rays.iter().map(|r| qv(r)).collect(),
        )
        .unwrap()
    }

    fn fig_wedge() -> VPolyhedron {
        poly(2, &[&[1, 0], &[1, 2]], &[&[1, 0], &[1, 3]])
    }

    #[test]
    fn member_identity_point() {
        let p = poly(2, &[&[0, 0]], &[]);
        assert!(p.member(&qv(&[0, 0])).unwrap());
    }

    #[test]
    fn member_wedge() {
        let p = fig_wedge();
        // (2,3) = (1,2) + 1/3·(1,3) + 2/3·(1,0)
        assert!(p.member(&qv(&[2, 3])).unwrap());
        // The origin lies outside: 3x1 ≥ x2 + 1 excludes it.
        assert!(!p.member(&qv(&[0, 0])).unwrap());
    }

    #[test]
    fn member_dimension_mismatch() {
        let p = fig_wedge();
        assert!(matches!(
            p.member(&qv(&[1])),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn contains_empty_is_bottom() {
        let p = fig_wedge();
        let empty = VPolyhedron::empty(2);
        assert!(p.contains(&empty).unwrap());
        assert!(empty.contains(&empty).unwrap());
        assert!(!empty.contains(&p).unwrap());
    }

    #[test]
    fn contains_ray_membership() {
        let p = poly(2, &[&[0, 0]], &[&[1, 0]]);
        let q = poly(2, &[&[5, 0]], &[]);
        assert!(p.contains(&q).unwrap());
    }

    #[test]
    fn contains_unbounded_vs_bounded() {
        let p = poly(2, &[&[0, 0]], &[]);
        let q = poly(2, &[&[0, 0]], &[&[1, 0]]);
        assert!(!p.contains(&q).unwrap());
        assert!(q.contains(&p).unwrap());
    }

    #[test]
    fn join_identity_and_absorption() {
        let p = fig_wedge();
        let empty = VPolyhedron::empty(2);
        assert_eq!(p.join(&empty).unwrap(), p);
        assert_eq!(empty.join(&p).unwrap(), p);

        let a = poly(1, &[&[0]], &[]);
        let b = poly(1, &[&[1]], &[]);
        let seg = a.join(&b).unwrap();
        assert_eq!(seg.points(), &[qv(&[0]), qv(&[1])]);

        let origin = poly(2, &[&[0, 0]], &[]);
        let beam = poly(2, &[&[0, 0]], &[&[0, 1]]);
        assert_eq!(origin.join(&beam).unwrap(), beam);
    }

    #[test]
    fn minkowski_diff_cases() {
        let a = poly(2, &[&[1, 1]], &[]);
        let b = poly(2, &[&[0, 1]], &[]);
        assert_eq!(a.minkowski_diff(&b).unwrap(), poly(2, &[&[1, 0]], &[]));

        let wedge = fig_wedge();
        let zero = poly(2, &[&[0, 0]], &[]);
        assert_eq!(wedge.minkowski_diff(&zero).unwrap(), wedge);

        let pt = poly(1, &[&[0]], &[]);
        let half = poly(1, &[&[0]], &[&[1]]);
        assert_eq!(pt.minkowski_diff(&half).unwrap(), poly(1, &[&[0]], &[&[-1]]));

        let empty = VPolyhedron::empty(2);
        assert!(wedge.minkowski_diff(&empty).unwrap().is_empty());
    }

    #[test]
    fn scale_cases() {
        let p = poly(2, &[&[1, 1]], &[]);
        // 1/(1-2) = -1 flips the sign.
        assert_eq!(p.scale(&qr(1, -1)), poly(2, &[&[-1, -1]], &[]));
        assert!(VPolyhedron::empty(2).scale(&qr(3, 1)).is_empty());
        let q = poly(1, &[&[2]], &[&[1]]);
        assert_eq!(q.scale(&qr(-1, 1)), poly(1, &[&[-2]], &[&[-1]]));
        assert_eq!(q.scale(&Rational::zero()), poly(1, &[&[0]], &[]));
    }

    #[test]
    fn affine_image_cases() {
        let p = poly(1, &[&[0]], &[&[1]]);
        assert_eq!(p.affine_image(&AffineMap::identity(1)).unwrap(), p);

        // x ↦ 2x + 1: the uniform part keeps the ray direction.
        let f = AffineMap::new(
            vec![QVec::new(vec![qr(2, 1)])],
            QVec::new(vec![qr(1, 1)]),
        );
        assert_eq!(p.affine_image(&f).unwrap(), poly(1, &[&[1]], &[&[1]]));
        let origin = poly(1, &[&[0]], &[]);
        assert_eq!(origin.affine_image(&f).unwrap(), poly(1, &[&[1]], &[]));
    }

    #[test]
    fn affine_image_distributes_over_join() {
        let f = AffineMap::new(
            vec![
                QVec::new(vec![qr(1, 2), qr(0, 1)]),
                QVec::new(vec![qr(1, 1), qr(1, 1)]),
            ],
            QVec::new(vec![qr(-1, 3), qr(2, 1)]),
        );
        let a = poly(2, &[&[0, 0], &[1, 4]], &[&[1, 0]]);
        let b = poly(2, &[&[-3, 2]], &[&[0, 1], &[2, 1]]);
        let lhs = a.join(&b).unwrap().affine_image(&f).unwrap();
        let rhs = a
            .affine_image(&f)
            .unwrap()
            .join(&b.affine_image(&f).unwrap())
            .unwrap();
        assert!(lhs.same_set(&rhs).unwrap());
    }

    #[test]
    fn ray_extend_cases() {
        // Limit of repeatedly doubling away from -1: the whole half-line.
        let p = poly(1, &[&[0]], &[]);
        let d = poly(1, &[&[-1]], &[]);
        assert_eq!(p.ray_extend(&d).unwrap(), poly(1, &[&[0]], &[&[1]]));

        let o = poly(2, &[&[0, 0]], &[]);
        assert_eq!(o.ray_extend(&o).unwrap(), o);

        let empty = VPolyhedron::empty(2);
        assert!(empty.ray_extend(&o).unwrap().is_empty());
        assert_eq!(o.ray_extend(&empty).unwrap(), o);
    }

    #[test]
    fn ray_extend_contains_sampled_extensions() {
        let p = poly(2, &[&[1, 0], &[0, 2]], &[&[1, 1]]);
        let d = poly(2, &[&[-1, -1], &[2, 0]], &[&[0, -1]]);
        let ext = p.ray_extend(&d).unwrap();
        assert!(ext.contains(&p).unwrap());
        for t in [0i64, 1, 10] {
            let t = Rational::from_integer(t.into());
            for gp in p.points() {
                for gd in d.points() {
                    let x = gp.add(&gp.sub(gd).scale(&t));
                    assert!(ext.member(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonicalize_cases() {
        let p = poly(1, &[&[0], &[1], &[2]], &[]);
        assert_eq!(p.points(), &[qv(&[0]), qv(&[2])]);

        let q = poly(2, &[&[0, 0]], &[&[1, 0], &[2, 0]]);
        assert_eq!(q.rays(), &[qv(&[1, 0])]);

        let r = fig_wedge();
        assert_eq!(r.canonicalize(), r);
    }

    #[test]
    fn canonicalize_keeps_opposite_rays() {
        let line = poly(2, &[&[0, 0]], &[&[1, 0], &[-1, 0]]);
        assert_eq!(line.rays().len(), 2);
        assert!(line.member(&qv(&[-7, 0])).unwrap());
        assert!(!line.member(&qv(&[0, 1])).unwrap());
    }

    #[test]
    fn canonicalize_point_redundant_through_rays() {
        let p = poly(2, &[&[0, 0], &[3, 0]], &[&[1, 0]]);
        assert_eq!(p.points(), &[qv(&[0, 0])]);
    }

    #[test]
    fn join_is_idempotent_commutative_associative() {
        let a = poly(2, &[&[0, 0], &[2, 1]], &[&[1, 0]]);
        let b = poly(2, &[&[-1, 3]], &[&[0, 1]]);
        let c = poly(2, &[&[4, -2]], &[]);
        assert_eq!(a.join(&a).unwrap(), a);
        assert_eq!(a.join(&b).unwrap(), b.join(&a).unwrap());
        let left = a.join(&b).unwrap().join(&c).unwrap();
        let right = a.join(&b.join(&c).unwrap()).unwrap();
        assert!(left.same_set(&right).unwrap());
    }

    #[test]
    fn facets_of_wedge() {
        let fs = fig_wedge().facets().unwrap();
        assert!(fs.equalities.is_empty());
        let rendered: Vec<String> = fs.inequalities.iter().map(|c| c.render("<=")).collect();
        assert_eq!(
            rendered,
            vec![
                "-3*x1 + x2 + 1 <= 0".to_string(),
                "-x1 + 1 <= 0".to_string(),
                "-x2 <= 0".to_string(),
            ]
        );
    }

    #[test]
    fn facets_of_single_point_are_equalities() {
        let fs = poly(2, &[&[0, 0]], &[]).facets().unwrap();
        assert!(fs.inequalities.is_empty());
        let rendered: Vec<String> = fs.equalities.iter().map(|c| c.render("=")).collect();
        assert_eq!(rendered, vec!["x2 = 0".to_string(), "x1 = 0".to_string()]);
    }

    #[test]
    fn facets_of_segment() {
        let fs = poly(1, &[&[0], &[1]], &[]).facets().unwrap();
        assert!(fs.equalities.is_empty());
        let rendered: Vec<String> = fs.inequalities.iter().map(|c| c.render("<=")).collect();
        assert_eq!(rendered, vec!["-x1 <= 0".to_string(), "x1 - 1 <= 0".to_string()]);
    }

    #[test]
    fn facets_of_empty_is_an_error() {
        assert_eq!(
            VPolyhedron::empty(2).facets(),
            Err(GeomError::EmptyPolyhedron)
        );
    }

    #[test]
    fn facets_respect_lineality() {
        let line = poly(2, &[&[0, 1]], &[&[1, 0], &[-1, 0]]);
        let fs = line.facets().unwrap();
        assert!(fs.inequalities.is_empty());
        assert_eq!(fs.equalities.len(), 1);
        assert!(fs.satisfied_by(&qv(&[42, 1])));
        assert!(!fs.satisfied_by(&qv(&[42, 2])));
    }

    #[test]
    fn mutual_containment_is_set_equality() {
        let a = poly(1, &[&[0], &[1]], &[]);
        let b = poly(1, &[&[0], &[1], &[2]], &[]);
        assert!(!a.same_set(&b).unwrap());
        let c = VPolyhedron {
            dim: 1,
            points: vec![qv(&[0]), qv(&[2])],
            rays: vec![],
        };
        assert!(b.same_set(&c).unwrap());
    }
}
