//! Generator-to-constraint conversion by the double description method.
//!
//! The polyhedron `conv(P) + cone(R)` in dimension `m` is homogenized into the
//! cone spanned by `(1, p)` for points and `(0, r)` for rays. A pair `(b, a)`
//! describes a valid inequality `a·x + b ≤ 0` exactly when it has nonpositive
//! scalar product with every generator, so the valid inequalities form the
//! polar cone `{z : g·z ≤ 0 for each generator g}`. Running double description
//! over those halfspaces yields that cone's extreme rays (the facets) and its
//! lineality space (the implicit equalities).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{FacetSystem, HConstraint, Rational, VPolyhedron};

#[derive(Clone, PartialEq, Eq, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(capacity: usize) -> Self {
        BitSet(vec![0; capacity.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1u64 << (i % 64);
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct DDRay {
    v: Vec<Rational>,
    /// Indices of already-processed halfspaces this ray is tight on.
    zeros: BitSet,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn scale_to_primitive(v: &mut [Rational]) {
    use num_integer::Integer;
    let mut denom_lcm = BigInt::one();
    for e in v.iter() {
        denom_lcm = denom_lcm.lcm(e.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|e| e.numer() * (&denom_lcm / e.denom()))
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return;
    }
    for (slot, i) in v.iter_mut().zip(ints) {
        *slot = Rational::from_integer(i / &g);
    }
}

/// Extreme rays and lineality basis of `{z : normals[i]·z ≤ 0 for all i}`.
fn polar_cone(normals: &[Vec<Rational>], dim: usize) -> (Vec<DDRay>, Vec<Vec<Rational>>) {
    let total = normals.len();
    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut e = vec![Rational::zero(); dim];
            e[i] = Rational::one();
            e
        })
        .collect();
    let mut rays: Vec<DDRay> = Vec::new();

    for (idx, g) in normals.iter().enumerate() {
        let pivot = lineality.iter().position(|v| !dot(g, v).is_zero());
        if let Some(pi) = pivot {
            // The halfspace splits the lineality space: one basis vector
            // becomes a ray on the strict side, the rest get projected onto
            // the boundary hyperplane. Previously processed constraints all
            // vanish on lineality vectors, so zero sets are preserved.
            let mut v0 = lineality.remove(pi);
            let mut d = dot(g, &v0);
            if d.is_positive() {
                for e in v0.iter_mut() {
                    *e = -&*e;
                }
                d = -d;
            }
            for v in lineality.iter_mut() {
                let f = dot(g, v) / &d;
                if !f.is_zero() {
                    for (ve, v0e) in v.iter_mut().zip(&v0) {
                        *ve -= &f * v0e;
                    }
                }
            }
            for ray in rays.iter_mut() {
                let f = dot(g, &ray.v) / &d;
                if !f.is_zero() {
                    for (ve, v0e) in ray.v.iter_mut().zip(&v0) {
                        *ve -= &f * v0e;
                    }
                    scale_to_primitive(&mut ray.v);
                }
            }
            let mut zeros = BitSet::new(total);
            for j in 0..idx {
                zeros.insert(j);
            }
            scale_to_primitive(&mut v0);
            rays.push(DDRay { v: v0, zeros });
        } else {
            let values: Vec<Rational> = rays.iter().map(|r| dot(g, &r.v)).collect();
            let has_pos = values.iter().any(Signed::is_positive);
            if has_pos {
                let mut next: Vec<DDRay> = Vec::new();
                for (r, val) in rays.iter().zip(&values) {
                    if !val.is_positive() {
                        next.push(r.clone());
                    }
                }
                for (pi, pval) in values.iter().enumerate() {
                    if !pval.is_positive() {
                        continue;
                    }
                    for (ni, nval) in values.iter().enumerate() {
                        if !nval.is_negative() {
                            continue;
                        }
                        if !adjacent(&rays, pi, ni) {
                            continue;
                        }
                        let pos = &rays[pi];
                        let neg = &rays[ni];
                        let mut w: Vec<Rational> = pos
                            .v
                            .iter()
                            .zip(&neg.v)
                            .map(|(pe, ne)| pval * ne - nval * pe)
                            .collect();
                        scale_to_primitive(&mut w);
                        let zeros = pos.zeros.intersection(&neg.zeros);
                        next.push(DDRay { v: w, zeros });
                    }
                }
                rays = next;
            }
        }
        // Record tightness on the constraint just processed.
        for ray in rays.iter_mut() {
            if dot(g, &ray.v).is_zero() {
                ray.zeros.insert(idx);
            }
        }
    }

    (rays, lineality)
}

/// Combinatorial adjacency: two extreme rays are adjacent iff no third ray is
/// tight on every constraint both of them are tight on.
fn adjacent(rays: &[DDRay], i: usize, j: usize) -> bool {
    let common = rays[i].zeros.intersection(&rays[j].zeros);
    rays.iter()
        .enumerate()
        .all(|(k, r)| k == i || k == j || !common.is_subset_of(&r.zeros))
}

/// Reduced row echelon form over the rationals, rows rescaled to primitive
/// integer vectors with positive leading entry.
fn canonical_equality_basis(mut rows: Vec<Vec<Rational>>, dim: usize) -> Vec<Vec<Rational>> {
    let mut rank = 0;
    for col in 0..dim {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for e in rows[rank].iter_mut() {
            *e /= &lead;
        }
        let lead_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (e, l) in row.iter_mut().zip(&lead_row) {
                    *e -= &f * l;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    for row in rows.iter_mut() {
        scale_to_primitive(row);
        if let Some(first) = row.iter().find(|e| !e.is_zero()) {
            if first.is_negative() {
                for e in row.iter_mut() {
                    *e = -&*e;
                }
            }
        }
    }
    rows.sort();
    rows
}

fn to_constraint(v: &[Rational]) -> HConstraint {
    // Entries are integral after primitive scaling: v = (bound, coeffs...).
    let bound = v[0].to_integer();
    let coeffs = v[1..].iter().map(Rational::to_integer).collect();
    HConstraint { coeffs, bound }
}

pub(super) fn enumerate_facets(poly: &VPolyhedron) -> FacetSystem {
    let dim = poly.dim();
    let mut normals: Vec<Vec<Rational>> = Vec::new();
    for p in poly.points() {
        let mut g = Vec::with_capacity(dim + 1);
        g.push(Rational::one());
        g.extend(p.entries().iter().cloned());
        normals.push(g);
    }
    for r in poly.rays() {
        let mut g = Vec::with_capacity(dim + 1);
        g.push(Rational::zero());
        g.extend(r.entries().iter().cloned());
        normals.push(g);
    }

    let (rays, lineality) = polar_cone(&normals, dim + 1);

    let mut inequalities: Vec<HConstraint> = rays
        .iter()
        .filter(|r| r.v[1..].iter().any(|e| !e.is_zero()))
        .map(|r| to_constraint(&r.v))
        .collect();
    inequalities.sort();
    inequalities.dedup();

    let mut equalities: Vec<HConstraint> = canonical_equality_basis(lineality, dim + 1)
        .iter()
        .map(|v| to_constraint(v))
        .collect();
    equalities.sort();

    FacetSystem { inequalities, equalities }
}

#[cfg(test)]
mod tests {
    use super::super::{QVec, VPolyhedron};

    fn qv(entries: &[i64]) -> QVec {
        QVec::from_integers(entries)
    }

    fn poly(dim: usize, points: &[&[i64]], rays: &[&[i64]]) -> VPolyhedron {
        VPolyhedron::from_generators(
            dim,
            points.iter().map(|p| qv(p)).collect(),
            rays.iter().map(|r| qv(r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn whole_space_has_no_constraints() {
        let p = poly(2, &[&[0, 0]], &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        let fs = p.facets().unwrap();
        assert!(fs.inequalities.is_empty());
        assert!(fs.equalities.is_empty());
    }

    #[test]
    fn unit_square() {
        let p = poly(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]], &[]);
        let fs = p.facets().unwrap();
        assert_eq!(fs.inequalities.len(), 4);
        assert!(fs.equalities.is_empty());
        assert!(fs.satisfied_by(&QVec::new(vec![
            super::super::tests::qr(1, 2),
            super::super::tests::qr(1, 3)
        ])));
        assert!(!fs.satisfied_by(&qv(&[2, 0])));
    }

    #[test]
    fn facets_match_membership_on_simplex() {
        let p = poly(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[]);
        let fs = p.facets().unwrap();
        for x in [
            qv(&[0, 0, 0]),
            qv(&[1, 1, 1]),
            QVec::new(vec![
                super::super::tests::qr(1, 4),
                super::super::tests::qr(1, 4),
                super::super::tests::qr(1, 4),
            ]),
            qv(&[-1, 0, 0]),
        ] {
            assert_eq!(p.member(&x).unwrap(), fs.satisfied_by(&x));
        }
    }
}
