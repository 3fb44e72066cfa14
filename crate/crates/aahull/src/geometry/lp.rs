//! Exact feasibility of `∃ z ≥ 0 : A z = b` by phase-one simplex over the
//! rationals. Bland's pivoting rule guarantees termination; every entry stays
//! an exact `Rational`, so the answer is never approximate.

use num_traits::{Signed, Zero};

use super::Rational;

/// Decides whether the system `Σ_j z_j · columns[j] = rhs` has a solution with
/// all `z_j ≥ 0`. Columns and `rhs` must share the same length.
pub fn nonnegative_combination_exists(columns: &[Vec<Rational>], rhs: &[Rational]) -> bool {
    let rows = rhs.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    if rows == 0 {
        return true;
    }
    let n = columns.len();
    if n == 0 {
        return rhs.iter().all(Zero::is_zero);
    }

    // Tableau over variables z_0..z_{n-1} plus one artificial per row.
    // Row i: Σ_j a[i][j] z_j + artificial_i = b_i with b_i ≥ 0.
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut basis: Vec<usize> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = rhs[i].is_negative();
        let mut row: Vec<Rational> = Vec::with_capacity(n + 1);
        for col in columns {
            row.push(if flip { -col[i].clone() } else { col[i].clone() });
        }
        row.push(if flip { -rhs[i].clone() } else { rhs[i].clone() });
        tab.push(row);
        basis.push(n + i);
    }

    // Phase-one objective: minimize the sum of artificials. Reduced cost of
    // column j is -Σ_i a[i][j] while all artificials are basic.
    let mut obj: Vec<Rational> = vec![Rational::zero(); n + 1];
    for row in &tab {
        for (j, v) in row.iter().enumerate() {
            obj[j] -= v;
        }
    }

    // Bland: entering column = smallest index with negative reduced cost.
    while let Some(entering) = (0..n).find(|&j| obj[j].is_negative()) {
        // Ratio test; Bland ties broken by smallest basis variable.
        let mut leaving: Option<(usize, Rational)> = None;
        for i in 0..rows {
            let coef = &tab[i][entering];
            if coef.is_positive() {
                let ratio = &tab[i][n] / coef;
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        // The phase-one objective is bounded below by zero, so an improving
        // column always admits a leaving row.
        let (pivot_row, _) = leaving.expect("phase-one simplex cannot be unbounded");

        // Pivot on (pivot_row, entering).
        let pivot = tab[pivot_row][entering].clone();
        for v in tab[pivot_row].iter_mut() {
            *v /= &pivot;
        }
        let pivot_vals = tab[pivot_row].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != pivot_row && !row[entering].is_zero() {
                let factor = row[entering].clone();
                for (t, pv) in row.iter_mut().zip(&pivot_vals) {
                    *t -= pv * &factor;
                }
            }
        }
        if !obj[entering].is_zero() {
            let factor = obj[entering].clone();
            for (o, t) in obj.iter_mut().zip(&tab[pivot_row]) {
                *o -= t * &factor;
            }
        }
        basis[pivot_row] = entering;
    }

    // Feasible iff no artificial carries residual value.
    tab.iter()
        .enumerate()
        .all(|(i, row)| basis[i] < n || row[n].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cols(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|c| c.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn identity_combination() {
        let columns = cols(&[&[1, 0], &[0, 1]]);
        assert!(nonnegative_combination_exists(&columns, &[q(3), q(5)]));
        assert!(!nonnegative_combination_exists(&columns, &[q(-1), q(0)]));
    }

    #[test]
    fn convex_membership_shape() {
        // (2,3) = 1·(1,2) + 1/3·(1,3) + 2/3·(1,0) with the convexity row.
        let columns = cols(&[&[1, 0, 1], &[1, 2, 1], &[1, 0, 0], &[1, 3, 0]]);
        assert!(nonnegative_combination_exists(&columns, &[q(2), q(3), q(1)]));
        // The origin is not reachable: convexity row forces weight 1 on points
        // with first coordinate 1.
        assert!(!nonnegative_combination_exists(&columns, &[q(0), q(0), q(1)]));
    }

    #[test]
    fn rational_data() {
        let columns = vec![vec![qr(1, 2)], vec![qr(-1, 3)]];
        assert!(nonnegative_combination_exists(&columns, &[qr(1, 6)]));
        assert!(nonnegative_combination_exists(&columns, &[qr(-1, 6)]));
    }

    #[test]
    fn empty_column_set() {
        assert!(nonnegative_combination_exists(&[], &[q(0)]));
        assert!(!nonnegative_combination_exists(&[], &[q(1)]));
    }

    #[test]
    fn degenerate_rows() {
        // Redundant equalities must not confuse the pivoting.
        let columns = cols(&[&[1, 2, 2], &[2, 4, 4]]);
        assert!(nonnegative_combination_exists(&columns, &[q(3), q(6), q(6)]));
        assert!(!nonnegative_combination_exists(&columns, &[q(3), q(6), q(7)]));
    }
}
