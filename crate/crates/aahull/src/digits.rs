//! Affine maps describing how reading digits transforms the value under
//! construction in a most-significant-digit-first encoding of `ℝ^m` vectors
//! in basis `r`.
//!
//! Component digits are interleaved, so one digit touches one component and
//! rotates the coordinate roles. Reading digit `a` on the decimal side maps
//! the value `x` of the remaining tail to `((x[m] − a)/r, x[1], …, x[m−1])`;
//! on the integer side it maps the accumulated value to
//! `(x[2], …, x[m], r·x[1] + a)`. The two maps are mutually inverse. Decimal
//! values are carried with a negated sign — the tail `w` denotes
//! `−Σ_j w(mj+i) / r^{j+1}` in component `i` — which keeps every decimal
//! value inside `[−1, 0]^m` and turns the final combination into a plain
//! difference of an integer part and a decimal part.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{AffineMap, QVec, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigitError {
    #[error("digit {digit} out of range for basis {basis}")]
    DigitOutOfRange { digit: u32, basis: u32 },
    #[error("sign digit {digit} must be 0 or {}", basis - 1)]
    BadSignDigit { digit: u32, basis: u32 },
    #[error("word length {len} is not a multiple of the dimension {dim}")]
    LengthNotBlockAligned { len: usize, dim: usize },
    #[error("word of length {len} is too short for {blocks} blocks of {dim}")]
    WordTooShort { len: usize, blocks: usize, dim: usize },
}

/// Basis of decomposition and ambient dimension. The digit alphabet is
/// `{0, …, r−1}`; the sign alphabet is `{0, r−1}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DigitContext {
    basis: u32,
    dim: usize,
}

impl DigitContext {
    pub fn new(basis: u32, dim: usize) -> Self {
        assert!(basis >= 2, "basis must be at least 2");
        assert!(dim >= 1, "dimension must be at least 1");
        DigitContext { basis, dim }
    }

    pub fn basis(&self) -> u32 {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_rational(&self) -> Rational {
        Rational::from_integer(self.basis.into())
    }

    pub fn is_digit(&self, digit: u32) -> bool {
        digit < self.basis
    }

    pub fn is_sign_digit(&self, digit: u32) -> bool {
        digit == 0 || digit == self.basis - 1
    }

    fn check_digit(&self, digit: u32) -> Result<(), DigitError> {
        if self.is_digit(digit) {
            Ok(())
        } else {
            Err(DigitError::DigitOutOfRange { digit, basis: self.basis })
        }
    }

    /// The map applied to the decimal value of the remaining tail when digit
    /// `a` is read first: `x ↦ ((x[m] − a)/r, x[1], …, x[m−1])`.
    pub fn decimal_digit_map(&self, digit: u32) -> Result<AffineMap, DigitError> {
        self.check_digit(digit)?;
        let m = self.dim;
        let r = self.basis_rational();
        let mut rows = Vec::with_capacity(m);
        let mut first = vec![Rational::zero(); m];
        first[m - 1] = r.recip();
        rows.push(QVec::new(first));
        for i in 0..m - 1 {
            let mut row = vec![Rational::zero(); m];
            row[i] = Rational::one();
            rows.push(QVec::new(row));
        }
        let mut offset = vec![Rational::zero(); m];
        offset[0] = -Rational::from_integer(digit.into()) / &r;
        Ok(AffineMap::new(rows, QVec::new(offset)))
    }

    /// The map applied to the accumulated integer value when digit `a` is
    /// read: `x ↦ (x[2], …, x[m], r·x[1] + a)`. Inverse of the decimal map
    /// for the same digit.
    pub fn integer_digit_map(&self, digit: u32) -> Result<AffineMap, DigitError> {
        self.check_digit(digit)?;
        let m = self.dim;
        let r = self.basis_rational();
        let mut rows = Vec::with_capacity(m);
        for i in 1..m {
            let mut row = vec![Rational::zero(); m];
            row[i] = Rational::one();
            rows.push(QVec::new(row));
        }
        let mut last = vec![Rational::zero(); m];
        last[0] = r;
        rows.push(QVec::new(last));
        let mut offset = vec![Rational::zero(); m];
        offset[m - 1] = Rational::from_integer(digit.into());
        Ok(AffineMap::new(rows, QVec::new(offset)))
    }

    /// Composition over a word, read left to right on the decimal side:
    /// the map for `σ₁σ₂` is the map for `σ₁` composed after the map for
    /// `σ₂`. The empty word yields the identity.
    pub fn decimal_word_map(&self, word: &[u32]) -> Result<AffineMap, DigitError> {
        let mut acc = AffineMap::identity(self.dim);
        for &a in word.iter().rev() {
            acc = self.decimal_digit_map(a)?.compose(&acc);
        }
        Ok(acc)
    }

    /// Composition over a word on the integer side; note the reversed order:
    /// the map for `σ₁σ₂` applies `σ₁` first, then `σ₂`.
    pub fn integer_word_map(&self, word: &[u32]) -> Result<AffineMap, DigitError> {
        let mut acc = AffineMap::identity(self.dim);
        for &a in word {
            acc = self.integer_digit_map(a)?.compose(&acc);
        }
        Ok(acc)
    }

    /// The decimal value of the periodic tail `σ^ω`: the unique fixpoint of
    /// the decimal word map of `σ`. Requires the word length to be a multiple
    /// of the dimension (true for any cycle of a block-aligned graph), which
    /// makes the map's matrix the scalar `r^{−|σ|/m}` and gives the closed
    /// form `offset / (1 − r^{−|σ|/m})`. Always lands in `[−1, 0]^m`.
    pub fn decimal_word_fixpoint(&self, word: &[u32]) -> Result<QVec, DigitError> {
        if word.is_empty() || !word.len().is_multiple_of(self.dim) {
            return Err(DigitError::LengthNotBlockAligned {
                len: word.len(),
                dim: self.dim,
            });
        }
        let map = self.decimal_word_map(word)?;
        let c = map
            .scalar_matrix()
            .expect("block-aligned decimal word map has a scalar matrix");
        let factor = (Rational::one() - c).recip();
        Ok(map.offset().scale(&factor))
    }

    /// The integer vector encoded by a sign word followed by block-aligned
    /// integer digits: the integer word map applied to `s/(1−r)`.
    pub fn integer_of_decomposition(
        &self,
        signs: &[u32],
        word: &[u32],
    ) -> Result<QVec, DigitError> {
        if signs.len() != self.dim {
            return Err(DigitError::WordTooShort {
                len: signs.len(),
                blocks: 1,
                dim: self.dim,
            });
        }
        for &s in signs {
            self.check_digit(s)?;
            if !self.is_sign_digit(s) {
                return Err(DigitError::BadSignDigit { digit: s, basis: self.basis });
            }
        }
        if !word.len().is_multiple_of(self.dim) {
            return Err(DigitError::LengthNotBlockAligned {
                len: word.len(),
                dim: self.dim,
            });
        }
        let one_minus_r = Rational::one() - self.basis_rational();
        let seed = QVec::new(
            signs
                .iter()
                .map(|&s| Rational::from_integer(s.into()) / &one_minus_r)
                .collect(),
        );
        Ok(self.integer_word_map(word)?.apply(&seed))
    }

    /// Partial sum of the decimal series over the first `blocks` blocks of a
    /// finite word; used by enumeration cross-checks. Within each coordinate
    /// the error versus any infinite extension is at most `r^{−blocks}`.
    pub fn decimal_partial_sum(&self, word: &[u32], blocks: usize) -> Result<QVec, DigitError> {
        if word.len() < blocks * self.dim {
            return Err(DigitError::WordTooShort {
                len: word.len(),
                blocks,
                dim: self.dim,
            });
        }
        let r = self.basis_rational();
        let mut entries = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = Rational::zero();
            let mut weight = r.recip();
            for j in 0..blocks {
                let digit = word[j * self.dim + i];
                self.check_digit(digit)?;
                acc += Rational::from_integer(digit.into()) * &weight;
                weight /= &r;
            }
            entries.push(-acc);
        }
        Ok(QVec::new(entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qv(entries: &[Rational]) -> QVec {
        QVec::new(entries.to_vec())
    }

    #[test]
    fn decimal_digit_map_examples() {
        let c = DigitContext::new(2, 1);
        let f = c.decimal_digit_map(0).unwrap();
        assert_eq!(f.apply(&qv(&[q(6)])), qv(&[q(3)]));

        let c2 = DigitContext::new(2, 2);
        let f = c2.decimal_digit_map(1).unwrap();
        assert_eq!(f.apply(&qv(&[q(4), q(7)])), qv(&[q(3), q(4)]));

        let c10 = DigitContext::new(10, 1);
        let f = c10.decimal_digit_map(9).unwrap();
        assert_eq!(f.apply(&qv(&[q(19)])), qv(&[q(1)]));

        assert!(matches!(
            c.decimal_digit_map(2),
            Err(DigitError::DigitOutOfRange { .. })
        ));
    }

    #[test]
    fn integer_digit_map_examples() {
        let c = DigitContext::new(2, 1);
        let f = c.integer_digit_map(1).unwrap();
        assert_eq!(f.apply(&qv(&[q(3)])), qv(&[q(7)]));

        let c2 = DigitContext::new(2, 2);
        let f = c2.integer_digit_map(0).unwrap();
        assert_eq!(f.apply(&qv(&[q(3), q(5)])), qv(&[q(5), q(6)]));
    }

    #[test]
    fn digit_maps_are_mutually_inverse() {
        for (r, m) in [(2u32, 1usize), (2, 3), (3, 2), (10, 2)] {
            let c = DigitContext::new(r, m);
            for digit in [0, 1, r - 1] {
                let lam = c.decimal_digit_map(digit).unwrap();
                let gam = c.integer_digit_map(digit).unwrap();
                let x = QVec::new((0..m).map(|i| qr(3 * i as i64 + 1, 7)).collect());
                assert_eq!(gam.apply(&lam.apply(&x)), x);
                assert_eq!(lam.apply(&gam.apply(&x)), x);
            }
        }
    }

    #[test]
    fn decimal_word_map_examples() {
        let c = DigitContext::new(2, 1);
        assert_eq!(c.decimal_word_map(&[]).unwrap(), AffineMap::identity(1));

        // Reading "01": x ↦ (x−1)/4.
        let f = c.decimal_word_map(&[0, 1]).unwrap();
        assert_eq!(f.apply(&qv(&[q(5)])), qv(&[q(1)]));

        // Uniform part of "11" is the scalar 1/4.
        let f = c.decimal_word_map(&[1, 1]).unwrap();
        assert_eq!(f.scalar_matrix(), Some(qr(1, 4)));
    }

    #[test]
    fn integer_word_map_examples() {
        let c = DigitContext::new(2, 1);
        // Reading "101" most significant digit first builds 8x + 5.
        let f = c.integer_word_map(&[1, 0, 1]).unwrap();
        assert_eq!(f.apply(&qv(&[q(0)])), qv(&[q(5)]));
        assert_eq!(f.apply(&qv(&[q(1)])), qv(&[q(13)]));

        assert_eq!(c.integer_word_map(&[]).unwrap(), AffineMap::identity(1));

        // One block in dimension 2 is x ↦ 2x + (1,0).
        let c2 = DigitContext::new(2, 2);
        let f = c2.integer_word_map(&[1, 0]).unwrap();
        assert_eq!(f.apply(&qv(&[q(3), q(4)])), qv(&[q(7), q(8)]));
    }

    #[test]
    fn word_maps_are_mutually_inverse() {
        let words: &[&[u32]] = &[&[0], &[1, 0, 1], &[1, 1, 0, 0, 1, 0], &[9, 3, 0, 7]];
        for &word in words {
            for (r, m) in [(2u32, 1usize), (3, 2), (10, 3)] {
                if word.iter().any(|&d| d >= r) {
                    continue;
                }
                let c = DigitContext::new(r, m);
                let x = QVec::new((0..m).map(|i| qr(i as i64 - 2, 5)).collect());
                let lam = c.decimal_word_map(word).unwrap();
                let gam = c.integer_word_map(word).unwrap();
                assert_eq!(gam.apply(&lam.apply(&x)), x);
            }
        }
    }

    #[test]
    fn decimal_word_fixpoint_examples() {
        let c = DigitContext::new(2, 1);
        assert_eq!(c.decimal_word_fixpoint(&[0]).unwrap(), qv(&[q(0)]));
        assert_eq!(c.decimal_word_fixpoint(&[1]).unwrap(), qv(&[q(-1)]));
        // 0.010101… in binary is 1/3, carried negated.
        assert_eq!(c.decimal_word_fixpoint(&[0, 1]).unwrap(), qv(&[qr(-1, 3)]));

        let c2 = DigitContext::new(2, 2);
        assert!(matches!(
            c2.decimal_word_fixpoint(&[1]),
            Err(DigitError::LengthNotBlockAligned { .. })
        ));
        assert!(matches!(
            c2.decimal_word_fixpoint(&[]),
            Err(DigitError::LengthNotBlockAligned { .. })
        ));
    }

    #[test]
    fn fixpoint_is_fixed_and_in_unit_box() {
        let words: &[(u32, usize, &[u32])] = &[
            (2, 1, &[1, 0, 1]),
            (2, 2, &[1, 0, 1, 1]),
            (3, 1, &[2, 0]),
            (10, 2, &[9, 9, 0, 1]),
        ];
        for &(r, m, word) in words {
            let c = DigitContext::new(r, m);
            let v = c.decimal_word_fixpoint(word).unwrap();
            let f = c.decimal_word_map(word).unwrap();
            assert_eq!(f.apply(&v), v);
            for e in v.entries() {
                assert!(*e <= Rational::zero() && *e >= q(-1));
            }
        }
    }

    #[test]
    fn integer_of_decomposition_examples() {
        let c = DigitContext::new(2, 1);
        assert_eq!(c.integer_of_decomposition(&[0], &[1, 0, 1]).unwrap(), qv(&[q(5)]));
        assert_eq!(c.integer_of_decomposition(&[1], &[]).unwrap(), qv(&[q(-1)]));

        let c2 = DigitContext::new(2, 2);
        assert_eq!(
            c2.integer_of_decomposition(&[0, 0], &[]).unwrap(),
            qv(&[q(0), q(0)])
        );
        // In basis 2 both digits are sign digits; basis 3 rejects digit 1.
        let c3 = DigitContext::new(3, 2);
        assert!(matches!(
            c3.integer_of_decomposition(&[0, 1], &[]),
            Err(DigitError::BadSignDigit { .. })
        ));
        assert!(matches!(
            c2.integer_of_decomposition(&[0, 0], &[1]),
            Err(DigitError::LengthNotBlockAligned { .. })
        ));
    }

    #[test]
    fn sign_extension_encodes_negatives() {
        // 1⋆1 in basis 2 encodes −1; appending digits keeps the value n·2+d
        // from the seed −1.
        let c = DigitContext::new(2, 1);
        assert_eq!(c.integer_of_decomposition(&[1], &[1]).unwrap(), qv(&[q(-1)]));
        assert_eq!(c.integer_of_decomposition(&[1], &[0]).unwrap(), qv(&[q(-2)]));
        assert_eq!(
            c.integer_of_decomposition(&[1], &[0, 1]).unwrap(),
            qv(&[q(-3)])
        );
    }

    #[test]
    fn decimal_partial_sum_examples() {
        let c = DigitContext::new(2, 1);
        assert_eq!(c.decimal_partial_sum(&[1], 1).unwrap(), qv(&[qr(-1, 2)]));
        assert_eq!(c.decimal_partial_sum(&[1, 1], 2).unwrap(), qv(&[qr(-3, 4)]));

        let c2 = DigitContext::new(2, 2);
        assert_eq!(
            c2.decimal_partial_sum(&[1, 0], 1).unwrap(),
            qv(&[qr(-1, 2), q(0)])
        );
        assert!(matches!(
            c2.decimal_partial_sum(&[1, 0], 2),
            Err(DigitError::WordTooShort { .. })
        ));
    }

    #[test]
    fn partial_sums_approach_the_fixpoint() {
        let c = DigitContext::new(2, 1);
        let word = [1u32, 0, 1];
        let limit = c.decimal_word_fixpoint(&word).unwrap();
        for k in 1..5usize {
            let repeated: Vec<u32> = word.iter().copied().cycle().take(k * word.len()).collect();
            let blocks = repeated.len();
            let partial = c.decimal_partial_sum(&repeated, blocks).unwrap();
            let err = (&limit[0] - &partial[0]).abs();
            let bound = qr(1, 2i64.pow(blocks as u32));
            assert!(err <= bound, "error {err} exceeds {bound}");
        }
    }
}
