use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use super::univariate::UnivariatePoly;
use crate::error::{Error, Result};
use crate::flattening::{BoxMatrix, PhiMatrix};
use crate::homotopy::map_in_order;

/// Coefficients of a random line are drawn from `[-LINE_HEIGHT, LINE_HEIGHT]`.
pub const LINE_HEIGHT: i64 = 10;
pub const MAX_LINE_DRAWS: usize = 5;

/// Fraction-free determinant; consumes the matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// A square matrix whose entries are `0` or `±` a single variable.
pub trait LinearPattern: Sync {
    fn size(&self) -> usize;
    fn num_vars(&self) -> usize;
    /// `(row, col, sign, var)` for every nonzero entry.
    fn signed_entries(&self) -> Vec<(usize, usize, i8, usize)>;
}

impl LinearPattern for BoxMatrix {
    fn size(&self) -> usize {
        BoxMatrix::size(self)
    }

    fn num_vars(&self) -> usize {
        BoxMatrix::num_vars(self)
    }

    fn signed_entries(&self) -> Vec<(usize, usize, i8, usize)> {
        self.nonzero_entries().map(|(r, c, e)| (r, c, e.sign, e.var)).collect()
    }
}

impl LinearPattern for PhiMatrix {
    fn size(&self) -> usize {
        self.pattern().size()
    }

    fn num_vars(&self) -> usize {
        self.pattern().num_vars()
    }

    fn signed_entries(&self) -> Vec<(usize, usize, i8, usize)> {
        self.pattern().signed_entries()
    }
}

/// An explicit [`LinearPattern`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePattern {
    pub size: usize,
    pub num_vars: usize,
    pub entries: Vec<(usize, usize, i8, usize)>,
}

impl LinearPattern for SparsePattern {
    fn size(&self) -> usize {
        self.size
    }

    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn signed_entries(&self) -> Vec<(usize, usize, i8, usize)> {
        self.entries.clone()
    }
}

/// Every variable `v` replaced by `alpha[v] + t·beta[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLine {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
}

impl IntegerLine {
    pub fn random(rng: &mut dyn RngCore, vars: usize) -> Self {
        let mut draw = || (0..vars).map(|_| rng.random_range(-LINE_HEIGHT..=LINE_HEIGHT)).collect();
        let alpha = draw();
        let beta = draw();
        IntegerLine { alpha, beta }
    }
}

/// `det pattern(alpha + t·beta)` computed directly.
pub fn line_determinant(pattern: &dyn LinearPattern, line: &IntegerLine, t: &BigInt) -> BigInt {
    determinant_on_line(pattern.size(), &pattern.signed_entries(), line, t)
}

fn determinant_on_line(n: usize, entries: &[(usize, usize, i8, usize)], line: &IntegerLine, t: &BigInt) -> BigInt {
    let mut m = alloc::vec![alloc::vec![BigInt::zero(); n]; n];
    for &(r, c, sign, var) in entries {
        let v = BigInt::from(line.alpha[var]) + t * line.beta[var];
        m[r][c] = if sign < 0 { -v } else { v };
    }
    bareiss_determinant(m)
}

/// The polynomial of degree `≤ values.len() − 1` through `(i, values[i])`,
/// via forward differences in the falling-factorial basis.
pub fn interpolate_at_naturals(values: &[BigInt]) -> UnivariatePoly {
    let n = values.len();
    let mut diffs: Vec<BigInt> = values.to_vec();
    let mut leading = Vec::with_capacity(n);
    for k in 0..n {
        leading.push(diffs[0].clone());
        for i in 0..n - 1 - k {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
    }
    let mut acc: Vec<BigRational> = alloc::vec![BigRational::zero(); n.max(1)];
    // t(t−1)…(t−k+1) / k!
    let mut basis: Vec<BigRational> = alloc::vec![BigRational::one()];
    for (k, d) in leading.iter().enumerate() {
        if k > 0 {
            let shift = BigRational::from_integer(BigInt::from(k - 1));
            let kk = BigRational::from_integer(BigInt::from(k));
            let mut next = alloc::vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b / &kk;
                next[i] -= b * &shift / &kk;
            }
            basis = next;
        }
        let d = BigRational::from_integer(d.clone());
        for (i, b) in basis.iter().enumerate() {
            acc[i] += b * &d;
        }
    }
    UnivariatePoly::new(
        acc.into_iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub poly: UnivariatePoly,
    pub line: IntegerLine,
    /// Lines drawn, including the accepted one.
    pub attempts: usize,
}

/// `det` of a linear pattern restricted to a random integer line, as an exact
/// polynomial in `t`. Lines on which the degree drops below the size are
/// redrawn; if every draw gives the zero polynomial, that is returned.
pub fn specialize_to_line(pattern: &dyn LinearPattern, rng: &mut dyn RngCore) -> Result<Specialization> {
    let n = pattern.size();
    let entries = pattern.signed_entries();
    let nodes: Vec<BigInt> = (0..=n).map(BigInt::from).collect();
    let mut best = 0;
    let mut all_zero = true;
    let mut last = None;
    for attempt in 1..=MAX_LINE_DRAWS {
        let line = IntegerLine::random(rng, pattern.num_vars());
        let values = map_in_order(&nodes, |t| determinant_on_line(n, &entries, &line, t));
        let poly = interpolate_at_naturals(&values);
        match poly.degree() {
            Some(d) if d == n => {
                return Ok(Specialization {
                    poly,
                    line,
                    attempts: attempt,
                })
            }
            Some(d) => {
                all_zero = false;
                best = best.max(d);
            }
            None => {}
        }
        last = Some(Specialization {
            poly,
            line,
            attempts: attempt,
        });
    }
    match last {
        Some(s) if all_zero => Ok(s),
        _ => Err(Error::DegreeDrop {
            degree: best,
            expected: n,
            attempts: MAX_LINE_DRAWS,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flattening::{box_product, GenericSkewMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(bareiss_determinant(big(&[&[2, 1], &[7, 4]])), BigInt::from(1));
        assert_eq!(bareiss_determinant(big(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])), BigInt::from(-5));
        assert_eq!(bareiss_determinant(big(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(bareiss_determinant(Vec::new()), BigInt::one());
        let vandermonde = big(&[&[1, 1, 1, 1], &[1, 2, 4, 8], &[1, 3, 9, 27], &[1, 5, 25, 125]]);
        // (2−1)(3−1)(5−1)(3−2)(5−2)(5−3)
        assert_eq!(bareiss_determinant(vandermonde), BigInt::from(48));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = UnivariatePoly::from_i64s(&[-7, 3, 0, -2, 11]);
        let values: Vec<BigInt> = (0..7).map(|t| f.eval(&BigInt::from(t))).collect();
        assert_eq!(interpolate_at_naturals(&values), f);
        assert_eq!(interpolate_at_naturals(&alloc::vec![BigInt::zero(); 3]), UnivariatePoly::zero());
    }

    #[test]
    fn one_by_one_pattern_is_the_line() {
        let pattern = SparsePattern {
            size: 1,
            num_vars: 1,
            entries: alloc::vec![(0, 0, 1, 0)],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = specialize_to_line(&pattern, &mut rng).unwrap();
        let expected = UnivariatePoly::from_i64s(&[s.line.alpha[0], s.line.beta[0]]);
        assert_eq!(s.poly, expected);
    }

    #[test]
    fn two_by_two_box_is_a_fourth_power() {
        let p = GenericSkewMatrix::generic(2);
        let pattern = box_product(&p, &p);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = specialize_to_line(&pattern, &mut rng).unwrap();
        let (a, b) = (s.line.alpha[0], s.line.beta[0]);
        // det of the anti-diagonal 4×4 with entries ±x is x^4
        let expected = UnivariatePoly::from_i64s(&[a, b]).pow(4);
        assert_eq!(s.poly, expected);
        assert_eq!(s.attempts, 1);
    }

    #[test]
    fn identically_zero_pattern() {
        let pattern = box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(2));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = specialize_to_line(&pattern, &mut rng).unwrap();
        assert!(s.poly.is_zero());
        assert_eq!(s.attempts, MAX_LINE_DRAWS);
    }

    #[test]
    fn interpolation_matches_direct_evaluation() {
        let pattern = box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(5));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = specialize_to_line(&pattern, &mut rng).unwrap();
        assert_eq!(s.poly.degree(), Some(15));
        for t in [-3i64, 17, 1000] {
            let t = BigInt::from(t);
            assert_eq!(s.poly.eval(&t), line_determinant(&pattern, &s.line, &t));
        }
    }
}
