//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! Monomials are packed into a `u128`: the sorted variable indices (each
//! stored as `index + 1` in one byte) fill the bytes from the most significant
//! end. Comparing keys therefore compares the sorted factor tuples
//! lexicographically, which is the canonical term order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest total degree a packed monomial can hold.
pub const MAX_DEGREE: usize = 16;
/// Variables are numbered `0..MAX_VARS`.
pub const MAX_VARS: usize = 255;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: usize) -> Result<Monomial> {
        Monomial::ONE.times_var(v)
    }

    pub fn from_vars(vars: &[usize]) -> Result<Monomial> {
        let mut sorted: Vec<usize> = vars.to_vec();
        sorted.sort_unstable();
        if sorted.len() > MAX_DEGREE {
            return Err(Error::MonomialOverflow("degree"));
        }
        let mut key = 0u128;
        for (slot, &v) in sorted.iter().enumerate() {
            if v >= MAX_VARS {
                return Err(Error::MonomialOverflow("variable index"));
            }
            key |= ((v + 1) as u128) << (8 * (MAX_DEGREE - 1 - slot));
        }
        Ok(Monomial(key))
    }

    pub fn raw(&self) -> u128 {
        self.0
    }

    pub fn degree(&self) -> usize {
        MAX_DEGREE - (self.0.trailing_zeros() as usize / 8).min(MAX_DEGREE)
    }

    /// Sorted variable indices, with repetition.
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.degree()).map(move |slot| ((self.0 >> (8 * (MAX_DEGREE - 1 - slot))) & 0xff) as usize - 1)
    }

    pub fn exponent(&self, v: usize) -> usize {
        self.vars().filter(|&u| u == v).count()
    }

    pub fn times_var(&self, v: usize) -> Result<Monomial> {
        let deg = self.degree();
        if deg == MAX_DEGREE {
            return Err(Error::MonomialOverflow("degree"));
        }
        if v >= MAX_VARS {
            return Err(Error::MonomialOverflow("variable index"));
        }
        // insert byte v+1 keeping the byte string sorted
        let byte = (v + 1) as u128;
        let mut slot = 0;
        while slot < deg && ((self.0 >> (8 * (MAX_DEGREE - 1 - slot))) & 0xff) <= byte {
            slot += 1;
        }
        let shift = 8 * (MAX_DEGREE - slot);
        let high = if shift == 128 { 0 } else { (self.0 >> shift) << shift };
        let low = self.0 & low_mask(shift);
        Ok(Monomial(high | (byte << (shift - 8)) | (low >> 8)))
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut acc = *self;
        for v in other.vars() {
            acc = acc.times_var(v)?;
        }
        Ok(acc)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut rest: Vec<usize> = self.vars().collect();
        for v in other.vars() {
            let pos = rest.iter().position(|&u| u == v)?;
            rest.remove(pos);
        }
        Monomial::from_vars(&rest).ok()
    }

    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        self.vars().fold(Complex64::new(1.0, 0.0), |acc, v| acc * values[v])
    }
}

fn low_mask(bits: usize) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vars()).finish()
    }
}

/// A polynomial over a frozen universe of `num_vars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl SparsePoly {
    pub fn zero(num_vars: usize) -> Self {
        SparsePoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        SparsePoly::monomial(num_vars, Monomial::ONE, BigInt::one())
    }

    pub fn monomial(num_vars: usize, mono: Monomial, coeff: BigInt) -> Self {
        let mut p = SparsePoly::zero(num_vars);
        p.add_term(mono, coeff);
        p
    }

    pub fn var(num_vars: usize, v: usize) -> Result<Self> {
        Ok(SparsePoly::monomial(num_vars, Monomial::var(v)?, BigInt::one()))
    }

    /// Builds from `(monomial, coefficient)` pairs, merging duplicates.
    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = SparsePoly::zero(num_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> SparsePoly {
        if k.is_zero() {
            return SparsePoly::zero(self.num_vars);
        }
        SparsePoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(self.num_vars.max(other.num_vars));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2)?, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| m.eval(values) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// `Σ |c| · |m(values)|`, the scale against which an evaluation is judged.
    pub fn eval_magnitude(&self, values: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| m.eval(values).norm() * c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    /// Contraction `mono ⌟ self`: viewing `self` as a polynomial in the variables
    /// accepted by `in_group`, the coefficient of `mono` (which must be a
    /// monomial in those variables).
    pub fn coefficient_in(&self, mono: &Monomial, in_group: impl Fn(usize) -> bool) -> SparsePoly {
        let mut out = SparsePoly::zero(self.num_vars);
        for (m, c) in &self.terms {
            let group_part: Vec<usize> = m.vars().filter(|&v| in_group(v)).collect();
            let Ok(group_mono) = Monomial::from_vars(&group_part) else {
                continue;
            };
            if group_mono != *mono {
                continue;
            }
            let rest: Vec<usize> = m.vars().filter(|&v| !in_group(v)).collect();
            if let Ok(r) = Monomial::from_vars(&rest) {
                out.add_term(r, c.clone());
            }
        }
        out
    }

    /// gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and fixes the sign so the first term (in monomial
    /// order) is positive.
    pub fn normalized(&self) -> SparsePoly {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let first_negative = self.terms.values().next().is_some_and(|c| c.is_negative());
        let g = if first_negative { -g } else { g };
        SparsePoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (*m, c / &g)).collect(),
        }
    }
}
