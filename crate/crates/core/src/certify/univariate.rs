use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in `t` with integer coefficients `c_0, …, c_d`.
///
/// Stored trimmed: the last coefficient is nonzero, and the zero polynomial
/// has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnivariatePoly {
    coeffs: Vec<BigInt>,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, with a positive leading coefficient.
    pub fn primitive_part(&self) -> UnivariatePoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        UnivariatePoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UnivariatePoly {
        UnivariatePoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn mul(&self, other: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePoly::new(out)
    }

    pub fn pow(&self, e: usize) -> UnivariatePoly {
        (0..e).fold(UnivariatePoly::from_i64s(&[1]), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, k: &BigInt) -> UnivariatePoly {
        UnivariatePoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mut body = String::new();
            if !a.is_one() || i == 0 {
                body = alloc::format!("{a}");
            }
            let var = match i {
                0 => String::new(),
                1 => String::from("t"),
                _ => alloc::format!("t^{i}"),
            };
            if !body.is_empty() && !var.is_empty() {
                write!(f, "{body}*{var}")?;
            } else {
                write!(f, "{body}{var}")?;
            }
        }
        Ok(())
    }
}

/// Dense polynomial over Q, trimmed like [`UnivariatePoly`].
type QPoly = Vec<BigRational>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn to_q(f: &UnivariatePoly) -> QPoly {
    f.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Primitive integer multiple with positive leading coefficient.
fn to_primitive(p: &QPoly) -> UnivariatePoly {
    let lcm = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    UnivariatePoly::new(p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect())
        .primitive_part()
}

fn monic(p: QPoly) -> QPoly {
    match p.last().cloned() {
        Some(l) => p.into_iter().map(|c| c / &l).collect(),
        None => p,
    }
}

fn q_derivative(p: &QPoly) -> QPoly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect())
}

/// Quotient and remainder; `b` must be nonzero.
fn q_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = &b[db];
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = &r[r.len() - 1] / lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        q[shift] = factor;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = q_divrem(&a, &b);
        a = b;
        b = monic(r);
    }
    monic(a)
}

/// `f = unit · ∏ factor^multiplicity` with pairwise coprime squarefree
/// primitive factors, multiplicities increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: BigInt,
    pub factors: Vec<(UnivariatePoly, usize)>,
}

impl SquarefreeDecomposition {
    pub fn reassemble(&self) -> UnivariatePoly {
        self.factors
            .iter()
            .fold(UnivariatePoly::new(vec![self.unit.clone()]), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    /// `(base_degree, exponent)` when `f = c · g^e` with `g` squarefree and `e ≥ 2`.
    pub fn perfect_power(&self) -> Option<(usize, usize)> {
        match self.factors.as_slice() {
            [(g, e)] if *e >= 2 => Some((g.degree().unwrap_or(0), *e)),
            _ => None,
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Yun's squarefree decomposition over Q. The zero polynomial and constants
/// have no factors.
pub fn squarefree_decompose(f: &UnivariatePoly) -> SquarefreeDecomposition {
    let mut factors = Vec::new();
    if f.degree().unwrap_or(0) >= 1 {
        let fq = to_q(f);
        let df = q_derivative(&fq);
        let a0 = q_gcd(&fq, &df);
        let mut b = q_divrem(&fq, &a0).0;
        let c = q_divrem(&df, &a0).0;
        let mut d = q_sub(&c, &q_derivative(&b));
        let mut i = 1;
        while b.len() > 1 {
            let a = q_gcd(&b, &d);
            if a.len() > 1 {
                factors.push((to_primitive(&a), i));
            }
            b = q_divrem(&b, &a).0;
            let c = q_divrem(&d, &a).0;
            d = q_sub(&c, &q_derivative(&b));
            i += 1;
        }
    }
    let product = factors
        .iter()
        .fold(UnivariatePoly::from_i64s(&[1]), |acc: UnivariatePoly, (g, e)| acc.mul(&g.pow(*e)));
    // primitive factors make the cofactor an integer (Gauss)
    let unit = match (f.leading(), product.leading()) {
        (Some(a), Some(b)) => a / b,
        _ => BigInt::zero(),
    };
    SquarefreeDecomposition { unit, factors }
}
