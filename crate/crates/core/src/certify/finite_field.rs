//! Dense polynomials over `F_p` for odd primes `p < 2^63`, coefficients low to high.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::univariate::UnivariatePoly;
use crate::error::{invalid, Error, Result};

type Fp = Vec<u64>;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

fn trim(mut f: Fp) -> Fp {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn reduce(f: &UnivariatePoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(f
        .coeffs()
        .iter()
        .map(|c| {
            let r = ((c % &pb) + &pb) % &pb;
            u64::try_from(r).expect("residue below p")
        })
        .collect())
}

fn monic(f: Fp, p: u64) -> Fp {
    match f.last() {
        Some(&l) if l != 1 => {
            let inv = inv_mod(l, p);
            f.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
        _ => f,
    }
}

fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect())
}

fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = mul_mod(r[r.len() - 1], inv, p);
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(factor, c, p)) % p;
        }
        q[shift] = factor;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    divrem(a, b, p).1
}

fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(a, p)
}

fn derivative(f: &Fp, p: u64) -> Fp {
    trim(f.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect())
}

/// `base^e mod m`.
fn pow_rem(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = rem(&vec![1], m, p);
    let base = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = rem(&mul(&acc, &acc, p), m, p);
        if e.bit(i) {
            acc = rem(&mul(&acc, &base, p), m, p);
        }
    }
    acc
}

fn degree(f: &Fp) -> usize {
    f.len().saturating_sub(1)
}

/// Distinct-degree factorization of a monic squarefree `f`: `(g, d)` where `g`
/// is the product of the irreducible factors of degree `d`.
fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let x: Fp = vec![0, 1];
    let pe = BigUint::from(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while degree(&rest) > 0 {
        d += 1;
        if 2 * d > degree(&rest) {
            let dr = degree(&rest);
            out.push((rest, dr));
            break;
        }
        h = pow_rem(&h, &pe, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        if degree(&g) > 0 {
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((g, d));
        }
    }
    out
}

/// Cantor–Zassenhaus splitting of a monic product of degree-`d` irreducibles.
fn equal_degree(g: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
    let n = degree(g);
    if n == d {
        out.push(g.clone());
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a: Fp = trim((0..n).map(|_| rng.random_range(0..p)).collect());
        if degree(&a) == 0 {
            continue;
        }
        let b = sub(&pow_rem(&a, &e, g, p), &vec![1], p);
        let u = gcd(g, &b, p);
        if degree(&u) > 0 && degree(&u) < n {
            let v = divrem(g, &u, p).0;
            equal_degree(&u, d, p, rng, out);
            equal_degree(&monic(v, p), d, p, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors of `f mod p`, sorted by degree then coefficients.
pub fn factor_mod_p(f: &UnivariatePoly, p: u64) -> Result<Vec<Vec<u64>>> {
    if p == 2 || !is_prime(p) {
        return Err(invalid("modulus must be an odd prime"));
    }
    let Some(deg) = f.degree() else {
        return Err(invalid("cannot factor the zero polynomial"));
    };
    let fp = reduce(f, p);
    if degree(&fp) != deg || fp.is_empty() {
        return Err(Error::BadPrime(p));
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let fp = monic(fp, p);
    if degree(&gcd(&fp, &derivative(&fp, p), p)) > 0 {
        return Err(Error::BadPrime(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ (deg as u64).rotate_left(32));
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&fp, p) {
        equal_degree(&g, d, p, &mut rng, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Degrees of the irreducible factors of `f mod p`, ascending.
pub fn factor_degrees_mod_p(f: &UnivariatePoly, p: u64) -> Result<Vec<usize>> {
    Ok(factor_mod_p(f, p)?.iter().map(degree).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_i64s(c)
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_048_583));
        assert_eq!(next_prime(1 << 20), 1_048_583);
        assert!(!is_prime(1_048_581));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn small_examples() {
        assert_eq!(factor_degrees_mod_p(&poly(&[1, 0, 1]), 3).unwrap(), vec![2]);
        assert_eq!(factor_degrees_mod_p(&poly(&[1, 0, 1]), 5).unwrap(), vec![1, 1]);
        assert_eq!(factor_degrees_mod_p(&poly(&[0, 1]), 7).unwrap(), vec![1]);
    }

    #[test]
    fn bad_primes() {
        // leading coefficient vanishes
        assert_eq!(factor_degrees_mod_p(&poly(&[1, 1, 7]), 7), Err(Error::BadPrime(7)));
        // (t - 1)^2
        assert_eq!(factor_degrees_mod_p(&poly(&[1, -2, 1]), 5), Err(Error::BadPrime(5)));
        assert!(factor_degrees_mod_p(&poly(&[1, 0, 1]), 2).is_err());
        assert!(factor_degrees_mod_p(&poly(&[1, 0, 1]), 9).is_err());
    }

    #[test]
    fn factors_multiply_back() {
        // (t^3 + 2)(t^2 + t + 1)(t - 4)(t^4 + 3t + 5) over a large prime
        let f = poly(&[2, 0, 0, 1]).mul(&poly(&[1, 1, 1])).mul(&poly(&[-4, 1])).mul(&poly(&[5, 3, 0, 0, 1]));
        let p = next_prime(1 << 20);
        let factors = factor_mod_p(&f, p).unwrap();
        let product = factors.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(product, monic(reduce(&f, p), p));
        for g in &factors {
            assert_eq!(distinct_degree(g, p), vec![(g.clone(), degree(g))]);
        }
    }

    #[test]
    fn unit_group_splits() {
        let f = poly(&[-1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(factor_degrees_mod_p(&f, 7).unwrap(), vec![1; 6]);
    }
}
