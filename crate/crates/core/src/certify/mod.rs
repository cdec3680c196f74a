//! Exact certificates for `det(P ⊠ Q)` and `det φ_T`: restrict to a random
//! integer line, interpolate exactly, then read off zero / perfect-power
//! structure or certify irreducibility from factor degrees modulo primes.

mod block;
mod finite_field;
mod specialize;
mod univariate;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use block::{block_identity, block_specialization_check, degree_gap, lemma_gap_scan, BlockIdentity, GapEntry};
pub use finite_field::{factor_degrees_mod_p, factor_mod_p, is_prime, next_prime};
pub use specialize::{
    bareiss_determinant, interpolate_at_naturals, line_determinant, specialize_to_line, IntegerLine,
    LinearPattern, SparsePattern, Specialization, LINE_HEIGHT, MAX_LINE_DRAWS,
};
pub use univariate::{squarefree_decompose, SquarefreeDecomposition, UnivariatePoly};

use crate::error::{invalid, Error, Result};
use crate::flattening::{box_product, phi_matrix, GenericSkewMatrix};

/// Primes for certificates are taken in increasing order above this bound.
pub const PRIME_FLOOR: u64 = 1 << 20;
pub const DEFAULT_PRIME_BUDGET: usize = 6;
/// Unsuitable primes skipped before giving up.
const MAX_BAD_PRIMES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Zero,
    PerfectPower { base_degree: usize, exponent: usize },
    Irreducible,
    Inconclusive,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateKind::Zero => f.write_str("zero"),
            CertificateKind::PerfectPower { base_degree, exponent } => {
                write!(f, "perfect_power({base_degree},{exponent})")
            }
            CertificateKind::Irreducible => f.write_str("irreducible"),
            CertificateKind::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// `box:s=S` or `phi:l=L`; empty for a bare polynomial.
    pub input: String,
    pub line_seed: u64,
    /// Degree of the specialized polynomial (0 when it is zero).
    pub degree: usize,
    pub kind: CertificateKind,
    /// Primes actually used, ascending.
    pub primes: Vec<u64>,
    /// Factor degrees modulo each prime, aligned with `primes`.
    pub degree_multisets: Vec<Vec<usize>>,
    /// Degrees of a factor compatible with every prime.
    pub feasible_splits: Vec<usize>,
    /// Irreducibility read off from the absence of intermediate invariant degrees.
    pub degree_gap: bool,
}

impl Certificate {
    fn bare(degree: usize, kind: CertificateKind) -> Self {
        Certificate {
            input: String::new(),
            line_seed: 0,
            degree,
            kind,
            primes: Vec::new(),
            degree_multisets: Vec::new(),
            feasible_splits: Vec::new(),
            degree_gap: false,
        }
    }

    /// Certified structure: anything but inconclusive.
    pub fn is_conclusive(&self) -> bool {
        self.kind != CertificateKind::Inconclusive
    }
}

fn subset_sums(degrees: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0]);
    for &d in degrees {
        let shifted: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(shifted);
    }
    sums
}

/// Irreducibility over Q from factor degrees modulo the given candidate
/// primes; unsuitable candidates are skipped and at most `budget` are used.
pub fn certificate_from_primes(f: &UnivariatePoly, candidates: impl IntoIterator<Item = u64>, budget: usize) -> Certificate {
    let Some(d) = f.degree() else {
        return Certificate::bare(0, CertificateKind::Zero);
    };
    let mut cert = Certificate::bare(d, CertificateKind::Inconclusive);
    if d == 0 || !squarefree_decompose(f).is_squarefree() {
        return cert;
    }
    let trivial = BTreeSet::from([0, d]);
    let mut feasible: BTreeSet<usize> = (0..=d).collect();
    let mut bad = 0;
    for p in candidates {
        if cert.primes.len() >= budget || bad >= MAX_BAD_PRIMES || feasible == trivial {
            break;
        }
        match factor_degrees_mod_p(f, p) {
            Ok(degrees) => {
                feasible = feasible.intersection(&subset_sums(&degrees)).copied().collect();
                cert.primes.push(p);
                cert.degree_multisets.push(degrees);
            }
            Err(_) => bad += 1,
        }
    }
    if feasible == trivial {
        cert.kind = CertificateKind::Irreducible;
    }
    cert.feasible_splits = feasible.into_iter().collect();
    cert
}

/// Successive primes above [`PRIME_FLOOR`].
pub fn certificate_primes() -> impl Iterator<Item = u64> {
    core::iter::successors(Some(next_prime(PRIME_FLOOR)), |&p| Some(next_prime(p)))
}

/// Never reports reducibility: a polynomial that is not proved irreducible
/// comes back inconclusive.
pub fn irreducibility_certificate(f: &UnivariatePoly, prime_budget: usize) -> Certificate {
    certificate_from_primes(f, certificate_primes(), prime_budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyTarget {
    /// `det(P ⊠ Q)` for generic skew `P` (3×3) and `Q` (s×s).
    Box { s: usize },
    /// `det φ_T` for `T ∈ C^3 ⊗ Λ^2 C^{4ℓ+3}`.
    Phi { ell: usize },
}

impl CertifyTarget {
    pub fn pattern(&self) -> Box<dyn LinearPattern> {
        match *self {
            CertifyTarget::Box { s } => Box::new(box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(s))),
            CertifyTarget::Phi { ell } => Box::new(phi_matrix(ell)),
        }
    }
}

impl fmt::Display for CertifyTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyTarget::Box { s } => write!(f, "box:s={s}"),
            CertifyTarget::Phi { ell } => write!(f, "phi:l={ell}"),
        }
    }
}

impl FromStr for CertifyTarget {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || invalid("target must be box:s=S or phi:l=L");
        let (kind, arg) = text.trim().split_once(':').ok_or_else(bad)?;
        let (key, value) = arg.split_once('=').ok_or_else(bad)?;
        let n: usize = value.trim().parse().map_err(|_| bad())?;
        match (kind.trim(), key.trim()) {
            ("box", "s") if n >= 1 => Ok(CertifyTarget::Box { s: n }),
            ("phi", "l") => Ok(CertifyTarget::Phi { ell: n }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub prime_budget: usize,
    /// Certify `box:s=S` without factoring when no intermediate invariant degree exists.
    pub degree_gap_shortcut: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            prime_budget: DEFAULT_PRIME_BUDGET,
            degree_gap_shortcut: true,
        }
    }
}

/// The full pipeline: specialization, zero test, squarefree structure, then
/// the degree-gap shortcut or the modular certificate.
pub fn certify(target: CertifyTarget, line_seed: u64, opts: &CertifyOptions) -> Result<Certificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(line_seed);
    let pattern = target.pattern();
    let spec = specialize_to_line(pattern.as_ref(), &mut rng)?;
    let f = spec.poly;
    let degree = f.degree().unwrap_or(0);
    let mut cert = if f.is_zero() {
        Certificate::bare(0, CertificateKind::Zero)
    } else {
        let decomposition = squarefree_decompose(&f);
        let gap = match target {
            CertifyTarget::Box { s } => degree_gap(s).forced(),
            CertifyTarget::Phi { .. } => false,
        };
        if let Some((base_degree, exponent)) = decomposition.perfect_power() {
            Certificate::bare(degree, CertificateKind::PerfectPower { base_degree, exponent })
        } else if gap && opts.degree_gap_shortcut && decomposition.is_squarefree() {
            let mut c = Certificate::bare(degree, CertificateKind::Irreducible);
            c.degree_gap = true;
            c
        } else {
            irreducibility_certificate(&f, opts.prime_budget)
        }
    };
    cert.input = target.to_string();
    cert.line_seed = line_seed;
    Ok(cert)
}

/// [`certify`] for `box:s=1..=s_max`.
pub fn structure_table(s_max: usize, line_seed: u64, opts: &CertifyOptions) -> Result<Vec<Certificate>> {
    (1..=s_max).map(|s| certify(CertifyTarget::Box { s }, line_seed, opts)).collect()
}
