//! Exterior flattenings, the ⊠ product of skew-symmetric matrices and the
//! classical Kronecker product.
//!
//! `P ⊠ Q` has rows `(i, k)` and columns `(j, l)` (row index `i·|Q| + k`) and
//! carries at that position the *independent* variable paired from `p_{ij}` and
//! `q_{kl}`, where the Kronecker product would carry the commutative product
//! `p_{ij} q_{kl}`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::combinatorics::{binomial, subset_rank};
use crate::error::{invalid, Result};
use crate::linalg::{self, CMatrix, DetEstimate, RANK_TOL};
use crate::tensor::{SecantSpec, TensorPoint};

/// A skew-symmetric matrix whose upper entries are signed variables.
///
/// Entry `(j, k)` for `j < k` is `sign · var`, entry `(k, j)` its negative, the
/// diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericSkewMatrix {
    size: usize,
    /// Indexed by the lexicographic rank of the pair `(j, k)`.
    upper: Vec<(i8, usize)>,
}

impl GenericSkewMatrix {
    /// `entry(j, k) = var(j, k)` with variables numbered in lexicographic pair order.
    pub fn generic(size: usize) -> Self {
        let pairs = binomial(size, 2);
        GenericSkewMatrix {
            size,
            upper: (0..pairs).map(|v| (1, v)).collect(),
        }
    }

    /// The 3×3 factor `[[0, v1, -v2], [-v1, 0, v3], [v2, -v3, 0]]` of the exterior flattening.
    pub fn flattening_factor() -> Self {
        GenericSkewMatrix {
            size: 3,
            upper: alloc::vec![(1, 0), (-1, 1), (1, 2)],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn num_vars(&self) -> usize {
        self.upper.iter().map(|&(_, v)| v + 1).max().unwrap_or(0)
    }

    /// `(sign, var)` at `(row, col)`, or `None` on the diagonal.
    pub fn entry(&self, row: usize, col: usize) -> Option<(i8, usize)> {
        use core::cmp::Ordering::*;
        match row.cmp(&col) {
            Equal => None,
            Less => Some(self.upper[subset_rank(&[row, col], self.size)]),
            Greater => {
                let (s, v) = self.upper[subset_rank(&[col, row], self.size)];
                Some((-s, v))
            }
        }
    }

    pub fn evaluate(&self, values: &[Complex64]) -> CMatrix {
        CMatrix::from_fn(self.size, self.size, |r, c| match self.entry(r, c) {
            None => Complex64::new(0.0, 0.0),
            Some((s, v)) => values[v] * f64::from(s),
        })
    }
}

/// One signed entry of a ⊠ matrix; `var = p_var · q_vars + q_var`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxEntry {
    pub sign: i8,
    pub var: usize,
}

/// Symbolic pattern of `P ⊠ Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxMatrix {
    p: GenericSkewMatrix,
    q: GenericSkewMatrix,
    entries: Vec<Option<BoxEntry>>,
}

impl BoxMatrix {
    pub fn size(&self) -> usize {
        self.p.size() * self.q.size()
    }

    pub fn num_vars(&self) -> usize {
        self.p.num_vars() * self.q.num_vars()
    }

    pub fn q_vars(&self) -> usize {
        self.q.num_vars()
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<BoxEntry> {
        self.entries[row * self.size() + col]
    }

    /// `(p_var, q_var)` making up a box variable.
    pub fn split_var(&self, var: usize) -> (usize, usize) {
        (var / self.q.num_vars(), var % self.q.num_vars())
    }

    pub fn p(&self) -> &GenericSkewMatrix {
        &self.p
    }

    pub fn q(&self) -> &GenericSkewMatrix {
        &self.q
    }

    /// Substitute values for the box variables.
    pub fn evaluate(&self, values: &[Complex64]) -> CMatrix {
        let n = self.size();
        CMatrix::from_fn(n, n, |r, c| match self.entry(r, c) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => values[e.var] * f64::from(e.sign),
        })
    }

    /// Nonzero entries as `(row, col, entry)` in row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, BoxEntry)> + '_ {
        let n = self.size();
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(idx, e)| e.map(|e| (idx / n, idx % n, e)))
    }
}

pub fn box_product(p: &GenericSkewMatrix, q: &GenericSkewMatrix) -> BoxMatrix {
    let (a, c) = (p.size(), q.size());
    let n = a * c;
    let qv = q.num_vars();
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let (i, k) = (row / c, row % c);
        for col in 0..n {
            let (j, l) = (col / c, col % c);
            entries.push(match (p.entry(i, j), q.entry(k, l)) {
                (Some((sp, vp)), Some((sq, vq))) => Some(BoxEntry {
                    sign: sp * sq,
                    var: vp * qv + vq,
                }),
                _ => None,
            });
        }
    }
    BoxMatrix {
        p: p.clone(),
        q: q.clone(),
        entries,
    }
}

/// The exterior flattening `φ_T : V ⊗ W* → V* ⊗ W` for `T ∈ C^3 ⊗ Λ^2 C^{4ℓ+3}`.
///
/// The box variable `(i, pair(j,k))` is exactly the tensor coordinate
/// `x_{i,{j,k}}`, so evaluation is a direct lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMatrix {
    ell: usize,
    pattern: BoxMatrix,
}

impl PhiMatrix {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn pattern(&self) -> &BoxMatrix {
        &self.pattern
    }

    pub fn size(&self) -> usize {
        self.pattern.size()
    }

    /// The tensor shape `(2, 1, 4ℓ+2)` this flattening accepts.
    pub fn tensor_spec(&self) -> SecantSpec {
        SecantSpec {
            m: 2,
            k: 1,
            n: 4 * self.ell + 2,
            s: 1,
        }
    }

    /// `(i, j, k)` (0-based, `j < k`) of the tensor coordinate behind a box variable.
    pub fn var_label(&self, var: usize) -> (usize, usize, usize) {
        let w = 4 * self.ell + 3;
        let pairs = binomial(w, 2);
        let (i, pair) = (var / pairs, var % pairs);
        let mut rank = pair;
        for j in 0..w {
            let row = w - j - 1;
            if rank < row {
                return (i, j, j + 1 + rank);
            }
            rank -= row;
        }
        unreachable!("pair rank out of range")
    }
}

pub fn phi_matrix(ell: usize) -> PhiMatrix {
    let pattern = box_product(
        &GenericSkewMatrix::flattening_factor(),
        &GenericSkewMatrix::generic(4 * ell + 3),
    );
    PhiMatrix { ell, pattern }
}

/// `ℓ` for a tensor of shape `(2, 1, 4ℓ+2)`.
pub fn ell_for(spec: &SecantSpec) -> Result<usize> {
    if spec.m != 2 || spec.k != 1 || spec.n < 2 || (spec.n - 2) % 4 != 0 {
        return Err(invalid("exterior flattening needs a tensor in C^3 ⊗ Λ^2 C^{4ℓ+3}"));
    }
    Ok((spec.n - 2) / 4)
}

pub fn phi_evaluate(phi: &PhiMatrix, t: &TensorPoint) -> Result<CMatrix> {
    let spec = phi.tensor_spec();
    if t.spec.with_s(1) != spec || t.coords.len() != spec.num_coords() {
        return Err(invalid("tensor shape does not match the flattening"));
    }
    Ok(phi.pattern.evaluate(&t.coords))
}

pub fn flattening_rank(t: &TensorPoint) -> Result<usize> {
    let phi = phi_matrix(ell_for(&t.spec)?);
    Ok(linalg::numeric_rank(&phi_evaluate(&phi, t)?, RANK_TOL))
}

/// A determinant vanishes when it is within this many rounding bounds of zero.
///
/// A fixed fraction of the Hadamard scale does not work here: for generic
/// `T` the ratio `|det φ_T| / Π‖row‖` already drops to ~1e-9 at `ℓ = 2`, while on
/// the secant variety it sits at ~1e-21.
pub const VANISH_ROUNDING_FACTOR: f64 = 1e3;

pub fn det_vanishes(est: &DetEstimate) -> bool {
    est.value.norm() <= VANISH_ROUNDING_FACTOR * est.error_bound
}

/// `det φ_T` by pivoted LU, with its Hadamard scale and rounding estimate.
pub fn det_phi(t: &TensorPoint) -> Result<DetEstimate> {
    let phi = phi_matrix(ell_for(&t.spec)?);
    Ok(linalg::determinant_estimate(&phi_evaluate(&phi, t)?))
}

/// `(det(P ⊗ Q), det(P)^n · det(Q)^m)` for `P` of size `m`, `Q` of size `n`.
pub fn kronecker_det_check(p: &CMatrix, q: &CMatrix) -> Result<(Complex64, Complex64)> {
    if !p.is_square() || !q.is_square() {
        return Err(invalid("Kronecker determinant identity needs square inputs"));
    }
    let (m, n) = (p.nrows() as i32, q.nrows() as i32);
    let lhs = linalg::determinant(&linalg::kronecker(p, q));
    let rhs = linalg::determinant(p).powi(n) * linalg::determinant(q).powi(m);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{sample_ambient_point, RankOneParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn skew_structure() {
        for size in 1..6 {
            let p = GenericSkewMatrix::generic(size);
            for r in 0..size {
                assert_eq!(p.entry(r, r), None);
                for c in 0..size {
                    if r != c {
                        let (s1, v1) = p.entry(r, c).unwrap();
                        let (s2, v2) = p.entry(c, r).unwrap();
                        assert_eq!((s1, v1), (-s2, v2));
                    }
                }
            }
        }
    }

    #[test]
    fn box_of_two_skews_is_symmetric() {
        let b = box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(4));
        for r in 0..b.size() {
            for c in 0..b.size() {
                assert_eq!(b.entry(r, c), b.entry(c, r));
            }
        }
    }

    #[test]
    fn box_with_one_by_one_is_zero() {
        let b = box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(1));
        assert_eq!(b.size(), 3);
        assert_eq!(b.nonzero_entries().count(), 0);
        let m = b.evaluate(&[]);
        assert_eq!(linalg::determinant(&m), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn box_with_two_by_two_is_singular() {
        let b = box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(2));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vals = linalg::gaussian_vec(&mut rng, b.num_vars());
        let est = linalg::determinant_estimate(&b.evaluate(&vals));
        assert!(est.vanishes(1e-12));
    }

    #[test]
    fn phi_displayed_corner() {
        // First row of the displayed 21×21 matrix: zeros, then a_{12..17}, then 0, -b_{12..17}.
        let phi = phi_matrix(1);
        assert_eq!(phi.size(), 21);
        for col in 0..8 {
            assert_eq!(phi.pattern().entry(0, col), None);
        }
        for l in 1..7 {
            let e = phi.pattern().entry(0, 7 + l).unwrap();
            assert_eq!((e.sign, phi.var_label(e.var)), (1, (0, 0, l)));
            let e = phi.pattern().entry(0, 14 + l).unwrap();
            assert_eq!((e.sign, phi.var_label(e.var)), (-1, (1, 0, l)));
        }
        // Row 8 (second block row): -a_{12}, c_{12} entries.
        let e = phi.pattern().entry(8, 0).unwrap();
        assert_eq!((e.sign, phi.var_label(e.var)), (1, (0, 0, 1)));
        let e = phi.pattern().entry(8, 14).unwrap();
        assert_eq!((e.sign, phi.var_label(e.var)), (-1, (2, 0, 1)));
    }

    #[test]
    fn phi_rank_one_and_zero() {
        let spec = SecantSpec::new(2, 1, 6, 1).unwrap();
        let mut t = TensorPoint::zero(spec);
        assert_eq!(flattening_rank(&t).unwrap(), 0);
        assert_eq!(det_phi(&t).unwrap().value, Complex64::new(0.0, 0.0));
        t.coords[0] = Complex64::new(1.0, 0.0);
        assert_eq!(flattening_rank(&t).unwrap(), 4);
    }

    #[test]
    fn phi_generic_full_rank() {
        let spec = SecantSpec::new(2, 1, 6, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = sample_ambient_point(&spec, &mut rng);
        assert_eq!(flattening_rank(&t).unwrap(), 21);
    }

    #[test]
    fn phi_rejects_wrong_shape() {
        let spec = SecantSpec::new(2, 1, 5, 1).unwrap();
        assert!(flattening_rank(&TensorPoint::zero(spec)).is_err());
        let phi = phi_matrix(1);
        let other = TensorPoint::zero(SecantSpec::new(2, 1, 10, 1).unwrap());
        assert!(phi_evaluate(&phi, &other).is_err());
    }

    #[test]
    fn var_labels_cover_coords() {
        let phi = phi_matrix(1);
        let spec = phi.tensor_spec();
        for var in 0..phi.pattern().num_vars() {
            let (i, j, k) = phi.var_label(var);
            assert_eq!(spec.coord_index(i, &[j, k]), var);
        }
    }

    #[test]
    fn kronecker_identity_cases() {
        let (lhs, rhs) = kronecker_det_check(&CMatrix::identity(2, 2), &CMatrix::identity(3, 3)).unwrap();
        assert_eq!((lhs, rhs), (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)));
        assert!(kronecker_det_check(&CMatrix::zeros(2, 3), &CMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn forced_params_match_hot_coordinate() {
        let spec = SecantSpec::new(2, 1, 6, 1).unwrap();
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); 3];
        v[0] = Complex64::new(1.0, 0.0);
        let mut e = CMatrix::zeros(2, 7);
        e[(0, 0)] = Complex64::new(1.0, 0.0);
        e[(1, 1)] = Complex64::new(1.0, 0.0);
        let t = TensorPoint::from_params(spec, alloc::vec![RankOneParams { v, e }]).unwrap();
        assert_eq!(flattening_rank(&t).unwrap(), 4);
    }
}
