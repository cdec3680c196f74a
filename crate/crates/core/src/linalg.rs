//! Dense complex linear algebra helpers shared by the numeric modules.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;

/// Relative singular-value cutoff used for every numeric rank decision.
pub const RANK_TOL: f64 = 1e-8;

/// Standard complex Gaussian: real and imaginary parts are N(0, 1/2), so E|z|^2 = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

pub fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let data = gaussian_vec(rng, rows * cols);
    CMatrix::from_vec(rows, cols, data)
}

/// Uniform point on the unit circle.
pub fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let theta = rng.random::<f64>() * core::f64::consts::TAU;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

pub fn norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numeric_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel_tol * top).count(),
        _ => 0,
    }
}

pub fn determinant(m: &CMatrix) -> Complex64 {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

fn row_norms(m: &CMatrix) -> Vec<f64> {
    m.row_iter()
        .map(|r| libm::sqrt(r.iter().map(|z| z.norm_sqr()).sum::<f64>()))
        .collect()
}

/// Product of row norms: the Hadamard bound on |det|.
pub fn hadamard_scale(m: &CMatrix) -> f64 {
    row_norms(m).iter().product()
}

/// Determinant from a partially pivoted LU together with its scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetEstimate {
    pub value: Complex64,
    /// Product of row norms of the input.
    pub hadamard: f64,
    /// First-order rounding bound from the LU backward error and row conditioning.
    pub error_bound: f64,
}

impl DetEstimate {
    /// |det| below `rel_tol` times the Hadamard scale.
    pub fn vanishes(&self, rel_tol: f64) -> bool {
        self.value.norm() <= rel_tol * self.hadamard
    }

    pub fn relative_magnitude(&self) -> f64 {
        if self.hadamard == 0.0 {
            0.0
        } else {
            self.value.norm() / self.hadamard
        }
    }
}

pub fn determinant_estimate(m: &CMatrix) -> DetEstimate {
    let n = m.nrows();
    let norms = row_norms(m);
    let hadamard: f64 = norms.iter().product();
    if n == 0 {
        return DetEstimate {
            value: Complex64::new(1.0, 0.0),
            hadamard: 1.0,
            error_bound: 0.0,
        };
    }
    let lu = m.clone().lu();
    let value = lu.determinant();
    let max_in = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_u = lu.u().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let growth = if max_in > 0.0 { max_u / max_in } else { 1.0 };
    let max_row = norms.iter().copied().fold(0.0, f64::max);
    let min_row = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let conditioning = if min_row > 0.0 { max_row / min_row } else { 1.0 };
    let error_bound = n as f64 * f64::EPSILON * growth * conditioning * hadamard;
    DetEstimate {
        value,
        hadamard,
        error_bound,
    }
}

pub fn kronecker(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Matrix of `k`x`k` minors (rows and columns indexed by lexicographic `k`-subsets).
pub fn compound_matrix(m: &CMatrix, k: usize) -> CMatrix {
    let rows = crate::combinatorics::subsets_lex(m.nrows(), k);
    let cols = crate::combinatorics::subsets_lex(m.ncols(), k);
    CMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        let sub = CMatrix::from_fn(k, k, |i, j| m[(rows[r][i], cols[c][j])]);
        determinant(&sub)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_of_outer_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = gaussian_matrix(&mut rng, 5, 1);
        let v = gaussian_matrix(&mut rng, 1, 7);
        assert_eq!(numeric_rank(&(&u * &v), RANK_TOL), 1);
        assert_eq!(numeric_rank(&gaussian_matrix(&mut rng, 5, 7), RANK_TOL), 5);
        assert_eq!(numeric_rank(&CMatrix::zeros(3, 3), RANK_TOL), 0);
    }

    #[test]
    fn gaussian_has_unit_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 20_000;
        let mean_sq: f64 = (0..n).map(|_| complex_gaussian(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_sq - 1.0).abs() < 0.05, "{mean_sq}");
    }

    #[test]
    fn determinant_scale() {
        let m = CMatrix::from_fn(2, 2, |i, j| Complex64::new([[1.0, 2.0], [3.0, 4.0]][i][j], 0.0));
        let est = determinant_estimate(&m);
        assert!((est.value - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
        assert!((est.hadamard - libm::sqrt(5.0) * 5.0).abs() < 1e-12);
        assert!(est.error_bound < 1e-12);
        assert!(!est.vanishes(1e-6));
    }

    #[test]
    fn compound_of_identity_is_identity() {
        let c = compound_matrix(&CMatrix::identity(5, 5), 2);
        assert_eq!(c, CMatrix::identity(10, 10));
    }
}
