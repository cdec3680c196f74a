//! Small parametrizations whose image degree is known, for smoke tests.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::RngCore;

use crate::error::Result;
use crate::linalg::{gaussian_matrix, gaussian_vec, CMatrix};
use crate::tensor::Parametrization;

/// `p ↦ A p`. With `A` of size `N × (N − 1)` and full rank, the image is a hyperplane.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub matrix: CMatrix,
}

impl LinearMap {
    pub fn random_hyperplane(rng: &mut dyn RngCore, coords: usize) -> Self {
        LinearMap {
            matrix: gaussian_matrix(rng, coords, coords - 1),
        }
    }
}

impl Parametrization for LinearMap {
    fn num_params(&self) -> usize {
        self.matrix.ncols()
    }

    fn num_coords(&self) -> usize {
        self.matrix.nrows()
    }

    fn eval(&self, params: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..params.len()).map(|c| self.matrix[(r, c)] * params[c]).sum();
        }
    }

    fn jacobian(&self, _params: &[Complex64], out: &mut CMatrix) {
        out.copy_from(&self.matrix);
    }

    fn sample_params(&self, rng: &mut dyn RngCore) -> Result<Vec<Complex64>> {
        Ok(gaussian_vec(rng, self.num_params()))
    }
}

/// `(s, u) ↦ (s², su, u²)`, the cone over a conic.
#[derive(Debug, Clone, Copy, Default)]
pub struct Conic;

impl Parametrization for Conic {
    fn num_params(&self) -> usize {
        2
    }

    fn num_coords(&self) -> usize {
        3
    }

    fn eval(&self, p: &[Complex64], out: &mut [Complex64]) {
        out[0] = p[0] * p[0];
        out[1] = p[0] * p[1];
        out[2] = p[1] * p[1];
    }

    fn jacobian(&self, p: &[Complex64], out: &mut CMatrix) {
        let zero = Complex64::new(0.0, 0.0);
        let rows = [[p[0] * 2.0, zero], [p[1], p[0]], [zero, p[1] * 2.0]];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                out[(r, c)] = *v;
            }
        }
    }

    fn sample_params(&self, rng: &mut dyn RngCore) -> Result<Vec<Complex64>> {
        Ok(gaussian_vec(rng, 2))
    }
}
