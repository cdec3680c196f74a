//! Segre-Grassmann varieties and their secants.
//!
//! A rank-one point of `C^{m+1} ⊗ Λ^{k+1} C^{n+1}` is `v ⊗ (w_0 ∧ … ∧ w_k)`; in
//! coordinates it is `(v_i · Δ_J(E))_{i,J}` where `E` is the `(k+1)×(n+1)` matrix
//! with rows `w_r` and `Δ_J` its maximal minor on the columns `J`.
//!
//! Coordinates are linearized `i`-major, with the column subsets `J` in
//! lexicographic order. The flattening and invariant modules depend on this
//! order.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::combinatorics::{binomial, subset_rank, subsets_lex};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix, RANK_TOL};

/// Resampling attempts before a degenerate draw becomes an error.
pub const MAX_RESAMPLES: usize = 5;

/// The quadruple `(m, k, n, s)` naming `σ_s(Seg(P^m × G(k, n)))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SecantSpec {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub s: usize,
}

impl SecantSpec {
    pub fn new(m: usize, k: usize, n: usize, s: usize) -> Result<Self> {
        let spec = SecantSpec { m, k, n, s };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k >= self.n {
            return Err(invalid("need k < n"));
        }
        if self.s == 0 {
            return Err(invalid("need s >= 1"));
        }
        Ok(())
    }

    pub fn v_dim(&self) -> usize {
        self.m + 1
    }

    pub fn w_dim(&self) -> usize {
        self.n + 1
    }

    /// `k + 1`, the number of rows of each `E`.
    pub fn wedge_order(&self) -> usize {
        self.k + 1
    }

    /// `binom(n+1, k+1)`.
    pub fn wedge_dim(&self) -> usize {
        binomial(self.n + 1, self.k + 1)
    }

    pub fn num_coords(&self) -> usize {
        self.v_dim() * self.wedge_dim()
    }

    /// Projective dimension `N` of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.num_coords() - 1
    }

    /// `dim Seg(P^m × G(k,n)) = m + (k+1)(n-k)`.
    pub fn variety_dim(&self) -> usize {
        self.m + (self.k + 1) * (self.n - self.k)
    }

    pub fn params_per_term(&self) -> usize {
        self.v_dim() + self.wedge_order() * self.w_dim()
    }

    pub fn num_params(&self) -> usize {
        self.s * self.params_per_term()
    }

    /// Index of `x_{i,J}` (0-based `i`, strictly increasing 0-based `J`).
    pub fn coord_index(&self, i: usize, cols: &[usize]) -> usize {
        i * self.wedge_dim() + subset_rank(cols, self.w_dim())
    }

    /// `(i, J)` for every coordinate, in storage order.
    pub fn coord_labels(&self) -> Vec<(usize, Vec<usize>)> {
        let subsets = subsets_lex(self.w_dim(), self.wedge_order());
        (0..self.v_dim())
            .flat_map(|i| subsets.iter().map(move |j| (i, j.clone())))
            .collect()
    }

    pub fn with_s(&self, s: usize) -> Self {
        SecantSpec { s, ..*self }
    }
}

/// One summand `v ⊗ rowspace(E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneParams {
    pub v: Vec<Complex64>,
    pub e: CMatrix,
}

impl RankOneParams {
    fn check(&self, spec: &SecantSpec) -> Result<()> {
        if self.v.len() != spec.v_dim() || self.e.nrows() != spec.wedge_order() || self.e.ncols() != spec.w_dim() {
            return Err(invalid("rank-one parameters do not match the spec shape"));
        }
        Ok(())
    }

    /// `true` when `E` has numeric rank `k+1` and `v` is nonzero.
    pub fn is_generic(&self) -> bool {
        linalg::norm(&self.v) > 0.0 && linalg::numeric_rank(&self.e, RANK_TOL) == self.e.nrows()
    }
}

/// A coordinate vector in `C^{m+1} ⊗ Λ^{k+1} C^{n+1}`, optionally with the
/// summands it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorPoint {
    pub spec: SecantSpec,
    pub coords: Vec<Complex64>,
    pub params: Option<Vec<RankOneParams>>,
}

impl TensorPoint {
    pub fn zero(spec: SecantSpec) -> Self {
        TensorPoint {
            spec,
            coords: vec![Complex64::new(0.0, 0.0); spec.num_coords()],
            params: None,
        }
    }

    pub fn from_coords(spec: SecantSpec, coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() != spec.num_coords() {
            return Err(invalid("coordinate count does not match the spec"));
        }
        Ok(TensorPoint {
            spec,
            coords,
            params: None,
        })
    }

    /// Sum of the rank-one tensors described by `params`. The stored spec has
    /// `s = params.len()`.
    pub fn from_params(spec: SecantSpec, params: Vec<RankOneParams>) -> Result<Self> {
        if params.is_empty() {
            return Err(invalid("at least one summand required"));
        }
        let spec = spec.with_s(params.len());
        let mut coords = vec![Complex64::new(0.0, 0.0); spec.num_coords()];
        for term in &params {
            term.check(&spec)?;
            let minors = plucker_coords(&term.e)?;
            for (i, vi) in term.v.iter().enumerate() {
                for (j, d) in minors.iter().enumerate() {
                    coords[i * minors.len() + j] += vi * d;
                }
            }
        }
        Ok(TensorPoint {
            spec,
            coords,
            params: Some(params),
        })
    }

    /// Recomputes coordinates from the stored summands.
    pub fn reconstruct(&self) -> Result<Vec<Complex64>> {
        let params = self.params.clone().ok_or_else(|| invalid("point has no parameters"))?;
        Ok(TensorPoint::from_params(self.spec, params)?.coords)
    }

    /// Entrywise sum; parameters are concatenated when both sides carry them.
    pub fn add(&self, other: &TensorPoint) -> Result<TensorPoint> {
        if self.coords.len() != other.coords.len() || self.spec.with_s(1) != other.spec.with_s(1) {
            return Err(invalid("cannot add tensors of different shapes"));
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        let params = match (&self.params, &other.params) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect::<Vec<_>>()),
            _ => None,
        };
        let s = params.as_ref().map_or(self.spec.s + other.spec.s, |p| p.len());
        Ok(TensorPoint {
            spec: self.spec.with_s(s),
            coords,
            params,
        })
    }

    /// The `(m+1) × binom(n+1,k+1)` matrix obtained by slicing the first mode.
    pub fn as_matrix(&self) -> CMatrix {
        let w = self.spec.wedge_dim();
        CMatrix::from_fn(self.spec.v_dim(), w, |i, j| self.coords[i * w + j])
    }

    /// Action of `(g, h) ∈ GL(V) × GL(W)`: `x ↦ (g ⊗ Λ^{k+1} h) x`. Parameters are
    /// transformed along (`v ↦ g v`, `E ↦ E hᵀ`).
    pub fn transform(&self, g: &CMatrix, h: &CMatrix) -> Result<TensorPoint> {
        let spec = self.spec;
        if g.shape() != (spec.v_dim(), spec.v_dim()) || h.shape() != (spec.w_dim(), spec.w_dim()) {
            return Err(invalid("group element shapes do not match the spec"));
        }
        let wedge = linalg::compound_matrix(h, spec.wedge_order());
        let x = self.as_matrix();
        let y = g * x * wedge.transpose();
        let coords = y.transpose().iter().copied().collect::<Vec<_>>();
        let params = self.params.as_ref().map(|ps| {
            ps.iter()
                .map(|p| {
                    let v = g * nalgebra::DVector::from_column_slice(&p.v);
                    RankOneParams {
                        v: v.iter().copied().collect(),
                        e: &p.e * h.transpose(),
                    }
                })
                .collect()
        });
        Ok(TensorPoint { spec, coords, params })
    }

    /// Parameters flattened in the homotopy layout: for each summand `v` then `E` row-major.
    pub fn param_vector(&self) -> Option<Vec<Complex64>> {
        self.params.as_ref().map(|ps| {
            let mut out = Vec::with_capacity(self.spec.num_params());
            for p in ps {
                out.extend_from_slice(&p.v);
                for r in 0..p.e.nrows() {
                    out.extend(p.e.row(r).iter().copied());
                }
            }
            out
        })
    }
}

/// Determinant of a small dense matrix stored row-major in `a` (destroyed).
pub(crate) fn small_det(a: &mut [Complex64], n: usize) -> Complex64 {
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            let mut det = Complex64::new(1.0, 0.0);
            for col in 0..n {
                let pivot = (col..n)
                    .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                    .unwrap();
                if a[pivot * n + col] == Complex64::new(0.0, 0.0) {
                    return Complex64::new(0.0, 0.0);
                }
                if pivot != col {
                    for c in 0..n {
                        a.swap(pivot * n + c, col * n + c);
                    }
                    det = -det;
                }
                let p = a[col * n + col];
                det *= p;
                for r in col + 1..n {
                    let f = a[r * n + col] / p;
                    for c in col..n {
                        let sub = f * a[col * n + c];
                        a[r * n + c] -= sub;
                    }
                }
            }
            det
        }
    }
}

/// Maximal minors of `e` on every lexicographic column subset.
pub fn plucker_coords(e: &CMatrix) -> Result<Vec<Complex64>> {
    let rows = e.nrows();
    if rows == 0 || rows > e.ncols() {
        return Err(invalid("Plücker coordinates need 1 <= rows <= columns"));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); rows * rows];
    Ok(subsets_lex(e.ncols(), rows)
        .iter()
        .map(|cols| {
            for r in 0..rows {
                for (q, &c) in cols.iter().enumerate() {
                    buf[r * rows + q] = e[(r, c)];
                }
            }
            small_det(&mut buf, rows)
        })
        .collect())
}

fn sample_params<R: Rng + ?Sized>(spec: &SecantSpec, rng: &mut R) -> Result<RankOneParams> {
    for _ in 0..MAX_RESAMPLES {
        let p = RankOneParams {
            v: linalg::gaussian_vec(rng, spec.v_dim()),
            e: linalg::gaussian_matrix(rng, spec.wedge_order(), spec.w_dim()),
        };
        if p.is_generic() {
            return Ok(p);
        }
    }
    Err(Error::DegenerateSample {
        attempts: MAX_RESAMPLES,
    })
}

/// A random point `v ⊗ Δ(E)` with complex Gaussian `v`, `E`.
pub fn sample_rank_one<R: Rng + ?Sized>(spec: &SecantSpec, rng: &mut R) -> Result<TensorPoint> {
    let p = sample_params(spec, rng)?;
    TensorPoint::from_params(spec.with_s(1), vec![p])
}

/// Sum of `spec.s` independent rank-one samples.
pub fn sample_secant_point<R: Rng + ?Sized>(spec: &SecantSpec, rng: &mut R) -> Result<TensorPoint> {
    let params = (0..spec.s)
        .map(|_| sample_params(spec, rng))
        .collect::<Result<Vec<_>>>()?;
    TensorPoint::from_params(*spec, params)
}

/// A generic point of the ambient space (independent Gaussian coordinates).
pub fn sample_ambient_point<R: Rng + ?Sized>(spec: &SecantSpec, rng: &mut R) -> TensorPoint {
    TensorPoint {
        spec: *spec,
        coords: linalg::gaussian_vec(rng, spec.num_coords()),
        params: None,
    }
}

/// The map from stacked summand parameters to ambient coordinates.
pub trait Parametrization: Send + Sync {
    fn num_params(&self) -> usize;
    fn num_coords(&self) -> usize;
    fn eval(&self, params: &[Complex64], out: &mut [Complex64]);
    /// Writes the `num_coords × num_params` Jacobian into `out`.
    fn jacobian(&self, params: &[Complex64], out: &mut CMatrix);
    fn sample_params(&self, rng: &mut dyn RngCore) -> Result<Vec<Complex64>>;
    fn spec(&self) -> Option<SecantSpec> {
        None
    }
    /// Parameters that may be frozen at generic values without shrinking the
    /// image locally: a gauge for a group acting on the fibres.
    fn gauge_parameters(&self) -> Vec<usize> {
        Vec::new()
    }
}

/// The secant parametrization `(v^t, E^t)_t ↦ Σ_t v^t ⊗ Δ(E^t)`.
#[derive(Debug, Clone)]
pub struct SecantParametrization {
    spec: SecantSpec,
    subsets: Vec<Vec<usize>>,
}

impl SecantParametrization {
    pub fn new(spec: SecantSpec) -> Result<Self> {
        spec.validate()?;
        Ok(SecantParametrization {
            spec,
            subsets: subsets_lex(spec.w_dim(), spec.wedge_order()),
        })
    }

    fn minors(&self, e: &[Complex64], buf: &mut [Complex64], out: &mut [Complex64]) {
        let rows = self.spec.wedge_order();
        let w = self.spec.w_dim();
        for (slot, cols) in out.iter_mut().zip(&self.subsets) {
            for r in 0..rows {
                for (q, &c) in cols.iter().enumerate() {
                    buf[r * rows + q] = e[r * w + c];
                }
            }
            *slot = small_det(buf, rows);
        }
    }

    /// Cofactor of entry `(r, cols[q])` inside the minor on `cols`.
    fn cofactor(&self, e: &[Complex64], cols: &[usize], r: usize, q: usize, buf: &mut [Complex64]) -> Complex64 {
        let rows = self.spec.wedge_order();
        let w = self.spec.w_dim();
        let n = rows - 1;
        let mut idx = 0;
        for rr in (0..rows).filter(|&x| x != r) {
            for (qq, &c) in cols.iter().enumerate() {
                if qq != q {
                    buf[idx] = e[rr * w + c];
                    idx += 1;
                }
            }
        }
        let d = small_det(&mut buf[..n * n], n);
        if (r + q) % 2 == 0 {
            d
        } else {
            -d
        }
    }
}

impl Parametrization for SecantParametrization {
    fn num_params(&self) -> usize {
        self.spec.num_params()
    }

    fn num_coords(&self) -> usize {
        self.spec.num_coords()
    }

    fn eval(&self, params: &[Complex64], out: &mut [Complex64]) {
        let spec = &self.spec;
        let per = spec.params_per_term();
        let wd = spec.wedge_dim();
        let rows = spec.wedge_order();
        let mut buf = vec![Complex64::new(0.0, 0.0); rows * rows];
        let mut minors = vec![Complex64::new(0.0, 0.0); wd];
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for term in params.chunks(per) {
            let (v, e) = term.split_at(spec.v_dim());
            self.minors(e, &mut buf, &mut minors);
            for (i, vi) in v.iter().enumerate() {
                for (j, d) in minors.iter().enumerate() {
                    out[i * wd + j] += vi * d;
                }
            }
        }
    }

    /// The leading `(k+1) × (k+1)` block of every `E`, which fixes the
    /// `GL(k+1)` action `E ↦ gE` (compensated on `v` by `det g`).
    fn gauge_parameters(&self) -> Vec<usize> {
        let spec = &self.spec;
        let (rows, w) = (spec.wedge_order(), spec.w_dim());
        (0..spec.s)
            .flat_map(|i| {
                let base = i * spec.params_per_term() + spec.v_dim();
                (0..rows).flat_map(move |r| (0..rows).map(move |c| base + r * w + c))
            })
            .collect()
    }

    fn jacobian(&self, params: &[Complex64], out: &mut CMatrix) {
        let spec = &self.spec;
        let per = spec.params_per_term();
        let wd = spec.wedge_dim();
        let vd = spec.v_dim();
        let rows = spec.wedge_order();
        let w = spec.w_dim();
        let mut buf = vec![Complex64::new(0.0, 0.0); rows * rows];
        let mut minors = vec![Complex64::new(0.0, 0.0); wd];
        out.fill(Complex64::new(0.0, 0.0));
        for (t, term) in params.chunks(per).enumerate() {
            let base = t * per;
            let (v, e) = term.split_at(vd);
            self.minors(e, &mut buf, &mut minors);
            for i in 0..vd {
                for (j, d) in minors.iter().enumerate() {
                    out[(i * wd + j, base + i)] = *d;
                }
            }
            for (j, cols) in self.subsets.iter().enumerate() {
                for (q, &c) in cols.iter().enumerate() {
                    for r in 0..rows {
                        let cof = self.cofactor(e, cols, r, q, &mut buf);
                        let col = base + vd + r * w + c;
                        for (i, vi) in v.iter().enumerate() {
                            out[(i * wd + j, col)] = vi * cof;
                        }
                    }
                }
            }
        }
    }

    fn sample_params(&self, rng: &mut dyn RngCore) -> Result<Vec<Complex64>> {
        let point = sample_secant_point(&self.spec, rng)?;
        Ok(point.param_vector().expect("sampled points carry parameters"))
    }

    fn spec(&self) -> Option<SecantSpec> {
        Some(self.spec)
    }
}

/// Jacobian of the parametrization at the stored summands. Its column space is
/// the sum of the affine tangent spaces at the summands.
pub fn parametrization_jacobian(point: &TensorPoint) -> Result<CMatrix> {
    let p = point
        .param_vector()
        .ok_or_else(|| invalid("point has no parameters"))?;
    let spec = point.spec;
    let map = SecantParametrization::new(spec)?;
    let mut jac = CMatrix::zeros(spec.num_coords(), spec.num_params());
    map.jacobian(&p, &mut jac);
    Ok(jac)
}

/// Affine cone dimension of `σ_s`: the largest Jacobian rank over `trials` random points.
pub fn secant_dimension<R: Rng + ?Sized>(spec: &SecantSpec, rng: &mut R, trials: usize) -> Result<usize> {
    secant_dimension_at(spec, rng, trials, RANK_TOL)
}

/// [`secant_dimension`] with an explicit relative singular-value threshold.
pub fn secant_dimension_at<R: Rng + ?Sized>(spec: &SecantSpec, rng: &mut R, trials: usize, rank_tol: f64) -> Result<usize> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let mut best = 0;
    for _ in 0..trials {
        let point = sample_secant_point(spec, rng)?;
        let jac = parametrization_jacobian(&point)?;
        best = best.max(linalg::numeric_rank(&jac, rank_tol));
    }
    Ok(best)
}

/// Expected projective dimension `min(s·(dim X + 1) − 1, N)`.
pub fn expected_dimension(spec: &SecantSpec) -> usize {
    (spec.s * (spec.variety_dim() + 1) - 1).min(spec.ambient_dim())
}
