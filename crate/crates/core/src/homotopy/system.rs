use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::RngCore;

use crate::error::{invalid, Error, Result};
use crate::linalg::{gaussian_matrix, gaussian_vec, norm, numeric_rank, CMatrix, RANK_TOL};
use crate::tensor::{Parametrization, SecantParametrization, MAX_RESAMPLES};
use crate::SecantSpec;

/// The affine line `{a + t·b}`; in the chart used here `a[chart] = 1` and `b[chart] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl Line {
    pub fn random_in_chart(rng: &mut dyn RngCore, coords: usize, chart: usize) -> Line {
        let mut a = gaussian_vec(rng, coords);
        let mut b = gaussian_vec(rng, coords);
        a[chart] = Complex64::new(1.0, 0.0);
        b[chart] = Complex64::new(0.0, 0.0);
        Line { a, b }
    }

    pub fn point(&self, t: Complex64) -> Vec<Complex64> {
        self.a.iter().zip(&self.b).map(|(a, b)| a + b * t).collect()
    }

    /// Distance from `x` to the line, relative to `‖x‖`.
    pub fn relative_distance(&self, x: &[Complex64]) -> f64 {
        let diff: Vec<Complex64> = x.iter().zip(&self.a).map(|(x, a)| x - a).collect();
        let bb: f64 = self.b.iter().map(|z| z.norm_sqr()).sum();
        let t: Complex64 = if bb == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            diff.iter().zip(&self.b).map(|(d, b)| d * b.conj()).sum::<Complex64>() / bb
        };
        let off: Vec<Complex64> = diff.iter().zip(&self.b).map(|(d, b)| d - b * t).collect();
        norm(&off) / norm(x).max(1.0)
    }
}

/// The straight homotopy `(1 − τ)·from + τ·γ·to`, `τ ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub from: Line,
    pub to: Line,
    pub gamma: Complex64,
}

impl Segment {
    pub fn new(from: Line, to: Line, gamma: Complex64) -> Segment {
        Segment { from, to, gamma }
    }

    pub fn at(&self, tau: f64) -> Line {
        let mix = |u: &[Complex64], v: &[Complex64]| -> Vec<Complex64> {
            u.iter().zip(v).map(|(u, v)| u * (1.0 - tau) + v * self.gamma * tau).collect()
        };
        Line {
            a: mix(&self.from.a, &self.to.a),
            b: mix(&self.from.b, &self.to.b),
        }
    }

    /// `d/dτ` of [`Segment::at`].
    pub fn velocity(&self) -> Line {
        let diff = |u: &[Complex64], v: &[Complex64]| -> Vec<Complex64> {
            u.iter().zip(v).map(|(u, v)| v * self.gamma - u).collect()
        };
        Line {
            a: diff(&self.from.a, &self.to.a),
            b: diff(&self.from.b, &self.to.b),
        }
    }
}

/// A point of `H ∩ L` with its parameter-space lift.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPoint {
    pub params: Vec<Complex64>,
    pub t: Complex64,
    pub lambda: Complex64,
    /// `F(params)` scaled into the chart.
    pub image: Vec<Complex64>,
}

/// `F(p) − λ(a + t·b) = 0` together with affine slices through the seed `p0`:
/// gauge parameters are frozen at their seed values and the remaining slices
/// `S·p_free = S·p0_free` are dense random. Unknowns are `(p_free, t, λ)`.
pub struct SlicedSystem {
    param: Box<dyn Parametrization>,
    base: Vec<Complex64>,
    free: Vec<usize>,
    slices: CMatrix,
    slice_rhs: Vec<Complex64>,
    chart: usize,
}

impl core::fmt::Debug for SlicedSystem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SlicedSystem")
            .field("params", &self.num_params())
            .field("coords", &self.num_coords())
            .field("slices", &self.num_slices())
            .field("chart", &self.chart)
            .finish()
    }
}

impl SlicedSystem {
    pub fn parametrization(&self) -> &dyn Parametrization {
        self.param.as_ref()
    }

    pub fn num_params(&self) -> usize {
        self.param.num_params()
    }

    pub fn num_coords(&self) -> usize {
        self.param.num_coords()
    }

    /// All slices, frozen gauge parameters included.
    pub fn num_slices(&self) -> usize {
        self.num_params() - self.free.len() + self.slices.nrows()
    }

    /// `#params + 2`, the size of the square system before eliminating frozen parameters.
    pub fn num_unknowns(&self) -> usize {
        self.num_params() + 2
    }

    pub fn num_equations(&self) -> usize {
        self.num_coords() + self.num_slices()
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub(crate) fn reduced_size(&self) -> usize {
        self.free.len() + 2
    }

    fn full_params(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mut p = self.base.clone();
        for (j, &k) in self.free.iter().enumerate() {
            p[k] = z[j];
        }
        p
    }

    pub(crate) fn unknowns(&self, point: &WitnessPoint) -> Vec<Complex64> {
        let mut z: Vec<Complex64> = self.free.iter().map(|&k| point.params[k]).collect();
        z.push(point.t);
        z.push(point.lambda);
        z
    }

    /// Writes the reduced system value at `z = (p_free, t, λ)` on `line` into
    /// `out`; returns `‖F(p)‖` for scaling.
    pub(crate) fn evaluate(&self, z: &[Complex64], line: &Line, out: &mut DVector<Complex64>) -> f64 {
        let (nf, nc) = (self.free.len(), self.num_coords());
        let (t, lambda) = (z[nf], z[nf + 1]);
        let mut f = vec![Complex64::new(0.0, 0.0); nc];
        self.param.eval(&self.full_params(z), &mut f);
        for i in 0..nc {
            out[i] = f[i] - lambda * (line.a[i] + t * line.b[i]);
        }
        for r in 0..self.slices.nrows() {
            out[nc + r] = (0..nf).map(|c| self.slices[(r, c)] * z[c]).sum::<Complex64>() - self.slice_rhs[r];
        }
        norm(&f)
    }

    pub(crate) fn jacobian(&self, z: &[Complex64], line: &Line, out: &mut CMatrix) {
        let (nf, nc) = (self.free.len(), self.num_coords());
        let (t, lambda) = (z[nf], z[nf + 1]);
        let mut jf = CMatrix::zeros(nc, self.num_params());
        self.param.jacobian(&self.full_params(z), &mut jf);
        out.fill(Complex64::new(0.0, 0.0));
        for (j, &k) in self.free.iter().enumerate() {
            out.view_mut((0, j), (nc, 1)).copy_from(&jf.column(k));
        }
        for i in 0..nc {
            out[(i, nf)] = -lambda * line.b[i];
            out[(i, nf + 1)] = -(line.a[i] + t * line.b[i]);
        }
        out.view_mut((nc, 0), (self.slices.nrows(), nf)).copy_from(&self.slices);
    }

    /// `‖H(z)‖ / (1 + ‖F(p)‖)` for reduced unknowns `z`.
    pub(crate) fn residual(&self, z: &[Complex64], line: &Line) -> f64 {
        let mut out = DVector::zeros(self.reduced_size());
        let scale = self.evaluate(z, line, &mut out);
        out.norm() / (1.0 + scale)
    }

    /// Residual of `point` on `line`, including the frozen parameters.
    pub fn point_residual(&self, point: &WitnessPoint, line: &Line) -> f64 {
        let frozen: f64 = (0..self.num_params())
            .filter(|k| !self.free.contains(k))
            .map(|k| (point.params[k] - self.base[k]).norm_sqr())
            .sum();
        let z = self.unknowns(point);
        let mut out = DVector::zeros(self.reduced_size());
        let scale = self.evaluate(&z, line, &mut out);
        libm::sqrt(out.norm_squared() + frozen) / (1.0 + scale)
    }

    /// Chart-normalized image `F(p) / F(p)[chart]`.
    pub fn image(&self, params: &[Complex64]) -> Vec<Complex64> {
        let mut f = vec![Complex64::new(0.0, 0.0); self.num_coords()];
        self.param.eval(params, &mut f);
        let c = f[self.chart];
        f.iter().map(|x| x / c).collect()
    }

    pub(crate) fn point_from_unknowns(&self, z: &[Complex64]) -> WitnessPoint {
        let nf = self.free.len();
        let params = self.full_params(z);
        WitnessPoint {
            image: self.image(&params),
            params,
            t: z[nf],
            lambda: z[nf + 1],
        }
    }
}

/// Samples a seed `p0`, puts `x0 = F(p0)` in the chart of its largest
/// coordinate, draws a random line through it and squares the system up with
/// `#params + 2 − #coords` slices through `p0`: the parametrization's gauge
/// parameters are frozen, the rest are dense random.
///
/// Without `force`, a parametrization whose image is not a hypersurface is
/// refused. In every case the slice count must equal the fibre dimension
/// measured at the seed.
pub fn build_sliced_system(
    mut param: Box<dyn Parametrization>,
    rng: &mut dyn RngCore,
    force: bool,
) -> Result<(SlicedSystem, Line, WitnessPoint)> {
    let (np, nc) = (param.num_params(), param.num_coords());
    if np + 2 <= nc {
        let mut jf = CMatrix::zeros(nc, np);
        param.jacobian(&param.sample_params(rng)?, &mut jf);
        return Err(Error::NotHypersurface {
            cone_dim: numeric_rank(&jf, RANK_TOL),
            coords: nc,
        });
    }
    let num_slices = np + 2 - nc;
    let mut gauge = param.gauge_parameters();
    if gauge.len() > num_slices {
        gauge.clear();
    }
    let free: Vec<usize> = (0..np).filter(|k| !gauge.contains(k)).collect();
    let dense = num_slices - gauge.len();
    for _ in 0..MAX_RESAMPLES {
        let p0 = param.sample_params(rng)?;
        let mut x0 = vec![Complex64::new(0.0, 0.0); nc];
        param.eval(&p0, &mut x0);
        let chart = (0..nc)
            .max_by(|&i, &j| x0[i].norm().total_cmp(&x0[j].norm()))
            .ok_or_else(|| invalid("parametrization has no coordinates"))?;
        let lambda = x0[chart];
        if lambda.norm() == 0.0 {
            continue;
        }
        let a: Vec<Complex64> = x0.iter().map(|x| x / lambda).collect();
        let mut b = gaussian_vec(rng, nc);
        b[chart] = Complex64::new(0.0, 0.0);
        let line = Line { a, b };

        let mut jf = CMatrix::zeros(nc, np);
        param.jacobian(&p0, &mut jf);
        let cone_dim = numeric_rank(&jf, RANK_TOL);
        if !force && cone_dim + 1 != nc {
            return Err(Error::NotHypersurface { cone_dim, coords: nc });
        }
        let mut top = CMatrix::zeros(nc, np + 2);
        top.view_mut((0, 0), (nc, np)).copy_from(&jf);
        for i in 0..nc {
            top[(i, np)] = -lambda * line.b[i];
            top[(i, np + 1)] = -line.a[i];
        }
        let fiber_dim = np + 2 - numeric_rank(&top, RANK_TOL);
        if fiber_dim != num_slices {
            return Err(Error::SquaringMismatch {
                slices: num_slices,
                fiber_dim,
            });
        }

        let slices = gaussian_matrix(rng, dense, free.len());
        let z0: Vec<Complex64> = free.iter().map(|&k| p0[k]).collect();
        let slice_rhs: Vec<Complex64> = (0..dense)
            .map(|r| (0..free.len()).map(|c| slices[(r, c)] * z0[c]).sum())
            .collect();
        let system = SlicedSystem {
            param,
            base: p0,
            free: free.clone(),
            slices,
            slice_rhs,
            chart,
        };
        let mut z = z0;
        z.push(Complex64::new(0.0, 0.0));
        z.push(lambda);
        let n = system.reduced_size();
        let mut square = CMatrix::zeros(n, n);
        system.jacobian(&z, &line, &mut square);
        if numeric_rank(&square, RANK_TOL) < n {
            // a degenerate seed or gauge; draw again
            param = system.param;
            continue;
        }
        let seed = system.point_from_unknowns(&z);
        return Ok((system, line, seed));
    }
    Err(Error::DegenerateSample {
        attempts: MAX_RESAMPLES,
    })
}

/// [`build_sliced_system`] for the secant parametrization of `spec`.
pub fn build_secant_system(
    spec: &SecantSpec,
    rng: &mut dyn RngCore,
    force: bool,
) -> Result<(SlicedSystem, Line, WitnessPoint)> {
    build_sliced_system(Box::new(SecantParametrization::new(*spec)?), rng, force)
}
