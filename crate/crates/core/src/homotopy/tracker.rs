use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use super::system::{Line, Segment, SlicedSystem, WitnessPoint};
use crate::error::{invalid, Error, Result};
use crate::linalg::{numeric_rank, CMatrix};

/// Start points are refused only when their equilibrated Jacobian is singular
/// to this relative tolerance; ill-conditioned points near infinity still track.
const START_RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Chord iterations allowed per corrector step.
    pub corrector_iterations: usize,
    /// Relative size of the last Newton update that counts as converged.
    pub corrector_tol: f64,
    /// Endpoint tolerance for both the final Newton update and the residual.
    pub newton_tol: f64,
    pub final_iterations: usize,
    /// Number of predictor–corrector steps after which the path is abandoned.
    pub max_steps: usize,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        TrackerOptions {
            initial_step: 0.1,
            min_step: 1e-7,
            max_step: 0.1,
            corrector_iterations: 4,
            corrector_tol: 1e-6,
            newton_tol: 1e-10,
            final_iterations: 40,
            max_steps: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStatus {
    Success,
    StepTooSmall,
    StepBudgetExhausted,
    EndpointNotConverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    /// Last point reached, on the target line when the path succeeded.
    pub point: WitnessPoint,
    pub status: PathStatus,
    pub steps: usize,
    pub residual: f64,
}

impl PathResult {
    pub fn succeeded(&self) -> bool {
        self.status == PathStatus::Success
    }
}

fn vec_norm(z: &[Complex64]) -> f64 {
    libm::sqrt(z.iter().map(|x| x.norm_sqr()).sum::<f64>())
}

type Lu = nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>;

struct Workspace<'a> {
    system: &'a SlicedSystem,
    jac: CMatrix,
    rhs: DVector<Complex64>,
}

impl Workspace<'_> {
    fn factor(&mut self, z: &[Complex64], line: &Line) -> Lu {
        self.system.jacobian(z, line, &mut self.jac);
        self.jac.clone().lu()
    }

    /// `z ← z − J⁻¹ H(z)` with the given factorization; returns the update norm.
    fn update(&mut self, lu: &Lu, z: &mut [Complex64], line: &Line) -> Option<f64> {
        self.system.evaluate(z, line, &mut self.rhs);
        let dz = lu.solve(&self.rhs)?;
        if dz.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return None;
        }
        z.iter_mut().zip(dz.iter()).for_each(|(z, d)| *z -= d);
        Some(dz.norm())
    }

    /// Full Newton update.
    fn newton_step(&mut self, z: &mut [Complex64], line: &Line) -> Option<f64> {
        let lu = self.factor(z, line);
        self.update(&lu, z, line)
    }

    /// Chord iterations with the Jacobian frozen at the predicted point. Fails
    /// unless updates contract by at least half each time.
    fn correct(&mut self, lu: &Lu, z: &mut [Complex64], line: &Line, iterations: usize, tol: f64) -> bool {
        let mut last = f64::INFINITY;
        for _ in 0..iterations {
            let Some(d) = self.update(lu, z, line) else {
                return false;
            };
            if d <= tol * (1.0 + vec_norm(z)) {
                return true;
            }
            if d > 0.5 * last {
                return false;
            }
            last = d;
        }
        false
    }

    /// Euler tangent `dz/dτ = −J⁻¹ ∂H/∂τ`.
    fn tangent(&mut self, lu: &Lu, z: &[Complex64], velocity: &Line) -> Option<DVector<Complex64>> {
        let nc = self.system.num_coords();
        let nf = self.system.reduced_size() - 2;
        let (t, lambda) = (z[nf], z[nf + 1]);
        self.rhs.fill(Complex64::new(0.0, 0.0));
        for i in 0..nc {
            self.rhs[i] = lambda * (velocity.a[i] + t * velocity.b[i]);
        }
        lu.solve(&self.rhs)
    }
}

/// Tracks `start` (a solution on `segment.from`) to `segment.to`. The returned
/// point is expressed relative to `segment.to` itself, so `λ` absorbs `γ`.
/// Path failures are reported in the status; only a singular start or a start
/// that is not a solution is an error.
/// Columns scaled to unit norm, so that large but regular parameters do not
/// read as rank loss.
fn column_equilibrated(m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    for mut col in out.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= Complex64::new(norm, 0.0);
        }
    }
    out
}

pub fn track_path(
    system: &SlicedSystem,
    segment: &Segment,
    start: &WitnessPoint,
    opts: &TrackerOptions,
) -> Result<PathResult> {
    let n = system.reduced_size();
    let mut ws = Workspace {
        system,
        jac: CMatrix::zeros(n, n),
        rhs: DVector::zeros(n),
    };
    let mut z: Vec<Complex64> = system.unknowns(start);
    if system.residual(&z, &segment.from) > opts.newton_tol {
        for _ in 0..opts.final_iterations {
            match ws.newton_step(&mut z, &segment.from) {
                Some(d) if d > opts.newton_tol * (1.0 + vec_norm(&z)) => {}
                _ => break,
            }
        }
        if system.residual(&z, &segment.from) > opts.newton_tol {
            return Err(invalid("start point does not solve the start system"));
        }
    }
    system.jacobian(&z, &segment.from, &mut ws.jac);
    if numeric_rank(&column_equilibrated(&ws.jac), START_RANK_TOL) < n {
        return Err(Error::SingularJacobian);
    }

    let velocity = segment.velocity();
    let mut tau = 0.0f64;
    let mut h = opts.initial_step.min(opts.max_step);
    let mut streak = 0;
    let mut steps = 0;
    // factorization of the Jacobian at (or, after a step, very near) the current point
    let mut current: Option<Lu> = None;
    let fail = |z: &[Complex64], status, steps, tau: f64| {
        let line = segment.at(tau);
        Ok(PathResult {
            point: system.point_from_unknowns(z),
            status,
            steps,
            residual: system.residual(z, &line),
        })
    };
    while tau < 1.0 {
        if steps >= opts.max_steps {
            return fail(&z, PathStatus::StepBudgetExhausted, steps, tau);
        }
        steps += 1;
        let last = h >= 1.0 - tau;
        let step = if last { 1.0 - tau } else { h };
        let lu = match current.take() {
            Some(lu) => lu,
            None => ws.factor(&z, &segment.at(tau)),
        };
        let ok = match ws.tangent(&lu, &z, &velocity) {
            Some(dz) => {
                let mut trial: Vec<Complex64> = z.iter().zip(dz.iter()).map(|(z, d)| z + d * step).collect();
                let target = segment.at(tau + step);
                let chord = ws.factor(&trial, &target);
                let converged = ws.correct(&chord, &mut trial, &target, opts.corrector_iterations, opts.corrector_tol);
                if converged {
                    z = trial;
                    current = Some(chord);
                } else {
                    current = Some(lu);
                }
                converged
            }
            None => false,
        };
        if ok {
            tau = if last { 1.0 } else { tau + step };
            streak += 1;
            if streak >= 5 {
                h = (2.0 * h).min(opts.max_step);
                streak = 0;
            }
        } else {
            h /= 2.0;
            streak = 0;
            if h < opts.min_step {
                return fail(&z, PathStatus::StepTooSmall, steps, tau);
            }
        }
    }

    let end = segment.at(1.0);
    for _ in 0..opts.final_iterations {
        match ws.newton_step(&mut z, &end) {
            Some(d) if d <= opts.newton_tol * (1.0 + vec_norm(&z)) => break,
            Some(_) => {}
            None => return fail(&z, PathStatus::EndpointNotConverged, steps, 1.0),
        }
    }
    let residual = system.residual(&z, &end);
    let status = if residual <= opts.newton_tol {
        PathStatus::Success
    } else {
        PathStatus::EndpointNotConverged
    };
    // the end line is γ·to; re-express relative to `to`
    let last = z.len() - 1;
    z[last] *= segment.gamma;
    let point = system.point_from_unknowns(&z);
    let residual = system.residual(&z, &segment.to);
    Ok(PathResult {
        point,
        status,
        steps,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::system::build_secant_system;
    use crate::linalg::norm;
    use crate::SecantSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (SlicedSystem, Line, WitnessPoint, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let spec = SecantSpec::new(2, 1, 2, 2).unwrap();
        let (system, line, seed) = build_secant_system(&spec, &mut rng, false).unwrap();
        (system, line, seed, rng)
    }

    #[test]
    fn constant_schedule_returns_start() {
        let (system, line, seed, _) = setup();
        let seg = Segment::new(line.clone(), line, Complex64::new(1.0, 0.0));
        let r = track_path(&system, &seg, &seed, &TrackerOptions::default()).unwrap();
        assert!(r.succeeded());
        let diff: Vec<Complex64> = r.point.image.iter().zip(&seed.image).map(|(a, b)| a - b).collect();
        assert!(norm(&diff) < 1e-10);
        assert!((r.point.t - seed.t).norm() < 1e-10);
    }

    #[test]
    fn segment_between_random_lines() {
        let (system, line, seed, mut rng) = setup();
        for _ in 0..5 {
            let target = Line::random_in_chart(&mut rng, system.num_coords(), system.chart());
            let gamma = crate::linalg::unit_complex(&mut rng);
            let seg = Segment::new(line.clone(), target.clone(), gamma);
            let r = track_path(&system, &seg, &seed, &TrackerOptions::default()).unwrap();
            assert!(r.succeeded(), "{:?}", r.status);
            assert!(r.residual < 1e-10);
            assert!(system.point_residual(&r.point, &target) < 1e-10);
            assert!(target.relative_distance(&r.point.image) < 1e-8);
        }
    }

    #[test]
    fn tiny_step_budget_is_flagged() {
        let (system, line, seed, mut rng) = setup();
        let target = Line::random_in_chart(&mut rng, system.num_coords(), system.chart());
        let seg = Segment::new(line, target, Complex64::new(0.0, 1.0));
        let opts = TrackerOptions {
            max_steps: 2,
            ..TrackerOptions::default()
        };
        let r = track_path(&system, &seg, &seed, &opts).unwrap();
        assert_eq!(r.status, PathStatus::StepBudgetExhausted);
        assert!(!r.succeeded());
    }

    #[test]
    fn start_off_the_system_is_an_error() {
        let (system, line, mut seed, _) = setup();
        seed.t += Complex64::new(1.0, 0.0);
        seed.params.iter_mut().for_each(|p| *p *= 3.0);
        let seg = Segment::new(line.clone(), line, Complex64::new(1.0, 0.0));
        let opts = TrackerOptions {
            final_iterations: 1,
            ..TrackerOptions::default()
        };
        assert!(track_path(&system, &seg, &seed, &opts).is_err());
    }
}
