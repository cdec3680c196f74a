use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::map_in_order;
use super::system::{build_sliced_system, Line, Segment, SlicedSystem, WitnessPoint};
use super::tracker::{track_path, TrackerOptions};
use crate::error::{Error, Result};
use crate::linalg::{gaussian_vec, norm, unit_complex};
use crate::tensor::{Parametrization, SecantParametrization};
use crate::SecantSpec;

pub const DEFAULT_DEDUP_TOL: f64 = 1e-6;
pub const DEFAULT_LOOP_BUDGET: usize = 50;
pub const TRACE_TOL: f64 = 1e-6;

/// Points of `H ∩ L`, distinct as points of the image.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSet {
    pub line: Line,
    pub points: Vec<WitnessPoint>,
    pub seed: u64,
    pub dedup_tol: f64,
}

fn same_image(x: &[Complex64], y: &[Complex64], tol: f64) -> bool {
    let diff: Vec<Complex64> = x.iter().zip(y).map(|(x, y)| x - y).collect();
    norm(&diff) <= tol * norm(x).max(1.0)
}

impl WitnessSet {
    pub fn new(line: Line, seed: u64, dedup_tol: f64) -> Self {
        WitnessSet {
            line,
            points: Vec::new(),
            seed,
            dedup_tol,
        }
    }

    pub fn degree(&self) -> usize {
        self.points.len()
    }

    pub fn contains_image(&self, image: &[Complex64]) -> bool {
        self.points.iter().any(|p| same_image(&p.image, image, self.dedup_tol))
    }

    /// Adds `point` unless its image is already present; returns whether it was new.
    pub fn insert(&mut self, point: WitnessPoint) -> bool {
        if self.contains_image(&point.image) {
            return false;
        }
        self.points.push(point);
        true
    }

    /// The witness set restricted to the given point indices.
    pub fn subset(&self, indices: &[usize]) -> WitnessSet {
        WitnessSet {
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            ..self.clone()
        }
    }

    /// Largest relative distance of an image from the line, and largest system residual.
    pub fn diagnostics(&self, system: &SlicedSystem) -> (f64, f64) {
        self.points.iter().fold((0.0f64, 0.0f64), |(d, r), p| {
            (
                d.max(self.line.relative_distance(&p.image)),
                r.max(system.point_residual(p, &self.line)),
            )
        })
    }

    /// Image points in a canonical order (lexicographic on `(re, im)`).
    pub fn sorted_images(&self) -> Vec<Vec<Complex64>> {
        let mut images: Vec<Vec<Complex64>> = self.points.iter().map(|p| p.image.clone()).collect();
        images.sort_by(|x, y| {
            x.iter()
                .zip(y)
                .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        });
        images
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoopReport {
    pub new_points: usize,
    pub failures: usize,
}

fn track_legs(system: &SlicedSystem, legs: &[Segment], start: &WitnessPoint, opts: &TrackerOptions) -> Option<WitnessPoint> {
    let mut point = start.clone();
    for leg in legs {
        match track_path(system, leg, &point, opts) {
            Ok(r) if r.succeeded() => point = r.point,
            _ => return None,
        }
    }
    Some(point)
}

/// Tracks every witness point around a random loop `L → L1 → L2 → L` and merges
/// the endpoints. Failed paths are dropped and counted.
pub fn monodromy_loop(
    system: &SlicedSystem,
    witness: &mut WitnessSet,
    rng: &mut dyn RngCore,
    opts: &TrackerOptions,
) -> Result<LoopReport> {
    if witness.points.is_empty() {
        return Err(crate::error::invalid("witness set is empty"));
    }
    let (nc, chart) = (system.num_coords(), system.chart());
    let l1 = Line::random_in_chart(rng, nc, chart);
    let l2 = Line::random_in_chart(rng, nc, chart);
    let legs = [
        Segment::new(witness.line.clone(), l1.clone(), unit_complex(rng)),
        Segment::new(l1, l2.clone(), unit_complex(rng)),
        Segment::new(l2, witness.line.clone(), unit_complex(rng)),
    ];
    let ends = map_in_order(&witness.points, |p| track_legs(system, &legs, p, opts));
    let mut report = LoopReport::default();
    let mut successes = 0;
    for end in ends {
        match end {
            Some(p) => {
                successes += 1;
                report.new_points += usize::from(witness.insert(p));
            }
            None => report.failures += 1,
        }
    }
    if successes == 0 {
        return Err(Error::NoSuccessfulPaths);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceOutcome {
    Pass { residual: f64 },
    Fail { residual: f64 },
    /// Some path failed or two paths met; says nothing about completeness.
    Inconclusive { failed_paths: usize },
}

impl TraceOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, TraceOutcome::Pass { .. })
    }

    pub fn residual(&self) -> Option<f64> {
        match self {
            TraceOutcome::Pass { residual } | TraceOutcome::Fail { residual } => Some(*residual),
            TraceOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Images of a witness point on the parallel lines `a ∓ c + span(b)`.
pub type TraceEndpoints = Option<[Vec<Complex64>; 2]>;

/// Offset `c` of the parallel lines `a ± c + span(b)`, with the `γ` of the
/// paths that reach them. Only the endpoint sets enter the trace, so the
/// paths need not stay inside the parallel family.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceDirection {
    pub c: Vec<Complex64>,
    pub gamma: Complex64,
}

impl TraceDirection {
    /// Gaussian offset with no component along the chart coordinate.
    pub fn random(rng: &mut dyn RngCore, nc: usize, chart: usize) -> Self {
        let mut c = gaussian_vec(rng, nc);
        c[chart] = Complex64::new(0.0, 0.0);
        TraceDirection {
            c,
            gamma: unit_complex(rng),
        }
    }
}

/// Tracks each point to the parallel lines at `τ = −1` and `τ = +1`.
pub fn trace_endpoints(
    system: &SlicedSystem,
    line: &Line,
    points: &[WitnessPoint],
    dir: &TraceDirection,
    opts: &TrackerOptions,
) -> Vec<TraceEndpoints> {
    let shifted = |sign: f64| Line {
        a: line.a.iter().zip(&dir.c).map(|(a, c)| a + c * sign).collect(),
        b: line.b.clone(),
    };
    let legs = [
        Segment::new(line.clone(), shifted(-1.0), dir.gamma),
        Segment::new(line.clone(), shifted(1.0), dir.gamma),
    ];
    map_in_order(points, |p| {
        let minus = track_legs(system, &legs[..1], p, opts)?;
        let plus = track_legs(system, &legs[1..], p, opts)?;
        Some([minus.image, plus.image])
    })
}

/// `‖S(−1) + S(+1) − 2·S(0)‖ / ‖S(0)‖` over the given points and endpoints.
pub fn trace_residual(points: &[WitnessPoint], ends: &[TraceEndpoints], dedup_tol: f64) -> TraceOutcome {
    let failed_paths = ends.iter().filter(|e| e.is_none()).count();
    if failed_paths > 0 || ends.len() != points.len() || points.is_empty() {
        return TraceOutcome::Inconclusive { failed_paths };
    }
    let ends: Vec<&[Vec<Complex64>; 2]> = ends.iter().flatten().collect();
    for side in 0..2 {
        for i in 0..ends.len() {
            for j in 0..i {
                if same_image(&ends[i][side], &ends[j][side], dedup_tol) {
                    return TraceOutcome::Inconclusive { failed_paths: 0 };
                }
            }
        }
    }
    let nc = points[0].image.len();
    let mut s0 = alloc::vec![Complex64::new(0.0, 0.0); nc];
    let mut second = s0.clone();
    for (p, e) in points.iter().zip(&ends) {
        for i in 0..nc {
            s0[i] += p.image[i];
            second[i] += e[0][i] + e[1][i] - p.image[i] * 2.0;
        }
    }
    let residual = norm(&second) / norm(&s0);
    if residual < TRACE_TOL {
        TraceOutcome::Pass { residual }
    } else {
        TraceOutcome::Fail { residual }
    }
}

/// The trace test with a fresh random direction `c`.
pub fn trace_test(
    system: &SlicedSystem,
    witness: &WitnessSet,
    rng: &mut dyn RngCore,
    opts: &TrackerOptions,
) -> TraceOutcome {
    let dir = TraceDirection::random(rng, system.num_coords(), system.chart());
    let ends = trace_endpoints(system, &witness.line, &witness.points, &dir, opts);
    trace_residual(&witness.points, &ends, witness.dedup_tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomotopyConfig {
    pub tracker: TrackerOptions,
    pub dedup_tol: f64,
    pub loop_budget: usize,
    /// Skip the hypersurface check (the slice-count assertion still applies).
    pub force: bool,
    pub seed: u64,
}

impl Default for HomotopyConfig {
    fn default() -> Self {
        HomotopyConfig {
            tracker: TrackerOptions::default(),
            dedup_tol: DEFAULT_DEDUP_TOL,
            loop_budget: DEFAULT_LOOP_BUDGET,
            force: false,
            seed: 0,
        }
    }
}

#[derive(Debug)]
pub struct DegreeReport {
    /// `|W|`; only a lower bound unless `certified`.
    pub degree: usize,
    pub certified: bool,
    pub trace_residual: Option<f64>,
    pub loops: usize,
    pub path_failures: usize,
    pub witness: WitnessSet,
    pub system: SlicedSystem,
}

/// Monodromy loops until the trace test passes or the loop budget runs out.
pub fn hypersurface_degree_of(param: Box<dyn Parametrization>, config: &HomotopyConfig) -> Result<DegreeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (system, line, seed_point) = build_sliced_system(param, &mut rng, config.force)?;
    let mut witness = WitnessSet::new(line, config.seed, config.dedup_tol);
    witness.insert(seed_point);
    let (nc, chart) = (system.num_coords(), system.chart());
    let opts = &config.tracker;

    let mut dir = TraceDirection::random(&mut rng, nc, chart);
    let mut ends: Vec<TraceEndpoints> = Vec::new();
    let mut loops = 0;
    let mut path_failures = 0;
    loop {
        let fresh = trace_endpoints(&system, &witness.line, &witness.points[ends.len()..], &dir, opts);
        ends.extend(fresh);
        let outcome = trace_residual(&witness.points, &ends, config.dedup_tol);
        if let TraceOutcome::Pass { residual } = outcome {
            return Ok(DegreeReport {
                degree: witness.degree(),
                certified: true,
                trace_residual: Some(residual),
                loops,
                path_failures,
                witness,
                system,
            });
        }
        if let TraceOutcome::Inconclusive { failed_paths } = outcome {
            path_failures += failed_paths;
            dir = TraceDirection::random(&mut rng, nc, chart);
            ends.clear();
        }
        if loops >= config.loop_budget {
            return Ok(DegreeReport {
                degree: witness.degree(),
                certified: false,
                trace_residual: outcome.residual(),
                loops,
                path_failures,
                witness,
                system,
            });
        }
        match monodromy_loop(&system, &mut witness, &mut rng, opts) {
            Ok(report) => path_failures += report.failures,
            // a loop that lost every path still used up budget
            Err(Error::NoSuccessfulPaths) => path_failures += witness.degree(),
            Err(e) => return Err(e),
        }
        loops += 1;
    }
}

/// Degree of the hypersurface `σ_s` described by `spec`.
pub fn hypersurface_degree(spec: &SecantSpec, config: &HomotopyConfig) -> Result<DegreeReport> {
    hypersurface_degree_of(Box::new(SecantParametrization::new(*spec)?), config)
}
