//! The subcommands. Each writes its report to `out` and returns the exit code
//! for a completed run: 0, or 2 for inconclusive and lower-bound outcomes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::RngCore;
use secant_core::certify::{certify, CertificateKind, CertifyOptions, CertifyTarget};
use secant_core::flattening::{det_phi, det_vanishes, ell_for, phi_evaluate, phi_matrix};
use secant_core::homotopy::{hypersurface_degree, HomotopyConfig, TrackerOptions};
use secant_core::invariants::{young_symmetrize, young_symmetrize_eval, FillingPair};
use secant_core::linalg::numeric_rank;
use secant_core::tensor::{expected_dimension, sample_ambient_point, sample_rank_one, sample_secant_point, secant_dimension_at};
use secant_core::{SecantSpec, TensorPoint};
use serde::Serialize;

use crate::cli::{Command, FlattenArgs, InvariantArgs, InvariantMode, Sample, SpecArgs};
use crate::config::{ConfigError, Output, RunConfig, Stream, Tier};
use crate::json::{tensor_point_from_str, tensor_point_to_string, CertificateJson, FormatError, SpecJson, WitnessSetJson};
use crate::pattern::phi_pattern_text;
use crate::poly_file::{write_poly_file, Shape};

/// Largest number of unknowns per path (parameters plus line and slice
/// variables) run at the desk tier.
pub const DESK_MAX_UNKNOWNS: usize = 120;
/// The (2,1,6,5) run used as the yardstick in refusal notes.
const REFERENCE_UNKNOWNS: usize = 87;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] secant_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(secant_core::Error::DegreeDrop { .. }) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(FormatError::from)?;
    writeln!(out, "{text}").map_err(stdout_err)
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(stdout_err)?
    };
}

pub fn dispatch(command: &Command, cfg: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    match command {
        Command::Dimension { spec, trials } => dimension(spec, *trials, cfg, out),
        Command::Degree { spec, force } => degree(spec, *force, cfg, out, err),
        Command::Invariant(args) => invariant(args, cfg, out),
        Command::Flatten(args) => flatten(args, cfg, out),
        Command::Certify {
            target,
            line_seed,
            prime_budget,
            no_degree_gap,
        } => {
            let opts = CertifyOptions {
                prime_budget: *prime_budget,
                degree_gap_shortcut: !no_degree_gap,
            };
            certify_cmd(*target, *line_seed, &opts, cfg, out)
        }
    }
}

fn spec_of(args: &SpecArgs) -> Result<SecantSpec> {
    Ok(SecantSpec::new(args.m, args.k, args.n, args.s)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct DimensionReport {
    pub spec: SpecJson,
    pub cone_dim: usize,
    /// Affine dimension expected by a parameter count, capped by the ambient space.
    pub expected_dim: usize,
    pub ambient_coords: usize,
    pub defect: usize,
    pub hypersurface: bool,
}

impl DimensionReport {
    pub fn verdict(&self) -> &'static str {
        if self.hypersurface {
            "hypersurface"
        } else if self.cone_dim == self.ambient_coords {
            "fills the ambient space"
        } else {
            "proper subvariety of codimension at least 2"
        }
    }
}

fn dimension(args: &SpecArgs, trials: usize, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let spec = spec_of(args)?;
    let mut rng = cfg.rng_for(Stream::Dimension);
    let cone_dim = secant_dimension_at(&spec, &mut rng, trials, cfg.tol_rank)?;
    let expected_dim = expected_dimension(&spec) + 1;
    let report = DimensionReport {
        spec: spec.into(),
        cone_dim,
        expected_dim,
        ambient_coords: spec.num_coords(),
        defect: expected_dim.saturating_sub(cone_dim),
        hypersurface: cone_dim + 1 == spec.num_coords(),
    };
    if cfg.output == Output::Json {
        emit_json(out, &report)?;
    } else {
        say!(out, "cone dimension {}", report.cone_dim);
        say!(out, "expected {}", report.expected_dim);
        say!(out, "ambient {}", report.ambient_coords);
        say!(out, "defect {}", report.defect);
        say!(out, "verdict {}", report.verdict());
    }
    Ok(0)
}

/// Unknowns per tracked path: summand parameters, the line parameter and the scale.
pub fn path_unknowns(spec: &SecantSpec) -> usize {
    spec.num_params() + 2
}

fn degree(args: &SpecArgs, force: bool, cfg: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let spec = spec_of(args)?;
    let unknowns = path_unknowns(&spec);
    if cfg.tier == Tier::Desk && unknowns > DESK_MAX_UNKNOWNS {
        let ratio = (unknowns as f64 / REFERENCE_UNKNOWNS as f64).powi(3);
        return Err(CliError::Usage(format!(
            "refused at the desk tier: {unknowns} unknowns per path (limit {DESK_MAX_UNKNOWNS}); \
             estimated cost per path about {ratio:.1}x that of (2,1,6,5), times a degree not known in advance; \
             rerun with --tier extended"
        )));
    }
    let config = HomotopyConfig {
        tracker: TrackerOptions {
            newton_tol: cfg.tol_newton,
            ..TrackerOptions::default()
        },
        dedup_tol: cfg.tol_dedup,
        loop_budget: cfg.loop_budget,
        force,
        seed: cfg.rng_for(Stream::Degree).next_u64(),
    };
    let start = Instant::now();
    let report = hypersurface_degree(&spec, &config)?;
    let elapsed = start.elapsed().as_secs_f64();
    if cfg.output == Output::Json {
        emit_json(out, &WitnessSetJson::new(spec, &report))?;
    } else {
        if report.certified {
            say!(out, "degree {}", report.degree);
        } else {
            say!(out, "degree >= {} (lower bound: trace test not passed)", report.degree);
        }
        say!(out, "loops {}", report.loops);
        match report.trace_residual {
            Some(r) => say!(out, "trace residual {r:.3e}"),
            None => say!(out, "trace residual unavailable"),
        }
        say!(out, "path failures {}", report.path_failures);
    }
    // timing goes to stderr so that stdout is reproducible
    let _ = writeln!(err, "elapsed {elapsed:.2} s");
    Ok(if report.certified { 0 } else { 2 })
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct InvariantFullReport {
    pub degree: usize,
    pub terms: usize,
    pub plus_one: usize,
    pub minus_one: usize,
    /// Raw symmetrizer output divided by the normalized polynomial.
    pub scale: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct InvariantEvalReport {
    pub points: usize,
    /// `secant` or `generic`.
    pub sample: String,
    pub rank: Option<usize>,
    pub vanishing: usize,
    /// `|F(x)|` over the magnitude of its expansion, smallest and largest.
    pub min_relative: f64,
    pub max_relative: f64,
    pub tol_vanish: f64,
}

fn filling_of(args: &InvariantArgs) -> Result<FillingPair> {
    if args.v_rows.is_empty() {
        return Ok(FillingPair::degree_six());
    }
    let v: Vec<&str> = args.v_rows.iter().map(String::as_str).collect();
    let w: Vec<&str> = args.w_rows.iter().map(String::as_str).collect();
    Ok(FillingPair::new(&v, &w)?)
}

fn invariant(args: &InvariantArgs, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let filling = filling_of(args)?;
    let shape = Shape {
        v_dim: filling.v_dim(),
        wedge: filling.wedge(),
        w_dim: filling.w_dim(),
    };
    match args.mode {
        InvariantMode::Full => {
            let inv = young_symmetrize(&filling)?;
            let count = |c: i64| inv.poly.terms().filter(|(_, x)| **x == c.into()).count();
            let report = InvariantFullReport {
                degree: inv.poly.degree().unwrap_or(0),
                terms: inv.poly.len(),
                plus_one: count(1),
                minus_one: count(-1),
                scale: inv.scale.to_string(),
                out: args.out.as_ref().map(|p| p.display().to_string()),
            };
            if let Some(path) = &args.out {
                write_file(path, &write_poly_file(&inv.poly, shape)?)?;
            }
            if cfg.output == Output::Json {
                emit_json(out, &report)?;
            } else {
                say!(out, "degree {}", report.degree);
                say!(out, "terms {}", report.terms);
                say!(out, "coefficient +1: {}", report.plus_one);
                say!(out, "coefficient -1: {}", report.minus_one);
                say!(out, "scale {}", report.scale);
                if let Some(p) = &report.out {
                    say!(out, "written {p}");
                }
            }
        }
        InvariantMode::Eval => {
            if args.points == 0 {
                return Err(CliError::Usage("--points must be positive".into()));
            }
            let generic = args.generic;
            let spec = shape.spec()?.with_s(if generic { 1 } else { args.rank });
            spec.validate()?;
            let mut rng = cfg.rng_for(Stream::Invariant);
            let points: Vec<TensorPoint> = (0..args.points)
                .map(|_| {
                    if generic {
                        Ok(sample_ambient_point(&spec, &mut rng))
                    } else {
                        sample_secant_point(&spec, &mut rng)
                    }
                })
                .collect::<std::result::Result<_, _>>()?;
            let coords: Vec<&[_]> = points.iter().map(|p| p.coords.as_slice()).collect();
            let evals = young_symmetrize_eval(&filling, &coords)?;
            let rel: Vec<f64> = evals.iter().map(|e| e.relative()).collect();
            let report = InvariantEvalReport {
                points: evals.len(),
                sample: if generic { "generic" } else { "secant" }.into(),
                rank: (!generic).then_some(args.rank),
                vanishing: evals.iter().filter(|e| e.vanishes(cfg.tol_vanish)).count(),
                min_relative: rel.iter().copied().fold(f64::INFINITY, f64::min),
                max_relative: rel.iter().copied().fold(0.0, f64::max),
                tol_vanish: cfg.tol_vanish,
            };
            if cfg.output == Output::Json {
                emit_json(out, &report)?;
            } else {
                match report.rank {
                    Some(r) => say!(out, "points {} on sigma_{r}", report.points),
                    None => say!(out, "points {} generic", report.points),
                }
                say!(out, "vanishing {}/{}", report.vanishing, report.points);
                say!(out, "relative value min {:.3e} max {:.3e}", report.min_relative, report.max_relative);
            }
        }
    }
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct FlattenReport {
    pub ell: usize,
    pub size: usize,
    pub rank: usize,
    pub det: [f64; 2],
    /// `|det|` over the product of row norms.
    pub det_relative: f64,
    pub det_vanishes: bool,
}

fn flatten(args: &FlattenArgs, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let t = match &args.input {
        Some(path) => {
            let t = tensor_point_from_str(&read_file(path)?)?;
            let ell = ell_for(&t.spec)?;
            if args.ell.is_some_and(|l| l != ell) {
                return Err(CliError::Usage(format!("--l does not match the input tensor (l = {ell})")));
            }
            t
        }
        None => {
            let ell = args
                .ell
                .ok_or_else(|| CliError::Usage("--l is required unless --input is given".into()))?;
            let spec = phi_matrix(ell).tensor_spec();
            let mut rng = cfg.rng_for(Stream::Flatten);
            match args.sample.unwrap_or(Sample::Generic) {
                Sample::RankOne => sample_rank_one(&spec, &mut rng)?,
                Sample::Secant => sample_secant_point(&SecantSpec::new(spec.m, spec.k, spec.n, args.rank)?, &mut rng)?,
                Sample::Generic => sample_ambient_point(&spec, &mut rng),
                Sample::Zero => TensorPoint::zero(spec),
            }
        }
    };
    let ell = ell_for(&t.spec)?;
    let phi = phi_matrix(ell);
    if let Some(path) = &args.write_tensor {
        write_file(path, &tensor_point_to_string(&t))?;
    }
    if let Some(path) = &args.export_pattern {
        write_file(path, &phi_pattern_text(ell))?;
    }
    let m = phi_evaluate(&phi, &t)?;
    let det = det_phi(&t)?;
    let report = FlattenReport {
        ell,
        size: phi.size(),
        rank: numeric_rank(&m, cfg.tol_rank),
        det: [det.value.re, det.value.im],
        det_relative: det.relative_magnitude(),
        det_vanishes: det_vanishes(&det),
    };
    if cfg.output == Output::Json {
        emit_json(out, &report)?;
    } else {
        say!(out, "size {}", report.size);
        say!(out, "rank {}", report.rank);
        say!(out, "det {:.6e} {:+.6e}i", report.det[0], report.det[1]);
        say!(out, "det relative {:.3e}", report.det_relative);
        say!(out, "det vanishes {}", report.det_vanishes);
    }
    Ok(0)
}

fn certify_cmd(target: CertifyTarget, line_seed: Option<u64>, opts: &CertifyOptions, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let line_seed = line_seed.unwrap_or_else(|| cfg.rng_for(Stream::Certify).next_u64());
    let cert = certify(target, line_seed, opts)?;
    if cfg.output == Output::Json {
        emit_json(out, &CertificateJson::from(&cert))?;
    } else {
        say!(out, "{} {}", cert.input, cert.kind);
        say!(out, "degree {}", cert.degree);
        say!(out, "line seed {}", cert.line_seed);
        if cert.degree_gap {
            say!(out, "settled by degree arithmetic");
        }
        for (p, d) in cert.primes.iter().zip(&cert.degree_multisets) {
            say!(out, "mod {p}: {d:?}");
        }
        if cert.kind == CertificateKind::Inconclusive && !cert.feasible_splits.is_empty() {
            say!(out, "feasible factor degrees {:?}", cert.feasible_splits);
        }
    }
    Ok(if cert.is_conclusive() { 0 } else { 2 })
}
